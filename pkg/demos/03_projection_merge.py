"""
The projection-merge transformation, stage by stage
===================================================

Run the pq merge on a zero-sum free sequence and inspect each stage's
bookkeeping.  The last part shows an input where no block choice can make
the leftover cross number equal to the fractional part of the total.
"""

from crossnum import Sequence, parse_group, projection_merge_pq

G = parse_group("2,9")
S = Sequence.from_coords(G, [(0, 1), (0, 1), (0, 3), (0, 3), (1, 3)])
ledger = projection_merge_pq(S)
print("input :", ledger.input, " k =", ledger.input.cross_number(), " kind:", ledger.kind)
print("output:", ledger.output, " kind preserved:", ledger.output_preserved)

for st in ledger.stages:
    print(f"stage {st.index} (prime {st.prime}): total {st.total}, "
          f"{len(st.blocks)} blocks, leftover cross {st.leftover_cross}")
    print("   count ok", st.count_ok, "| conservation ok", st.conservation_ok,
          "| leftover = fractional part", st.fractional_ok)

# (0,1)(0,1)(1,2) over C2+C3 projects to residues 1,1,2 in C3; the total is 1,
# but the only zero-sum block is {1,2} with cross number 2/3, leaving 1/3
H = parse_group("2,3")
T = Sequence.from_coords(H, [(0, 1), (0, 1), (1, 2)])
st = projection_merge_pq(T).stages[0]
print("\ncounterexample", T, ": total", st.total, "leftover", st.leftover_cross,
      "fractional part", st.total - int(st.total))
