"""
Extremal sequences and their primary structure
==============================================

List every minimal zero-sum sequence reaching K(G) and check whether it
splits into pieces living in the primary components plus one cross element.
"""

from crossnum import classify_structure, extremal_minimal_zero_sum, parse_group

G = parse_group("4,3")
extremals = extremal_minimal_zero_sum(G)
print(f"{G.text()}: {len(extremals)} extremal minimal zero-sum sequences")

for U in extremals:
    verdict = classify_structure(U, "minimal")
    cross = verdict.cross_element.coords if verdict.cross_element else None
    parts = {p: str(S) for p, S in verdict.parts.items()}
    print(f"  {U}  k={U.cross_number()}  decomposes={verdict.decomposes}  cross element={cross}")
    print(f"      parts by prime: {parts}")
