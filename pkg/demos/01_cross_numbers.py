"""
Cross numbers of small groups
=============================

Compute the little and big cross numbers exactly, compare them with the
closed forms k* and K*, and look at a witness for each.
"""

from crossnum import K_star, big_cross_number, k_star, little_cross_number, parse_group

# a group is written as a list of cyclic orders; it is stored in primary form
G = parse_group("2,2,3")
print("group:", G.text(), " order", G.order, " exponent", G.exponent)

# k(G): the largest cross number of a zero-sum free sequence
k, k_witnesses = little_cross_number(G)
print("k  =", k, "   closed form k* =", k_star(G))
print("   one witness:", k_witnesses[0])

# K(G): the largest cross number of a minimal zero-sum sequence
K, K_witnesses = big_cross_number(G)
print("K  =", K, "   closed form K* =", K_star(G))
print("   one witness:", K_witnesses[0])

# every cross number here is an exact Fraction
for text in ("8", "6", "2,4", "3,3", "30"):
    H = parse_group(text)
    k, _ = little_cross_number(H, witnesses="none")
    K, _ = big_cross_number(H, witnesses="none")
    print(f"{H.text():>12}  k={str(k):>6} (k*={str(k_star(H)):>6})  K={str(K):>6} (K*={K_star(H)})")
