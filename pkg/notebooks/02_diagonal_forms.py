"""
Commuting idempotent pairs and their diagonal forms
===================================================

Associative products come from commuting idempotent pairs.  On a finite
abelian group such a pair can be conjugated to a pair of diagonal maps with
0/1 coefficients, and on Z_{p^n}^r the orbits are counted by (r+1)(r+2)(r+3)/6.
"""

import numpy as np

from interchange_rings import classify, endomorphism_table, parse_group_spec, parse_pair
from interchange_rings.canonical import (
    canonical_form,
    canonicalize_pair,
    count_formula,
    diagonalize_pair,
    homocyclic_group,
    tightness_witness,
)
from interchange_rings.classify import commuting_idempotent_pairs
from interchange_rings.endo import EndoPair, conjugate_pair

v = parse_group_spec("V")
pair = parse_pair("(0022),(0101)", v)
alpha, (d1, d2) = diagonalize_pair(v, pair)
print("alpha =", alpha.notation, " diagonals:", d1.coefficients, d2.coefficients)
print("conjugated pair:", conjugate_pair(alpha, pair).notation)

triple, beta = canonicalize_pair(v, pair)
print("canonical triple (s, t1, t2):", (triple.s, triple.t1, triple.t2))

# swapping the two maps lands in the same orbit on V
print("swapped:", canonical_form(v, parse_pair("(0101),(0022)", v)) == triple)

# the ten associative classes on V
for r in classify(v, "associative").representatives:
    print(f"  {r.pair.notation}  orbit {r.orbit_size}")

# orbit counts against the formula
for p, n, r in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3)]:
    g = homocyclic_group(p, n, r)
    first, second = commuting_idempotent_pairs(g)
    table = endomorphism_table(g)
    triples = {
        (t.s, t.t1, t.t2)
        for t in (canonical_form(g, EndoPair(table.endomorphism(int(i)), table.endomorphism(int(j)))) for i, j in zip(first, second))
    }
    print(f"Z{p**n}^{r}: {len(first)} pairs, {len(triples)} triples, formula {count_formula(r)}")

# the 4^r and 2^r bounds are reached on Z_{2*3*5}
z30 = tightness_witness(3)
counts = classify(z30, "associative").counts
print(z30.name, "associative", counts["associative"], "band", counts["band"], np.array([4, 2]) ** 3)
