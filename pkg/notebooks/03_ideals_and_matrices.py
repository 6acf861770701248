"""
Subrings, ideals, quotients and matrix rings
============================================
"""

from interchange_rings import (
    build_from_pair,
    ideals,
    is_subring,
    matrix_ring,
    parse_group_spec,
    parse_pair,
    quotient,
)
from interchange_rings.structures import subring_violation

v = parse_group_spec("V")
ring = build_from_pair(v, parse_pair("(0220),(0220)", v))   # x . y = e(x + y)
print(ring.product)
print("{0, 2} is a subring:", is_subring(ring, [0, 2]))
print("ideals:", ideals(ring))

q = quotient(ring, [0, 2])
print("cosets:", q.cosets, " quotient pair:", q.ring.pair.notation)

s3 = parse_group_spec("S3")
r = build_from_pair(s3, parse_pair("(021354),(000000)", s3))
print("{0, 1, 2} subring:", is_subring(r, [0, 1, 2]), " {0, 4}:", subring_violation(r, [0, 4]))

# 2x2 matrices over a ring on Z2, checked against the law when built
z2 = parse_group_spec("Z2")
m = matrix_ring(build_from_pair(z2, parse_pair("(01),(01)", z2)), 2)
print(m.group.name, "order", m.order, "pair", m.pair.notation[:20] + "...")
