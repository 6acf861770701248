"""
Products from pairs of endomorphisms
====================================

Every product satisfying the interchange law over a group comes from a pair
of endomorphisms with commuting images, via x . y = e(x) + n(y).  This
script walks through S3 and the cyclic group of order six.
"""

import numpy as np

from interchange_rings import (
    build_from_pair,
    classify,
    endomorphism_classes,
    enumerate_endomorphisms,
    extract_pair,
    parse_group_spec,
    parse_pair,
)

s3 = parse_group_spec("S3")
print(s3.name, "order", s3.order)
print(s3.add)

# maps are written as the image tuple of 0, 1, ..., 5
endos = enumerate_endomorphisms(s3)
print(len(endos), "endomorphisms:", " ".join(e.notation for e in endos))

# similarity classes: simultaneous conjugation by automorphisms
for cls in endomorphism_classes(s3):
    print("  class", [e.notation for e in cls])

# (000333) has image {0, 3}, abelian, so it commutes with itself
ring = build_from_pair(s3, parse_pair("(000333),(000333)", s3))
print(ring.product)

# the pair comes back out of the table: row 0 and column 0
back = extract_pair(ring.product, s3)
print("recovered:", back.notation)

# the full count up to isomorphism, and the associative part
rep = classify(s3, "all")
print("S3:", rep.count, "classes;", rep.counts["associative"], "associative")
for r in rep.representatives:
    print(f"  {r.pair.notation:<22} orbit {r.orbit_size}  {r.props.essential_tag.value}")

# Z6: every endomorphism is alone in its similarity class
c6 = parse_group_spec("Z6")
rep = classify(c6, "associative")
print("Z6 associative:", rep.count, "bands:", rep.counts["band"])
print("orbit sizes:", sorted({r.orbit_size for r in rep.representatives}))

# spot check one product against the formula directly
pair = rep.representatives[5].pair
x, y = 4, 5
lhs = build_from_pair(c6, pair).product[x, y]
rhs = c6.add[pair.first(x), pair.second(y)]
print("x.y =", lhs, "e(x)+n(y) =", rhs, np.equal(lhs, rhs))
