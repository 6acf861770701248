import numpy as np
import pytest

from interchange_rings.classify import (
    FILTERS,
    census_by_order,
    classify,
    commuting_idempotent_pairs,
    image_commuting_pairs,
    pair_properties,
)
from interchange_rings.endo import EndoPair, conjugate_pair, endomorphism_table, parse_endomorphism
from interchange_rings.groups import parse_group_spec
from interchange_rings.interchange import EssentialTag

import oracles


def oracle_counts(spec):
    """Class counts by direct isomorphism search over additive automorphisms."""
    g = parse_group_spec(spec)
    add = g.add.tolist()
    autos = oracles.automorphisms(add)
    tables = [mul for _, _, mul in oracles.all_interchange_products(add)]
    assoc = [t for t in tables if oracles.associative(t)]
    return oracles.isomorphism_classes(add, tables, autos), oracles.isomorphism_classes(add, assoc, autos)


@pytest.mark.parametrize("spec", ["Z2", "Z3", "Z4", "V", "Z5", "Z6", "S3"])
def test_counts_match_direct_search(spec):
    all_classes, assoc_classes = oracle_counts(spec)
    assert classify(parse_group_spec(spec), "all").count == all_classes
    assert classify(parse_group_spec(spec), "associative").count == assoc_classes


def test_s3_census():
    rep = classify(parse_group_spec("S3"), "all")
    assert rep.count == 10 and rep.pair_count == 22
    assert rep.counts["associative"] == 6
    # zero, left zero and right zero; the identity pair is not image-commuting on S3
    assert rep.counts["essential"] == 3
    assert rep.counts["inessential"] == 7
    assert rep.counts["essential4"] == 3


def test_s3_associative_representatives():
    rep = classify(parse_group_spec("S3"), "associative")
    assert rep.count == 6 and rep.domain == "commuting_idempotent"
    pairs = {r.pair.notation for r in rep.representatives}
    expected_singletons = {"(000000),(000000)", "(000000),(012345)", "(012345),(000000)"}
    assert expected_singletons <= pairs
    with_proper = [p for p in pairs if "333" in p or "444" in p or "555" in p]
    assert len(with_proper) == 3


def test_c6():
    c6 = parse_group_spec("Z6")
    rep = classify(c6, "associative")
    assert rep.count == 16
    assert rep.counts["commutative_associative"] == 4
    assert rep.counts["band"] == 4
    assert all(r.orbit_size == 1 for r in rep.representatives)
    band = {r.pair.notation for r in classify(c6, "band").representatives}
    assert band == {
        "(000000),(012345)", "(012345),(000000)", "(030303),(042042)", "(042042),(030303)",
    }
    assert classify(c6, "all").count == 36


def test_klein_associative():
    rep = classify(parse_group_spec("V"), "associative")
    assert rep.count == 10
    tags = [r.props.essential_tag for r in rep.representatives]
    for tag in (EssentialTag.ZERO, EssentialTag.LEFT_ZERO, EssentialTag.RIGHT_ZERO, EssentialTag.ADDITIVE_COPY):
        assert tags.count(tag) == 1
    sizes = sorted(r.orbit_size for r in rep.representatives)
    # 4 pairs of fixed maps, 4 orbits mixing a fixed map with one of six similar idempotents,
    # the six diagonal pairs (e, e), and the six ordered commuting pairs of distinct idempotents
    assert sizes == [1, 1, 1, 1, 6, 6, 6, 6, 6, 6]
    pairs = {r.pair.notation for r in rep.representatives}
    assert "(0022),(0022)" in pairs


def test_klein_swapped_commuting_pair_is_similar():
    v = parse_group_spec("V")
    e2, e4, a2 = (parse_endomorphism(t, v) for t in ("(0022)", "(0101)", "(0213)"))
    # (e2, e4) and (e4, e2) lie in one orbit: a2 swaps them
    assert conjugate_pair(a2, EndoPair(e2, e4)) == EndoPair(e4, e2)


# Counts computed by the library and checked against independent search where feasible.
FROZEN = {
    "Z4": {"all": 16, "associative": 4},
    "V": {"all": 56, "associative": 10},
    "Z6": {"all": 36, "associative": 16},
    "S3": {"all": 10, "associative": 6},
    "D4": {"all": 162, "associative": 9},
    "Q8": {"all": 31, "associative": 3},
    "Z4+Z2": {"all": 304, "associative": 16},
    "Z2^3": {"all": 1744, "associative": 20},
    "Z8": {"all": 64, "associative": 4},
}


@pytest.mark.parametrize("spec", sorted(FROZEN))
def test_frozen_counts(spec):
    g = parse_group_spec(spec)
    for filt, expected in FROZEN[spec].items():
        assert classify(g, filt).count == expected


def test_order_eight_nonabelian_against_direct_search():
    for spec in ("D4", "Q8"):
        g = parse_group_spec(spec)
        add = g.add.tolist()
        autos = oracles.automorphisms(add)
        tables = [mul for _, _, mul in oracles.all_interchange_products(add)]
        assoc = [t for t in tables if oracles.associative(t)]
        assert oracles.isomorphism_classes(add, assoc, autos) == FROZEN[spec]["associative"]


def test_census_order_six():
    c = census_by_order(6, "associative")
    assert c.total == 22 and c.complete
    assert c.per_group == {"Z6": 16, "S3": 6}


def test_census_order_eight():
    c = census_by_order(8, "associative")
    assert c.per_group == {"Z8": 4, "Z4+Z2": 16, "Z2+Z2+Z2": 20, "D4": 9, "Q8": 3}
    assert c.total == 52


def test_partial_census_is_flagged():
    c = census_by_order(12, "band")
    assert not c.complete
    assert census_by_order(12, "band", abelian_only=True).complete


def test_filters_are_consistent():
    g = parse_group_spec("D4")
    reps = {f: classify(g, f) for f in FILTERS}
    total = reps["all"].count
    assert reps["essential"].count + reps["inessential"].count <= total
    assert reps["commutative_associative"].count <= min(reps["commutative"].count, reps["associative"].count)
    assert reps["band"].count <= min(reps["idempotent"].count, reps["associative"].count)
    for f, rep in reps.items():
        assert rep.count == len(rep.representatives)
    with pytest.raises(ValueError):
        classify(g, "simple")


def test_pair_domains():
    g = parse_group_spec("S3")
    i, j = image_commuting_pairs(g)
    assert len(i) == 22
    ci, cj = commuting_idempotent_pairs(g)
    props = pair_properties(g, i, j)
    assert sorted(zip(ci.tolist(), cj.tolist())) == sorted(
        (a, b) for a, b, ok in zip(i.tolist(), j.tolist(), props["associative"]) if ok
    )
    table = endomorphism_table(g)
    assert table.image_commuting[ci, cj].all()


def test_report_dict_is_stable():
    a = classify(parse_group_spec("V"), "all").as_dict()
    b = classify(parse_group_spec("V"), "all").as_dict()
    assert a == b and a["format"] == 1
    notations = [c["pair"] for c in a["classes"]]
    assert len(notations) == 56 == len(set(notations))


def test_orbit_sizes_sum_to_pair_count():
    for spec in ("V", "Z4+Z2", "D4", "Q8"):
        rep = classify(parse_group_spec(spec), "all")
        assert sum(r.orbit_size for r in rep.representatives) == rep.pair_count
        assert rep.pair_count == int(np.count_nonzero(endomorphism_table(parse_group_spec(spec)).image_commuting))
