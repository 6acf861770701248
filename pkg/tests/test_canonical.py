import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interchange_rings.canonical import (
    CanonicalTriple,
    DiagonalEndo,
    bound_4r,
    bound_band,
    canonical_form,
    canonical_triples,
    canonicalize_pair,
    count_formula,
    diagonal_coefficients,
    diagonalize_pair,
    diagonalize_pairs,
    enumerate_canonical_pairs,
    homocyclic_group,
    homocyclic_type,
    is_diagonal,
    order_matching,
    permutation_automorphism,
    summands,
    tightness_witness,
    verify_count,
)
from interchange_rings.classify import classify, commuting_idempotent_pairs
from interchange_rings.endo import EndoPair, conjugate, conjugate_pair, endomorphism_table, orbit_labels, parse_pair
from interchange_rings.errors import CapExceededError, InvalidPairError, NotAbelianError
from interchange_rings.groups import make_abelian_group, parse_group_spec, ppc_decompose


def commuting_idempotents(group):
    table = endomorphism_table(group)
    first, second = commuting_idempotent_pairs(group)
    return table, first, second


def test_formula_values():
    assert [count_formula(r) for r in range(6)] == [1, 4, 10, 20, 35, 56]
    assert [len(enumerate_canonical_pairs(r)) for r in range(6)] == [1, 4, 10, 20, 35, 56]
    assert bound_4r(3) == 64 and bound_band(3) == 8


def test_triples_are_distinct_and_valid():
    for r in range(5):
        triples = enumerate_canonical_pairs(r)
        assert len(set(triples)) == len(triples)
        assert triples == sorted(triples)
    with pytest.raises(ValueError):
        CanonicalTriple(1, 2, 2, 3)  # t1 > s
    with pytest.raises(ValueError):
        CanonicalTriple(2, 1, 1, 3)  # t2 < s


def test_triple_coefficients():
    t = CanonicalTriple(s=3, t1=1, t2=4, r=5)
    assert t.first_coefficients() == (1, 1, 1, 0, 0)
    assert t.second_coefficients() == (1, 0, 0, 1, 0)
    assert t.fixed_first() == (0, 1, 2)
    assert t.fixed_second_within() == (0,)
    assert t.fixed_second_beyond() == (3,)


def test_triple_to_pair_is_commuting_idempotent():
    g = homocyclic_group(3, 1, 2)
    for t in enumerate_canonical_pairs(2):
        pair = t.to_pair(g)
        assert canonical_form(g, pair) == t
    with pytest.raises(ValueError):
        CanonicalTriple(0, 0, 0, 3).to_pair(g)


def test_diagonal_endo():
    std = ppc_decompose(make_abelian_group([4, 2]))
    d = DiagonalEndo((1, 0), std.orders)
    assert d.is_idempotent and d.fixed_indices() == (0,)
    f = d.to_endomorphism(std)
    assert diagonal_coefficients(f, std) == (1, 0)
    assert is_diagonal(f, std)
    with pytest.raises(ValueError):
        DiagonalEndo((1,), std.orders)


def test_non_diagonal_map():
    v = parse_group_spec("V")
    swap = parse_pair("(0213),(0000)", v).first
    assert not is_diagonal(swap)


def test_klein_example_pair():
    v = parse_group_spec("V")
    pair = parse_pair("(0022),(0101)", v)
    alpha, (d1, d2) = diagonalize_pair(v, pair)
    assert conjugate(alpha, pair.first) == d1.to_endomorphism(ppc_decompose(v))
    assert conjugate(alpha, pair.second) == d2.to_endomorphism(ppc_decompose(v))
    parts = summands(pair)
    assert [len(p) for p in parts] == [1, 2, 2, 1]
    triple, beta = canonicalize_pair(v, pair)
    assert triple == CanonicalTriple(1, 0, 2, 2)
    assert conjugate_pair(beta, pair) == triple.to_pair(v)
    swapped = parse_pair("(0101),(0022)", v)
    # swapping the two maps stays in the same similarity orbit, so the triple agrees
    assert canonical_form(v, swapped) == triple


def test_diagonalize_rejects_bad_input():
    with pytest.raises(NotAbelianError):
        diagonalize_pair(parse_group_spec("S3"), parse_pair("(000000),(000000)", parse_group_spec("S3")))
    z4 = parse_group_spec("Z4")
    with pytest.raises(InvalidPairError):
        diagonalize_pair(z4, parse_pair("(0202),(0000)", z4))  # not idempotent
    v = parse_group_spec("V")
    with pytest.raises(InvalidPairError):
        diagonalize_pair(v, parse_pair("(0022),(0011)", v))  # idempotents that do not commute


def test_order_matching():
    assert order_matching((2, 2, 4), [4, 2, 2]) == [1, 2, 0]
    with pytest.raises(ValueError):
        order_matching((2, 4), [2, 2])


def test_permutation_automorphism():
    g = make_abelian_group([2, 2, 4])
    std = ppc_decompose(g)
    swap = [1, 0, 2]
    a = permutation_automorphism(g, swap)
    assert a.is_bijective
    assert a(std.basis[0]) == std.basis[1]
    with pytest.raises(ValueError):
        permutation_automorphism(g, [2, 1, 0])


@pytest.mark.parametrize("spec", ["V", "Z4+Z2", "Z2^3", "Z6+Z2", "Z4^2", "Z3^2", "Z12", "Z8+Z2", "Z9+Z3"])
def test_every_pair_diagonalizes(spec):
    g = parse_group_spec(spec)
    table, first, second = commuting_idempotents(g)
    std = ppc_decompose(g)
    for i, j in zip(first.tolist(), second.tolist()):
        pair = EndoPair(table.endomorphism(i), table.endomorphism(j))
        alpha, (d1, d2) = diagonalize_pair(g, pair)
        assert alpha.is_bijective
        assert set(d1.coefficients) <= {0, 1} and set(d2.coefficients) <= {0, 1}
        assert conjugate_pair(alpha, pair) == EndoPair(d1.to_endomorphism(std), d2.to_endomorphism(std))


@pytest.mark.parametrize("spec", ["V", "Z4+Z2", "Z2^3", "Z6+Z2", "Z3^2", "Z8+Z4"])
def test_batch_matches_single(spec):
    g = parse_group_spec(spec)
    table, first, second = commuting_idempotents(g)
    batch = diagonalize_pairs(g, table.maps[first], table.maps[second])
    assert batch.ok.all()
    for k in range(0, len(first), max(1, len(first) // 25)):
        pair = EndoPair(table.endomorphism(int(first[k])), table.endomorphism(int(second[k])))
        alpha, (d1, d2) = diagonalize_pair(g, pair)
        assert tuple(batch.first[k]) == d1.coefficients and tuple(batch.second[k]) == d2.coefficients
        assert np.array_equal(batch.alphas[k], alpha.map)


def test_batch_flags_bad_pairs():
    g = parse_group_spec("Z4")
    table = endomorphism_table(g)
    maps = table.maps
    batch = diagonalize_pairs(g, maps, maps)
    idem = table.idempotent_mask
    assert np.array_equal(batch.ok, idem)


@pytest.mark.parametrize("p,n,r", [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2), (2, 3, 2)])
def test_canonical_form_is_a_complete_invariant(p, n, r):
    g = homocyclic_group(p, n, r)
    table, first, second = commuting_idempotents(g)
    labels = orbit_labels(g, first, second)
    batch = diagonalize_pairs(g, table.maps[first], table.maps[second])
    triples = canonical_triples(batch.first.astype(np.int64), batch.second.astype(np.int64))
    codes = triples @ np.array([10_000, 100, 1])
    joint = len(np.unique(np.stack([labels, codes], axis=1), axis=0))
    assert joint == len(np.unique(labels)) == len(np.unique(codes)) == count_formula(r)


@pytest.mark.parametrize("p,n,r", [(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (3, 1, 2), (2, 2, 1), (2, 2, 2)])
def test_count_check(p, n, r):
    check = verify_count(p, n, r, canonical=True)
    assert check.ok
    assert check.orbits == count_formula(r)
    assert check.commutative_associative == r + 1


def test_homocyclic_type():
    assert homocyclic_type(parse_group_spec("Z4^3")) == (2, 2, 3)
    assert homocyclic_type(parse_group_spec("Z9")) == (3, 2, 1)
    assert homocyclic_type(parse_group_spec("Z6")) is None
    assert homocyclic_type(parse_group_spec("Z4+Z2")) is None
    assert homocyclic_type(parse_group_spec("S3")) is None
    with pytest.raises(ValueError):
        canonical_form(parse_group_spec("Z6"), parse_pair("(000000),(000000)", parse_group_spec("Z6")))


def test_tightness_witness():
    assert tightness_witness(3).order == 30
    assert tightness_witness(0).order == 1
    with pytest.raises(CapExceededError):
        tightness_witness(5)
    assert tightness_witness(4, cap=210).order == 210


@pytest.mark.parametrize("r", [1, 2, 3])
def test_witness_attains_bounds(r):
    counts = classify(tightness_witness(r), "associative").counts
    assert counts["associative"] == 4**r
    assert counts["band"] == 2**r


@pytest.mark.parametrize("spec", ["Z2", "Z4", "V", "Z6", "Z8", "Z4+Z2", "Z2^3", "Z12", "Z3^2", "Z2^4"])
def test_bounds_hold(spec):
    g = parse_group_spec(spec)
    r = ppc_decompose(g).rank
    counts = classify(g, "associative").counts
    assert counts["associative"] <= 4**r
    assert counts["band"] <= 2**r


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 1, 3), (3, 1, 2), (2, 2, 2), (2, 1, 4)]), st.data())
def test_canonical_form_is_constant_on_orbits(params, data):
    g = homocyclic_group(*params)
    table = endomorphism_table(g)
    first, second = commuting_idempotent_pairs(g)
    k = data.draw(st.integers(0, len(first) - 1))
    pair = EndoPair(table.endomorphism(int(first[k])), table.endomorphism(int(second[k])))
    autos = table.automorphisms
    alpha = table.endomorphism(int(np.flatnonzero(table.automorphism_mask)[data.draw(st.integers(0, len(autos) - 1))]))
    moved = conjugate_pair(alpha, pair)
    assert canonical_form(g, moved) == canonical_form(g, pair)
    triple, beta = canonicalize_pair(g, moved)
    assert conjugate_pair(beta, moved) == triple.to_pair(g)


def test_batch_chunks_agree(monkeypatch):
    from interchange_rings import canonical as can

    g = parse_group_spec("Z4+Z2")
    table, first, second = commuting_idempotents(g)
    whole = diagonalize_pairs(g, table.maps[first], table.maps[second])
    monkeypatch.setattr(can, "BATCH_CHUNK", 7)
    pieces = diagonalize_pairs(g, table.maps[first], table.maps[second])
    for key in ("alphas", "first", "second", "ok"):
        assert np.array_equal(getattr(whole, key), getattr(pieces, key))
