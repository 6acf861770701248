"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are printed at the end of the pytest run (see conftest.py), or
directly with ``python tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from interchange_rings.canonical import (
    canonical_form,
    canonical_triples,
    count_formula,
    diagonalize_pairs,
    homocyclic_type,
    verify_count,
)
from interchange_rings.classify import census_by_order, classify, commuting_idempotent_pairs
from interchange_rings.endo import (
    EndoPair,
    endomorphism_table,
    enumerate_automorphisms,
    enumerate_endomorphisms,
    orbit_labels,
    parse_endomorphism,
)
from interchange_rings.errors import CapExceededError, InterchangeLawError
from interchange_rings.groups import abelian_group_types, groups_of_order, make_abelian_group, parse_group_spec
from interchange_rings.interchange import EssentialTag, build_from_pair, product_tables
from interchange_rings.structures import batch_congruence_ok, matrix_entry_law_violation, matrix_ring, subgroups
from interchange_rings import verify

RESULTS = {}

COUNT_PARAMS = [(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (3, 1, 2), (2, 2, 1), (2, 2, 2)]


def record(number, title, passed, detail, elapsed=None, limit=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.2f}s" + (f" < {limit}s]" if limit else "]")
    RESULTS[number] = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}: {title}: {detail}{timing}"
    return passed


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# --- 1 ---------------------------------------------------------------------

S3_AUTOS = ["(012345)", "(012453)", "(012534)", "(021354)", "(021435)", "(021543)"]
S3_PROPER = ["(000000)", "(000333)", "(000444)", "(000555)"]


def test_criterion_01_s3_endomorphisms():
    s3 = parse_group_spec("S3")
    (endos, autos), dt = timed(lambda: (enumerate_endomorphisms(s3), enumerate_automorphisms(s3)))
    ends = sorted(e.notation for e in endos)
    auts = sorted(a.notation for a in autos)
    ok = ends == sorted(S3_AUTOS + S3_PROPER) and auts == sorted(S3_AUTOS) and dt < 1
    record(1, "End(S3)", ok, f"{len(ends)} endomorphisms, {len(auts)} automorphisms, lists match", dt, 1)
    assert ok


# --- 2 ---------------------------------------------------------------------

def test_criterion_02_s3_classes():
    s3 = parse_group_spec("S3")
    (every, assoc), dt = timed(lambda: (classify(s3, "all"), classify(s3, "associative")))
    ok = every.count == 10 and assoc.count == 6 and dt < 1
    record(2, "S3 classes", ok, f"all={every.count}, associative={assoc.count}", dt, 1)
    assert ok


# --- 3 ---------------------------------------------------------------------

def test_criterion_03_cyclic_six():
    c6 = parse_group_spec("Z6")

    def run():
        rep = classify(c6, "associative")
        table = endomorphism_table(c6)
        labels = orbit_labels(c6, np.arange(len(table)), np.zeros(len(table), dtype=np.int64))
        return rep, len(np.unique(labels)), len(table)

    (rep, classes, size), dt = timed(run)
    c = rep.counts
    ok = (
        rep.count == 16 and c["commutative_associative"] == 4 and c["band"] == 4
        and classes == size and dt < 1
    )
    record(3, "C6", ok, f"associative={rep.count}, comm-assoc={c['commutative_associative']}, "
           f"band={c['band']}, End classes {classes}/{size} singletons", dt, 1)
    assert ok


# --- 4 ---------------------------------------------------------------------

def test_criterion_04_census_order_six():
    census, dt = timed(lambda: census_by_order(6, "associative"))
    ok = census.total == 22 and census.complete and dt < 1
    record(4, "census order 6", ok, f"associative total={census.total} {census.per_group}", dt, 1)
    assert ok


# --- 5 ---------------------------------------------------------------------

@pytest.mark.xfail(strict=True, reason="(e2, e4) and (e4, e2) are conjugate under (0213); see the decisions ledger")
def test_criterion_05_klein_associative():
    v = parse_group_spec("V")
    rep, dt = timed(lambda: classify(v, "associative"))
    tags = {r.props.essential_tag for r in rep.representatives}
    essentials = {EssentialTag.ZERO, EssentialTag.LEFT_ZERO, EssentialTag.RIGHT_ZERO, EssentialTag.ADDITIVE_COPY}
    e2, e4 = parse_endomorphism("(0022)", v), parse_endomorphism("(0101)", v)
    table = endomorphism_table(v)
    a, b = (int(table.index_of(e.map)[0]) for e in (e2, e4))
    labels = orbit_labels(v, np.array([a, b]), np.array([b, a]))
    witnesses_distinct = labels[0] != labels[1]
    count_ok = rep.count == 10 == count_formula(2) and essentials <= tags and dt < 1
    ok = count_ok and witnesses_distinct
    record(5, "V associative", ok,
           f"classes={rep.count}, formula={count_formula(2)}, four essential pairs present={essentials <= tags}, "
           f"(e2,e4)/(e4,e2) non-similar={witnesses_distinct}", dt, 1)
    assert count_ok
    assert witnesses_distinct


# --- 6 and 8 ---------------------------------------------------------------

@pytest.fixture(scope="module")
def count_checks():
    return timed(lambda: [verify_count(p, n, r) for p, n, r in COUNT_PARAMS])


def test_criterion_06_orbit_counts(count_checks):
    checks, dt = count_checks
    ok = all(c.orbits == count_formula(c.r) for c in checks) and dt < 60
    detail = ", ".join(f"Z{c.p ** c.n}^{c.r}:{c.orbits}/{count_formula(c.r)}" for c in checks)
    record(6, "orbit counts vs formula", ok, detail, dt, 60)
    assert ok


def test_criterion_07_tightness():
    z30 = parse_group_spec("Z30")
    (assoc, band), dt = timed(lambda: (classify(z30, "associative"), classify(z30, "band")))
    ok = assoc.count == 64 == 4**3 and band.count == 8 == 2**3 and dt < 120
    record(7, "Z30 tightness", ok, f"associative={assoc.count} (4^3), band={band.count} (2^3)", dt, 120)
    assert ok


def test_criterion_08_commutative_associative(count_checks):
    checks, _ = count_checks
    ok = all(c.commutative_associative == c.r + 1 for c in checks)
    detail = ", ".join(f"Z{c.p ** c.n}^{c.r}:{c.commutative_associative}/{c.r + 1}" for c in checks)
    record(8, "commutative-associative = r+1", ok, detail)
    assert ok


# --- 9 ---------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_09_property_suite():
    results, dt = timed(lambda: [check(g) for g in verify.corpus(8) for check in verify.GROUP_CHECKS])
    bad = sum(r.counterexamples for r in results)
    groups = len({r.subject for r in results})
    ok = bad == 0 and dt < 300
    record(9, "property suite, order <= 8", ok,
           f"{groups} groups, {len(results)} checks, {sum(r.checked for r in results)} pair checks, "
           f"{bad} counterexamples", dt, 300)
    assert ok, "\n".join(r.line() for r in results if not r.passed)


# --- 10 --------------------------------------------------------------------

def abelian_groups_up_to(order):
    return [make_abelian_group(list(t)) for k in range(1, order + 1) for t in abelian_group_types(k)]


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="End is too large to enumerate for Z2^5, Z2^4+Z4 and Z2^6; see the ledger")
def test_criterion_10_diagonalization():
    start = time.perf_counter()
    pairs = failures = 0
    uncovered = []
    injective_groups = []
    for g in abelian_groups_up_to(64):
        try:
            table = endomorphism_table(g)
        except CapExceededError:
            uncovered.append(g.name)
            continue
        first, second = commuting_idempotent_pairs(g)
        batch = diagonalize_pairs(g, table.maps[first], table.maps[second])
        pairs += len(first)
        failures += int(np.count_nonzero(~batch.ok))
        for d in (batch.first, batch.second):
            failures += int(np.count_nonzero((d != 0) & (d != 1)))
        if homocyclic_type(g) is None or len(first) == 0:
            continue
        # canonical form against similarity orbits: constant on each, distinct across them
        labels = orbit_labels(g, first, second)
        triples = canonical_triples(batch.first.astype(np.int64), batch.second.astype(np.int64))
        codes = triples @ np.array([10_000, 100, 1])
        joint = len(np.unique(np.stack([labels, codes], axis=1), axis=0))
        failures += (joint - len(np.unique(labels))) + (joint - len(np.unique(codes)))
        # the single-pair route agrees with the batch on a spread of pairs
        for k in range(0, len(first), max(1, len(first) // 20)):
            pair = EndoPair(table.endomorphism(int(first[k])), table.endomorphism(int(second[k])))
            t = canonical_form(g, pair)
            failures += int((t.s, t.t1, t.t2) != tuple(int(v) for v in triples[k]))
        injective_groups.append(g.name)
    dt = time.perf_counter() - start
    ok = failures == 0 and not uncovered
    record(10, "diagonalization, abelian order <= 64", ok,
           f"{pairs} pairs, {failures} counterexamples, canonical form checked on {len(injective_groups)} "
           f"homocyclic groups, not enumerable: {', '.join(uncovered) or 'none'}", dt)
    assert failures == 0
    assert not uncovered


# --- 11 --------------------------------------------------------------------

@pytest.mark.slow
def test_criterion_11_quotients_and_matrices():
    start = time.perf_counter()
    ideal_checks = quotient_bad = 0
    for k in range(1, 9):
        for g in groups_of_order(k)[0]:
            table = endomorphism_table(g)
            i, j = np.nonzero(table.image_commuting)
            tabs = product_tables(g, table.maps[i], table.maps[j])
            for sub in subgroups(g):
                if not g.is_normal(sub):
                    continue
                closed, well = batch_congruence_ok(g, tabs, sub)
                ideal_checks += int(np.count_nonzero(closed))
                quotient_bad += int(np.count_nonzero(closed & ~well))
    rings = matrix_bad = 0
    for k in range(1, 5):
        for g in groups_of_order(k)[0]:
            table = endomorphism_table(g)
            for a, b in zip(*np.nonzero(table.image_commuting)):
                ring = build_from_pair(g, EndoPair(table.endomorphism(int(a)), table.endomorphism(int(b))))
                rings += 1
                try:
                    matrix_ring(ring, 2)
                except InterchangeLawError:
                    matrix_bad += 1
                    continue
                matrix_bad += matrix_entry_law_violation(ring, 2) is not None
    dt = time.perf_counter() - start
    ok = quotient_bad == 0 and matrix_bad == 0
    record(11, "quotients and 2x2 matrix rings", ok,
           f"{ideal_checks} (ring, ideal) quotients, {quotient_bad} ill-defined; "
           f"M2(R) for {rings} rings of order <= 4, {matrix_bad} law failures", dt)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
