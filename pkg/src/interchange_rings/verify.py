"""Whole-group verification sweeps, each comparing two independent routes.

Every check runs over all image-commuting pairs of a group at once, using
stacked product tables, and reports the number of counterexamples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import count_formula, verify_count
from .classify import image_commuting_pairs
from .endo import endomorphism_table, fingerprint, orbit_labels
from .groups import FiniteGroup, groups_of_order
from .interchange import batch_associative, batch_identities_ok, batch_interchange_ok, product_tables

CHUNK = 1 << 15


@dataclass
class CheckResult:
    name: str
    subject: str
    checked: int
    counterexamples: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.counterexamples == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name:<22} {self.subject:<12} checked={self.checked} bad={self.counterexamples}{extra}"


def _pairs(group: FiniteGroup):
    table = endomorphism_table(group)
    first, second = image_commuting_pairs(group)
    return table, first, second


def _chunked(total: int, size: int = CHUNK):
    for a in range(0, total, size):
        yield slice(a, min(total, a + size))


def check_bijection(group: FiniteGroup) -> CheckResult:
    """Pair -> table -> pair round-trips, tables satisfy the law, distinct pairs give distinct tables."""
    table, first, second = _pairs(group)
    maps = table.maps
    bad = 0
    prints = []
    for sl in _chunked(len(first)):
        f, s = maps[first[sl]], maps[second[sl]]
        tabs = product_tables(group, f, s)
        law = batch_interchange_ok(group, tabs)
        back_f, back_s = tabs[:, :, 0], tabs[:, 0, :]
        rebuilt = product_tables(group, back_f, back_s)
        ok = law & (back_f == f).all(axis=1) & (back_s == s).all(axis=1) & (rebuilt == tabs).all(axis=(1, 2))
        bad += int(np.count_nonzero(~ok))
        prints.append(fingerprint(tabs.reshape(len(tabs), -1)))
    fp = np.concatenate(prints) if prints else np.zeros(0, np.uint64)
    collisions = len(fp) - len(np.unique(fp))
    return CheckResult("bijection", group.name, len(first), bad + collisions)


def check_associativity(group: FiniteGroup) -> CheckResult:
    """Commuting-idempotent criterion against exhaustive triple checks."""
    table, first, second = _pairs(group)
    maps = table.maps
    idem = table.idempotent_mask
    bad = 0
    for sl in _chunked(len(first)):
        f, s = maps[first[sl]], maps[second[sl]]
        rows = np.arange(len(f))[:, None]
        structural = idem[first[sl]] & idem[second[sl]] & (f[rows, s] == s[rows, f]).all(axis=1)
        brute = batch_associative(product_tables(group, f, s))
        bad += int(np.count_nonzero(structural != brute))
    return CheckResult("associativity", group.name, len(first), bad)


def check_one_sided(group: FiniteGroup) -> CheckResult:
    """The three one-sided conditions hold exactly when the product is associative."""
    table, first, second = _pairs(group)
    maps = table.maps
    bad = 0
    for sl in _chunked(len(first)):
        tabs = product_tables(group, maps[first[sl]], maps[second[sl]])
        rows = np.arange(len(tabs))[:, None]
        col, row = tabs[:, :, 0], tabs[:, 0, :]
        one_sided = (
            (tabs[rows, col, 0] == col).all(axis=1)
            & (tabs[rows, row, 0] == tabs[rows, 0, col]).all(axis=1)
            & (tabs[rows, 0, row] == row).all(axis=1)
        )
        bad += int(np.count_nonzero(one_sided != batch_associative(tabs)))
    return CheckResult("one-sided", group.name, len(first), bad)


def check_identities(group: FiniteGroup) -> CheckResult:
    table, first, second = _pairs(group)
    maps = table.maps
    bad = 0
    for sl in _chunked(len(first)):
        tabs = product_tables(group, maps[first[sl]], maps[second[sl]])
        bad += int(np.count_nonzero(~batch_identities_ok(group, tabs)))
    return CheckResult("identities", group.name, len(first), bad)


def transport_labels(group: FiniteGroup, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Partition rings by product-preserving automorphisms, working on tables only.

    For every automorphism ``a`` the table ``T'[a x, a y] = a T[x, y]`` is
    located among all tables (candidate found through its row and column at
    0, then compared entry by entry); each ring gets the least index reachable.
    """
    table = endomorphism_table(group)
    maps = table.maps
    n = group.order
    E = len(table)
    codes = first * E + second
    order = np.argsort(codes)
    sorted_codes = codes[order]
    best = np.arange(len(first))
    small = np.uint8 if n <= 256 else np.int32
    everything = product_tables(group, maps[first], maps[second]).reshape(-1, n * n).astype(small)
    for sl in _chunked(len(first), 1 << 14):
        tabs = everything[sl]
        local_best = best[sl].copy()
        for alpha in table.automorphisms:
            inv = np.empty_like(alpha)
            inv[alpha] = np.arange(n)
            moved = alpha.astype(small)[tabs[:, (inv[:, None] * n + inv[None, :]).ravel()]]
            col = table.index_of(moved[:, ::n])
            row = table.index_of(moved[:, :n])
            key = col.astype(np.int64) * E + row
            pos = np.minimum(np.searchsorted(sorted_codes, key), len(codes) - 1)
            idx = order[pos]
            cand = everything[idx]
            found = (col >= 0) & (row >= 0) & (sorted_codes[pos] == key) & (cand == moved).all(axis=1)
            if not found.all():
                raise AssertionError("transported table is not an interchange ring of the family")
            np.minimum(local_best, idx, out=local_best)
        best[sl] = local_best
    return best


def check_similarity(group: FiniteGroup) -> CheckResult:
    """Similarity classes of pairs equal the classes under product-preserving automorphisms."""
    _, first, second = _pairs(group)
    sim = orbit_labels(group, first, second, method="full")
    iso = transport_labels(group, first, second)
    # Two labelings define the same partition iff the pairing of labels is one-to-one.
    joint = len(np.unique(np.stack([sim, iso], axis=1), axis=0))
    bad = (joint - len(np.unique(sim))) + (joint - len(np.unique(iso)))
    return CheckResult("similarity", group.name, len(first), int(bad), f"classes={len(np.unique(sim))}")


def check_counts(params) -> list[CheckResult]:
    out = []
    for p, n, r in params:
        c = verify_count(p, n, r)
        bad = int(c.orbits != count_formula(r)) + int(c.commutative_associative != r + 1)
        out.append(CheckResult("canonical-count", f"Z{p**n}^{r}", c.orbits, bad, f"orbits={c.orbits} formula={c.formula} comm-assoc={c.commutative_associative}"))
    return out


COUNT_PARAMS = ((2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (3, 1, 2), (2, 2, 1), (2, 2, 2))

GROUP_CHECKS = (check_bijection, check_associativity, check_one_sided, check_identities, check_similarity)


def corpus(max_order: int = 8) -> list[FiniteGroup]:
    out = []
    for k in range(1, max_order + 1):
        out.extend(groups_of_order(k)[0])
    return out


def run_suite(max_order: int = 8, count_params=COUNT_PARAMS, progress=None) -> list[CheckResult]:
    results = []
    for g in corpus(max_order):
        for check in GROUP_CHECKS:
            res = check(g)
            results.append(res)
            if progress:
                progress(res)
    for res in check_counts(count_params):
        results.append(res)
        if progress:
            progress(res)
    return results
