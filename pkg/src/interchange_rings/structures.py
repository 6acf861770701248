"""Subrings, ideals, quotients and matrix rings of interchange near rings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError, InterchangeLawError, NotIdealError
from .groups import INDEX_DTYPE, FiniteGroup, make_group_from_table, resolve_cap
from .interchange import InterchangeNearRing, extract_pair, interchange_law_violation, sampled_interchange_violation

SUBSET_SEARCH_LIMIT = 16


@dataclass(frozen=True)
class SubsetWitness:
    parent: InterchangeNearRing
    elements: tuple[int, ...]

    @classmethod
    def of(cls, parent: InterchangeNearRing, elements) -> "SubsetWitness":
        elems = tuple(sorted({int(e) for e in elements}))
        if not elems:
            raise ValueError("subset must be nonempty")
        if elems[0] < 0 or elems[-1] >= parent.order:
            raise ValueError(f"elements must lie in [0, {parent.order})")
        return cls(parent, elems)

    @property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m


def _as_witness(ring: InterchangeNearRing, elements) -> SubsetWitness:
    return elements if isinstance(elements, SubsetWitness) else SubsetWitness.of(ring, elements)


def subring_violation(ring: InterchangeNearRing, elements) -> tuple[str, tuple] | None:
    """First failure of closure under ``+``, negation or ``.``, as ``(kind, witness)``."""
    w = _as_witness(ring, elements)
    idx = np.array(w.elements)
    m = w.mask
    g = ring.group
    if not m[0]:
        return ("identity", (0,))
    for kind, table in (("sum", g.add), ("product", ring.product)):
        sub = table[np.ix_(idx, idx)]
        bad = np.argwhere(~m[sub])
        if bad.size:
            a, b = bad[0]
            return (kind, (int(idx[a]), int(idx[b])))
    bad = np.flatnonzero(~m[g.neg[idx]])
    if bad.size:
        return ("negation", (int(idx[bad[0]]),))
    return None


def is_subring(ring: InterchangeNearRing, elements) -> bool:
    return subring_violation(ring, elements) is None


def ideal_violation(ring: InterchangeNearRing, elements) -> tuple[str, tuple] | None:
    """As :func:`subring_violation`, plus ``("normality", (g, i))`` with ``g + i - g`` outside."""
    bad = subring_violation(ring, elements)
    if bad is not None:
        return bad
    w = _as_witness(ring, elements)
    g = ring.group
    idx = np.array(w.elements)
    conj = g.add[g.add[:, idx], g.neg[:, None]]  # [x, k] = x + i_k - x
    hit = np.argwhere(~w.mask[conj])
    if hit.size:
        x, k = hit[0]
        return ("normality", (int(x), int(idx[k])))
    return None


def is_ideal(ring: InterchangeNearRing, elements) -> bool:
    return ideal_violation(ring, elements) is None


def subgroups(group: FiniteGroup) -> list[tuple[int, ...]]:
    """All subgroups as sorted element tuples, sorted by (size, elements)."""
    n = group.order
    seen = {np.array([True] + [False] * (n - 1)).tobytes()}
    frontier = [np.array([0])]
    found = [(0,)]
    while frontier:
        nxt = []
        for sub in frontier:
            inside = np.zeros(n, dtype=bool)
            inside[sub] = True
            for x in np.flatnonzero(~inside):
                h = group.generated_subgroup(list(sub) + [int(x)])
                mask = np.zeros(n, dtype=bool)
                mask[h] = True
                key = mask.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(np.flatnonzero(mask))
                    found.append(tuple(int(v) for v in np.flatnonzero(mask)))
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), s))


def ideals(ring: InterchangeNearRing, method: str = "subgroups") -> list[tuple[int, ...]]:
    """All ideals, sorted by (size, elements).

    ``method="subsets"`` tests every subset containing 0 (orders up to 16);
    ``"subgroups"`` tests only subgroups.
    """
    if method == "subsets":
        n = ring.order
        if n > SUBSET_SEARCH_LIMIT:
            raise CapExceededError(f"subset search is limited to order {SUBSET_SEARCH_LIMIT}")
        out = []
        for bits in range(1 << (n - 1)):
            elems = (0,) + tuple(k + 1 for k in range(n - 1) if bits >> k & 1)
            if is_ideal(ring, elems):
                out.append(elems)
        return sorted(out, key=lambda s: (len(s), s))
    return [h for h in subgroups(ring.group) if is_ideal(ring, h)]


def maximal_ideals(ring: InterchangeNearRing) -> list[tuple[int, ...]]:
    proper = [set(i) for i in ideals(ring) if len(i) < ring.order]
    return [tuple(sorted(i)) for i in proper if not any(i < j for j in proper)]


def is_simple(ring: InterchangeNearRing) -> bool:
    """Nontrivial with only the two trivial ideals."""
    return ring.order > 1 and len(ideals(ring)) == 2


@dataclass(frozen=True)
class Quotient:
    ring: InterchangeNearRing
    cosets: tuple[tuple[int, ...], ...]
    coset_of: np.ndarray  # element -> coset index


def cosets(group: FiniteGroup, elements) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """Cosets ``x + I`` sorted by least member (so the coset of 0 is first)."""
    idx = np.array(sorted({int(e) for e in elements}))
    n = group.order
    label = np.full(n, -1, dtype=np.int64)
    out = []
    for x in range(n):
        if label[x] < 0:
            members = np.unique(group.add[x, idx])
            label[members] = len(out)
            out.append(tuple(int(v) for v in members))
    return tuple(out), label


def congruence_violation(ring: InterchangeNearRing, elements) -> tuple[int, int, int, int] | None:
    """``(x1, y1, x2, y2)`` in the same cosets whose products land in different cosets."""
    _, label = cosets(ring.group, elements)
    reps = np.array([np.flatnonzero(label == c)[0] for c in range(label.max() + 1)])
    t = ring.product
    expect = label[t[np.ix_(reps[label], reps[label])]]
    bad = np.argwhere(label[t] != expect)
    if bad.size:
        x, y = (int(v) for v in bad[0])
        return (x, y, int(reps[label[x]]), int(reps[label[y]]))
    return None


def quotient(ring: InterchangeNearRing, elements) -> Quotient:
    """``R / I`` with coset operations, re-verified over all representatives."""
    bad = ideal_violation(ring, elements)
    if bad is not None:
        raise NotIdealError(f"not an ideal: {bad[0]} fails at {bad[1]}")
    classes, label = cosets(ring.group, elements)
    reps = np.array([c[0] for c in classes])
    add = label[ring.group.add[np.ix_(reps, reps)]]
    prod = label[ring.product[np.ix_(reps, reps)]]
    # Every representative choice must give the same coset.
    if not np.array_equal(label[ring.group.add], add[np.ix_(label, label)]):
        raise NotIdealError("coset addition is not well defined")
    if not np.array_equal(label[ring.product], prod[np.ix_(label, label)]):
        raise NotIdealError("coset product is not well defined")
    qgroup = make_group_from_table(add, name=f"{ring.group.name}/I{len(classes)}")
    pair = extract_pair(prod, qgroup, check="exhaustive")
    return Quotient(InterchangeNearRing(qgroup, prod, pair), classes, label)


def batch_congruence_ok(group: FiniteGroup, tables: np.ndarray, elements) -> tuple[np.ndarray, np.ndarray]:
    """For a stack of product tables and one normal subgroup: (is an ideal, product well defined)."""
    classes, label = cosets(group, elements)
    idx = np.array(sorted({int(e) for e in elements}))
    mask = np.zeros(group.order, dtype=bool)
    mask[idx] = True
    closed = mask[tables[:, idx][:, :, idx]].all(axis=(1, 2))
    reps = np.array([c[0] for c in classes])
    rr = reps[label]
    expect = label[tables[:, rr][:, :, rr]]
    well = (label[tables] == expect).all(axis=(1, 2))
    return closed, well


# --------------------------------------------------------------------------
# matrix rings

def _matrix_digits(order: int, size: int) -> np.ndarray:
    """Entries of every matrix index, entry (0, 0) most significant."""
    codes = np.arange(order**size, dtype=np.int64)
    return np.stack([(codes // order ** (size - 1 - k)) % order for k in range(size)], axis=1)


def matrix_product_entries(ring: InterchangeNearRing, a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Entries of ``A . B = (sum_k a_ik . b_kj)`` for batches of flattened matrices."""
    add, t = ring.group.add, ring.product
    out = np.empty(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n * n,), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            acc = t[a[..., i * n], b[..., j]]
            for k in range(1, n):
                acc = add[acc, t[a[..., i * n + k], b[..., k * n + j]]]
            out[..., i * n + j] = acc
    return out


def matrix_entry_law_violation(ring: InterchangeNearRing, n: int):
    """Exhaustive interchange law for ``M_n(R)`` one output entry at a time.

    Entry ``(i, j)`` of ``(A + C) . (B + D)`` and ``A . B + C . D`` depends only
    on row i of A and C and column j of B and D, so ranging those ``4n``
    entries over R covers every quadruple of matrices.  Returns
    ``(row entries of A, C, column entries of B, D)`` of a failure, or None.
    """
    add, t = ring.group.add, ring.product
    q = ring.order
    for combo_chunk in _chunks(q, 4 * n):
        a, c, b, d = np.split(combo_chunk, 4, axis=1)  # each (m, n)
        lhs = t[add[a[:, 0], c[:, 0]], add[b[:, 0], d[:, 0]]]
        ab = t[a[:, 0], b[:, 0]]
        cd = t[c[:, 0], d[:, 0]]
        for k in range(1, n):
            lhs = add[lhs, t[add[a[:, k], c[:, k]], add[b[:, k], d[:, k]]]]
            ab = add[ab, t[a[:, k], b[:, k]]]
            cd = add[cd, t[c[:, k], d[:, k]]]
        bad = np.flatnonzero(lhs != add[ab, cd])
        if bad.size:
            row = combo_chunk[bad[0]]
            return tuple(tuple(int(v) for v in part) for part in np.split(row, 4))
    return None


def _chunks(q: int, width: int, chunk: int = 1 << 18):
    total = q**width
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield np.stack([(codes // q ** (width - 1 - k)) % q for k in range(width)], axis=1)


def matrix_ring(ring: InterchangeNearRing, n: int, cap: int | None = None, verify: str = "auto") -> InterchangeNearRing:
    """``M_n(R)`` with entrywise sum and ``(A . B)_ij = sum_k a_ik . b_kj``.

    Matrices are encoded in mixed radix over their entries, row-major with
    entry (0, 0) most significant.  ``verify``: ``"table"`` runs the n^4
    quadruple check on the finished table, ``"entries"`` the equivalent
    entrywise check, ``"auto"`` picks the table check up to order 81 and the
    entrywise check above, ``"none"`` skips it.
    """
    if n < 1:
        raise ValueError("matrix size must be at least 1")
    q = ring.order
    size = n * n
    order = q**size
    if order > resolve_cap(cap):
        raise CapExceededError(f"M_{n} over a ring of order {q} has order {order}, above the cap {resolve_cap(cap)}")
    digits = _matrix_digits(q, size)
    weights = q ** np.arange(size - 1, -1, -1, dtype=np.int64)
    add_entries = ring.group.add[digits[:, None, :], digits[None, :, :]]
    add = (add_entries * weights).sum(axis=-1)
    prod = (matrix_product_entries(ring, digits[:, None, :], digits[None, :, :], n) * weights).sum(axis=-1)
    group = make_group_from_table(add, name=f"M{n}({ring.group.name})", cap=cap)
    if verify == "auto":
        verify = "table" if order <= 81 else "entries"
    if verify == "table":
        bad = interchange_law_violation(group, prod)
        if bad is not None:
            raise InterchangeLawError(bad)
    elif verify == "entries":
        bad = matrix_entry_law_violation(ring, n)
        if bad is not None:
            raise InterchangeLawError(bad)
        bad = sampled_interchange_violation(group, prod)
        if bad is not None:
            raise InterchangeLawError(bad)
    pair = extract_pair(prod, group, check="fast" if verify != "none" else "none")
    return InterchangeNearRing(group, prod.astype(INDEX_DTYPE), pair)


def n_fold_violation(ring: InterchangeNearRing, k: int, samples: int = 5000, seed: int = 0):
    """Sampled check of ``x1.y1 + ... + xk.yk = (x1 + ... + xk).(y1 + ... + yk)``."""
    rng = np.random.default_rng(seed)
    add, t = ring.group.add, ring.product
    xs = rng.integers(0, ring.order, size=(k, samples))
    ys = rng.integers(0, ring.order, size=(k, samples))
    lhs = t[xs[0], ys[0]]
    sx, sy = xs[0], ys[0]
    for i in range(1, k):
        lhs = add[lhs, t[xs[i], ys[i]]]
        sx, sy = add[sx, xs[i]], add[sy, ys[i]]
    bad = np.flatnonzero(lhs != t[sx, sy])
    if bad.size:
        b = bad[0]
        return tuple(int(v) for v in xs[:, b]), tuple(int(v) for v in ys[:, b])
    return None


def all_subsets(n: int):
    """Subsets of range(n) containing 0, as tuples (small n only)."""
    for r in range(n):
        for rest in itertools.combinations(range(1, n), r):
            yield (0,) + rest
