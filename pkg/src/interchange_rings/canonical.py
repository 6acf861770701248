"""Diagonal and canonical forms of commuting idempotent pairs on abelian groups.

Every commuting idempotent pair ``(e1, e2)`` on a finite abelian group ``A``
splits ``A`` into four invariant summands

    e2(e1(A)),  e1(A) & ker e2,  e2(ker e1),  ker e1 & ker e2

on which the pair acts as (1, 1), (1, 0), (0, 1), (0, 0).  Choosing a
prime-power-cyclic basis of each summand and moving the standard basis onto
it conjugates the pair to a diagonal pair with coefficients in {0, 1}.

When all basis elements have the same order (``A = Z_{p^n}^r``) the basis can
be permuted freely, and sorting the four kinds of coordinate into blocks
gives a triple ``(s, t1, t2)``: the first operator fixes ``e_1..e_s``, the
second fixes ``e_1..e_t1`` and ``e_{s+1}..e_t2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .endo import EndoPair, Endomorphism, commutes, conjugate, is_idempotent
from .errors import CapExceededError, InvalidPairError, NotAbelianError
from .groups import FiniteGroup, PpcBasis, first_primes, make_abelian_group, ppc_decompose, resolve_cap, subgroup_ppc_basis


@dataclass(frozen=True)
class DiagonalEndo:
    """``e_i -> d_i e_i`` relative to a fixed ppc-basis."""

    coefficients: tuple[int, ...]
    orders: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) != len(self.orders):
            raise ValueError("one coefficient per basis element")
        object.__setattr__(self, "coefficients", tuple(int(d) % o for d, o in zip(self.coefficients, self.orders)))

    @property
    def is_idempotent(self) -> bool:
        return all(d * d % o == d for d, o in zip(self.coefficients, self.orders))

    def fixed_indices(self) -> tuple[int, ...]:
        """Indices ``i`` (0-based) with ``e_i -> e_i``."""
        return tuple(i for i, d in enumerate(self.coefficients) if d == 1 % self.orders[i])

    def to_endomorphism(self, basis: PpcBasis) -> Endomorphism:
        images = [basis.group.multiple(d, b) for d, b in zip(self.coefficients, basis.basis)]
        return Endomorphism(basis.group, basis.extend(images), validate=False)


def diagonal_coefficients(f: Endomorphism, basis: PpcBasis | None = None) -> tuple[int, ...] | None:
    """``(d_i)`` with ``f(e_i) = d_i e_i`` for every basis element, or None if ``f`` is not diagonal."""
    basis = basis or ppc_decompose(f.group)
    mult = f.group.multiples
    out = []
    for b, o in zip(basis.basis, basis.orders):
        hits = np.flatnonzero(mult[:o, b] == f.map[b])
        if not hits.size:
            return None
        out.append(int(hits[0]))
    return tuple(out)


def is_diagonal(f: Endomorphism, basis: PpcBasis | None = None) -> bool:
    return diagonal_coefficients(f, basis) is not None


def _check_pair(group: FiniteGroup, pair: EndoPair) -> None:
    if not group.abelian:
        raise NotAbelianError(f"{group.name} is not abelian")
    if pair.group != group:
        raise ValueError("pair acts on a different group")
    e1, e2 = pair
    if not (is_idempotent(e1) and is_idempotent(e2)):
        raise InvalidPairError(f"{pair.notation} is not a pair of idempotents")
    if not commutes(e1, e2):
        raise InvalidPairError(f"{pair.notation} does not commute")


def summands(pair: EndoPair) -> list[np.ndarray]:
    """The four invariant summands, as sorted element arrays."""
    e1, e2 = pair
    n = pair.group.order
    im1 = np.unique(e1.map)
    ker1 = np.flatnonzero(e1.map == 0)
    ker2 = np.zeros(n, dtype=bool)
    ker2[e2.map == 0] = True
    return [
        np.unique(e2.map[im1]),
        im1[ker2[im1]],
        np.unique(e2.map[ker1]),
        ker1[ker2[ker1]],
    ]


def order_matching(source: tuple[int, ...], target: list[int]) -> list[int]:
    """Lexicographically least ``pi`` with ``target[pi[i]] == source[i]``."""
    used = [False] * len(target)
    pi = []
    for o in source:
        for j, t in enumerate(target):
            if not used[j] and t == o:
                used[j] = True
                pi.append(j)
                break
        else:
            raise ValueError("summand bases do not match the standard basis orders")
    return pi


def diagonalize_pair(group: FiniteGroup, pair: EndoPair) -> tuple[Endomorphism, tuple[DiagonalEndo, DiagonalEndo]]:
    """An automorphism ``alpha`` and diagonal ``(d1, d2)`` with ``alpha^-1 e_k alpha = d_k``."""
    _check_pair(group, pair)
    std = ppc_decompose(group)
    xs: list[int] = []
    for part in summands(pair):
        xs.extend(subgroup_ppc_basis(group, part))
    orders = [int(group.element_orders[x]) for x in xs]
    pi = order_matching(std.orders, orders)
    images = [xs[j] for j in pi]
    alpha = Endomorphism(group, std.extend(images), validate=False)
    if not alpha.is_bijective:  # pragma: no cover - the summands form a direct sum
        raise RuntimeError("summand bases do not form a basis of the group")
    diagonals = []
    for e in pair:
        coeffs = diagonal_coefficients(conjugate(alpha, e), std)
        if coeffs is None:  # pragma: no cover
            raise RuntimeError("conjugated endomorphism is not diagonal")
        diagonals.append(DiagonalEndo(coeffs, std.orders))
    return alpha, (diagonals[0], diagonals[1])


# --------------------------------------------------------------------------
# canonical triples on Z_{p^n}^r

@dataclass(frozen=True, order=True)
class CanonicalTriple:
    s: int
    t1: int
    t2: int
    r: int

    def __post_init__(self):
        if not 0 <= self.t1 <= self.s <= self.t2 <= self.r:
            raise ValueError(f"need 0 <= t1 <= s <= t2 <= r, got {self.s, self.t1, self.t2, self.r}")

    def first_coefficients(self) -> tuple[int, ...]:
        return tuple(1 if i < self.s else 0 for i in range(self.r))

    def second_coefficients(self) -> tuple[int, ...]:
        return tuple(1 if i < self.t1 or self.s <= i < self.t2 else 0 for i in range(self.r))

    def fixed_first(self) -> tuple[int, ...]:
        """Indices fixed by the first operator (0-based)."""
        return tuple(range(self.s))

    def fixed_second_within(self) -> tuple[int, ...]:
        """Indices below ``s`` fixed by the second operator."""
        return tuple(range(self.t1))

    def fixed_second_beyond(self) -> tuple[int, ...]:
        """Indices from ``s`` on fixed by the second operator."""
        return tuple(range(self.s, self.t2))

    def to_pair(self, group: FiniteGroup) -> EndoPair:
        std = ppc_decompose(group)
        if std.rank != self.r:
            raise ValueError(f"{group.name} has ppc-rank {std.rank}, triple has r={self.r}")
        d1 = DiagonalEndo(self.first_coefficients(), std.orders)
        d2 = DiagonalEndo(self.second_coefficients(), std.orders)
        return EndoPair(d1.to_endomorphism(std), d2.to_endomorphism(std))

    def __str__(self) -> str:
        return f"(s={self.s}, t1={self.t1}, t2={self.t2})"


def homocyclic_type(group: FiniteGroup) -> tuple[int, int, int] | None:
    """``(p, n, r)`` if the group is ``Z_{p^n}^r`` (the trivial group gives (1, 0, 0)), else None."""
    if not group.abelian:
        return None
    std = ppc_decompose(group)
    if std.rank == 0:
        return (1, 0, 0)
    if len(set(std.orders)) != 1:
        return None
    q = std.orders[0]
    p = min(d for d in range(2, q + 1) if q % d == 0)
    return (p, round(math.log(q, p)), std.rank)


def permutation_automorphism(group: FiniteGroup, perm) -> Endomorphism:
    """``e_i -> e_perm[i]``; basis elements swapped must have equal orders."""
    std = ppc_decompose(group)
    perm = [int(k) for k in perm]
    if sorted(perm) != list(range(std.rank)):
        raise ValueError("not a permutation of the basis indices")
    if any(std.orders[i] != std.orders[k] for i, k in enumerate(perm)):
        raise ValueError("permutation mixes basis elements of different orders")
    return Endomorphism(group, std.extend([std.basis[k] for k in perm]), validate=False)


def canonicalize_pair(group: FiniteGroup, pair: EndoPair) -> tuple[CanonicalTriple, Endomorphism]:
    """The canonical triple and an automorphism ``beta`` with ``beta^-1 pair beta`` in canonical form."""
    kind = homocyclic_type(group)
    if kind is None:
        raise ValueError(f"{group.name} is not a direct sum of copies of one cyclic p-group")
    alpha, (d1, d2) = diagonalize_pair(group, pair)
    a = d1.coefficients
    b = d2.coefficients
    r = len(a)
    blocks = [
        [i for i in range(r) if a[i] == 1 and b[i] == 1],
        [i for i in range(r) if a[i] == 1 and b[i] == 0],
        [i for i in range(r) if a[i] == 0 and b[i] == 1],
        [i for i in range(r) if a[i] == 0 and b[i] == 0],
    ]
    s = len(blocks[0]) + len(blocks[1])
    triple = CanonicalTriple(s, len(blocks[0]), s + len(blocks[2]), r)
    slots = [i for block in blocks for i in block]  # slot k receives old coordinate slots[k]
    sigma = permutation_automorphism(group, slots)
    beta = Endomorphism(group, alpha.map[sigma.map], validate=False)
    return triple, beta


def canonical_form(group: FiniteGroup, pair: EndoPair) -> CanonicalTriple:
    return canonicalize_pair(group, pair)[0]


def enumerate_canonical_pairs(r: int) -> list[CanonicalTriple]:
    if r < 0:
        raise ValueError("r must be non-negative")
    return [
        CanonicalTriple(s, t1, t2, r)
        for s in range(r + 1)
        for t1 in range(s + 1)
        for t2 in range(s, r + 1)
    ]


def count_formula(r: int) -> int:
    """Number of canonical triples of rank r: (r+1)(r+2)(r+3)/6."""
    return (r + 1) * (r + 2) * (r + 3) // 6


def bound_4r(r: int) -> int:
    return 4**r


def bound_band(r: int) -> int:
    return 2**r


def tightness_witness(r: int, cap: int | None = None) -> FiniteGroup:
    """The cyclic group whose order is the product of the first r primes."""
    n = math.prod(first_primes(r))
    if n > resolve_cap(cap):
        raise CapExceededError(f"Z{n} exceeds the size cap {resolve_cap(cap)}")
    return make_abelian_group([n], cap=cap) if r else make_abelian_group([], cap=cap)


def homocyclic_group(p: int, n: int, r: int, cap: int | None = None) -> FiniteGroup:
    return make_abelian_group([p**n] * r, cap=cap)


@dataclass
class CountCheck:
    p: int
    n: int
    r: int
    orbits: int
    formula: int
    commutative_associative: int
    triples: int

    @property
    def ok(self) -> bool:
        return self.orbits == self.formula == self.triples and self.commutative_associative == self.r + 1


def verify_count(p: int, n: int, r: int, canonical: bool = False) -> CountCheck:
    """Count similarity orbits of commuting idempotent pairs on ``Z_{p^n}^r``.

    With ``canonical=True`` the number of distinct canonical triples over all
    pairs is reported too (otherwise it is taken from the formula).
    """
    from .classify import commuting_idempotent_pairs
    from .endo import endomorphism_table, orbit_labels

    group = homocyclic_group(p, n, r)
    first, second = commuting_idempotent_pairs(group)
    labels = np.unique(orbit_labels(group, first, second))
    E = len(endomorphism_table(group))
    comm = int(np.count_nonzero(labels // E == labels % E))
    triples = count_formula(r)
    if canonical:
        table = endomorphism_table(group)
        seen = set()
        for i, j in zip(first.tolist(), second.tolist()):
            seen.add(canonical_form(group, EndoPair(table.endomorphism(i), table.endomorphism(j))))
        triples = len(seen)
    return CountCheck(p, n, r, len(labels), count_formula(r), comm, triples)


# --------------------------------------------------------------------------
# batched diagonalization (same construction, vectorized over many pairs)

# pairs per vectorized pass; bounds peak memory to a few hundred MB at order 64
BATCH_CHUNK = 1 << 15


@dataclass
class BatchDiagonalization:
    alphas: np.ndarray   # (P, n) automorphism maps
    first: np.ndarray    # (P, r) coefficients in {0, 1}
    second: np.ndarray   # (P, r)
    ok: np.ndarray       # (P,) alpha bijective and conjugates equal the diagonals


def _summand_bases(group: FiniteGroup, masks: np.ndarray, r: int, cache: dict) -> tuple[np.ndarray, np.ndarray]:
    """Padded ppc-bases ``(P, r)`` and ranks ``(P,)`` of the subgroups given by boolean masks."""
    packed = np.packbits(masks, axis=1)
    keys, inverse = np.unique(packed, axis=0, return_inverse=True)
    bases = np.full((len(keys), r), -1, dtype=np.int64)
    ranks = np.zeros(len(keys), dtype=np.int64)
    for u, key in enumerate(keys):
        kb = key.tobytes()
        b = cache.get(kb)
        if b is None:
            elems = np.flatnonzero(np.unpackbits(key)[: group.order])
            b = cache[kb] = subgroup_ppc_basis(group, elems)
        bases[u, : len(b)] = b
        ranks[u] = len(b)
    inverse = inverse.ravel()
    return bases[inverse], ranks[inverse]


def diagonalize_pairs(group: FiniteGroup, first_maps: np.ndarray, second_maps: np.ndarray, cache: dict | None = None) -> BatchDiagonalization:
    """Diagonalize many commuting idempotent pairs of one abelian group at once.

    Uses the four-summand split of :func:`diagonalize_pair` (for idempotents
    the image is the fixed-point set, so each summand is a joint fixed/kernel
    set).  Pairs that are not commuting idempotents get ``ok = False``.
    """
    if not group.abelian:
        raise NotAbelianError(f"{group.name} is not abelian")
    cache = {} if cache is None else cache
    if len(first_maps) > BATCH_CHUNK:
        parts = [
            diagonalize_pairs(group, first_maps[a:a + BATCH_CHUNK], second_maps[a:a + BATCH_CHUNK], cache)
            for a in range(0, len(first_maps), BATCH_CHUNK)
        ]
        return BatchDiagonalization(*(np.concatenate([getattr(b, k) for b in parts]) for k in ("alphas", "first", "second", "ok")))
    std = ppc_decompose(group)
    r = std.rank
    n = group.order
    f = np.asarray(first_maps, dtype=np.int64)
    s = np.asarray(second_maps, dtype=np.int64)
    P = len(f)
    x = np.arange(n)
    fix1, zero1 = f == x, f == 0
    fix2, zero2 = s == x, s == 0
    xs = np.full((P, r), -1, dtype=np.int64)
    filled = np.zeros(P, dtype=np.int64)
    rows = np.arange(P)
    for mask in (fix1 & fix2, fix1 & zero2, zero1 & fix2, zero1 & zero2):
        bases, ranks = _summand_bases(group, mask, r, cache)
        for j in range(r):
            put = (j < ranks) & (filled + j < r)
            xs[rows[put], filled[put] + j] = bases[put, j]
        filled += ranks
    well_formed = filled == r
    xs[xs < 0] = 0
    orders = group.element_orders[xs]
    used = np.zeros((P, r), dtype=bool)
    images = np.zeros((P, r), dtype=np.int64)
    for i, o in enumerate(std.orders):
        cand = ~used & (orders == o)
        j = np.argmax(cand, axis=1)
        well_formed &= cand[rows, j]
        used[rows, j] = True
        images[:, i] = xs[rows, j]
    alphas = np.empty((P, n), dtype=np.int64)
    chunk = max(1, (1 << 22) // max(1, n * max(r, 1)))
    for a in range(0, P, chunk):
        alphas[a:a + chunk] = std.extend(images[a:a + chunk])
    bijective = (np.sort(alphas, axis=1) == x).all(axis=1)
    inv = np.zeros_like(alphas)
    inv[rows[:, None], alphas] = x
    conj1 = inv[rows[:, None], f[rows[:, None], alphas]]
    conj2 = inv[rows[:, None], s[rows[:, None], alphas]]
    e = np.array(std.basis, dtype=np.int64)
    d1 = (conj1[:, e] == e).astype(np.int8) if r else np.zeros((P, 0), np.int8)
    d2 = (conj2[:, e] == e).astype(np.int8) if r else np.zeros((P, 0), np.int8)
    ok = well_formed & bijective
    if r:
        ok &= ((conj1[:, e] == e) | (conj1[:, e] == 0)).all(axis=1)
        ok &= ((conj2[:, e] == e) | (conj2[:, e] == 0)).all(axis=1)
        # The conjugates must be exactly the linear extensions of the diagonals.
        diag_maps = std.extend(np.concatenate([d1 * e, d2 * e]))
        ok &= (conj1 == diag_maps[:P]).all(axis=1) & (conj2 == diag_maps[P:]).all(axis=1)
    return BatchDiagonalization(alphas, d1, d2, ok)


def canonical_triples(d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """``(P, 3)`` array of ``(s, t1, t2)`` from batched diagonal coefficients."""
    s = d1.sum(axis=1)
    t1 = (d1 & d2).sum(axis=1)
    t2 = s + ((1 - d1) & d2).sum(axis=1)
    return np.stack([s, t1, t2], axis=1)
