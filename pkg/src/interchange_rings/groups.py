"""Finite groups written additively, as validated Cayley tables.

Elements are the integers ``0..n-1`` and ``0`` is always the identity.  Groups
come from a list of cyclic orders (``make_abelian_group``), from an explicit
table (``make_group_from_table``) or from a short spec string
(``parse_group_spec``).  Abelian groups carry a prime-power-cyclic basis
(``ppc_decompose``) that the rest of the package uses as its coordinate
system.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, GroupTableError, NotAbelianError, SpecParseError

DEFAULT_CAP = 256

INDEX_DTYPE = np.int32


def resolve_cap(cap: int | None = None) -> int:
    """Explicit ``cap`` wins, then the ``ICR_CAP`` environment variable, then 256."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("ICR_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise SpecParseError(f"ICR_CAP must be an integer, got {env!r}") from None
    return DEFAULT_CAP


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine for the sizes used here."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=INDEX_DTYPE)
    a.setflags(write=False)
    return a


class FiniteGroup:
    """A validated finite group ``(G, +)`` on the elements ``0..n-1``.

    Use the ``make_*`` constructors; ``__init__`` trusts its input.
    """

    def __init__(self, add_table: np.ndarray, name: str, factors: tuple[int, ...] | None = None):
        self.add = _readonly(add_table)
        self.order = int(self.add.shape[0])
        self.name = name
        self.factors = factors
        neg = np.argmax(self.add == 0, axis=1)
        self.neg = _readonly(neg)
        self.abelian = bool(np.array_equal(self.add, self.add.T))
        self._key = self.add.tobytes()

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order}, abelian={self.abelian})"

    def __eq__(self, other: object) -> bool:
        # Groups are equal when their tables coincide; names are labels only.
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @property
    def elements(self) -> range:
        return range(self.order)

    @functools.cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=INDEX_DTYPE)
        for x in range(self.order):
            k, y = 1, x
            while y != 0:
                y = int(self.add[y, x])
                k += 1
            orders[x] = k
        return _readonly(orders)

    @functools.cached_property
    def commute_table(self) -> np.ndarray:
        """Boolean ``n x n``: ``x + y == y + x``."""
        t = self.add == self.add.T
        t.setflags(write=False)
        return t

    @functools.cached_property
    def multiples(self) -> np.ndarray:
        """``multiples[k, x] = k x`` for ``0 <= k < exponent``."""
        exponent = int(np.lcm.reduce(self.element_orders)) if self.order > 1 else 1
        out = np.zeros((exponent, self.order), dtype=INDEX_DTYPE)
        idx = np.arange(self.order)
        for k in range(1, exponent):
            out[k] = self.add[out[k - 1], idx]
        return _readonly(out)

    def multiple(self, k: int, x: int) -> int:
        return int(self.multiples[k % self.multiples.shape[0], x])

    def sum(self, xs: Iterable[int]) -> int:
        acc = 0
        for x in xs:
            acc = int(self.add[acc, x])
        return acc

    def generated_subgroup(self, generators: Iterable[int]) -> np.ndarray:
        """Sorted element array of the subgroup generated by ``generators``."""
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        frontier = [0]
        gens = [int(g) for g in generators]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = int(self.add[x, g])
                    if not mask[y]:
                        mask[y] = True
                        new.append(y)
            frontier = new
        return np.flatnonzero(mask)

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        mask = self.mask(elements)
        if not mask[0]:
            return False
        members = np.flatnonzero(mask)
        return bool(mask[self.add[np.ix_(members, members)]].all() and mask[self.neg[members]].all())

    def is_normal(self, elements: Iterable[int]) -> bool:
        members = np.flatnonzero(self.mask(elements))
        if self.abelian:
            return True
        # g + h - g stays inside for every g.
        conj = self.add[self.add[:, members], self.neg[:, None]]
        return bool(np.isin(conj, members).all())

    def mask(self, elements: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.order, dtype=bool)
        mask[np.fromiter((int(e) for e in elements), dtype=np.int64)] = True
        return mask

    def small_generating_set(self) -> list[int]:
        """Greedy: repeatedly add the least element outside the current subgroup."""
        gens: list[int] = []
        inside = np.zeros(self.order, dtype=bool)
        inside[0] = True
        while not inside.all():
            g = int(np.flatnonzero(~inside)[0])
            gens.append(g)
            inside[:] = False
            inside[self.generated_subgroup(gens)] = True
        return gens


# --------------------------------------------------------------------------
# construction

def _check_cap(order: int, cap: int | None) -> None:
    limit = resolve_cap(cap)
    if order > limit:
        raise CapExceededError(f"group order {order} exceeds the size cap {limit}")


def _mixed_radix_tuples(factors: Sequence[int]) -> np.ndarray:
    """All coordinate tuples, first coordinate most significant."""
    if not factors:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(m) for m in factors], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def make_abelian_group(factors: Sequence[int], cap: int | None = None, name: str | None = None) -> FiniteGroup:
    """The direct sum ``Z_{m1} + ... + Z_{mk}`` in mixed-radix element order.

    An empty factor list gives the trivial group.
    """
    factors = tuple(int(m) for m in factors)
    for m in factors:
        if m < 2:
            raise ValueError(f"cyclic factor must be >= 2, got {m}")
    order = math.prod(factors)
    _check_cap(order, cap)
    tuples = _mixed_radix_tuples(factors)
    mods = np.array(factors, dtype=np.int64)
    weights = np.array([math.prod(factors[i + 1:]) for i in range(len(factors))], dtype=np.int64)
    summed = (tuples[:, None, :] + tuples[None, :, :]) % mods if factors else np.zeros((1, 1, 0), np.int64)
    table = summed @ weights if factors else np.zeros((1, 1), dtype=np.int64)
    if name is None:
        name = "+".join(f"Z{m}" for m in factors) if factors else "Z1"
    return FiniteGroup(table, name, factors)


def make_group_from_table(table, name: str = "table", cap: int | None = None) -> FiniteGroup:
    """Validate a Cayley table and wrap it; each failure mode raises its own ``kind``."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupTableError("shape", f"table must be square and nonempty, got shape {t.shape}")
    n = t.shape[0]
    _check_cap(n, cap)
    if not np.issubdtype(t.dtype, np.integer):
        raise GroupTableError("range", "table entries must be integers")
    if t.min() < 0 or t.max() >= n:
        raise GroupTableError("range", f"entries must lie in [0, {n})")
    t = t.astype(INDEX_DTYPE)
    idx = np.arange(n)
    bad = np.flatnonzero((t[0] != idx) | (t[:, 0] != idx))
    if bad.size:
        raise GroupTableError("missing-identity", f"index 0 is not an identity (fails at x={bad[0]})", (int(bad[0]),))
    no_inverse = np.flatnonzero(~(t == 0).any(axis=1))
    if no_inverse.size:
        x = int(no_inverse[0])
        raise GroupTableError("missing-inverse", f"element {x} has no inverse", (x,))
    sorted_rows = np.sort(t, axis=1)
    sorted_cols = np.sort(t, axis=0)
    if not (sorted_rows == idx).all() or not (sorted_cols == idx[:, None]).all():
        rows = np.flatnonzero(~(sorted_rows == idx).all(axis=1))
        where = ("row", int(rows[0])) if rows.size else ("column", int(np.flatnonzero(~(sorted_cols == idx[:, None]).all(axis=0))[0]))
        raise GroupTableError("non-latin", f"{where[0]} {where[1]} is not a permutation", where)
    for x in range(n):
        lhs = t[t[x]]  # (x+y)+z over (y, z)
        rhs = t[x][t]  # x+(y+z)
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            y, z = (int(v) for v in diff[0])
            raise GroupTableError("non-associative", f"(x+y)+z != x+(y+z) at {(x, y, z)}", (x, y, z))
    return FiniteGroup(t, name)


def _s3_table() -> np.ndarray:
    # i*a + j*b  ->  index i + 3j, with b + a = 2a + b.
    table = np.zeros((6, 6), dtype=np.int64)
    for (i, j), (k, l) in itertools.product(itertools.product(range(3), range(2)), repeat=2):
        table[i + 3 * j, k + 3 * l] = ((i + (-1) ** j * k) % 3) + 3 * ((j + l) % 2)
    return table


def symmetric_group_s3() -> FiniteGroup:
    """S3 on ``0, a, 2a, b, a+b, 2a+b`` = ``0..5``."""
    return make_group_from_table(_s3_table(), name="S3")


BUILTIN_TABLES = {"D4": "D4.txt", "Q8": "Q8.txt"}


def builtin_group(name: str, cap: int | None = None) -> FiniteGroup:
    if name == "S3":
        return symmetric_group_s3()
    if name == "V":
        return make_abelian_group([2, 2], cap, name="V")
    if name in BUILTIN_TABLES:
        text = resources.files("interchange_rings.data").joinpath(BUILTIN_TABLES[name]).read_text()
        return make_group_from_table(parse_cayley_table(text), name=name, cap=cap)
    raise SpecParseError(f"unknown built-in group {name!r}")


_CYCLIC_SUM = re.compile(r"^Z\d+(\+Z\d+)*$")
_POWER = re.compile(r"^Z(\d+)\^(\d+)$")


def parse_group_spec(spec: str, cap: int | None = None) -> FiniteGroup:
    """Resolve ``Z6``, ``Z4+Z2``, ``Z2^3``, ``V``, ``S3``, ``D4``, ``Q8`` or ``table:<path>``."""
    spec = spec.strip().replace(" ", "")
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        try:
            table = read_cayley_table(path)
        except OSError as exc:
            raise SpecParseError(f"cannot read table file {path}: {exc}") from exc
        return make_group_from_table(table, name=path.stem, cap=cap)
    m = _POWER.match(spec)
    if m:
        base, power = int(m.group(1)), int(m.group(2))
        factors = [base] * power if base > 1 else []
        return make_abelian_group(factors, cap, name=spec)
    if _CYCLIC_SUM.match(spec):
        factors = [int(part[1:]) for part in spec.split("+")]
        factors = [m for m in factors if m != 1]
        if any(m < 1 for m in factors):
            raise SpecParseError(f"bad cyclic factor in {spec!r}")
        return make_abelian_group(factors, cap, name=spec)
    try:
        return builtin_group(spec, cap)
    except SpecParseError:
        raise SpecParseError(
            f"cannot parse group spec {spec!r}; expected Zn, Zm+Zn+..., Zn^k, V, S3, D4, Q8 or table:<path>"
        ) from None


# --------------------------------------------------------------------------
# Cayley-table text format: first line n, then n rows of n indices.

def parse_cayley_table(text: str) -> np.ndarray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise SpecParseError("empty Cayley table")
    try:
        n = int(lines[0][0])
        rows = [[int(v) for v in row] for row in lines[1:]]
    except ValueError as exc:
        raise SpecParseError(f"non-integer entry in Cayley table: {exc}") from None
    if len(lines[0]) != 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise SpecParseError(f"Cayley table must have a size line then {n} rows of {n} entries")
    return np.array(rows, dtype=np.int64).reshape(n, n)


def format_cayley_table(table: np.ndarray) -> str:
    table = np.asarray(table)
    width = len(str(table.shape[0] - 1))
    rows = [" ".join(str(int(v)).rjust(width) for v in row) for row in table]
    return "\n".join([str(table.shape[0]), *rows]) + "\n"


def read_cayley_table(path: str | Path) -> np.ndarray:
    return parse_cayley_table(Path(path).read_text())


def write_cayley_table(path: str | Path, table: np.ndarray) -> None:
    Path(path).write_text(format_cayley_table(table))


# --------------------------------------------------------------------------
# prime-power-cyclic bases

@dataclass(frozen=True, eq=False)
class PpcBasis:
    """A prime-power-cyclic basis ``b_1..b_r`` of an abelian group.

    ``coords[x]`` is the coordinate vector of element ``x`` and
    ``from_coords[c_1, ..., c_r]`` the element with those coordinates.
    """

    group: FiniteGroup
    basis: tuple[int, ...]
    orders: tuple[int, ...]
    coords: np.ndarray
    from_coords: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.basis)

    def element(self, coords: Sequence[int]) -> int:
        c = tuple(int(v) % o for v, o in zip(coords, self.orders))
        return int(self.from_coords[c]) if c else 0

    def extend(self, images) -> np.ndarray:
        """Linear extension of ``b_i -> images[..., i]``.

        ``images`` may be a 1-d sequence of r elements or an ``(m, r)`` array;
        the result is the map array (or ``(m, n)`` batch).  No check that the
        image orders divide the basis orders is done here.
        """
        imgs = np.asarray(images, dtype=np.int64)
        single = imgs.ndim == 1
        imgs = np.atleast_2d(imgs)
        n = self.group.order
        if self.rank == 0:
            out = np.zeros((imgs.shape[0], n), dtype=INDEX_DTYPE)
            return out[0] if single else out
        mods = np.array(self.orders, dtype=np.int64)
        image_coords = self.coords[imgs].astype(np.int64)  # (m, r_src, r_dst)
        mapped = np.einsum("xj,mji->mxi", self.coords.astype(np.int64), image_coords) % mods
        flat = np.ravel_multi_index(tuple(np.moveaxis(mapped, -1, 0)), self.orders)
        result = self.from_coords.ravel()[flat].astype(INDEX_DTYPE)
        return result[0] if single else result


def _build_basis(group: FiniteGroup, basis: Sequence[int]) -> PpcBasis:
    orders = tuple(int(group.element_orders[b]) for b in basis)
    n = group.order
    coords = np.zeros((n, len(basis)), dtype=INDEX_DTYPE)
    from_coords = np.full(orders, -1, dtype=INDEX_DTYPE) if basis else np.zeros((), dtype=INDEX_DTYPE)
    seen = np.zeros(n, dtype=bool)
    for c in itertools.product(*[range(o) for o in orders]):
        x = 0
        for ci, b in zip(c, basis):
            x = int(group.add[x, group.multiple(ci, b)])
        if seen[x]:
            raise ValueError(f"elements {tuple(basis)} are not independent")
        seen[x] = True
        if basis:
            from_coords[c] = x
        coords[x] = c
    if basis and (from_coords < 0).any():
        raise ValueError("basis does not span the group")
    coords.setflags(write=False)
    from_coords.setflags(write=False)
    return PpcBasis(group, tuple(int(b) for b in basis), orders, coords, from_coords)


def _is_prime_power(m: int) -> bool:
    return m > 1 and len(factorize(m)) == 1


def _pgroup_basis(group: FiniteGroup, elements: np.ndarray, p: int) -> list[int]:
    """Basis of an abelian p-group given as an element set, largest orders first."""
    orders = group.element_orders[elements]
    size = len(elements)
    if size == 1:
        return []
    # |{x : p^k x = 0}| = p^(sum_i min(k, lambda_i)); successive ratios count the parts >= k.
    at_least = []
    prev, k = 1, 0
    while prev < size:
        k += 1
        cnt = int(np.sum(p ** k % orders == 0))
        ratio, e = cnt // prev, 0
        while ratio > 1:
            ratio //= p
            e += 1
        at_least.append(e)
        prev = cnt
    lam = []
    for k, ge in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        lam.extend([k] * (ge - nxt))
    lam.sort(reverse=True)
    by_order = {e: [int(x) for x in elements[orders == p ** e]] for e in set(lam)}
    n = group.order

    def cyclic(x: int) -> list[int]:
        out, y = [0], x
        while y != 0:
            out.append(y)
            y = int(group.add[y, x])
        return out

    chosen: list[int] = []

    def search(i: int, inside: np.ndarray) -> bool:
        if i == len(lam):
            return True
        for x in by_order[lam[i]]:
            multiples = cyclic(x)
            if inside[multiples[1:]].any():
                continue
            members = np.flatnonzero(inside)
            span = group.add[np.ix_(members, np.array(multiples))].ravel()
            nxt = np.zeros(n, dtype=bool)
            nxt[span] = True
            chosen.append(x)
            if search(i + 1, nxt):
                return True
            chosen.pop()
        return False

    start = np.zeros(n, dtype=bool)
    start[0] = True
    if not search(0, start):  # pragma: no cover - a basis always exists
        raise RuntimeError("no ppc-basis found")
    return chosen


def subgroup_ppc_basis(group: FiniteGroup, elements: Iterable[int]) -> list[int]:
    """A ppc-basis of the subgroup with the given elements, sorted by (prime, exponent)."""
    if not group.abelian:
        raise NotAbelianError(f"{group.name} is not abelian")
    elems = np.unique(np.fromiter((int(e) for e in elements), dtype=np.int64))
    orders = group.element_orders[elems]
    size = len(elems)
    basis: list[int] = []
    for p in sorted(factorize(size)):
        pmask = np.array([int(o) == 1 or _is_prime_power(int(o)) and int(o) % p == 0 for o in orders])
        part = _pgroup_basis(group, elems[pmask], p)
        part.sort(key=lambda x: int(group.element_orders[x]))
        basis.extend(part)
    return basis


def _spec_basis(group: FiniteGroup) -> list[int]:
    """Split each cyclic factor ``Z_m`` into its coprime prime-power pieces."""
    factors = group.factors or ()
    keyed = []
    for j, m in enumerate(factors):
        for p, e in factorize(m).items():
            c = [0] * len(factors)
            c[j] = m // p ** e
            weights = [math.prod(factors[i + 1:]) for i in range(len(factors))]
            keyed.append(((p, e, j), sum(ci * w for ci, w in zip(c, weights))))
    keyed.sort()
    return [x for _, x in keyed]


@functools.lru_cache(maxsize=128)
def ppc_decompose(group: FiniteGroup) -> PpcBasis:
    """The standard ppc-basis, ordered by (prime, exponent) ascending."""
    if not group.abelian:
        raise NotAbelianError(f"{group.name} is not abelian; ppc bases need an abelian group")
    if group.factors is not None:
        basis = _spec_basis(group)
    else:
        basis = subgroup_ppc_basis(group, range(group.order))
    return _build_basis(group, basis)


def ppc_rank(group: FiniteGroup) -> int:
    return ppc_decompose(group).rank


def basis_for_subgroup(group: FiniteGroup, elements: Iterable[int]) -> list[int]:
    return subgroup_ppc_basis(group, elements)


# --------------------------------------------------------------------------
# corpora

def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_group_types(order: int) -> list[tuple[int, ...]]:
    """Every abelian group of ``order`` as a sorted tuple of prime-power orders."""
    per_prime = []
    for p, e in sorted(factorize(order).items()):
        per_prime.append([tuple(sorted(p ** k for k in part)) for part in _partitions(e)])
    return [tuple(itertools.chain.from_iterable(combo)) for combo in itertools.product(*per_prime)]


def invariant_factors(prime_powers: Sequence[int]) -> list[int]:
    """Regroup prime-power orders into invariant factors, largest first (``[2, 3] -> [6]``)."""
    by_prime: dict[int, list[int]] = {}
    for q in prime_powers:
        (p,) = factorize(q)
        by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    return [math.prod(qs[i] for qs in by_prime.values() if i < len(qs)) for i in range(length)]


def groups_of_order(order: int, cap: int | None = None) -> tuple[list[FiniteGroup], bool]:
    """Built-in corpus for ``order``; the flag says whether it is known complete.

    Complete for orders up to 8 (the non-abelian ones are S3, D4 and Q8).
    Above that only the abelian groups are produced.
    """
    groups = []
    for factors in abelian_group_types(order):
        inv = invariant_factors(factors)
        groups.append(make_abelian_group(inv, cap, name="+".join(f"Z{m}" for m in inv) or "Z1"))
    if order == 6:
        groups.append(symmetric_group_s3())
    if order == 8:
        groups.extend([builtin_group("D4", cap), builtin_group("Q8", cap)])
    return groups, order <= 8
