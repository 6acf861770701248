"""Endomorphisms and automorphisms of small groups, and similarity of pairs.

An endomorphism is stored as its full image array ``map[x]``.  Enumeration
returns End(G) sorted lexicographically by that array, so the index of an
endomorphism in ``endomorphism_table(G).maps`` is also its rank in the
canonical order used for orbit representatives.

Text notation follows the image-list style ``(0vwxyz)``: the images of
``0, 1, ..., n-1`` written in order (space separated once ``n > 10``).
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CapExceededError, InvalidMapError, SpecParseError
from .groups import INDEX_DTYPE, FiniteGroup, ppc_decompose, resolve_cap

ENDO_LIMIT = 1 << 20
"""Largest End(G) that enumeration will materialize."""


class Endomorphism:
    """A homomorphism ``G -> G`` given by its image array."""

    __slots__ = ("group", "map", "_key")

    def __init__(self, group: FiniteGroup, images, validate: bool = True):
        m = np.ascontiguousarray(images, dtype=INDEX_DTYPE)
        if m.shape != (group.order,):
            raise InvalidMapError(f"map must list {group.order} images, got shape {m.shape}")
        if validate:
            if m.min(initial=0) < 0 or m.max(initial=0) >= group.order:
                raise InvalidMapError("images must be elements of the group")
            witness = homomorphism_violation(group, m)
            if witness is not None:
                raise InvalidMapError(f"not a homomorphism: f(x+y) != f(x)+f(y) at (x, y) = {witness}", witness)
        m.setflags(write=False)
        self.group = group
        self.map = m
        self._key = m.tobytes()

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Endomorphism):
            return NotImplemented
        return self.group == other.group and self._key == other._key

    def __lt__(self, other: "Endomorphism") -> bool:
        return self.map.tolist() < other.map.tolist()

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Endomorphism{format_map(self.map)}"

    @property
    def notation(self) -> str:
        return format_map(self.map)

    @property
    def is_bijective(self) -> bool:
        return len(np.unique(self.map)) == self.group.order

    @property
    def image(self) -> np.ndarray:
        return np.unique(self.map)

    @property
    def kernel(self) -> np.ndarray:
        return np.flatnonzero(self.map == 0)

    def inverse(self) -> "Endomorphism":
        if not self.is_bijective:
            raise InvalidMapError(f"{self.notation} is not bijective")
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.group.order, dtype=INDEX_DTYPE)
        return Endomorphism(self.group, inv, validate=False)


@dataclass(frozen=True, order=True)
class EndoPair:
    """An ordered pair ``(first, second)`` of endomorphisms of one group."""

    first: Endomorphism
    second: Endomorphism

    def __post_init__(self):
        if self.first.group != self.second.group:
            raise ValueError("both endomorphisms of a pair must act on the same group")

    @property
    def group(self) -> FiniteGroup:
        return self.first.group

    @property
    def notation(self) -> str:
        return f"{self.first.notation},{self.second.notation}"

    def __repr__(self) -> str:
        return f"EndoPair({self.notation})"

    def __iter__(self):
        return iter((self.first, self.second))


# --------------------------------------------------------------------------
# notation

def format_map(m: Sequence[int]) -> str:
    m = [int(v) for v in m]
    if len(m) <= 10:
        return "(" + "".join(str(v) for v in m) + ")"
    return "(" + " ".join(str(v) for v in m) + ")"


def parse_map(text: str, n: int) -> list[int]:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise SpecParseError(f"endomorphism must be written as (0vwx...), got {text!r}")
    body = body[1:-1].strip()
    if " " in body or "," in body:
        parts = [p for p in re.split(r"[\s,]+", body) if p]
    else:
        parts = list(body)
    try:
        images = [int(p) for p in parts]
    except ValueError:
        raise SpecParseError(f"non-integer image in {text!r}") from None
    if len(images) != n:
        raise SpecParseError(f"{text!r} lists {len(images)} images, the group has {n} elements")
    return images


def parse_endomorphism(text: str, group: FiniteGroup) -> Endomorphism:
    try:
        return Endomorphism(group, parse_map(text, group.order))
    except InvalidMapError as exc:
        raise SpecParseError(f"{text!r}: {exc}") from exc


def parse_pair(text: str, group: FiniteGroup) -> EndoPair:
    """Parse ``"(0220),(0220)"`` into an :class:`EndoPair`."""
    parts = re.findall(r"\([^)]*\)", text)
    if len(parts) != 2:
        raise SpecParseError(f"pair spec must contain two maps like (0vw..),(0xy..), got {text!r}")
    return EndoPair(parse_endomorphism(parts[0], group), parse_endomorphism(parts[1], group))


# --------------------------------------------------------------------------
# predicates

def homomorphism_violation(group: FiniteGroup, m: np.ndarray) -> tuple[int, int] | None:
    bad = np.argwhere(m[group.add] != group.add[np.ix_(m, m)])
    if bad.size:
        return int(bad[0, 0]), int(bad[0, 1])
    return None


def is_homomorphism(group: FiniteGroup, m) -> bool:
    return homomorphism_violation(group, np.asarray(m)) is None


def identity(group: FiniteGroup) -> Endomorphism:
    return Endomorphism(group, np.arange(group.order), validate=False)


def zero(group: FiniteGroup) -> Endomorphism:
    return Endomorphism(group, np.zeros(group.order), validate=False)


def _same_group(f: Endomorphism, g: Endomorphism) -> None:
    if f.group != g.group:
        raise ValueError("endomorphisms act on different groups")


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """Left composition ``(f o g)(x) = f(g(x))``."""
    _same_group(f, g)
    return Endomorphism(f.group, f.map[g.map], validate=__debug__)


def add_maps(f: Endomorphism, g: Endomorphism) -> np.ndarray:
    """Pointwise sum ``x -> f(x) + g(x)`` as a raw array (not always a homomorphism)."""
    _same_group(f, g)
    return f.group.add[f.map, g.map]


def is_idempotent(f: Endomorphism) -> bool:
    return bool(np.array_equal(f.map[f.map], f.map))


def commutes(f: Endomorphism, g: Endomorphism) -> bool:
    _same_group(f, g)
    return bool(np.array_equal(f.map[g.map], g.map[f.map]))


def image_commuting_violation(first: Endomorphism, second: Endomorphism) -> tuple[int, int] | None:
    """Some ``(x, y)`` with ``first(x) + second(y) != second(y) + first(x)``, or None."""
    _same_group(first, second)
    c = first.group.commute_table[np.ix_(first.map, second.map)]
    bad = np.argwhere(~c)
    if bad.size:
        return int(bad[0, 0]), int(bad[0, 1])
    return None


def is_image_commuting(pair: EndoPair) -> bool:
    return image_commuting_violation(pair.first, pair.second) is None


def conjugate(alpha: Endomorphism, f: Endomorphism) -> Endomorphism:
    """``alpha^-1 o f o alpha``."""
    _same_group(alpha, f)
    inv = alpha.inverse()
    return Endomorphism(f.group, inv.map[f.map[alpha.map]], validate=False)


def conjugate_pair(alpha: Endomorphism, pair: EndoPair) -> EndoPair:
    return EndoPair(conjugate(alpha, pair.first), conjugate(alpha, pair.second))


def are_similar(p: EndoPair, q: EndoPair, automorphisms: Iterable[Endomorphism] | None = None) -> Endomorphism | None:
    """An automorphism conjugating ``p`` onto ``q``, or None."""
    autos = enumerate_automorphisms(p.group) if automorphisms is None else automorphisms
    for alpha in autos:
        if conjugate_pair(alpha, p) == q:
            return alpha
    return None


# --------------------------------------------------------------------------
# enumeration

def _abelian_endomorphisms(group: FiniteGroup, limit: int) -> np.ndarray:
    """Linear extensions of basis images whose orders divide the basis orders."""
    basis = ppc_decompose(group)
    orders = group.element_orders
    candidates = [np.flatnonzero(o % orders == 0) for o in basis.orders]
    total = math.prod(len(c) for c in candidates)
    if total > limit:
        raise CapExceededError(f"End({group.name}) has {total} elements, over the enumeration limit {limit}")
    if basis.rank == 0:
        return np.zeros((1, group.order), dtype=INDEX_DTYPE)
    grids = np.meshgrid(*candidates, indexing="ij")
    images = np.stack([g.ravel() for g in grids], axis=1)
    chunk = max(1, (1 << 22) // max(1, group.order * basis.rank))
    maps = np.concatenate([basis.extend(images[i:i + chunk]) for i in range(0, len(images), chunk)])
    return maps


def _dfs_endomorphisms(group: FiniteGroup, limit: int) -> np.ndarray:
    """Backtracking over generator images, closing under right addition of generators."""
    n = group.order
    add = group.add
    gens = group.small_generating_set()
    orders = group.element_orders
    found: list[np.ndarray] = []

    def close(f: np.ndarray, assigned: list[int]) -> bool:
        frontier = list(np.flatnonzero(f >= 0))
        while frontier:
            new = []
            for x in frontier:
                fx = f[x]
                for g in assigned:
                    y = add[x, g]
                    v = add[fx, f[g]]
                    if f[y] < 0:
                        f[y] = v
                        new.append(y)
                    elif f[y] != v:
                        return False
            frontier = new
        return True

    def search(k: int, f: np.ndarray) -> None:
        if k == len(gens):
            found.append(f.copy())
            if len(found) > limit:
                raise CapExceededError(f"End({group.name}) exceeds the enumeration limit {limit}")
            return
        g = gens[k]
        for img in np.flatnonzero(orders[g] % orders == 0):
            if f[g] >= 0 and f[g] != img:
                continue
            trial = f.copy()
            trial[g] = img
            if close(trial, gens[: k + 1]):
                search(k + 1, trial)

    start = np.full(n, -1, dtype=INDEX_DTYPE)
    start[0] = 0
    search(0, start)
    return np.array(found, dtype=INDEX_DTYPE).reshape(-1, n)


_FP_WEIGHTS = np.random.default_rng(0x1CE).integers(1, 2**63, size=1 << 16, dtype=np.uint64) | np.uint64(1)


def fingerprint(maps: np.ndarray) -> np.ndarray:
    """64-bit hash per row; lookups always confirm with an exact comparison."""
    maps = np.atleast_2d(maps)
    w = _FP_WEIGHTS[: maps.shape[1]]
    with np.errstate(over="ignore"):
        return (maps.astype(np.uint64) + np.uint64(1)) @ w if maps.shape[1] else np.zeros(len(maps), np.uint64)


class EndomorphismTable:
    """End(G) as a sorted ``(E, n)`` array with fast vectorized lookup."""

    def __init__(self, group: FiniteGroup, maps: np.ndarray):
        self.group = group
        maps = np.unique(maps, axis=0)  # lexicographic sort, no duplicates
        maps = np.ascontiguousarray(maps, dtype=INDEX_DTYPE)
        maps.setflags(write=False)
        self.maps = maps
        fp = fingerprint(maps)
        self._order = np.argsort(fp, kind="stable")
        self._sorted_fp = fp[self._order]

    def __len__(self) -> int:
        return len(self.maps)

    def index_of(self, maps: np.ndarray) -> np.ndarray:
        """Row indices of ``maps`` in the table (-1 where absent)."""
        maps = np.atleast_2d(maps)
        fp = fingerprint(maps)
        pos = np.searchsorted(self._sorted_fp, fp)
        pos = np.minimum(pos, len(self._sorted_fp) - 1)
        idx = self._order[pos]
        ok = (self._sorted_fp[pos] == fp) & (self.maps[idx] == maps).all(axis=1)
        return np.where(ok, idx, -1)

    @functools.cached_property
    def automorphism_mask(self) -> np.ndarray:
        s = np.sort(self.maps, axis=1)
        return (s == np.arange(self.group.order)).all(axis=1)

    @functools.cached_property
    def automorphisms(self) -> np.ndarray:
        return self.maps[self.automorphism_mask]

    @functools.cached_property
    def idempotent_mask(self) -> np.ndarray:
        rows = np.arange(len(self.maps))[:, None]
        return (self.maps[rows, self.maps] == self.maps).all(axis=1)

    @functools.cached_property
    def zero_index(self) -> int:
        return int(self.index_of(np.zeros(self.group.order, dtype=INDEX_DTYPE))[0])

    @functools.cached_property
    def identity_index(self) -> int:
        return int(self.index_of(np.arange(self.group.order, dtype=INDEX_DTYPE))[0])

    def conjugation_permutation(self, alpha: np.ndarray, indices: np.ndarray | None = None) -> np.ndarray:
        """``perm[k]`` = index of ``alpha^-1 o maps[indices[k]] o alpha`` (all of End by default)."""
        inv = np.empty_like(alpha)
        inv[alpha] = np.arange(len(alpha), dtype=alpha.dtype)
        maps = self.maps if indices is None else self.maps[indices]
        conj = inv[maps[:, alpha]]
        perm = self.index_of(conj)
        if (perm < 0).any():  # pragma: no cover - conjugates of endomorphisms are endomorphisms
            raise InvalidMapError("conjugation left End(G); alpha is not an automorphism")
        return perm

    def endomorphism(self, i: int) -> Endomorphism:
        return Endomorphism(self.group, self.maps[i], validate=False)

    @functools.cached_property
    def image_commuting(self) -> np.ndarray:
        """Boolean ``(E, E)``: ``(maps[i], maps[j])`` is image-commuting."""
        if self.group.abelian:
            return np.ones((len(self), len(self)), dtype=bool)
        n = self.group.order
        img = np.zeros((len(self), n), dtype=np.float64)
        rows = np.repeat(np.arange(len(self)), n)
        img[rows, self.maps.ravel()] = 1.0
        noncomm = (~self.group.commute_table).astype(np.float64)
        return (img @ noncomm @ img.T) == 0


@functools.lru_cache(maxsize=64)
def _table_cached(group: FiniteGroup, limit: int) -> EndomorphismTable:
    if group.abelian:
        maps = _abelian_endomorphisms(group, limit)
    else:
        maps = _dfs_endomorphisms(group, limit)
    return EndomorphismTable(group, maps)


def endomorphism_table(group: FiniteGroup, cap: int | None = None, limit: int = ENDO_LIMIT) -> EndomorphismTable:
    if group.order > resolve_cap(cap):
        raise CapExceededError(f"group order {group.order} exceeds the size cap {resolve_cap(cap)}")
    return _table_cached(group, limit)


def enumerate_endomorphisms(group: FiniteGroup, cap: int | None = None, method: str = "auto") -> list[Endomorphism]:
    """End(G), duplicate-free and sorted by image array.

    ``method="dfs"`` forces the generator backtracking even for abelian groups
    (used to cross-check the basis route).
    """
    if method == "dfs":
        if group.order > resolve_cap(cap):
            raise CapExceededError(f"group order {group.order} exceeds the size cap {resolve_cap(cap)}")
        maps = np.unique(_dfs_endomorphisms(group, ENDO_LIMIT), axis=0)
    else:
        maps = endomorphism_table(group, cap).maps
    return [Endomorphism(group, m, validate=False) for m in maps]


def enumerate_automorphisms(group: FiniteGroup, cap: int | None = None) -> list[Endomorphism]:
    table = endomorphism_table(group, cap)
    return [Endomorphism(group, m, validate=False) for m in table.automorphisms]


def automorphism_generators(group: FiniteGroup) -> np.ndarray:
    """A small generating set of Aut(G), picked greedily from the sorted list."""
    autos = endomorphism_table(group).automorphisms
    n = group.order
    if len(autos) <= 1:
        return autos[:0]
    gens: list[np.ndarray] = []
    seen_fp = np.array([], dtype=np.uint64)
    ident = np.arange(n, dtype=INDEX_DTYPE)
    rng = np.random.default_rng(7)
    order = np.concatenate([rng.permutation(np.arange(1, len(autos)))])
    for cand in order:
        a = autos[cand]
        if seen_fp.size and np.isin(fingerprint(a), seen_fp).all():
            continue
        gens.append(a)
        # Closure of <gens> by breadth-first composition.
        elems = ident[None, :]
        frontier = elems
        seen_fp = fingerprint(elems)
        while len(frontier):
            nxt = np.concatenate([g[frontier] for g in gens])
            fp = fingerprint(nxt)
            fp, first = np.unique(fp, return_index=True)
            nxt = nxt[first]
            new = ~np.isin(fp, seen_fp)
            frontier = nxt[new]
            seen_fp = np.concatenate([seen_fp, fp[new]])
        if len(seen_fp) == len(autos):
            break
    return np.array(gens, dtype=INDEX_DTYPE)


# --------------------------------------------------------------------------
# similarity orbits

@dataclass(frozen=True)
class Orbit:
    representative: EndoPair
    members: tuple[EndoPair, ...]

    def __len__(self) -> int:
        return len(self.members)


FULL_SWEEP_BUDGET = 400_000_000


def orbit_labels(group: FiniteGroup, first: np.ndarray, second: np.ndarray, method: str = "auto") -> np.ndarray:
    """Similarity class label for each pair ``(first[k], second[k])`` of End-indices.

    The label of a pair is the End-index code ``i * E + j`` of the least pair
    similar to it.  ``method="full"`` sweeps every automorphism (exact for any
    input).  ``method="generators"`` joins pairs along a generating set of
    Aut(G) and needs the input closed under conjugation; when it is not, the
    full sweep is used instead.
    """
    table = endomorphism_table(group)
    E = len(table)
    first = np.asarray(first, dtype=np.int64)
    second = np.asarray(second, dtype=np.int64)
    autos = table.automorphisms
    used, inverse = np.unique(np.concatenate([first, second]), return_inverse=True)
    if method == "auto":
        method = "full" if len(autos) * (len(used) + len(first)) <= FULL_SWEEP_BUDGET else "generators"
    if method == "generators":
        labels = _orbit_labels_generators(table, first, second)
        if labels is not None:
            return labels
    local_first, local_second = inverse[: len(first)], inverse[len(first):]
    best = first * E + second
    for alpha in autos:
        perm = table.conjugation_permutation(alpha, used).astype(np.int64)
        np.minimum(best, perm[local_first] * E + perm[local_second], out=best)
    return best


def _orbit_labels_generators(table: EndomorphismTable, first: np.ndarray, second: np.ndarray) -> np.ndarray | None:
    E = len(table)
    keys = first * E + second
    order = np.argsort(keys)
    sorted_keys = keys[order]
    P = len(keys)
    rows, cols = [np.arange(P)], [np.arange(P)]
    used, inverse = np.unique(np.concatenate([first, second]), return_inverse=True)
    local_first, local_second = inverse[:P], inverse[P:]
    for g in automorphism_generators(table.group):
        perm = table.conjugation_permutation(g, used).astype(np.int64)
        moved = perm[local_first] * E + perm[local_second]
        pos = np.minimum(np.searchsorted(sorted_keys, moved), P - 1)
        if not (sorted_keys[pos] == moved).all():
            return None
        rows.append(np.arange(P))
        cols.append(order[pos])
    graph = coo_matrix((np.ones(sum(len(r) for r in rows)), (np.concatenate(rows), np.concatenate(cols))), shape=(P, P))
    _, comp = connected_components(graph, directed=True, connection="weak")
    least = np.full(comp.max() + 1 if P else 0, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(least, comp, keys)
    return least[comp]


def similarity_orbits(pairs: Iterable[EndoPair], group: FiniteGroup) -> list[Orbit]:
    """Partition ``pairs`` into similarity classes.

    Each orbit lists its members in canonical order and reports the least of
    them as representative; orbits come sorted by representative.
    """
    pairs = list(pairs)
    if not pairs:
        return []
    table = endomorphism_table(group)
    first = table.index_of(np.array([p.first.map for p in pairs]))
    second = table.index_of(np.array([p.second.map for p in pairs]))
    if (first < 0).any() or (second < 0).any():
        raise InvalidMapError("pairs must consist of endomorphisms of the given group")
    labels = orbit_labels(group, first, second, method="full")
    groups: dict[int, list[int]] = {}
    for k, lab in enumerate(labels.tolist()):
        groups.setdefault(lab, []).append(k)
    orbits = []
    for members in groups.values():
        ordered = sorted({(int(first[k]), int(second[k])) for k in members})
        mem = tuple(EndoPair(table.endomorphism(i), table.endomorphism(j)) for i, j in ordered)
        orbits.append(Orbit(mem[0], mem))
    orbits.sort(key=lambda o: (o.representative.first.map.tolist(), o.representative.second.map.tolist()))
    return orbits


def endomorphism_classes(group: FiniteGroup) -> list[list[Endomorphism]]:
    """Similarity classes of single endomorphisms, each sorted, classes by least member."""
    table = endomorphism_table(group)
    E = len(table)
    idx = np.arange(E)
    best = idx.copy()
    for alpha in table.automorphisms:
        np.minimum(best, table.conjugation_permutation(alpha), out=best)
    out: dict[int, list[int]] = {}
    for i, b in enumerate(best.tolist()):
        out.setdefault(b, []).append(i)
    return [[table.endomorphism(i) for i in members] for _, members in sorted(out.items())]


def burnside_count(group: FiniteGroup, first: np.ndarray, second: np.ndarray) -> int:
    """Orbit count of a conjugation-closed pair set by averaging fixed points over Aut(G)."""
    table = endomorphism_table(group)
    autos = table.automorphisms
    total = 0
    used, inverse = np.unique(np.concatenate([first, second]), return_inverse=True)
    local_first, local_second = inverse[: len(first)], inverse[len(first):]
    for alpha in autos:
        perm = table.conjugation_permutation(alpha, used)
        total += int(np.count_nonzero((perm[local_first] == first) & (perm[local_second] == second)))
    count, rem = divmod(total, len(autos))
    if rem:
        raise ValueError("fixed-point total is not divisible by |Aut(G)|; the pair set is not closed under conjugation")
    return count


def all_maps_brute_force(group: FiniteGroup) -> np.ndarray:
    """Every homomorphism, found by testing all ``n^(n-1)`` maps with ``0 -> 0``.

    Independent of the enumeration routes above; groups of order <= 8 only.
    """
    n = group.order
    if n > 8:
        raise CapExceededError("brute-force map search is limited to groups of order <= 8")
    if n == 1:
        return np.zeros((1, 1), dtype=INDEX_DTYPE)
    total = n ** (n - 1)
    found = []
    chunk = 1 << 17
    add = group.add
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.stack([(codes // n ** k) % n for k in range(n - 2, -1, -1)], axis=1)
        maps = np.concatenate([np.zeros((len(codes), 1), np.int64), digits], axis=1)
        rows = np.arange(len(maps))[:, None, None]
        lhs = maps[rows, add[None, :, :]]
        rhs = add[maps[:, :, None], maps[:, None, :]]
        ok = (lhs == rhs).all(axis=(1, 2))
        found.append(maps[ok])
    return np.concatenate(found).astype(INDEX_DTYPE)
