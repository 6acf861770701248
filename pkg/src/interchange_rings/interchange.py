"""Interchange near rings ``(G, +, .)`` built from pairs of endomorphisms.

A pair ``(eps, eta)`` whose images commute gives the product
``x . y = eps(x) + eta(y)``; conversely ``eps(x) = x . 0`` and
``eta(y) = 0 . y`` recover the pair from any product satisfying the
interchange law ``(w + x) . (y + z) = (w . y) + (x . z)``.

Every property in :func:`magma_props` is decided twice, once from the pair
and once by brute force over the product table, and the two answers must
agree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .endo import (
    EndoPair,
    Endomorphism,
    commutes,
    conjugate_pair,
    endomorphism_table,
    enumerate_automorphisms,
    format_map,
    image_commuting_violation,
    is_idempotent,
)
from .errors import CrossValidationError, InterchangeLawError, InvalidMapError, NotImageCommutingError
from .groups import INDEX_DTYPE, FiniteGroup, format_cayley_table

EXHAUSTIVE_LAW_LIMIT = 32
"""Largest order for which the n^4 interchange-law check runs by default."""

EXHAUSTIVE_PROPS_LIMIT = 64
"""Largest order for which magma properties are also checked over all triples."""

SAMPLE_SIZE = 20_000


class EssentialTag(str, Enum):
    ZERO = "zero"
    LEFT_ZERO = "left_zero"
    RIGHT_ZERO = "right_zero"
    ADDITIVE_COPY = "additive_copy"
    INESSENTIAL = "inessential"


class InterchangeNearRing:
    """A group together with a materialized product table and its generating pair."""

    __slots__ = ("group", "product", "pair", "_key")

    def __init__(self, group: FiniteGroup, product: np.ndarray, pair: EndoPair):
        p = np.ascontiguousarray(product, dtype=INDEX_DTYPE)
        p.setflags(write=False)
        self.group = group
        self.product = p
        self.pair = pair
        self._key = p.tobytes()

    @property
    def order(self) -> int:
        return self.group.order

    def mul(self, x: int, y: int) -> int:
        return int(self.product[x, y])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InterchangeNearRing):
            return NotImplemented
        return self.group == other.group and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.group, self._key))

    def __repr__(self) -> str:
        return f"InterchangeNearRing({self.group.name}, {self.pair.notation})"

    def to_record(self, props: "MagmaProps | None" = None) -> dict:
        """JSON-ready record ``{format, group, pair, product, props}``."""
        rec = {
            "format": 1,
            "group": {"name": self.group.name, "order": self.order, "add": self.group.add.tolist()},
            "pair": [format_map(self.pair.first.map), format_map(self.pair.second.map)],
            "product": self.product.tolist(),
        }
        if props is not None:
            rec["props"] = props.as_dict()
        return rec

    def product_table_text(self) -> str:
        return format_cayley_table(self.product)


# --------------------------------------------------------------------------
# construction and recovery

def product_table(group: FiniteGroup, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """``T[x, y] = first[x] + second[y]``."""
    return group.add[np.asarray(first)[:, None], np.asarray(second)[None, :]]


def interchange_law_violation(group: FiniteGroup, table: np.ndarray) -> tuple[int, int, int, int] | None:
    """Exhaustive search over all ``(w, x, y, z)`` for a failure of the interchange law."""
    add = group.add
    t = np.asarray(table)
    n = group.order
    for w in range(n):
        lhs = t[add[w][:, None, None], add[None, :, :]]  # [x, y, z] = (w+x).(y+z)
        rhs = add[t[w][None, :, None], t[:, None, :]]    # [x, y, z] = w.y + x.z
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            x, y, z = (int(v) for v in bad[0])
            return (w, x, y, z)
    return None


def sampled_interchange_violation(group: FiniteGroup, table: np.ndarray, samples: int = SAMPLE_SIZE, seed: int = 0):
    rng = np.random.default_rng(seed)
    w, x, y, z = rng.integers(0, group.order, size=(4, samples))
    t, add = np.asarray(table), group.add
    bad = np.flatnonzero(t[add[w, x], add[y, z]] != add[t[w, y], t[x, z]])
    if bad.size:
        k = bad[0]
        return (int(w[k]), int(x[k]), int(y[k]), int(z[k]))
    return None


def _resolve_verify(verify, n: int) -> str:
    if verify is None:
        return "exhaustive" if n <= EXHAUSTIVE_LAW_LIMIT else "sampled"
    if verify is True:
        return "exhaustive"
    if verify is False:
        return "none"
    return verify


def build_from_pair(group: FiniteGroup, pair: EndoPair, verify: bool | str | None = None) -> InterchangeNearRing:
    """The interchange near ring with ``x . y = first(x) + second(y)``.

    Rejects pairs that are not image-commuting, reporting a witness ``(x, y)``.
    ``verify`` selects an extra interchange-law check of the finished table:
    ``True``/``"exhaustive"``, ``"sampled"``, ``False``/``"none"``; the
    default is exhaustive up to order 32 and sampled above.
    """
    if pair.group != group:
        raise ValueError("pair acts on a different group")
    witness = image_commuting_violation(pair.first, pair.second)
    if witness is not None:
        raise NotImageCommutingError(witness)
    table = product_table(group, pair.first.map, pair.second.map)
    mode = _resolve_verify(verify, group.order)
    if mode == "exhaustive":
        bad = interchange_law_violation(group, table)
    elif mode == "sampled":
        bad = sampled_interchange_violation(group, table)
    else:
        bad = None
    if bad is not None:  # pragma: no cover - would contradict the construction
        raise InterchangeLawError(bad)
    return InterchangeNearRing(group, table, pair)


def extract_pair(ring_or_table, group: FiniteGroup | None = None, check: str | None = None) -> EndoPair:
    """Recover ``(x -> x . 0, y -> 0 . y)`` from a ring or a raw product table.

    A raw table is first checked against the interchange law.  ``check`` is
    ``"exhaustive"`` (default up to order 64), ``"fast"`` (default above: the
    two recovered maps must be image-commuting endomorphisms reproducing the
    whole table, which is equivalent to the law) or ``"none"``.
    """
    if isinstance(ring_or_table, InterchangeNearRing):
        group = ring_or_table.group
        table = ring_or_table.product
        check = check or "none"
    else:
        if group is None:
            raise ValueError("a raw product table needs its group")
        table = np.asarray(ring_or_table)
        if table.shape != (group.order, group.order):
            raise ValueError(f"product table must be {group.order}x{group.order}")
        check = check or ("exhaustive" if group.order <= EXHAUSTIVE_PROPS_LIMIT else "fast")
    if check == "exhaustive":
        bad = interchange_law_violation(group, table)
        if bad is not None:
            raise InterchangeLawError(bad)
    first_map = table[:, 0]
    second_map = table[0, :]
    try:
        first = Endomorphism(group, first_map, validate=check != "none")
        second = Endomorphism(group, second_map, validate=check != "none")
    except InvalidMapError as exc:
        if check == "fast":
            raise InterchangeLawError(_law_witness_from(group, table)) from exc
        raise
    if check == "fast":
        if image_commuting_violation(first, second) is not None or not np.array_equal(
            product_table(group, first.map, second.map), table
        ):
            raise InterchangeLawError(_law_witness_from(group, table))
    return EndoPair(first, second)


def _law_witness_from(group: FiniteGroup, table: np.ndarray):
    bad = sampled_interchange_violation(group, table, samples=200_000)
    return bad if bad is not None else interchange_law_violation(group, table)


def ring_from_table(group: FiniteGroup, table, check: str | None = None) -> InterchangeNearRing:
    pair = extract_pair(table, group, check=check)
    return InterchangeNearRing(group, np.asarray(table), pair)


def ring_from_record(record: dict) -> InterchangeNearRing:
    """Inverse of :meth:`InterchangeNearRing.to_record`."""
    from .groups import make_group_from_table

    if record.get("format") != 1:
        raise ValueError(f"unsupported record format {record.get('format')!r}")
    group = make_group_from_table(np.array(record["group"]["add"]), name=record["group"]["name"])
    return ring_from_table(group, np.array(record["product"]))


def dumps_ring(ring: InterchangeNearRing, props: "MagmaProps | None" = None) -> str:
    return json.dumps(ring.to_record(props), sort_keys=True)


# --------------------------------------------------------------------------
# identities that hold in every interchange near ring

@dataclass
class IdentityReport:
    passed: bool
    failures: dict[str, tuple] = field(default_factory=dict)


def check_basic_identities(ring: InterchangeNearRing) -> IdentityReport:
    """Check ``0.0 = 0``, zero distributing on both sides, ``x.y = x.0 + 0.y`` and
    ``(-x).(-y) = -(x.y)`` over all elements."""
    g, t = ring.group, ring.product
    add, neg = g.add, g.neg
    failures: dict[str, tuple] = {}
    if t[0, 0] != 0:
        failures["zero_idempotent"] = (0,)
    left = t[0][add] != add[t[0][:, None], t[0][None, :]]
    right = t[:, 0][add] != add[t[:, 0][:, None], t[:, 0][None, :]]
    for name, bad in (("zero_distributes_left", left), ("zero_distributes_right", right)):
        hit = np.argwhere(bad)
        if hit.size:
            failures[name] = tuple(int(v) for v in hit[0])
    split = np.argwhere(t != add[t[:, 0][:, None], t[0][None, :]])
    if split.size:
        failures["product_splits"] = tuple(int(v) for v in split[0])
    negs = np.argwhere(t[np.ix_(neg, neg)] != neg[t])
    if negs.size:
        failures["negation"] = tuple(int(v) for v in negs[0])
    return IdentityReport(not failures, failures)


# --------------------------------------------------------------------------
# magma properties

@dataclass(frozen=True)
class MagmaProps:
    associative: bool
    commutative: bool
    idempotent: bool
    zero_semigroup: bool
    proper: bool
    essential_tag: EssentialTag

    @property
    def band(self) -> bool:
        return self.associative and self.idempotent

    @property
    def essential(self) -> bool:
        """One of the three always-present classes: zero, left zero, right zero."""
        return self.essential_tag in (EssentialTag.ZERO, EssentialTag.LEFT_ZERO, EssentialTag.RIGHT_ZERO)

    @property
    def inessential(self) -> bool:
        return self.essential_tag is EssentialTag.INESSENTIAL

    def as_dict(self) -> dict:
        return {
            "associative": self.associative,
            "commutative": self.commutative,
            "idempotent": self.idempotent,
            "band": self.band,
            "zero_semigroup": self.zero_semigroup,
            "proper": self.proper,
            "essential_tag": self.essential_tag.value,
        }


def essential_tag(pair: EndoPair) -> EssentialTag:
    n = pair.group.order
    zero, ident = np.zeros(n), np.arange(n)
    f, s = pair.first.map, pair.second.map
    is_zero = lambda m: np.array_equal(m, zero)  # noqa: E731
    is_ident = lambda m: np.array_equal(m, ident)  # noqa: E731
    if is_zero(f) and is_zero(s):
        return EssentialTag.ZERO
    if is_ident(f) and is_zero(s):
        return EssentialTag.LEFT_ZERO  # x . y = x
    if is_zero(f) and is_ident(s):
        return EssentialTag.RIGHT_ZERO  # x . y = y
    if is_ident(f) and is_ident(s):
        return EssentialTag.ADDITIVE_COPY
    # The trivial group has zero == identity and lands in the first branch.
    return EssentialTag.INESSENTIAL


def associativity_violation(table: np.ndarray) -> tuple[int, int, int] | None:
    t = np.asarray(table)
    n = t.shape[0]
    for x in range(n):
        lhs = t[t[x]]          # [y, z] = (x.y).z
        rhs = t[x][t]          # [y, z] = x.(y.z)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return (x, int(bad[0, 0]), int(bad[0, 1]))
    return None


def one_sided_associativity(ring: InterchangeNearRing) -> bool:
    """``(x.0).0 = x.0``, ``(0.x).0 = 0.(x.0)`` and ``0.(0.x) = 0.x`` for all x."""
    t = ring.product
    col, row = t[:, 0], t[0, :]
    return bool(
        np.array_equal(t[col, 0], col) and np.array_equal(t[row, 0], t[0, col]) and np.array_equal(t[0, row], row)
    )


def has_annihilator(ring: InterchangeNearRing) -> bool:
    t = ring.product
    a = np.arange(ring.order)
    return bool(((t == a[:, None]).all(axis=1) & (t.T == a[:, None]).all(axis=1)).any())


def structural_props(ring: InterchangeNearRing) -> dict[str, bool]:
    """Properties read off the generating pair alone."""
    f, s = ring.pair.first, ring.pair.second
    n = ring.order
    ident = np.arange(n)
    return {
        "commutative": bool(np.array_equal(f.map, s.map)),
        "idempotent": bool(np.array_equal(ring.group.add[f.map, s.map], ident)),
        "associative": is_idempotent(f) and is_idempotent(s) and commutes(f, s),
        "zero_semigroup": not f.map.any() and not s.map.any(),
        "proper": not (np.array_equal(f.map, ident) and np.array_equal(s.map, ident)),
    }


def exhaustive_props(ring: InterchangeNearRing, sample: bool = False, seed: int = 0) -> dict[str, bool]:
    """Properties decided from the product table by brute force (or sampling)."""
    t = ring.product
    n = ring.order
    if sample:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, SAMPLE_SIZE))
        associative = bool((t[t[x, y], z] == t[x, t[y, z]]).all())
    else:
        associative = associativity_violation(t) is None
    return {
        "commutative": bool(np.array_equal(t, t.T)),
        "idempotent": bool(np.array_equal(np.diagonal(t), np.arange(n))),
        "associative": associative,
        "zero_semigroup": associative and bool((t == t[0, 0]).all()),
        "proper": not np.array_equal(t, ring.group.add),
    }


def magma_props(ring: InterchangeNearRing, exhaustive: bool | None = None) -> MagmaProps:
    """Classify the multiplication, cross-checking pair criteria against the table.

    Raises :class:`CrossValidationError` when the two routes disagree.
    """
    structural = structural_props(ring)
    if exhaustive is None:
        exhaustive = ring.order <= EXHAUSTIVE_PROPS_LIMIT
    brute = exhaustive_props(ring, sample=not exhaustive)
    for key, value in structural.items():
        if brute[key] != value and (exhaustive or key != "associative" or value):
            raise CrossValidationError(
                f"{key}: pair criterion says {value}, table says {brute[key]} for {ring!r}"
            )
    if exhaustive:
        if one_sided_associativity(ring) != brute["associative"]:
            raise CrossValidationError(f"one-sided associativity conditions disagree with full check for {ring!r}")
        if has_annihilator(ring) and not brute["zero_semigroup"]:
            raise CrossValidationError(f"{ring!r} has an annihilator but is not a zero semigroup")
    return MagmaProps(
        associative=structural["associative"],
        commutative=structural["commutative"],
        idempotent=structural["idempotent"],
        zero_semigroup=structural["zero_semigroup"],
        proper=structural["proper"],
        essential_tag=essential_tag(ring.pair),
    )


# --------------------------------------------------------------------------
# isomorphism

BRUTE_FORCE_ISO_LIMIT = 8


def transport(table: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """The table ``T'`` with ``T'[alpha(x), alpha(y)] = alpha(T[x, y])``."""
    alpha = np.asarray(alpha)
    out = np.empty_like(np.asarray(table))
    out[np.ix_(alpha, alpha)] = alpha[table]
    return out


def brute_force_isomorphism(r1: InterchangeNearRing, r2: InterchangeNearRing, bijections: str = "automorphisms"):
    """Search for ``phi`` with ``phi(x + y) = phi(x) + phi(y)`` and ``phi(x . y) = phi(x) . phi(y)``.

    ``bijections="automorphisms"`` tries every additive automorphism;
    ``"all"`` tries all ``n!`` permutations fixing 0 (order <= 8).
    Returns the image array of an isomorphism, or None.
    """
    g = r1.group
    if bijections == "all":
        n = g.order
        if n > BRUTE_FORCE_ISO_LIMIT:
            raise ValueError("permutation search is limited to order <= 8")
        candidates = (np.array((0,) + p) for p in itertools.permutations(range(1, n)))
    else:
        candidates = iter(endomorphism_table(g).automorphisms)
    add1, add2 = g.add, r2.group.add
    for phi in candidates:
        if not np.array_equal(phi[add1], add2[np.ix_(phi, phi)]):
            continue
        if np.array_equal(phi[r1.product], r2.product[np.ix_(phi, phi)]):
            return phi
    return None


def find_isomorphism(r1: InterchangeNearRing, r2: InterchangeNearRing, cross_check: bool | None = None):
    """``(alpha, reason)``: an automorphism with ``alpha^-1 pair1 alpha = pair2`` or None.

    Rings on different additive groups are never isomorphic here (reason
    ``"additive groups differ"``).  Up to order 8 the answer is confirmed by
    a direct search for a product-preserving automorphism.
    """
    if r1.group != r2.group:
        return None, "additive groups differ"
    g = r1.group
    found = None
    for alpha in enumerate_automorphisms(g):
        if conjugate_pair(alpha, r1.pair) == r2.pair:
            found = alpha
            break
    if cross_check is None:
        cross_check = g.order <= BRUTE_FORCE_ISO_LIMIT
    if cross_check:
        brute = brute_force_isomorphism(r1, r2)
        if (brute is None) != (found is None):
            raise CrossValidationError(
                f"similarity says {found is not None}, product-preserving search says {brute is not None}"
            )
    if found is None:
        return None, "generating pairs are not similar"
    return found, "similar generating pairs"


def are_isomorphic(r1: InterchangeNearRing, r2: InterchangeNearRing) -> bool:
    alpha, _ = find_isomorphism(r1, r2)
    return alpha is not None


# --------------------------------------------------------------------------
# batched checks over many pairs at once (arrays of End-indices)

def product_tables(group: FiniteGroup, first_maps: np.ndarray, second_maps: np.ndarray) -> np.ndarray:
    """``(P, n, n)`` stack of product tables."""
    return group.add[first_maps[:, :, None], second_maps[:, None, :]]


def batch_interchange_ok(group: FiniteGroup, tables: np.ndarray) -> np.ndarray:
    """Per-table boolean: the interchange law holds for all quadruples."""
    add = group.add
    n = group.order
    ok = np.ones(len(tables), dtype=bool)
    rows = np.arange(len(tables))[:, None, None]
    for w in range(n):
        for x in range(n):
            s = add[w, x]
            lhs = tables[rows, s, add[None, :, :]]                       # [y, z] = (w+x).(y+z)
            rhs = add[tables[:, w, :][:, :, None], tables[:, x, :][:, None, :]]  # w.y + x.z
            ok &= (lhs == rhs).all(axis=(1, 2))
    return ok


def batch_associative(tables: np.ndarray) -> np.ndarray:
    P, n, _ = tables.shape
    rows = np.arange(P)[:, None, None]
    ok = np.ones(P, dtype=bool)
    for x in range(n):
        tx = tables[:, x, :]                                # [P, y] = x.y
        lhs = tables[rows, tx[:, :, None], np.arange(n)[None, None, :]]   # (x.y).z
        rhs = tx[rows, tables]                     # x.(y.z)
        ok &= (lhs == rhs).all(axis=(1, 2))
    return ok


def batch_identities_ok(group: FiniteGroup, tables: np.ndarray) -> np.ndarray:
    """Per-table: all four basic identities hold."""
    add, neg = group.add, group.neg
    P = len(tables)
    rows = np.arange(P)[:, None, None]
    col, row = tables[:, :, 0], tables[:, 0, :]
    ok = tables[:, 0, 0] == 0
    ok &= (row[rows[:, :, 0][:, :, None], add[None]] == add[row[:, :, None], row[:, None, :]]).all(axis=(1, 2))
    ok &= (col[rows[:, :, 0][:, :, None], add[None]] == add[col[:, :, None], col[:, None, :]]).all(axis=(1, 2))
    ok &= (tables == add[col[:, :, None], row[:, None, :]]).all(axis=(1, 2))
    ok &= (tables[:, neg][:, :, neg] == neg[tables]).all(axis=(1, 2))
    return ok
