"""Census of interchange near rings on a group, up to isomorphism.

Isomorphism classes correspond to similarity orbits of image-commuting
pairs, so a census enumerates the pairs as End-index arrays, labels each with
its orbit, and evaluates filters on one representative per orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .endo import EndoPair, burnside_count, endomorphism_table, orbit_labels
from .errors import CapExceededError, CrossValidationError
from .groups import FiniteGroup, groups_of_order, ppc_rank
from .interchange import EssentialTag, MagmaProps, build_from_pair, magma_props

FILTERS = (
    "all",
    "associative",
    "commutative",
    "commutative_associative",
    "idempotent",
    "band",
    "essential",
    "essential4",
    "inessential",
)

# Filters whose pairs are all commuting idempotents, so the smaller domain suffices.
_ASSOCIATIVE_FILTERS = {"associative", "commutative_associative", "band"}

PAIR_BUDGET = 1 << 22


def _matches(props: MagmaProps, name: str) -> bool:
    if name == "all":
        return True
    if name == "commutative_associative":
        return props.commutative and props.associative
    if name == "essential":
        return props.essential
    if name == "essential4":
        return props.essential_tag is not EssentialTag.INESSENTIAL
    if name == "inessential":
        return props.inessential
    return bool(getattr(props, name))


@dataclass
class ClassRecord:
    pair: EndoPair
    props: MagmaProps
    orbit_size: int


@dataclass
class CensusReport:
    group: str
    order: int
    filter: str
    domain: str
    pair_count: int
    total_classes: int
    counts: dict[str, int]
    representatives: list[ClassRecord] = field(default_factory=list)

    @property
    def count(self) -> int:
        return self.counts[self.filter]

    def as_dict(self) -> dict:
        return {
            "format": 1,
            "group": self.group,
            "order": self.order,
            "filter": self.filter,
            "domain": self.domain,
            "pair_count": self.pair_count,
            "total_classes": self.total_classes,
            "counts": dict(self.counts),
            "classes": [
                {
                    "pair": r.pair.notation,
                    "orbit_size": r.orbit_size,
                    "props": r.props.as_dict(),
                }
                for r in self.representatives
            ],
        }


def image_commuting_pairs(group: FiniteGroup, budget: int = PAIR_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """All image-commuting pairs as End-index arrays, in lexicographic order."""
    table = endomorphism_table(group)
    E = len(table)
    if E * E > budget and group.abelian:
        raise CapExceededError(f"{E * E} pairs on {group.name} exceed the pair budget {budget}")
    if group.abelian:
        first, second = np.divmod(np.arange(E * E, dtype=np.int64), E)
        return first, second
    first, second = np.nonzero(table.image_commuting)
    if len(first) > budget:
        raise CapExceededError(f"{len(first)} pairs on {group.name} exceed the pair budget {budget}")
    return first.astype(np.int64), second.astype(np.int64)


def commuting_idempotent_pairs(group: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    """Image-commuting pairs of commuting idempotents as End-index arrays, lexicographic."""
    table = endomorphism_table(group)
    idem = np.flatnonzero(table.idempotent_mask)
    maps = table.maps[idem]
    k = len(idem)
    ok = np.zeros((k, k), dtype=bool)
    for a in range(k):
        ok[a] = (maps[a][maps] == maps[:, maps[a]]).all(axis=1)
    if not group.abelian:
        ok &= table.image_commuting[np.ix_(idem, idem)]
    ia, ib = np.nonzero(ok)
    return idem[ia].astype(np.int64), idem[ib].astype(np.int64)


def pair_properties(group: FiniteGroup, first: np.ndarray, second: np.ndarray) -> dict[str, np.ndarray]:
    """Pair-criterion properties for many pairs at once (used for orbit-constancy checks)."""
    table = endomorphism_table(group)
    maps = table.maps
    n = group.order
    f, s = maps[first], maps[second]
    rows = np.arange(len(first))[:, None]
    idem = table.idempotent_mask
    commute = (f[rows, s] == s[rows, f]).all(axis=1)
    zero, ident = table.zero_index, table.identity_index
    tag = np.full(len(first), 4, dtype=np.int8)
    tag[(first == ident) & (second == ident)] = 3
    tag[(first == zero) & (second == ident)] = 2
    tag[(first == ident) & (second == zero)] = 1
    tag[(first == zero) & (second == zero)] = 0
    return {
        "commutative": first == second,
        "idempotent": (group.add[f, s] == np.arange(n)).all(axis=1),
        "associative": idem[first] & idem[second] & commute,
        "tag": tag,
    }


def _check_orbit_constancy(group: FiniteGroup, first, second, labels) -> None:
    props = pair_properties(group, first, second)
    _, inverse = np.unique(labels, return_inverse=True)
    for name, values in props.items():
        lo = np.full(inverse.max() + 1, np.iinfo(np.int64).max)
        hi = np.full(inverse.max() + 1, np.iinfo(np.int64).min)
        v = values.astype(np.int64)
        np.minimum.at(lo, inverse, v)
        np.maximum.at(hi, inverse, v)
        if (lo != hi).any():
            raise CrossValidationError(f"property {name} is not constant on a similarity orbit of {group.name}")


def classify(
    group: FiniteGroup,
    filter: str = "all",
    validate: bool = True,
    burnside: bool | None = None,
) -> CensusReport:
    """Isomorphism classes of interchange near rings on ``group`` passing ``filter``.

    The associative filters only need commuting idempotent pairs; every other
    filter runs over all image-commuting pairs.  ``validate`` checks that pair
    properties are constant on each orbit; ``burnside`` recounts the orbits by
    averaging fixed points over Aut(G) (default: when cheap).
    """
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}; choose from {', '.join(FILTERS)}")
    table = endomorphism_table(group)
    if filter in _ASSOCIATIVE_FILTERS:
        domain = "commuting_idempotent"
        first, second = commuting_idempotent_pairs(group)
        reported = sorted(_ASSOCIATIVE_FILTERS)
    else:
        domain = "image_commuting"
        first, second = image_commuting_pairs(group)
        reported = list(FILTERS)

    labels = orbit_labels(group, first, second)
    reps, sizes = np.unique(labels, return_counts=True)
    if validate:
        _check_orbit_constancy(group, first, second, labels)
    if burnside is None:
        burnside = len(table.automorphisms) * len(first) <= 50_000_000
    if burnside and burnside_count(group, first, second) != len(reps):
        raise CrossValidationError(f"orbit count on {group.name} disagrees with the fixed-point average")

    E = len(table)
    records: list[ClassRecord] = []
    for code, size in zip(reps.tolist(), sizes.tolist()):
        pair = EndoPair(table.endomorphism(code // E), table.endomorphism(code % E))
        ring = build_from_pair(group, pair)
        records.append(ClassRecord(pair, magma_props(ring), size))

    counts = {name: sum(_matches(r.props, name) for r in records) for name in reported}
    if domain == "commuting_idempotent":
        counts["associative"] = len(records)
    else:
        counts["all"] = len(records)
    if group.abelian:
        _check_bounds(group, counts)

    shown = [r for r in records if _matches(r.props, filter)]
    return CensusReport(
        group=group.name,
        order=group.order,
        filter=filter,
        domain=domain,
        pair_count=len(first),
        total_classes=len(records),
        counts=counts,
        representatives=shown,
    )


def _check_bounds(group: FiniteGroup, counts: dict[str, int]) -> None:
    r = ppc_rank(group)
    if counts.get("associative", 0) > 4**r:
        raise CrossValidationError(f"{counts['associative']} associative classes on {group.name} exceed 4^{r}")
    if counts.get("band", 0) > 2**r:
        raise CrossValidationError(f"{counts['band']} band classes on {group.name} exceed 2^{r}")


@dataclass
class OrderCensus:
    order: int
    filter: str
    total: int
    per_group: dict[str, int]
    complete: bool
    abelian_only: bool = False

    def as_dict(self) -> dict:
        return {
            "format": 1,
            "order": self.order,
            "filter": self.filter,
            "total": self.total,
            "per_group": dict(self.per_group),
            "complete": self.complete,
            "abelian_only": self.abelian_only,
        }


def census_by_order(order: int, filter: str = "all", abelian_only: bool = False) -> OrderCensus:
    """Sum class counts over the built-in groups of the given order.

    Isomorphic interchange near rings have isomorphic additive groups, so the
    per-group counts add up.  ``complete`` is False when the built-in corpus
    may miss non-abelian groups of that order (orders above 8).
    """
    groups, complete = groups_of_order(order)
    if abelian_only:
        groups = [g for g in groups if g.abelian]
        complete = True
    per_group = {g.name: classify(g, filter).count for g in groups}
    return OrderCensus(order, filter, sum(per_group.values()), per_group, complete, abelian_only)
