"""Matroid oracles and minors: rank queries, cuts, exchanges, bottleneck-cut sweep.

All matroids are immutable values over string element tokens. Minors are kept
as (base matroid, contracted set, deleted set) and answer rank queries through
the base oracle, so deletion and contraction work uniformly for every kind
without materializing basis families.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import CapacityError, InputError

Element = str

# Candidate-set bound for exhaustive basis listings; beyond this the caller
# gets a CapacityError instead of an open-ended enumeration.
ENUMERATION_CAP = 1 << 16


class Matroid:
    """Rank-oracle matroid; subclasses provide `ground` and `rank_of`."""

    ground: frozenset[Element]

    def rank_of(self, subset: frozenset[Element]) -> int:
        raise NotImplementedError

    def full_rank(self) -> int:
        return self.rank_of(self.ground)

    def is_independent(self, subset: Iterable[Element]) -> bool:
        subset = frozenset(subset)
        return self.rank_of(subset) == len(subset)

    def _check_subset(self, subset: frozenset[Element]) -> None:
        if not subset <= self.ground:
            stray = sorted(subset - self.ground)
            raise InputError(f"elements not in ground set: {stray}")


@dataclass(frozen=True)
class FreeMatroid(Matroid):
    """Every subset independent; the unique basis is the whole ground set."""

    ground: frozenset[Element]

    def __post_init__(self):
        object.__setattr__(self, "ground", frozenset(self.ground))

    def rank_of(self, subset):
        subset = frozenset(subset)
        self._check_subset(subset)
        return len(subset)


@dataclass(frozen=True)
class UniformMatroid(Matroid):
    """Bases are all subsets of a fixed size `rank_cap`."""

    ground: frozenset[Element]
    rank_cap: int

    def __post_init__(self):
        object.__setattr__(self, "ground", frozenset(self.ground))
        if not 0 <= self.rank_cap <= len(self.ground):
            raise InputError(
                f"uniform rank {self.rank_cap} out of range for "
                f"{len(self.ground)} elements"
            )

    def rank_of(self, subset):
        subset = frozenset(subset)
        self._check_subset(subset)
        return min(len(subset), self.rank_cap)


@dataclass(frozen=True)
class PartitionMatroid(Matroid):
    """At most `cap` elements from each block; blocks partition the ground set."""

    blocks: tuple[tuple[frozenset[Element], int], ...]

    def __post_init__(self):
        blocks = tuple((frozenset(b), int(c)) for b, c in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[Element] = set()
        for block, cap in blocks:
            if not 0 <= cap <= len(block):
                raise InputError(f"block cap {cap} out of range for block of size {len(block)}")
            if seen & block:
                raise InputError("partition blocks must be disjoint")
            seen |= block
        object.__setattr__(self, "ground", frozenset(seen))

    def rank_of(self, subset):
        subset = frozenset(subset)
        self._check_subset(subset)
        return sum(min(len(subset & block), cap) for block, cap in self.blocks)


@dataclass(frozen=True)
class GraphicMatroid(Matroid):
    """Elements are labelled graph edges; independent sets are the forests."""

    edges: tuple[tuple[Element, str, str], ...]

    def __post_init__(self):
        edges = tuple((str(e), str(u), str(v)) for e, u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        labels = [e for e, _, _ in edges]
        if len(set(labels)) != len(labels):
            raise InputError("graphic matroid edges must carry distinct element labels")
        object.__setattr__(self, "ground", frozenset(labels))

    def rank_of(self, subset):
        subset = frozenset(subset)
        self._check_subset(subset)
        parent: dict[str, str] = {}

        def find(x: str) -> str:
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rank = 0
        for label, u, v in self.edges:
            if label not in subset:
                continue
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank


@dataclass(frozen=True)
class ExplicitBasesMatroid(Matroid):
    """Matroid given by listing its bases; the exchange axiom is checked on construction."""

    bases: tuple[frozenset[Element], ...]

    def __post_init__(self):
        family = sorted({frozenset(b) for b in self.bases}, key=sorted)
        witness = validate_explicit_bases(family)
        if witness is not None:
            x_set, y_set, x = witness
            raise InputError(
                f"not a matroid basis family: X={sorted(x_set)}, Y={sorted(y_set)}, "
                f"x={x!r} has no valid exchange"
            )
        object.__setattr__(self, "bases", tuple(family))
        object.__setattr__(self, "ground", frozenset().union(*family))

    def rank_of(self, subset):
        subset = frozenset(subset)
        self._check_subset(subset)
        return max(len(subset & basis) for basis in self.bases)


@dataclass(frozen=True)
class MatroidView:
    """A minor of `base`, tracked as contracted and deleted element sets.

    The contracted set stays independent in the base matroid; rank queries on
    the current ground use r(X | contracted) - r(contracted).
    """

    base: Matroid
    contracted: frozenset[Element] = frozenset()
    deleted: frozenset[Element] = frozenset()

    def __post_init__(self):
        contracted = frozenset(self.contracted)
        deleted = frozenset(self.deleted)
        object.__setattr__(self, "contracted", contracted)
        object.__setattr__(self, "deleted", deleted)
        if contracted & deleted:
            raise InputError("contracted and deleted sets must be disjoint")
        if not contracted <= self.base.ground or not deleted <= self.base.ground:
            raise InputError("minor sets must lie in the base ground set")
        if not self.base.is_independent(contracted):
            raise InputError("contracted set must be independent in the base matroid")

    @property
    def ground(self) -> frozenset[Element]:
        return self.base.ground - self.contracted - self.deleted

    def rank_of(self, subset) -> int:
        subset = frozenset(subset)
        if not subset <= self.ground:
            stray = sorted(subset - self.ground)
            raise InputError(f"elements outside the current minor: {stray}")
        base_rank = self.base.rank_of(subset | self.contracted)
        return base_rank - self.base.rank_of(self.contracted)

    def full_rank(self) -> int:
        cached = self.__dict__.get("_full_rank")
        if cached is None:
            cached = self.rank_of(self.ground)
            object.__setattr__(self, "_full_rank", cached)
        return cached

    def is_independent(self, subset) -> bool:
        subset = frozenset(subset)
        return self.rank_of(subset) == len(subset)


ViewLike = Union[Matroid, MatroidView]


def as_view(matroid: ViewLike) -> MatroidView:
    if isinstance(matroid, MatroidView):
        return matroid
    return MatroidView(matroid)


def rank(view: ViewLike, subset: Iterable[Element]) -> int:
    return as_view(view).rank_of(frozenset(subset))


def is_basis(view: ViewLike, candidate: Iterable[Element]) -> bool:
    view = as_view(view)
    candidate = frozenset(candidate)
    if not candidate <= view.ground:
        return False
    return view.rank_of(candidate) == len(candidate) == view.full_rank()


def contract(view: ViewLike, element: Element) -> MatroidView:
    view = as_view(view)
    if element not in view.ground:
        raise InputError(f"cannot contract {element!r}: not in the current ground set")
    if view.rank_of(frozenset({element})) != 1:
        raise InputError(f"cannot contract the loop {element!r}")
    return MatroidView(view.base, view.contracted | {element}, view.deleted)


def delete(view: ViewLike, subset: Iterable[Element]) -> MatroidView:
    view = as_view(view)
    subset = frozenset(subset)
    if not subset <= view.ground:
        stray = sorted(subset - view.ground)
        raise InputError(f"cannot delete elements outside the minor: {stray}")
    return MatroidView(view.base, view.contracted, view.deleted | subset)


def is_cut(view: ViewLike, candidate: Iterable[Element]) -> bool:
    """True iff removing `candidate` leaves no basis of the current minor."""
    view = as_view(view)
    candidate = frozenset(candidate)
    if not candidate <= view.ground:
        stray = sorted(candidate - view.ground)
        raise InputError(f"cut candidates must lie in the current ground set: {stray}")
    return view.rank_of(view.ground - candidate) < view.full_rank()


def is_coloop(matroid: ViewLike, element: Element) -> bool:
    """True iff `element` lies in every basis."""
    view = as_view(matroid)
    if element not in view.ground:
        raise InputError(f"{element!r} not in the ground set")
    return view.rank_of(view.ground - {element}) < view.full_rank()


def exchange_set(matroid: ViewLike, basis: Iterable[Element], element: Element) -> frozenset[Element]:
    """All f outside `basis` such that basis - element + f is again a basis.

    Empty exactly when `element` is a coloop.
    """
    view = as_view(matroid)
    basis = frozenset(basis)
    if not is_basis(view, basis):
        raise InputError(f"{sorted(basis)} is not a basis")
    if element not in basis:
        raise InputError(f"{element!r} is not in the given basis")
    size = len(basis)
    out = set()
    for candidate in view.ground - basis:
        if view.rank_of(basis - {element} | {candidate}) == size:
            out.add(candidate)
    return frozenset(out)


def min_weight_basis(matroid: ViewLike, weights: Mapping[Element, object]) -> frozenset[Element]:
    """Greedy minimum-weight basis; ties broken by element token order."""
    view = as_view(matroid)
    missing = [e for e in view.ground if e not in weights]
    if missing:
        raise InputError(f"weights missing for elements: {sorted(missing)}")
    chosen: set[Element] = set()
    current = 0
    for element in sorted(view.ground, key=lambda e: (weights[e], e)):
        r = view.rank_of(frozenset(chosen | {element}))
        if r > current:
            chosen.add(element)
            current = r
    return frozenset(chosen)


def enumerate_bases(matroid: ViewLike) -> list[frozenset[Element]]:
    """All bases of a desk-scale matroid or minor, in lexicographic order."""
    view = as_view(matroid)
    if isinstance(matroid, ExplicitBasesMatroid):
        return list(matroid.bases)
    ground = sorted(view.ground)
    r = view.full_rank()
    if comb(len(ground), r) > ENUMERATION_CAP:
        raise CapacityError(
            f"too many candidate sets to enumerate bases of a {len(ground)}-element matroid"
        )
    out = []
    for combo in combinations(ground, r):
        subset = frozenset(combo)
        if view.rank_of(subset) == r:
            out.append(subset)
    return out


def validate_explicit_bases(sets: Iterable[Iterable[Element]]):
    """Check the one-element exchange axiom on a family of sets.

    Returns None when the family is the basis family of a matroid, otherwise a
    violating triple (X, Y, x) with x in X - Y admitting no exchange.
    """
    family = sorted({frozenset(s) for s in sets}, key=sorted)
    if not family or any(not s for s in family):
        raise InputError("basis family must be a non-empty list of non-empty sets")
    members = set(family)
    for x_set in family:
        for y_set in family:
            if x_set == y_set:
                continue
            for x in sorted(x_set - y_set):
                if not any(x_set - {x} | {y} in members for y in y_set - x_set):
                    return (x_set, y_set, x)
    return None


@dataclass(frozen=True)
class CutCertificate:
    """An inclusion-minimal cut of one player's minor plus its bottleneck element."""

    cut: frozenset[Element]
    bottleneck: Element
    owner: object
    bottleneck_weight: object


def max_bottleneck_min_cut(
    views: Mapping[object, MatroidView],
    weights: Mapping[Element, object],
    tie_order: Sequence[Element],
) -> Optional[CutCertificate]:
    """Find a minimal cut whose cheapest element is as expensive as possible.

    Threshold sweep: walk elements in decreasing (weight, tie-rank) order and
    grow a prefix until it contains a cut of some view; the last element added
    is the bottleneck, and the owning view's slice of the prefix is shrunk to
    an inclusion-minimal cut that keeps the bottleneck. Owner ties go to the
    earliest view in the mapping; equal-weight elements are consumed in
    reverse tie order, so the bottleneck is the tie-minimal argmin of the cut.

    Returns None when no view has a cut, i.e. every active view has rank 0.
    """
    if not views:
        raise InputError("at least one view is required")
    active = {key: v for key, v in views.items() if v.full_rank() > 0}
    if not active:
        return None
    union: set[Element] = set()
    for view in active.values():
        union |= view.ground
    missing = [e for e in union if e not in weights]
    if missing:
        raise InputError(f"weights missing for elements: {sorted(missing)}")
    tie_rank = {e: i for i, e in enumerate(tie_order)}
    missing = [e for e in union if e not in tie_rank]
    if missing:
        raise InputError(f"tie order missing elements: {sorted(missing)}")

    order = sorted(union, key=lambda e: (weights[e], tie_rank[e]), reverse=True)
    prefix: list[Element] = []
    owner = None
    bottleneck = None
    for element in order:
        prefix.append(element)
        pset = frozenset(prefix)
        for key, view in active.items():
            slice_ = pset & view.ground
            if slice_ and is_cut(view, slice_):
                owner = key
                break
        if owner is not None:
            bottleneck = element
            break
    if owner is None:
        raise InputError("no cut found although an active view has positive rank")

    view = active[owner]
    cut = set(frozenset(prefix) & view.ground)
    for candidate in prefix:
        if candidate == bottleneck or candidate not in cut:
            continue
        if is_cut(view, frozenset(cut - {candidate})):
            cut.remove(candidate)
    return CutCertificate(frozenset(cut), bottleneck, owner, weights[bottleneck])
