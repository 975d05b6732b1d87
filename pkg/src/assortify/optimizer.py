"""Per-store assortment optimization.

For a trade-off weight ``lam`` in [0, 1] the per-product score is

    score_j = (1 - lam) / k * revenue'_j  -  lam / k * higg'_j

where revenue_j is price times forecast demand at the store, higg_j the
product sustainability score, and the primed values are either raw or
min-max rescaled to [0, 1] over the store's candidates. The score is
additive over products, so the exact optimum under an exactly-k cardinality
constraint is the top-k by score; a brute-force enumerator is provided as
an independent check. Sweeping ``lam`` over a grid yields a front of
assortments trading revenue against sustainability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .demand import DemandMatrix
from .domain import Catalog
from .errors import (
    DimensionMismatch,
    EmptyAssortment,
    EmptyInput,
    InstanceTooLarge,
    InsufficientCandidates,
    InvalidConfig,
    InvalidLocks,
)
from .sustainability import ProductHiggScore

BRUTE_FORCE_LIMIT = 10**6


@dataclass(frozen=True)
class ObjectiveScales:
    """Per-store min/max of the two raw objectives over candidate products."""

    revenue_min: float
    revenue_max: float
    higg_min: float
    higg_max: float

    def __post_init__(self):
        if self.revenue_max < self.revenue_min or self.higg_max < self.higg_min:
            raise InvalidConfig("scale max must be >= min")


@dataclass(frozen=True)
class OptimizeRequest:
    store_index: int
    k: int
    trade_off_lambda: float
    locked_in: frozenset[str] = frozenset()
    locked_out: frozenset[str] = frozenset()
    normalize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "locked_in", frozenset(self.locked_in))
        object.__setattr__(self, "locked_out", frozenset(self.locked_out))


@dataclass(frozen=True)
class AssortmentSolution:
    store_index: int
    k: int
    trade_off_lambda: float
    product_ids: tuple[str, ...]
    revenue_score: float
    higg_score: float
    objective_value: float


@dataclass(frozen=True)
class ParetoFront:
    """Distinct assortments from a trade-off sweep, in ascending-lambda order."""

    solutions: tuple[AssortmentSolution, ...]
    non_dominated: tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self):
        return iter(zip(self.solutions, self.non_dominated))


def raw_objectives(
    store_index: int,
    demand: DemandMatrix,
    catalog: Catalog,
    higg: list[ProductHiggScore],
) -> tuple[np.ndarray, np.ndarray]:
    """Per-product (expected revenue, sustainability score) at one store."""
    if len(higg) != catalog.n_products or demand.n_products != catalog.n_products:
        raise DimensionMismatch(
            f"catalog has {catalog.n_products} products, demand has "
            f"{demand.n_products}, higg has {len(higg)}"
        )
    prices = np.array([p.price for p in catalog.products], dtype=np.float64)
    revenue = prices * demand.values[:, store_index]
    higg_arr = np.array([h.score for h in higg], dtype=np.float64)
    return revenue, higg_arr


def compute_scales(
    store_index: int,
    demand: DemandMatrix,
    catalog: Catalog,
    higg: list[ProductHiggScore],
) -> ObjectiveScales:
    revenue, higg_arr = raw_objectives(store_index, demand, catalog, higg)
    return ObjectiveScales(
        revenue_min=float(revenue.min()),
        revenue_max=float(revenue.max()),
        higg_min=float(higg_arr.min()),
        higg_max=float(higg_arr.max()),
    )


def _rescale(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    # Degenerate range maps to all-zero so the other objective decides.
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def product_scores(
    store_index: int,
    demand: DemandMatrix,
    catalog: Catalog,
    higg: list[ProductHiggScore],
    trade_off_lambda: float,
    k: int,
    scales: ObjectiveScales,
    normalize: bool,
) -> np.ndarray:
    """Weighted-sum score per product; the subset objective is their sum."""
    revenue, higg_arr = raw_objectives(store_index, demand, catalog, higg)
    if normalize:
        revenue = _rescale(revenue, scales.revenue_min, scales.revenue_max)
        higg_arr = _rescale(higg_arr, scales.higg_min, scales.higg_max)
    lam = trade_off_lambda
    return ((1.0 - lam) / k) * revenue - (lam / k) * higg_arr


def _subset_objective(scores: np.ndarray, indices: np.ndarray) -> float:
    # Canonical evaluation shared by the top-k picker and the enumerator:
    # fsum is exactly rounded, so the value depends only on the score
    # multiset, never on summation order. Subsets that are mathematically
    # tied therefore compare equal bit-for-bit.
    return math.fsum(scores[indices])


def _validate_request(request: OptimizeRequest, catalog: Catalog) -> None:
    if request.k < 1:
        raise InvalidConfig(f"k must be >= 1, got {request.k}")
    if not 0.0 <= request.trade_off_lambda <= 1.0:
        raise InvalidConfig(
            f"trade_off_lambda must be in [0, 1], got {request.trade_off_lambda}"
        )
    if not 0 <= request.store_index < catalog.n_stores:
        raise DimensionMismatch(
            f"store index {request.store_index} out of range for {catalog.n_stores} stores"
        )
    overlap = request.locked_in & request.locked_out
    if overlap:
        raise InvalidLocks(f"products locked both in and out: {sorted(overlap)}")
    for pid in sorted(request.locked_in | request.locked_out):
        if catalog.product_index(pid) is None:
            raise InvalidLocks(f"locked product '{pid}' is not in the catalog")
    if len(request.locked_in) > request.k:
        raise InvalidLocks(
            f"{len(request.locked_in)} locked-in products exceed assortment size {request.k}"
        )


def _partition_candidates(
    request: OptimizeRequest, catalog: Catalog
) -> tuple[list[int], list[int]]:
    """(locked-in indices, eligible fill indices), both in catalog order."""
    locked = [i for i, p in enumerate(catalog.products) if p.id in request.locked_in]
    eligible = [
        i
        for i, p in enumerate(catalog.products)
        if p.id not in request.locked_in and p.id not in request.locked_out
    ]
    return locked, eligible


def _build_solution(
    request: OptimizeRequest,
    catalog: Catalog,
    selected: list[int],
    scores: np.ndarray,
    revenue: np.ndarray,
    higg_arr: np.ndarray,
) -> AssortmentSolution:
    idx = np.array(sorted(selected), dtype=np.int64)
    ids = tuple(sorted(catalog.products[i].id for i in idx))
    return AssortmentSolution(
        store_index=request.store_index,
        k=request.k,
        trade_off_lambda=request.trade_off_lambda,
        product_ids=ids,
        revenue_score=float(revenue[idx].sum()) / request.k,
        higg_score=float(higg_arr[idx].mean()),
        objective_value=_subset_objective(scores, idx),
    )


def optimize_assortment(
    request: OptimizeRequest,
    demand: DemandMatrix,
    catalog: Catalog,
    higg: list[ProductHiggScore],
    scales: ObjectiveScales | None = None,
) -> AssortmentSolution:
    """Exactly-k selection: locked-in products plus the top-scoring fill.

    Ties break toward the ascending product id, which makes the result the
    lexicographically smallest optimal id-set.
    """
    _validate_request(request, catalog)
    if scales is None:
        scales = compute_scales(request.store_index, demand, catalog, higg)
    revenue, higg_arr = raw_objectives(request.store_index, demand, catalog, higg)
    scores = product_scores(
        request.store_index, demand, catalog, higg,
        request.trade_off_lambda, request.k, scales, request.normalize,
    )

    locked, eligible = _partition_candidates(request, catalog)
    n_fill = request.k - len(locked)
    if len(eligible) < n_fill:
        raise InsufficientCandidates(
            f"need {n_fill} fill products but only {len(eligible)} are eligible"
        )
    ranked = sorted(eligible, key=lambda i: (-scores[i], catalog.products[i].id))
    selected = locked + ranked[:n_fill]
    return _build_solution(request, catalog, selected, scores, revenue, higg_arr)


def brute_force_oracle(
    request: OptimizeRequest,
    demand: DemandMatrix,
    catalog: Catalog,
    higg: list[ProductHiggScore],
    scales: ObjectiveScales | None = None,
) -> AssortmentSolution:
    """Exhaustive reference: evaluates every feasible k-subset.

    Tie-break matches optimize_assortment: among equal objective values the
    lexicographically smallest sorted id tuple wins. Guarded to instances
    with at most BRUTE_FORCE_LIMIT candidate subsets.
    """
    _validate_request(request, catalog)
    if scales is None:
        scales = compute_scales(request.store_index, demand, catalog, higg)
    revenue, higg_arr = raw_objectives(request.store_index, demand, catalog, higg)
    scores = product_scores(
        request.store_index, demand, catalog, higg,
        request.trade_off_lambda, request.k, scales, request.normalize,
    )

    locked, eligible = _partition_candidates(request, catalog)
    n_fill = request.k - len(locked)
    if len(eligible) < n_fill:
        raise InsufficientCandidates(
            f"need {n_fill} fill products but only {len(eligible)} are eligible"
        )
    n_subsets = math.comb(len(eligible), n_fill)
    if n_subsets > BRUTE_FORCE_LIMIT:
        raise InstanceTooLarge(
            f"C({len(eligible)}, {n_fill}) = {n_subsets} exceeds {BRUTE_FORCE_LIMIT}"
        )

    best_value = -math.inf
    best_ids: tuple[str, ...] | None = None
    best_subset: list[int] = []
    for fill in combinations(eligible, n_fill):
        subset = locked + list(fill)
        value = _subset_objective(scores, np.array(subset, dtype=np.int64))
        ids = tuple(sorted(catalog.products[i].id for i in subset))
        if value > best_value or (value == best_value and (best_ids is None or ids < best_ids)):
            best_value = value
            best_ids = ids
            best_subset = subset
    return _build_solution(request, catalog, best_subset, scores, revenue, higg_arr)


def non_dominated_filter(points: list[tuple[float, float]]) -> list[bool]:
    """Flag each (revenue, higg) point; True means no other point dominates it.

    A point dominates another when its revenue is >= and its higg is <= with
    at least one strict inequality; exact duplicates never dominate each
    other. Single sorted sweep, O(n log n).
    """
    n = len(points)
    if n == 0:
        return []
    revenue = np.array([p[0] for p in points], dtype=np.float64)
    higg = np.array([p[1] for p in points], dtype=np.float64)
    order = sorted(range(n), key=lambda i: (-revenue[i], higg[i]))

    flags = [True] * n
    best_higher_rev = math.inf  # min higg among points with strictly greater revenue
    i = 0
    while i < n:
        j = i
        group_rev = revenue[order[i]]
        while j < n and revenue[order[j]] == group_rev:
            j += 1
        group_min_higg = higg[order[i]]
        for t in range(i, j):
            p = order[t]
            if best_higher_rev <= higg[p] or higg[p] > group_min_higg:
                flags[p] = False
        best_higher_rev = min(best_higher_rev, group_min_higg)
        i = j
    return flags


def pareto_front(
    store_index: int,
    k: int,
    lambda_grid: list[float],
    demand: DemandMatrix,
    catalog: Catalog,
    higg: list[ProductHiggScore],
    locked_in: frozenset[str] = frozenset(),
    locked_out: frozenset[str] = frozenset(),
    normalize: bool = True,
) -> ParetoFront:
    """One optimization per grid value; duplicate assortments keep the lowest
    lambda; dominance is judged in (maximize revenue, minimize higg) space."""
    if not lambda_grid:
        raise InvalidConfig("lambda grid must be non-empty")
    arr = list(lambda_grid)
    if any(not 0.0 <= x <= 1.0 for x in arr):
        raise InvalidConfig("lambda grid values must lie in [0, 1]")
    if any(b <= a for a, b in zip(arr, arr[1:])):
        raise InvalidConfig("lambda grid must be strictly ascending")

    scales = compute_scales(store_index, demand, catalog, higg)
    kept: list[AssortmentSolution] = []
    seen: set[tuple[str, ...]] = set()
    for lam in arr:
        request = OptimizeRequest(
            store_index=store_index, k=k, trade_off_lambda=lam,
            locked_in=locked_in, locked_out=locked_out, normalize=normalize,
        )
        solution = optimize_assortment(request, demand, catalog, higg, scales=scales)
        if solution.product_ids in seen:
            continue
        seen.add(solution.product_ids)
        kept.append(solution)

    flags = non_dominated_filter([(s.revenue_score, s.higg_score) for s in kept])
    return ParetoFront(solutions=tuple(kept), non_dominated=tuple(flags))


def fabric_composition(solution: AssortmentSolution, catalog: Catalog) -> dict[str, float]:
    """Fabric mass shares of the selected products; shares sum to 1."""
    if not solution.product_ids:
        raise EmptyAssortment("composition of an empty assortment is undefined")
    mass: dict[str, float] = {}
    total = 0.0
    for pid in solution.product_ids:
        index = catalog.product_index(pid)
        if index is None:
            raise DimensionMismatch(f"solution product '{pid}' is not in the catalog")
        product = catalog.products[index]
        total += product.weight_kg
        for fabric, fraction in product.blend:
            mass[fabric] = mass.get(fabric, 0.0) + fraction * product.weight_kg
    return {
        fabric: mass[fabric] / total
        for fabric in sorted(mass, key=lambda f: (-mass[f], f))
    }


def histogram(values: list[float], n_bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bins over [min, max]; the max value lands in the last bin."""
    if n_bins < 1:
        raise InvalidConfig(f"n_bins must be >= 1, got {n_bins}")
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyInput("cannot bin an empty value list")
    lo, hi = float(arr.min()), float(arr.max())
    if lo == hi:
        out = [(lo, hi, int(arr.size))]
        out.extend((lo, hi, 0) for _ in range(n_bins - 1))
        return out
    edges = np.linspace(lo, hi, n_bins + 1)
    counts, _ = np.histogram(arr, bins=edges)
    return [
        (float(edges[b]), float(edges[b + 1]), int(counts[b]))
        for b in range(n_bins)
    ]
