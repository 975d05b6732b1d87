"""Demand estimation: sparse sales, factor-model fit, imputation, trend.

The fit alternates exact least-squares solves between the product side
(factors + per-product bias) and the store side (factors + per-store bias),
with separate L2 penalties on factors and biases. Each half-step minimizes
the full objective over its side exactly, so the recorded loss history is
non-increasing. Unobserved cells are then filled with the model prediction,
clamped at zero; observed cells always pass through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import loss_value, solve_side
from .errors import (
    DimensionMismatch,
    EmptyMatrix,
    InvalidConfig,
    NonPositiveTrend,
    SingularSystem,
    ZeroDemandStore,
)


@dataclass(frozen=True)
class SalesMatrix:
    """Sparse product x store observations with per-observation confidence.

    Observations are stored sorted by (product, store); at most one per cell.
    """

    n_products: int
    n_stores: int
    product_idx: np.ndarray
    store_idx: np.ndarray
    values: np.ndarray
    confidence: np.ndarray

    def __post_init__(self):
        pi = np.ascontiguousarray(self.product_idx, dtype=np.int64)
        si = np.ascontiguousarray(self.store_idx, dtype=np.int64)
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        conf = np.ascontiguousarray(self.confidence, dtype=np.float64)
        if not (pi.shape == si.shape == vals.shape == conf.shape) or pi.ndim != 1:
            raise ValueError("observation arrays must be 1-D and equally sized")
        if pi.size:
            if pi.min() < 0 or pi.max() >= self.n_products:
                raise ValueError("product index out of range")
            if si.min() < 0 or si.max() >= self.n_stores:
                raise ValueError("store index out of range")
            if vals.min() < 0:
                raise ValueError("sales values must be >= 0")
            if conf.min() <= 0:
                raise ValueError("confidence weights must be > 0")
        order = np.lexsort((si, pi))
        pi, si, vals, conf = pi[order], si[order], vals[order], conf[order]
        cells = pi * self.n_stores + si
        if np.unique(cells).size != cells.size:
            raise ValueError("duplicate (product, store) observation")
        for name, arr in (
            ("product_idx", pi),
            ("store_idx", si),
            ("values", vals),
            ("confidence", conf),
        ):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_observations(
        cls,
        n_products: int,
        n_stores: int,
        observations: list[tuple[int, int, float]],
        confidence: list[float] | None = None,
    ) -> "SalesMatrix":
        if confidence is None:
            confidence = [1.0] * len(observations)
        if len(confidence) != len(observations):
            raise ValueError("confidence list must match observations")
        pi = np.array([o[0] for o in observations], dtype=np.int64)
        si = np.array([o[1] for o in observations], dtype=np.int64)
        vals = np.array([o[2] for o in observations], dtype=np.float64)
        return cls(n_products, n_stores, pi, si, vals, np.array(confidence, dtype=np.float64))

    @property
    def n_observations(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class AlsConfig:
    rank: int = 8
    reg_lambda: float = 0.1
    n_iterations: int = 20
    seed: int = 0
    init_scale: float = 0.1
    convergence_tol: float = 1e-5

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidConfig(f"rank must be >= 1, got {self.rank}")
        if self.n_iterations < 1:
            raise InvalidConfig(f"n_iterations must be >= 1, got {self.n_iterations}")
        if self.reg_lambda < 0:
            raise InvalidConfig(f"reg_lambda must be >= 0, got {self.reg_lambda}")
        if self.init_scale <= 0:
            raise InvalidConfig(f"init_scale must be > 0, got {self.init_scale}")
        if self.convergence_tol < 0:
            raise InvalidConfig(f"convergence_tol must be >= 0, got {self.convergence_tol}")


@dataclass(frozen=True)
class FactorModel:
    """Fitted factors: product/store embeddings plus bias vectors."""

    u: np.ndarray
    v: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    final_loss: float
    loss_history: tuple[float, ...]

    def __post_init__(self):
        for arr in (self.u, self.v, self.beta, self.gamma):
            arr.setflags(write=False)

    @property
    def n_products(self) -> int:
        return self.u.shape[0]

    @property
    def n_stores(self) -> int:
        return self.v.shape[0]

    @property
    def rank(self) -> int:
        return self.u.shape[1]

    def predict(self) -> np.ndarray:
        """Dense prediction matrix, unclamped."""
        return self.u @ self.v.T + self.beta[:, None] + self.gamma[None, :]


OBSERVED = "observed"
IMPUTED = "imputed"


@dataclass(frozen=True)
class DemandMatrix:
    """Dense non-negative forecast with per-cell provenance."""

    values: np.ndarray
    observed: np.ndarray  # bool mask; True where the cell was observed

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        mask = np.ascontiguousarray(self.observed, dtype=bool)
        if vals.shape != mask.shape or vals.ndim != 2:
            raise ValueError("values and observed mask must be equal 2-D shapes")
        if vals.size and vals.min() < 0:
            raise ValueError("demand values must be >= 0")
        vals.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "observed", mask)

    @property
    def n_products(self) -> int:
        return self.values.shape[0]

    @property
    def n_stores(self) -> int:
        return self.values.shape[1]

    def provenance(self, product_index: int, store_index: int) -> str:
        return OBSERVED if self.observed[product_index, store_index] else IMPUTED


def _grouped(matrix: SalesMatrix, by_product: bool):
    """CSR-style (indptr, cols, vals, conf) grouped by product or by store."""
    if by_product:
        keys, cols = matrix.product_idx, matrix.store_idx
        n = matrix.n_products
        order = np.arange(keys.size)
    else:
        keys, cols = matrix.store_idx, matrix.product_idx
        n = matrix.n_stores
        order = np.lexsort((cols, keys))
    keys = keys[order]
    counts = np.bincount(keys, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return (
        indptr,
        np.ascontiguousarray(cols[order]),
        np.ascontiguousarray(matrix.values[order]),
        np.ascontiguousarray(matrix.confidence[order]),
    )


def fit_als(matrix: SalesMatrix, config: AlsConfig) -> FactorModel:
    """Fit factors and biases by alternating exact ridge solves.

    Deterministic given (matrix, config): initialization uses a seeded
    generator and the per-row solves run in a fixed order. Stops after
    ``n_iterations`` or when the relative loss change drops below
    ``convergence_tol``.
    """
    if matrix.n_observations == 0:
        raise EmptyMatrix("sales matrix has no observations")

    n, m, d = matrix.n_products, matrix.n_stores, config.rank
    rng = np.random.default_rng(config.seed)
    u = rng.uniform(-config.init_scale, config.init_scale, size=(n, d))
    v = rng.uniform(-config.init_scale, config.init_scale, size=(m, d))

    global_mean = float(matrix.values.mean())
    row_sums = np.bincount(matrix.product_idx, weights=matrix.values, minlength=n)
    row_counts = np.bincount(matrix.product_idx, minlength=n)
    col_sums = np.bincount(matrix.store_idx, weights=matrix.values, minlength=m)
    col_counts = np.bincount(matrix.store_idx, minlength=m)
    beta = np.where(row_counts > 0, row_sums / np.maximum(row_counts, 1) - global_mean, 0.0)
    gamma = np.where(col_counts > 0, col_sums / np.maximum(col_counts, 1) - global_mean, 0.0)

    p_indptr, p_cols, p_vals, p_conf = _grouped(matrix, by_product=True)
    s_indptr, s_cols, s_vals, s_conf = _grouped(matrix, by_product=False)
    reg = float(config.reg_lambda)

    def current_loss() -> float:
        return float(
            loss_value(
                matrix.product_idx, matrix.store_idx, matrix.values, matrix.confidence,
                u, v, beta, gamma, reg,
            )
        )

    history = [current_loss()]
    try:
        for _ in range(config.n_iterations):
            solve_side(p_indptr, p_cols, p_vals, p_conf, v, gamma, reg, u, beta)
            solve_side(s_indptr, s_cols, s_vals, s_conf, u, beta, reg, v, gamma)
            loss = current_loss()
            previous = history[-1]
            history.append(loss)
            if abs(previous - loss) <= config.convergence_tol * max(abs(previous), 1e-30):
                break
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(
            "a row/column subproblem is rank-deficient; "
            f"set reg_lambda > 0 to regularize (reg_lambda={reg})"
        ) from exc

    return FactorModel(
        u=u, v=v, beta=beta, gamma=gamma,
        final_loss=history[-1], loss_history=tuple(history),
    )


def impute(model: FactorModel, matrix: SalesMatrix) -> DemandMatrix:
    """Fill unobserved cells with max(0, prediction); keep observed values."""
    if model.n_products != matrix.n_products or model.n_stores != matrix.n_stores:
        raise DimensionMismatch(
            f"model is {model.n_products}x{model.n_stores}, "
            f"matrix is {matrix.n_products}x{matrix.n_stores}"
        )
    values = np.maximum(model.predict(), 0.0)
    observed = np.zeros((matrix.n_products, matrix.n_stores), dtype=bool)
    observed[matrix.product_idx, matrix.store_idx] = True
    values[matrix.product_idx, matrix.store_idx] = matrix.values
    return DemandMatrix(values=values, observed=observed)


def apply_trend(demand: DemandMatrix, trend_scalar: float) -> DemandMatrix:
    """Scale every cell by a positive trend multiplier; provenance unchanged."""
    if trend_scalar <= 0:
        raise NonPositiveTrend(f"trend scalar must be > 0, got {trend_scalar}")
    return DemandMatrix(values=demand.values * trend_scalar, observed=demand.observed.copy())


def normalized_shares(demand: DemandMatrix, store_index: int) -> np.ndarray:
    """Store column rescaled to a probability vector over products."""
    column = demand.values[:, store_index]
    total = float(column.sum())
    if total <= 0:
        raise ZeroDemandStore(f"store column {store_index} has zero total demand")
    return column / total
