"""HTTP API over a loaded bundle and completed demand matrix.

The service is stateless: requests never mutate server data, and what-if
locks travel inside each request body. Responses are deterministic for
identical requests, so concurrent identical calls return byte-identical
bodies. Error payloads carry a machine-readable ``kind``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .demand import DemandMatrix
from .errors import AssortifyError, InvalidConfig
from .ingest import DatasetBundle
from .optimizer import (
    OptimizeRequest,
    fabric_composition,
    histogram,
    optimize_assortment,
    pareto_front,
)
from .sustainability import ProductHiggScore, blend_index_per_kg

MAX_LAMBDA_GRID = 1001
DEFAULT_HISTOGRAM_BINS = 20

_STATUS_BY_KIND = {"InsufficientCandidates": 422, "NotReady": 503}


@dataclass(frozen=True)
class SessionState:
    """Immutable data the service answers from."""

    bundle: DatasetBundle
    demand: DemandMatrix
    higg: list[ProductHiggScore]
    quality: np.ndarray = field(init=False)

    def __post_init__(self):
        catalog = self.bundle.catalog
        prices = np.array([p.price for p in catalog.products], dtype=np.float64)
        # Per-product mean expected revenue across stores.
        quality = (prices[:, None] * self.demand.values).mean(axis=1)
        quality.setflags(write=False)
        object.__setattr__(self, "quality", quality)


class OptimizeBody(BaseModel):
    store: str
    k: int
    trade_off_lambda: float
    locked_in: list[str] = []
    locked_out: list[str] = []
    normalize: bool = True


class ParetoBody(BaseModel):
    store: str
    k: int
    lambda_grid: int | list[float] = 101
    locked_in: list[str] = []
    locked_out: list[str] = []
    normalize: bool = True


def _expand_grid(spec: int | list[float]) -> list[float]:
    if isinstance(spec, int):
        if spec < 1:
            raise InvalidConfig(f"lambda grid count must be >= 1, got {spec}")
        if spec > MAX_LAMBDA_GRID:
            raise InvalidConfig(f"lambda grid count exceeds cap of {MAX_LAMBDA_GRID}")
        if spec == 1:
            return [0.0]
        return [i / (spec - 1) for i in range(spec)]
    if len(spec) > MAX_LAMBDA_GRID:
        raise InvalidConfig(f"lambda grid size exceeds cap of {MAX_LAMBDA_GRID}")
    return [float(x) for x in spec]


def _solution_payload(solution, catalog) -> dict:
    return {
        "store": catalog.stores[solution.store_index].id,
        "store_index": solution.store_index,
        "k": solution.k,
        "trade_off_lambda": solution.trade_off_lambda,
        "product_ids": list(solution.product_ids),
        "revenue_score": solution.revenue_score,
        "higg_score": solution.higg_score,
        "objective_value": solution.objective_value,
    }


def _histogram_payload(values: list[float], bins: int) -> list[dict]:
    return [
        {"lower": lo, "upper": hi, "count": count}
        for lo, hi, count in histogram(values, bins)
    ]


def create_app(state: SessionState | None, cors: bool = False) -> FastAPI:
    app = FastAPI(title="assortify", docs_url=None, redoc_url=None)
    app.state.session = state

    if cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(AssortifyError)
    async def domain_error_handler(_request: Request, exc: AssortifyError):
        status = _STATUS_BY_KIND.get(exc.kind, 400)
        return JSONResponse(status_code=status, content={"kind": exc.kind, "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"kind": "InvalidRequest", "message": str(exc.errors())},
        )

    def session() -> SessionState:
        current = app.state.session
        if current is None:
            raise _NotReady()
        return current

    def resolve_store(current: SessionState, store_id: str) -> int:
        index = current.bundle.catalog.store_index(store_id)
        if index is None:
            raise InvalidConfig(f"unknown store '{store_id}'")
        return index

    @app.get("/health")
    async def health():
        if app.state.session is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        current = app.state.session
        manifest = {
            role: {"path": record.path, "rows": record.rows, "sha256": record.sha256}
            for role, record in current.bundle.manifest.items()
        }
        return {
            "status": "ok",
            "products": current.bundle.catalog.n_products,
            "stores": current.bundle.catalog.n_stores,
            "manifest": manifest,
        }

    @app.get("/stores")
    async def stores():
        current = session()
        payload = [
            {"id": s.id, "name": s.name, "region": s.region}
            for s in sorted(current.bundle.catalog.stores, key=lambda s: s.id)
        ]
        return payload

    @app.get("/products")
    async def products(store: str | None = Query(default=None)):
        current = session()
        catalog = current.bundle.catalog
        store_index: int | None = None
        if store is not None:
            store_index = catalog.store_index(store)
            if store_index is None:
                return JSONResponse(
                    status_code=404,
                    content={"kind": "UnknownStore", "message": f"unknown store '{store}'"},
                )
        by_id = sorted(range(catalog.n_products), key=lambda i: catalog.products[i].id)
        payload = []
        for i in by_id:
            product = catalog.products[i]
            entry = {
                "id": product.id,
                "name": product.name,
                "category": product.category,
                "price": product.price,
                "weight_kg": product.weight_kg,
                "blend": {name: fraction for name, fraction in product.blend},
                "msi_per_kg": blend_index_per_kg(product.blend, catalog.fabric_table),
                "higg_score": current.higg[i].score,
            }
            if store_index is not None:
                entry["demand"] = float(current.demand.values[i, store_index])
            payload.append(entry)
        return payload

    @app.post("/optimize")
    async def optimize(body: OptimizeBody):
        current = session()
        store_index = resolve_store(current, body.store)
        request = OptimizeRequest(
            store_index=store_index,
            k=body.k,
            trade_off_lambda=body.trade_off_lambda,
            locked_in=frozenset(body.locked_in),
            locked_out=frozenset(body.locked_out),
            normalize=body.normalize,
        )
        solution = optimize_assortment(
            request, current.demand, current.bundle.catalog, current.higg
        )
        return _solution_payload(solution, current.bundle.catalog)

    @app.post("/pareto")
    async def pareto(body: ParetoBody):
        current = session()
        catalog = current.bundle.catalog
        store_index = resolve_store(current, body.store)
        grid = _expand_grid(body.lambda_grid)
        front = pareto_front(
            store_index=store_index,
            k=body.k,
            lambda_grid=grid,
            demand=current.demand,
            catalog=catalog,
            higg=current.higg,
            locked_in=frozenset(body.locked_in),
            locked_out=frozenset(body.locked_out),
            normalize=body.normalize,
        )
        solutions = []
        for solution, non_dominated in front:
            entry = _solution_payload(solution, catalog)
            entry["non_dominated"] = non_dominated
            entry["fabric_composition"] = fabric_composition(solution, catalog)
            solutions.append(entry)
        return {
            "store": catalog.stores[store_index].id,
            "k": body.k,
            "normalize": body.normalize,
            "solutions": solutions,
        }

    @app.get("/histograms")
    async def histograms(bins: int = Query(default=DEFAULT_HISTOGRAM_BINS, ge=1)):
        current = session()
        return {
            "bins": bins,
            "higg": _histogram_payload([h.score for h in current.higg], bins),
            "quality": _histogram_payload([float(q) for q in current.quality], bins),
        }

    return app


class _NotReady(AssortifyError):
    kind = "NotReady"

    def __init__(self):
        super().__init__("bundle not loaded yet")
