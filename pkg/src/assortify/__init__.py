"""Assortment planning: demand completion, sustainability scoring, and
per-store revenue-vs-sustainability trade-off fronts."""

from . import errors
from .demand import (
    AlsConfig,
    DemandMatrix,
    FactorModel,
    SalesMatrix,
    apply_trend,
    fit_als,
    impute,
    normalized_shares,
)
from .domain import (
    Catalog,
    FabricBlend,
    FabricTable,
    Product,
    Store,
    ValidationIssue,
    validate_catalog,
)
from .ingest import (
    DatasetBundle,
    SyntheticConfig,
    generate_synthetic,
    load_bundle,
    parse_fabrics,
    parse_products,
    parse_sales,
    parse_stores,
    write_bundle,
)
from .model_io import load_factor_model, save_factor_model
from .optimizer import (
    AssortmentSolution,
    ObjectiveScales,
    OptimizeRequest,
    ParetoFront,
    brute_force_oracle,
    compute_scales,
    fabric_composition,
    histogram,
    non_dominated_filter,
    optimize_assortment,
    pareto_front,
    product_scores,
)
from .sustainability import (
    ProductHiggScore,
    assortment_higg_score,
    blend_index_per_kg,
    product_higg_score,
    score_catalog,
)

__version__ = "0.1.0"

__all__ = [
    "AlsConfig",
    "AssortmentSolution",
    "Catalog",
    "DatasetBundle",
    "DemandMatrix",
    "FabricBlend",
    "FabricTable",
    "FactorModel",
    "ObjectiveScales",
    "OptimizeRequest",
    "ParetoFront",
    "Product",
    "ProductHiggScore",
    "SalesMatrix",
    "Store",
    "SyntheticConfig",
    "ValidationIssue",
    "apply_trend",
    "assortment_higg_score",
    "blend_index_per_kg",
    "brute_force_oracle",
    "compute_scales",
    "errors",
    "fabric_composition",
    "fit_als",
    "generate_synthetic",
    "histogram",
    "impute",
    "load_bundle",
    "load_factor_model",
    "non_dominated_filter",
    "normalized_shares",
    "optimize_assortment",
    "pareto_front",
    "parse_fabrics",
    "parse_products",
    "parse_sales",
    "parse_stores",
    "product_higg_score",
    "product_scores",
    "save_factor_model",
    "score_catalog",
    "validate_catalog",
    "write_bundle",
]
