"""Sustainability scoring.

A product's score is the blend-weighted per-kg fabric index scaled by the
garment weight; an assortment's score is the arithmetic mean over its
products. Lower means more sustainable. All math is double precision;
rounding is left to the presentation layer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domain import Catalog, FabricBlend, FabricTable, Product
from .errors import EmptyAssortment


@dataclass(frozen=True)
class ProductHiggScore:
    product_id: str
    score: float


def blend_index_per_kg(blend: FabricBlend, table: FabricTable) -> float:
    """Fraction-weighted average of the per-kg indices of the blend's fabrics."""
    return sum(table.index_for(name) * fraction for name, fraction in blend)


def product_higg_score(product: Product, table: FabricTable) -> ProductHiggScore:
    """Blend index per kg times product weight; raises UnknownFabric."""
    score = blend_index_per_kg(product.blend, table) * product.weight_kg
    return ProductHiggScore(product_id=product.id, score=score)


def assortment_higg_score(scores: list[ProductHiggScore]) -> float:
    """Arithmetic mean of per-product scores."""
    if not scores:
        raise EmptyAssortment("cannot score an empty assortment")
    return sum(s.score for s in scores) / len(scores)


def score_catalog(catalog: Catalog) -> list[ProductHiggScore]:
    """One score per product, in catalog order."""
    table = catalog.fabric_table
    return [product_higg_score(p, table) for p in catalog.products]
