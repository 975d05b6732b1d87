"""Core catalog types: fabrics, blends, products, stores.

Types are immutable containers with light normalization (fabric names are
case-folded and trimmed at construction). Semantic checks live in
:func:`validate_catalog`, which reports every violation instead of raising,
so partially-invalid data can be inspected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import UnknownFabric

BLEND_SUM_TOL = 1e-6


def normalize_fabric_name(name: str) -> str:
    """Canonical fabric key: trimmed and case-folded."""
    return name.strip().casefold()


@dataclass(frozen=True)
class FabricTable:
    """Maps fabric name to its per-kilogram sustainability index."""

    entries: Mapping[str, float]

    def __post_init__(self):
        normalized = {normalize_fabric_name(k): float(v) for k, v in self.entries.items()}
        object.__setattr__(self, "entries", normalized)

    def __contains__(self, name: str) -> bool:
        return normalize_fabric_name(name) in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def index_for(self, name: str) -> float:
        key = normalize_fabric_name(name)
        if key not in self.entries:
            raise UnknownFabric(f"fabric '{name}' is not in the fabric table")
        return self.entries[key]


@dataclass(frozen=True)
class FabricBlend:
    """Composition of a product as (fabric, fraction) pairs; fractions sum to 1."""

    components: tuple[tuple[str, float], ...]

    def __post_init__(self):
        normalized = tuple(
            (normalize_fabric_name(name), float(fraction)) for name, fraction in self.components
        )
        object.__setattr__(self, "components", normalized)

    def fabric_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.components)

    def fraction_sum(self) -> float:
        return sum(fraction for _, fraction in self.components)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self.components)


@dataclass(frozen=True)
class Product:
    id: str
    name: str
    category: str
    price: float
    weight_kg: float
    blend: FabricBlend


@dataclass(frozen=True)
class Store:
    id: str
    name: str
    region: str = ""


@dataclass(frozen=True)
class Catalog:
    """Ordered products and stores; list positions define matrix rows/columns."""

    products: tuple[Product, ...]
    stores: tuple[Store, ...]
    fabric_table: FabricTable
    _product_index: dict = field(init=False, repr=False, compare=False)
    _store_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "products", tuple(self.products))
        object.__setattr__(self, "stores", tuple(self.stores))
        object.__setattr__(
            self, "_product_index", {p.id: i for i, p in enumerate(self.products)}
        )
        object.__setattr__(self, "_store_index", {s.id: i for i, s in enumerate(self.stores)})

    @property
    def n_products(self) -> int:
        return len(self.products)

    @property
    def n_stores(self) -> int:
        return len(self.stores)

    def product_index(self, product_id: str) -> int | None:
        return self._product_index.get(product_id)

    def store_index(self, store_id: str) -> int | None:
        return self._store_index.get(store_id)


@dataclass(frozen=True)
class ValidationIssue:
    """One invariant violation: machine-readable kind, offending id, message."""

    kind: str
    subject: str
    message: str


def validate_catalog(catalog: Catalog) -> list[ValidationIssue]:
    """Check every catalog invariant; returns one issue per violation.

    Pure: identical input yields the identical issue list. An empty list
    means the catalog is safe for scoring and optimization.
    """
    issues: list[ValidationIssue] = []

    for name, value in catalog.fabric_table.entries.items():
        if value < 0:
            issues.append(
                ValidationIssue("NegativeIndex", name, f"fabric index {value} is negative")
            )

    seen_products: set[str] = set()
    for product in catalog.products:
        pid = product.id
        if not pid:
            issues.append(ValidationIssue("EmptyId", pid, "product id is empty"))
        if pid in seen_products:
            issues.append(ValidationIssue("DuplicateProduct", pid, "duplicate product id"))
        seen_products.add(pid)
        if product.weight_kg <= 0:
            issues.append(
                ValidationIssue(
                    "NonPositiveWeight", pid, f"weight_kg {product.weight_kg} must be > 0"
                )
            )
        if product.price < 0:
            issues.append(
                ValidationIssue("NegativePrice", pid, f"price {product.price} must be >= 0")
            )
        issues.extend(_validate_blend(product.blend, pid, catalog.fabric_table))

    seen_stores: set[str] = set()
    for store in catalog.stores:
        if not store.id:
            issues.append(ValidationIssue("EmptyId", store.id, "store id is empty"))
        if store.id in seen_stores:
            issues.append(ValidationIssue("DuplicateStore", store.id, "duplicate store id"))
        seen_stores.add(store.id)

    return issues


def _validate_blend(
    blend: FabricBlend, product_id: str, table: FabricTable
) -> Iterable[ValidationIssue]:
    if not blend.components:
        yield ValidationIssue("EmptyBlend", product_id, "blend has no components")
        return

    seen: set[str] = set()
    for name, fraction in blend:
        if name in seen:
            yield ValidationIssue(
                "DuplicateFabricInBlend", product_id, f"fabric '{name}' listed twice in blend"
            )
        seen.add(name)
        if not 0 < fraction <= 1:
            yield ValidationIssue(
                "InvalidFraction",
                product_id,
                f"fraction {fraction} for '{name}' outside (0, 1]",
            )
        if name not in table:
            yield ValidationIssue(
                "UnknownFabric", product_id, f"fabric '{name}' missing from fabric table"
            )

    total = blend.fraction_sum()
    if abs(total - 1.0) > BLEND_SUM_TOL:
        yield ValidationIssue(
            "BlendNotNormalized", product_id, f"blend fractions sum to {total}, expected 1"
        )
