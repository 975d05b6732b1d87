"""Dataset ingestion: the four CSV inputs, bundle assembly, synthetic data.

All files are UTF-8, comma-delimited, header-first. Parse failures pinpoint
file, 1-based row (the header is row 1), column name, and reason. Blends are
written ``fabric:fraction;fabric:fraction``; values summing to ~100 are read
as percentages, values summing to ~1 as fractions, and either way the stored
fractions are renormalized to sum to exactly 1.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .demand import SalesMatrix
from .domain import (
    Catalog,
    FabricBlend,
    FabricTable,
    Product,
    Store,
    normalize_fabric_name,
    validate_catalog,
)
from .errors import (
    BlendNotNormalized,
    CatalogInvalid,
    DuplicateFabric,
    DuplicateProduct,
    DuplicateStore,
    InvalidConfig,
    NegativeUnits,
    ParseError,
    UnknownFabric,
    UnknownProduct,
    UnknownStore,
)

FABRIC_COLUMNS = ("fabric", "higg_msi_per_kg")
STORE_COLUMNS = ("id", "name", "region")
PRODUCT_COLUMNS = ("id", "name", "category", "price", "weight_kg", "blend")
SALES_COLUMNS = ("product_id", "store_id", "units_sold")
SALES_CONFIDENCE_COLUMN = "confidence"

_FRACTION_SUM = (0.98, 1.02)
_PERCENT_SUM = (98.0, 102.0)


@dataclass(frozen=True)
class FileRecord:
    path: str
    rows: int
    sha256: str


@dataclass(frozen=True)
class DatasetBundle:
    catalog: Catalog
    sales: SalesMatrix
    manifest: dict[str, FileRecord]


def _file_record(path: Path, rows: int) -> FileRecord:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return FileRecord(path=path.name, rows=rows, sha256=digest)


def _read_rows(path: str | Path, required: tuple[str, ...]):
    """Yield (row_number, cell-getter) pairs; row 1 is the header."""
    path = Path(path)
    if not path.exists():
        raise ParseError(str(path), 0, "", "file does not exist", kind="MissingFile")
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(str(path), 1, "", "missing header row") from None
        header = [h.strip() for h in header]
        positions = {name: i for i, name in enumerate(header)}
        for column in required:
            if column not in positions:
                raise ParseError(str(path), 1, column, "required column missing")

        rows = []
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            row_number = reader.line_num

            def get(column: str, row=row, row_number=row_number) -> str:
                position = positions.get(column)
                if position is None or position >= len(row):
                    raise ParseError(str(path), row_number, column, "value missing")
                return row[position].strip()

            def has(column: str, row=row) -> bool:
                position = positions.get(column)
                return position is not None and position < len(row) and bool(row[position].strip())

            rows.append((row_number, get, has))
    return str(path), rows


def _parse_float(path: str, row: int, column: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(path, row, column, f"'{text}' is not a number", kind="BadNumber") from None


def parse_fabrics(path: str | Path) -> FabricTable:
    """Read the fabric index table; duplicate names (case-insensitive) rejected."""
    fname, rows = _read_rows(path, FABRIC_COLUMNS)
    entries: dict[str, float] = {}
    for row_number, get, _ in rows:
        name = normalize_fabric_name(get("fabric"))
        if not name:
            raise ParseError(fname, row_number, "fabric", "fabric name is empty", kind="EmptyId")
        value = _parse_float(fname, row_number, "higg_msi_per_kg", get("higg_msi_per_kg"))
        if value < 0:
            raise ParseError(
                fname, row_number, "higg_msi_per_kg",
                f"index {value} is negative", kind="NegativeIndex",
            )
        if name in entries:
            raise DuplicateFabric(fname, row_number, "fabric", f"fabric '{name}' already defined")
        entries[name] = value
    return FabricTable(entries=entries)


def parse_stores(path: str | Path) -> list[Store]:
    fname, rows = _read_rows(path, STORE_COLUMNS[:2])
    stores: list[Store] = []
    seen: set[str] = set()
    for row_number, get, has in rows:
        store_id = get("id")
        if not store_id:
            raise ParseError(fname, row_number, "id", "store id is empty", kind="EmptyId")
        if store_id in seen:
            raise DuplicateStore(fname, row_number, "id", f"store '{store_id}' already defined")
        seen.add(store_id)
        stores.append(
            Store(id=store_id, name=get("name"), region=get("region") if has("region") else "")
        )
    return stores


def _parse_blend(fname: str, row_number: int, text: str, table: FabricTable) -> FabricBlend:
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise ParseError(fname, row_number, "blend", "blend is empty", kind="EmptyBlend")
    raw: list[tuple[str, float]] = []
    seen: set[str] = set()
    for part in parts:
        if ":" not in part:
            raise ParseError(
                fname, row_number, "blend",
                f"component '{part.strip()}' is not fabric:fraction",
            )
        name_text, value_text = part.split(":", 1)
        name = normalize_fabric_name(name_text)
        if name in seen:
            raise ParseError(
                fname, row_number, "blend",
                f"fabric '{name}' listed twice", kind="DuplicateFabricInBlend",
            )
        seen.add(name)
        if name not in table:
            raise UnknownFabric(
                f"{fname}:{row_number}: blend fabric '{name}' is not in the fabric table"
            )
        value = _parse_float(fname, row_number, "blend", value_text.strip())
        if value <= 0:
            raise ParseError(
                fname, row_number, "blend",
                f"fraction {value} for '{name}' must be > 0", kind="NonPositiveFraction",
            )
        raw.append((name, value))

    total = sum(v for _, v in raw)
    if _FRACTION_SUM[0] <= total <= _FRACTION_SUM[1]:
        pass
    elif _PERCENT_SUM[0] <= total <= _PERCENT_SUM[1]:
        pass
    else:
        raise BlendNotNormalized(
            f"{fname}:{row_number}: blend values sum to {total}; "
            "expected ~1 (fractions) or ~100 (percentages)"
        )
    return FabricBlend(components=tuple((name, value / total) for name, value in raw))


def parse_products(path: str | Path, fabric_table: FabricTable) -> list[Product]:
    fname, rows = _read_rows(path, PRODUCT_COLUMNS)
    products: list[Product] = []
    seen: set[str] = set()
    for row_number, get, _ in rows:
        pid = get("id")
        if not pid:
            raise ParseError(fname, row_number, "id", "product id is empty", kind="EmptyId")
        if pid in seen:
            raise DuplicateProduct(fname, row_number, "id", f"product '{pid}' already defined")
        seen.add(pid)
        price = _parse_float(fname, row_number, "price", get("price"))
        if price < 0:
            raise ParseError(
                fname, row_number, "price", f"price {price} is negative", kind="NegativePrice"
            )
        weight = _parse_float(fname, row_number, "weight_kg", get("weight_kg"))
        if weight <= 0:
            raise ParseError(
                fname, row_number, "weight_kg",
                f"weight {weight} must be > 0", kind="NonPositiveWeight",
            )
        blend = _parse_blend(fname, row_number, get("blend"), fabric_table)
        products.append(
            Product(
                id=pid, name=get("name"), category=get("category"),
                price=price, weight_kg=weight, blend=blend,
            )
        )
    return products


def parse_sales(path: str | Path, catalog: Catalog) -> SalesMatrix:
    """Read observations; duplicate (product, store) rows are summed and
    their confidences averaged."""
    fname, rows = _read_rows(path, SALES_COLUMNS)
    units: dict[tuple[int, int], float] = {}
    confs: dict[tuple[int, int], list[float]] = {}
    for row_number, get, has in rows:
        pid = get("product_id")
        product_index = catalog.product_index(pid)
        if product_index is None:
            raise UnknownProduct(fname, row_number, "product_id", f"unknown product '{pid}'")
        sid = get("store_id")
        store_index = catalog.store_index(sid)
        if store_index is None:
            raise UnknownStore(fname, row_number, "store_id", f"unknown store '{sid}'")
        sold = _parse_float(fname, row_number, "units_sold", get("units_sold"))
        if sold < 0:
            raise NegativeUnits(
                fname, row_number, "units_sold", f"units_sold {sold} is negative"
            )
        confidence = 1.0
        if has(SALES_CONFIDENCE_COLUMN):
            confidence = _parse_float(
                fname, row_number, SALES_CONFIDENCE_COLUMN, get(SALES_CONFIDENCE_COLUMN)
            )
            if confidence <= 0:
                raise ParseError(
                    fname, row_number, SALES_CONFIDENCE_COLUMN,
                    f"confidence {confidence} must be > 0", kind="NonPositiveConfidence",
                )
        cell = (product_index, store_index)
        units[cell] = units.get(cell, 0.0) + sold
        confs.setdefault(cell, []).append(confidence)

    cells = sorted(units)
    return SalesMatrix(
        n_products=catalog.n_products,
        n_stores=catalog.n_stores,
        product_idx=np.array([c[0] for c in cells], dtype=np.int64),
        store_idx=np.array([c[1] for c in cells], dtype=np.int64),
        values=np.array([units[c] for c in cells], dtype=np.float64),
        confidence=np.array([sum(confs[c]) / len(confs[c]) for c in cells], dtype=np.float64),
    )


def load_bundle(
    fabrics_path: str | Path,
    stores_path: str | Path,
    products_path: str | Path,
    sales_path: str | Path,
) -> DatasetBundle:
    """Parse all four inputs, validate the catalog, and record a manifest."""
    table = parse_fabrics(fabrics_path)
    stores = parse_stores(stores_path)
    products = parse_products(products_path, table)
    catalog = Catalog(products=tuple(products), stores=tuple(stores), fabric_table=table)
    issues = validate_catalog(catalog)
    if issues:
        raise CatalogInvalid(issues)
    sales = parse_sales(sales_path, catalog)
    manifest = {
        "fabrics": _file_record(Path(fabrics_path), len(table)),
        "stores": _file_record(Path(stores_path), len(stores)),
        "products": _file_record(Path(products_path), len(products)),
        "sales": _file_record(Path(sales_path), sales.n_observations),
    }
    return DatasetBundle(catalog=catalog, sales=sales, manifest=manifest)


# --- synthetic data -------------------------------------------------------


@dataclass(frozen=True)
class SyntheticConfig:
    """Generator settings; the defaults give a dense mid-size bundle."""

    seed: int = 7
    n_products: int = 200
    n_stores: int = 3
    fabric_populations: tuple[tuple[str, float, float], ...] = (
        ("cotton", 98.0, 0.4),
        ("viscose", 62.0, 0.4),
        ("polyester", 44.0, 0.2),
    )
    rank: int = 3
    noise_sigma: float = 0.05
    density: float = 0.7
    weight_range: tuple[float, float] = (0.1, 0.6)
    price_range: tuple[float, float] = (5.0, 100.0)

    def __post_init__(self):
        if self.n_products < 1 or self.n_stores < 1:
            raise InvalidConfig("n_products and n_stores must be >= 1")
        if not self.fabric_populations:
            raise InvalidConfig("at least one fabric population is required")
        share_sum = sum(share for _, _, share in self.fabric_populations)
        if abs(share_sum - 1.0) > 1e-6:
            raise InvalidConfig(f"population shares sum to {share_sum}, expected 1")
        if any(higg < 0 for _, higg, _ in self.fabric_populations):
            raise InvalidConfig("fabric index values must be >= 0")
        if not 0.0 < self.density <= 1.0:
            raise InvalidConfig(f"density must be in (0, 1], got {self.density}")
        if self.rank < 1:
            raise InvalidConfig(f"rank must be >= 1, got {self.rank}")
        if self.noise_sigma < 0:
            raise InvalidConfig(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        lo, hi = self.weight_range
        if lo <= 0 or hi < lo:
            raise InvalidConfig(f"weight_range must satisfy 0 < lo <= hi, got {self.weight_range}")
        lo, hi = self.price_range
        if lo < 0 or hi < lo:
            raise InvalidConfig(f"price_range must satisfy 0 <= lo <= hi, got {self.price_range}")


_CATEGORIES = ("t-shirt", "shirt", "top")


def _population_counts(populations, n: int) -> list[int]:
    # Largest-remainder rounding so counts hit n exactly.
    exact = [share * n for _, _, share in populations]
    counts = [int(x) for x in exact]
    remainders = sorted(
        range(len(exact)), key=lambda i: (-(exact[i] - counts[i]), i)
    )
    for i in range(n - sum(counts)):
        counts[remainders[i % len(remainders)]] += 1
    return counts


def generate_synthetic(config: SyntheticConfig) -> DatasetBundle:
    """Deterministic bundle: single-fabric products over the population
    shares, and sales from a low-rank ground truth plus biases and noise."""
    rng = np.random.default_rng(config.seed)
    n, m = config.n_products, config.n_stores

    table = FabricTable(entries={name: higg for name, higg, _ in config.fabric_populations})

    counts = _population_counts(config.fabric_populations, n)
    labels = np.repeat(np.arange(len(counts)), counts)
    labels = rng.permutation(labels)

    id_width = max(4, len(str(n - 1)))
    weights = rng.uniform(config.weight_range[0], config.weight_range[1], size=n)
    prices = rng.uniform(config.price_range[0], config.price_range[1], size=n)
    products = []
    for i in range(n):
        fabric = config.fabric_populations[labels[i]][0]
        category = _CATEGORIES[i % len(_CATEGORIES)]
        products.append(
            Product(
                id=f"p{i:0{id_width}d}",
                name=f"{category} {i:0{id_width}d}",
                category=category,
                price=float(prices[i]),
                weight_kg=float(weights[i]),
                blend=FabricBlend(components=((fabric, 1.0),)),
            )
        )

    store_width = max(2, len(str(m - 1)))
    regions = ("north", "south", "east", "west")
    stores = [
        Store(id=f"s{j:0{store_width}d}", name=f"Store {j}", region=regions[j % len(regions)])
        for j in range(m)
    ]
    catalog = Catalog(products=tuple(products), stores=tuple(stores), fabric_table=table)

    # Low-rank positive ground truth plus product/store offsets.
    left = rng.uniform(0.2, 1.0, size=(n, config.rank))
    right = rng.uniform(0.2, 1.0, size=(m, config.rank))
    base = (left @ right.T) * (30.0 / config.rank)
    offsets_p = rng.uniform(0.0, 4.0, size=n)
    offsets_s = rng.uniform(0.0, 4.0, size=m)
    clean = base + offsets_p[:, None] + offsets_s[None, :]
    noise = rng.normal(0.0, config.noise_sigma * float(clean.std()), size=(n, m))
    values = np.maximum(clean + noise, 0.0)
    mask = rng.random(size=(n, m)) < config.density

    pi, si = np.nonzero(mask)
    sales = SalesMatrix(
        n_products=n,
        n_stores=m,
        product_idx=pi.astype(np.int64),
        store_idx=si.astype(np.int64),
        values=values[pi, si],
        confidence=np.ones(pi.size, dtype=np.float64),
    )
    return DatasetBundle(catalog=catalog, sales=sales, manifest={})


# --- bundle writing -------------------------------------------------------


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def format_blend(blend: FabricBlend) -> str:
    return ";".join(f"{name}:{fraction!r}" for name, fraction in blend)


def write_bundle(bundle: DatasetBundle, out_dir: str | Path) -> DatasetBundle:
    """Write the four CSVs plus manifest.json; returns the bundle with the
    manifest filled in. Deterministic: same bundle, same bytes."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    catalog, sales = bundle.catalog, bundle.sales

    fabrics_path = out / "fabrics.csv"
    _write_csv(
        fabrics_path,
        list(FABRIC_COLUMNS),
        [[name, repr(value)] for name, value in sorted(catalog.fabric_table.entries.items())],
    )
    stores_path = out / "stores.csv"
    _write_csv(
        stores_path,
        list(STORE_COLUMNS),
        [[s.id, s.name, s.region] for s in catalog.stores],
    )
    products_path = out / "products.csv"
    _write_csv(
        products_path,
        list(PRODUCT_COLUMNS),
        [
            [p.id, p.name, p.category, repr(p.price), repr(p.weight_kg), format_blend(p.blend)]
            for p in catalog.products
        ],
    )
    sales_path = out / "sales.csv"
    _write_csv(
        sales_path,
        list(SALES_COLUMNS) + [SALES_CONFIDENCE_COLUMN],
        [
            [
                catalog.products[sales.product_idx[t]].id,
                catalog.stores[sales.store_idx[t]].id,
                repr(float(sales.values[t])),
                repr(float(sales.confidence[t])),
            ]
            for t in range(sales.n_observations)
        ],
    )

    manifest = {
        "fabrics": _file_record(fabrics_path, len(catalog.fabric_table)),
        "stores": _file_record(stores_path, catalog.n_stores),
        "products": _file_record(products_path, catalog.n_products),
        "sales": _file_record(sales_path, sales.n_observations),
    }
    manifest_path = out / "manifest.json"
    payload = {
        role: {"path": record.path, "rows": record.rows, "sha256": record.sha256}
        for role, record in manifest.items()
    }
    manifest_path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return replace(bundle, manifest=manifest)
