"""Shared test builders: small catalogs and random optimizer instances."""

from __future__ import annotations

import numpy as np

from assortify import (
    Catalog,
    DemandMatrix,
    FabricBlend,
    FabricTable,
    Product,
    Store,
    score_catalog,
)

REFERENCE_FABRICS = {"cotton": 98.0, "viscose": 62.0}


def make_product(pid, fabric="cotton", weight=1.0, price=20.0, category="top"):
    return Product(
        id=pid,
        name=f"{fabric} {pid}",
        category=category,
        price=price,
        weight_kg=weight,
        blend=FabricBlend(components=((fabric, 1.0),)),
    )


def make_catalog(products, stores=None, fabrics=None):
    if stores is None:
        stores = [Store(id="s1", name="Main", region="north")]
    if fabrics is None:
        fabrics = REFERENCE_FABRICS
    return Catalog(
        products=tuple(products),
        stores=tuple(stores),
        fabric_table=FabricTable(entries=fabrics),
    )


def dense_demand(values, observed=None):
    values = np.asarray(values, dtype=np.float64)
    if observed is None:
        observed = np.ones_like(values, dtype=bool)
    return DemandMatrix(values=values, observed=observed)


def random_instance(seed, n_products, n_stores=1, duplicate_products=False):
    """Continuous random catalog + demand + scores for optimizer checks.

    Full-precision uniforms keep accidental objective ties out; exact ties
    are injected deliberately by duplicating whole products (same price,
    weight, and demand row) when requested.
    """
    rng = np.random.default_rng(seed)
    fabrics = {"cotton": 98.0, "viscose": 62.0, "polyester": 44.0, "wool": 80.5}
    names = list(fabrics)
    products = []
    for i in range(n_products):
        products.append(
            make_product(
                f"p{i:03d}",
                fabric=names[int(rng.integers(len(names)))],
                weight=float(rng.uniform(0.1, 0.9)),
                price=float(rng.uniform(1.0, 60.0)),
            )
        )
    demand_values = rng.uniform(0.0, 40.0, size=(n_products, n_stores))

    if duplicate_products and n_products >= 2:
        # Clone a random product into another slot: identical objectives.
        src, dst = rng.choice(n_products, size=2, replace=False)
        original = products[src]
        products[dst] = Product(
            id=products[dst].id,
            name=original.name,
            category=original.category,
            price=original.price,
            weight_kg=original.weight_kg,
            blend=original.blend,
        )
        demand_values[dst, :] = demand_values[src, :]

    stores = [Store(id=f"s{j}", name=f"Store {j}") for j in range(n_stores)]
    catalog = make_catalog(products, stores=stores, fabrics=fabrics)
    demand = dense_demand(demand_values)
    return catalog, demand, score_catalog(catalog)
