import numpy as np
import pytest

from assortify import (
    Catalog,
    FabricBlend,
    FabricTable,
    OptimizeRequest,
    Store,
    optimize_assortment,
    pareto_front,
    score_catalog,
    validate_catalog,
)
from assortify.errors import UnknownFabric
from helpers import dense_demand, make_catalog, make_product


def issue_kinds(catalog):
    return [issue.kind for issue in validate_catalog(catalog)]


def test_fabric_table_normalizes_names():
    table = FabricTable(entries={"  Cotton ": 98.0, "VISCOSE": 62.0})
    assert table.index_for("cotton") == 98.0
    assert table.index_for(" viscose") == 62.0
    assert "Cotton" in table
    with pytest.raises(UnknownFabric):
        table.index_for("linen")


def test_catalog_index_lookups(demo_catalog):
    assert demo_catalog.product_index("p1") == 0
    assert demo_catalog.product_index("p2") == 1
    assert demo_catalog.product_index("missing") is None
    assert demo_catalog.store_index("s1") == 0
    assert demo_catalog.n_products == 2
    assert demo_catalog.n_stores == 1


def test_validate_well_formed_catalog_is_clean(demo_catalog):
    assert validate_catalog(demo_catalog) == []


def test_validate_flags_unknown_fabric():
    product = make_product("p1", fabric="linen")
    catalog = make_catalog([product])  # table only has cotton/viscose
    kinds = issue_kinds(catalog)
    assert kinds == ["UnknownFabric"]
    issue = validate_catalog(catalog)[0]
    assert issue.subject == "p1"
    assert "linen" in issue.message


def test_validate_flags_unnormalized_blend():
    blend = FabricBlend(components=(("cotton", 0.5), ("viscose", 0.4)))
    product = make_product("p1")
    product = type(product)(
        id="p1", name="bad blend", category="top", price=10.0, weight_kg=1.0, blend=blend
    )
    assert "BlendNotNormalized" in issue_kinds(make_catalog([product]))


def test_validate_flags_duplicates_and_bad_values():
    products = [
        make_product("p1", weight=1.0),
        make_product("p1", weight=0.5),  # duplicate id
        make_product("", weight=1.0),  # empty id
        make_product("p2", weight=-1.0),  # bad weight
        make_product("p3", price=-5.0),  # bad price
    ]
    stores = [Store(id="s1", name="a"), Store(id="s1", name="b")]
    kinds = issue_kinds(make_catalog(products, stores=stores))
    for expected in ("DuplicateProduct", "EmptyId", "NonPositiveWeight", "NegativePrice",
                     "DuplicateStore"):
        assert expected in kinds


def test_validate_flags_negative_fabric_index():
    catalog = make_catalog([make_product("p1")], fabrics={"cotton": -3.0, "viscose": 62.0})
    assert "NegativeIndex" in issue_kinds(catalog)


def test_validate_flags_duplicate_fabric_in_blend():
    blend = FabricBlend(components=(("cotton", 0.6), ("Cotton", 0.4)))
    product = type(make_product("x"))(
        id="p1", name="dup", category="top", price=1.0, weight_kg=1.0, blend=blend
    )
    assert "DuplicateFabricInBlend" in issue_kinds(make_catalog([product]))


def test_validate_flags_empty_blend():
    product = type(make_product("x"))(
        id="p1", name="none", category="top", price=1.0, weight_kg=1.0,
        blend=FabricBlend(components=()),
    )
    assert "EmptyBlend" in issue_kinds(make_catalog([product]))


def test_validate_is_pure(demo_catalog):
    first = validate_catalog(demo_catalog)
    second = validate_catalog(demo_catalog)
    assert first == second == []

    bad = make_catalog([make_product("p1", fabric="linen")])
    assert validate_catalog(bad) == validate_catalog(bad)


def test_valid_catalogs_survive_the_full_pipeline():
    # Fuzz: any catalog that validates cleanly must score and optimize
    # without raising.
    fabric_pool = {"cotton": 98.0, "viscose": 62.0, "polyester": 44.0, "linen": 85.0}
    fabric_names = list(fabric_pool)
    rng = np.random.default_rng(99)
    for trial in range(50):
        n_products = int(rng.integers(1, 12))
        n_stores = int(rng.integers(1, 4))
        products = []
        for i in range(n_products):
            n_blend = int(rng.integers(1, min(4, len(fabric_names)) + 1))
            chosen = rng.choice(fabric_names, size=n_blend, replace=False)
            weights = rng.uniform(0.05, 1.0, size=n_blend)
            fractions = weights / weights.sum()
            blend = FabricBlend(
                components=tuple((f, float(w)) for f, w in zip(chosen, fractions))
            )
            products.append(
                type(make_product("x"))(
                    id=f"p{i}",
                    name=f"item {i}",
                    category="top",
                    price=float(rng.uniform(0.0, 80.0)),
                    weight_kg=float(rng.uniform(0.05, 2.0)),
                    blend=blend,
                )
            )
        stores = [Store(id=f"s{j}", name=f"Store {j}") for j in range(n_stores)]
        catalog = Catalog(
            products=tuple(products),
            stores=tuple(stores),
            fabric_table=FabricTable(entries=fabric_pool),
        )
        assert validate_catalog(catalog) == []

        demand = dense_demand(rng.uniform(0.0, 50.0, size=(n_products, n_stores)))
        higg = score_catalog(catalog)
        k = int(rng.integers(1, n_products + 1))
        for store_index in range(n_stores):
            request = OptimizeRequest(
                store_index=store_index, k=k, trade_off_lambda=float(rng.uniform(0, 1))
            )
            solution = optimize_assortment(request, demand, catalog, higg)
            assert len(solution.product_ids) == k
            front = pareto_front(
                store_index, k, [0.0, 0.5, 1.0], demand, catalog, higg
            )
            assert len(front) >= 1
