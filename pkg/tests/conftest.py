import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from assortify import FabricBlend, FabricTable, Product, SalesMatrix, Store
from helpers import make_catalog, make_product

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def reference_table():
    return FabricTable(entries={"cotton": 98.0, "viscose": 62.0})


@pytest.fixture(scope="session")
def demo_catalog():
    """Two single-fabric products, one store: scores 98.0 and 31.0."""
    products = [
        make_product("p1", fabric="cotton", weight=1.0, price=20.0),
        make_product("p2", fabric="viscose", weight=0.5, price=35.0),
    ]
    return make_catalog(products)


@pytest.fixture(scope="session")
def demo_sales(demo_catalog):
    return SalesMatrix.from_observations(
        n_products=2, n_stores=1, observations=[(0, 0, 12.0), (1, 0, 7.0)]
    )


@pytest.fixture
def blended_product():
    return Product(
        id="p3",
        name="half and half",
        category="top",
        price=25.0,
        weight_kg=1.0,
        blend=FabricBlend(components=(("cotton", 0.5), ("viscose", 0.5))),
    )


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
