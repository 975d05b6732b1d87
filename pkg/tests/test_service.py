import json
from concurrent.futures import ThreadPoolExecutor

import pytest
from fastapi.testclient import TestClient

from assortify import (
    AlsConfig,
    DatasetBundle,
    SalesMatrix,
    apply_trend,
    fit_als,
    impute,
    score_catalog,
)
from assortify.service import SessionState, create_app
from helpers import dense_demand, make_catalog, make_product


@pytest.fixture(scope="module")
def demo_state():
    products = [
        make_product("p1", fabric="cotton", weight=1.0, price=20.0),
        make_product("p2", fabric="viscose", weight=0.5, price=35.0),
    ]
    catalog = make_catalog(products)
    sales = SalesMatrix.from_observations(2, 1, [(0, 0, 12.0), (1, 0, 7.0)])
    bundle = DatasetBundle(catalog=catalog, sales=sales, manifest={})
    model = fit_als(sales, AlsConfig(rank=1, n_iterations=5, seed=0))
    demand = apply_trend(impute(model, sales), 1.0)
    return SessionState(bundle=bundle, demand=demand, higg=score_catalog(catalog))


@pytest.fixture(scope="module")
def client(demo_state):
    return TestClient(create_app(demo_state))


class TestHealth:
    def test_counts(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "ok"
        assert body["products"] == 2
        assert body["stores"] == 1

    def test_not_ready_returns_503(self):
        bare = TestClient(create_app(None))
        assert bare.get("/health").status_code == 503
        assert bare.get("/stores").status_code == 503

    def test_repeated_calls_identical(self, client):
        first = client.get("/health")
        second = client.get("/health")
        assert first.content == second.content


class TestCatalogEndpoints:
    def test_stores_sorted_by_id(self, client):
        body = client.get("/stores").json()
        assert [s["id"] for s in body] == ["s1"]
        assert body[0]["name"] == "Main"

    def test_products_with_store_include_demand_and_higg(self, client):
        body = client.get("/products", params={"store": "s1"}).json()
        assert [p["id"] for p in body] == ["p1", "p2"]
        assert [p["higg_score"] for p in body] == [98.0, 31.0]
        assert body[0]["demand"] == 12.0
        assert body[1]["demand"] == 7.0

    def test_products_without_store_lists_all(self, client):
        body = client.get("/products").json()
        assert len(body) == 2
        assert "demand" not in body[0]

    def test_unknown_store_404(self, client):
        response = client.get("/products", params={"store": "nope"})
        assert response.status_code == 404
        assert response.json()["kind"] == "UnknownStore"


class TestOptimize:
    def test_revenue_only_top_k(self, client):
        response = client.post("/optimize", json={
            "store": "s1", "k": 1, "trade_off_lambda": 0.0,
        })
        assert response.status_code == 200
        body = response.json()
        # p2: 35 * 7 = 245 beats p1: 20 * 12 = 240.
        assert body["product_ids"] == ["p2"]
        assert body["revenue_score"] == pytest.approx(245.0)

    def test_locked_in_product_always_present(self, client):
        for lam in (0.0, 0.5, 1.0):
            body = client.post("/optimize", json={
                "store": "s1", "k": 1, "trade_off_lambda": lam, "locked_in": ["p1"],
            }).json()
            assert body["product_ids"] == ["p1"]

    def test_lock_conflict_400_invalid_locks(self, client):
        response = client.post("/optimize", json={
            "store": "s1", "k": 1, "trade_off_lambda": 0.0,
            "locked_in": ["p1"], "locked_out": ["p1"],
        })
        assert response.status_code == 400
        assert response.json()["kind"] == "InvalidLocks"

    def test_insufficient_candidates_422(self, client):
        response = client.post("/optimize", json={
            "store": "s1", "k": 2, "trade_off_lambda": 0.0, "locked_out": ["p1"],
        })
        assert response.status_code == 422
        assert response.json()["kind"] == "InsufficientCandidates"

    def test_malformed_body_400(self, client):
        response = client.post("/optimize", json={"store": "s1"})
        assert response.status_code == 400
        assert response.json()["kind"] == "InvalidRequest"

    def test_unknown_store_400(self, client):
        response = client.post("/optimize", json={
            "store": "zz", "k": 1, "trade_off_lambda": 0.0,
        })
        assert response.status_code == 400

    def test_concurrent_identical_requests_byte_identical(self, client):
        payload = {"store": "s1", "k": 1, "trade_off_lambda": 0.5}

        def call(_):
            return client.post("/optimize", json=payload).content

        with ThreadPoolExecutor(max_workers=8) as pool:
            bodies = list(pool.map(call, range(24)))
        assert len(set(bodies)) == 1

    def test_matches_brute_force_oracle(self, demo_state, client):
        from assortify import OptimizeRequest, brute_force_oracle

        body = client.post("/optimize", json={
            "store": "s1", "k": 1, "trade_off_lambda": 0.25,
        }).json()
        oracle = brute_force_oracle(
            OptimizeRequest(store_index=0, k=1, trade_off_lambda=0.25),
            demo_state.demand, demo_state.bundle.catalog, demo_state.higg,
        )
        assert tuple(body["product_ids"]) == oracle.product_ids
        assert body["objective_value"] == oracle.objective_value


class TestPareto:
    def test_degenerate_grid_dedupes(self, client):
        body = client.post("/pareto", json={
            "store": "s1", "k": 2, "lambda_grid": [0.0, 1.0],
        }).json()
        # Only one 2-subset exists, so the sweep collapses to one solution.
        assert len(body["solutions"]) == 1
        solution = body["solutions"][0]
        assert solution["non_dominated"] is True
        assert solution["trade_off_lambda"] == 0.0
        assert set(solution["fabric_composition"]) == {"cotton", "viscose"}

    def test_locked_out_product_absent_everywhere(self, client):
        body = client.post("/pareto", json={
            "store": "s1", "k": 1, "lambda_grid": 5, "locked_out": ["p2"],
        }).json()
        for solution in body["solutions"]:
            assert "p2" not in solution["product_ids"]

    def test_grid_cap_enforced(self, client):
        response = client.post("/pareto", json={
            "store": "s1", "k": 1, "lambda_grid": 5000,
        })
        assert response.status_code == 400

    def test_integer_grid_expansion(self, client):
        body = client.post("/pareto", json={
            "store": "s1", "k": 1, "lambda_grid": 3,
        }).json()
        lambdas = [s["trade_off_lambda"] for s in body["solutions"]]
        assert lambdas == sorted(lambdas)
        assert all(0.0 <= x <= 1.0 for x in lambdas)


class TestHistograms:
    def test_default_bins(self, client):
        body = client.get("/histograms").json()
        assert body["bins"] == 20
        assert len(body["higg"]) == 20
        assert sum(b["count"] for b in body["higg"]) == 2
        assert sum(b["count"] for b in body["quality"]) == 2

    def test_single_bin(self, client):
        body = client.get("/histograms", params={"bins": 1}).json()
        assert len(body["higg"]) == 1
        assert body["higg"][0]["count"] == 2


class TestStatelessness:
    def test_interleaved_sequence_matches_isolated_calls(self, demo_state):
        payload_a = {"store": "s1", "k": 1, "trade_off_lambda": 0.0}
        payload_b = {"store": "s1", "k": 1, "trade_off_lambda": 1.0, "locked_in": ["p1"]}

        fresh = TestClient(create_app(demo_state))
        isolated_a = fresh.post("/optimize", json=payload_a).content
        fresh = TestClient(create_app(demo_state))
        isolated_b = fresh.post("/optimize", json=payload_b).content

        mixed = TestClient(create_app(demo_state))
        seq = [
            mixed.post("/optimize", json=payload_a).content,
            mixed.post("/optimize", json=payload_b).content,
            mixed.post("/optimize", json=payload_a).content,
        ]
        assert seq[0] == isolated_a == seq[2]
        assert seq[1] == isolated_b

    def test_error_payloads_are_json_with_kind(self, client):
        response = client.post("/optimize", json={
            "store": "s1", "k": 5, "trade_off_lambda": 0.0,
        })
        assert response.status_code == 422
        parsed = json.loads(response.content)
        assert set(parsed) == {"kind", "message"}
