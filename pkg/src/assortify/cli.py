"""Command-line entry point.

Subcommands: generate, score, fit, pareto, serve. Every option can also be
supplied through a JSON config file (--config) or an ASSORTIFY_-prefixed
environment variable; precedence is flag > environment > config file >
default. Outputs are written atomically and are byte-identical across reruns
with the same inputs and seed. Exit codes: 0 success, 1 input/validation
error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .demand import AlsConfig, DemandMatrix, apply_trend, fit_als, impute
from .errors import AssortifyError, EmptyCatalog, InvalidConfig
from .ingest import (
    DatasetBundle,
    SyntheticConfig,
    generate_synthetic,
    load_bundle,
    write_bundle,
)
from .model_io import load_factor_model, save_factor_model
from .optimizer import fabric_composition, histogram, pareto_front, raw_objectives
from .sustainability import blend_index_per_kg, score_catalog

ENV_PREFIX = "ASSORTIFY_"
DEFAULT_BINS = 20
DEFAULT_COMPOSITION_LAMBDAS = (0.0, 0.5, 1.0)


# --- option parsing helpers -------------------------------------------------


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise InvalidConfig(f"expected a boolean, got '{text}'")


def _parse_lambda_grid(text: str) -> list[float]:
    """Either a point count ('21') or an explicit list ('0,0.5,1')."""
    text = text.strip()
    try:
        count = int(text)
    except ValueError:
        try:
            return [float(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise InvalidConfig(f"bad lambda grid '{text}'") from None
    if count < 1:
        raise InvalidConfig(f"lambda grid count must be >= 1, got {count}")
    if count == 1:
        return [0.0]
    return [i / (count - 1) for i in range(count)]


def _parse_lambda_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidConfig(f"bad lambda list '{text}'") from None


def _parse_populations(text: str) -> tuple[tuple[str, float, float], ...]:
    """fabric:higg:share triples, comma separated."""
    populations = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise InvalidConfig(f"population '{chunk}' is not fabric:higg:share")
        try:
            populations.append((parts[0], float(parts[1]), float(parts[2])))
        except ValueError:
            raise InvalidConfig(f"population '{chunk}' has non-numeric values") from None
    if not populations:
        raise InvalidConfig("population list is empty")
    return tuple(populations)


def _parse_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise InvalidConfig(f"expected lo:hi, got '{text}'")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise InvalidConfig(f"expected numeric lo:hi, got '{text}'") from None


def _parse_store_selector(text: str) -> str | list[str]:
    """'all' selects every store, otherwise a comma-separated id list."""
    text = text.strip()
    if text.lower() == "all":
        return "all"
    ids = [x.strip() for x in text.split(",") if x.strip()]
    if not ids:
        raise InvalidConfig(f"bad store selector '{text}'")
    return ids


_IDENTITY = str
_PARSERS = {
    "out_dir": _IDENTITY,
    "fabrics": _IDENTITY,
    "stores": _IDENTITY,
    "products": _IDENTITY,
    "sales": _IDENTITY,
    "model": _IDENTITY,
    "host": _IDENTITY,
    "seed": int,
    "n_products": int,
    "n_stores": int,
    "rank": int,
    "iterations": int,
    "bins": int,
    "k": int,
    "port": int,
    "workers": int,
    "reg_lambda": float,
    "init_scale": float,
    "tol": float,
    "trend": float,
    "noise_sigma": float,
    "density": float,
    "normalize": _parse_bool,
    "cors": _parse_bool,
    "lambdas": _parse_lambda_grid,
    "composition_lambdas": _parse_lambda_list,
    "populations": _parse_populations,
    "weight_range": _parse_range,
    "price_range": _parse_range,
    "store_ids": _parse_store_selector,
}


def resolve_options(args: argparse.Namespace, defaults: dict) -> dict:
    """Merge defaults <- config file <- environment <- explicit flags."""
    merged = dict(defaults)

    config_path = getattr(args, "config", None) or os.environ.get(ENV_PREFIX + "CONFIG")
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise InvalidConfig(f"config file '{config_path}' does not exist") from None
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"config file '{config_path}' is not valid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise InvalidConfig("config file must hold a JSON object")
        for key, value in loaded.items():
            if key not in defaults:
                continue  # shared config may carry keys for other subcommands
            parser = _PARSERS[key]
            merged[key] = parser(value) if isinstance(value, str) else value

    for key in defaults:
        raw = os.environ.get(ENV_PREFIX + key.upper())
        if raw is not None:
            merged[key] = _PARSERS[key](raw)

    for key, value in vars(args).items():
        if key in defaults and value is not None:
            merged[key] = value
    return merged


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_table(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def _require_products(bundle_products) -> None:
    if not bundle_products:
        raise EmptyCatalog("no products in catalog")


# --- subcommands ------------------------------------------------------------


def cmd_generate(options: dict) -> int:
    config = SyntheticConfig(
        seed=options["seed"],
        n_products=options["n_products"],
        n_stores=options["n_stores"],
        fabric_populations=options["populations"],
        rank=options["rank"],
        noise_sigma=options["noise_sigma"],
        density=options["density"],
        weight_range=options["weight_range"],
        price_range=options["price_range"],
    )
    bundle = generate_synthetic(config)
    written = write_bundle(bundle, options["out_dir"])
    for role, record in written.manifest.items():
        print(f"wrote {role}: {record.path} ({record.rows} rows)")
    return 0


def _load_inputs(options: dict, need_sales: bool = True) -> DatasetBundle:
    for key in ("fabrics", "stores", "products") + (("sales",) if need_sales else ()):
        if not options.get(key):
            raise InvalidConfig(f"missing required input path --{key}")
    if not need_sales and not options.get("sales"):
        # Score-only runs may omit sales; synthesize an empty-but-valid matrix.
        from .demand import SalesMatrix
        from .domain import Catalog, validate_catalog
        from .errors import CatalogInvalid
        from .ingest import parse_fabrics, parse_products, parse_stores

        table = parse_fabrics(options["fabrics"])
        stores = parse_stores(options["stores"])
        products = parse_products(options["products"], table)
        catalog = Catalog(products=tuple(products), stores=tuple(stores), fabric_table=table)
        issues = validate_catalog(catalog)
        if issues:
            raise CatalogInvalid(issues)
        empty = SalesMatrix(
            n_products=catalog.n_products,
            n_stores=catalog.n_stores,
            product_idx=np.array([], dtype=np.int64),
            store_idx=np.array([], dtype=np.int64),
            values=np.array([], dtype=np.float64),
            confidence=np.array([], dtype=np.float64),
        )
        return DatasetBundle(catalog=catalog, sales=empty, manifest={})
    return load_bundle(options["fabrics"], options["stores"], options["products"], options["sales"])


def cmd_score(options: dict) -> int:
    bundle = _load_inputs(options, need_sales=False)
    catalog = bundle.catalog
    _require_products(catalog.products)

    scores = score_catalog(catalog)
    out = Path(options["out_dir"])
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    for product, scored in zip(catalog.products, scores):
        per_kg = blend_index_per_kg(product.blend, catalog.fabric_table)
        rows.append([product.id, repr(per_kg), repr(product.weight_kg), repr(scored.score)])
    _write_table(out / "higg_scores.csv", ["product_id", "msi_per_kg", "weight_kg", "higg_score"], rows)

    bins = histogram([s.score for s in scores], options["bins"])
    _write_table(
        out / "higg_histogram.csv",
        ["bin_lower", "bin_upper", "count"],
        [[repr(lo), repr(hi), str(count)] for lo, hi, count in bins],
    )
    print(f"scored {len(scores)} products -> {out / 'higg_scores.csv'}")
    return 0


def _als_config(options: dict) -> AlsConfig:
    return AlsConfig(
        rank=options["rank"],
        reg_lambda=options["reg_lambda"],
        n_iterations=options["iterations"],
        seed=options["seed"],
        init_scale=options["init_scale"],
        convergence_tol=options["tol"],
    )


def _fit_demand(bundle: DatasetBundle, options: dict):
    config = _als_config(options)
    model = fit_als(bundle.sales, config)
    demand = apply_trend(impute(model, bundle.sales), options["trend"])
    return model, demand


def cmd_fit(options: dict) -> int:
    bundle = _load_inputs(options)
    _require_products(bundle.catalog.products)
    model, demand = _fit_demand(bundle, options)

    out = Path(options["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    save_factor_model(model, out / "factor_model.bin")

    catalog = bundle.catalog
    rows = []
    for i in range(catalog.n_products):
        for j in range(catalog.n_stores):
            rows.append(
                [
                    catalog.products[i].id,
                    catalog.stores[j].id,
                    repr(float(demand.values[i, j])),
                    demand.provenance(i, j),
                ]
            )
    _write_table(out / "demand.csv", ["product_id", "store_id", "demand", "source"], rows)

    sales = bundle.sales
    predicted = model.predict()[sales.product_idx, sales.store_idx]
    residual = sales.values - predicted
    report = {
        "n_products": catalog.n_products,
        "n_stores": catalog.n_stores,
        "n_observations": sales.n_observations,
        "rank": model.rank,
        "reg_lambda": options["reg_lambda"],
        "trend_scalar": options["trend"],
        "n_iterations_requested": options["iterations"],
        "n_iterations_run": len(model.loss_history) - 1,
        "final_loss": model.final_loss,
        "observed_rmse": float(np.sqrt(np.mean(residual**2))) if residual.size else 0.0,
        "observed_max_abs_error": float(np.max(np.abs(residual))) if residual.size else 0.0,
        "loss_history": list(model.loss_history),
    }
    _atomic_write(out / "fit_report.json", json.dumps(report, indent=2) + "\n")
    print(
        f"fit rank-{model.rank} model in {report['n_iterations_run']} iterations, "
        f"final loss {model.final_loss:.6g}, observed max abs error "
        f"{report['observed_max_abs_error']:.6g}"
    )
    return 0


def _pareto_one_store(
    store_index: int,
    bundle: DatasetBundle,
    demand: DemandMatrix,
    higg,
    options: dict,
):
    front = pareto_front(
        store_index=store_index,
        k=options["k"],
        lambda_grid=options["lambdas"],
        demand=demand,
        catalog=bundle.catalog,
        higg=higg,
        normalize=options["normalize"],
    )
    compositions = []
    for lam in options["composition_lambdas"]:
        from .optimizer import OptimizeRequest, optimize_assortment

        request = OptimizeRequest(
            store_index=store_index, k=options["k"], trade_off_lambda=lam,
            normalize=options["normalize"],
        )
        solution = optimize_assortment(request, demand, bundle.catalog, higg)
        compositions.append((lam, fabric_composition(solution, bundle.catalog)))
    return front, compositions


def cmd_pareto(options: dict) -> int:
    bundle = _load_inputs(options)
    catalog = bundle.catalog
    _require_products(catalog.products)

    if options.get("model"):
        model = load_factor_model(options["model"])
        demand = apply_trend(impute(model, bundle.sales), options["trend"])
    else:
        _, demand = _fit_demand(bundle, options)
    higg = score_catalog(catalog)

    selector = options["store_ids"]
    if selector is None or selector == "all":
        store_indices = list(range(catalog.n_stores))
    else:
        store_indices = []
        for sid in selector:
            index = catalog.store_index(sid)
            if index is None:
                raise InvalidConfig(f"unknown store id '{sid}'")
            store_indices.append(index)

    out = Path(options["out_dir"])
    out.mkdir(parents=True, exist_ok=True)

    def run(store_index: int):
        return _pareto_one_store(store_index, bundle, demand, higg, options)

    workers = max(1, options["workers"])
    results: dict[int, tuple] = {}
    failures: dict[int, AssortifyError] = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(run, s): s for s in store_indices}
        for future, store_index in futures.items():
            try:
                results[store_index] = future.result()
            except AssortifyError as exc:
                failures[store_index] = exc

    for store_index in store_indices:
        sid = catalog.stores[store_index].id
        if store_index in failures:
            exc = failures[store_index]
            print(f"store {sid}: error[{exc.kind}]: {exc}", file=sys.stderr)
            continue
        front, compositions = results[store_index]
        _write_table(
            out / f"pareto_{sid}.csv",
            [
                "trade_off_lambda", "non_dominated", "revenue_score",
                "higg_score", "objective_value", "product_ids",
            ],
            [
                [
                    repr(solution.trade_off_lambda),
                    "1" if flag else "0",
                    repr(solution.revenue_score),
                    repr(solution.higg_score),
                    repr(solution.objective_value),
                    ";".join(solution.product_ids),
                ]
                for solution, flag in front
            ],
        )
        _write_table(
            out / f"composition_{sid}.csv",
            ["trade_off_lambda", "fabric", "share"],
            [
                [repr(lam), fabric, repr(share)]
                for lam, comp in compositions
                for fabric, share in comp.items()
            ],
        )
        revenue, higg_arr = raw_objectives(store_index, demand, catalog, higg)
        _write_table(
            out / f"candidates_{sid}.csv",
            ["product_id", "revenue", "higg_score", "msi_per_kg"],
            [
                [
                    product.id,
                    repr(float(revenue[i])),
                    repr(float(higg_arr[i])),
                    repr(blend_index_per_kg(product.blend, catalog.fabric_table)),
                ]
                for i, product in enumerate(catalog.products)
            ],
        )
        print(f"store {sid}: front of {len(front)} assortments -> {out / f'pareto_{sid}.csv'}")

    if results:
        return 0
    return 1


def cmd_serve(options: dict) -> int:
    import uvicorn

    from .service import SessionState, create_app

    bundle = _load_inputs(options)
    _require_products(bundle.catalog.products)
    if options.get("model"):
        model = load_factor_model(options["model"])
        demand = apply_trend(impute(model, bundle.sales), options["trend"])
    else:
        _, demand = _fit_demand(bundle, options)
    state = SessionState(bundle=bundle, demand=demand, higg=score_catalog(bundle.catalog))
    app = create_app(state, cors=options["cors"])

    host, port = options["host"], options["port"]
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        print(f"error[BindFailure]: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 1
    finally:
        probe.close()

    print(f"assortify service ready on http://{host}:{port}", flush=True)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


# --- argument wiring --------------------------------------------------------


def _add_input_arguments(parser: argparse.ArgumentParser, sales_required: bool = True) -> None:
    parser.add_argument("--fabrics", help="fabric table CSV")
    parser.add_argument("--stores", help="stores CSV")
    parser.add_argument("--products", help="products CSV")
    parser.add_argument("--sales", help="sales CSV" + ("" if sales_required else " (optional)"))


def _add_fit_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rank", type=int, help="latent dimension (default 8)")
    parser.add_argument("--reg-lambda", dest="reg_lambda", type=float,
                        help="L2 regularization (default 0.1)")
    parser.add_argument("--iterations", type=int, help="max alternations (default 20)")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--init-scale", dest="init_scale", type=float,
                        help="uniform init half-width (default 0.1)")
    parser.add_argument("--tol", type=float, help="relative loss-change stop (default 1e-5)")
    parser.add_argument("--trend", type=float, help="demand trend multiplier (default 1.0)")


_FIT_DEFAULTS = {
    "rank": 8, "reg_lambda": 0.1, "iterations": 20, "seed": 0,
    "init_scale": 0.1, "tol": 1e-5, "trend": 1.0,
}
_INPUT_DEFAULTS = {"fabrics": None, "stores": None, "products": None, "sales": None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assortify",
        description="Assortment planning balancing revenue against fabric sustainability.",
    )
    parser.add_argument("--config", help="JSON config file; flags override its values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic dataset bundle")
    p.add_argument("--out-dir", dest="out_dir", help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-products", dest="n_products", type=int)
    p.add_argument("--n-stores", dest="n_stores", type=int)
    p.add_argument("--populations", type=_parse_populations,
                   help="fabric:higg:share triples, comma separated")
    p.add_argument("--rank", type=int)
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    p.add_argument("--density", type=float)
    p.add_argument("--weight-range", dest="weight_range", type=_parse_range, help="lo:hi kg")
    p.add_argument("--price-range", dest="price_range", type=_parse_range, help="lo:hi")

    p = sub.add_parser("score", help="write per-product scores and their histogram")
    _add_input_arguments(p, sales_required=False)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--bins", type=int, help=f"histogram bins (default {DEFAULT_BINS})")

    p = sub.add_parser("fit", help="fit the demand model and write the completed matrix")
    _add_input_arguments(p)
    p.add_argument("--out-dir", dest="out_dir")
    _add_fit_arguments(p)

    p = sub.add_parser("pareto", help="sweep the trade-off weight and write fronts")
    _add_input_arguments(p)
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--model", help="saved factor model (skips inline fit)")
    p.add_argument("--k", type=int, help="assortment size (default 10)")
    p.add_argument("--lambdas", type=_parse_lambda_grid,
                   help="grid size or explicit comma list (default 101)")
    p.add_argument("--store-ids", dest="store_ids", type=_parse_store_selector,
                   help="'all' or comma-separated ids (default all)")
    p.add_argument("--no-normalize", dest="normalize", action="store_false", default=None,
                   help="rank on raw objective units")
    p.add_argument("--composition-lambdas", dest="composition_lambdas", type=_parse_lambda_list,
                   help="trade-off probes for composition files (default 0,0.5,1)")
    p.add_argument("--workers", type=int, help="parallel stores (default: cpu count)")
    _add_fit_arguments(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    _add_input_arguments(p)
    p.add_argument("--model", help="saved factor model (skips inline fit)")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--cors", action="store_true", default=None,
                   help="send permissive cross-origin headers")
    _add_fit_arguments(p)

    return parser


_DEFAULTS: dict[str, dict] = {
    "generate": {
        "out_dir": "data",
        "seed": 7,
        "n_products": 200,
        "n_stores": 3,
        "populations": SyntheticConfig().fabric_populations,
        "rank": 3,
        "noise_sigma": 0.05,
        "density": 0.7,
        "weight_range": (0.1, 0.6),
        "price_range": (5.0, 100.0),
    },
    "score": {**_INPUT_DEFAULTS, "out_dir": "out", "bins": DEFAULT_BINS},
    "fit": {**_INPUT_DEFAULTS, "out_dir": "out", **_FIT_DEFAULTS},
    "pareto": {
        **_INPUT_DEFAULTS,
        "out_dir": "out",
        "model": None,
        "k": 10,
        "lambdas": [i / 100 for i in range(101)],
        "store_ids": None,
        "normalize": True,
        "composition_lambdas": list(DEFAULT_COMPOSITION_LAMBDAS),
        "workers": os.cpu_count() or 1,
        **_FIT_DEFAULTS,
    },
    "serve": {
        **_INPUT_DEFAULTS,
        "model": None,
        "host": "127.0.0.1",
        "port": 8000,
        "cors": False,
        **_FIT_DEFAULTS,
    },
}

_HANDLERS = {
    "generate": cmd_generate,
    "score": cmd_score,
    "fit": cmd_fit,
    "pareto": cmd_pareto,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        options = resolve_options(args, _DEFAULTS[args.command])
        return _HANDLERS[args.command](options)
    except AssortifyError as exc:
        print(f"error[{exc.kind}]: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
