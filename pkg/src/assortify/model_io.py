"""Flat-file persistence for fitted factor models.

Layout: one ASCII header line, then raw little-endian float64 blocks in
order product-factors (row-major), store-factors (row-major), product
biases, store biases, loss history, final loss. The header carries the
four counts needed to slice the blocks back out:

    ASFM1 n_products=<n> n_stores=<m> rank=<d> history=<h>\\n

Writes are deterministic: the same model always produces identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .demand import FactorModel
from .errors import ParseError

_MAGIC = "ASFM1"


def save_factor_model(model: FactorModel, path: str | Path) -> None:
    path = Path(path)
    header = (
        f"{_MAGIC} n_products={model.n_products} n_stores={model.n_stores} "
        f"rank={model.rank} history={len(model.loss_history)}\n"
    )
    blocks = [
        np.ascontiguousarray(model.u, dtype="<f8"),
        np.ascontiguousarray(model.v, dtype="<f8"),
        np.ascontiguousarray(model.beta, dtype="<f8"),
        np.ascontiguousarray(model.gamma, dtype="<f8"),
        np.asarray(model.loss_history, dtype="<f8"),
        np.asarray([model.final_loss], dtype="<f8"),
    ]
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        for block in blocks:
            fh.write(block.tobytes())


def load_factor_model(path: str | Path) -> FactorModel:
    path = Path(path)
    if not path.exists():
        raise ParseError(str(path), 0, "", "model file does not exist", kind="MissingFile")
    with open(path, "rb") as fh:
        header = fh.readline().decode("ascii", errors="replace").strip()
        payload = fh.read()

    fields = header.split()
    if not fields or fields[0] != _MAGIC:
        raise ParseError(str(path), 1, "header", f"expected '{_MAGIC}' magic, got '{header[:40]}'")
    try:
        meta = dict(f.split("=", 1) for f in fields[1:])
        n = int(meta["n_products"])
        m = int(meta["n_stores"])
        d = int(meta["rank"])
        h = int(meta["history"])
    except (ValueError, KeyError) as exc:
        raise ParseError(str(path), 1, "header", f"malformed header: {exc}") from exc

    expected = (n * d + m * d + n + m + h + 1) * 8
    if len(payload) != expected:
        raise ParseError(
            str(path), 1, "payload",
            f"expected {expected} payload bytes, found {len(payload)}",
        )

    flat = np.frombuffer(payload, dtype="<f8")
    offsets = np.cumsum([0, n * d, m * d, n, m, h])
    u = flat[offsets[0]:offsets[1]].reshape(n, d).copy()
    v = flat[offsets[1]:offsets[2]].reshape(m, d).copy()
    beta = flat[offsets[2]:offsets[3]].copy()
    gamma = flat[offsets[3]:offsets[4]].copy()
    history = tuple(float(x) for x in flat[offsets[4]:offsets[5]])
    final_loss = float(flat[offsets[5]])
    return FactorModel(
        u=u, v=v, beta=beta, gamma=gamma, final_loss=final_loss, loss_history=history
    )
