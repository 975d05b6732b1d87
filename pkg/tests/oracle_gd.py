"""Independent reference fit: full-batch gradient descent on the same
confidence-weighted loss the package minimizes by alternating solves.

Kept deliberately simple and separate from the package so it can act as an
oracle: plain gradients, bold-driver step control, run until the loss stops
moving.
"""

from __future__ import annotations

import numpy as np


def gd_factorize(
    n: int,
    m: int,
    rank: int,
    obs_i: np.ndarray,
    obs_j: np.ndarray,
    vals: np.ndarray,
    reg: float,
    seed: int = 1234,
    max_steps: int = 20000,
    lr: float = 1e-3,
    rel_tol: float = 1e-10,
    stall_limit: int = 40,
):
    """Returns (U, V, beta, gamma, loss_history)."""
    rng = np.random.default_rng(seed)
    u = rng.normal(0.0, 0.01, size=(n, rank))
    v = rng.normal(0.0, 0.01, size=(m, rank))
    beta = np.zeros(n)
    gamma = np.zeros(m)

    def loss(u, v, beta, gamma):
        pred = (u[obs_i] * v[obs_j]).sum(axis=1) + beta[obs_i] + gamma[obs_j]
        r = vals - pred
        penalty = (u**2).sum() + (beta**2).sum() + (v**2).sum() + (gamma**2).sum()
        return float((r**2).sum() + reg * penalty)

    current = loss(u, v, beta, gamma)
    history = [current]
    stall = 0
    for _ in range(max_steps):
        pred = (u[obs_i] * v[obs_j]).sum(axis=1) + beta[obs_i] + gamma[obs_j]
        r = vals - pred

        gu = 2.0 * reg * u
        np.add.at(gu, obs_i, -2.0 * r[:, None] * v[obs_j])
        gv = 2.0 * reg * v
        np.add.at(gv, obs_j, -2.0 * r[:, None] * u[obs_i])
        gb = 2.0 * reg * beta
        np.add.at(gb, obs_i, -2.0 * r)
        gg = 2.0 * reg * gamma
        np.add.at(gg, obs_j, -2.0 * r)

        while True:
            u2 = u - lr * gu
            v2 = v - lr * gv
            b2 = beta - lr * gb
            g2 = gamma - lr * gg
            candidate = loss(u2, v2, b2, g2)
            if candidate <= current or lr < 1e-18:
                break
            lr *= 0.5

        u, v, beta, gamma = u2, v2, b2, g2
        improvement = current - candidate
        current = candidate
        history.append(current)
        lr *= 1.05
        if improvement <= rel_tol * max(current, 1.0):
            stall += 1
            if stall >= stall_limit:
                break
        else:
            stall = 0
    return u, v, beta, gamma, history


def gd_predict(u, v, beta, gamma):
    return u @ v.T + beta[:, None] + gamma[None, :]
