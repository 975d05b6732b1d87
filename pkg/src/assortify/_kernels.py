"""Hot numeric kernels for the factor-model fit.

Each kernel is written once as a plain Python/numpy function and compiled
with numba's ``@njit`` when available. Set ``ASSORTIFY_NUMBA=0`` (or
``false``/``off``) to force the interpreted numpy path; the flag is read at
import time. Both paths execute identical operations in identical order, so
results are bit-for-bit equal. ``benchmarks/bench_als.py`` compares them.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("ASSORTIFY_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_requested()


def _solve_side_impl(indptr, cols, vals, conf, other, other_bias, reg, out_factors, out_bias):
    # Exact weighted ridge solve per row: unknowns are the row's factor
    # vector plus its scalar bias, handled by a constant-1 column appended
    # to the opposite-side factors. Rows with no observations shrink to 0
    # when reg > 0 and raise LinAlgError when reg == 0.
    n_rows = indptr.shape[0] - 1
    d = other.shape[1]
    for i in range(n_rows):
        a = np.zeros((d + 1, d + 1))
        b = np.zeros(d + 1)
        for t in range(indptr[i], indptr[i + 1]):
            j = cols[t]
            c = conf[t]
            y = vals[t] - other_bias[j]
            for p in range(d):
                vp = other[j, p]
                b[p] += c * y * vp
                for q in range(d):
                    a[p, q] += c * vp * other[j, q]
                a[p, d] += c * vp
            b[d] += c * y
            a[d, d] += c
        for p in range(d):
            a[d, p] = a[p, d]
        for p in range(d + 1):
            a[p, p] += reg
        z = np.linalg.solve(a, b)
        out_factors[i, :] = z[:d]
        out_bias[i] = z[d]


def _loss_impl(obs_i, obs_j, vals, conf, factors_u, factors_v, bias_u, bias_v, reg):
    # Confidence-weighted squared residuals over observed cells plus an L2
    # penalty on both factor matrices and both bias vectors.
    d = factors_u.shape[1]
    acc = 0.0
    for t in range(vals.shape[0]):
        i = obs_i[t]
        j = obs_j[t]
        pred = bias_u[i] + bias_v[j]
        for p in range(d):
            pred += factors_u[i, p] * factors_v[j, p]
        r = vals[t] - pred
        acc += conf[t] * r * r
    penalty = 0.0
    for i in range(factors_u.shape[0]):
        for p in range(d):
            penalty += factors_u[i, p] * factors_u[i, p]
        penalty += bias_u[i] * bias_u[i]
    for j in range(factors_v.shape[0]):
        for p in range(d):
            penalty += factors_v[j, p] * factors_v[j, p]
        penalty += bias_v[j] * bias_v[j]
    return acc + reg * penalty


if NUMBA_ENABLED:
    from numba import njit

    solve_side = njit(cache=True)(_solve_side_impl)
    loss_value = njit(cache=True)(_loss_impl)
else:
    solve_side = _solve_side_impl
    loss_value = _loss_impl
