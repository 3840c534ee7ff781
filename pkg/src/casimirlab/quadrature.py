"""Vectorised adaptive quadrature over many intervals at once.

Both rules integrate a *batch* of independent problems ``∫_{a_i}^{b_i} f``
so that the integrand is evaluated with a single numpy call per refinement
sweep. The integrand has the signature ``f(x, idx)`` where ``idx[k]`` is the
problem index owning node ``x[k]``.

Both rules are open: endpoints are never evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError


@dataclass
class BatchResult:
    value: np.ndarray
    error: np.ndarray
    converged: np.ndarray
    n_evals: int


@lru_cache(maxsize=None)
def _gl_rule(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _gl_panels(f, lo, hi, pid, order):
    """Gauss-Legendre estimate on each panel ``[lo, hi]``."""
    x, w = _gl_rule(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    ids = np.broadcast_to(pid[:, None], nodes.shape)
    vals = np.asarray(f(nodes.ravel(), ids.ravel()), dtype=float).reshape(nodes.shape)
    return half * (vals @ w)


def gauss_legendre_batch(f, a, b, rtol=1e-8, atol=0.0, order=10,
                         initial_panels=4, max_evals=200_000):
    """Adaptive composite Gauss-Legendre on a batch of intervals.

    Each panel carries a coarse ``order``-point estimate and the sum of the
    same rule on its two halves; their difference is the panel error.
    Panels whose error exceeds their length-proportional share of the
    problem tolerance are bisected until every problem satisfies
    ``err <= max(rtol*|I|, atol)``. The estimate assumes smooth panels; an
    algebraic endpoint singularity ``(b - x)^(-1/2)`` is under-estimated by
    about ``1/(sqrt(2) - 1)``, so map such integrands first.

    Parameters
    ----------
    f : callable
        ``f(x, idx) -> array`` evaluated elementwise.
    a, b : array_like
        Interval endpoints, one per problem. ``a == b`` gives zero.
    rtol, atol : float or array_like
        Relative and absolute tolerances (``atol`` may be per problem).
    max_evals : int
        Per-problem evaluation budget.

    Returns
    -------
    BatchResult
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    m = a.size
    atol = np.broadcast_to(np.asarray(atol, dtype=float), (m,))
    span = b - a

    edges = np.linspace(0.0, 1.0, initial_panels + 1)
    lo = (a[:, None] + span[:, None] * edges[None, :-1]).ravel()
    hi = (a[:, None] + span[:, None] * edges[None, 1:]).ravel()
    pid = np.repeat(np.arange(m), initial_panels)
    active = span != 0.0
    keep = active[pid]
    lo, hi, pid = lo[keep], hi[keep], pid[keep]

    mid = 0.5 * (lo + hi)
    coarse = _gl_panels(f, lo, hi, pid, order)
    left = _gl_panels(f, lo, mid, pid, order)
    right = _gl_panels(f, mid, hi, pid, order)
    evals = np.bincount(pid, minlength=m) * 3 * order
    stuck = np.zeros(m, dtype=bool)

    while True:
        fine = left + right
        err = np.abs(coarse - fine)
        value = np.bincount(pid, weights=fine, minlength=m)
        error = np.bincount(pid, weights=err, minlength=m)
        tol = np.maximum(rtol * np.abs(value), atol)
        todo = (error > tol) & ~stuck & (evals < max_evals)
        if not todo.any():
            break
        share = np.where(span[pid] != 0.0, (hi - lo) / np.abs(span[pid]), 1.0)
        split = todo[pid] & (err > tol[pid] * share)
        # panels too narrow to bisect meaningfully are frozen
        narrow = (hi - lo) <= 1e-13 * np.maximum(np.abs(lo), np.abs(hi))
        stuck_now = np.bincount(pid, weights=(split & narrow), minlength=m) > 0
        stuck |= stuck_now
        split &= ~narrow
        if not split.any():
            break

        s_lo, s_hi, s_pid = lo[split], hi[split], pid[split]
        s_mid = 0.5 * (s_lo + s_hi)
        c_lo = np.concatenate([s_lo, s_mid])
        c_hi = np.concatenate([s_mid, s_hi])
        c_pid = np.concatenate([s_pid, s_pid])
        c_coarse = np.concatenate([left[split], right[split]])
        c_mid = 0.5 * (c_lo + c_hi)
        c_left = _gl_panels(f, c_lo, c_mid, c_pid, order)
        c_right = _gl_panels(f, c_mid, c_hi, c_pid, order)
        evals += np.bincount(c_pid, minlength=m) * 2 * order

        keep = ~split
        lo = np.concatenate([lo[keep], c_lo])
        hi = np.concatenate([hi[keep], c_hi])
        pid = np.concatenate([pid[keep], c_pid])
        coarse = np.concatenate([coarse[keep], c_coarse])
        left = np.concatenate([left[keep], c_left])
        right = np.concatenate([right[keep], c_right])

    converged = error <= tol
    return BatchResult(value, error, converged, int(evals.sum()))


# tanh-sinh -----------------------------------------------------------------

_TS_TMAX = 3.5
_TS_STEP0 = 0.5


@lru_cache(maxsize=None)
def _ts_level(level):
    """Abscissae offsets and weights added at ``level`` on [-1, 1].

    Returns ``(k_sign, delta, weight)`` where the node sits at distance
    ``delta`` from the endpoint selected by ``k_sign`` (+1: right end).
    Weights already include the level step size.
    """
    h = _TS_STEP0 / 2 ** level
    n = int(np.floor(_TS_TMAX / h))
    k = np.arange(-n, n + 1)
    if level > 0:
        k = k[k % 2 != 0]
    t = k * h
    u = 0.5 * np.pi * np.sinh(np.abs(t))
    delta = 2.0 / (np.exp(2.0 * u) + 1.0)  # 1 - tanh(u), without cancellation
    weight = h * 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    return np.sign(t), delta, weight


def tanh_sinh_batch(f, a, b, rtol=1e-8, atol=0.0, max_level=10):
    """Tanh-sinh (double exponential) quadrature on a batch of intervals.

    Levels halve the step; the change between successive levels is the
    error estimate. A problem stops refining once
    ``|I_l - I_{l-1}| <= max(rtol*|I_l|, atol)`` for ``l >= 2``.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    m = a.size
    atol = np.broadcast_to(np.asarray(atol, dtype=float), (m,))
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)

    sums = np.zeros(m)
    value = np.zeros(m)
    error = np.full(m, np.inf)
    left, right = np.minimum(a, b), np.maximum(a, b)
    inner_lo = np.nextafter(left, right)
    inner_hi = np.nextafter(right, left)
    # no float strictly inside: the integral is below double resolution
    converged = inner_lo >= right
    error[converged] = 0.0
    n_evals = 0
    for level in range(max_level + 1):
        todo = np.flatnonzero(~converged)
        if todo.size == 0:
            break
        sgn, delta, w = _ts_level(level)
        # nodes are placed relative to their nearest endpoint
        hw = half[todo][:, None]
        near_hi = b[todo][:, None] - hw * delta[None, :]
        near_lo = a[todo][:, None] + hw * delta[None, :]
        x = np.where(sgn[None, :] > 0, near_hi, np.where(sgn[None, :] < 0, near_lo, center[todo][:, None]))
        # nodes that round onto an endpoint move to the nearest interior float
        x = np.minimum(np.maximum(x, inner_lo[todo][:, None]), inner_hi[todo][:, None])
        ids = np.broadcast_to(todo[:, None], x.shape)
        vals = np.asarray(f(x.ravel(), ids.ravel()), dtype=float).reshape(x.shape)
        n_evals += vals.size
        sums[todo] = sums[todo] * (0.5 if level > 0 else 1.0) + vals @ w
        new = half[todo] * sums[todo]
        if level > 0:
            error[todo] = np.abs(new - value[todo])
        value[todo] = new
        if level >= 2:
            tol = np.maximum(rtol * np.abs(new), atol[todo])
            converged[todo] = error[todo] <= tol
    return BatchResult(value, error, converged, n_evals)


def _scalar(f):
    return lambda x, idx: f(x)


def integrate(f, a, b, rtol=1e-8, atol=0.0, scheme="gauss_legendre", **kw):
    """Integrate a vectorised ``f(x)`` over ``[a, b]``; returns ``(value, error)``.

    Raises
    ------
    ConvergenceError
        When the tolerance is not met; carries the partial value.
    """
    if scheme in ("gauss_legendre", "gauss_legendre_mapped"):
        res = gauss_legendre_batch(_scalar(f), [a], [b], rtol, atol, **kw)
    elif scheme == "tanh_sinh":
        res = tanh_sinh_batch(_scalar(f), [a], [b], rtol, atol, **kw)
    else:
        raise ValueError(f"unknown quadrature scheme {scheme!r}")
    if not res.converged[0]:
        raise ConvergenceError(
            f"{scheme} did not converge: estimate {res.value[0]:.6e}, "
            f"error {res.error[0]:.2e}", res.value[0], res.error[0])
    return float(res.value[0]), float(res.error[0])
