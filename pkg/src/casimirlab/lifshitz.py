"""Sphere-plate Casimir force from the zero-temperature Lifshitz formula.

The force in the proximity form is

    F(d) = ħR/(2πc²) ∫_0^∞ dξ ∫_1^∞ dp ε₃ p ξ² Σ_pol ln(1 - Δ_31 Δ_32 e^{-x}),

with ``x = 2 d sqrt(ε₃) ξ p / c``. Substituting ``t = 2dξ/c`` and ``x`` for
``p`` gives

    F(d) = ħcR/(16π d³) ∫_0^{x_max} dt ∫_{t sqrt(ε₃)}^{x_max} dx  x Σ_pol ln(...)

which is what is integrated here. For perfect mirrors the double integral is
``-4π⁴/90`` and ``F = -π³ħcR/(360 d³)``.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import C, HBAR
from .dielectric import DielectricModel, Vacuum
from .errors import ConvergenceError, DomainError
from .quadrature import gauss_legendre_batch, tanh_sinh_batch
from .stack import LayerStack, stack_deltas

SCHEMES = ("gauss_legendre_mapped", "tanh_sinh")


@dataclass(frozen=True)
class Geometry:
    radius: float
    separation: float

    def __post_init__(self):
        if not (self.radius > 0 and self.separation > 0):
            raise DomainError("radius and separation must be positive")
        if self.separation / self.radius > 0.1:
            warnings.warn(f"d/R = {self.separation / self.radius:.3g} > 0.1: proximity "
                          "form of the sphere-plate force is unreliable", stacklevel=3)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and cutoffs for the double integral.

    ``xi_max`` (rad/s) defaults to ``1e4 c/(2d)``, which is inactive: the
    ``x_max`` cutoff already bounds ``2dξ/c`` because ``x >= 2dξ/c``.
    """

    rel_tol: float = 1e-6
    xi_max: float | None = None
    x_max: float = 50.0
    scheme: str = "gauss_legendre_mapped"
    max_evals: int = 400_000

    def __post_init__(self):
        if not 0 < self.rel_tol < 1e-2:
            raise DomainError("rel_tol must lie in (0, 1e-2)")
        if not self.x_max >= 30:
            raise DomainError("x_max must be >= 30")
        if self.scheme not in SCHEMES:
            raise DomainError(f"scheme must be one of {SCHEMES}")
        if self.xi_max is not None and not self.xi_max > 0:
            raise DomainError("xi_max must be positive")


class ForceResult(NamedTuple):
    force: float
    rel_err: float
    n_evals: int


def ideal_metal_force(radius, d):
    """Magnitude of the perfect-mirror sphere-plate force, ``π³ħcR/(360 d³)``."""
    if not (np.all(np.asarray(radius) > 0) and np.all(np.asarray(d) > 0)):
        raise DomainError("radius and separation must be positive")
    return math.pi ** 3 * HBAR * C * radius / (360.0 * np.asarray(d, dtype=float) ** 3)


class _Integrand:
    """Evaluates ``x Σ_pol ln(1 - Δ_31 Δ_32 e^{-x})`` on batches of (t, x)."""

    def __init__(self, sphere, plate, gap, d, check_sign):
        self.sphere = sphere
        self.plate = plate
        self.gap = gap
        self.d = d
        self.check_sign = check_sign
        models = [gap, *sphere.materials, *plate.materials]
        self.models = list({id(m): m for m in models}.values())
        self.trivial = all(isinstance(m, Vacuum) for m in self.models)

    def eps_table(self, t):
        xi = t * C / (2.0 * self.d)
        return {id(m): np.asarray(m.eps_imag(xi), dtype=float) for m in self.models}

    def _deltas(self, stack, eps, x, p, eps3):
        layers = [eps[id(m)] for m in stack.materials]
        thick = [f.thickness for f in stack.films]
        return stack_deltas(eps3, layers, thick, x, p, self.d)

    def __call__(self, eps, x, idx, t):
        eps = {k: v[idx] for k, v in eps.items()}
        eps3 = eps[id(self.gap)]
        p = x / (t[idx] * np.sqrt(eps3))
        a1, a2 = self._deltas(self.sphere, eps, x, p, eps3)
        b1, b2 = self._deltas(self.plate, eps, x, p, eps3)
        if any(np.any(np.abs(v) > 1.0 + 1e-12) for v in (a1, a2, b1, b2)):
            raise DomainError("|Δ| > 1: non-passive input")
        decay = np.exp(-x)
        r1 = a1 * b1 * decay
        r2 = a2 * b2 * decay
        if self.check_sign and (np.any(r1 < -1e-12) or np.any(r2 < -1e-12)):
            raise DomainError("repulsive integrand contribution (Δ_31 Δ_32 < 0); "
                              "pass check_sign=False for such material orderings")
        return x * (_log_one_minus(r1, x) + _log_one_minus(r2, x))


def _log_one_minus(r, x):
    """``ln(1 - r)`` for ``r = Δ Δ' e^{-x}`` with ``|Δ|, |Δ'| <= 1``.

    Near-perfect reflectors at tiny ``ξ`` round ``Δ Δ'`` to 1; passivity
    bounds ``1 - r`` below by ``1 - e^{-x}``, which keeps the log finite.
    """
    floor = -np.expm1(-x)
    with np.errstate(divide="ignore"):
        return np.where(r > 0.5, np.log(np.maximum(1.0 - r, floor)), np.log1p(-np.minimum(r, 0.5)))


def _inner(integrand, t, quad):
    """∫ x L dx over [t sqrt(ε₃), x_max] for every outer node ``t``."""
    eps = integrand.eps_table(t)
    x0 = t * np.sqrt(eps[id(integrand.gap)])
    x_max = quad.x_max
    lo = np.minimum(x0, x_max)
    inner_tol = 0.05 * quad.rel_tol
    if quad.scheme == "gauss_legendre_mapped":
        # y = exp(-(x - x0)) maps [x0, x_max] onto [exp(-(x_max - x0)), 1]
        def f(y, idx):
            x = lo[idx] - np.log(y)
            return integrand(eps, x, idx, t) / y
        res = gauss_legendre_batch(f, np.exp(-(x_max - lo)), np.ones_like(lo),
                                   rtol=inner_tol, max_evals=quad.max_evals)
    else:
        def f(x, idx):
            return integrand(eps, x, idx, t)
        res = tanh_sinh_batch(f, lo, np.full_like(lo, x_max), rtol=inner_tol)
    if not res.converged.all():
        bad = np.flatnonzero(~res.converged)[0]
        raise ConvergenceError(
            f"inner integral did not converge at t = {t[bad]:.4g}",
            float(res.value[bad]), float(res.error[bad]))
    return res.value, res.n_evals


def force_sphere_plate(sphere: LayerStack, plate: LayerStack, gap: DielectricModel,
                       geom: Geometry, quad: QuadratureConfig | None = None,
                       full_output=False, check_sign=True):
    """Casimir force between a coated sphere and a plate, in newtons.

    Negative values are attractive. ``sphere`` supplies ``Δ_31``, ``plate``
    supplies ``Δ_32`` and ``gap`` is the intervening medium.

    Parameters
    ----------
    sphere, plate : LayerStack
    gap : DielectricModel
    geom : Geometry
    quad : QuadratureConfig, optional
    full_output : bool
        Return a :class:`ForceResult` with the error estimate instead of a float.
    check_sign : bool
        Raise if any node yields a repulsive contribution.

    Raises
    ------
    ConvergenceError
        If either integration level misses its tolerance within the budget.
    """
    quad = quad or QuadratureConfig()
    d, radius = geom.separation, geom.radius
    integrand = _Integrand(sphere, plate, gap, d, check_sign)
    if integrand.trivial:
        res = ForceResult(0.0, 0.0, 0)
        return res if full_output else res.force

    xi_max = quad.xi_max if quad.xi_max is not None else 1e4 * C / (2.0 * d)
    t_hi = min(xi_max * 2.0 * d / C, quad.x_max)
    evals = [0]

    if quad.scheme == "gauss_legendre_mapped":
        # y = exp(-t) maps (0, t_hi] onto [exp(-t_hi), 1)
        def outer(y, idx):
            t = -np.log(y)
            vals, n = _inner(integrand, t, quad)
            evals[0] += n
            return vals / y
        res = gauss_legendre_batch(outer, [math.exp(-t_hi)], [1.0], rtol=0.5 * quad.rel_tol,
                                   max_evals=quad.max_evals)
    else:
        def outer(t, idx):
            vals, n = _inner(integrand, t, quad)
            evals[0] += n
            return vals
        res = tanh_sinh_batch(outer, [0.0], [t_hi], rtol=0.5 * quad.rel_tol)

    prefactor = HBAR * C * radius / (16.0 * math.pi * d ** 3)
    value = float(res.value[0])
    rel_err = float(res.error[0]) / abs(value) + 0.05 * quad.rel_tol if value else 0.0
    if not res.converged[0]:
        raise ConvergenceError(
            f"outer integral did not converge at d = {d:.4g} m "
            f"(estimate {prefactor * value:.6e} N, rel. error {rel_err:.2e})",
            prefactor * value, rel_err)
    out = ForceResult(prefactor * value + 0.0, rel_err, evals[0])
    return out if full_output else out.force


def _curve_point(args):
    sphere, plate, gap, radius, d, quad, check_sign = args
    return force_sphere_plate(sphere, plate, gap, Geometry(radius, d), quad,
                              full_output=True, check_sign=check_sign)


def force_curve(sphere, plate, gap, radius, separations, quad=None, jobs=1,
                full_output=False, check_sign=True):
    """Force at each separation; returns a list of ``(d, F)`` pairs.

    Points are independent; with ``jobs > 1`` they are evaluated in worker
    processes and returned in input order.
    """
    seps = [float(s) for s in separations]
    if any(s <= 0 for s in seps):
        raise DomainError("separations must be positive")
    if any(b < a for a, b in zip(seps, seps[1:])):
        raise DomainError("separations must be sorted ascending")
    tasks = [(sphere, plate, gap, radius, s, quad, check_sign) for s in seps]
    results = [None] * len(tasks)

    def run(i, fn):
        try:
            results[i] = fn()
        except ConvergenceError as exc:
            raise ConvergenceError(f"point {i} (d = {seps[i]:.4g} m): {exc}",
                                   exc.value, exc.error) from exc
        except DomainError as exc:
            raise DomainError(f"point {i} (d = {seps[i]:.4g} m): {exc}") from exc

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_curve_point, task) for task in tasks]
            for i, fut in enumerate(futures):
                run(i, fut.result)
    else:
        for i, task in enumerate(tasks):
            run(i, lambda task=task: _curve_point(task))
    if full_output:
        return [(s, r) for s, r in zip(seps, results)]
    return [(s, r.force) for s, r in zip(seps, results)]


class LifshitzForceLaw:
    """Callable ``d -> F(d)`` (newtons, signed) for fixed materials and radius.

    Accepts scalars or arrays; each separation is an independent Lifshitz
    evaluation, so use :class:`~casimirlab.roughness.InterpolatedForce` on a
    dense curve when many shifted separations are needed.
    """

    def __init__(self, sphere, plate, gap, radius, quad=None):
        self.sphere, self.plate, self.gap = sphere, plate, gap
        self.radius = radius
        self.quad = quad

    def __call__(self, d):
        d_arr = np.asarray(d, dtype=float)
        out = np.array([force_sphere_plate(self.sphere, self.plate, self.gap,
                                           Geometry(self.radius, float(s)), self.quad)
                        for s in d_arr.ravel()]).reshape(d_arr.shape)
        return float(out) if out.ndim == 0 else out
