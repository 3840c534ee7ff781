"""Data reduction for sphere-plate torsional-balance measurements.

The bridge output at bias ``V`` and piezo extension ``d_pz`` is

    A = c1 [ε0 π R (V + V0)² / (d0 - d_pz) + |F_C|].

Each sweep is fitted by ``a(v) = α (v + x0)² + β``; ``α(d_pz)`` then fixes
``d0`` and ``c1`` and ``|F_C| = β / c1``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constants import EPS0
from .errors import CalibrationError


@dataclass(frozen=True, eq=False)
class SweepRecord:
    """One bias sweep at fixed piezo extension ``d_pz`` (m)."""

    d_pz: float
    v_bias: np.ndarray
    a: np.ndarray
    sweep_id: int | str | None = None

    def __post_init__(self):
        v = np.array(self.v_bias, dtype=float)
        a = np.array(self.a, dtype=float)
        if v.shape != a.shape or v.ndim != 1:
            raise CalibrationError("v_bias and a must be 1-D arrays of equal length")
        if v.size < 5:
            raise CalibrationError(f"sweep at d_pz={self.d_pz:.4g} m has {v.size} points; need >= 5")
        if np.unique(v).size != v.size:
            raise CalibrationError("bias voltages within a sweep must be distinct")
        object.__setattr__(self, "v_bias", v)
        object.__setattr__(self, "a", a)

    @property
    def points(self):
        return list(zip(self.v_bias.tolist(), self.a.tolist()))


@dataclass(frozen=True)
class QuadraticFit:
    alpha: float
    x0: float
    beta: float
    residual_rms: float
    cov: np.ndarray = field(default=None, repr=False, compare=False)
    d_pz: float | None = None

    @property
    def beta_err(self):
        return float(np.sqrt(self.cov[2, 2])) if self.cov is not None else float("nan")

    @property
    def alpha_err(self):
        return float(np.sqrt(self.cov[0, 0])) if self.cov is not None else float("nan")


@dataclass
class CalibrationResult:
    d0: float
    c1: float
    d0_err: float
    c1_err: float
    v0_per_sweep: np.ndarray
    d: np.ndarray
    f_c: np.ndarray
    f_c_err: np.ndarray
    fits: list = field(default_factory=list, repr=False)

    @property
    def forces(self):
        return list(zip(self.d.tolist(), self.f_c.tolist()))

    def to_dict(self):
        return {
            "d0_m": self.d0,
            "d0_err_m": self.d0_err,
            "c1_au_per_N": self.c1,
            "c1_err_au_per_N": self.c1_err,
            "v0_per_sweep_V": self.v0_per_sweep.tolist(),
            "forces": [
                {"d_m": d, "abs_force_N": f, "abs_force_err_N": e}
                for d, f, e in zip(self.d.tolist(), self.f_c.tolist(), self.f_c_err.tolist())
            ],
        }


def fit_parabola(sweep: SweepRecord, weights=None) -> QuadraticFit:
    """Least-squares fit of ``a = α (v + x0)² + β``.

    Solved linearly in the monomial basis ``a = c2 v² + c1 v + c0`` and
    mapped back with ``α = c2``, ``x0 = c1/(2 c2)``, ``β = c0 - α x0²``.
    The vertex sits at ``v = -x0``, so ``x0`` estimates the residual voltage.

    ``weights`` are optional per-point weights (inverse variances).
    """
    v, a = sweep.v_bias, sweep.a
    center = v.mean()
    scale = np.ptp(v)
    if scale == 0:
        raise CalibrationError("rank-deficient sweep: all bias voltages equal")
    u = (v - center) / scale
    X = np.column_stack([u * u, u, np.ones_like(u)])
    w = np.ones_like(v) if weights is None else np.asarray(weights, dtype=float)
    sw = np.sqrt(w)
    coef, _, rank, _ = np.linalg.lstsq(X * sw[:, None], a * sw, rcond=None)
    if rank < 3:
        raise CalibrationError("rank-deficient design matrix; need >= 3 distinct voltages")
    # undo the (v - center)/scale change of variable
    q2, q1, q0 = coef
    c2 = q2 / scale ** 2
    c1 = q1 / scale - 2 * q2 * center / scale ** 2
    c0 = q0 - q1 * center / scale + q2 * center ** 2 / scale ** 2
    alpha = c2
    if alpha == 0:
        raise CalibrationError("zero curvature: parabola vertex undefined")
    x0 = c1 / (2 * c2)
    beta = c0 - alpha * x0 ** 2

    resid = a - X @ coef
    dof = v.size - 3
    rms = float(np.sqrt(np.mean(resid ** 2)))
    s2 = float(np.sum(w * resid ** 2) / dof) if dof > 0 else float("nan")
    cov_q = s2 * np.linalg.inv((X * w[:, None]).T @ X)
    # Jacobian of (alpha, x0, beta) with respect to (q2, q1, q0)
    T = np.array([[1 / scale ** 2, 0, 0],
                  [-2 * center / scale ** 2, 1 / scale, 0],
                  [center ** 2 / scale ** 2, -center / scale, 1]])
    J = np.array([[1, 0, 0],
                  [-c1 / (2 * c2 ** 2), 1 / (2 * c2), 0],
                  [c1 ** 2 / (4 * c2 ** 2), -c1 / (2 * c2), 1]]) @ T
    cov = J @ cov_q @ J.T
    if alpha <= 0:
        warnings.warn(f"non-positive curvature alpha={alpha:.4g} at d_pz={sweep.d_pz:.4g} m",
                      stacklevel=2)
    return QuadraticFit(float(alpha), float(x0), float(beta), rms, cov, sweep.d_pz)


@dataclass(frozen=True)
class AlphaCurveFit:
    d0: float
    c1: float
    cov: np.ndarray

    @property
    def d0_err(self):
        return float(np.sqrt(self.cov[0, 0]))

    @property
    def c1_err(self):
        return float(np.sqrt(self.cov[1, 1]))


def fit_alpha_curve(alphas: Sequence[tuple[float, float]], radius: float,
                    weights=None, max_iter=20) -> AlphaCurveFit:
    """Fit ``α = c1 ε0 π R / (d0 - d_pz)`` to ``(d_pz, α)`` pairs.

    Starts from the straight line ``1/α = (d0 - d_pz)/(c1 ε0 π R)`` and
    refines with Gauss-Newton on the original residuals ``α - model``.
    Standard errors come from ``s² (JᵀWJ)⁻¹``; with only two points the fit
    is exact and the covariance is NaN.
    """
    data = np.asarray(alphas, dtype=float)
    if data.ndim != 2 or data.shape[0] < 2:
        raise CalibrationError("need at least two (d_pz, alpha) pairs")
    d_pz, alpha = data[:, 0], data[:, 1]
    if np.unique(d_pz).size != d_pz.size:
        raise CalibrationError("d_pz values must be distinct")
    if np.any(alpha <= 0):
        raise CalibrationError("curvatures must be positive")
    w = np.ones_like(alpha) if weights is None else np.asarray(weights, dtype=float)
    k = EPS0 * np.pi * radius

    slope, intercept = np.polyfit(d_pz, 1.0 / alpha, 1)
    if slope >= 0:
        raise CalibrationError("alpha does not increase as the surfaces approach")
    c1 = -1.0 / (slope * k)
    d0 = intercept / (-slope)

    for _ in range(max_iter):
        gap = d0 - d_pz
        if np.any(gap <= 0):
            raise CalibrationError("fitted d0 does not exceed every d_pz")
        model = c1 * k / gap
        r = alpha - model
        # columns: d/d(d0), d/d(c1)
        J = np.column_stack([-c1 * k / gap ** 2, k / gap])
        scale = np.array([d0, c1])
        Js = J * scale
        step, *_ = np.linalg.lstsq(Js * np.sqrt(w)[:, None], r * np.sqrt(w), rcond=None)
        step = step * scale
        d0, c1 = d0 + step[0], c1 + step[1]
        if np.all(np.abs(step) <= 1e-15 * np.abs([d0, c1])):
            break

    gap = d0 - d_pz
    J = np.column_stack([-c1 * k / gap ** 2, k / gap])
    r = alpha - c1 * k / gap
    dof = alpha.size - 2
    if dof > 0:
        s2 = float(np.sum(w * r ** 2) / dof)
        cov = s2 * np.linalg.inv((J * w[:, None]).T @ J)
    else:
        cov = np.full((2, 2), np.nan)
    if c1 <= 0:
        raise CalibrationError("fitted c1 is not positive")
    return AlphaCurveFit(float(d0), float(c1), cov)


def extract_casimir(fits: Sequence[QuadraticFit], c1: float, d0: float):
    """``(d, |F_C|)`` pairs with ``d = d0 - d_pz`` and ``|F_C| = β / c1``, sorted by ``d``."""
    if not c1 > 0:
        raise CalibrationError("c1 must be positive")
    out = []
    for fit in fits:
        if fit.beta < 0:
            warnings.warn(f"negative apparent force at d_pz={fit.d_pz:.4g} m", stacklevel=2)
        out.append((d0 - fit.d_pz, fit.beta / c1))
    out.sort(key=lambda pair: pair[0])
    return out


def analyze(sweeps: Sequence[SweepRecord], radius: float) -> CalibrationResult:
    """Run the full reduction on a set of sweeps."""
    if len(sweeps) < 2:
        raise CalibrationError("need at least two sweeps")
    fits = [fit_parabola(s) for s in sweeps]
    curve = fit_alpha_curve([(f.d_pz, f.alpha) for f in fits], radius)
    order = np.argsort([curve.d0 - f.d_pz for f in fits], kind="stable")
    fits = [fits[i] for i in order]
    pairs = extract_casimir(fits, curve.c1, curve.d0)
    f_c = np.array([p[1] for p in pairs])
    beta_err = np.array([f.beta_err for f in fits])
    rel_c1 = curve.c1_err / curve.c1
    f_err = np.sqrt((beta_err / curve.c1) ** 2 + (f_c * rel_c1) ** 2)
    return CalibrationResult(
        d0=curve.d0, c1=curve.c1, d0_err=curve.d0_err, c1_err=curve.c1_err,
        v0_per_sweep=np.array([f.x0 for f in fits]),
        d=np.array([p[0] for p in pairs]), f_c=f_c, f_c_err=f_err, fits=fits)
