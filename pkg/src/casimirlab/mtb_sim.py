"""Synthetic torsional-balance data for exercising the calibration pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calibration import SweepRecord
from .constants import EPS0
from .errors import SimulationError

# Force resolution of the reference apparatus; sets the default read-out noise.
FORCE_RESOLUTION = 10e-12


@dataclass(frozen=True)
class MtbParams:
    k_s: float = 1e-8
    lever_arm: float = 250e-6
    c1_true: float = 1e9
    d0_true: float = 500e-9
    v0_true: float = 0.2
    noise_sigma_a: float = 1e9 * FORCE_RESOLUTION
    radius: float = 100e-6

    def __post_init__(self):
        for name in ("k_s", "lever_arm", "c1_true", "d0_true", "radius"):
            if not getattr(self, name) > 0:
                raise SimulationError(f"{name} must be positive")
        if self.noise_sigma_a < 0:
            raise SimulationError("noise_sigma_a must be non-negative")


def _default_bias():
    return tuple(np.linspace(-0.5, 0.1, 13))


@dataclass(frozen=True)
class SweepPlan:
    d_pz_values: tuple[float, ...]
    v_bias_values: tuple[float, ...] = field(default_factory=_default_bias)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "d_pz_values", tuple(float(v) for v in self.d_pz_values))
        object.__setattr__(self, "v_bias_values", tuple(float(v) for v in self.v_bias_values))
        if not self.d_pz_values or not self.v_bias_values:
            raise SimulationError("sweep plan needs piezo positions and bias voltages")


def zero_force(d):
    return np.zeros_like(np.asarray(d, dtype=float))


def _gradient(force_law, d):
    h = d / 1000.0
    return (np.abs(force_law(d + h)) - np.abs(force_law(d - h))) / (2.0 * h)


def jump_to_contact_distance(params: MtbParams, force_law, d_lo=1e-9, d_hi=1e-5):
    """Largest separation where the force gradient beats the torsional stiffness.

    Instability sets in when ``lever_arm² |dF/dd| >= k_s``. The boundary is
    bracketed on ``[d_lo, d_hi]`` and located by bisection. Returns ``None``
    when the balance is stable over the whole range.
    """
    b2 = params.lever_arm ** 2

    def unstable(d):
        return b2 * abs(float(_gradient(force_law, d))) >= params.k_s

    if not unstable(d_lo):
        return None
    if unstable(d_hi):
        raise SimulationError(f"balance unstable up to {d_hi:.3g} m; widen the search range")
    lo, hi = d_lo, d_hi
    while hi - lo > 1e-12 * hi:
        mid = math.sqrt(lo * hi) if hi / lo > 2 else 0.5 * (lo + hi)
        if unstable(mid):
            lo = mid
        else:
            hi = mid
    return lo


def electrostatic_force(params: MtbParams, v_bias, d):
    return EPS0 * math.pi * params.radius * (np.asarray(v_bias) + params.v0_true) ** 2 / d


def _deflected_separation(params, v, d, force_law, tol=1e-15, max_iter=200):
    """Separation after the plate tilts under the total load (fixed point)."""
    b2_over_k = params.lever_arm ** 2 / params.k_s
    d_eff = np.full_like(v, d, dtype=float)
    for _ in range(max_iter):
        total = electrostatic_force(params, v, d_eff) + np.abs(force_law(d_eff))
        new = d - b2_over_k * total
        if np.any(new <= 0):
            raise SimulationError(f"plate snaps into contact at d = {d:.4g} m")
        if np.all(np.abs(new - d_eff) <= tol * d):
            return new
        d_eff = new
    raise SimulationError(f"plate deflection did not settle at d = {d:.4g} m")


def simulate_dataset(params: MtbParams, plan: SweepPlan, force_law=zero_force,
                     rotation=False, jtc_range=(1e-9, 1e-5)):
    """Bridge output for every planned sweep.

    ``A = c1 [ε0 π R (V + V0)² / d + |F_C(d)|] + noise`` with Gaussian noise
    of width ``noise_sigma_a``. Each sweep draws from its own child seed so
    the dataset is reproducible and independent of evaluation order.

    With ``rotation=True`` the separation is reduced by the plate tilt
    ``lever_arm² F / k_s`` before evaluating forces, which the default
    analysis ignores. ``jtc_range`` brackets the jump-to-contact search and
    must lie where ``force_law`` is defined.
    """
    d_jtc = jump_to_contact_distance(params, force_law, *jtc_range)
    seeds = np.random.SeedSequence(plan.seed).spawn(len(plan.d_pz_values))
    v = np.array(plan.v_bias_values)
    records = []
    for i, (d_pz, ss) in enumerate(zip(plan.d_pz_values, seeds)):
        d = params.d0_true - d_pz
        if d <= 0:
            raise SimulationError(f"sweep {i}: d_pz = {d_pz:.4g} m is beyond d0")
        if d_jtc is not None and d <= d_jtc:
            raise SimulationError(
                f"sweep {i}: d = {d:.4g} m (d_pz = {d_pz:.4g} m) is below the "
                f"jump-to-contact distance {d_jtc:.4g} m")
        d_eff = _deflected_separation(params, v, d, force_law) if rotation else d
        force = electrostatic_force(params, v, d_eff) + np.abs(force_law(d_eff))
        a = params.c1_true * force
        if params.noise_sigma_a > 0:
            a = a + np.random.default_rng(ss).normal(0.0, params.noise_sigma_a, v.size)
        records.append(SweepRecord(d_pz, v, a, sweep_id=i))
    return records
