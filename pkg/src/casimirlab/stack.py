"""Reflection amplitudes of bare and coated half-spaces on the imaginary axis.

Sign convention: the gap medium is always the *first* index, so for a bare
half-space ``k`` the pair is ``Δ_3k`` with

    Δ^(1)_jk = (s_k ε_j - s_j ε_k) / (s_k ε_j + s_j ε_k)     (TM)
    Δ^(2)_jk = (s_k - s_j) / (s_k + s_j)                     (TE)

and ``s_k = sqrt(p^2 - 1 + ε_k/ε_3)``. Films are composed from the substrate
outward with

    Δ_eff = (Δ_outer + Δ_inner e^{-x t s / (p d)}) /
            (1 + Δ_outer Δ_inner e^{-x t s / (p d)}),

where ``x t s / (p d) = 2 ξ sqrt(ε_3) t s / c`` is the round-trip decay
through a film of thickness ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import C
from .dielectric import DielectricModel
from .errors import DomainError


@dataclass(frozen=True)
class Layer:
    material: DielectricModel
    thickness: float

    def __post_init__(self):
        if not self.thickness > 0:
            raise DomainError(f"layer thickness must be > 0, got {self.thickness}")


@dataclass(frozen=True)
class LayerStack:
    """Semi-infinite ``substrate`` under ``films`` (innermost first)."""

    substrate: DielectricModel
    films: tuple[Layer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "films", tuple(self.films))

    @property
    def materials(self):
        return (self.substrate,) + tuple(f.material for f in self.films)


@dataclass(frozen=True)
class IntegrandPoint:
    xi: float
    p: float
    d: float
    eps3: float = 1.0

    def __post_init__(self):
        if not (self.xi > 0 and self.p >= 1 and self.d > 0 and self.eps3 >= 1):
            raise DomainError("integrand point needs xi > 0, p >= 1, d > 0, eps3 >= 1")

    @property
    def x(self):
        return 2.0 * self.d * np.sqrt(self.eps3) * self.xi * self.p / C


class DeltaPair(NamedTuple):
    delta1: float
    delta2: float

    def __neg__(self):
        return DeltaPair(-self.delta1, -self.delta2)


def s_factor(eps_k, eps3, p):
    """``sqrt(p^2 - 1 + eps_k/eps3)`` (positive root)."""
    rad = np.asarray(p, dtype=float) ** 2 - 1.0 + np.asarray(eps_k, dtype=float) / eps3
    if np.any(rad < 0):
        raise DomainError("negative radicand in s_k; check p >= 1 and eps >= 1")
    out = np.sqrt(rad)
    return float(out) if out.ndim == 0 else out


def fresnel_deltas(eps_j, s_j, eps_k, s_k):
    """Interface amplitudes ``(Δ^(1)_jk, Δ^(2)_jk)``; antisymmetric in ``j <-> k``."""
    d1 = (s_k * eps_j - s_j * eps_k) / (s_k * eps_j + s_j * eps_k)
    d2 = (s_k - s_j) / (s_k + s_j)
    return DeltaPair(d1, d2)


def compose(outer, inner, decay):
    """One film step: combine the outer interface with the reflection behind it."""
    return (outer + inner * decay) / (1.0 + outer * inner * decay)


def stack_deltas(eps_gap, eps_layers, thicknesses, x, p, d):
    """Vectorised effective amplitudes for a stack.

    Parameters
    ----------
    eps_gap : array_like
        Gap permittivity ``ε_3(iξ)``.
    eps_layers : sequence of array_like
        ``[substrate, film_1, ..., film_N]`` permittivities, innermost first.
    thicknesses : sequence of float
        Film thicknesses ``[t_1, ..., t_N]`` in meters.
    x, p : array_like
        ``x = 2 d sqrt(ε_3) ξ p / c`` and the angle variable ``p``.
    d : float
        Surface separation; film decay factors are ``exp(-x t s / (p d))``.

    Returns
    -------
    DeltaPair of arrays
    """
    s = [np.sqrt(p * p - 1.0 + e / eps_gap) for e in eps_layers]
    s_gap = np.sqrt(p * p - 1.0 + eps_gap / eps_gap)
    if not thicknesses:
        return fresnel_deltas(eps_gap, s_gap, eps_layers[0], s[0])
    r1, r2 = fresnel_deltas(eps_layers[1], s[1], eps_layers[0], s[0])
    n = len(thicknesses)
    for i in range(1, n + 1):
        decay = np.exp(-x * thicknesses[i - 1] * s[i] / (p * d))
        if i < n:
            o1, o2 = fresnel_deltas(eps_layers[i + 1], s[i + 1], eps_layers[i], s[i])
        else:
            o1, o2 = fresnel_deltas(eps_gap, s_gap, eps_layers[i], s[i])
        r1 = compose(o1, r1, decay)
        r2 = compose(o2, r2, decay)
    return DeltaPair(r1, r2)


def effective_deltas(stack: LayerStack, point: IntegrandPoint) -> DeltaPair:
    """Gap-side reflection amplitudes ``Δ_3k`` of ``stack`` at one integrand point."""
    eps = [float(m.eps_imag(point.xi)) for m in stack.materials]
    t = [f.thickness for f in stack.films]
    d1, d2 = stack_deltas(point.eps3, eps, t, point.x, point.p, point.d)
    return DeltaPair(float(d1), float(d2))

