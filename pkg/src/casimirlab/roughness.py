"""Additive roughness correction from height-displacement histograms.

The corrected force averages the smooth-surface force over the joint
distribution of local displacements of the two surfaces:

    F_rough(d) = Σ_ij v_i^sp v_j^pl F(d - (δ_i^sp + δ_j^pl)).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError


@dataclass(frozen=True, eq=False)
class RoughnessProfile:
    """Displacements ``delta`` (m, ascending) with probabilities ``v``."""

    delta: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        delta = np.array(self.delta, dtype=float).ravel()
        v = np.array(self.v, dtype=float).ravel()
        if delta.size == 0 or delta.shape != v.shape:
            raise DomainError("profile needs matching, non-empty delta and v")
        if np.any(v < 0):
            raise DomainError("probabilities must be non-negative")
        if abs(v.sum() - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {v.sum()!r}, expected 1")
        order = np.argsort(delta, kind="stable")
        delta, v = delta[order], v[order]
        delta.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "v", v)

    @classmethod
    def flat(cls):
        return cls([0.0], [1.0])

    @property
    def mean(self):
        return float(self.v @ self.delta)

    @property
    def variance(self):
        return float(self.v @ (self.delta - self.mean) ** 2)

    @property
    def rms(self):
        return self.variance ** 0.5

    def centered(self):
        """Same profile shifted so that ``Σ v δ = 0``."""
        return RoughnessProfile(self.delta - self.mean, self.v)

    def to_dict(self):
        return {"delta_m": self.delta.tolist(), "v": self.v.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(data["delta_m"], data["v"])

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True, eq=False)
class HeightMap:
    heights: np.ndarray
    pitch: float = 1.0

    def __post_init__(self):
        h = np.array(self.heights, dtype=float)
        if h.ndim != 2 or h.size == 0:
            raise DomainError("height map must be a non-empty 2-D grid")
        if not np.all(np.isfinite(h)):
            raise DomainError("height map contains non-finite values")
        if not self.pitch > 0:
            raise DomainError("pixel pitch must be positive")
        object.__setattr__(self, "heights", h)

    @classmethod
    def from_csv(cls, path, width=None, pitch=1.0):
        """Read a CSV grid, or a single column reshaped to ``width`` columns."""
        with open(Path(path), newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
        try:
            values = [[float(c) for c in r] for r in rows]
        except ValueError:
            values = [[float(c) for c in r] for r in rows[1:]]  # skip a header row
        if width is not None:
            flat = np.array([v for r in values for v in r])
            if flat.size % width:
                raise DomainError(f"{flat.size} samples do not fill rows of width {width}")
            return cls(flat.reshape(-1, width), pitch)
        if len({len(r) for r in values}) > 1:
            raise DomainError("ragged height-map rows")
        return cls(np.array(values), pitch)


def histogram_from_heightmap(hmap: HeightMap, n_bins: int) -> RoughnessProfile:
    """Displacement histogram of a height map.

    Pixels are sorted into ``n_bins`` equal-width bins spanning the height
    range. Each non-empty bin contributes its pixel fraction ``v`` at the
    mean height of its pixels, measured from the map mean, so the profile
    is exactly mean-centred.
    """
    if n_bins < 1:
        raise DomainError("n_bins must be >= 1")
    h = hmap.heights.ravel()
    mean = h.mean()
    lo, hi = h.min(), h.max()
    if hi == lo:
        return RoughnessProfile.flat()
    idx = np.minimum(((h - lo) / (hi - lo) * n_bins).astype(int), n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    sums = np.bincount(idx, weights=h - mean, minlength=n_bins)
    full = counts > 0
    delta = sums[full] / counts[full]
    v = counts[full] / h.size
    # remove residual rounding from the mean
    delta = delta - (v @ delta) / v.sum()
    return RoughnessProfile(delta, v / v.sum())


def _pairs(sphere, plate):
    shift = sphere.delta[:, None] + plate.delta[None, :]
    weight = sphere.v[:, None] * plate.v[None, :]
    return shift, weight


def corrected_force(base, sphere_profile: RoughnessProfile, plate_profile: RoughnessProfile, d):
    """Roughness-averaged force at separation ``d``.

    ``base`` is any callable ``F(d)``; it is called once per bin pair with
    an array of shifted separations.

    Raises
    ------
    DomainError
        If some bin pair would make the surfaces interpenetrate.
    """
    shift, weight = _pairs(sphere_profile, plate_profile)
    local = d - shift
    if np.any(local <= 0):
        i, j = np.unravel_index(np.argmin(local), local.shape)
        raise DomainError(
            f"interpenetration at d = {d:.4g} m: sphere bin {i} "
            f"(delta = {sphere_profile.delta[i]:.4g} m) with plate bin {j} "
            f"(delta = {plate_profile.delta[j]:.4g} m)")
    forces = np.asarray(base(local.ravel()), dtype=float).reshape(local.shape)
    # fixed summation order keeps results reproducible
    return float(np.sum(weight * forces))


def max_shift(sphere_profile, plate_profile):
    """Largest inward displacement the separation grid must accommodate."""
    return float(sphere_profile.delta.max() + plate_profile.delta.max())


class InterpolatedForce:
    """Cubic interpolation of a precomputed force curve in log-log space.

    Forces must share one sign. Evaluation outside the sampled range raises,
    so the grid must bracket every shifted separation.
    """

    def __init__(self, d, force):
        d = np.asarray(d, dtype=float)
        force = np.asarray(force, dtype=float)
        if d.size < 4 or np.any(np.diff(d) <= 0):
            raise DomainError("need >= 4 strictly increasing separations")
        sign = np.sign(force[0])
        if sign == 0 or np.any(np.sign(force) != sign):
            raise DomainError("interpolated force must be single-signed and non-zero")
        self.sign = sign
        self.lo, self.hi = d[0], d[-1]
        self._spline = CubicSpline(np.log(d), np.log(np.abs(force)))

    def __call__(self, d):
        d = np.asarray(d, dtype=float)
        if np.any(d < self.lo * (1 - 1e-12)) or np.any(d > self.hi * (1 + 1e-12)):
            raise DomainError(f"separation outside interpolation grid [{self.lo:.4g}, {self.hi:.4g}] m")
        return self.sign * np.exp(self._spline(np.log(d)))
