"""Dielectric functions on the imaginary frequency axis.

Every model maps ``xi`` (rad/s, scalar or array) to the real quantity
``eps(i xi) >= 1``. Tabulated absorption spectra are converted with the
Kramers-Kronig relation

    eps(i xi) = 1 + (2/pi) ∫_0^∞ x Im eps(x) / (x^2 + xi^2) dx.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError
from .quadrature import gauss_legendre_batch

# Below this lowest tabulated frequency a table is considered IR-complete.
DRUDE_TAIL_THRESHOLD = 1e11


@dataclass(frozen=True)
class DrudeParams:
    omega_p: float
    gamma: float

    def __post_init__(self):
        if not (self.omega_p > 0 and self.gamma > 0):
            raise DomainError("Drude omega_p and gamma must be positive")

    def im_eps(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.omega_p ** 2 * self.gamma / (omega * (omega ** 2 + self.gamma ** 2))


@dataclass(frozen=True)
class Oscillator:
    strength: float
    omega_0: float
    gamma: float = 0.0

    def __post_init__(self):
        if not (self.strength > 0 and self.omega_0 > 0 and self.gamma >= 0):
            raise DomainError("oscillator needs strength > 0, omega_0 > 0, gamma >= 0")

    def im_eps(self, omega):
        """Absorption of the damped Lorentz line (real frequency)."""
        omega = np.asarray(omega, dtype=float)
        w02 = self.omega_0 ** 2
        return (self.strength * w02 * self.gamma * omega
                / ((w02 - omega ** 2) ** 2 + (self.gamma * omega) ** 2))


class DielectricModel:
    """Base class. Subclasses implement :meth:`eps_imag`."""

    def eps_imag(self, xi):
        raise NotImplementedError

    def __call__(self, xi):
        return self.eps_imag(xi)

    def __add__(self, other):
        return Sum((self, other))


@dataclass(frozen=True)
class Vacuum(DielectricModel):
    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.ones_like(xi)


@dataclass(frozen=True)
class Constant(DielectricModel):
    eps: float

    def __post_init__(self):
        if not self.eps >= 1.0:
            raise DomainError(f"constant permittivity must be >= 1, got {self.eps}")

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.full_like(xi, self.eps)


@dataclass(frozen=True)
class Drude(DielectricModel):
    params: DrudeParams

    @classmethod
    def from_values(cls, omega_p, gamma):
        return cls(DrudeParams(omega_p, gamma))

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(xi <= 0):
            raise DomainError("Drude permittivity diverges at xi = 0; use open quadrature nodes")
        p = self.params
        return 1.0 + p.omega_p ** 2 / (xi * (xi + p.gamma))


@dataclass(frozen=True)
class Oscillators(DielectricModel):
    oscillators: tuple[Oscillator, ...]

    def __post_init__(self):
        object.__setattr__(self, "oscillators", tuple(self.oscillators))
        if not self.oscillators:
            raise DomainError("oscillator model needs at least one term")

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.ones_like(xi)
        for o in self.oscillators:
            w02 = o.omega_0 ** 2
            out = out + o.strength * w02 / (w02 + xi ** 2 + o.gamma * xi)
        return out


@dataclass(frozen=True)
class Sum(DielectricModel):
    """Independent susceptibilities add: ``1 + Σ (eps_i - 1)``."""

    parts: tuple[DielectricModel, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def eps_imag(self, xi):
        xi = np.asarray(xi, dtype=float)
        out = np.ones_like(xi)
        for part in self.parts:
            out = out + (part.eps_imag(xi) - 1.0)
        return out


EXTRAPOLATIONS = ("auto", "truncate", "drude_tail", "power_law_tail")


@dataclass(frozen=True, eq=False)
class OpticalTable:
    """Tabulated absorption ``Im eps(omega)`` on a strictly increasing grid.

    ``extrapolation`` controls the spectrum outside the table:

    * ``truncate`` -- ``x Im eps`` held at its first-row value below the
      table, zero above it.
    * ``power_law_tail`` -- as ``truncate`` below; ``Im eps ∝ x^-3`` matched
      to the last row above.
    * ``drude_tail`` -- the Drude absorption of ``drude`` on both sides.
    * ``auto`` -- ``drude_tail`` when Drude parameters are supplied and the
      table starts above :data:`DRUDE_TAIL_THRESHOLD`, else ``truncate``.
    """

    omega: np.ndarray
    im_eps: np.ndarray
    extrapolation: str = "auto"
    drude: DrudeParams | None = None

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        im = np.array(self.im_eps, dtype=float)
        if omega.ndim != 1 or omega.size == 0 or omega.shape != im.shape:
            raise DomainError("optical table must be two non-empty columns of equal length")
        if not np.all(omega > 0):
            raise DomainError("tabulated frequencies must be positive")
        if np.any(np.diff(omega) <= 0):
            raise DomainError("tabulated frequencies must be strictly increasing")
        if np.any(im < 0) or not np.all(np.isfinite(im)):
            raise DomainError("Im eps must be finite and non-negative (passive medium)")
        if self.extrapolation not in EXTRAPOLATIONS:
            raise DomainError(f"unknown extrapolation {self.extrapolation!r}")
        if self.extrapolation == "drude_tail" and self.drude is None:
            raise DomainError("drude_tail extrapolation needs Drude parameters")
        omega.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "im_eps", im)

    @property
    def policy(self):
        if self.extrapolation != "auto":
            return self.extrapolation
        if self.drude is not None and self.omega[0] > DRUDE_TAIL_THRESHOLD:
            return "drude_tail"
        if self.omega[0] > DRUDE_TAIL_THRESHOLD:
            warnings.warn("table starts above 1e11 rad/s but no Drude tail parameters "
                          "were given; extending with constant x*Im(eps)", stacklevel=3)
        return "truncate"

    @classmethod
    def from_csv(cls, path, extrapolation="auto", drude=None):
        """Read a two-column ``omega_rad_s, im_eps`` CSV with a header row."""
        with open(Path(path), newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise DomainError(f"{path}: empty file")
        header = [h.strip() for h in rows[0]]
        try:
            float(header[0])
        except ValueError:
            pass
        else:
            raise DomainError(f"{path}: header row required (omega_rad_s, im_eps)")
        data = np.array([[float(v) for v in r[:2]] for r in rows[1:] if r and r[0].strip()])
        if data.size == 0:
            raise DomainError(f"{path}: no data rows")
        return cls(data[:, 0], data[:, 1], extrapolation, drude)

    def interpolate(self, x):
        """``Im eps`` at real frequencies ``x`` inside the table range.

        Log-log interpolation between rows; linear where a row value is 0.
        """
        x = np.asarray(x, dtype=float)
        w, v = self.omega, self.im_eps
        j = np.clip(np.searchsorted(w, x) - 1, 0, w.size - 2) if w.size > 1 else np.zeros(x.shape, int)
        if w.size == 1:
            return np.full_like(x, v[0])
        w0, w1, v0, v1 = w[j], w[j + 1], v[j], v[j + 1]
        pos = (v0 > 0) & (v1 > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = np.log(v1 / v0) / np.log(w1 / w0)
            loglog = v0 * (x / w0) ** slope
        lin = v0 + (v1 - v0) * (x - w0) / (w1 - w0)
        return np.where(pos, loglog, lin)

    def tail_below(self, x):
        if self.policy == "drude_tail":
            return self.drude.im_eps(x)
        return self.omega[0] * self.im_eps[0] / np.asarray(x, dtype=float)

    def tail_above(self, x):
        policy = self.policy
        x = np.asarray(x, dtype=float)
        if policy == "drude_tail":
            return self.drude.im_eps(x)
        if policy == "power_law_tail":
            return self.im_eps[-1] * (self.omega[-1] / x) ** 3
        return np.zeros_like(x)


@dataclass(frozen=True, eq=False)
class Tabulated(DielectricModel):
    table: OpticalTable
    order: int = 8
    rtol: float = 1e-7

    def eps_imag(self, xi):
        return kk_transform(self.table, xi, order=self.order, rtol=self.rtol)


def eps_at_imaginary(model: DielectricModel, xi):
    """``eps(i xi)`` for any model; scalar in, float out."""
    out = model.eps_imag(xi)
    return float(out) if np.ndim(out) == 0 else out


def kk_transform(table: OpticalTable, xi, order=8, rtol=1e-7):
    """Kramers-Kronig transform of tabulated absorption to ``eps(i xi)``.

    With ``x = xi tan(u)`` the integrand becomes ``tan(u) Im eps(xi tan u)``
    on ``u in (0, pi/2)``, which removes the ``x ~ xi`` peak. The table
    interior is integrated segment by segment with an ``order``-point
    Gauss-Legendre rule in ``u``; the tails use adaptive quadrature.
    Accuracy is then set by the table itself: a Lorentz line needs about
    20 rows across its width for 1e-3 relative accuracy.

    Parameters
    ----------
    table : OpticalTable
    xi : float or array_like
        Imaginary frequencies, rad/s, all > 0.

    Returns
    -------
    float or ndarray
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi_arr <= 0):
        raise DomainError("kk_transform needs xi > 0")
    out = np.array([_kk_single(table, z, order, rtol) for z in xi_arr.ravel()])
    out = out.reshape(xi_arr.shape)
    return float(out[0]) if np.ndim(xi) == 0 else out


def _kk_single(table, xi, order, rtol):
    w = table.omega
    u_edges = np.arctan(w / xi)
    total = 0.0

    if w.size > 1:
        gx, gw = np.polynomial.legendre.leggauss(order)
        lo, hi = u_edges[:-1], u_edges[1:]
        half = 0.5 * (hi - lo)
        u = 0.5 * (hi + lo)[:, None] + half[:, None] * gx[None, :]
        x = xi * np.tan(u)
        # nodes of segment j must use segment j's interpolant
        j = np.arange(w.size - 1)[:, None]
        v0, v1 = table.im_eps[j], table.im_eps[j + 1]
        w0, w1 = w[j], w[j + 1]
        pos = (v0 > 0) & (v1 > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            loglog = v0 * np.exp(np.log(x / w0) * (np.log(v1 / v0) / np.log(w1 / w0)))
        lin = v0 + (v1 - v0) * (x - w0) / (w1 - w0)
        im = np.where(pos, loglog, lin)
        total += float(np.sum(half * ((np.tan(u) * im) @ gw)))

    policy = table.policy
    # below the first row
    if policy == "drude_tail":
        total += _tail_integral(table.tail_below, xi, 0.0, u_edges[0], rtol)
    else:
        # x Im eps constant: ∫_0^{w0} C/(x^2+xi^2) dx = C/xi * atan(w0/xi)
        total += w[0] * table.im_eps[0] / xi * u_edges[0]
    if policy != "truncate":
        total += _tail_integral(table.tail_above, xi, u_edges[-1], 0.5 * math.pi, rtol)
    return 1.0 + 2.0 / math.pi * total


def _tail_integral(im_eps, xi, u_lo, u_hi, rtol):
    if u_hi <= u_lo:
        return 0.0

    def f(u, idx):
        t = np.tan(u)
        return t * im_eps(xi * t)

    res = gauss_legendre_batch(f, [u_lo], [u_hi], rtol=rtol, atol=1e-14, order=10)
    return float(res.value[0])


def sample_table(model_im_eps, omega_min=1e10, omega_max=1e20, n=10_000, **kw):
    """Build an :class:`OpticalTable` by sampling an absorption function on a log grid."""
    omega = np.logspace(math.log10(omega_min), math.log10(omega_max), n)
    return OpticalTable(omega, model_im_eps(omega), **kw)
