"""Physical constants (CODATA 2018, exact or recommended values)."""

from dataclasses import dataclass

from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _sc.hbar
    c: float = _sc.c
    eps0: float = _sc.epsilon_0


CODATA = PhysicalConstants()
HBAR = CODATA.hbar
C = CODATA.c
EPS0 = CODATA.eps0
