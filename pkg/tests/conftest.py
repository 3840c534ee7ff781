import numpy as np
import pytest

from casimirlab import (Constant, Drude, Layer, LayerStack, Oscillator, Oscillators,
                        QuadratureConfig, Vacuum)

# Pd-like and Au-like Drude metals; values are only representative.
PD = Drude.from_values(8.29e15, 2.34e13)
AU = Drude.from_values(1.371e16, 4.05e13)
TI = Drude.from_values(3.82e15, 7.20e13)
POLYSTYRENE = Oscillators((Oscillator(0.05, 5.6e14), Oscillator(1.43, 1.36e16)))
IDEAL = Constant(1e9)


def coated_sphere(t_coat, t_adhesion=2.9e-9, coat=PD):
    films = [Layer(TI, t_adhesion)] if t_adhesion else []
    return LayerStack(POLYSTYRENE, tuple(films + [Layer(coat, t_coat)]))


@pytest.fixture
def ideal_stacks():
    return LayerStack(IDEAL), LayerStack(IDEAL), Vacuum()


@pytest.fixture
def gold_plate():
    return LayerStack(AU)


@pytest.fixture
def fast_quad():
    return QuadratureConfig(rel_tol=1e-5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance report ----------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
