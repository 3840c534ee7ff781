"""Representative material models shared by the demos (illustrative values)."""

from casimirlab import Drude, Layer, LayerStack, Oscillator, Oscillators

PD = Drude.from_values(8.29e15, 2.34e13)
AU = Drude.from_values(1.371e16, 4.05e13)
TI = Drude.from_values(3.82e15, 7.20e13)
POLYSTYRENE = Oscillators((Oscillator(0.05, 5.6e14), Oscillator(1.43, 1.36e16)))


def coated_sphere(t_pd, t_ti=2.9e-9):
    """Polystyrene sphere with a Ti adhesion layer under a Pd coating."""
    return LayerStack(POLYSTYRENE, (Layer(TI, t_ti), Layer(PD, t_pd)))


GOLD_PLATE = LayerStack(AU)
