"""Casimir force between coated spheres and plates, with roughness and calibration tools."""

from .calibration import (CalibrationResult, QuadraticFit, SweepRecord, analyze,
                          extract_casimir, fit_alpha_curve, fit_parabola)
from .constants import CODATA, PhysicalConstants
from .dielectric import (Constant, DielectricModel, Drude, DrudeParams, OpticalTable,
                         Oscillator, Oscillators, Sum, Tabulated, Vacuum, eps_at_imaginary,
                         kk_transform)
from .errors import (CalibrationError, CasimirError, ConfigError, ConvergenceError,
                     DomainError, SimulationError)
from .lifshitz import (ForceResult, Geometry, LifshitzForceLaw, QuadratureConfig,
                       force_curve, force_sphere_plate, ideal_metal_force)
from .mtb_sim import MtbParams, SweepPlan, jump_to_contact_distance, simulate_dataset
from .roughness import (HeightMap, InterpolatedForce, RoughnessProfile, corrected_force,
                        histogram_from_heightmap)
from .stack import (DeltaPair, IntegrandPoint, Layer, LayerStack, effective_deltas,
                    fresnel_deltas, s_factor)

__version__ = "0.1.0"
