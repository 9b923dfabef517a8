"""Spectrum, densities and information measures of the 1D Klein-Gordon
oscillator with an energy-dependent coupling ``p -> p + i(1 + gamma E) x``.

>>> from kgoscillator import ModelConfig, energy_level, make_state, fisher_direct
>>> level = energy_level(ModelConfig(gamma=0.0), 1)
>>> round(fisher_direct(make_state(level, 0.0, "coordinate")), 8)
6.0
"""
__version__ = "0.1.0"

from .errors import (InvalidDensity, KGError, NoConvergence, NonNormalizable,
                     NoPhysicalRoot, NormalizationMismatch, UnboundedSpectrum)
from .quadrature import (IntegralResult, QuadratureSpec, gauss_hermite, integrate,
                         integrate_even)
from .spectrum import (Branch, EnergyLevel, ModelConfig, asymptote, energy_level,
                       quartic_real_roots, select_physical, spectrum)
from .states import (DensityCurve, DensityKind, Space, ValidityFlags, WaveState,
                     fisher_density_curve, hermite_weighted, make_state, rho,
                     shannon_density_curve)
from .measures import (BBM_BOUND, FisherMode, InequalityRecord, MeasureReport,
                       PaperFisher, fisher_direct, fisher_paper, moment2,
                       moment2_closed_form, report, shannon)
