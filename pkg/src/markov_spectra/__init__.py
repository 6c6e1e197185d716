"""Markov and Lagrange spectra via continued fractions and Gauss-Cantor sets."""

from .algebraic import AlgebraicValue, Enclosure, QuadSurd
from .cantor import (IntervalCover, SubshiftSpec, cylinder_cover, preset, thickness_bound,
                     validate)
from .cf import PeriodicCF, convergents, periodic_value, surd_cf
from .dimension import (DimensionEstimate, WeightedSFT, cover_dim_lower, cover_dim_upper,
                        dimension_function_lower, thermo_dimension)
from .diophantine import approximation_diagnostics, khintchine_levy_estimate
from .exceptions import (EmptyLanguageError, InvalidWordError, NotIrrationalError,
                         ResourceError, SpectraError, UndefinedThicknessError, ValidationError)
from .markov_tree import (MarkovTriple, enumerate_triples, lagrange_number, unicity_report,
                          vieta_children)
from .spectra import (QuadraticForm, SpectrumApprox, dynamical_spectra, form_minimum,
                      named_constants, spectrum_below_3)
from .sumset import SumCover, gap_lemma_certificate, hall_density_check, minkowski_sum_cover
from .values import f_value, lagrange_value, markov_value
from .words import BiWord

__version__ = "0.1.0"
