"""Monotone spectral density estimation by antitonic projection of the periodogram."""
from .errors import (DataError, DegenerateInputError, HardAssertionError, HypothesisError,
                     MonospecError, ParameterError, SingularityError, SizeError)
from .estimators import (ConcaveFit, MonotoneStepFit, estimate_Fhat, estimate_fhat,
                         estimate_ftilde, evaluate)
from .isotonic import (AntitonicFit, ConcaveMajorant, brute_force_projection, concave_majorant,
                       cumulative_diagram, lcm_slopes, minmax_slope, minmax_slopes, pava_antitonic)
from .simgen import (AR1, ARFIMA, EXAMPLE1, EXAMPLE2, RngStream, Sum, WhiteNoise, parse_model,
                     simulate, spectral_density, spectral_density_deriv)
from .spectrum import EULER_GAMMA, Periodogram, fourier_frequencies, log_periodogram, periodogram

__version__ = "0.1.0"
