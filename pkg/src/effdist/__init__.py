"""Certified probability distributions, characteristic functions and limit theorems.

Every numeric answer is an enclosure: an interval (or complex box) with
dyadic endpoints that provably contains the exact value.
"""

from .charfun import (CharOracle, binomial_std, char_from_dist, char_from_spec, constant_one,
                      equicont_modulus, gaussian_phi, levy_transfer, sinc_uniform)
from .convergence import ConvergenceCert
from .distributions import (DistOracle, binomial, density_dist, density_uniform, dist_from_spec,
                            finite_discrete, gaussian, point_mass, seq_tightness, tightness)
from .dml import (BernoulliParams, DmlBound, dml_error_bound, dml_modulus, gaussian_char,
                  remainder_bound, std_binomial_char)
from .dyadic import Dyadic
from .errors import (BranchCut, BudgetExhausted, EffdistError, GridBudgetExceeded, ImaginaryResidual,
                     InvalidCharacteristic, InvalidWeights, NegativityViolation, NotNormalized,
                     PrecisionOverflow, SpecError, UnsupportedEnvelope)
from .interval import ComplexInterval, Interval
from .quadrature import (ConstantEnvelope, GaussianEnvelope, Integrand, KernelIntegrand,
                         integrate_finite, integrate_R, kernel_eval, kernel_modulus, tail_cutoff)
from .reals import RealOracle
from .testfunctions import Complement, TestFunction, eval_tf, make_w, make_w_complement, modulus_tf
from .transfer import (SmoothingPlan, bochner_density, bochner_dist, fourier_weight, glivenko_eval,
                       glivenko_modulus, smoothed_expectation, smoothing_params)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
