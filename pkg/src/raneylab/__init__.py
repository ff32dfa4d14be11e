"""Raney (Fuss-Catalan) densities: exact moments, algebraic-curve densities,
Wiener-Hopf moment formulas, equilibrium checks and random-matrix Monte Carlo."""

from ._backend import BACKEND
from .params import (ParameterError, RaneyParams, JacobiParams, make_params, from_family,
                     support_edge, family_edge)
from .exact import raney_exact, raney_sequence, binomial_moment
from .specfun import log_gamma, gamma
from .curve import (CurveModel, JacobiCurveModel, DensityProfile, physical_root, density,
                    jacobi_density, sample_density)
from .quad import integrate, pv_integrate, density_moment
from .wienerhopf import (WHFactorization, PotentialSpec, kernel_K, factor_plus, factor_minus,
                         moment_wh, potential_coefficients, raney_moment_general,
                         jacobi_moment_wh)
from .equilibrium import PairKernel, equilibrium_residual, jacobi_residual, energy, perturb
from .rmt import MCRun, sample_product, run_mc, compare_to_density

__version__ = "0.1.0"
