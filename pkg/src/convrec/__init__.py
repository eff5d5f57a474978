"""Optimal recovery of n-fold periodic convolutions from Fourier information."""

from .best_l1 import (ExtremalData, Interpolant, best_approximation,
                      build_interpolant, conv_with_phi, find_sigma, node_set,
                      optimal_error)
from .convolution import (ConvSpec, KernelChain, convolve_direct,
                          convolve_direct_many, convolve_spectral,
                          kernel_conv_coeff)
from .errors import (ConvRecError, DegenerateInputError, GridMismatchError,
                     InconsistentInterpolationError, NyquistRangeError,
                     PreconditionError, UnsupportedKernelError)
from .harness import (CATALOG_CHAINS, CATALOG_KERNELS, CVDReport, PsiSpec,
                      RecoveryReport, cvd_check, gen_psi, run_certification,
                      sharpness_experiment, sign_changes)
from .kernels import (Kernel, bernoulli, gauss, kernel_coeff, kernel_eval,
                      parse_kernel, phi_s, poisson)
from .recovery import (InfoVector, MultiplierSet, class_members, extract_info, multipliers,
                       recover, residual_error, theoretical_bound)
from .spectral import (DEFAULT_GRID, GridFunction, TrigPoly, eval_trigpoly,
                       fourier_coeff, norm_C, norm_L1, project)

__version__ = "0.1.0"
