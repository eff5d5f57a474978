"""Best L1 approximation of a kernel chain by trigonometric polynomials.

For a variation-diminishing chain ``K = K_1 * ... * K_n`` and ``s >= 1``:

* ``K * phi_s`` (``phi_s = sign sin st``) attains its largest modulus at
  an extremal point ``sigma``;
* the polynomial of order ``s - 1`` interpolating ``K`` at
  ``sigma + m pi / s`` is the best L1 approximation of ``K``;
* ``||K - P||_L1 = ||K * phi_s||_C``, which is the optimal error value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .convolution import KernelChain, as_chain
from .errors import (InconsistentInterpolationError, PreconditionError,
                     UnsupportedKernelError)
from .kernels import bernoulli_function, series_order
from .spectral import (DEFAULT_GRID, TWO_PI, GridFunction, TrigPoly,
                       grid_points, locate_peak, norm_L1, samples_from_coeffs,
                       synthesize, wrap_angle)

NODE_JUMP_TOL = 1e-9
NODE_RESIDUAL_RTOL = 1e-7


@dataclass(frozen=True, eq=False)
class ExtremalData:
    s: int
    sigma: float
    conv_phi: GridFunction
    max_abs: float


@dataclass(frozen=True, eq=False)
class Interpolant:
    poly: TrigPoly
    nodes: tuple
    node_residual: float
    l1_error: float
    tolerance: float


class _PhiConvolution:
    """Pointwise evaluator of ``K_1 * ... * K_n * phi_s`` and its derivative."""

    def __init__(self, chain: KernelChain, s: int):
        self.chain = chain
        self.s = s
        if chain.pure_bernoulli:
            self.terms = None
        else:
            m_max = series_order(self._term)
            self.terms = self._term(np.arange(1, m_max + 1))

    def _term(self, m):
        # coefficient at j = k s for odd k = 2m - 1; m = 0 is the (vanishing) mean
        m = np.asarray(m)
        k = 2 * m - 1
        c = -4j * self.chain.coeff(k * self.s) / np.where(m == 0, 1, k)
        return np.where(m == 0, 0j, c)

    def coeffs(self) -> np.ndarray:
        """Dense coefficients ``c_0 .. c_J`` of the series form."""
        k = 2 * np.arange(1, self.terms.size + 1) - 1
        c = np.zeros(k[-1] * self.s + 1, dtype=complex)
        c[k * self.s] = self.terms
        return c

    def _shifts(self, order, t):
        t = np.asarray(t, dtype=float)
        total = np.zeros(t.shape)
        for m in range(2 * self.s):
            total = total + (-1) ** m * bernoulli_function(order, t - m * math.pi / self.s)
        return 2.0 * math.pi ** (self.chain.n - 1) * total

    def __call__(self, t):
        if self.terms is None:
            val = self._shifts(self.chain.bernoulli_order + 1, t)
        else:
            val = synthesize(self.coeffs(), t)
        return float(val) if np.ndim(val) == 0 else val

    def derivative(self, t):
        if self.terms is None:
            val = self._shifts(self.chain.bernoulli_order, t)
        else:
            val = synthesize(self.coeffs(), t, derivative=True)
        return float(val) if np.ndim(val) == 0 else val

    def sample(self, grid: int) -> GridFunction:
        if self.terms is None:
            values = self(grid_points(grid))
        else:
            c = self.coeffs()
            if c.size - 1 < grid // 2:
                values = samples_from_coeffs(c, grid)
            else:
                values = synthesize(c, grid_points(grid))
        return GridFunction(values, exact=self, exact_derivative=self.derivative)


def conv_with_phi(kernels, s: int, grid: int = DEFAULT_GRID) -> GridFunction:
    """``K_1 * ... * K_n * phi_s`` sampled on the grid, computed spectrally.

    Only the harmonics ``j = k s`` with odd ``k`` survive. Chains made only
    of Bernoulli factors use the closed form through shifted Bernoulli
    functions of one order higher. The returned function carries exact
    pointwise and derivative evaluators.
    """
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    if grid < 4 * s:
        raise PreconditionError(f"grid {grid} too coarse for s={s}")
    return _PhiConvolution(as_chain(kernels), int(s)).sample(grid)


def find_sigma(conv_phi: GridFunction, s: int = 1) -> ExtremalData:
    """Locate the absolute maximum of ``|conv_phi|``.

    Grid search, parabolic refinement, then root polishing of the exact
    derivative when available. Near-ties prefer a positive extremum, then
    the smallest angle.

    Raises
    ------
    DegenerateInputError
        If ``conv_phi`` vanishes identically.
    """
    sigma, value = locate_peak(conv_phi)
    return ExtremalData(s=int(s), sigma=sigma, conv_phi=conv_phi, max_abs=abs(value))


def _cyclic_distance(a, b):
    d = np.abs(np.mod(a - b, TWO_PI))
    return np.minimum(d, TWO_PI - d)


def node_set(sigma: float, s: int, jumps=()) -> list:
    """Interpolation nodes ``sigma + m pi / s`` (mod 2 pi), ``m = 0 .. 2s-1``.

    A node within 1e-9 rad of a jump of the kernel is dropped.

    Raises
    ------
    UnsupportedKernelError
        If more than one node would be dropped.
    """
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    nodes = [wrap_angle(sigma + m * math.pi / s) for m in range(2 * s)]
    kept = [t for t in nodes
            if not any(_cyclic_distance(t, j) < NODE_JUMP_TOL for j in jumps)]
    if len(nodes) - len(kept) > 1:
        raise UnsupportedKernelError("more than one interpolation node falls on a jump")
    return kept


def _design_matrix(nodes, order):
    t = np.asarray(nodes, dtype=float)
    j = np.arange(1, order + 1)
    tj = np.multiply.outer(t, j)
    return np.hstack([np.full((t.size, 1), 0.5), np.cos(tj), np.sin(tj)])


def build_interpolant(kernels, ext: ExtremalData) -> Interpolant:
    """Polynomial of order ``s - 1`` interpolating the kernel chain at the nodes.

    The (possibly 2s) conditions on a (2s-1)-dimensional space are solved
    by least squares; compatibility is enforced by a residual gate of
    ``1e-7 * (1 + ||K||_C)``.

    Raises
    ------
    InconsistentInterpolationError
        If the node residual exceeds the gate (wrong extremal point, or a
        chain that is not variation diminishing).
    UnsupportedKernelError
        If the chain has a discontinuity away from 0.
    """
    chain = as_chain(kernels)
    if any(_cyclic_distance(j, 0.0) > NODE_JUMP_TOL for j in chain.jumps):
        raise UnsupportedKernelError("only a discontinuity at 0 is supported")
    order = ext.s - 1
    nodes = node_set(ext.sigma, ext.s, chain.jumps)
    values = np.asarray(chain(np.asarray(nodes)), dtype=float)
    a = _design_matrix(nodes, order)
    coef, *_ = np.linalg.lstsq(a, values, rcond=None)
    residual = float(np.max(np.abs(a @ coef - values)))

    grid = ext.conv_phi.n_samples
    k_samples = chain.sample(grid)
    tolerance = NODE_RESIDUAL_RTOL * (1.0 + float(np.max(np.abs(k_samples.samples))))
    if residual > tolerance:
        raise InconsistentInterpolationError(
            f"node residual {residual:.3e} exceeds {tolerance:.3e} "
            f"for {chain!r}, s={ext.s}, sigma={ext.sigma:.12g}",
            residual=residual, tolerance=tolerance)
    poly = TrigPoly(order, coef[0], coef[1:order + 1], coef[order + 1:])
    diff = GridFunction(k_samples.samples - samples_from_coeffs(poly.coeffs(), grid),
                        jumps=chain.jumps)
    return Interpolant(poly=poly, nodes=tuple(nodes), node_residual=residual,
                       l1_error=norm_L1(diff), tolerance=tolerance)


@lru_cache(maxsize=256)
def _extremal(kernels: tuple, s: int, grid: int) -> ExtremalData:
    return find_sigma(conv_with_phi(kernels, s, grid), s)


@lru_cache(maxsize=256)
def _solve(kernels: tuple, s: int, grid: int):
    ext = _extremal(kernels, s, grid)
    return ext, build_interpolant(kernels, ext)


def best_approximation(kernels, s: int, grid: int = DEFAULT_GRID):
    """Extremal data and interpolant for a chain; memoised per (chain, s, grid)."""
    return _solve(as_chain(kernels).kernels, int(s), int(grid))


def optimal_error(kernels, s: int, grid: int = DEFAULT_GRID) -> float:
    """``||K_1 * ... * K_n * phi_s||_C``.

    Equals ``||K - P||_L1`` for the interpolant ``P`` built by
    ``build_interpolant``, the second route to the same number.
    """
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    return _extremal(as_chain(kernels).kernels, int(s), int(grid)).max_abs
