"""n-fold periodic convolution.

The production path multiplies Fourier coefficients,
``c_j(g_1 * ... * g_n) = (2 pi)^(n-1) c_j(g_1) ... c_j(g_n)``.
``convolve_direct`` is an O(N^2) quadrature of the defining integral kept
as an independent oracle for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Sequence, Union

import numpy as np

from .errors import GridMismatchError, NyquistRangeError, PreconditionError
from .kernels import BernoulliKernel, Kernel, bernoulli_function, series_order
from .spectral import (TWO_PI, GridFunction, TrigPoly, grid_points,
                       samples_from_coeffs, synthesize)

DIRECT_MAX_GRID = 4096

Operand = Union[Kernel, GridFunction]


class KernelChain:
    """The convolution ``K_1 * ... * K_n`` of analytic kernels.

    Coefficients come from the analytic oracles only. A chain made purely
    of Bernoulli factors is itself a Bernoulli function of order
    ``R = sum r_l`` scaled by ``pi^(n-1)`` plus a constant, and is evaluated
    in closed form; any other chain is summed as a coefficient series.
    """

    def __init__(self, kernels: Sequence[Kernel]):
        kernels = tuple(kernels)
        if not kernels:
            raise PreconditionError("kernel chain must be nonempty")
        self.kernels = kernels
        self.n = len(kernels)
        self.bernoulli_order = sum(k.r for k in kernels if isinstance(k, BernoulliKernel))
        self.pure_bernoulli = all(isinstance(k, BernoulliKernel) for k in kernels)

    def coeff(self, j):
        j = np.asarray(j)
        c = np.full(j.shape, TWO_PI ** (self.n - 1), dtype=complex)
        for k in self.kernels:
            c = c * k.coeff(j)
        return c

    @property
    def jumps(self) -> tuple:
        return (0.0,) if self.pure_bernoulli and self.bernoulli_order == 1 else ()

    @property
    def mean(self) -> float:
        return float(self.coeff(np.array(0)).real)

    @property
    def specs(self) -> list:
        return [k.spec for k in self.kernels]

    @cached_property
    def series_order(self) -> int:
        if self.pure_bernoulli:
            raise PreconditionError("pure Bernoulli chains are evaluated in closed form")
        return series_order(self.coeff)

    @cached_property
    def _series(self) -> np.ndarray:
        return self.coeff(np.arange(self.series_order + 1))

    def __call__(self, t):
        if self.pure_bernoulli:
            return self.mean + math.pi ** (self.n - 1) * bernoulli_function(
                self.bernoulli_order, t)
        return synthesize(self._series, t)

    def spectrum(self, jmax: int) -> np.ndarray:
        """Coefficients ``c_0 .. c_jmax``."""
        return self.coeff(np.arange(jmax + 1))

    def sample(self, n: int) -> GridFunction:
        t = grid_points(n)
        if self.pure_bernoulli:
            values = self(t)
        elif self.series_order < n // 2:
            values = samples_from_coeffs(self._series, n)
        else:
            values = synthesize(self._series, t)
        return GridFunction(values, jumps=self.jumps, exact=self)

    def __repr__(self):
        return "KernelChain(" + " * ".join(self.specs) + ")"


def as_chain(kernels) -> KernelChain:
    if isinstance(kernels, KernelChain):
        return kernels
    if isinstance(kernels, Kernel):
        return KernelChain([kernels])
    return KernelChain(kernels)


@dataclass(frozen=True)
class ConvSpec:
    """Ordered factors of an n-fold convolution (kernels and/or grid functions)."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise PreconditionError("need at least one factor")
        sizes = {f.n_samples for f in factors if isinstance(f, GridFunction)}
        if len(sizes) > 1:
            raise GridMismatchError(f"grid operands have different sizes {sorted(sizes)}")
        object.__setattr__(self, "factors", factors)

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def grid(self):
        for f in self.factors:
            if isinstance(f, GridFunction):
                return f.n_samples
        return None


def _operand_coeffs(f: Operand, order: int) -> np.ndarray:
    if isinstance(f, GridFunction):
        if order >= f.nyquist:
            raise NyquistRangeError(f"order {order} not below Nyquist {f.nyquist}")
        return f.spectrum[: order + 1]
    return np.asarray(f.coeff(np.arange(order + 1)), dtype=complex)


def convolve_spectral(spec, out_order: int) -> TrigPoly:
    """Order-``out_order`` partial sum of the convolution of all factors.

    Exact when every grid factor is a trigonometric polynomial of order at
    most ``out_order``.
    """
    if not isinstance(spec, ConvSpec):
        spec = ConvSpec(tuple(spec))
    # scaling last keeps two-factor products bitwise symmetric
    c = _operand_coeffs(spec.factors[0], out_order)
    for f in spec.factors[1:]:
        c = c * _operand_coeffs(f, out_order)
    return TrigPoly.from_coeffs(TWO_PI ** (spec.n - 1) * c)


def convolve_direct(f: GridFunction, g: GridFunction) -> GridFunction:
    """Rectangle-rule quadrature of ``int f(tau - t) g(t) dt`` at every grid point.

    O(N^2); intended only as a test oracle, limited to ``N <= 4096``.
    """
    if f.n_samples != g.n_samples:
        raise GridMismatchError("convolve_direct needs equal grid sizes")
    n = f.n_samples
    if n > DIRECT_MAX_GRID:
        raise PreconditionError(f"direct convolution is capped at N={DIRECT_MAX_GRID}")
    h = TWO_PI / n
    m = np.arange(n)
    out = np.empty(n)
    rows = max(1, (1 << 20) // n)
    for start in range(0, n, rows):
        k = np.arange(start, min(start + rows, n))
        idx = (k[:, None] - m[None, :]) % n
        out[start:start + k.size] = h * (f.samples[idx] @ g.samples)
    return GridFunction(out)


def convolve_direct_many(fs: Sequence[GridFunction]) -> GridFunction:
    """n-fold direct convolution by left folding."""
    if not fs:
        raise PreconditionError("need at least one factor")
    return reduce(convolve_direct, fs)


def kernel_conv_coeff(kernels: Sequence[Kernel], j):
    """``c_j(K_1 * ... * K_n) = (2 pi)^(n-1) prod_l c_j(K_l)`` from analytic oracles."""
    c = as_chain(kernels).coeff(j)
    return complex(c) if np.ndim(c) == 0 else c
