"""Analytic periodic kernels with exact Fourier coefficients, and the square wave.

Three families are provided:

* ``poisson:q=..``   c_j = q^|j|,              0 < q < 1
* ``gauss:tau=..``   c_j = exp(-tau j^2),      tau > 0
* ``bernoulli:r=..,beta=..``  c_0 = beta,  c_j = exp(-i r pi/2 sgn j) / (2 |j|^r)

The Bernoulli kernel ``B_r(t) = sum_{k>=1} cos(kt - r pi/2) / k^r`` has
mean zero; the additive offset ``beta`` keeps the kernel's integral nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli as _bernoulli_numbers
from scipy.special import comb

from .errors import NyquistRangeError, PreconditionError
from .spectral import TWO_PI, GridFunction, grid_points, synthesize

SERIES_RTOL = 1e-14
_SERIES_CAP = 1 << 20


def series_order(term_fn, rtol: float = SERIES_RTOL, cap: int = _SERIES_CAP) -> int:
    """Number of terms kept when summing a decaying series.

    ``term_fn(m)`` returns the coefficients for an integer array ``m``;
    ``m = 0`` is the leading term, counted once, and every later term is
    counted twice (Hermitian pair). Summation stops at the first term whose
    magnitude falls below ``rtol`` times the running sum of magnitudes.
    """
    running = float(np.abs(term_fn(np.array([0])))[0])
    m0 = 1
    block = 64
    while m0 <= cap:
        ms = np.arange(m0, m0 + block)
        mags = np.abs(term_fn(ms))
        before = running + 2.0 * np.concatenate(([0.0], np.cumsum(mags)[:-1]))
        small = np.nonzero(mags <= rtol * before)[0]
        if small.size:
            return int(ms[small[0]] - 1)
        running = before[-1] + 2.0 * mags[-1]
        m0 += block
        block = min(2 * block, 1 << 16)
    return cap


def bernoulli_function(r: int, t):
    """Periodic Bernoulli function ``sum_{k>=1} cos(kt - r pi/2) / k^r``.

    Closed form ``-(2 pi)^r / (2 r!) * B_r(t / 2pi)`` with the Bernoulli
    polynomial ``B_r``. For ``r = 1`` the value at the jump is 0, the mean
    of the one-sided limits.
    """
    if r < 1:
        raise PreconditionError("Bernoulli order must be >= 1")
    t = np.asarray(t, dtype=float)
    x = np.mod(t, TWO_PI) / TWO_PI
    numbers = _bernoulli_numbers(r)
    poly = [comb(r, k, exact=True) * numbers[k] for k in range(r + 1)]
    val = -(TWO_PI ** r) / (2.0 * math.factorial(r)) * np.polyval(poly, x)
    if r == 1:
        val = np.where(x == 0.0, 0.0, val)
    return float(val) if np.ndim(val) == 0 else val


class Kernel:
    """Base class for analytic kernels.

    Subclasses provide ``coeff`` (the exact c_j, vectorised over ``j``) and
    may override ``__call__`` with a closed form.
    """

    family = ""
    jumps: tuple = ()

    def coeff(self, j):
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    @property
    def is_smooth(self) -> bool:
        return True

    def series_order(self) -> int:
        return series_order(self.coeff)

    def __call__(self, t):
        c = self.coeff(np.arange(self.series_order() + 1))
        return synthesize(c, t)

    def sample(self, n: int) -> GridFunction:
        """Grid samples with jump annotations and exact evaluator attached."""
        return GridFunction(self(grid_points(n)), jumps=self.jumps, exact=self)

    def __repr__(self):
        return f"Kernel({self.spec!r})"

    def __eq__(self, other):
        return isinstance(other, Kernel) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)


@dataclass(frozen=True, eq=False, repr=False)
class PoissonKernel(Kernel):
    q: float
    family = "poisson"

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise PreconditionError(f"poisson q must lie in (0, 1), got {self.q}")

    def coeff(self, j):
        j = np.asarray(j)
        return (self.q ** np.abs(j)).astype(complex)

    def closed_form(self, t):
        q = self.q
        return (1.0 - q * q) / (1.0 - 2.0 * q * np.cos(t) + q * q)

    @property
    def spec(self):
        return f"poisson:q={self.q:.12g}"


@dataclass(frozen=True, eq=False, repr=False)
class GaussKernel(Kernel):
    tau: float
    family = "gauss"

    def __post_init__(self):
        if not self.tau > 0.0:
            raise PreconditionError(f"gauss tau must be positive, got {self.tau}")

    def coeff(self, j):
        j = np.asarray(j, dtype=float)
        return np.exp(-self.tau * j * j).astype(complex)

    @property
    def spec(self):
        return f"gauss:tau={self.tau:.12g}"


@dataclass(frozen=True, eq=False, repr=False)
class BernoulliKernel(Kernel):
    r: int
    beta: float = 1.0 / TWO_PI
    family = "bernoulli"

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise PreconditionError(f"bernoulli r must be an integer >= 1, got {self.r}")
        if self.beta == 0.0:
            raise PreconditionError("bernoulli beta must be nonzero")
        object.__setattr__(self, "r", int(self.r))

    @property
    def jumps(self):
        return (0.0,) if self.r == 1 else ()

    @property
    def is_smooth(self):
        return False

    def coeff(self, j):
        j = np.asarray(j)
        safe = np.where(j == 0, 1, np.abs(j)).astype(float)
        c = np.exp(-0.5j * np.pi * self.r * np.sign(j)) / (2.0 * safe ** self.r)
        return np.where(j == 0, self.beta, c)

    def __call__(self, t):
        return self.beta + bernoulli_function(self.r, t)

    @property
    def spec(self):
        return f"bernoulli:r={self.r},beta={self.beta:.12g}"


def poisson(q: float) -> PoissonKernel:
    return PoissonKernel(float(q))


def gauss(tau: float) -> GaussKernel:
    return GaussKernel(float(tau))


def bernoulli(r: int = 1, beta: float = 1.0 / TWO_PI) -> BernoulliKernel:
    return BernoulliKernel(int(r), float(beta))


def kernel_coeff(k: Kernel, j):
    """Exact complex Fourier coefficient ``c_j(k)`` (scalar or array ``j``)."""
    c = k.coeff(j)
    return complex(c) if np.ndim(c) == 0 else c


def kernel_eval(k: Kernel, t):
    """Pointwise kernel value; at a jump, the mean of the one-sided limits."""
    return k(t)


_FAMILIES = {
    "poisson": (poisson, {"q": float}),
    "gauss": (gauss, {"tau": float}),
    "bernoulli": (bernoulli, {"r": int, "beta": float}),
}


def parse_kernel(text: str) -> Kernel:
    """Parse the mini-syntax ``family:key=value,...``.

    >>> parse_kernel("poisson:q=0.5").q
    0.5
    """
    family, _, rest = text.strip().partition(":")
    family = family.strip().lower()
    if family not in _FAMILIES:
        raise ValueError(f"unknown kernel family {family!r}")
    factory, fields = _FAMILIES[family]
    kwargs = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in fields:
            raise ValueError(f"bad parameter {item!r} for kernel {family!r}")
        kwargs[key] = fields[key](value) if fields[key] is float else int(float(value))
    try:
        return factory(**kwargs)
    except TypeError as exc:
        raise ValueError(f"missing parameter for kernel {family!r}: {exc}") from None


def phi_coeff(s: int, j):
    """Fourier coefficients of ``sign(sin(s t))``: ``-2i/(pi k)`` at ``j = k s``, k odd."""
    j = np.asarray(j)
    k = np.where(j % s == 0, j // s, 0)
    odd = (k % 2) != 0
    safe = np.where(odd, k, 1).astype(float)
    return np.where(odd, -2j / (np.pi * safe), 0j)


def phi_s(s: int, grid: int) -> GridFunction:
    """Square wave ``sign(sin(s t))`` on a grid, with jumps at ``m pi / s``.

    Samples at the jumps are 0.

    Raises
    ------
    NyquistRangeError
        If ``grid < 4 s``.
    """
    s = int(s)
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    if grid < 4 * s:
        raise NyquistRangeError(f"grid {grid} too coarse for s={s} (need >= {4 * s})")
    k = np.arange(grid)
    # s*t_k / pi = 2 s k / grid; the sign follows the parity of its floor
    num = 2 * s * k
    whole, frac = np.divmod(num, grid)
    samples = np.where(whole % 2 == 0, 1.0, -1.0)
    samples = np.where(frac == 0, 0.0, samples)
    jumps = tuple(m * np.pi / s for m in range(2 * s))

    def exact(t):
        return np.sign(np.sin(s * np.asarray(t, dtype=float)))

    return GridFunction(samples, jumps=jumps, exact=exact)
