"""Periodic grid functions, trigonometric polynomials and their norms.

Conventions follow the real Fourier series on a period of length 2*pi::

    a_j = (1/pi) * int_0^{2pi} x(t) cos(jt) dt
    b_j = (1/pi) * int_0^{2pi} x(t) sin(jt) dt
    c_j = (a_j - i b_j) / 2,  c_{-j} = conj(c_j)

so that c_0 = a_0 / 2 is the mean value and a trigonometric polynomial
reads ``a_0/2 + sum_j (a_j cos jt + b_j sin jt)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DegenerateInputError, NyquistRangeError, PreconditionError

TWO_PI = 2.0 * np.pi
DEFAULT_GRID = 16384
MIN_GRID = 16

# relative tie tolerance when two extrema have (numerically) equal magnitude
_TIE_RTOL = 1e-9
# grid samples within this fraction of the maximum are refined as candidates
_CANDIDATE_RTOL = 1e-2
_MAX_CANDIDATES = 64


def grid_points(n: int) -> np.ndarray:
    """Uniform grid ``t_k = 2*pi*k/n`` for ``k = 0..n-1``."""
    return TWO_PI * np.arange(n) / n


def wrap_angle(t):
    """Reduce angles to ``[0, 2*pi)``; values rounding up to 2*pi map to 0."""
    w = np.mod(t, TWO_PI)
    w = np.where(TWO_PI - w < 1e-12, 0.0, w)
    return float(w) if np.ndim(w) == 0 else w


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A 2*pi-periodic real function sampled on a uniform power-of-two grid.

    Parameters
    ----------
    samples : array_like
        Values at ``t_k = 2*pi*k/N``.
    jumps : sequence of float, optional
        Angles where the represented function is discontinuous.
    exact : callable, optional
        Pointwise evaluator of the underlying function, used to refine
        extrema beyond grid resolution.
    exact_derivative : callable, optional
        Pointwise evaluator of the derivative (one-sided values are fine).
    """

    samples: np.ndarray
    jumps: tuple = ()
    exact: Optional[Callable] = field(default=None, repr=False)
    exact_derivative: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float).reshape(-1)
        n = samples.size
        if n < MIN_GRID or not _is_power_of_two(n):
            raise PreconditionError(
                f"grid size must be a power of two >= {MIN_GRID}, got {n}")
        if not np.all(np.isfinite(samples)):
            raise PreconditionError("samples must be finite")
        samples.setflags(write=False)
        jumps = sorted(wrap_angle(float(j)) for j in self.jumps)
        for lo, hi in zip(jumps, jumps[1:]):
            if hi - lo < 1e-12:
                raise PreconditionError("jump angles must be distinct")
        if len(jumps) > 1 and jumps[0] + TWO_PI - jumps[-1] < 1e-12:
            raise PreconditionError("jump angles must be distinct")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "jumps", tuple(jumps))

    @classmethod
    def from_function(cls, func, n: int = DEFAULT_GRID, jumps=(),
                      with_exact: bool = False) -> "GridFunction":
        """Sample ``func`` on the n-point grid."""
        t = grid_points(n)
        return cls(func(t), jumps=tuple(jumps),
                   exact=func if with_exact else None)

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return grid_points(self.n_samples)

    @property
    def h(self) -> float:
        return TWO_PI / self.n_samples

    @property
    def nyquist(self) -> int:
        return self.n_samples // 2

    @cached_property
    def spectrum(self) -> np.ndarray:
        """Complex coefficients ``c_0 .. c_{N/2}`` by the rectangle rule."""
        return np.fft.rfft(self.samples) / self.n_samples

    def scaled(self, factor: float) -> "GridFunction":
        exact = self.exact
        deriv = self.exact_derivative
        return GridFunction(
            factor * self.samples, jumps=self.jumps,
            exact=None if exact is None else (lambda t: factor * exact(t)),
            exact_derivative=None if deriv is None else (lambda t: factor * deriv(t)))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        if other.n_samples != self.n_samples:
            raise PreconditionError("grid sizes differ")
        jumps = merge_angles(self.jumps + other.jumps)
        return GridFunction(self.samples + other.samples, jumps=jumps)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return self + other.scaled(-1.0)


def merge_angles(angles, tol=1e-12):
    out = []
    for a in sorted(wrap_angle(float(x)) for x in angles):
        if not out or a - out[-1] > tol:
            out.append(a)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] <= tol:
        out.pop()
    return tuple(out)


@dataclass(frozen=True, eq=False)
class TrigPoly:
    """Trigonometric polynomial ``a0/2 + sum_{j=1}^{d} (a_j cos jt + b_j sin jt)``."""

    order: int
    a0: float = 0.0
    a: np.ndarray = ()
    b: np.ndarray = ()

    def __post_init__(self):
        d = int(self.order)
        if d < 0:
            raise PreconditionError("order must be nonnegative")
        a = np.zeros(d) if len(self.a) == 0 and d else np.array(self.a, dtype=float)
        b = np.zeros(d) if len(self.b) == 0 and d else np.array(self.b, dtype=float)
        a = a.reshape(-1)
        b = b.reshape(-1)
        if a.size != d or b.size != d:
            raise PreconditionError(
                f"expected {d} cosine and sine coefficients, got {a.size} and {b.size}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "order", d)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_coeffs(cls, c) -> "TrigPoly":
        """Build from complex coefficients ``c_0 .. c_d`` (nonnegative indices)."""
        c = np.asarray(c, dtype=complex)
        return cls(order=c.size - 1, a0=2.0 * c[0].real,
                   a=2.0 * c[1:].real, b=-2.0 * c[1:].imag)

    def coeffs(self) -> np.ndarray:
        """Complex coefficients ``c_0 .. c_d``."""
        c = np.empty(self.order + 1, dtype=complex)
        c[0] = self.a0 / 2.0
        c[1:] = (self.a - 1j * self.b) / 2.0
        return c

    def coeff(self, j: int) -> complex:
        if abs(j) > self.order:
            return 0j
        c = self.coeffs()[abs(j)]
        return complex(np.conj(c)) if j < 0 else complex(c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        j = np.arange(1, self.order + 1)
        tj = np.multiply.outer(t, j)
        val = self.a0 / 2.0 + np.cos(tj) @ self.a + np.sin(tj) @ self.b
        return float(val) if val.ndim == 0 else val

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        j = np.arange(1, self.order + 1)
        tj = np.multiply.outer(t, j)
        val = np.cos(tj) @ (j * self.b) - np.sin(tj) @ (j * self.a)
        return float(val) if val.ndim == 0 else val

    def sample(self, n: int = DEFAULT_GRID) -> GridFunction:
        """Grid samples, keeping the polynomial as exact evaluator."""
        return GridFunction(samples_from_coeffs(self.coeffs(), n),
                            exact=self, exact_derivative=self.derivative)

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        d = max(self.order, other.order)
        c = np.zeros(d + 1, dtype=complex)
        c[: self.order + 1] += self.coeffs()
        c[: other.order + 1] += other.coeffs()
        return TrigPoly.from_coeffs(c)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + other.scaled(-1.0)

    def scaled(self, factor: float) -> "TrigPoly":
        return TrigPoly(self.order, factor * self.a0, factor * self.a, factor * self.b)


def eval_trigpoly(p: TrigPoly, t):
    """Value of ``p`` at ``t`` (scalar or array)."""
    return p(t)


def samples_from_coeffs(c, n: int) -> np.ndarray:
    """Samples on the n-grid of ``sum_{|j|<=J} c_j e^{ijt}`` given ``c_0..c_J``.

    Requires ``J < n/2``.
    """
    c = np.asarray(c, dtype=complex)
    if c.size - 1 >= n // 2:
        raise NyquistRangeError(f"order {c.size - 1} not below Nyquist {n // 2}")
    spec = np.zeros(n // 2 + 1, dtype=complex)
    spec[: c.size] = c
    return np.fft.irfft(spec * n, n=n)


def synthesize(c, t, derivative: bool = False):
    """Evaluate ``sum_{|j|<=J} c_j e^{ijt}`` (Hermitian) at arbitrary points."""
    c = np.asarray(c, dtype=complex)
    t = np.asarray(t, dtype=float)
    flat = t.reshape(-1)
    j = np.arange(1, c.size)
    out = np.empty(flat.size)
    chunk = max(1, 2_000_000 // max(1, j.size))
    for start in range(0, flat.size, chunk):
        tt = flat[start:start + chunk]
        e = np.exp(1j * np.multiply.outer(tt, j))
        if derivative:
            out[start:start + chunk] = 2.0 * (e @ (1j * j * c[1:])).real
        else:
            out[start:start + chunk] = c[0].real + 2.0 * (e @ c[1:]).real
    out = out.reshape(t.shape)
    return float(out) if out.ndim == 0 else out


def fourier_coeffs(f: GridFunction, jmax: int) -> np.ndarray:
    """Coefficients ``c_0 .. c_jmax`` of ``f``; requires ``jmax < N/2``."""
    if jmax < 0 or jmax >= f.nyquist:
        raise NyquistRangeError(
            f"index {jmax} outside Nyquist range of a {f.n_samples}-point grid")
    return f.spectrum[: jmax + 1].copy()


def fourier_coeff(f: GridFunction, j: int) -> complex:
    """Complex Fourier coefficient ``c_j`` of ``f`` by the periodic rectangle rule.

    Exact for trigonometric polynomials of order below ``N/2``.

    Raises
    ------
    NyquistRangeError
        If ``|j| >= N/2``.
    """
    j = int(j)
    if abs(j) >= f.nyquist:
        raise NyquistRangeError(
            f"index {j} outside Nyquist range of a {f.n_samples}-point grid")
    c = complex(f.spectrum[abs(j)])
    return c.conjugate() if j < 0 else c


def project(f: GridFunction, d: int) -> TrigPoly:
    """Order-``d`` Fourier partial sum of ``f``."""
    if d < 0:
        raise PreconditionError("order must be nonnegative")
    return TrigPoly.from_coeffs(fourier_coeffs(f, d))


def _abs_trapezoid(x: np.ndarray, y: np.ndarray) -> float:
    # Trapezoid on |y| over a piecewise-linear interpolant, splitting each
    # sign-changing segment at its linear zero crossing.
    dx = np.diff(x)
    y0 = y[:-1]
    y1 = y[1:]
    a0 = np.abs(y0)
    a1 = np.abs(y1)
    same = y0 * y1 >= 0
    denom = np.where(same, 1.0, a0 + a1)
    area = np.where(same, 0.5 * dx * (a0 + a1), 0.5 * dx * (y0 ** 2 + y1 ** 2) / denom)
    return float(area.sum())


def norm_L1(f: GridFunction) -> float:
    """``int_0^{2pi} |f|`` by jump-aware composite trapezoid quadrature.

    The period is cut at annotated jumps; each piece is extended to its
    end points by linear extrapolation of the nearest one-sided samples,
    and sign changes are resolved by linear interpolation.
    """
    y = f.samples
    t = f.t
    if not f.jumps:
        x = np.append(t, TWO_PI)
        return _abs_trapezoid(x, np.append(y, y[0]))
    tol = 1e-12
    jumps = list(f.jumps)
    total = 0.0
    for k, a in enumerate(jumps):
        b = jumps[k + 1] if k + 1 < len(jumps) else jumps[0] + TWO_PI
        length = b - a
        d = np.mod(t - a, TWO_PI)
        idx = np.nonzero((d > tol) & (d < length - tol))[0]
        if idx.size == 0:
            # piece shorter than the grid step: use the nearest sample
            nearest = int(np.argmin(np.abs(np.mod(t - (a + length / 2) + np.pi, TWO_PI) - np.pi)))
            total += length * abs(y[nearest])
            continue
        order = np.argsort(d[idx])
        idx = idx[order]
        xs = d[idx]
        ys = y[idx]
        if idx.size == 1:
            ya = yb = ys[0]
        else:
            ya = ys[0] + (ys[1] - ys[0]) * (0.0 - xs[0]) / (xs[1] - xs[0])
            yb = ys[-1] + (ys[-1] - ys[-2]) * (length - xs[-1]) / (xs[-1] - xs[-2])
        x = np.concatenate(([0.0], xs, [length]))
        v = np.concatenate(([ya], ys, [yb]))
        total += _abs_trapezoid(x, v)
    return total


def _refine_peak(f: GridFunction, k: int):
    """Refine the extremum of |f| near grid index ``k``; returns (angle, signed value)."""
    y = f.samples
    n = f.n_samples
    h = f.h
    tk = k * h
    ym, y0, yp = y[(k - 1) % n], y[k], y[(k + 1) % n]
    denom = ym - 2.0 * y0 + yp
    delta = 0.0 if denom == 0 else float(np.clip(0.5 * (ym - yp) / denom, -1.0, 1.0))
    t_best = tk + delta * h
    v_best = y0 - 0.25 * (ym - yp) * delta
    if f.exact is None:
        return t_best, v_best
    lo, hi = tk - h, tk + h
    v_grid = float(f.exact(tk))
    if f.exact_derivative is not None:
        dlo = float(f.exact_derivative(lo))
        dhi = float(f.exact_derivative(hi))
        # |f| peaks where f' flips sign away from the sign of f
        if dlo * dhi < 0 and (dlo > 0) == (v_grid > 0):
            t_best = brentq(f.exact_derivative, lo, hi, xtol=1e-15, rtol=1e-15,
                            maxiter=200)
            v_best = float(f.exact(t_best))
            if abs(v_best) >= abs(v_grid):
                return t_best, v_best
    res = minimize_scalar(lambda u: -abs(float(f.exact(u))), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-13})
    t_best = float(res.x)
    v_best = float(f.exact(t_best))
    if abs(v_best) < abs(v_grid):
        return tk, v_grid
    return t_best, v_best


def locate_peak(f: GridFunction):
    """Location and signed value of the absolute maximum of ``|f|``.

    Near-ties (relative 1e-9) prefer a positive value, then the smallest
    angle in ``[0, 2*pi)``.

    Raises
    ------
    DegenerateInputError
        If ``f`` vanishes identically on the grid.
    """
    y = f.samples
    mag = np.abs(y)
    top = mag.max()
    if top == 0.0:
        raise DegenerateInputError("function vanishes identically")
    local = (mag >= np.roll(mag, 1)) & (mag >= np.roll(mag, -1))
    cand = np.nonzero(local & (mag >= (1.0 - _CANDIDATE_RTOL) * top))[0]
    if cand.size > _MAX_CANDIDATES:
        cand = cand[np.argsort(-mag[cand], kind="stable")[:_MAX_CANDIDATES]]
    refined = []
    for k in cand:
        t, v = _refine_peak(f, int(k))
        refined.append((wrap_angle(t), v))
    best = max(abs(v) for _, v in refined)
    near = [(t, v) for t, v in refined if abs(v) >= best * (1.0 - _TIE_RTOL)]
    positive = [(t, v) for t, v in near if v > 0]
    pool = positive or near
    return min(pool, key=lambda tv: tv[0])


def norm_C(f: GridFunction):
    """Uniform norm ``max |f|`` and a location where it is attained.

    Returns
    -------
    value : float
    argmax : float
        Angle in ``[0, 2*pi)``; grid maximum refined by a parabola through
        the neighbouring samples, or by direct evaluation when ``f`` carries
        an exact evaluator.
    """
    if not np.any(f.samples):
        return 0.0, 0.0
    t, v = locate_peak(f)
    return abs(v), t

