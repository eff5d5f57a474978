"""Optimal information, optimal recovery method and its error.

Each factor ``x_l = K_l * psi_l`` is observed through its first ``2s - 1``
real Fourier coefficients ``(a_0..a_{s-1}, b_1..b_{s-1})``. The method
returns

    Phi(t) = sum_{|j| <= s-1} alpha_j c_j(x_1) ... c_j(x_n) e^{ijt},
    alpha_j = c_j(P) / (c_j(K_1) ... c_j(K_n)),

where ``P`` is the best L1 approximation of ``K_1 * ... * K_n`` from
``best_l1``. With this normalisation ``Phi = P * psi_1 * ... * psi_n``
exactly, and the error never exceeds ``||K_1 * ... * K_n * phi_s||_C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .best_l1 import best_approximation, optimal_error
from .convolution import as_chain
from .errors import GridMismatchError, NyquistRangeError, PreconditionError
from .spectral import (DEFAULT_GRID, TWO_PI, GridFunction, TrigPoly,
                       fourier_coeffs, norm_L1, samples_from_coeffs)

UNIT_BALL_SLACK = 1e-9
REFERENCE_MAX_ORDER = 4096


@dataclass(frozen=True)
class InfoVector:
    """The ``2s - 1`` Fourier functionals of one factor."""

    s: int
    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        if self.s < 1 or len(a) != self.s or len(b) != self.s - 1:
            raise PreconditionError(
                f"info for s={self.s} needs {self.s} cosine and {self.s - 1} sine values")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def size(self) -> int:
        return 2 * self.s - 1

    def coeffs(self) -> np.ndarray:
        """``c_0 .. c_{s-1}`` reassembled as ``(a_j - i b_j) / 2``."""
        a = np.asarray(self.a)
        b = np.concatenate(([0.0], self.b))
        return (a - 1j * b) / 2.0

    def scaled(self, factor: float) -> "InfoVector":
        return InfoVector(self.s, tuple(factor * v for v in self.a),
                          tuple(factor * v for v in self.b))


@dataclass(frozen=True)
class MultiplierSet:
    s: int
    alpha: dict = field(compare=False)

    def nonnegative(self) -> np.ndarray:
        """``alpha_0 .. alpha_{s-1}``."""
        return np.array([self.alpha[j] for j in range(self.s)], dtype=complex)

    def perturbed(self, rel: float) -> "MultiplierSet":
        """Multipliers scaled by ``1 + rel`` (a deliberately wrong method)."""
        return MultiplierSet(self.s, {j: (1.0 + rel) * v for j, v in self.alpha.items()})


def extract_info(x: GridFunction, s: int) -> InfoVector:
    """``(a_0(x), .., a_{s-1}(x), b_1(x), .., b_{s-1}(x))``.

    Raises
    ------
    NyquistRangeError
        If ``s - 1`` is not below the grid's Nyquist index.
    """
    if s < 1:
        raise PreconditionError("s must be a positive integer")
    if s - 1 >= x.nyquist:
        raise NyquistRangeError(f"s={s} too large for a {x.n_samples}-point grid")
    c = fourier_coeffs(x, s - 1)
    return InfoVector(s, tuple(2.0 * c.real), tuple(-2.0 * c[1:].imag))


def multipliers(kernels, s: int, grid: int = DEFAULT_GRID) -> MultiplierSet:
    """``alpha_j = c_j(P) / prod_l c_j(K_l)`` for ``|j| <= s - 1``."""
    chain = as_chain(kernels)
    _, interp = best_approximation(chain, s, grid)
    j = np.arange(s)
    denom = np.ones(s, dtype=complex)
    for k in chain.kernels:
        denom = denom * k.coeff(j)
    alpha = interp.poly.coeffs() / denom
    table = {}
    for idx, value in enumerate(alpha):
        table[idx] = complex(value)
        table[-idx] = complex(np.conj(value))
    return MultiplierSet(int(s), table)


def recover(infos: Sequence[InfoVector], mult: MultiplierSet) -> TrigPoly:
    """Apply the optimal method to the information of every factor."""
    if not infos:
        raise PreconditionError("need information about at least one factor")
    if any(info.s != mult.s for info in infos):
        raise PreconditionError("information and multipliers disagree on s")
    c = mult.nonnegative()
    for info in infos:
        c = c * info.coeffs()
    return TrigPoly.from_coeffs(c)


def theoretical_bound(kernels, s: int, grid: int = DEFAULT_GRID) -> float:
    """``||K_1 * ... * K_n * phi_s||_C``, the optimal error for ``N = n(2s-1)``."""
    return optimal_error(kernels, s, grid)


def _check_psis(psis, n):
    if len(psis) != n:
        raise PreconditionError(f"expected {n} inputs, got {len(psis)}")
    sizes = {p.n_samples for p in psis}
    if len(sizes) != 1:
        raise GridMismatchError(f"inputs live on different grids {sorted(sizes)}")
    for p in psis:
        norm = norm_L1(p)
        if norm > 1.0 + UNIT_BALL_SLACK:
            raise PreconditionError(f"input has L1 norm {norm:.12g} > 1")
    return sizes.pop()


def class_members(psis: Sequence[GridFunction], kernels, order: int | None = None):
    """Grid samples of ``x_l = K_l * psi_l`` and their coefficients ``c_0..c_order``."""
    chain = as_chain(kernels)
    grid = psis[0].n_samples
    if order is None:
        order = min(grid // 2 - 1, REFERENCE_MAX_ORDER)
    j = np.arange(order + 1)
    xs, coeffs = [], []
    for k, psi in zip(chain.kernels, psis):
        c = TWO_PI * k.coeff(j) * fourier_coeffs(psi, order)
        coeffs.append(c)
        xs.append(GridFunction(samples_from_coeffs(c, grid)))
    return xs, coeffs


def residual_error(psis: Sequence[GridFunction], kernels, s: int,
                   mult: MultiplierSet | None = None):
    """Error of the optimal method on ``x_l = K_l * psi_l``.

    Parameters
    ----------
    psis : sequence of GridFunction
        One input per kernel, each with ``||psi||_L1 <= 1``.
    kernels : sequence of Kernel
    s : int
    mult : MultiplierSet, optional
        Defaults to the optimal multipliers; pass others to test a
        different method.

    Returns
    -------
    residual, bound, ratio : float
        ``||x_1 * .. * x_n - Phi||_L1``, the theoretical bound and their ratio.
    """
    chain = as_chain(kernels)
    grid = _check_psis(list(psis), chain.n)
    if mult is None:
        mult = multipliers(chain, s, grid)
    xs, coeffs = class_members(psis, chain)
    truth = np.full(coeffs[0].shape, TWO_PI ** (chain.n - 1), dtype=complex)
    for c in coeffs:
        truth = truth * c
    phi = recover([extract_info(x, s) for x in xs], mult)
    diff = truth.copy()
    diff[: phi.order + 1] -= phi.coeffs()
    residual = norm_L1(GridFunction(samples_from_coeffs(diff, grid)))
    bound = theoretical_bound(chain, s, grid)
    return residual, bound, residual / bound
