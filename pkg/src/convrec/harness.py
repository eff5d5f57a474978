"""Certification experiments for the optimal recovery method.

* ``run_certification`` samples inputs from the unit ball of L1 and checks
  the method's error against the theoretical bound;
* ``sharpness_experiment`` drives the error towards the bound with
  shrinking boxes (an approximate identity);
* ``cvd_check`` screens a kernel for the variation-diminishing property on
  random trigonometric polynomials.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .best_l1 import best_approximation
from .convolution import as_chain
from .errors import DegenerateInputError, PreconditionError
from .kernels import bernoulli, gauss, poisson
from .recovery import multipliers, residual_error
from .spectral import (DEFAULT_GRID, TWO_PI, GridFunction, TrigPoly,
                       merge_angles, norm_L1, samples_from_coeffs, wrap_angle)

VIOLATION_RTOL = 1e-6
SIGN_BAND_RTOL = 1e-9

PSI_KINDS = ("box", "random_trig", "random_atoms", "constant")

# single kernels used across the test and acceptance suites
CATALOG_KERNELS = (
    poisson(0.3), poisson(0.5), poisson(0.7),
    gauss(0.05), gauss(0.2),
    bernoulli(1, 1.0 / TWO_PI),
)

CATALOG_CHAINS = tuple((k,) for k in CATALOG_KERNELS) + (
    (poisson(0.5), poisson(0.5)),
    (poisson(0.5), poisson(0.5), poisson(0.5)),
    (poisson(0.5), gauss(0.2)),
    (bernoulli(1, 1.0 / TWO_PI), poisson(0.5)),
)


@dataclass(frozen=True)
class PsiSpec:
    """Recipe for an element of the L1 unit ball.

    ``kind`` is one of ``box`` (``center``, ``width``), ``random_trig``
    (``order``, ``seed``), ``random_atoms`` (``count``, ``seed``) or
    ``constant``; ``norm`` is the target L1 norm.
    """

    kind: str
    center: float = 0.0
    width: float = TWO_PI
    order: int = 0
    count: int = 1
    seed: int = 0
    norm: float = 1.0

    def __post_init__(self):
        if self.kind not in PSI_KINDS:
            raise PreconditionError(f"unknown psi kind {self.kind!r}")
        if not 0.0 <= self.norm <= 1.0:
            raise PreconditionError("psi norm must lie in [0, 1]")


def _box(center, width, grid, height=None):
    # covers the m grid points nearest to center; edges sit halfway between nodes
    h = TWO_PI / grid
    m = int(round(width / h))
    if width <= 0.0 or m < 1:
        raise PreconditionError(f"box width {width} is degenerate on a {grid}-point grid")
    if m >= grid:
        return np.full(grid, 1.0 / TWO_PI if height is None else height), ()
    k0 = int(np.floor(center / h - (m - 1) / 2.0 + 0.5))
    samples = np.zeros(grid)
    samples[(k0 + np.arange(m)) % grid] = 1.0 / (m * h) if height is None else height
    edges = (wrap_angle((k0 - 0.5) * h), wrap_angle((k0 + m - 0.5) * h))
    return samples, edges


def gen_psi(spec: PsiSpec, grid: int = DEFAULT_GRID) -> GridFunction:
    """Grid function with ``||psi||_L1 = spec.norm`` (at most 1).

    Deterministic for a given spec.
    """
    if spec.kind == "constant":
        return GridFunction(np.full(grid, spec.norm / TWO_PI))
    if spec.kind == "box":
        samples, edges = _box(spec.center, spec.width, grid)
        return GridFunction(spec.norm * samples, jumps=edges)
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "random_trig":
        if spec.order < 0:
            raise PreconditionError("order must be nonnegative")
        d = int(spec.order)
        poly = TrigPoly(d, rng.standard_normal(), rng.standard_normal(d),
                        rng.standard_normal(d))
        psi = GridFunction(samples_from_coeffs(poly.coeffs(), grid))
    else:
        if spec.count < 1:
            raise PreconditionError("count must be positive")
        samples = np.zeros(grid)
        edges = []
        for _ in range(int(spec.count)):
            center = rng.uniform(0.0, TWO_PI)
            width = TWO_PI / 2 ** int(rng.integers(3, 11))
            box, box_edges = _box(center, width, grid, height=rng.standard_normal())
            samples += box
            edges.extend(box_edges)
        psi = GridFunction(samples, jumps=merge_angles(edges))
    norm = norm_L1(psi)
    if norm == 0.0:
        raise DegenerateInputError("generated input vanishes")
    return psi.scaled(spec.norm / norm)


def _draw_spec(rng) -> PsiSpec:
    kind = PSI_KINDS[int(rng.choice(4, p=[0.4, 0.3, 0.25, 0.05]))]
    if kind == "box":
        return PsiSpec("box", center=float(rng.uniform(0.0, TWO_PI)),
                       width=TWO_PI / 2 ** int(rng.integers(3, 11)))
    if kind == "random_trig":
        return PsiSpec("random_trig", order=int(rng.integers(0, 17)),
                       seed=int(rng.integers(2 ** 31)))
    if kind == "random_atoms":
        return PsiSpec("random_atoms", count=int(rng.integers(1, 5)),
                       seed=int(rng.integers(2 ** 31)))
    return PsiSpec("constant")


def sign_changes(f: GridFunction, band: float = 0.0) -> int:
    """Cyclic number of sign changes of the samples, ignoring ``|f| <= band``.

    Raises
    ------
    DegenerateInputError
        If every sample lies inside the band.
    """
    if band < 0:
        raise PreconditionError("band must be nonnegative")
    y = f.samples
    kept = y[np.abs(y) > band]
    if kept.size == 0:
        raise DegenerateInputError("all samples lie inside the dead band")
    signs = np.sign(kept)
    return int(np.count_nonzero(signs != np.roll(signs, 1)))


@dataclass
class CVDReport:
    trials: int
    passes: int = 0
    failures: int = 0
    degenerate: int = 0

    @property
    def flagged(self) -> bool:
        return self.failures + self.degenerate > 0

    def summary(self) -> str:
        text = f"{self.passes}/{self.trials} pass"
        if self.flagged:
            text += f" ({self.failures} fail, {self.degenerate} degenerate)"
        return text


def _coeff_source(kernel):
    if isinstance(kernel, GridFunction):
        return lambda j: kernel.spectrum[np.asarray(j)]
    chain = as_chain(kernel)
    return chain.coeff


def cvd_check(kernel, trials: int = 100, seed: int = 0, grid: int = 1024,
              max_order: int = 8) -> CVDReport:
    """Check ``nu(K * phi) <= nu(phi)`` on random trigonometric polynomials.

    ``kernel`` may be a Kernel, a chain of kernels or a GridFunction of
    kernel samples. A failing or degenerate trial is evidence against the
    variation-diminishing property.
    """
    if trials < 1:
        raise PreconditionError("need at least one trial")
    coeff = _coeff_source(kernel)
    j = np.arange(max_order + 1)
    ck = np.asarray(coeff(j), dtype=complex)
    report = CVDReport(trials)
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        d = int(rng.integers(1, max_order + 1))
        poly = TrigPoly(d, rng.standard_normal(), rng.standard_normal(d),
                        rng.standard_normal(d))
        c_phi = poly.coeffs()
        phi = GridFunction(samples_from_coeffs(c_phi, grid))
        conv = GridFunction(samples_from_coeffs(TWO_PI * ck[: d + 1] * c_phi, grid))
        phi_max = np.max(np.abs(phi.samples))
        conv_max = np.max(np.abs(conv.samples))
        scale = phi_max * TWO_PI * np.max(np.abs(ck[: d + 1]))
        if conv_max <= 1e-12 * scale:
            report.degenerate += 1
            continue
        nu_phi = sign_changes(phi, SIGN_BAND_RTOL * phi_max)
        nu_conv = sign_changes(conv, SIGN_BAND_RTOL * conv_max)
        if nu_conv <= nu_phi:
            report.passes += 1
        else:
            report.failures += 1
    return report


def sharpness_experiment(kernels, s: int, widths, grid: int = DEFAULT_GRID,
                         scan: int = 8):
    """Ratios ``residual / bound`` for boxes of shrinking width.

    Every factor gets the same box; its position is chosen as the best of
    ``scan`` equally spaced centres.

    Returns
    -------
    list of (width, ratio)
    """
    chain = as_chain(kernels)
    widths = [float(w) for w in widths]
    if any(w <= 0 for w in widths):
        raise PreconditionError("widths must be positive")
    mult = multipliers(chain, s, grid)
    rows = []
    for w in widths:
        best = 0.0
        for t0 in TWO_PI * np.arange(scan) / scan:
            psi = gen_psi(PsiSpec("box", center=float(t0), width=w), grid)
            _, _, ratio = residual_error([psi] * chain.n, chain, s, mult)
            best = max(best, ratio)
        rows.append((w, best))
    return rows


@dataclass(frozen=True)
class TrialResult:
    seed: int
    residual: float
    ratio: float


@dataclass
class RecoveryReport:
    kernels: list
    n: int
    s: int
    grid: int
    sigma: float
    bound: float
    alpha: dict
    trials: list = field(default_factory=list)
    max_ratio: float = 0.0
    violations: int = 0

    def to_dict(self) -> dict:
        return {
            "kernels": list(self.kernels),
            "n": self.n,
            "s": self.s,
            "grid": self.grid,
            "sigma": self.sigma,
            "bound": self.bound,
            "alpha": [{"j": j, "re": self.alpha[j].real, "im": self.alpha[j].imag}
                      for j in sorted(self.alpha)],
            "trials": [{"seed": t.seed, "residual": t.residual, "ratio": t.ratio}
                       for t in self.trials],
            "max_ratio": self.max_ratio,
            "violations": self.violations,
        }


def method_report(kernels, s: int, grid: int = DEFAULT_GRID,
                  perturb_alpha: float = 0.0):
    """Report skeleton (no trials) and the multipliers actually used."""
    chain = as_chain(kernels)
    ext, _ = best_approximation(chain, s, grid)
    mult = multipliers(chain, s, grid)
    if perturb_alpha:
        mult = mult.perturbed(perturb_alpha)
    report = RecoveryReport(kernels=chain.specs, n=chain.n, s=int(s), grid=int(grid),
                            sigma=ext.sigma, bound=ext.max_abs, alpha=dict(mult.alpha))
    return report, mult


def run_certification(kernels, s: int, n_trials: int, seed: int = 0,
                      grid: int = DEFAULT_GRID, threads: int = 1,
                      perturb_alpha: float = 0.0, psi_specs=None) -> RecoveryReport:
    """Empirical supremum of the method's error over random unit-ball inputs.

    Trial ``i`` draws its inputs from a generator seeded with ``seed + i``,
    so results do not depend on ``threads``. ``psi_specs`` (one per
    factor) replaces the random draw in every trial.
    """
    if n_trials < 1:
        raise PreconditionError("need at least one trial")
    chain = as_chain(kernels)
    report, mult = method_report(chain, s, grid, perturb_alpha)

    def trial(i):
        trial_seed = seed + i
        if psi_specs is not None:
            specs = list(psi_specs)
        else:
            rng = np.random.default_rng(trial_seed)
            specs = [_draw_spec(rng) for _ in range(chain.n)]
        psis = [gen_psi(spec, grid) for spec in specs]
        residual, _, ratio = residual_error(psis, chain, s, mult)
        return TrialResult(trial_seed, residual, ratio)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(trial, range(n_trials)))
    else:
        results = [trial(i) for i in range(n_trials)]
    report.trials = results
    report.max_ratio = max(r.ratio for r in results)
    report.violations = sum(r.ratio > 1.0 + VIOLATION_RTOL for r in results)
    return report

