import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convrec.errors import DegenerateInputError, PreconditionError
from convrec.harness import (CVDReport, PsiSpec, cvd_check, gen_psi, run_certification,
                             sharpness_experiment, sign_changes)
from convrec.kernels import gauss, poisson
from convrec.recovery import residual_error
from convrec.spectral import TWO_PI, GridFunction, TrigPoly, norm_L1

PI = np.pi


def fn(func, n=1024):
    return GridFunction.from_function(func, n)


def test_gen_psi_examples():
    psi = gen_psi(PsiSpec("constant"))
    assert np.all(psi.samples == 1 / TWO_PI)
    assert norm_L1(psi) == pytest.approx(1.0, abs=1e-12)
    box = gen_psi(PsiSpec("box", center=0.0, width=TWO_PI / 1024))
    support = box.samples[box.samples != 0]
    assert support.size == 16384 // 1024
    np.testing.assert_allclose(support, 1024 / TWO_PI, rtol=1e-12)
    assert norm_L1(box) == pytest.approx(1.0, abs=1e-12)
    psi = gen_psi(PsiSpec("random_trig", order=5, seed=7))
    assert norm_L1(psi) == pytest.approx(1.0, abs=1e-9)


def test_gen_psi_errors_and_norm():
    with pytest.raises(PreconditionError):
        gen_psi(PsiSpec("box", width=1e-9))
    with pytest.raises(PreconditionError):
        PsiSpec("gaussian")
    with pytest.raises(PreconditionError):
        PsiSpec("constant", norm=1.5)
    half = gen_psi(PsiSpec("random_atoms", count=3, seed=2, norm=0.5))
    assert norm_L1(half) == pytest.approx(0.5, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["box", "random_trig", "random_atoms", "constant"]),
       st.integers(0, 2**31 - 1), st.integers(3, 10))
def test_gen_psi_in_unit_ball_and_deterministic(kind, seed, k):
    spec = PsiSpec(kind, center=seed % 7, width=TWO_PI / 2 ** k, order=k, count=1 + k % 4,
                   seed=seed)
    psi = gen_psi(spec, 4096)
    assert norm_L1(psi) <= 1 + 1e-9
    assert np.array_equal(psi.samples, gen_psi(spec, 4096).samples)


def test_sign_changes_examples():
    assert sign_changes(fn(np.sin)) == 2
    assert sign_changes(fn(lambda t: np.sin(3 * t))) == 6
    assert sign_changes(fn(lambda t: np.ones_like(t))) == 0
    with pytest.raises(DegenerateInputError):
        sign_changes(GridFunction(np.full(64, 1e-12)), band=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 255))
def test_sign_changes_shift_invariant_and_even(seed, shift):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 9))
    f = TrigPoly(d, rng.standard_normal(), rng.standard_normal(d),
                 rng.standard_normal(d)).sample(256)
    nu = sign_changes(f)
    assert nu % 2 == 0
    assert sign_changes(GridFunction(np.roll(f.samples, shift))) == nu
    assert sign_changes(f.scaled(-1.0)) == nu


def test_cvd_check_examples():
    assert cvd_check(poisson(0.5), 100).passes == 100
    assert cvd_check(gauss(0.1), 100).passes == 100
    rep = cvd_check(poisson(0.5), 100)
    assert not rep.flagged and rep.summary() == "100/100 pass"


def test_cvd_check_flags_non_cvd_double():
    double = fn(lambda t: np.cos(3 * t))
    rep = cvd_check(double, 100)
    assert rep.flagged
    assert rep.failures + rep.degenerate > 0
    assert rep.passes + rep.failures + rep.degenerate == 100


def test_cvd_report_summary():
    assert CVDReport(10, 8, 1, 1).summary() == "8/10 pass (1 fail, 1 degenerate)"


def test_sharpness_examples():
    rows = sharpness_experiment([poisson(0.5)], 1, [TWO_PI / 1024])
    assert rows[0][1] >= 0.999
    rows = sharpness_experiment([poisson(0.5)] * 2, 1, [TWO_PI / 512])
    assert rows[0][1] >= 0.99
    rows = sharpness_experiment([poisson(0.5)], 1, [TWO_PI])
    assert rows[0][1] < 1


def test_sharpness_monotone():
    widths = [TWO_PI / 2 ** k for k in range(2, 11)]
    ratios = [r for _, r in sharpness_experiment([gauss(0.2)], 2, widths, scan=16)]
    assert all(b >= a - 1e-3 for a, b in zip(ratios, ratios[1:]))


def test_run_certification_examples():
    rep = run_certification([poisson(0.5)] * 2, 1, 200, seed=1)
    assert rep.violations == 0
    assert 0 < rep.max_ratio <= 1 + 1e-6
    assert len(rep.trials) == 200 and rep.trials[5].seed == 6


def test_run_certification_single_constant_trial():
    rep = run_certification([poisson(0.5)], 1, 1, psi_specs=[PsiSpec("constant")])
    psi = gen_psi(PsiSpec("constant"))
    residual, bound, ratio = residual_error([psi], [poisson(0.5)], 1)
    assert rep.trials[0].residual == residual and rep.trials[0].ratio == ratio
    assert rep.bound == bound


def test_run_certification_deterministic_across_threads():
    a = run_certification([poisson(0.5), gauss(0.2)], 2, 24, seed=5, threads=1)
    b = run_certification([poisson(0.5), gauss(0.2)], 2, 24, seed=5, threads=6)
    assert a.to_dict() == b.to_dict()


def test_perturbed_certification_violates():
    rep = run_certification([poisson(0.5)], 1, 60, seed=0, perturb_alpha=0.1)
    assert rep.violations > 0


def test_run_certification_requires_trials():
    with pytest.raises(PreconditionError):
        run_certification([poisson(0.5)], 1, 0)
