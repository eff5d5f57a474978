"""Randomised check of the upper bound.

Every trial draws fresh inputs (boxes, random trigonometric polynomials,
sums of random atoms, constants) normalised to the L1 unit ball and
records residual / bound. A correct method never exceeds 1; scaling the
multipliers by 1.1 produces violations.
"""
from convrec import bernoulli, poisson, run_certification

for label, kernels in [("poisson(0.5)^2", [poisson(0.5)] * 2),
                       ("sawtooth", [bernoulli(1)])]:
    for s in (1, 2):
        rep = run_certification(kernels, s, n_trials=200, seed=1)
        print(f"{label:<16} s={s}  max ratio {rep.max_ratio:.6f}  violations {rep.violations}")

rep = run_certification([poisson(0.5)], 1, n_trials=200, seed=1, perturb_alpha=0.1)
print(f"perturbed multipliers: max ratio {rep.max_ratio:.6f}  violations {rep.violations}")
