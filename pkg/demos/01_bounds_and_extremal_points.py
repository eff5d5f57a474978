"""Optimal error values for a few kernel chains.

For each chain we locate the extremal point sigma of K * phi_s, build the
interpolating polynomial P at sigma + m pi / s, and compare the two routes
to the optimal error: the sup norm of K * phi_s and the L1 distance
||K - P||.
"""
import numpy as np

from convrec import bernoulli, best_approximation, gauss, poisson

chains = {
    "poisson(0.5)": [poisson(0.5)],
    "poisson(0.5)^2": [poisson(0.5), poisson(0.5)],
    "gauss(0.2)": [gauss(0.2)],
    "sawtooth": [bernoulli(1)],
    "sawtooth * poisson(0.5)": [bernoulli(1), poisson(0.5)],
}

print(f"{'chain':<26}{'s':>3}{'sigma':>12}{'||K*phi||_C':>16}{'||K-P||_1':>16}")
for name, kernels in chains.items():
    for s in (1, 2, 3):
        ext, interp = best_approximation(kernels, s)
        print(f"{name:<26}{s:>3}{ext.sigma:>12.6f}{ext.max_abs:>16.10f}{interp.l1_error:>16.10f}")

# closed forms for comparison
print()
print("8 arctan(1/2)        =", 8 * np.arctan(0.5))
print("2 pi 8 arctan(1/4)   =", 2 * np.pi * 8 * np.arctan(0.25))
print("pi^2 / 2, pi^2 / 4   =", np.pi ** 2 / 2, np.pi ** 2 / 4)
