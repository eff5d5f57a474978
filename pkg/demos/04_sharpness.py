"""The bound is approached by narrow boxes.

A box of width w and unit mass is an approximate identity, so the error
(K - P) * psi tends to K - P in L1 and the ratio to the bound tends to 1.
"""
import numpy as np

from convrec import poisson, sharpness_experiment

widths = [2 * np.pi / 2 ** k for k in range(2, 11)]
for kernels in ([poisson(0.5)], [poisson(0.5)] * 2):
    print(f"n = {len(kernels)}")
    for w, ratio in sharpness_experiment(kernels, 1, widths):
        print(f"  width 2pi/{round(2 * np.pi / w):<5d} ratio {ratio:.7f}")
