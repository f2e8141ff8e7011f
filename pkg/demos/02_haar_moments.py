"""Moments of Haar-random pure states.

The average of |psi><psi| is I/d, and the average of |psi psi><psi psi| is the
projector onto the symmetric subspace divided by its dimension (d+1 choose 2).
"""

import numpy as np

from boundedinfo.quantum import (
    first_moment_estimate,
    second_moment_estimate,
    symmetric_dimension,
    symmetric_projector,
)

if __name__ == "__main__":
    for n in (1, 2, 3):
        d = 2 ** n
        first = first_moment_estimate(n, 100_000, 1)
        print(f"n={n}: max |E[psi psi^+] - I/d| = {np.abs(first - np.eye(d) / d).max():.2e}")

    for n in (1, 2):
        second = second_moment_estimate(n, 100_000, 2)
        proj = symmetric_projector(n)
        target = proj / symmetric_dimension(n)
        anti = np.eye(4 ** n) - proj
        print(f"n={n}: dim Sym = {symmetric_dimension(n)}, "
              f"max error {np.abs(second - target).max():.2e}, "
              f"antisymmetric part {np.abs(anti @ second @ anti).max():.1e}")
