"""Self-information of measurement outcomes of random states.

For each qubit count, measure Haar-random states in the computational basis
and average 2^{i(p:p)} over the outcome distributions p.
"""

import numpy as np

from boundedinfo.bits import aux_for_integer
from boundedinfo.experiments import NOINFO_BUDGET, boundedness, pair_weights, run_noinfo
from boundedinfo.quantum import basis_povm

if __name__ == "__main__":
    # The outcome-pair information table, relativized to <n>.
    for n in (1, 2, 3):
        info, _ = pair_weights(basis_povm(n), aux_for_integer(n), NOINFO_BUDGET)
        print(f"n={n}\n{info}")

    report = run_noinfo("basis", [1, 2, 3], 10_000, NOINFO_BUDGET, seed=0)
    for row in report.per_n:
        q = row["self_info_quantiles"]
        print(f"n={row['n']}: mean 2^i = {row['mean']:.3f} +- {row['se']:.3f}; "
              f"median i(p:p) = {q['0.5']:.2f} bits")
    for c in boundedness(report):
        print(c)

    # A random 4-outcome POVM, relativized to its own serialization.
    report = run_noinfo({"random": {"outcomes": 4}}, [1, 2], 5_000, NOINFO_BUDGET, seed=0)
    print([(r["n"], round(r["mean"], 4)) for r in report.per_n])
    print(np.round([r["self_info_quantiles"]["1.0"] for r in report.per_n], 3))
