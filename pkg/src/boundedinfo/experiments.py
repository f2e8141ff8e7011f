"""Seeded Monte Carlo studies built on the bounded machine.

``run_noinfo`` averages ``2^{i(p:p)}`` over measurement outcome
distributions ``p`` of Haar-random states.  ``run_conservation`` measures how
much ``i(fp:q)`` exceeds ``i(p:q)`` for random channels ``f``.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bits import aux_for_integer
from .info import Channel, FiniteProbability, conservation_slack, info_matrix, prob_info, random_channel
from .machine import MachineBudget, complexity_table
from .quantum import Povm, basis_povm, born_probabilities, haar_states, random_povm
from .streams import map_ordered, stream_rngs

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
# L=18 leaves most 3-qubit label pairs without a program; 33 covers them.
NOINFO_BUDGET = MachineBudget(max_program_bits=33)
# covers every pair of strings of length <= 2 with an empty auxiliary tape
CONSERVATION_BUDGET = MachineBudget(max_program_bits=24)
SLACK_BIN_WIDTH = 0.5


@dataclass
class ExperimentReport:
    experiment_id: str
    seed: int
    config: dict
    budget: MachineBudget
    per_n: list = field(default_factory=list)
    slack: dict | None = None
    wall_time: float = 0.0
    rows: list = field(default_factory=list, repr=False)
    row_header: tuple = ()

    def to_dict(self) -> dict:
        # wall_time stays out of the JSON so reruns are byte-identical
        return {"experiment_id": self.experiment_id,
                "seed": self.seed,
                "config": self.config,
                "per_n": self.per_n,
                "slack": self.slack,
                "budget": self.budget.to_dict(),
                "schema_version": SCHEMA_VERSION}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _experiment_id(kind: str, config: dict) -> str:
    digest = hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()
    return f"{kind}-{digest[:12]}"


def emit_report(report: ExperimentReport, path) -> tuple[str, str]:
    """Write ``path`` (JSON) and a sibling ``.csv`` holding the per-sample values."""
    path = str(path)
    csv_path = (path[:-5] if path.endswith(".json") else path) + ".csv"
    with open(path, "w") as fh:
        fh.write(report.to_json())
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(report.row_header)
        for row in report.rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path, csv_path


def _povm_for(spec, n: int, seed: int) -> tuple[Povm, str]:
    """POVM and the auxiliary tape it is relativized to."""
    if spec is None or spec == "basis":
        return basis_povm(n), aux_for_integer(n)
    if isinstance(spec, Povm):
        if spec.n != n:
            raise ValueError(f"POVM acts on {spec.n} qubits, not {n}")
        return spec, spec.aux()
    if isinstance(spec, dict) and "random" in spec:
        outcomes = int(spec["random"].get("outcomes", 2 ** n))
        ss = np.random.SeedSequence([seed, n, 1])
        povm = random_povm(n, outcomes, ss)
        return povm, povm.aux()
    raise ValueError(f"unknown POVM spec {spec!r}")


def _povm_echo(spec):
    if spec is None or spec == "basis":
        return "basis"
    if isinstance(spec, Povm):
        return {"explicit": spec.to_json()}
    return spec


def pair_weights(povm: Povm, aux: str, budget: MachineBudget) -> tuple[np.ndarray, np.ndarray]:
    """Outcome-pair information ``i(k:k')`` and its exponential ``2^{i}``."""
    table = complexity_table(aux, budget)
    info = info_matrix(povm.labels, povm.labels, table)
    return info, np.exp2(info.astype(float))


def run_noinfo(povm=None, n_values=(1, 2, 3), samples_per_n: int = 10_000,
               budget: MachineBudget = NOINFO_BUDGET, seed: int = 0,
               workers: int | None = 1) -> ExperimentReport:
    """Average ``2^{i(Ep:Ep)}`` over Haar-random states for each qubit count.

    ``povm`` is ``None``/``"basis"`` (computational basis, relativized to n),
    ``{"random": {"outcomes": m}}`` or an explicit :class:`Povm`; the latter
    two are relativized to their canonical serialization.
    """
    start = time.perf_counter()
    config = {"kind": "noinfo", "povm": _povm_echo(povm), "n_values": list(n_values),
              "samples_per_n": samples_per_n, "seed": seed, "budget": budget.to_dict()}
    report = ExperimentReport(_experiment_id("noinfo", config), seed, config, budget,
                              row_header=("n", "sample", "weight", "self_info"))
    for n in n_values:
        E, aux = _povm_for(povm, n, seed)
        info, weights = pair_weights(E, aux, budget)
        states = haar_states(n, samples_per_n, np.random.SeedSequence([seed, n]), workers)
        p = born_probabilities(E, states)
        vals = np.einsum("nk,kl,nl->n", p, weights, p)
        self_info = np.log2(vals)
        se = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        report.per_n.append({
            "n": n, "mean": float(vals.mean()), "se": se, "samples": int(len(vals)),
            "outcomes": E.outcomes,
            "pair_info_min": int(info.min()), "pair_info_max": int(info.max()),
            "self_info_quantiles": {str(q): float(np.quantile(self_info, q))
                                    for q in (0.0, 0.1, 0.5, 0.9, 1.0)},
        })
        report.rows.extend((n, j, float(v), float(s)) for j, (v, s) in enumerate(zip(vals, self_info)))
        log.info("noinfo n=%d mean=%.6g se=%.3g", n, vals.mean(), se)
    report.wall_time = time.perf_counter() - start
    return report


def boundedness(report: ExperimentReport) -> list[dict]:
    """Check ``mean(n) <= 2 mean(1) + 3 SE`` where SE is the standard error of
    ``mean(n) - 2 mean(1)``."""
    by_n = {e["n"]: e for e in report.per_n}
    base = by_n[1]
    out = []
    for n, e in sorted(by_n.items()):
        se = math.sqrt(e["se"] ** 2 + 4 * base["se"] ** 2)
        bound = 2 * base["mean"] + 3 * se
        out.append({"n": n, "mean": e["mean"], "bound": bound, "ok": e["mean"] <= bound})
    return out


def string_pool(max_len: int) -> list[str]:
    return ["".join(b) for w in range(max_len + 1) for b in itertools.product("01", repeat=w)]


def _random_probability(rng, pool, size) -> FiniteProbability:
    support = rng.choice(len(pool), size=size, replace=False)
    mass = rng.dirichlet(np.ones(size))
    return FiniteProbability({pool[i]: float(m) for i, m in zip(support, mass)})


def _histogram(values, width: float) -> dict:
    lo = math.floor(min(values) / width) * width
    hi = math.floor(max(values) / width) * width + width
    edges = np.arange(lo, hi + width / 2, width)
    counts, _ = np.histogram(values, bins=edges)
    return {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}


def run_conservation(trials: int = 1000, support_size: int = 3,
                     budget: MachineBudget = CONSERVATION_BUDGET, seed: int = 0,
                     pool_max_len: int = 2, aux: str = "",
                     workers: int | None = 1) -> ExperimentReport:
    """Slack ``i(fp:q) - i(p:q)`` over random triples, each with an identity-channel control."""
    start = time.perf_counter()
    pool = string_pool(pool_max_len)
    if not 1 <= support_size <= len(pool):
        raise ValueError(f"support_size must be in 1..{len(pool)}")
    config = {"kind": "conservation", "trials": trials, "support_size": support_size,
              "pool_max_len": pool_max_len, "aux": aux, "seed": seed, "budget": budget.to_dict()}
    table = complexity_table(aux, budget)
    info_matrix(pool, pool, table)  # abort early if any pool pair is undefined

    def trial(rng):
        p = _random_probability(rng, pool, support_size)
        q = _random_probability(rng, pool, support_size)
        outs = [pool[i] for i in sorted(rng.choice(len(pool), size=support_size, replace=False))]
        f = random_channel(p.support, outs, rng)
        control = conservation_slack(Channel.identity(p.support), p, q, table)
        base = prob_info(p, q, table)
        return conservation_slack(f, p, q, table), control, base

    results = map_ordered(trial, stream_rngs(seed, trials), workers)
    slacks = [r[0] for r in results]
    controls = [r[1] for r in results]
    report = ExperimentReport(_experiment_id("conservation", config), seed, config, budget,
                              row_header=("trial", "slack", "control_slack", "info_pq"))
    report.slack = {
        "trials": trials,
        "max": max(slacks), "median": float(np.median(slacks)),
        "min": min(slacks), "mean": math.fsum(slacks) / trials,
        "positive_fraction": sum(s > 0 for s in slacks) / trials,
        "controls": len(controls),
        "control_max_abs": max(abs(c) for c in controls),
        "histogram": _histogram(slacks, SLACK_BIN_WIDTH),
    }
    report.rows = [(t, s, c, b) for t, (s, c, b) in enumerate(results)]
    report.wall_time = time.perf_counter() - start
    log.info("conservation trials=%d max=%.6g median=%.6g", trials, report.slack["max"],
             report.slack["median"])
    return report
