import json

import numpy as np
import pytest

from boundedinfo.bits import aux_for_integer
from boundedinfo.experiments import (
    CONSERVATION_BUDGET,
    NOINFO_BUDGET,
    boundedness,
    emit_report,
    pair_weights,
    run_conservation,
    run_noinfo,
)
from boundedinfo.info import prob_info
from boundedinfo.machine import MachineBudget, UndefinedInformation, complexity_table
from boundedinfo.quantum import PureState, basis_povm, haar_states, measure, validate_povm


def haar_exact_mean(weights):
    """E[p W p] for the basis POVM: Haar gives E[p_k p_l] = (1 + [k=l]) / (d (d + 1))."""
    d = len(weights)
    return (weights.sum() + np.trace(weights)) / (d * (d + 1))


def test_single_outcome_povm():
    e = validate_povm([np.eye(2)])
    r = run_noinfo(e, [1], 500, NOINFO_BUDGET, seed=3)
    (row,) = r.per_n
    info, _ = pair_weights(e, e.aux(), NOINFO_BUDGET)
    assert info.shape == (1, 1)
    # p is the point mass up to rounding in <psi|psi>
    assert row["mean"] == pytest.approx(2.0 ** info[0, 0], rel=1e-14)
    assert row["se"] <= 1e-15


@pytest.mark.parametrize("n", [1, 2, 3])
def test_basis_mean_matches_haar_moments(n):
    _, w = pair_weights(basis_povm(n), aux_for_integer(n), NOINFO_BUDGET)
    r = run_noinfo("basis", [n], 20_000, NOINFO_BUDGET, seed=1)
    (row,) = r.per_n
    assert abs(row["mean"] - haar_exact_mean(w)) <= 4 * row["se"]
    assert w.min() <= row["mean"] <= w.max()


def test_n1_weights():
    info, _ = pair_weights(basis_povm(1), aux_for_integer(1), NOINFO_BUDGET)
    assert info.tolist() == [[-3, 0], [3, 3]]
    # E[p0^2] = E[p1^2] = 1/3, E[p0 p1] = 1/6
    assert haar_exact_mean(2.0 ** info) == pytest.approx((2 * (1 / 8 + 8) + 1 + 8) / 6)


def test_sample_values_match_prob_info():
    n = 2
    e = basis_povm(n)
    table = complexity_table(aux_for_integer(n), NOINFO_BUDGET)
    _, w = pair_weights(e, aux_for_integer(n), NOINFO_BUDGET)
    for psi in haar_states(n, 5, 0):
        p = measure(e, PureState(psi))
        vec = np.array([p[k] for k in e.labels])
        assert 2.0 ** prob_info(p, p, table) == pytest.approx(vec @ w @ vec, rel=1e-12)


def test_undefined_aborts_with_pair():
    with pytest.raises(UndefinedInformation) as err:
        run_noinfo("basis", [2], 10, MachineBudget(18), seed=0)
    assert "at L=18" in str(err.value)


def test_random_povm_spec():
    r = run_noinfo({"random": {"outcomes": 3}}, [1], 2000, NOINFO_BUDGET, seed=0)
    row = r.per_n[0]
    assert row["outcomes"] == 3
    lo, hi = 2.0 ** row["pair_info_min"], 2.0 ** row["pair_info_max"]
    assert lo * (1 - 1e-12) <= row["mean"] <= hi * (1 + 1e-12)
    assert r.config["povm"] == {"random": {"outcomes": 3}}


def test_noinfo_deterministic_and_worker_independent():
    a = run_noinfo("basis", [1, 2], 9000, seed=5, workers=1)
    b = run_noinfo("basis", [1, 2], 9000, seed=5, workers=3)
    assert a.to_json() == b.to_json()
    assert a.rows == b.rows
    c = run_noinfo("basis", [1, 2], 9000, seed=6)
    assert c.to_json() != a.to_json()


def test_boundedness_helper():
    r = run_noinfo("basis", [1, 3], 4000, seed=0)
    checks = boundedness(r)
    assert [c["n"] for c in checks] == [1, 3]
    assert checks[0]["ok"]


def test_conservation_controls_and_shape():
    r = run_conservation(trials=200, support_size=3, seed=4)
    s = r.slack
    assert s["controls"] == 200
    assert s["control_max_abs"] == 0.0
    assert sum(s["histogram"]["counts"]) == 200
    assert s["min"] <= s["median"] <= s["max"]
    assert all(row[2] == 0.0 for row in r.rows)


def test_conservation_deterministic():
    a = run_conservation(trials=100, seed=2, workers=1)
    b = run_conservation(trials=100, seed=2, workers=4)
    assert a.to_json() == b.to_json()


def test_conservation_rejects_bad_support():
    with pytest.raises(ValueError):
        run_conservation(trials=1, support_size=8)


def test_conservation_needs_budget():
    with pytest.raises(UndefinedInformation):
        run_conservation(trials=1, budget=MachineBudget(18))


def test_emit_report(tmp_path):
    r = run_noinfo("basis", [1], 50, seed=0)
    jpath, cpath = emit_report(r, tmp_path / "r.json")
    obj = json.loads(open(jpath).read())
    assert set(obj) == {"experiment_id", "seed", "config", "per_n", "slack", "budget", "schema_version"}
    assert obj["schema_version"] == 1
    assert obj["config"]["samples_per_n"] == 50
    assert obj["budget"] == NOINFO_BUDGET.to_dict()
    assert set(obj["per_n"][0]) >= {"n", "mean", "se", "samples"}
    lines = open(cpath).read().splitlines()
    assert lines[0] == "n,sample,weight,self_info"
    assert len(lines) == 51


def test_default_budgets():
    assert NOINFO_BUDGET.max_program_bits == 33
    assert CONSERVATION_BUDGET.max_program_bits == 24


def test_n2_label_collides_with_aux_tape():
    # <"10"> is exactly the tape <binary(2)>, so every pair starting with "10" is cheap
    assert aux_for_integer(2) == "1" * 2 + "0" + "10"
    info, w = pair_weights(basis_povm(2), aux_for_integer(2), NOINFO_BUDGET)
    assert info[2].tolist() == [6, 6, 6, 6]
    assert haar_exact_mean(w) == pytest.approx((w.sum() + np.trace(w)) / 20)
    assert haar_exact_mean(w) > 16
