import json
import math

import pytest

import appe


def fig_config(**overrides):
    cfg = {
        "schema_version": 1,
        "n": 6,
        "alice": 3,
        "participants": [2, 3, 4, 6],
        "theta": [0.0, math.pi / 3, math.pi / 3, math.pi / 3, 0.0, math.pi / 3],
        "length": 500,
        "ones": 100,
        "vote_rounds": 0,
        "seed": 11,
    }
    cfg.update(overrides)
    return cfg


def test_closed_forms():
    assert abs(appe.theta_from_beta(0.75) - math.pi / 3) < 1e-12
    assert abs(appe.perturbed_beta(0.75, 0.05) - 0.725) < 1e-12
    assert abs(appe.correct_beta(0.70, 0.1) - 0.75) < 1e-12
    assert abs(appe.lemma_tail_bound(0.1, 200, 100) - 0.3715399030718730) < 1e-12
    assert abs(appe.bias_bound(0.2, math.pi / 4, 0.0, 200, 100) - 0.7858402747554025) < 1e-12
    assert abs(appe.key_entropy_length(200, 50) - 162.2556248918266) < 1e-9


def test_run_and_determinism():
    out = appe.run(fig_config())
    report = out["report"]
    assert report["abort_reason"] == ""
    assert report["nu_executed"] == 400
    assert abs(report["theta_hat"] - math.pi / 3) < 0.15
    again = appe.run(fig_config())
    assert again["report"] == report
    assert again["rounds_csv"] == out["rounds_csv"]
    header = out["rounds_csv"].splitlines()[0]
    assert header == "round,kind,announcements,result_bit"


def test_seed_override_changes_outcomes():
    a = appe.run(fig_config())
    b = appe.run(fig_config(), seed=12)
    assert a["rounds_csv"] != b["rounds_csv"]


def test_config_rejects_unknown_key():
    bad = fig_config()
    bad["not_a_field"] = 1
    with pytest.raises(ValueError):
        appe.run(bad)


def test_qfi_uniform():
    q = appe.qfi_matrix(3, [0.1, 0.2, 0.3], [3, 3, 3])
    for row in q:
        for entry in row:
            assert abs(entry - 1.0 / 9.0) < 1e-9
    check = appe.check_privacy_conditions(3, [0.1, 0.2, 0.3], [3, 3, 3])
    assert check["private_family"]
    broken = appe.check_privacy_conditions(3, [0.1, 0.2, 0.3], [1, 2, 2])
    assert not broken["private_family"]


def test_marginals_and_parity():
    res = appe.uniform_marginal_check(4, [1, 3], 0.7, 0, 7)
    assert res["exact_deviation"] < 1e-12
    frac = appe.parity_even_fraction(6, math.pi / 3, 20000, 5)
    assert abs(frac - 0.75) < 0.02


def test_verify_core_suite():
    results = appe.run_verify("core", "", 0x5EED)
    assert results and all(r["passed"] for r in results)
