"""Run-loop contracts: config validation, termination taxonomy, adaptive
rejection bookkeeping, and lossless serialization."""

import math

import numpy as np
import pytest

import regionopt as ro
from regionopt import AlgoConfig, Region, RegionParams
from regionopt.algorithms import SchemaError, TERMINATION_REASONS

QUAD_PARAMS = RegionParams(kappa=2.0, f_ref=0.0)
SADDLE_PARAMS = RegionParams(kappa=0.5, f_ref=0.0)


def quad_run(algo="rg_a", x0=(1.0, 1.0), **kwargs):
    obj = ro.get_objective("quad_sc")
    cfg = AlgoConfig(algo=algo, **kwargs)
    return ro.run(obj, cfg, QUAD_PARAMS, np.asarray(x0, dtype=float))


# ---------------------------------------------------------------------------
# AlgoConfig validation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs,msg",
    [
        (dict(algo="bogus"), "unknown algorithm"),
        (dict(algo="rg"), "positive l1"),
        (dict(algo="rg", l1=-1.0), "positive l1"),
        (dict(algo="rn"), "positive l2"),
        (dict(algo="rg_a", eta=0.0), "eta"),
        (dict(algo="rg_a", eta=1.0), "eta"),
        (dict(algo="rg_a", psi=1.0), "psi"),
        (dict(algo="rg_a", nu_min=0.0), "nu_min"),
        (dict(algo="rg_a", nu_min=2.0, nu_max=1.0), "nu_min"),
        (dict(algo="rg_a", nu0=1e-6), "nu0"),
        (dict(algo="rg_a", nu_reset="sometimes"), "nu_reset"),
        (dict(algo="rg_a", max_iters=0), "max_iters"),
        (dict(algo="rg_a", eps_1=0.0), "eps_1"),
        (dict(algo="rg_a", eps_f=-1.0), "eps_f"),
        (dict(algo="rg_a", eps_2=1e-6), "second-order"),
    ],
)
def test_config_validation(kwargs, msg):
    with pytest.raises(ValueError, match=msg):
        AlgoConfig(**kwargs)


def test_config_nu0_defaults_to_nu_min():
    traj = quad_run("rg_a", max_iters=1)
    assert traj.records[0].nu == 1e-3


def test_algorithm_catalog():
    assert ro.ALGORITHMS == ("rg", "rg_a", "tr_g", "tr_h", "rn", "rn_a")
    assert set(TERMINATION_REASONS) == {
        "eps_f_met",
        "first_order_met",
        "second_order_met",
        "max_iters",
        "stalled",
        "diverged",
    }


# ---------------------------------------------------------------------------
# run(): structure shared by every termination path
# ---------------------------------------------------------------------------


def check_structure(traj):
    assert traj.termination_reason in TERMINATION_REASONS
    assert [r.k for r in traj.records] == list(range(len(traj.records)))
    last = traj.records[-1]
    assert not last.accepted
    if traj.termination_reason != "max_iters":
        pass  # terminal row exists on every path, checked below
    assert last.step_norm == 0.0 or traj.termination_reason == "stalled"
    # f never increases across accepted transitions.
    f = traj.records[0].f
    for r in traj.records[1:]:
        assert r.f <= f + 1e-12
        f = r.f
    # Rejected rows keep the iterate.
    for a, b in zip(traj.records, traj.records[1:]):
        if not a.accepted:
            assert np.array_equal(a.x, b.x) and a.f == b.f
    # Recorded label is a pure function of the recorded scalars.
    for r in traj.records:
        assert r.region is ro.classify_witness(
            r.delta_f, r.grad_norm, r.lambda_minus, traj.region_params
        )


def test_run_first_order_met():
    traj = quad_run("rg", l1=3.0, eps_1=1e-6)
    assert traj.termination_reason == "first_order_met"
    check_structure(traj)
    assert traj.records[-1].grad_norm <= 1e-6
    assert all(r.accepted for r in traj.records[:-1])
    assert all(r.nu is None for r in traj.records)  # static method


def test_run_eps_f_met():
    traj = quad_run("rn_a", eps_f=1e-10)
    assert traj.termination_reason == "eps_f_met"
    check_structure(traj)
    assert traj.records[-1].f <= 1e-10


def test_run_second_order_met_by_tolerance():
    traj = quad_run("rn_a", eps_1=1e-8, eps_2=1e-8)
    assert traj.termination_reason == "second_order_met"
    check_structure(traj)
    last = traj.records[-1]
    assert last.grad_norm <= 1e-8 and last.lambda_minus <= 1e-8


def test_run_second_order_met_by_zero_step():
    # Exact stationary PSD point: the cubic model admits no step.
    traj = quad_run("rn", l2=1.0, x0=(0.0, 0.0))
    assert traj.termination_reason == "second_order_met"
    assert len(traj.records) == 1
    assert traj.records[0].region is Region.R1_2  # zero gap


def test_run_stalled_first_order():
    traj = quad_run("rg", l1=3.0, x0=(0.0, 0.0))
    assert traj.termination_reason == "stalled"
    assert len(traj.records) == 1
    assert traj.records[0].step_norm == 0.0


def test_run_stalled_tr_g_at_saddle():
    obj = ro.get_objective("saddle2d")
    cfg = AlgoConfig(algo="tr_g", divergence_floor=-1e6)
    traj = ro.run(obj, cfg, SADDLE_PARAMS, np.zeros(2))
    assert traj.termination_reason == "stalled"
    assert len(traj.records) == 1
    rec = traj.records[0]
    assert rec.region is Region.R2_3 and rec.lambda_minus == 2.0


def test_run_tr_h_escapes_saddle():
    obj = ro.get_objective("saddle2d")
    cfg = AlgoConfig(algo="tr_h", nu0=1.0, divergence_floor=-1e6, max_iters=3)
    traj = ro.run(obj, cfg, SADDLE_PARAMS, np.zeros(2))
    first = traj.records[0]
    assert first.accepted
    assert first.delta == 2.0  # lambda_minus / nu at a flat point
    assert traj.records[1].f == pytest.approx(10.0 - 4.0, abs=1e-12)


def test_run_max_iters():
    traj = quad_run("rg", l1=3.0, max_iters=7)
    assert traj.termination_reason == "max_iters"
    assert len(traj.records) == 8
    assert traj.records[-1].k == 7
    check_structure(traj)


def test_run_diverged():
    obj = ro.get_objective("saddle2d")
    cfg = AlgoConfig(algo="rg", l1=4.0, divergence_floor=-50.0)
    traj = ro.run(obj, cfg, SADDLE_PARAMS, np.array([0.0, 1.0]))
    assert traj.termination_reason == "diverged"
    check_structure(traj)
    assert traj.records[-1].f < -50.0
    # Escape along the negative-curvature axis multiplies y by 1.5.
    assert traj.records[1].x[1] == pytest.approx(1.5, abs=1e-15)


def test_run_rejection_chain_doubles_nu():
    traj = quad_run("rg_a", max_iters=50, eps_1=1e-3)
    rejected = [r for r in traj.records[:-1] if not r.accepted]
    assert rejected, "nu0 = nu_min must start with rejections"
    # The opening run of rejections doubles nu and freezes the iterate.
    k = 0
    while not traj.records[k].accepted:
        r = traj.records[k]
        assert r.nu == pytest.approx(1e-3 * 2.0**k)
        assert np.array_equal(r.x, traj.records[0].x)
        k += 1
    # Acceptance needs roughly nu ~ curvature; bound the search length.
    assert k <= math.ceil(math.log2(1.5 / 1e-3)) + 1


def test_run_nu_reset_modes():
    clamp = quad_run("rg_a", nu_reset="clamp", max_iters=60, eps_1=1e-3)
    reset = quad_run("rg_a", nu_reset="reset_min", max_iters=60, eps_1=1e-3)
    k_first = next(i for i, r in enumerate(clamp.records) if r.accepted)
    nu_star = clamp.records[k_first].nu
    # clamp: the next trial reuses the accepted weight.
    assert clamp.records[k_first + 1].nu == nu_star
    # reset_min: the next trial starts over at nu_min.
    k_first_r = next(i for i, r in enumerate(reset.records) if r.accepted)
    assert reset.records[k_first_r + 1].nu == 1e-3
    # reset_min therefore pays for more rejections overall.
    assert sum(not r.accepted for r in reset.records) >= sum(
        not r.accepted for r in clamp.records
    )


def test_run_validation_errors():
    quad = ro.get_objective("quad_sc")
    saddle = ro.get_objective("saddle2d")
    cubic = ro.get_objective("cubic2d")
    with pytest.raises(ValueError, match="l1 > 1.5"):
        ro.run(quad, AlgoConfig(algo="rg", l1=1.5), QUAD_PARAMS, np.ones(2))
    with pytest.raises(ValueError, match="l2 > 3.0"):
        ro.run(
            cubic,
            AlgoConfig(algo="rn", l2=3.0, divergence_floor=-1e6),
            SADDLE_PARAMS,
            np.ones(2),
        )
    with pytest.raises(ValueError, match="infimum"):
        ro.run(
            saddle,
            AlgoConfig(algo="rg", l1=4.0, eps_f=1e-6, divergence_floor=-1e6),
            SADDLE_PARAMS,
            np.ones(2),
        )
    with pytest.raises(ValueError, match="divergence_floor"):
        ro.run(saddle, AlgoConfig(algo="rg", l1=4.0), SADDLE_PARAMS, np.ones(2))
    with pytest.raises(ValueError, match="dimension"):
        ro.run(quad, AlgoConfig(algo="rg", l1=3.0), QUAD_PARAMS, np.ones(3))


def test_run_deterministic():
    a = quad_run("tr_h", eps_1=1e-8, max_iters=200)
    b = quad_run("tr_h", eps_1=1e-8, max_iters=200)
    assert ro.trajectory_to_csv(a) == ro.trajectory_to_csv(b)
    assert ro.trajectory_to_json(a) == ro.trajectory_to_json(b)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def test_csv_layout_and_precision(tmp_path):
    traj = quad_run("rg_a", max_iters=30, eps_1=1e-4)
    text = ro.trajectory_to_csv(traj)
    lines = text.strip().split("\n")
    assert lines[0] == "k,x0,x1,f,grad_norm,lambda_minus,nu,delta,step_norm,accepted,region,delta_f"
    assert len(lines) == 1 + len(traj.records)
    first = lines[1].split(",")
    assert first[0] == "0"
    assert float(first[3]) == traj.records[0].f  # %.17g round-trips exactly
    assert first[5] == ""  # first-order method records no curvature
    assert first[7] == ""  # and no radius
    assert first[9] in ("true", "false")
    assert first[10] == traj.records[0].region.value
    # path mode writes the identical bytes
    p = tmp_path / "t.csv"
    assert ro.trajectory_to_csv(traj, p) is None
    assert p.read_text() == text


def test_json_round_trip_is_lossless(tmp_path):
    traj = quad_run("tr_h", max_iters=40, eps_1=1e-6)
    text = ro.trajectory_to_json(traj)
    back = ro.trajectory_from_json(text)
    assert ro.trajectory_to_json(back) == text
    assert back.objective == traj.objective
    assert back.config == traj.config
    assert back.termination_reason == traj.termination_reason
    assert len(back.records) == len(traj.records)
    for a, b in zip(traj.records, back.records):
        assert a.f == b.f and a.grad_norm == b.grad_norm
        assert np.array_equal(a.x, b.x)
        assert a.region is b.region
    # File and handle sources parse identically.
    p = tmp_path / "t.json"
    ro.trajectory_to_json(traj, p)
    assert ro.trajectory_to_json(ro.trajectory_from_json(str(p))) == text
    with open(p) as fh:
        assert ro.trajectory_to_json(ro.trajectory_from_json(fh)) == text


def test_json_schema_errors():
    traj = quad_run("rg_a", max_iters=2)
    good = ro.trajectory_to_json(traj)
    with pytest.raises(SchemaError, match="not valid JSON"):
        ro.trajectory_from_json("{broken")
    with pytest.raises(SchemaError, match="schema_version"):
        ro.trajectory_from_json(good.replace('"schema_version": 1', '"schema_version": 2'))
    with pytest.raises(SchemaError, match="missing fields"):
        ro.trajectory_from_json('{"schema_version": 1}')
    with pytest.raises(SchemaError, match="termination"):
        ro.trajectory_from_json(
            good.replace('"termination_reason": "max_iters"', '"termination_reason": "gave_up"')
        )
    with pytest.raises(SchemaError, match="malformed"):
        ro.trajectory_from_json(good.replace('"algo": "rg_a"', '"algo": "bogus"'))
    assert issubclass(SchemaError, ValueError)
