"""Six reference descent methods under one instrumented run loop.

Static methods (rg, rn) take every step; adaptive methods (rg_a, tr_g,
tr_h, rn_a) test each trial step against an eta-fraction of its model
decrease and inflate the regularization weight nu by psi on rejection.
The loop records one row per iteration (rejected trials keep the
current point), classifies every iterate into its region, and stops on
a target-gap, stationarity, stall, divergence, or iteration-cap test.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .objectives import Objective, evaluate
from .regions import Region, RegionParams, classify_witness, FLOAT_FMT
from .subproblems import solve_cubic, solve_tr

Array = np.ndarray

ALGORITHMS = ("rg", "rg_a", "tr_g", "tr_h", "rn", "rn_a")
SECOND_ORDER = frozenset({"tr_g", "tr_h", "rn", "rn_a"})
ADAPTIVE = frozenset({"rg_a", "tr_g", "tr_h", "rn_a"})

TERMINATION_REASONS = (
    "eps_f_met",
    "first_order_met",
    "second_order_met",
    "max_iters",
    "stalled",
    "diverged",
)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """A serialized trajectory does not match the expected layout."""


@dataclass(frozen=True)
class AlgoConfig:
    """Method selection and its parameters.

    l1 is the fixed inverse step size of rg; l2 the fixed cubic weight
    of rn.  eta, psi, nu_min, nu_max, nu0 and nu_reset drive the
    adaptive methods; nu0 defaults to nu_min and nu_reset chooses
    between clamping the previous weight into [nu_min, nu_max] after an
    accepted step ("clamp") and resetting it to nu_min ("reset_min").
    """

    algo: str
    l1: Optional[float] = None
    l2: Optional[float] = None
    eta: float = 0.1
    psi: float = 2.0
    nu_min: float = 1e-3
    nu_max: float = 1e3
    nu0: Optional[float] = None
    nu_reset: str = "clamp"
    max_iters: int = 1000
    eps_f: Optional[float] = None
    eps_1: Optional[float] = None
    eps_2: Optional[float] = None
    divergence_floor: Optional[float] = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose from {ALGORITHMS}")
        if self.algo == "rg" and (self.l1 is None or self.l1 <= 0):
            raise ValueError("rg requires a positive l1")
        if self.algo == "rn" and (self.l2 is None or self.l2 <= 0):
            raise ValueError("rn requires a positive l2")
        if not (0.0 < self.eta < 1.0):
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")
        if self.psi <= 1.0:
            raise ValueError(f"psi must exceed 1, got {self.psi}")
        if not (0.0 < self.nu_min <= self.nu_max):
            raise ValueError("need 0 < nu_min <= nu_max")
        if self.nu0 is not None and not (self.nu_min <= self.nu0 <= self.nu_max):
            raise ValueError("nu0 must lie in [nu_min, nu_max]")
        if self.nu_reset not in ("clamp", "reset_min"):
            raise ValueError(f"nu_reset must be 'clamp' or 'reset_min', got {self.nu_reset!r}")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for name in ("eps_f", "eps_1", "eps_2"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"{name} must be positive when set")
        if self.eps_2 is not None and self.algo not in SECOND_ORDER:
            raise ValueError("eps_2 termination requires a second-order method")


@dataclass(frozen=True)
class IterateRecord:
    """One loop iteration: the current iterate and the step attempted there."""

    k: int
    x: Array
    f: float
    grad_norm: float
    lambda_minus: Optional[float]
    nu: Optional[float]
    delta: Optional[float]
    step_norm: float
    accepted: bool
    model_decrease: float
    region: Region
    delta_f: float


@dataclass
class Trajectory:
    objective: str
    algo: str
    config: AlgoConfig
    region_params: RegionParams
    x0: Array
    records: list
    termination_reason: str


@dataclass(frozen=True)
class _Proposal:
    s: Optional[Array] = None
    model_decrease: float = 0.0
    delta: Optional[float] = None
    unconditional: bool = False
    stall: Optional[str] = None  # termination reason when no step exists


def _propose(algo, cfg, g, H, lam_minus, nu):
    gnorm = float(np.linalg.norm(g))
    if algo == "rg":
        if gnorm == 0.0:
            return _Proposal(stall="stalled")
        s = -g / cfg.l1
        # Guaranteed-majorant decrease of the l1-quadratic model.
        return _Proposal(s, gnorm**2 / (2.0 * cfg.l1), unconditional=True)
    if algo == "rg_a":
        if gnorm == 0.0:
            return _Proposal(stall="stalled")
        return _Proposal(-g / nu, gnorm**2 / (2.0 * nu))
    if algo == "tr_g":
        delta = gnorm / nu
        if delta == 0.0:
            return _Proposal(stall="stalled")
        sol = solve_tr(g, H, delta)
        return _Proposal(sol.s, sol.model_decrease, delta=delta)
    if algo == "tr_h":
        delta = (gnorm if gnorm**2 >= lam_minus**3 else lam_minus) / nu
        if delta == 0.0:
            return _Proposal(stall="stalled")
        sol = solve_tr(g, H, delta)
        return _Proposal(sol.s, sol.model_decrease, delta=delta)
    if algo == "rn":
        sol = solve_cubic(g, H, cfg.l2)
        if float(np.linalg.norm(sol.s)) == 0.0:
            return _Proposal(stall="second_order_met")
        return _Proposal(sol.s, sol.model_decrease, unconditional=True)
    if algo == "rn_a":
        sol = solve_cubic(g, H, nu)
        if float(np.linalg.norm(sol.s)) == 0.0:
            return _Proposal(stall="second_order_met")
        return _Proposal(sol.s, sol.model_decrease)
    raise AssertionError(algo)


def _validate_against_objective(obj: Objective, cfg: AlgoConfig):
    if cfg.algo in SECOND_ORDER:
        if obj.smoothness_order < 2:
            raise ValueError(
                f"{obj.name} lacks second-order smoothness; {cfg.algo} is not applicable"
            )
        if obj.hess is None:
            raise ValueError(f"{obj.name} provides no Hessian; {cfg.algo} is not applicable")
    if cfg.algo == "rg" and obj.lipschitz_g is not None and cfg.l1 <= obj.lipschitz_g:
        raise ValueError(
            f"rg needs l1 > {obj.lipschitz_g} (gradient Lipschitz constant of {obj.name})"
        )
    if cfg.algo == "rn" and obj.lipschitz_h is not None and cfg.l2 <= obj.lipschitz_h / 2.0:
        raise ValueError(
            f"rn needs l2 > {obj.lipschitz_h / 2.0} (half the Hessian Lipschitz constant of {obj.name})"
        )
    if cfg.eps_f is not None and obj.f_inf is None:
        raise ValueError("eps_f termination requires an objective with a known infimum")
    if "unbounded-below" in obj.tags and cfg.divergence_floor is None:
        raise ValueError(f"{obj.name} is unbounded below; set divergence_floor")


def run(obj: Objective, config: AlgoConfig, region_params: RegionParams, x0) -> Trajectory:
    """Drive one method from x0 and record every iteration.

    Derivatives are evaluated once per visited point and reused across
    rejected trials.  Acceptance always compares the actual decrease
    against eta times the model decrease reported by the step rule.
    """
    _validate_against_objective(obj, config)
    x = np.asarray(x0, dtype=float)
    if x.shape != (obj.n,):
        raise ValueError(f"x0 must have dimension {obj.n}, got shape {x.shape}")
    algo = config.algo
    nu = config.nu0 if config.nu0 is not None else config.nu_min
    records: list = []
    reason = None

    need_eval = True
    f = gnorm = None
    g = H = lam_minus = region = None
    while True:
        k = len(records)
        if need_eval:
            ev = evaluate(obj, x, order=1)
            f, g = ev.f, ev.g
            gnorm = float(np.linalg.norm(g))
            H = lam_minus = None
            if algo in SECOND_ORDER:
                H = evaluate(obj, x, order=2).H
                lam_minus = max(0.0, -float(np.linalg.eigvalsh(H)[0]))
            delta_f = f - region_params.f_ref
            region = classify_witness(delta_f, gnorm, lam_minus, region_params)
            if region is Region.UNKNOWN and obj.hess is not None:
                H = evaluate(obj, x, order=2).H
                lam_minus = max(0.0, -float(np.linalg.eigvalsh(H)[0]))
                region = classify_witness(delta_f, gnorm, lam_minus, region_params)
            need_eval = False
        delta_f = f - region_params.f_ref

        def record(step_norm, accepted, model_decrease, delta, nu_used):
            records.append(
                IterateRecord(
                    k=k,
                    x=x.copy(),
                    f=f,
                    grad_norm=gnorm,
                    lambda_minus=lam_minus,
                    nu=nu_used if algo in ADAPTIVE else None,
                    delta=delta,
                    step_norm=step_norm,
                    accepted=accepted,
                    model_decrease=model_decrease,
                    region=region,
                    delta_f=delta_f,
                )
            )

        # Termination tests on the current iterate.
        if not np.isfinite(f) or (
            config.divergence_floor is not None and f < config.divergence_floor
        ):
            record(0.0, False, 0.0, None, nu)
            reason = "diverged"
            break
        if config.eps_f is not None and f - obj.f_inf <= config.eps_f:
            record(0.0, False, 0.0, None, nu)
            reason = "eps_f_met"
            break
        if (
            config.eps_1 is not None
            and config.eps_2 is not None
            and gnorm <= config.eps_1
            and lam_minus is not None
            and lam_minus <= config.eps_2
        ):
            record(0.0, False, 0.0, None, nu)
            reason = "second_order_met"
            break
        if config.eps_1 is not None and config.eps_2 is None and gnorm <= config.eps_1:
            record(0.0, False, 0.0, None, nu)
            reason = "first_order_met"
            break
        if k >= config.max_iters:
            record(0.0, False, 0.0, None, nu)
            reason = "max_iters"
            break

        prop = _propose(algo, config, g, H, lam_minus, nu)
        if prop.stall is not None:
            record(0.0, False, 0.0, prop.delta, nu)
            reason = prop.stall
            break

        x_trial = x + prop.s
        f_trial = float(obj.f(x_trial))
        decrease = f - f_trial
        accepted = prop.unconditional or decrease >= config.eta * prop.model_decrease
        record(float(np.linalg.norm(prop.s)), accepted, prop.model_decrease, prop.delta, nu)
        if accepted:
            x = x_trial
            need_eval = True
            if algo in ADAPTIVE:
                if config.nu_reset == "reset_min":
                    nu = config.nu_min
                else:
                    nu = min(max(nu, config.nu_min), config.nu_max)
        else:
            nu = config.psi * nu

    return Trajectory(
        objective=obj.name,
        algo=algo,
        config=config,
        region_params=region_params,
        x0=np.asarray(x0, dtype=float),
        records=records,
        termination_reason=reason,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

CSV_COLUMNS = "k,x,f,grad_norm,lambda_minus,nu,delta,step_norm,accepted,region,delta_f"


def _fmt(value) -> str:
    if value is None:
        return ""
    return FLOAT_FMT % value


def trajectory_to_csv(traj: Trajectory, path=None) -> Optional[str]:
    """Write records as CSV (17 significant digits); returns text if path is None."""
    n = int(traj.x0.shape[0])
    buf = io.StringIO()
    header = (
        ["k"]
        + [f"x{i}" for i in range(n)]
        + ["f", "grad_norm", "lambda_minus", "nu", "delta", "step_norm", "accepted", "region", "delta_f"]
    )
    buf.write(",".join(header) + "\n")
    for r in traj.records:
        row = [str(r.k)]
        row += [_fmt(v) for v in r.x]
        row += [
            _fmt(r.f),
            _fmt(r.grad_norm),
            _fmt(r.lambda_minus),
            _fmt(r.nu),
            _fmt(r.delta),
            _fmt(r.step_norm),
            "true" if r.accepted else "false",
            r.region.value,
            _fmt(r.delta_f),
        ]
        buf.write(",".join(row) + "\n")
    text = buf.getvalue()
    if path is None:
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return None


def trajectory_to_json(traj: Trajectory, path=None) -> Optional[str]:
    """Serialize a trajectory (schema_version 1); returns text if path is None."""
    payload = {
        "schema_version": SCHEMA_VERSION,
        "objective": traj.objective,
        "algo": traj.algo,
        "config": asdict(traj.config),
        "region_params": {"kappa": traj.region_params.kappa, "f_ref": traj.region_params.f_ref},
        "x0": [float(v) for v in traj.x0],
        "termination_reason": traj.termination_reason,
        "records": [
            {
                "k": r.k,
                "x": [float(v) for v in r.x],
                "f": r.f,
                "grad_norm": r.grad_norm,
                "lambda_minus": r.lambda_minus,
                "nu": r.nu,
                "delta": r.delta,
                "step_norm": r.step_norm,
                "accepted": r.accepted,
                "model_decrease": r.model_decrease,
                "region": r.region.value,
                "delta_f": r.delta_f,
            }
            for r in traj.records
        ],
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return None


def trajectory_from_json(source) -> Trajectory:
    """Parse a trajectory serialized by ``trajectory_to_json``.

    ``source`` is a JSON string or a path.  Layout problems raise
    SchemaError so callers can distinguish bad input from bad content.
    """
    text = source
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and not source.lstrip().startswith("{"):
        with open(source) as fh:
            text = fh.read()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"expected schema_version {SCHEMA_VERSION}")
    required = {"objective", "algo", "config", "region_params", "x0", "termination_reason", "records"}
    missing = required - payload.keys()
    if missing:
        raise SchemaError(f"missing fields: {sorted(missing)}")
    try:
        config = AlgoConfig(**payload["config"])
        params = RegionParams(**payload["region_params"])
        records = []
        for rec in payload["records"]:
            records.append(
                IterateRecord(
                    k=int(rec["k"]),
                    x=np.asarray(rec["x"], dtype=float),
                    f=float(rec["f"]),
                    grad_norm=float(rec["grad_norm"]),
                    lambda_minus=None if rec["lambda_minus"] is None else float(rec["lambda_minus"]),
                    nu=None if rec["nu"] is None else float(rec["nu"]),
                    delta=None if rec["delta"] is None else float(rec["delta"]),
                    step_norm=float(rec["step_norm"]),
                    accepted=bool(rec["accepted"]),
                    model_decrease=float(rec["model_decrease"]),
                    region=Region(rec["region"]),
                    delta_f=float(rec["delta_f"]),
                )
            )
        reason = payload["termination_reason"]
        if reason not in TERMINATION_REASONS:
            raise KeyError(f"unknown termination reason {reason!r}")
        return Trajectory(
            objective=str(payload["objective"]),
            algo=str(payload["algo"]),
            config=config,
            region_params=params,
            x0=np.asarray(payload["x0"], dtype=float),
            records=records,
            termination_reason=reason,
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"malformed trajectory payload: {exc}") from exc
