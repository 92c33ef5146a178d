"""Post-run verification of decrease guarantees against recorded trajectories.

Given an immutable trajectory, this module calibrates the decrease
constant and window length of the method, evaluates the matching rate
template at every window, counts tolerance-driven iteration sets, and
collects everything into a serializable report.  Verification is a pure
pass over the records; nothing is re-evaluated on the objective.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .algorithms import ALGORITHMS, Trajectory
from .bounds import (
    AlgoClass,
    RateBound,
    RateContext,
    contemporary_bound,
    rate_template,
)
from .objectives import get_objective
from .regions import Region, RegionParams

__all__ = [
    "RateCheck",
    "VerificationReport",
    "count_Kf",
    "calibrate_zeta_m",
    "verify_run",
    "envelope_compare",
]

SCHEMA_VERSION = 1

# Absolute slack on ratio comparisons; covers float noise only.
RATIO_SLACK = 1e-10

# Which decrease hypotheses a method can be checked against.
_CLASSES_BY_ALGO = {
    "rg": (AlgoClass.GRAD,),
    "rg_a": (AlgoClass.GRAD,),
    "tr_g": (AlgoClass.GRAD,),
    "tr_h": (AlgoClass.GRAD, AlgoClass.CURVATURE),
    "rn": (AlgoClass.NEWTON, AlgoClass.CURVATURE),
    "rn_a": (AlgoClass.NEWTON, AlgoClass.CURVATURE),
}

_NEWTON_ALGOS = ("rn", "rn_a")


def count_Kf(traj: Trajectory, eps_f: float, f_inf: float) -> int:
    """Number of recorded iterations with f_k - f_inf > eps_f."""
    if f_inf is None or not math.isfinite(f_inf):
        raise ValueError("f_inf must be a known finite value")
    eps = float(eps_f)
    if not (math.isfinite(eps) and eps > 0):
        raise ValueError("eps_f must be a positive finite real")
    return sum(1 for r in traj.records if r.f - f_inf > eps)


def _coerce_class(algo_class) -> AlgoClass:
    if isinstance(algo_class, AlgoClass):
        return algo_class
    if isinstance(algo_class, str):
        for member in AlgoClass:
            if member.value == algo_class or member.name == algo_class.upper():
                return member
        raise ValueError(
            f"unknown algorithm class {algo_class!r}; expected one of "
            f"{[m.value for m in AlgoClass]}"
        )
    raise TypeError("algo_class must be an AlgoClass or its name")


def _m_hat(records) -> int:
    # The final record is a terminal marker, not an attempted step; the
    # trailing rejection run still counts so that every m_hat-iteration
    # window contains an acceptance.
    longest = run = 0
    for r in records[:-1]:
        if r.accepted:
            longest = max(longest, run)
            run = 0
        else:
            run += 1
    return 1 + max(longest, run)


def _window_measure(algo_class: AlgoClass, start, end):
    """Decrease measure the class inequality divides by zeta."""
    if algo_class is AlgoClass.GRAD:
        return start.grad_norm**2
    if algo_class is AlgoClass.NEWTON:
        return end.grad_norm**1.5
    if algo_class is AlgoClass.CURVATURE:
        if start.lambda_minus is None:
            return None
        return start.lambda_minus**3
    raise ValueError(
        "calibration supports the gradient, endpoint, and curvature classes only"
    )


def calibrate_zeta_m(traj: Trajectory, algo_class) -> dict:
    """Smallest empirical (zeta_hat, m_hat) making the class inequality hold.

    m_hat is one plus the longest observed consecutive-rejection run, so
    every window of m_hat raw iterations contains an accepted step.
    zeta_hat is the largest measure/decrease ratio over all windows,
    hence the smallest constant for which the decrease inequality of the
    class holds at every applicable window of this trajectory.
    """
    cls = _coerce_class(algo_class)
    records = traj.records
    if not any(r.accepted for r in records):
        raise ValueError("calibration requires at least one accepted step")
    m_hat = _m_hat(records)
    ratios = []
    for i in range(len(records) - m_hat):
        start, end = records[i], records[i + m_hat]
        decrease = start.f - end.f
        if decrease <= 0:
            continue
        measure = _window_measure(cls, start, end)
        if measure is None or measure <= 0:
            continue
        ratios.append(measure / decrease)
    if not ratios:
        raise ValueError(
            "no window with positive decrease and positive measure; cannot "
            f"calibrate zeta for {cls.value}"
        )
    return {"zeta_hat": max(ratios), "m_hat": m_hat}


@dataclass(frozen=True)
class RateCheck:
    """One m-step window compared against its rate template."""

    k: int
    region: str
    predicted: RateBound
    observed_ratio: float
    satisfied: bool | None  # None when the template is inapplicable

    def to_dict(self) -> dict:
        out = {"k": self.k, "region": self.region, "observed_ratio": self.observed_ratio,
               "satisfied": self.satisfied}
        out.update(self.predicted.to_dict())
        return out


@dataclass
class VerificationReport:
    trajectory_id: str
    objective: str
    algo: str
    per_iteration_checks: list
    calibrated: dict
    kf_counts: dict
    contemporary: dict
    violations: list
    notes: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def coverage(self) -> dict:
        applicable = [c for c in self.per_iteration_checks if c.predicted.applicable]
        return {
            "checks": len(self.per_iteration_checks),
            "applicable": len(applicable),
            "satisfied": sum(1 for c in applicable if c.satisfied),
        }

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "trajectory_id": self.trajectory_id,
            "objective": self.objective,
            "algo": self.algo,
            "calibrated": self.calibrated,
            "coverage": self.coverage(),
            "per_iteration_checks": [c.to_dict() for c in self.per_iteration_checks],
            "kf_counts": self.kf_counts,
            "contemporary": self.contemporary,
            "violations": self.violations,
            "notes": self.notes,
        }

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
        if path is None:
            return text
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        return None

    def summary_csv(self, path=None):
        """Per-check summary table (schema v1)."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["k", "region", "applicable", "regime", "ratio_bound", "observed_ratio", "satisfied"]
        )
        for c in self.per_iteration_checks:
            writer.writerow(
                [
                    c.k,
                    c.region,
                    "true" if c.predicted.applicable else "false",
                    c.predicted.regime or "",
                    "" if c.predicted.ratio_bound is None else "%.17g" % c.predicted.ratio_bound,
                    "%.17g" % c.observed_ratio,
                    "" if c.satisfied is None else ("true" if c.satisfied else "false"),
                ]
            )
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        return None


# Measure certifying each subregion label: the exponent is the one the
# label's own domination test uses, so kappa_hat keeps that exact test
# valid rather than mere region membership.
_LABEL_MEASURE = {
    Region.R1_1: lambda r: r.grad_norm,
    Region.R1_2: lambda r: r.grad_norm**2,
    Region.R2_1: lambda r: r.lambda_minus or 0.0,
    Region.R2_2: lambda r: (r.lambda_minus or 0.0) ** 2,
    Region.R2_3: lambda r: (r.lambda_minus or 0.0) ** 3,
}


def _kappa_hat(records) -> float | None:
    """Largest kappa certified by every labeled record with a positive gap.

    Each record's subregion label asserts one domination inequality
    (gradient or curvature power over gap); the minimum of those
    certifying ratios keeps every recorded label valid, so the templates
    evaluated with this kappa are backed by the trajectory itself.
    """
    best = math.inf
    for r in records:
        if r.delta_f <= 0:
            continue
        measure_of = _LABEL_MEASURE.get(r.region)
        if measure_of is None:
            continue
        measure = measure_of(r)
        if measure <= 0:
            continue
        best = min(best, measure / r.delta_f)
    return None if math.isinf(best) else best


def _select_template(start, end, contexts):
    """Pick the decrease hypothesis for one window and evaluate it.

    The start label routes curvature-dominated windows to the curvature
    template; cubic-model methods are otherwise checked against the
    endpoint template (whose region argument is the window-end label),
    and the remaining methods against the start-point gradient template.
    """
    start_region = start.region
    df = start.delta_f
    if start_region.in_r2 and AlgoClass.CURVATURE in contexts:
        return start_region.value, rate_template(start_region, contexts[AlgoClass.CURVATURE], df)
    if AlgoClass.NEWTON in contexts:
        return end.region.value, rate_template(end.region, contexts[AlgoClass.NEWTON], df)
    return start_region.value, rate_template(start_region, contexts[AlgoClass.GRAD], df)


def verify_run(
    traj: Trajectory,
    region_params: RegionParams | None = None,
    ctx_override: dict | None = None,
    *,
    use_recommended: bool = False,
    eps_1: float = 1e-3,
    eps_2: float = 1e-3,
    kf_eps=None,
) -> VerificationReport:
    """Check every recorded m-step window against its rate template.

    kappa defaults to the largest value certified by the trajectory's
    own labels (use_recommended switches to the corpus value); zeta and
    m come from the analytic constant when one exists (plain gradient
    steps admit zeta = 2*l1 with m = 1) and are otherwise calibrated
    from the run and labeled empirical.  ctx_override may pin any of
    kappa, zeta, m.  Returns the full report; violations list every
    applicable check whose observed ratio exceeds its bound, plus any
    monotonicity or gap-consistency faults in the records themselves.
    """
    records = traj.records
    if not records:
        raise ValueError("trajectory has no records")
    if any(r.region is None for r in records):
        raise ValueError("trajectory records are missing region labels")
    if traj.algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {traj.algo!r} in trajectory")
    params = region_params if region_params is not None else traj.region_params
    override = dict(ctx_override or {})

    notes: list[str] = []
    violations: list[dict] = []

    # Record-integrity scan: accepted steps only ever decrease f, and
    # each stored gap must match f - f_ref.  A tampered file fails here
    # even where no template applies.
    for prev, cur in zip(records, records[1:]):
        slack = 1e-9 * max(1.0, abs(prev.f))
        if cur.f > prev.f + slack:
            violations.append(
                {
                    "kind": "monotonicity",
                    "k": cur.k,
                    "f_previous": prev.f,
                    "f_current": cur.f,
                }
            )
    for r in records:
        expected = r.f - params.f_ref
        if abs(r.delta_f - expected) > 1e-9 * max(1.0, abs(expected)):
            violations.append(
                {
                    "kind": "gap-consistency",
                    "k": r.k,
                    "delta_f_recorded": r.delta_f,
                    "delta_f_expected": expected,
                }
            )

    # kappa: trajectory-certified by default.
    if "kappa" in override:
        kappa = float(override["kappa"])
        kappa_source = "override"
    elif use_recommended:
        kappa = get_objective(traj.objective).recommended_kappa
        if kappa is None:
            raise ValueError(
                f"objective {traj.objective!r} has no recommended kappa; "
                "pass ctx_override or drop use_recommended"
            )
        kappa_source = "corpus recommendation"
    else:
        kappa = _kappa_hat(records)
        kappa_source = "trajectory-certified (minimum labeled measure/gap ratio)"
        if kappa is None:
            kappa = params.kappa
            kappa_source = "run region parameters (no labeled record with positive gap)"

    # zeta, m: analytic for plain gradient steps, else empirical.
    classes = _CLASSES_BY_ALGO[traj.algo]
    if "m" in override:
        m_hat = int(override["m"])
    elif traj.algo == "rg":
        m_hat = 1
    else:
        m_hat = _m_hat(records)
    if "zeta" in override:
        zeta = float(override["zeta"])
        zeta_source = "override"
    elif traj.algo == "rg":
        zeta = 2.0 * traj.config.l1
        zeta_source = "analytic (2*l1)"
    else:
        estimates = []
        for cls in classes:
            try:
                estimates.append(calibrate_zeta_m(traj, cls)["zeta_hat"])
            except ValueError:
                continue
        if not estimates:
            raise ValueError(
                "no decrease window available to calibrate zeta; trajectory has "
                "no accepted progress"
            )
        zeta = max(estimates)
        zeta_source = "calibrated (empirical; not a certified analytic constant)"
    if zeta < kappa:
        # Linear factors need zeta >= kappa; enlarging zeta only loosens
        # every template, so the checks stay sound.
        notes.append(
            f"calibrated zeta {zeta:.12g} below kappa {kappa:.12g}; "
            "zeta raised to kappa for template evaluation"
        )
        zeta = kappa

    f0_gap = records[0].delta_f
    contexts = {}
    for cls in classes:
        contexts[cls] = RateContext(
            cls, kappa=kappa, zeta=zeta, m=m_hat,
            f0_gap=f0_gap if f0_gap > 0 else None,
        )

    checks: list[RateCheck] = []
    applicable_any = False
    for i in range(len(records) - m_hat):
        start, end = records[i], records[i + m_hat]
        if start.delta_f <= 0:
            continue
        observed = end.delta_f / start.delta_f
        region_used, bound = _select_template(start, end, contexts)
        satisfied = None
        if bound.applicable:
            applicable_any = True
            satisfied = observed <= bound.ratio_bound + RATIO_SLACK
            if not satisfied:
                violations.append(
                    {
                        "kind": "ratio",
                        "k": start.k,
                        "region": region_used,
                        "observed_ratio": observed,
                        "ratio_bound": bound.ratio_bound,
                        "regime": bound.regime,
                    }
                )
        checks.append(RateCheck(start.k, region_used, bound, observed, satisfied))
    if checks and not applicable_any:
        notes.append("zero coverage: no recorded window admits an applicable template")

    obj = get_objective(traj.objective)

    # Tolerance-set counts, with a linear-phase prediction only when the
    # whole trajectory is certified linear against the infimum gap.
    kf_counts: dict = {}
    if obj.f_inf is None:
        notes.append("kf_counts skipped: objective has no known infimum")
    else:
        df0_inf = records[0].f - obj.f_inf
        if kf_eps is None:
            kf_eps = tuple(df0_inf * s for s in (1e-2, 1e-4, 1e-6)) if df0_inf > 0 else ()
        applicable = [c for c in checks if c.predicted.applicable]
        all_linear = (
            bool(applicable)
            and all(c.predicted.regime == "linear" for c in applicable)
            and abs(params.f_ref - obj.f_inf) <= 1e-12
        )
        xi_used = max((c.predicted.ratio_bound for c in applicable), default=None) if all_linear else None
        for eps in kf_eps:
            entry = {"observed": count_Kf(traj, eps, obj.f_inf)}
            if xi_used is not None and 0 < xi_used < 1 and df0_inf > eps:
                entry["predicted_bound"] = int(
                    math.ceil(m_hat * math.log(df0_inf / eps) / (-math.log(xi_used)))
                )
                entry["predicted_form"] = (
                    "ceil(m*log(delta_f0/eps_f)/(-log xi)) with "
                    f"xi={xi_used:.12g} (weakest certified linear factor)"
                )
            else:
                entry["predicted_bound"] = None
            kf_counts["%.12g" % eps] = entry
        if xi_used is None and kf_eps:
            notes.append(
                "kf_counts carry no prediction: a closed-form count needs every "
                "applicable check linear and f_ref equal to the infimum"
            )

    # Contemporary tolerance-set comparison (order-constant-free values).
    df0 = records[0].f - obj.f_inf if obj.f_inf is not None else records[0].delta_f
    cb = contemporary_bound(traj.algo, eps_1, eps_2, max(df0, 0.0))
    lam_known = all(r.lambda_minus is not None for r in records)
    contemporary = {
        "eps_1": eps_1,
        "observed_K1": sum(1 for r in records if r.grad_norm > eps_1),
        "K1_bound_constant_free": cb.K1_bound,
        "eps_2": eps_2,
        "observed_K2": (
            sum(1 for r in records if r.lambda_minus > eps_2) if lam_known else None
        ),
        "K2_bound_constant_free": None if math.isinf(cb.K2_bound) else cb.K2_bound,
        "K2_unbounded": math.isinf(cb.K2_bound),
        "note": "bounds are order-constant-free; multiply by the method's "
        "decrease constant before comparing counts",
    }

    calibrated = {
        "kappa": kappa,
        "kappa_source": kappa_source,
        "zeta_hat": zeta,
        "m_hat": m_hat,
        "zeta_source": zeta_source,
    }
    report = VerificationReport(
        trajectory_id=f"{traj.objective}:{traj.algo}:n{len(records)}",
        objective=traj.objective,
        algo=traj.algo,
        per_iteration_checks=checks,
        calibrated=calibrated,
        kf_counts=kf_counts,
        contemporary=contemporary,
        violations=violations,
        notes=notes,
    )
    return report


def envelope_compare(traj: Trajectory, ctx: RateContext) -> list:
    """Forward envelope implied by the templates versus the observed gaps.

    Starting from the recorded initial gap, the envelope multiplies by
    each window's applicable ratio bound (factor one when no template
    applies), sampling the trajectory every ctx.m iterations.  Requires
    the run's reference value to be the objective's infimum so the
    recorded gaps measure true suboptimality.
    """
    obj = get_objective(traj.objective)
    if obj.f_inf is None:
        raise ValueError("envelope comparison requires an objective with known infimum")
    if abs(traj.region_params.f_ref - obj.f_inf) > 1e-12:
        raise ValueError("envelope comparison requires f_ref equal to the infimum")
    records = traj.records
    if not records:
        raise ValueError("trajectory has no records")
    m = ctx.m
    endpoint_region = ctx.algo_class in (AlgoClass.NEWTON, AlgoClass.PCLASS)
    env = records[0].delta_f
    series = [
        {
            "k": records[0].k,
            "delta_f_observed": records[0].delta_f,
            "delta_f_envelope": env,
            "factor": None,
            "regime": None,
        }
    ]
    i = 0
    while i + m < len(records):
        start, end = records[i], records[i + m]
        factor, regime = 1.0, None
        if start.delta_f > 0:
            region = end.region if endpoint_region else start.region
            bound = rate_template(region, ctx, start.delta_f)
            if bound.applicable:
                factor, regime = bound.ratio_bound, bound.regime
        env *= factor
        series.append(
            {
                "k": end.k,
                "delta_f_observed": end.delta_f,
                "delta_f_envelope": env,
                "factor": factor,
                "regime": regime,
            }
        )
        i += m
    return series
