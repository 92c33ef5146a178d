"""Per-window decrease ratio templates and iteration-complexity bounds.

Each rate template reports a certified upper bound on the suboptimality
ratio (f_{k+m} - f_ref) / (f_k - f_ref) for one algorithm class at one
landscape label, together with the regime (linear, superlinear, or
sublinear) that the bound realizes.  The complexity counters invert the
templates into explicit iteration counts with every constant
instantiated; order-notation forms are carried alongside and labeled so
reports can show both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, unique

from .algorithms import ALGORITHMS
from .regions import Region, RegionLabel

__all__ = [
    "AlgoClass",
    "RateContext",
    "RateBound",
    "BoundPhase",
    "ComplexityBound",
    "ContemporaryBound",
    "FUNCTION_CLASSES",
    "REGIMES",
    "rate_template",
    "xi_linear_factor",
    "complexity_bound",
    "contemporary_bound",
]

REGIMES = ("linear", "sublinear", "superlinear")

# Landscape classes: objective families named by which labels cover all
# points above the reference value.
FUNCTION_CLASSES = ("gH_23", "gH_11", "gd_2", "gd_1")

# Methods with a guaranteed decrease on curvature-only points.  The
# remaining methods scale their step with ||g|| and can step zero at a
# point where the gradient vanishes but negative curvature remains, so
# no progress guarantee exists for them on the gH landscapes.
_CURVATURE_CAPABLE = ("tr_h", "rn", "rn_a")

_NEWTON_ALGOS = ("rn", "rn_a")

# Relative slack subtracted before ceil() so that exact-power inputs do
# not round up by a full window through float noise.
_CEIL_FUZZ = 1e-12


@unique
class AlgoClass(Enum):
    """Decrease-hypothesis family a rate template certifies."""

    GRAD = "GradClass"
    NEWTON = "NewtonClass"
    CURVATURE = "CurvatureClass"
    PCLASS = "PClass"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class RateContext:
    """Constants shared by every template evaluation.

    kappa is the landscape constant, zeta the decrease constant of the
    method (an input here; adaptive methods only admit existence proofs
    for it, so the harness calibrates it), m the window length in
    iterations, and f0_gap the starting suboptimality needed by the
    endpoint linear branch.  PClass contexts carry the derivative order
    p; the other classes must leave p unset.
    """

    algo_class: AlgoClass
    kappa: float
    zeta: float
    m: int = 1
    f0_gap: float | None = None
    p: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.algo_class, AlgoClass):
            raise TypeError("algo_class must be an AlgoClass member")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise ValueError("kappa must be a positive finite real")
        if not (math.isfinite(self.zeta) and self.zeta > 0):
            raise ValueError("zeta must be a positive finite real")
        if not (isinstance(self.m, int) and self.m >= 1):
            raise ValueError("m must be a positive integer")
        if self.f0_gap is not None:
            if not (math.isfinite(self.f0_gap) and self.f0_gap >= 0):
                raise ValueError("f0_gap must be a nonnegative finite real")
        if self.algo_class is AlgoClass.PCLASS:
            if not (isinstance(self.p, int) and self.p >= 1):
                raise ValueError("PClass contexts require an integer order p >= 1")
        elif self.p is not None:
            raise ValueError("p is only meaningful for PClass contexts")


@dataclass(frozen=True)
class RateBound:
    """Outcome of one template evaluation.

    ratio_bound lies in (0, 1] whenever applicable; reason states the
    threshold branch taken, or why no bound is emitted.
    """

    applicable: bool
    ratio_bound: float | None
    regime: str | None
    reason: str

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "ratio_bound": self.ratio_bound,
            "regime": self.regime,
            "reason": self.reason,
        }


def _inapplicable(reason: str) -> RateBound:
    return RateBound(applicable=False, ratio_bound=None, regime=None, reason=reason)


def _require_zeta_dominates(ctx: RateContext) -> None:
    # Keeps 1 - kappa/zeta (and the sublinear variants) inside [0, 1).
    if ctx.zeta < ctx.kappa:
        raise ValueError(
            "zeta must be at least kappa for gradient/curvature decrease factors"
        )


def _coerce_region(region) -> Region:
    if isinstance(region, RegionLabel):
        return region.region
    if isinstance(region, Region):
        return region
    if isinstance(region, str):
        try:
            return Region(region)
        except ValueError:
            raise ValueError(
                f"unknown region label {region!r}; expected one of "
                f"{[r.value for r in Region]}"
            ) from None
    raise TypeError(
        "region must be a Region, RegionLabel, label string, or (p, q) pair"
    )


def rate_template(region, ctx: RateContext, delta_f_k: float) -> RateBound:
    """Evaluate the decrease-ratio template for one labeled point.

    region is a Region, RegionLabel, label string, or a (p, q) pair
    naming an order-p subregion; ctx fixes the algorithm class and
    constants; delta_f_k is the current gap f_k - f_ref.  Returns a
    RateBound whose ratio bounds Δf_{k+m}/Δf_k from above when the
    (region, class) pairing admits a guarantee, and an inapplicable
    record with the reason otherwise.
    """
    if not isinstance(ctx, RateContext):
        raise TypeError("ctx must be a RateContext")
    df = float(delta_f_k)
    if not (math.isfinite(df) and df >= 0):
        raise ValueError("delta_f_k must be a nonnegative finite real")

    if isinstance(region, tuple):
        return _subregion_pair_template(region, ctx, df)

    label = _coerce_region(region)
    if label is Region.BELOW_REF:
        return _inapplicable("point is below the reference value; no gap to contract")
    if label is Region.OUTSIDE:
        return _inapplicable(
            "point is outside the dominated landscape; no decrease guarantee exists"
        )

    if ctx.algo_class is AlgoClass.GRAD:
        return _grad_template(label, ctx, df)
    if ctx.algo_class is AlgoClass.NEWTON:
        return _endpoint_template(label, ctx, df, p=2)
    if ctx.algo_class is AlgoClass.CURVATURE:
        return _curvature_template(label, ctx, df)
    return _pclass_label_template(label, ctx, df)


def _grad_template(label: Region, ctx: RateContext, df: float) -> RateBound:
    if label.in_r2:
        return _inapplicable(
            "a gradient-decrease hypothesis cannot guarantee the performance of a "
            "method at curvature-dominated points"
        )
    if label is Region.UNKNOWN:
        return _inapplicable("label unknown (no curvature witness); nothing to certify")
    _require_zeta_dominates(ctx)
    if label is Region.R1_2:
        return RateBound(
            True,
            1.0 - ctx.kappa / ctx.zeta,
            "linear",
            "degree-2 gradient domination: decrease of ||g||^2/zeta contracts the "
            "gap by 1 - kappa/zeta per window",
        )
    # R1_1 membership forces kappa*df < 1, so the factor stays in (0, 1).
    if ctx.kappa * df >= 1.0:
        return _inapplicable(
            "gap inconsistent with the degree-1 label: kappa*delta_f >= 1 would "
            "place the point in the degree-2 subregion"
        )
    return RateBound(
        True,
        1.0 - (ctx.kappa**2 / ctx.zeta) * df,
        "sublinear",
        "degree-1 gradient domination: factor 1 - (kappa^2/zeta)*delta_f shrinks "
        "as the gap closes",
    )


def _curvature_template(label: Region, ctx: RateContext, df: float) -> RateBound:
    if label.in_r1:
        return _inapplicable(
            "curvature template applies to curvature-dominated labels only; use a "
            "gradient template at gradient-dominated points"
        )
    if label is Region.UNKNOWN:
        return _inapplicable("label unknown (no curvature witness); nothing to certify")
    _require_zeta_dominates(ctx)
    if label is Region.R2_3:
        return RateBound(
            True,
            1.0 - ctx.kappa / ctx.zeta,
            "linear",
            "degree-3 curvature domination: decrease of lambda_minus^3/zeta "
            "contracts the gap by 1 - kappa/zeta per window",
        )
    if ctx.kappa * df >= 1.0:
        return _inapplicable(
            "gap inconsistent with the label: kappa*delta_f >= 1 would place the "
            "point in the degree-3 subregion"
        )
    if label is Region.R2_2:
        return RateBound(
            True,
            1.0 - (ctx.kappa**1.5 / ctx.zeta) * math.sqrt(df),
            "sublinear",
            "degree-2 curvature domination: factor 1 - (kappa^(3/2)/zeta)*sqrt(delta_f)",
        )
    return RateBound(
        True,
        1.0 - (ctx.kappa**3 / ctx.zeta) * df * df,
        "sublinear",
        "degree-1 curvature domination: factor 1 - (kappa^3/zeta)*delta_f^2",
    )


def _endpoint_template(label: Region, ctx: RateContext, df: float, p: int) -> RateBound:
    """Branches for a decrease of ||g_endpoint||^((p+1)/p)/zeta.

    The label must describe the window endpoint, not its start.
    """
    if label.in_r2:
        return _inapplicable(
            "endpoint template covers gradient-dominated endpoints; use the "
            "curvature template for curvature-dominated labels"
        )
    if label is Region.UNKNOWN:
        return _inapplicable("label unknown (no curvature witness); nothing to certify")
    kappa, zeta = ctx.kappa, ctx.zeta
    if label is Region.R1_2:
        # Threshold gap separating the linear and superlinear branches.
        omega = (kappa ** (p + 1) / zeta ** (2 * p)) ** (1.0 / (p - 1))
        if df >= omega:
            if ctx.f0_gap is None or ctx.f0_gap <= 0:
                raise ValueError(
                    "a positive f0_gap is required for the endpoint linear branch"
                )
            root = ctx.f0_gap ** ((p - 1) / (2.0 * p))
            ratio = root / (kappa ** ((p + 1) / (2.0 * p)) / zeta + root)
            return RateBound(
                True,
                ratio,
                "linear",
                f"degree-2 endpoint, large-gap branch (delta_f >= {omega:.12g}): "
                "constant factor driven by the starting gap",
            )
        ratio = (df / omega) ** ((p - 1) / (p + 1.0))
        return RateBound(
            True,
            ratio,
            "superlinear",
            f"degree-2 endpoint, small-gap branch (delta_f < {omega:.12g}): "
            "factor (delta_f/threshold)^((p-1)/(p+1)) vanishes with the gap",
        )
    # Degree-1 endpoint.
    threshold = zeta**p / kappa ** (p + 1)
    if df >= threshold:
        ratio = (threshold / df) ** (1.0 / (p + 1))
        return RateBound(
            True,
            ratio,
            "superlinear",
            f"degree-1 endpoint, large-gap branch (delta_f >= {threshold:.12g})",
        )
    shrink = (2 ** (1.0 / p) - 1.0) / 2 ** (1.0 / p)
    base = 1.0 + (kappa ** ((p + 1.0) / p) / zeta) * shrink * df ** (1.0 / p)
    return RateBound(
        True,
        (1.0 / base) ** p,
        "sublinear",
        f"degree-1 endpoint, small-gap branch (delta_f < {threshold:.12g}): "
        "reciprocal-power factor",
    )


_P1_MISMATCH_NOTE = (
    "order-1 generalized template is not emitted for endpoint labels: the "
    "order-1 window hypothesis certifies a ||g||^4-scaled decrease where the "
    "first-order analysis uses ||g||^2, and the endpoint threshold exponent "
    "1/(p-1) is undefined at p = 1.  The mismatch is reported, not resolved; "
    "use a GradClass context for first-order evidence."
)


def _pclass_label_template(label: Region, ctx: RateContext, df: float) -> RateBound:
    if ctx.p == 1:
        return _inapplicable(_P1_MISMATCH_NOTE)
    return _endpoint_template(label, ctx, df, p=ctx.p)


def _subregion_pair_template(pair: tuple, ctx: RateContext, df: float) -> RateBound:
    if ctx.algo_class is not AlgoClass.PCLASS:
        raise ValueError("(p, q) subregion pairs require a PClass context")
    if len(pair) != 2:
        raise ValueError("subregion pair must be (p, q)")
    p, q = pair
    if not (isinstance(p, int) and isinstance(q, int)):
        raise TypeError("subregion pair entries must be integers")
    if p != ctx.p:
        raise ValueError(f"subregion order p={p} does not match the context (p={ctx.p})")
    if not 1 <= q <= p + 1:
        raise ValueError(f"subregion degree q must lie in [1, {p + 1}], got {q}")
    _require_zeta_dominates(ctx)
    note = ""
    if p == 1:
        # Literal order-1 form; the window hypothesis behind it scales
        # like ||g||^4 rather than the ||g||^2 of the first-order
        # analysis, so the factor is reported with that caveat.
        note = (
            "  Caveat: the order-1 window hypothesis certifies a ||g||^4-scaled "
            "decrease, not the ||g||^2 of the first-order analysis (reported, "
            "not resolved)."
        )
    if q == p + 1:
        return RateBound(
            True,
            1.0 - ctx.kappa / ctx.zeta,
            "linear",
            f"order-{p} measure dominates at degree {q}: factor 1 - kappa/zeta."
            + note,
        )
    if ctx.kappa * df >= 1.0:
        return _inapplicable(
            "gap inconsistent with the subregion: kappa*delta_f >= 1 forces the "
            f"degree-{p + 1} subregion"
        )
    exponent = (p + 1.0 - q) / q
    factor = 1.0 - (ctx.kappa ** ((p + 1.0) / q) / ctx.zeta) * df**exponent
    return RateBound(
        True,
        factor,
        "sublinear",
        f"order-{p} measure dominates at degree {q}: factor "
        f"1 - (kappa^((p+1)/q)/zeta)*delta_f^((p+1-q)/q)." + note,
    )


def xi_linear_factor(algo: str, kappa: float, zeta: float, f0_gap: float | None = None) -> float:
    """Linear contraction factor of the initial phase for one method.

    Gradient- and radius-driven methods contract by 1 - kappa/zeta per
    window.  The cubic-model methods can do no better than the larger
    of that factor and the endpoint linear factor, which depends on the
    starting gap.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    if not (math.isfinite(kappa) and kappa > 0):
        raise ValueError("kappa must be a positive finite real")
    if not (math.isfinite(zeta) and zeta > 0):
        raise ValueError("zeta must be a positive finite real")
    if zeta < kappa:
        raise ValueError("zeta must be at least kappa for the linear factor")
    base = 1.0 - kappa / zeta
    if algo not in _NEWTON_ALGOS:
        return base
    if f0_gap is None or not (math.isfinite(f0_gap) and f0_gap > 0):
        raise ValueError("cubic-model methods need a positive f0_gap for the factor")
    root = f0_gap**0.25
    return max(base, root / (kappa**0.75 / zeta + root))


@dataclass(frozen=True)
class BoundPhase:
    """One regime segment of a complexity bound.

    iterations realizes the explicit form (every constant instantiated,
    m multiplied in); order is the constant-suppressed growth rate.
    """

    name: str
    regime: str
    iterations: int
    order: str
    formula: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "regime": self.regime,
            "iterations": self.iterations,
            "order": self.order,
            "order_form": "order notation, hidden constant suppressed",
            "formula": self.formula,
            "formula_form": "explicit count, constants instantiated, m included",
        }


@dataclass(frozen=True)
class ComplexityBound:
    """Total iteration bound as a labeled sequence of phases."""

    function_class: str
    algo: str
    iteration_bound: int
    phases: tuple
    assumptions: tuple

    def to_dict(self) -> dict:
        return {
            "function_class": self.function_class,
            "algo": self.algo,
            "iteration_bound": self.iteration_bound,
            "phases": [ph.to_dict() for ph in self.phases],
            "assumptions": list(self.assumptions),
        }


def _ceil_fuzzed(value: float) -> int:
    if value <= 0:
        return 0
    return int(math.ceil(value - _CEIL_FUZZ * max(1.0, abs(value))))


def _linear_iterations(gap_from: float, gap_to: float, xi: float, m: int) -> int:
    if gap_from <= gap_to:
        return 0
    if xi <= 0.0:
        return m
    return _ceil_fuzzed(m * math.log(gap_from / gap_to) / (-math.log(xi)))


def _newton_tail_iterations(entry: float, eps_f: float, omega: float, m: int) -> int:
    # Halving-exponent recursion: log(omega/gap) grows by the factor 4/3
    # per window once the gap sits strictly inside (0, omega).
    if entry <= eps_f:
        return 0
    inner = math.log(omega / eps_f) / math.log(omega / entry)
    windows = max(1, _ceil_fuzzed(math.log(inner) / math.log(4.0 / 3.0)))
    return m * windows


def _default_case(function_class: str) -> str:
    return {
        "gd_2": "R1_2",
        "gH_23": "R1_2+R2_3",
        "gd_1": "R1_1",
        "gH_11": "R2_1",
    }[function_class]


_ALLOWED_CASES = {
    "gd_2": ("R1_2",),
    "gH_23": ("R1_2", "R1_2+R2_3"),
    "gd_1": ("R1_2", "R1_1"),
    "gH_11": ("R1_2", "R1_2+R2_3", "R2_2", "R1_1", "R2_1"),
}


def complexity_bound(
    function_class: str,
    algo: str,
    ctx: RateContext,
    delta_f0: float,
    eps_f: float,
    recurring: str | None = None,
    delta_f_entry: float | None = None,
) -> ComplexityBound:
    """Explicit iteration-count bound for one method on one landscape class.

    function_class names which labels cover every point above the
    reference value: gd_2 (degree-2 gradient domination everywhere),
    gd_1 (degree-1), gH_23 (degree-2 gradient or degree-3 curvature),
    gH_11 (any gradient or curvature degree).  recurring selects which
    subregion the iterates are assumed to revisit indefinitely once the
    gap is small; the default is the worst case for the class.
    delta_f_entry overrides the gap at which the tail recursion starts.

    The count for each phase is explicit (constants instantiated, m
    multiplied in); the order string carries the constant-suppressed
    form, and both are labeled in the serialized record.
    """
    if function_class not in FUNCTION_CLASSES:
        raise ValueError(
            f"unknown function class {function_class!r}; expected one of "
            f"{FUNCTION_CLASSES}"
        )
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    if function_class.startswith("gH") and algo not in _CURVATURE_CAPABLE:
        raise ValueError(
            f"{algo} is not admissible for {function_class}: its step scales with "
            "the gradient, so it can take a zero step and make no progress at a "
            "curvature-dominated point; no decrease guarantee exists there"
        )
    if not isinstance(ctx, RateContext):
        raise TypeError("ctx must be a RateContext")
    df0 = float(delta_f0)
    eps = float(eps_f)
    if not (math.isfinite(df0) and df0 > 0):
        raise ValueError("delta_f0 must be a positive finite real")
    if not (math.isfinite(eps) and eps > 0):
        raise ValueError("eps_f must be a positive finite real")

    case = recurring if recurring is not None else _default_case(function_class)
    if case not in _ALLOWED_CASES[function_class]:
        raise ValueError(
            f"recurring={case!r} is not a recognized case for {function_class}; "
            f"expected one of {_ALLOWED_CASES[function_class]}"
        )

    kappa, zeta, m = ctx.kappa, ctx.zeta, ctx.m
    xi = xi_linear_factor(algo, kappa, zeta, f0_gap=df0)
    omega_n = kappa**3 / zeta**4
    phases: list[BoundPhase] = []
    assumptions: list[str] = []
    if recurring is None:
        assumptions.append(
            f"worst-case recurring subregion for {function_class}: {case}"
        )

    def linear_phase(target: float, label: str) -> None:
        count = _linear_iterations(df0, target, xi, m)
        if count == 0:
            return
        phases.append(
            BoundPhase(
                name=label,
                regime="linear",
                iterations=count,
                order=f"O(log(delta_f0/{target:.12g}))",
                formula=(
                    f"ceil(m*log(delta_f0/target)/(-log(xi))) with m={m}, "
                    f"xi={xi:.12g}, delta_f0={df0:.12g}, target={target:.12g}"
                ),
            )
        )

    sqrt2 = math.sqrt(2.0)
    c2 = (sqrt2 - 1.0) / sqrt2

    def tail_phase(kind: str, entry: float) -> None:
        if kind == "newton":
            count = _newton_tail_iterations(entry, eps, omega_n, m)
            phases.append(
                BoundPhase(
                    name="superlinear tail",
                    regime="superlinear",
                    iterations=count,
                    order="O(log(log((kappa^3/zeta^4)/eps_f)))",
                    formula=(
                        "m*ceil(log(log(omega/eps_f)/log(omega/entry))/log(4/3)) "
                        f"with m={m}, omega={omega_n:.12g}, entry={entry:.12g}"
                    ),
                )
            )
            return
        if entry <= eps:
            return
        if kind == "sqrt":
            amount = m * (zeta / kappa**1.5 / c2) * (1 / math.sqrt(eps) - 1 / math.sqrt(entry))
            order = "O((1/kappa)/sqrt(eps_f))"
            formula = (
                "m*ceil((zeta/kappa^(3/2))/c2*(1/sqrt(eps_f)-1/sqrt(entry))) with "
                f"c2=(sqrt(2)-1)/sqrt(2), m={m}, entry={entry:.12g}"
            )
            name = "sublinear tail (inverse square root)"
        elif kind == "inv":
            amount = m * (zeta / kappa**2) * (1 / eps - 1 / entry)
            order = "O((1/kappa)/eps_f)"
            formula = (
                "m*ceil((zeta/kappa^2)*(1/eps_f-1/entry)) with "
                f"m={m}, entry={entry:.12g}"
            )
            name = "sublinear tail (inverse)"
        else:
            amount = m * (zeta / kappa**3) * (1 / eps**2 - 1 / entry**2)
            order = "O((1/kappa)/eps_f^2)"
            formula = (
                "m*ceil((zeta/kappa^3)*(1/eps_f^2-1/entry^2)) with "
                f"m={m}, entry={entry:.12g}"
            )
            name = "sublinear tail (inverse square)"
        phases.append(
            BoundPhase(
                name=name,
                regime="sublinear",
                iterations=max(1, _ceil_fuzzed(amount)),
                order=order,
                formula=formula,
            )
        )

    if case in ("R1_2", "R1_2+R2_3"):
        # Linear everywhere above the tolerance; cubic-model methods
        # upgrade to a superlinear tail below the threshold gap when the
        # iterates stay on degree-2 gradient-dominated points.
        newton_tail = case == "R1_2" and algo in _NEWTON_ALGOS and eps < omega_n
        if newton_tail:
            linear_phase(max(omega_n, eps), "linear phase to threshold gap")
            entry = delta_f_entry if delta_f_entry is not None else (
                df0 if df0 < omega_n else xi * omega_n
            )
            if not (0 < entry < omega_n):
                raise ValueError(
                    "delta_f_entry must lie strictly between 0 and kappa^3/zeta^4 "
                    "for the superlinear tail"
                )
            if delta_f_entry is None:
                assumptions.append(
                    f"superlinear tail entered at gap {entry:.12g} "
                    "(one linear window below the threshold)"
                )
            tail_phase("newton", entry)
        else:
            linear_phase(eps, "linear phase")
            if algo in _NEWTON_ALGOS and eps < omega_n and case == "R1_2+R2_3":
                assumptions.append(
                    "superlinear tail available when the iterates eventually stay "
                    "on degree-2 gradient-dominated points; pass recurring='R1_2'"
                )
        return _finalize(function_class, algo, phases, assumptions)

    # Sublinear cases: linear only until the gap falls below 1/kappa.
    crossover = 1.0 / kappa
    if eps >= crossover:
        linear_phase(eps, "linear phase")
        assumptions.append(
            "tolerance reached before the sublinear crossover gap 1/kappa; "
            "the recurring-subregion tail never starts"
        )
        return _finalize(function_class, algo, phases, assumptions)

    linear_phase(crossover, "linear phase to crossover gap")
    entry = delta_f_entry if delta_f_entry is not None else min(df0, crossover)
    if not 0 < entry:
        raise ValueError("delta_f_entry must be positive")
    if delta_f_entry is None:
        assumptions.append(f"tail entered at gap min(delta_f0, 1/kappa) = {entry:.12g}")

    if case == "R2_2":
        tail_phase("sqrt", entry)
    elif case == "R1_1":
        if algo in _NEWTON_ALGOS:
            tail_phase("sqrt", entry)
        else:
            tail_phase("inv", entry)
    else:  # R2_1
        tail_phase("invsq", entry)
    return _finalize(function_class, algo, phases, assumptions)


def _finalize(
    function_class: str,
    algo: str,
    phases: list,
    assumptions: list,
) -> ComplexityBound:
    return ComplexityBound(
        function_class=function_class,
        algo=algo,
        iteration_bound=sum(ph.iterations for ph in phases),
        phases=tuple(phases),
        assumptions=tuple(assumptions),
    )


@dataclass(frozen=True)
class ContemporaryBound:
    """Constant-free tolerance-driven iteration bounds for one method."""

    algo: str
    K1_bound: float
    K2_bound: float

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "K1_bound": self.K1_bound,
            "K2_bound": self.K2_bound,
            "form": "order-constant-free values (multiply by the method's "
            "per-iteration decrease constant for a concrete count)",
        }


def contemporary_bound(algo: str, eps_1: float, eps_2: float, delta_f0: float) -> ContemporaryBound:
    """Worst-case counts of large-gradient and large-curvature iterates.

    K1 bounds how many iterates can carry ||g|| > eps_1; K2 bounds how
    many can carry leftmost curvature below -eps_2.  Gradient-scaled
    methods admit no second-order guarantee, so their K2 is infinite.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; expected one of {ALGORITHMS}")
    if not (math.isfinite(eps_1) and eps_1 > 0):
        raise ValueError("eps_1 must be a positive finite real")
    if not (math.isfinite(eps_2) and eps_2 > 0):
        raise ValueError("eps_2 must be a positive finite real")
    df0 = float(delta_f0)
    if not (math.isfinite(df0) and df0 >= 0):
        raise ValueError("delta_f0 must be a nonnegative finite real")
    if algo in _NEWTON_ALGOS:
        k1 = df0 / eps_1**1.5
    else:
        k1 = df0 / eps_1**2
    if algo in _CURVATURE_CAPABLE:
        k2 = df0 / eps_2**3
    else:
        k2 = math.inf
    return ContemporaryBound(algo=algo, K1_bound=k1, K2_bound=k2)
