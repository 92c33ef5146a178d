"""Landscape partition by derivative-domination tests.

A point with gap ``delta_f = f(x) - f_ref >= 0`` belongs to the
gradient region when some power tau in [1, 2] of the gradient norm
dominates ``kappa * delta_f``, and to the curvature region when it
fails that test but some power tau in [1, 3] of the negative-curvature
magnitude dominates the same product.  Because ``a**tau`` is monotone
in tau for fixed ``a >= 0``, each existential test over a tau interval
reduces to checking its endpoints.

``classify`` implements the two-level partition used by the rate
templates; ``classify_p`` implements the generalized order-p test based
on the scaled stationarity measures ``delta_p``.  The two hierarchies
agree structurally but use different exponent ranges at p = 1, so they
are exposed side by side and never mixed.
"""

from __future__ import annotations

import csv
import enum
import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .objectives import Objective, evaluate

FLOAT_FMT = "%.17g"


class Region(enum.Enum):
    R1_1 = "R1_1"
    R1_2 = "R1_2"
    R2_1 = "R2_1"
    R2_2 = "R2_2"
    R2_3 = "R2_3"
    OUTSIDE = "Outside"
    BELOW_REF = "BelowRef"
    UNKNOWN = "Unknown"  # first-order-only mode, second-order test skipped

    @property
    def in_r1(self) -> bool:
        return self in (Region.R1_1, Region.R1_2)

    @property
    def in_r2(self) -> bool:
        return self in (Region.R2_1, Region.R2_2, Region.R2_3)


@dataclass(frozen=True)
class RegionParams:
    """Domination parameters: positive kappa and the reference level f_ref."""

    kappa: float
    f_ref: float

    def __post_init__(self):
        if not (np.isfinite(self.kappa) and self.kappa > 0.0):
            raise ValueError(f"kappa must be a positive real, got {self.kappa}")
        if not np.isfinite(self.f_ref):
            raise ValueError(f"f_ref must be finite, got {self.f_ref}")


@dataclass(frozen=True)
class RegionLabel:
    """Classification outcome with the scalar witnesses that produced it."""

    region: Region
    delta_f: float
    grad_norm: float
    lambda_minus: Optional[float]


def classify_witness(
    delta_f: float,
    grad_norm: float,
    lambda_minus: Optional[float],
    params: RegionParams,
) -> Region:
    """Classify from recorded scalars alone.

    ``lambda_minus`` is the negative-curvature magnitude max(0, -lambda_min);
    pass None when no Hessian information exists, in which case points
    failing the gradient test come back UNKNOWN.
    """
    if delta_f < 0.0:
        return Region.BELOW_REF
    c = params.kappa * delta_f
    gn = float(grad_norm)
    if max(gn, gn * gn) >= c:
        return Region.R1_2 if gn * gn >= c else Region.R1_1
    if lambda_minus is None:
        return Region.UNKNOWN
    lm = float(lambda_minus)
    if max(lm, lm**3) >= c:
        if lm**3 >= c:
            return Region.R2_3
        if lm * lm >= c:
            return Region.R2_2
        return Region.R2_1
    return Region.OUTSIDE


def _lambda_minus(H: np.ndarray) -> float:
    lam1 = float(np.linalg.eigvalsh(0.5 * (H + H.T))[0])
    return max(0.0, -lam1)


def classify(obj: Objective, x, params: RegionParams, mode: str = "full") -> RegionLabel:
    """Assign a point to its region.

    mode "full" evaluates the Hessian whenever the gradient test fails;
    if the objective cannot provide one, a ValueError directs the caller
    to mode "first_order", which labels such points UNKNOWN instead.
    """
    if mode not in ("full", "first_order"):
        raise ValueError(f"mode must be 'full' or 'first_order', got {mode!r}")
    ev = evaluate(obj, x, order=1)
    delta_f = ev.f - params.f_ref
    gn = float(np.linalg.norm(ev.g))
    region = classify_witness(delta_f, gn, None, params)
    lam_minus = None
    if region is Region.UNKNOWN:
        if mode == "first_order":
            return RegionLabel(Region.UNKNOWN, delta_f, gn, None)
        if obj.hess is None:
            raise ValueError(
                f"{obj.name} provides no Hessian; classify with mode='first_order'"
            )
        lam_minus = _lambda_minus(evaluate(obj, np.asarray(x, dtype=float), order=2).H)
        region = classify_witness(delta_f, gn, lam_minus, params)
    return RegionLabel(region, delta_f, gn, lam_minus)


def delta_p(obj: Objective, x, p: int) -> float:
    """Scaled order-p stationarity measure at x.

    Closed forms: p = 1 gives ||g||^2, p = 2 gives max(0, -lambda_min(H))^3.
    Both equal p(p+1) times the largest possible decrease of the pure
    p-th-order Taylor term regularized by ||s||^(p+1)/(p+1).
    """
    if p == 1:
        ev = evaluate(obj, x, order=1)
        return float(np.linalg.norm(ev.g)) ** 2
    if p == 2:
        ev = evaluate(obj, x, order=2)
        return _lambda_minus(ev.H) ** 3
    raise ValueError(f"delta_p has closed forms only for p in {{1, 2}}, got p = {p}")


@dataclass(frozen=True)
class PClassification:
    """Outcome of the generalized order-p membership test."""

    p: int
    member: bool
    q: Optional[int]
    reason: str
    delta_f: float
    measures: dict


def _p_test(measure: float, c: float, p: int) -> bool:
    # Existential test over tau in [1, p+1]; endpoints suffice.
    return max(measure, measure ** (p + 1)) >= c


def classify_p(obj: Objective, x, p: int, params: RegionParams) -> PClassification:
    """Order-p region membership and subregion index q.

    A point is an order-p member when it is not captured by any
    lower-order test and the order-p measure dominates kappa * delta_f
    for some tau in [1, p + 1].  q is the largest integer exponent for
    which the domination holds (q = p + 1 is the strongest subregion).
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    ev = evaluate(obj, x, order=1)
    delta_f = ev.f - params.f_ref
    measures = {}
    if delta_f < 0.0:
        return PClassification(p, False, None, "below_ref", delta_f, measures)
    c = params.kappa * delta_f
    for j in range(1, p + 1):
        measures[j] = delta_p(obj, x, j)
    for j in range(1, p):
        if _p_test(measures[j], c, j):
            return PClassification(p, False, None, f"captured_by_lower:{j}", delta_f, measures)
    if not _p_test(measures[p], c, p):
        return PClassification(p, False, None, "fails_test", delta_f, measures)
    for q in range(p + 1, 0, -1):
        if measures[p] ** q >= c:
            return PClassification(p, True, q, "member", delta_f, measures)
    # Unreachable: membership implies the q = 1 test holds.
    raise AssertionError("membership without a valid subregion index")


@dataclass
class ScanResult:
    """Grid classification over an objective's scan domain."""

    objective: str
    params: RegionParams
    resolution: int
    points: np.ndarray  # (m, n)
    labels: list
    delta_f: np.ndarray
    grad_norm: np.ndarray
    lambda_minus: np.ndarray  # nan where the Hessian was not consulted

    def counts(self) -> dict:
        out: dict = {}
        for lab in self.labels:
            out[lab.value] = out.get(lab.value, 0) + 1
        return out


def region_scan(
    obj: Objective, resolution: int, params: RegionParams, mode: str = "full"
) -> ScanResult:
    """Classify a uniform grid of resolution points per axis."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    axes = [np.linspace(lo, hi, resolution) for (lo, hi) in obj.scan_domain]
    pts = np.array(list(itertools.product(*axes)), dtype=float)
    labels = []
    dfs = np.empty(len(pts))
    gns = np.empty(len(pts))
    lms = np.full(len(pts), np.nan)
    for i, x in enumerate(pts):
        lab = classify(obj, x, params, mode=mode)
        labels.append(lab.region)
        dfs[i] = lab.delta_f
        gns[i] = lab.grad_norm
        if lab.lambda_minus is not None:
            lms[i] = lab.lambda_minus
    return ScanResult(obj.name, params, resolution, pts, labels, dfs, gns, lms)


def scan_to_csv(scan: ScanResult, path) -> None:
    """Write a scan as CSV: coordinates, label, delta_f, grad_norm, lambda_minus."""
    n = scan.points.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(n)] + ["label", "delta_f", "grad_norm", "lambda_minus"])
        for i in range(len(scan.points)):
            row = [FLOAT_FMT % v for v in scan.points[i]]
            row.append(scan.labels[i].value)
            row.extend(
                FLOAT_FMT % v
                for v in (scan.delta_f[i], scan.grad_norm[i], scan.lambda_minus[i])
            )
            writer.writerow(row)
