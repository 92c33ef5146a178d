"""Benchmark objectives with analytic derivatives.

Each entry bundles the callables (value, gradient, Hessian) with the
metadata the rest of the package needs: scan domain, known Lipschitz
constants, infimum when finite, recommended region parameters, and
qualitative tags.  All callables are pure functions of the input point.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

Array = np.ndarray

# Tags a corpus entry may carry.
KNOWN_TAGS = frozenset(
    {
        "PL",
        "gradient-dominated-1",
        "gradient-dominated-2",
        "gH-dominated-(2,3)",
        "saddle",
        "unbounded-below",
    }
)

HESS_KINK_MSG = "second derivative is discontinuous at x = 1; returning the right-hand limit"


@dataclass(frozen=True)
class Objective:
    """A test function with analytic derivatives.

    Attributes
    ----------
    name : str
        Identifier used by the registry and the command line.
    n : int
        Input dimension.
    f, grad, hess : callables
        Value, gradient and Hessian maps.  ``hess`` is None when no
        second derivative is available anywhere.
    smoothness_order : int
        2 when the Hessian is globally Lipschitz-friendly, 1 when the
        second derivative has jumps (second-order methods must refuse
        such entries even if ``hess`` is defined piecewise).
    f_inf : float or None
        Global infimum when finite and known.
    scan_domain : tuple of (lo, hi) pairs
        Axis-aligned box used for scans and sampling.
    lipschitz_g, lipschitz_h : float or None
        Gradient / Hessian Lipschitz constants on the scan domain.
        Exact where closed-form, otherwise sampled lower estimates
        (see ``estimate_lipschitz``).
    recommended_kappa, recommended_f_ref : float or None
        Default region parameters for scans of this entry.
    tags : frozenset of str
        Qualitative labels, subset of ``KNOWN_TAGS``.
    """

    name: str
    n: int
    f: Callable[[Array], float]
    grad: Callable[[Array], Array]
    hess: Optional[Callable[[Array], Array]]
    smoothness_order: int = 2
    f_inf: Optional[float] = None
    scan_domain: tuple = ()
    lipschitz_g: Optional[float] = None
    lipschitz_h: Optional[float] = None
    recommended_kappa: Optional[float] = None
    recommended_f_ref: Optional[float] = None
    tags: frozenset = frozenset()

    def domain_bounds(self) -> tuple[Array, Array]:
        """Scan-domain bounds as (lo, hi) arrays."""
        box = np.asarray(self.scan_domain, dtype=float)
        return box[:, 0].copy(), box[:, 1].copy()


@dataclass(frozen=True)
class Evaluation:
    """Result of ``evaluate``: fields beyond the requested order are None."""

    f: float
    g: Optional[Array] = None
    H: Optional[Array] = None


def evaluate(obj: Objective, x, order: int = 2) -> Evaluation:
    """Evaluate ``obj`` at ``x`` up to the requested derivative order.

    order 0 returns only the value, 1 adds the gradient, 2 adds the
    Hessian.  Requesting order 2 from an entry without a Hessian map is
    an error directing the caller to first-order-only use.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.n,):
        raise ValueError(f"{obj.name} expects a point of dimension {obj.n}, got shape {x.shape}")
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    if order == 2 and obj.hess is None:
        raise ValueError(
            f"{obj.name} has no Hessian; use order <= 1 (first-order-only mode)"
        )
    fval = float(obj.f(x))
    g = np.asarray(obj.grad(x), dtype=float) if order >= 1 else None
    H = np.asarray(obj.hess(x), dtype=float) if order == 2 else None
    return Evaluation(fval, g, H)


def fd_check(obj: Objective, x, h: float = 1e-6) -> dict:
    """Central-difference residuals of the analytic derivatives at ``x``.

    Returns {"grad_residual", "hess_residual"}; the Hessian residual is
    None for entries without a Hessian map.  The caller is responsible
    for keeping ``x`` at distance >= h from any derivative kink.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.n,):
        raise ValueError(f"expected dimension {obj.n}, got shape {x.shape}")
    if h <= 0:
        raise ValueError("h must be positive")
    n = obj.n
    g_fd = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        g_fd[i] = (float(obj.f(x + e)) - float(obj.f(x - e))) / (2.0 * h)
    grad_residual = float(np.max(np.abs(g_fd - np.asarray(obj.grad(x), dtype=float))))
    hess_residual = None
    if obj.hess is not None:
        H_fd = np.empty((n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            H_fd[:, i] = (
                np.asarray(obj.grad(x + e), dtype=float) - np.asarray(obj.grad(x - e), dtype=float)
            ) / (2.0 * h)
        H_fd = 0.5 * (H_fd + H_fd.T)
        hess_residual = float(np.max(np.abs(H_fd - np.asarray(obj.hess(x), dtype=float))))
    return {"grad_residual": grad_residual, "hess_residual": hess_residual}


def estimate_kappa(obj: Objective, f_ref: float, tau: float = 2.0, grid=None) -> float:
    """Smallest observed ratio ||g(x)||^tau / (f(x) - f_ref) over a grid.

    Points with f(x) <= f_ref are skipped; if no point lies strictly
    above the reference value this raises ValueError.  The returned
    value is the largest constant for which the degree-``tau``
    domination inequality holds at every usable grid point.
    """
    if grid is None:
        raise ValueError("estimate_kappa requires an explicit grid of points")
    pts = np.asarray(grid, dtype=float)
    if pts.size == 0:
        raise ValueError("empty grid")
    if pts.ndim == 1:
        pts = pts.reshape(-1, obj.n)
    best = np.inf
    usable = 0
    for x in pts:
        ev = evaluate(obj, x, order=1)
        gap = ev.f - f_ref
        if gap <= 0.0:
            continue
        usable += 1
        ratio = float(np.linalg.norm(ev.g)) ** tau / gap
        if ratio < best:
            best = ratio
    if usable == 0:
        raise ValueError("all grid points have f <= f_ref")
    return float(best)


def estimate_lipschitz(obj: Objective, order: int = 1, n_samples: int = 4000, seed: int = 0) -> float:
    """Sampled lower estimate of a derivative Lipschitz constant.

    order 1 estimates sup ||g(x) - g(y)|| / ||x - y|| over the scan
    domain, order 2 the same for the Hessian in spectral norm.  Uses
    short random segments plus deterministic corner probes; the result
    never exceeds the true constant.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if order == 2 and obj.hess is None:
        raise ValueError(f"{obj.name} has no Hessian")
    lo, hi = obj.domain_bounds()
    span = float(np.max(hi - lo))
    rng = np.random.default_rng(seed)

    def deriv(x):
        if order == 1:
            return np.asarray(obj.grad(x), dtype=float)
        return np.asarray(obj.hess(x), dtype=float)

    def dnorm(d):
        if order == 1:
            return float(np.linalg.norm(d))
        return float(np.linalg.norm(d, 2))

    best = 0.0

    def probe(x, y):
        nonlocal best
        dist = float(np.linalg.norm(y - x))
        if dist < 1e-12:
            return
        val = dnorm(deriv(y) - deriv(x)) / dist
        if val > best:
            best = val

    # Corner probes: short inward steps along each axis.
    n = obj.n
    for corner_id in range(2**n):
        x = np.array([hi[i] if (corner_id >> i) & 1 else lo[i] for i in range(n)])
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1e-4 * span * (1.0 if x[i] == lo[i] else -1.0)
            probe(x, x + e)
    for _ in range(n_samples):
        x = lo + (hi - lo) * rng.random(n)
        d = rng.standard_normal(n)
        nd = float(np.linalg.norm(d))
        if nd < 1e-12:
            continue
        y = np.clip(x + (1e-4 * span / nd) * d, lo, hi)
        probe(x, y)
    return best


def random_points(obj: Objective, m: int, seed: int = 0) -> Array:
    """Sample m points uniformly from the scan domain; shape (m, n)."""
    lo, hi = obj.domain_bounds()
    rng = np.random.default_rng(seed)
    return lo + (hi - lo) * rng.random((m, obj.n))


# ---------------------------------------------------------------------------
# Corpus entries
# ---------------------------------------------------------------------------


def _fig1_f(x):
    t = float(x[0])
    if t <= 1.0:
        return 1.5 * t * t - 0.5
    return (t - 2.0) ** 3 + 2.0


def _fig1_g(x):
    t = float(x[0])
    if t <= 1.0:
        return np.array([3.0 * t])
    return np.array([3.0 * (t - 2.0) ** 2])


def _fig1_h(x):
    # Defined piecewise; at the junction t = 1 the right-hand limit is
    # returned so the map stays total (flagged with a warning).
    t = float(x[0])
    if t < 1.0:
        return np.array([[3.0]])
    if t == 1.0:
        warnings.warn(HESS_KINK_MSG, RuntimeWarning, stacklevel=2)
    return np.array([[6.0 * (t - 2.0)]])


FIG1 = Objective(
    name="fig1",
    n=1,
    f=_fig1_f,
    grad=_fig1_g,
    hess=_fig1_h,
    smoothness_order=1,
    f_inf=-0.5,
    scan_domain=((-2.0, 4.0),),
    lipschitz_g=12.0,  # sup |f''| on the scan domain: max(3, 6*|4-2|)
    lipschitz_h=None,  # second derivative jumps at x = 1
    recommended_kappa=0.05,
    recommended_f_ref=-0.5,
    tags=frozenset(),
)


def _saddle2d_f(x):
    return float(x[0] ** 2 - x[1] ** 2 + 10.0)


def _saddle2d_g(x):
    return np.array([2.0 * x[0], -2.0 * x[1]])


def _saddle2d_h(x):
    return np.array([[2.0, 0.0], [0.0, -2.0]])


SADDLE2D = Objective(
    name="saddle2d",
    n=2,
    f=_saddle2d_f,
    grad=_saddle2d_g,
    hess=_saddle2d_h,
    smoothness_order=2,
    f_inf=None,
    scan_domain=((-3.0, 3.0), (-3.0, 3.0)),
    lipschitz_g=2.0,
    lipschitz_h=0.0,
    recommended_kappa=0.5,
    recommended_f_ref=0.0,
    tags=frozenset({"saddle", "unbounded-below"}),
)


def _cubic2d_f(x):
    return float(x[0] ** 3 - x[1] ** 3 + 22.0)


def _cubic2d_g(x):
    return np.array([3.0 * x[0] ** 2, -3.0 * x[1] ** 2])


def _cubic2d_h(x):
    return np.array([[6.0 * x[0], 0.0], [0.0, -6.0 * x[1]]])


CUBIC2D = Objective(
    name="cubic2d",
    n=2,
    f=_cubic2d_f,
    grad=_cubic2d_g,
    hess=_cubic2d_h,
    smoothness_order=2,
    f_inf=None,
    scan_domain=((-3.0, 3.0), (-3.0, 3.0)),
    lipschitz_g=18.0,  # sup |6 x_i| over the box
    lipschitz_h=6.0,
    recommended_kappa=0.5,
    recommended_f_ref=0.0,
    tags=frozenset({"saddle", "unbounded-below"}),
)


def quadratic(A, name: str = "quad", scan_halfwidth: float = 2.0) -> Objective:
    """Build the objective f(x) = 0.5 x'Ax for a symmetric matrix A.

    Positive-semidefinite A gives f_inf = 0 and the degree-2 domination
    constant 2*lambda_min(A); indefinite A is tagged unbounded-below.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    A = 0.5 * (A + A.T)
    A.flags.writeable = False
    n = A.shape[0]
    evals = np.linalg.eigvalsh(A)
    lam_min, lam_max = float(evals[0]), float(evals[-1])

    def f(x, A=A):
        return float(0.5 * (x @ (A @ x)))

    def grad(x, A=A):
        return A @ x

    def hess(x, A=A):
        return A.copy()

    psd = lam_min >= 0.0
    return Objective(
        name=name,
        n=n,
        f=f,
        grad=grad,
        hess=hess,
        smoothness_order=2,
        f_inf=0.0 if psd else None,
        scan_domain=tuple((-scan_halfwidth, scan_halfwidth) for _ in range(n)),
        lipschitz_g=max(abs(lam_min), abs(lam_max)),
        lipschitz_h=0.0,
        recommended_kappa=2.0 * lam_min if lam_min > 0 else None,
        recommended_f_ref=0.0,
        tags=frozenset({"PL", "gradient-dominated-2"})
        if lam_min > 0
        else frozenset({"saddle", "unbounded-below"}),
    )


# Fixed 2x2 strongly convex quadratic: eigenvalues {1, 1.5}, eigenbasis
# rotated by 30 degrees so the matrix has off-diagonal structure.
_A_QUAD_SC = np.array([[1.125, -np.sqrt(3.0) / 8.0], [-np.sqrt(3.0) / 8.0, 1.375]])
QUAD_SC = quadratic(_A_QUAD_SC, name="quad_sc")


def _pl_noncvx_f(x):
    t = float(x[0])
    return t * t + 3.0 * np.sin(t) ** 2


def _pl_noncvx_g(x):
    t = float(x[0])
    return np.array([2.0 * t + 3.0 * np.sin(2.0 * t)])


def _pl_noncvx_h(x):
    t = float(x[0])
    return np.array([[2.0 + 6.0 * np.cos(2.0 * t)]])


# Smallest grid ratio ||g|^2 / f on [-10, 10]; frozen regression value
# from a 200001-point uniform grid (attained near x = -2.2017).
PL_NONCVX_KAPPA_HAT = 0.35106197197813005

PL_NONCVX = Objective(
    name="pl_noncvx",
    n=1,
    f=_pl_noncvx_f,
    grad=_pl_noncvx_g,
    hess=_pl_noncvx_h,
    smoothness_order=2,
    f_inf=0.0,
    scan_domain=((-10.0, 10.0),),
    lipschitz_g=8.0,  # |f''| = |2 + 6 cos 2x| <= 8
    lipschitz_h=12.0,  # |f'''| = |12 sin 2x| <= 12
    recommended_kappa=0.35,
    recommended_f_ref=0.0,
    tags=frozenset({"PL", "gradient-dominated-2"}),
)


def _conv_deg1_f(x):
    return float(0.25 * np.dot(x, x) ** 2)


def _conv_deg1_g(x):
    return float(np.dot(x, x)) * x


def _conv_deg1_h(x):
    n = x.shape[0]
    return float(np.dot(x, x)) * np.eye(n) + 2.0 * np.outer(x, x)


CONV_DEG1 = Objective(
    name="conv_deg1",
    n=2,
    f=_conv_deg1_f,
    grad=_conv_deg1_g,
    hess=_conv_deg1_h,
    smoothness_order=2,
    f_inf=0.0,
    scan_domain=((-1.5, 1.5), (-1.5, 1.5)),
    lipschitz_g=13.5,  # ||H|| = 3 ||x||^2, maximal at the box corners
    lipschitz_h=9.0 * np.sqrt(2.0),  # 6 max ||x|| over the box
    recommended_kappa=1.0,
    recommended_f_ref=0.0,
    tags=frozenset({"gradient-dominated-1"}),
)


def _rosenbrock_f(x):
    a, b = x
    return float((1.0 - a) ** 2 + 100.0 * (b - a * a) ** 2)


def _rosenbrock_g(x):
    a, b = x
    return np.array([-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)])


def _rosenbrock_h(x):
    a, b = x
    return np.array([[2.0 + 1200.0 * a * a - 400.0 * b, -400.0 * a], [-400.0 * a, 200.0]])


ROSENBROCK = Objective(
    name="rosenbrock",
    n=2,
    f=_rosenbrock_f,
    grad=_rosenbrock_g,
    hess=_rosenbrock_h,
    smoothness_order=2,
    f_inf=0.0,
    scan_domain=((-2.0, 2.0), (-1.0, 3.0)),
    # Sampled lower estimates on the scan domain (estimate_lipschitz,
    # 4000 samples, seed 0); frozen as regression constants.
    lipschitz_g=5262.194385779928,
    lipschitz_h=4832.628277897156,
    recommended_kappa=0.25,
    recommended_f_ref=0.0,
    tags=frozenset(),
)


_CORPUS = {
    obj.name: obj
    for obj in (FIG1, SADDLE2D, CUBIC2D, QUAD_SC, PL_NONCVX, CONV_DEG1, ROSENBROCK)
}


def corpus_names() -> list[str]:
    return sorted(_CORPUS)


def get_objective(name: str) -> Objective:
    """Look up a corpus entry by name; raises KeyError with the catalog."""
    try:
        return _CORPUS[name]
    except KeyError:
        raise KeyError(f"unknown objective {name!r}; available: {', '.join(corpus_names())}") from None


def corpus_manifest() -> list[dict]:
    """JSON-serializable description of every corpus entry."""
    out = []
    for name in corpus_names():
        obj = _CORPUS[name]
        out.append(
            {
                "name": obj.name,
                "n": obj.n,
                "smoothness_order": obj.smoothness_order,
                "f_inf": obj.f_inf,
                "scan_domain": [[float(lo), float(hi)] for lo, hi in obj.scan_domain],
                "lipschitz_g": obj.lipschitz_g,
                "lipschitz_h": obj.lipschitz_h,
                "recommended_kappa": obj.recommended_kappa,
                "recommended_f_ref": obj.recommended_f_ref,
                "tags": sorted(obj.tags),
            }
        )
    return out
