"""Shared helpers: hand-built trajectories for harness and CLI tests."""

import numpy as np

from regionopt import AlgoConfig, IterateRecord, RegionParams, Trajectory, classify_witness


def synthetic_trajectory(
    fs,
    *,
    f_ref=0.0,
    kappa=2.0,
    grad_norms=None,
    lambda_minuses=None,
    regions=None,
    accepted=None,
    algo="rg_a",
    objective="quad_sc",
    reason="max_iters",
    config=None,
    nu=1.0,
):
    """Trajectory with prescribed f values and defaults for the rest.

    The default grad_norm sqrt(2 * kappa * gap) certifies membership in
    the squared-gradient subregion with a factor-2 margin; labels come
    from classify_witness unless given explicitly.  The last record is
    terminal (not accepted, zero step) to mirror the run loop.
    """
    params = RegionParams(kappa=kappa, f_ref=f_ref)
    if config is None:
        config = AlgoConfig(algo=algo, l1=2.0 if algo == "rg" else None)
    n_rec = len(fs)
    records = []
    for i, f in enumerate(fs):
        gap = f - f_ref
        if grad_norms is not None:
            gn = float(grad_norms[i])
        else:
            gn = float(np.sqrt(max(2.0 * kappa * gap, 0.0)))
        lam = None if lambda_minuses is None else lambda_minuses[i]
        if regions is not None:
            reg = regions[i]
        else:
            reg = classify_witness(gap, gn, lam, params)
        if accepted is not None:
            acc = bool(accepted[i])
        else:
            acc = i < n_rec - 1
        last = i == n_rec - 1
        records.append(
            IterateRecord(
                k=i,
                x=np.array([float(i), 0.0]),
                f=float(f),
                grad_norm=gn,
                lambda_minus=lam,
                nu=nu,
                delta=None,
                step_norm=0.0 if last else 1.0,
                accepted=acc and not last,
                model_decrease=0.0,
                region=reg,
                delta_f=gap,
            )
        )
    return Trajectory(
        objective=objective,
        algo=config.algo,
        config=config,
        region_params=params,
        x0=records[0].x.copy(),
        records=records,
        termination_reason=reason,
    )
