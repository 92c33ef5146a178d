#!/usr/bin/env python3
"""Record a run, persist it, reload it, and certify it after the fact.

Trajectories are plain CSV/JSON artifacts, so verification is a pure
post-processing pass: anyone holding the file can recompute the
domination constant, calibrate the decrease constant, and replay every
m-step window against its rate template.  The script ends by
corrupting one objective value and showing the verifier catch it.

Run: python3 demos/verify_pipeline.py [--workdir DIR]
"""

import argparse
import json
import tempfile
from pathlib import Path

import numpy as np

from regionopt import (
    AlgoConfig,
    AlgoClass,
    RateContext,
    RegionParams,
    envelope_compare,
    get_objective,
    run,
    trajectory_from_json,
    trajectory_to_csv,
    trajectory_to_json,
    verify_run,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--workdir", default=None, help="defaults to a temp dir")
    args = ap.parse_args()
    workdir = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp())
    workdir.mkdir(parents=True, exist_ok=True)

    obj = get_objective("pl_noncvx")
    params = RegionParams(kappa=0.35, f_ref=0.0)
    config = AlgoConfig(algo="rg", l1=10.0, eps_f=1e-10, max_iters=200)
    traj = run(obj, config, params, np.array([2.0]))
    print(f"ran {traj.algo} on {traj.objective}: {len(traj.records)} records, "
          f"termination {traj.termination_reason}")

    csv_path = workdir / "run.csv"
    json_path = workdir / "run.json"
    trajectory_to_csv(traj, str(csv_path))
    trajectory_to_json(traj, str(json_path))
    print(f"persisted to {csv_path} and {json_path}")

    reloaded = trajectory_from_json(str(json_path))
    report = verify_run(reloaded)
    cov = report.coverage()
    cal = report.calibrated
    print(f"\nverification: {cov['satisfied']}/{cov['applicable']} applicable "
          f"windows satisfied, {len(report.violations)} violations")
    print(f"  kappa {cal['kappa']:.4f} ({cal['kappa_source']})")
    print(f"  zeta  {cal['zeta_hat']:.4f} ({cal['zeta_source']}), m = {cal['m_hat']}")
    print("  gap-tolerance counts, observed vs predicted from the weakest "
          "certified linear factor:")
    for eps, entry in sorted(report.kf_counts.items(), key=lambda kv: -float(kv[0])):
        print(f"    eps={eps}: observed {entry['observed']}, "
              f"predicted <= {entry['predicted_bound']}")

    ctx = RateContext(algo_class=AlgoClass.GRAD, kappa=cal["kappa"],
                      zeta=max(cal["zeta_hat"], cal["kappa"]), m=cal["m_hat"])
    print("\nenvelope vs observed gap (every m-th iteration):")
    for row in envelope_compare(reloaded, ctx):
        print(f"  k={row['k']:3d} observed {row['delta_f_observed']:.3e} "
              f"<= envelope {row['delta_f_envelope']:.3e}")

    # tamper with one record and verify again
    payload = json.loads(json_path.read_text())
    payload["records"][3]["f"] += 0.05
    bad_path = workdir / "tampered.json"
    bad_path.write_text(json.dumps(payload))
    bad_report = verify_run(trajectory_from_json(str(bad_path)))
    print(f"\nafter raising one recorded f by 0.05: "
          f"{len(bad_report.violations)} violations, kinds "
          f"{sorted({v['kind'] for v in bad_report.violations})}")


if __name__ == "__main__":
    main()
