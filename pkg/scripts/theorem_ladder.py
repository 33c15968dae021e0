"""Exact vs inexact weights on a refinement ladder.

Prints the masked reconstruction error per rung for the classical case, a few
exact (odd-perturbed) weights, the attenuated weight and its W_appr.

    python scripts/theorem_ladder.py --grid 64 --ladder 1,2,4
"""

import argparse

from chang_radon.experiment import ExperimentConfig, run_experiment

WEIGHTS = ["uniform", "odd:1:0.8", "odd:3:0.8:c", "odd:1:0.5:c:v", "attenuated:1.5", "wappr:1.5"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--ladder", default="1,2,4")
    ap.add_argument("--out")
    args = ap.parse_args()
    ladder = tuple(int(v) for v in args.ladder.split(","))
    angles = max(2, round(360 * args.grid / 256 / 2) * 2)
    print(f"{'weight':<16}{'eq8 residual':>14}  errors per rung")
    for w in WEIGHTS:
        cfg = ExperimentConfig(grid=args.grid, angles=angles, offsets=args.grid + 1, weight=w, ladder=ladder)
        out = None if args.out is None else f"{args.out}/{w.replace(':', '_')}"
        m = run_experiment(cfg, out)
        errs = "  ".join(f"{r['rel_l2_masked']:.4f}" for r in m.rungs)
        print(f"{w:<16}{m.eq8_residual_rel:>14.2e}  {errs}")


if __name__ == "__main__":
    main()
