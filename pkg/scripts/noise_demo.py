"""Chang reconstruction of attenuated data with and without Poisson noise.

    python scripts/noise_demo.py --grid 128 --count-scale 1e4 --out runs/noise
"""

import argparse
import json

from chang_radon.experiment import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=128)
    ap.add_argument("--strength", type=float, default=1.5)
    ap.add_argument("--count-scale", type=float, default=1e4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    args = ap.parse_args()
    cfg = ExperimentConfig(
        grid=args.grid,
        angles=max(2, round(360 * args.grid / 256 / 2) * 2),
        offsets=args.grid + 1,
        weight=f"attenuated:{args.strength}",
        ladder=(1,),
        noise=args.count_scale,
        seed=args.seed,
    )
    m = run_experiment(cfg, args.out)
    print(json.dumps(m.rungs[0], indent=2))


if __name__ == "__main__":
    main()
