"""Command-line entry point: ``chang-radon <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .exactness import check_exactness
from .experiment import RIM_WIDTH, ExperimentConfig, build_phantom, build_weight, metrics_json, run_experiment
from .fileio import read_field, read_sinogram, write_field, write_pgm, write_sinogram
from .geometry import Grid2D, ScalarField, build_geometry
from .inversion import chang_reconstruct
from .metrics import add_poisson_noise
from .phantom import make_phantom
from .transforms import forward_project


def _sampling(p: argparse.ArgumentParser, grid=True, projection=True):
    if grid:
        p.add_argument("--grid", type=int, default=256, help="pixels per axis")
    if projection:
        p.add_argument("--angles", type=int, default=360, help="directions on the full circle (even)")
        p.add_argument("--offsets", type=int, default=257, help="detector samples (odd)")
    p.add_argument("--smax", type=float, default=1.2, help="detector half-width; the grid spans [-smax, smax]^2")


def cmd_phantom(args) -> int:
    grid = Grid2D.square(args.grid, args.smax)
    f = make_phantom(build_phantom(args.phantom, args.seed, args.rim_width), grid, 0.85 * args.smax)
    out = Path(args.out)
    write_field(out / "phantom", f, 0.85 * args.smax)
    write_pgm(out / "phantom.pgm", f)
    print(out / "phantom.json")
    return 0


def cmd_project(args) -> int:
    f = read_field(args.field)
    geom = build_geometry(f.grid, args.angles, args.offsets, args.smax)
    w, w0 = build_weight(args.weight, f.grid, geom, args.rim_width)
    p = forward_project(f, w, geom)
    out = Path(args.out)
    write_sinogram(out / "sinogram", p)
    write_field(out / "w0", w0, geom.mask_radius)
    print(out / "sinogram.json")
    return 0


def cmd_reconstruct(args) -> int:
    p = read_sinogram(args.sinogram)
    if args.w0:
        w0 = read_field(args.w0)
    else:
        w0 = ScalarField.constant(Grid2D.square(args.grid, p.geometry.s_max), 1.0)
    rec = chang_reconstruct(p, w0, eps=args.eps)
    out = Path(args.out)
    mr = p.geometry.mask_radius
    write_field(out / "reconstruction", rec, mr)
    write_pgm(out / "reconstruction.pgm", rec, rec.grid.disk_mask(mr))
    print(out / "reconstruction.json")
    return 0


def cmd_check_weight(args) -> int:
    grid = Grid2D.square(args.grid, args.smax)
    geom = build_geometry(grid, args.angles, args.offsets, args.smax)
    w, _ = build_weight(args.weight, grid, geom, args.rim_width)
    rep = check_exactness(w, grid, geom.angles, args.tol, geom.mask_radius)
    text = json.dumps({"weight": args.weight, **rep.to_dict()}, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "exactness.json").write_text(text + "\n")
    print(text)
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        grid=args.grid,
        angles=args.angles,
        offsets=args.offsets,
        s_max=args.smax,
        weight=args.weight,
        phantom=args.phantom,
        ladder=tuple(int(v) for v in args.ladder.split(",")),
        noise=args.noise,
        seed=args.seed,
        rim_width=args.rim_width,
        tol=args.tol,
    )
    m = run_experiment(cfg, args.out)
    sys.stdout.write(metrics_json(m))
    return 0


def cmd_noise(args) -> int:
    p = read_sinogram(args.sinogram)
    noisy = add_poisson_noise(p, args.count_scale, args.seed)
    out = Path(args.out)
    write_sinogram(out / "sinogram_noisy", noisy)
    print(out / "sinogram_noisy.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chang-radon", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="write a mollified phantom field")
    _sampling(p, projection=False)
    p.add_argument("--phantom", default="disk", choices=["disk", "random"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rim-width", type=float, default=RIM_WIDTH)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("project", help="weighted ray transform of a field")
    p.add_argument("--field", required=True)
    _sampling(p, grid=False)
    p.add_argument("--weight", default="uniform")
    p.add_argument("--rim-width", type=float, default=RIM_WIDTH)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("reconstruct", help="Chang reconstruction of a sinogram")
    p.add_argument("--sinogram", required=True)
    p.add_argument("--w0", help="angular-mean field; omitted means w0 = 1 on a --grid grid")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("check-weight", help="exactness report of a weight")
    _sampling(p)
    p.add_argument("--weight", default="uniform")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--rim-width", type=float, default=RIM_WIDTH)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_weight)

    p = sub.add_parser("experiment", help="refinement ladder experiment")
    _sampling(p)
    p.add_argument("--weight", default="uniform")
    p.add_argument("--phantom", default="disk", choices=["disk", "random"])
    p.add_argument("--ladder", default="1,2", help="comma-separated refinement factors")
    p.add_argument("--noise", type=float, help="Poisson count scale")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--rim-width", type=float, default=RIM_WIDTH)
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("noise", help="inject Poisson noise into a sinogram")
    p.add_argument("--sinogram", required=True)
    p.add_argument("--count-scale", type=float, default=1e4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_noise)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
