"""How well P_Wappr f approximates attenuated data, by attenuation strength.

    python scripts/spect_gap.py --grid 128
"""

import argparse

from chang_radon.experiment import approximation_gap


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=128)
    ap.add_argument("--strengths", default="0.1,0.3,1.0,1.5")
    args = ap.parse_args()
    print(f"{'a':>6}{'data gap':>12}{'Chang error':>14}")
    for a in (float(v) for v in args.strengths.split(",")):
        r = approximation_gap(a, n=args.grid)
        print(f"{a:>6.2f}{r['data_gap']:>12.4f}{r['chang_error']:>14.4f}")


if __name__ == "__main__":
    main()
