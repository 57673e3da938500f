"""Ping-pong margin of the Schottky seed as a function of the stretch factor."""

import argparse
from fractions import Fraction

from seifert_obstruct.pingpong import (
    certify_pingpong,
    default_spread,
    geodesic_distance,
    schottky_generators,
    schottky_layout,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--generators", type=int, default=4)
    ap.add_argument("--fill", type=float, default=0.9)
    args = ap.parse_args()
    n = args.generators
    att, rep = schottky_layout(n, args.fill)
    d = geodesic_distance(rep[0], att[0])
    print(f"{n} generators, fill {args.fill}: geodesic gap {d:.4f}, default spread {default_spread(att, rep)}")
    names = [f"g{i}" for i in range(n)]
    for lam in (Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3), Fraction(4), Fraction(6), Fraction(10)):
        ms, att, rep, _ = schottky_generators(n, spread=lam, fill=args.fill)
        cert = certify_pingpong(names, ms, att, rep)
        print(f"  spread {str(lam):>4s}: margin {cert.margin:+.5f}")


if __name__ == "__main__":
    main()
