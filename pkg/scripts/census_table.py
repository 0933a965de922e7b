"""Orbit census over F_q for genus one, summarized by cycle type."""
import argparse
from collections import defaultdict

from selmer2.census import ff_census_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=3)
    args = ap.parse_args()
    rows, so = ff_census_all(1, args.q)
    by_type = defaultdict(list)
    for r in rows:
        by_type[r.cycle_type].append(r)
    print(f"q = {args.q}, |SO(U)(F_q)| = {so}, {len(rows)} separable quartics")
    print("cycle_type  fibers  points  orbits  predicted  distinguished  stabilizers")
    for ct, rs in sorted(by_type.items()):
        r = rs[0]
        uniform = all((x.points, x.orbits, x.stabilizers) == (r.points, r.orbits, r.stabilizers) for x in rs)
        print(f"{' '.join(map(str, ct)):<11} {len(rs):>6}  {r.points:>6}  {r.orbits:>6}  {r.predicted_orbits():>9}"
              f"  {r.distinguished_orbits:>13}  {' '.join(map(str, r.stabilizers))}{'' if uniform else '  (varies)'}")


if __name__ == "__main__":
    main()
