#!/usr/bin/env python3
"""Write clustered pickup-and-delivery instances in the Li & Lim text format.

The generated files mimic the LC2 class (clustered customers, one central
depot, wide time windows) so the benchmark can run without the original
SINTEF downloads. Output is fully determined by --seed.
"""
import argparse
import random


def generate(customers, clusters, vehicles, capacity, seed, extent):
    rng = random.Random(seed)
    centers = [(rng.uniform(0.1 * extent, 0.9 * extent),
                rng.uniform(0.1 * extent, 0.9 * extent)) for _ in range(clusters)]
    points = []
    for _ in range(customers):
        cx, cy = rng.choice(centers)
        x = min(max(round(rng.gauss(cx, 0.06 * extent)), 0), extent)
        y = min(max(round(rng.gauss(cy, 0.06 * extent)), 0), extent)
        points.append((x, y))
    ids = list(range(1, customers + 1))
    rng.shuffle(ids)
    horizon = 34 * extent
    rows = {0: (extent // 2, extent // 2, 0, 0, horizon, 0, 0, 0)}
    for a, b in zip(ids[0::2], ids[1::2]):
        pickup, delivery = min(a, b), max(a, b)
        demand = 10 * rng.randint(1, 4)
        px, py = points[pickup - 1]
        dx, dy = points[delivery - 1]
        rows[pickup] = (px, py, demand, 0, horizon, 90, 0, delivery)
        rows[delivery] = (dx, dy, -demand, 0, horizon, 90, pickup, 0)
    lines = [f"{vehicles}\t{capacity}\t1"]
    for i in range(customers + 1):
        x, y, q, e, l, s, p, d = rows[i]
        lines.append(f"{i}\t{x}\t{y}\t{q}\t{e}\t{l}\t{s}\t{p}\t{d}")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--customers", type=int, required=True)
    parser.add_argument("--clusters", type=int, default=8)
    parser.add_argument("--vehicles", type=int, default=25)
    parser.add_argument("--capacity", type=int, default=700)
    parser.add_argument("--extent", type=int, default=90)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()
    if args.customers % 2:
        parser.error("--customers must be even (pickup/delivery pairs)")
    with open(args.out, "w") as f:
        f.write(generate(args.customers, args.clusters, args.vehicles,
                         args.capacity, args.seed, args.extent))


if __name__ == "__main__":
    main()
