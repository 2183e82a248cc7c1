"""Regenerate the embedded D'Agostino D percentile table.

Simulates D for normal samples at each tabulated n and records percentiles
of Y = sqrt(n) * (D - 1/(2 sqrt(pi))) / 0.02998598.

    python tools/dagostino_table.py > src/emgkit/_dagostino_table.py
"""
import argparse
import math

import numpy as np

NS = (10, 12, 14, 16, 18, 20, 25, 30, 35, 40, 45, 50, 60, 70, 80, 90, 100,
      150, 200, 250, 300, 400, 500, 600, 700, 800, 900, 1000, 1500, 2000)
PROBS = (0.005, 0.025, 0.975, 0.995)
CENTER = 1.0 / (2.0 * math.sqrt(math.pi))
SCALE = 0.02998598


def simulate_y(n, reps, rng, chunk_elems=20_000_000):
    weights = np.arange(1, n + 1) - (n + 1) / 2.0
    out = np.empty(reps)
    per = max(1, chunk_elems // n)
    for i in range(0, reps, per):
        k = min(per, reps - i)
        x = np.sort(rng.standard_normal((k, n)), axis=1)
        d = (x @ weights) / (n * n * x.std(axis=1))
        out[i:i + k] = math.sqrt(n) * (d - CENTER) / SCALE
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=19710101)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print('"""Percentiles of D\'Agostino\'s Y statistic for normal samples.')
    print()
    print("Generated by tools/dagostino_table.py "
          f"(Monte Carlo, {args.reps} replicates per n, seed {args.seed}).")
    print('"""')
    print()
    print("ALPHAS = (0.05, 0.01)")
    print(f"PROBS = {PROBS}")
    print("QUANTILES = {")
    for n in NS:
        q = np.quantile(simulate_y(n, args.reps, rng), PROBS)
        body = ", ".join(f"{p}: {v:.4f}" for p, v in zip(PROBS, q))
        print(f"    {n}: {{{body}}},")
    print("}")


if __name__ == "__main__":
    main()
