#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Oracle Soundness Sweep
Recovers the levels of random Ising models and grades them against
brute-force diagonalization
"""

import sys
import json
import time
import argparse
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

sys.path.insert(0, str(Path(__file__).parent))

import numpy as np

from lib.config import OUTPUT_DIR
from lib.model import random_ising
from lib.runner import plan_soundness_case, run_soundness_case


def draw_cases(count, n_qubits, seed, max_attempts=1000):
    """Random models whose closest levels are resolvable, with their grid plans."""
    rng = np.random.default_rng(seed)
    cases = []
    attempts = 0
    while len(cases) < count:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError(f"only {len(cases)}/{count} resolvable models in {max_attempts} draws")
        model = random_ising(rng, n_qubits, name=f"ising-{len(cases) + 1}")
        plan = plan_soundness_case(model)
        if plan is not None:
            cases.append((model, plan))
    return cases


def display_results(rows):
    """Display the sweep as a table."""
    print("\n" + "="*70)
    print(" SOUNDNESS RESULTS")
    print("="*70 + "\n")
    print(f"  {'model':<10} {'levels':>6} {'gap':>7} {'N':>6} {'matched':>8} "
          f"{'missed':>7} {'spurious':>9} {'max|d|':>8}")
    print("  " + "-"*66)
    for row in rows:
        print(f"  {row['model']:<10} {row['levels']:>6} {row['min_gap']:>7.3f} {row['n_max']:>6} "
              f"{row['matched']:>8} {row['missed']:>7} {row['spurious']:>9} {row['max_delta']:>8.4f}")

    passed = sum(1 for row in rows if row["ok"])
    print("\n" + "="*70)
    print(f"  {passed}/{len(rows)} models recovered with zero missed and zero spurious levels")
    print("="*70)


def main():
    """Main entry point"""
    parser = argparse.ArgumentParser(description="Random Ising oracle soundness sweep")
    parser.add_argument("--count", type=int, default=20, help="Number of random models")
    parser.add_argument("--qubits", type=int, default=5, help="Qubits per model")
    parser.add_argument("--seed", type=int, default=2024, help="Seed for model generation")
    parser.add_argument("--tolerance", type=float, default=0.05, help="Matching tolerance")
    parser.add_argument("--output", "-o", type=str,
                        default=str(Path(OUTPUT_DIR) / "oracle_sweep.json"),
                        help="Results JSON file")
    args = parser.parse_args()

    start_time = time.time()
    cases = draw_cases(args.count, args.qubits, args.seed)
    print(f"✓ Drew {len(cases)} resolvable models on {args.qubits} qubits")

    rows = []
    for i, (model, plan) in enumerate(cases, 1):
        print(f"[{i}/{len(cases)}] {model.name}: tau = {plan.tau:.4f}, N = {plan.n_max}")
        comparison, _ = run_soundness_case(model, plan, tolerance=args.tolerance)
        rows.append({
            "model": model.name,
            "levels": len(comparison.matched) + len(comparison.missed),
            "min_gap": plan.min_gap,
            "tau": plan.tau,
            "n_max": plan.n_max,
            "matched": len(comparison.matched),
            "missed": len(comparison.missed),
            "spurious": len(comparison.spurious),
            "max_delta": max((d for _, _, d in comparison.matched), default=0.0),
            "ok": comparison.ok,
            "comparison": comparison.to_dict(),
        })

    display_results(rows)

    output = Path(args.output)
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", encoding="utf-8") as f:
        json.dump({"seed": args.seed, "qubits": args.qubits, "results": rows}, f, indent=2)
        f.write("\n")
    print(f"\n✓ Results saved to: {output}")
    print(f"✓ Completed in {time.time() - start_time:.1f} seconds\n")

    return 0 if all(row["ok"] for row in rows) else 3


if __name__ == "__main__":
    sys.exit(main())
