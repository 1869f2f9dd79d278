"""Solve emitted LP models with HiGHS and compare against the exact solver.

Usage: python scripts/lp_crosscheck.py [--count N] [--bin target/release/incflow]
Needs the `highspy` package. Not part of the test suite.
"""

import argparse
import json
import subprocess
import tempfile
from pathlib import Path

import highspy


def run(binary, *args):
    return subprocess.run([binary, *args], check=True, capture_output=True, text=True).stdout


def solve_lp(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.readModel(str(path))
    h.run()
    return h.getInfo().objective_function_value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--bin", default="target/release/incflow")
    args = ap.parse_args()
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        jobs = [(seed, None) for seed in range(args.count)]
        jobs += [(f"{w}-{k}", (w, k)) for w, k in [("F1", 1), ("F2", 3), ("F3", 3), ("F4", 3), ("F5", 2), ("M2", 0)]]
        for seed, fam in jobs:
            inst = tmp / f"i{seed}.txt"
            if fam:
                run(args.bin, "gen", "--out", str(inst), "family", "--which", fam[0], "--k", str(fam[1]))
            else:
                kind = ["general", "--n", "6", "--d", "0.8"] if seed % 2 else ["layered", "--layers", "3", "--width", "2", "--d", "0.8"]
                run(args.bin, "gen", "--out", str(inst), *kind, "--p", "0.5", "--u-max", "3", "--seed", str(seed))
            exact = json.loads(run(args.bin, "--format", "json", "exact", "--instance", str(inst)))["optimum"]
            lp1, lp2 = tmp / f"i{seed}_1.lp", tmp / f"i{seed}_2.lp"
            run(args.bin, "emit-lp", "--model", "imfp1", "--instance", str(inst), "--out", str(lp1))
            run(args.bin, "emit-lp", "--model", "imfp2", "--instance", str(inst), "--out", str(lp2))
            z1 = round(solve_lp(lp1))
            tf = int(lp2.read_text().splitlines()[2].split("=")[2].split("-")[0])
            z2 = tf - round(solve_lp(lp2))
            ok = z1 == exact == z2
            failures += not ok
            print(f"{seed}: exact {exact} imfp1 {z1} imfp2 {z2} {'ok' if ok else 'MISMATCH'}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
