"""Run every CLI experiment on its shipped config and summarize exit codes.

Usage: python scripts/run_all.py [--out results] [--jobs 4]
"""
import argparse
import time
from pathlib import Path

from qumode_bridge.cli import main as cli_main

RUNS = [
    ("represent", "represent.cfg"),
    ("represent", "represent_small.cfg"),
    ("transfer-cvdv", "transfer_cvdv.cfg"),
    ("transfer-dvcv", "transfer_dvcv.cfg"),
    ("squeeze-decomp", "squeeze.cfg"),
    ("gate-counts", "gate_counts.cfg"),
    ("resize-demo", "resize.cfg"),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    configs = Path(__file__).resolve().parents[1] / "configs"
    summary = []
    for command, cfg in RUNS:
        out = Path(args.out) / Path(cfg).stem
        t0 = time.perf_counter()
        code = cli_main([command, "--config", str(configs / cfg), "--out", str(out),
                         "--jobs", str(args.jobs)])
        summary.append((command, cfg, code, time.perf_counter() - t0))
    print("\ncommand,config,exit_code,seconds")
    for command, cfg, code, dt in summary:
        print(f"{command},{cfg},{code},{dt:.1f}")


if __name__ == "__main__":
    main()
