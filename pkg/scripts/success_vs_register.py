"""Measured CV-to-DV success probability against the closed form, per register size.

Writes ``success_vs_register.csv`` with columns
``n_q, n, eps, p_success, predicted``.

Usage: python scripts/success_vs_register.py [--n-q 5 6 7 8 9 10] [--fock 0 10 31]
"""
import argparse
from pathlib import Path

from qumode_bridge.cli import write_csv
from qumode_bridge.grids import make_grid, support_radius
from qumode_bridge.transfer import cvdv_success_probability, fock_number_state


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-q", type=int, nargs="+", default=[5, 6, 7, 8, 9, 10])
    ap.add_argument("--fock", type=int, nargs="+", default=[0, 10, 31])
    ap.add_argument("--eps", type=float, default=1e-4)
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)
    rows = []
    for n_q in args.n_q:
        g = make_grid(n_q)
        for n in args.fock:
            if support_radius(n, args.eps).L_eps >= g.L:
                continue  # the register cannot hold this state
            rep = cvdv_success_probability(fock_number_state(n, g), args.eps)
            rows.append((n_q, n, args.eps, rep.p_success, rep.predicted))
            print(f"n_q={n_q} n={n}: P={rep.p_success:.4f} closed form {rep.predicted:.4f}")
    write_csv(Path(args.out) / "success_vs_register.csv",
              ["n_q", "n", "eps", "p_success", "predicted"], rows)


if __name__ == "__main__":
    main()
