"""Register sizes needed for a target success probability at small eps.

Evaluates the closed-form CV-to-DV success probability
``P(n_q) = (L - L_eps) / L + 1/N`` (verified against simulation for
n_q <= 10 by the acceptance suite) and reports, per Fock order, the
smallest register reaching each target probability together with the
register left after the allowed ancilla discards.

Usage: python scripts/headline_extrapolation.py [--eps 1e-7] [--fock 0 10]
"""
import argparse

import numpy as np

from qumode_bridge.ancilla import max_discards
from qumode_bridge.grids import make_grid, support_radius
from qumode_bridge.transfer import predicted_cvdv_success


def closed_form_success(n_q: int, l_eps: float) -> float:
    """``(L - L_eps) / L + 1/N`` with ``L = sqrt(pi N / 2)``; valid beyond simulated sizes."""
    N = 2.0**n_q
    L = np.sqrt(np.pi * N / 2)
    return (L - l_eps) / L + 1 / N


def smallest_register(l_eps: float, target: float, n_max: int = 60):
    for n_q in range(1, n_max + 1):
        if closed_form_success(n_q, l_eps) >= target:
            return n_q
    return None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, default=1e-7)
    ap.add_argument("--fock", type=int, nargs="+", default=[0, 10])
    ap.add_argument("--targets", type=float, nargs="+", default=[0.99, 0.999])
    args = ap.parse_args(argv)
    print("n,target,L_eps,n_q_transfer,P,n_q_after_discards")
    for n in args.fock:
        l_eps = support_radius(n, args.eps).L_eps
        for target in args.targets:
            n_q = smallest_register(l_eps, target)
            p = closed_form_success(n_q, l_eps)
            after = n_q - max_discards(np.sqrt(np.pi * 2.0**n_q / 2), l_eps)
            print(f"{n},{target:g},{l_eps:.4f},{n_q},{p:.6f},{after}")
    # consistency of the closed form with the package helper on a simulable size
    g = make_grid(10)
    l_eps = support_radius(0, 1e-4).L_eps
    assert abs(closed_form_success(10, l_eps) - predicted_cvdv_success(g, l_eps)) < 1e-12


if __name__ == "__main__":
    main()
