#!/usr/bin/env python3
"""Desk experiment: compare the closed-form pipeline against the Fock oracle.

Builds a handful of conditioned states both ways and prints the worst
characteristic-function and success-probability deviations, plus timings.

Usage: python scripts/oracle_crosscheck.py [cutoff]
"""

import itertools
import sys
import time
import warnings

import numpy as np

from sqbell import fock_sim as fs
from sqbell import resources as rs
from sqbell.conditioning import LossyProjectorWarning

CONFIGS = [
    ("ideal", rs.SchemeConfig(r=0.6, s=0.01)),
    ("ideal", rs.SchemeConfig(r=0.6, s=0.01, T_loss=0.85)),
    ("on-off", rs.SchemeConfig(r=0.6, s=0.01, eta3=0.15, eta4=0.15)),
    ("on-off", rs.SchemeConfig(r=0.8, s=0.03, T_loss=0.85)),
]


def main(cutoff: int) -> int:
    vals = np.linspace(-0.45, 0.45, 3)
    grid = [(a + 1j * b, c + 1j * d)
            for a, b, c, d in itertools.product(vals, repeat=4)]
    print(f"cutoff {cutoff}, {len(grid)} grid points per configuration")
    print(f"{'detector':8s} {'r':>4s} {'s':>6s} {'T_loss':>6s}  "
          f"{'max |dchi|':>11s} {'dsuccess':>10s} {'seconds':>8s}")
    worst = 0.0
    for detector, cfg in CONFIGS:
        t0 = time.time()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", LossyProjectorWarning)
            state = rs.scheme_state(cfg, detector)
            rho, succ = fs.scheme_oracle(cfg, detector, cutoff=cutoff)
        chi_o = fs.char_function_batch(rho, np.array([b1 for b1, _ in grid]),
                                       np.array([b2 for _, b2 in grid]))
        dev = max(abs(c - state.chi_at(b1, b2))
                  for (b1, b2), c in zip(grid, chi_o))
        dsucc = abs(succ - state.success_prob)
        worst = max(worst, dev)
        print(f"{detector:8s} {cfg.r:4.1f} {cfg.s:6.3f} {cfg.T_loss:6.2f}  "
              f"{dev:11.3e} {dsucc:10.3e} {time.time() - t0:8.2f}")
    print(f"worst characteristic-function deviation: {worst:.3e}")
    return 0 if worst < 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main(int(sys.argv[1]) if len(sys.argv) > 1 else 22))
