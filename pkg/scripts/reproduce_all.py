#!/usr/bin/env python3
"""Regenerate every published dataset (table2, fig3..fig7) in one run.

Usage: python scripts/reproduce_all.py [outdir]
"""

import sys
import time

from sqbell.cli import main

TARGETS = ("table2", "fig3", "fig4", "fig5", "fig6", "fig7")


def run(outdir: str) -> int:
    for target in TARGETS:
        t0 = time.time()
        code = main(["reproduce", target, "--outdir", outdir])
        print(f"  {target}: exit {code} ({time.time() - t0:.1f}s)")
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run(sys.argv[1] if len(sys.argv) > 1 else "reproductions"))
