"""Condition-number control on a batch of random matrices.

Draws a large set of 3x3 matrices with N(0, 0.01) entries — such matrices
are frequently ill-conditioned — and applies each tail-replacement preset.
For every preset it reports the observed range of post-surgery condition
numbers against the analytic bound implied by the convex combination, and
confirms that the spectral norm never moves.

Usage: python demos/surgery_batch.py [count]
"""

import sys

import numpy as np

from svdsurgery.cloud import Gaussian, generate_matrices
from svdsurgery.surgery import apply_surgery, preset_plans

ANALYTIC_BOUNDS = {
    "TAIL_TO_SIGMA2": "sigma1/sigma2 of the input (unbounded)",
    "THIRD_ONE": "[1, 3]",
    "HALF_HALF": "[1, 2]",
    "FULL_ORTHO": "exactly 1",
}


def main() -> None:
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 10_000
    mset = generate_matrices(count, 3, 3, Gaussian(0.0, 0.01), seed=0)

    before = []
    for m in mset.matrices:
        s = np.linalg.svd(m, compute_uv=False)
        before.append(s[0] / s[-1])
    before = np.array(before)
    print(f"{count} matrices drawn from N(0, 0.01)")
    print(f"condition numbers before surgery: min {before.min():.3f}, "
          f"median {np.median(before):.1f}, max {before.max():.1f}\n")

    for name, plan in preset_plans(3).items():
        kappas = []
        norm_drift = 0.0
        for m in mset.matrices:
            _, report = apply_surgery(m, plan)
            kappas.append(report.kappa_after)
            norm_drift = max(norm_drift,
                             abs(report.norm_after - report.norm_before)
                             / report.norm_before)
        kappas = np.array(kappas)
        print(f"{name:15s} kappa in [{kappas.min():.4f}, {kappas.max():.4f}]"
              f"   analytic: {ANALYTIC_BOUNDS[name]}")
        print(f"{'':15s} max relative norm change {norm_drift:.2e}")


if __name__ == "__main__":
    main()
