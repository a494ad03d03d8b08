#!/usr/bin/env python3
"""Sweep the entropy stop threshold over the synthetic suite.

For each candidate e_max, reports how often the recovered outer radius lands
within 2 px of ground truth and the worst mid-iris entropy step observed,
i.e. how much headroom the threshold has before false stops appear.
"""

import argparse

import numpy as np

from vigileye import iris_entropy, pupil, synth
from vigileye.errors import AlgorithmFailure


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--eyes", type=int, default=40)
    parser.add_argument(
        "--thresholds", default="0.08,0.10,0.12,0.15,0.20,0.25",
        help="comma-separated e_max candidates",
    )
    args = parser.parse_args()

    cases = []
    for seed in range(args.eyes):
        img, truth = synth.render(synth.sample_spec(seed))
        cases.append((img, truth, pupil.detect_pupil(img)))

    for e_max in (float(t) for t in args.thresholds.split(",")):
        hits = 0
        worst_mid = 0.0
        for img, truth, est in cases:
            try:
                ann = iris_entropy.segment(img, est, e_max=e_max)
            except AlgorithmFailure:
                continue
            if abs(ann.outer_radius - truth.iris_radius) <= 2.0:
                hits += 1
            mid_steps = [abs(e) for _, _, e in ann.entropy_trace[1:-1]]
            if mid_steps:
                worst_mid = max(worst_mid, max(mid_steps))
        print(
            f"e_max={e_max:5.2f}: {hits}/{len(cases)} within 2 px "
            f"({100.0 * hits / len(cases):5.1f}%), worst mid-iris |e| {worst_mid:.3f}"
        )

    print("\nnp/mean of per-circle |e| at the stopping step:")
    jumps = []
    for img, truth, est in cases:
        try:
            ann = iris_entropy.segment(img, est, e_max=0.15)
            jumps.append(abs(ann.entropy_trace[-1][2]))
        except AlgorithmFailure:
            pass
    print(f"boundary |e|: min {min(jumps):.3f} mean {np.mean(jumps):.3f}")


if __name__ == "__main__":
    main()
