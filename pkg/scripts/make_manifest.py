#!/usr/bin/env python3
"""Regenerate the bundled evaluation manifest (data/manifest_100.jsonl).

96 clean eyes with randomized geometry plus 4 flash-corrupted ones; seeds are
fixed so the file is reproducible byte for byte.
"""

import argparse
from pathlib import Path

from vigileye import synth

CLEAN_SEEDS = range(96)
FLASH_SEEDS = range(9600, 9604)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "-o",
        "--output",
        default=Path(__file__).resolve().parent.parent / "data" / "manifest_100.jsonl",
    )
    args = parser.parse_args()
    specs = [synth.sample_spec(seed) for seed in CLEAN_SEEDS]
    specs += [synth.sample_spec(seed, with_flash=True) for seed in FLASH_SEEDS]
    synth.save_manifest(args.output, specs)
    print(f"wrote {len(specs)} eye specs to {args.output}")


if __name__ == "__main__":
    main()
