"""Command-line front end for the eye pipeline.

Exit codes: 0 success, 2 input or usage error, 3 algorithmic failure
(no entropy convergence, collapsed clustering, missing pupil mask).
Structured results go to stdout as JSON; images are PGM; traces and
surfaces are CSV.
"""

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import fuzzy, gabor_pca, iris_entropy, pupil, synth
from .config import PipelineConfig, load_config, resolved_d0
from .errors import AlgorithmFailure, PipelineError
from .image import load_image, write_pgm
from .spectral import apply_filter, make_band_pass


def _add_common(parser):
    parser.add_argument("--config", help="pipeline config file (section.key=value)")
    parser.add_argument("--d0", type=float, help="band-pass cutoff radius")
    parser.add_argument("--sigma", type=float, help="band-pass Gaussian std")
    parser.add_argument("--template", type=int, help="accumulation template size (odd)")
    parser.add_argument("--percentile", type=float, help="pupil binarization percentile")
    parser.add_argument("--e-max", type=float, dest="e_max", help="entropy stop threshold")
    parser.add_argument("--samples", type=int, help="circle sample count (power of two)")
    parser.add_argument("--gamma", type=float, help="Gabor envelope aspect ratio")
    parser.add_argument("--bandwidth", type=float, help="Gabor bandwidth in octaves")
    parser.add_argument("--components", type=int, help="PCA components for clustering")
    parser.add_argument("--fuzzy-config", dest="fuzzy_config", help="fuzzy sets file")


def _config_from(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    overrides = {
        name: getattr(args, name)
        for name in (
            "d0",
            "sigma",
            "template",
            "percentile",
            "e_max",
            "samples",
            "gamma",
            "bandwidth",
            "components",
            "fuzzy_config",
        )
        if getattr(args, name, None) is not None
    }
    return replace(cfg, **overrides) if overrides else cfg


def _band_pass_for(img, cfg: PipelineConfig):
    rows, cols = img.shape
    return make_band_pass(rows, cols, resolved_d0(cfg, rows, cols), cfg.sigma)


def _detect(img, cfg: PipelineConfig, correct: bool = True):
    return pupil.detect_pupil(
        img,
        _band_pass_for(img, cfg),
        template=cfg.template,
        percentile=cfg.percentile,
        correct=correct,
    )


def _segment_gabor(img, est, cfg: PipelineConfig):
    bank = gabor_pca.build_bank(*img.shape, gamma=cfg.gamma, bandwidth=cfg.bandwidth)
    stack = gabor_pca.normalize(gabor_pca.gabor_features(img, bank))
    model = gabor_pca.fit_pca(stack)
    mask = gabor_pca.classify_iris(stack, model, est, components=cfg.components)
    return mask, model


def cmd_filter(args) -> int:
    img = load_image(args.image)
    out = apply_filter(img, _band_pass_for(img, _config_from(args)))
    write_pgm(args.output, out)
    return 0


def cmd_pupil(args) -> int:
    cfg = _config_from(args)
    img = load_image(args.image)
    est = _detect(img, cfg, correct=not args.no_correct)
    print(json.dumps(est.to_dict()))
    return 0


def cmd_iris(args) -> int:
    cfg = _config_from(args)
    img = load_image(args.image)
    est = _detect(img, cfg)
    if est.error is not None:
        print(f"error: pupil detection failed ({est.error})", file=sys.stderr)
        return 3
    if args.method == "entropy":
        annulus = iris_entropy.segment(img, est, e_max=cfg.e_max, n=cfg.samples)
        mask = iris_entropy.annulus_mask(annulus, *img.shape)
        if args.trace_csv:
            _write_trace_csv(args.trace_csv, annulus)
        summary = {
            "method": "entropy",
            "inner_radius": annulus.inner_radius,
            "outer_radius": annulus.outer_radius,
            "circles": len(annulus.entropy_trace),
        }
    else:
        mask, model = _segment_gabor(img, est, cfg)
        if args.pca_csv:
            _write_pca_csv(args.pca_csv, model)
        summary = {
            "method": "gabor",
            "mask_pixels": int(mask.sum()),
            "mask_fraction": float(mask.mean()),
        }
    write_pgm(args.output, mask.astype(np.float64))
    print(json.dumps(summary))
    return 0


def _write_trace_csv(path, annulus) -> None:
    lines = ["radius,h,e"]
    lines += [f"{r},{h!r},{e!r}" for r, h, e in annulus.entropy_trace]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_pca_csv(path, model) -> None:
    with open(path, "w") as fh:
        for row in model.coefficients:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def cmd_eval(args) -> int:
    cfg = _config_from(args)
    specs = synth.load_manifest(args.manifest)
    if not specs:
        raise PipelineError(f"manifest {args.manifest} contains no eye specs")
    rows = []
    for index, spec in enumerate(specs):
        img, truth = synth.render(spec)
        est = _detect(img, cfg)
        pupil_err = float(np.hypot(est.cx - truth.cx, est.cy - truth.cy))
        pupil_ok = est.error is None and pupil_err <= 2.0

        entropy_outer = ""
        entropy_ok = False
        gabor_iou = 0.0
        if est.error is None:
            try:
                annulus = iris_entropy.segment(img, est, e_max=cfg.e_max, n=cfg.samples)
                entropy_outer = f"{annulus.outer_radius:.2f}"
                entropy_ok = abs(annulus.outer_radius - truth.iris_radius) <= 2.0
            except AlgorithmFailure:
                pass
            try:
                mask, _ = _segment_gabor(img, est, cfg)
                truth_annulus = iris_entropy.IrisAnnulus(
                    center=(truth.cx, truth.cy),
                    inner_radius=truth.pupil_radius,
                    outer_radius=truth.iris_radius,
                    entropy_trace=(),
                )
                gabor_iou = gabor_pca.mask_iou(
                    mask, iris_entropy.annulus_mask(truth_annulus, *img.shape)
                )
            except AlgorithmFailure:
                pass
        gabor_ok = gabor_iou >= 0.85

        rows.append(
            {
                "index": index,
                "seed": spec.seed,
                "pupil_err": f"{pupil_err:.3f}",
                "pupil_ok": int(pupil_ok),
                "entropy_outer": entropy_outer,
                "entropy_ok": int(entropy_ok),
                "gabor_iou": f"{gabor_iou:.4f}",
                "gabor_ok": int(gabor_ok),
            }
        )

    header = list(rows[0].keys())
    lines = [",".join(header)]
    lines += [",".join(str(r[k]) for k in header) for r in rows]
    with open(args.output, "w") as fh:
        fh.write("\n".join(lines) + "\n")

    n = len(rows)
    for name in ("pupil_ok", "entropy_ok", "gabor_ok"):
        good = sum(r[name] for r in rows)
        print(f"{name.removesuffix('_ok')}: {good}/{n} = {100.0 * good / n:.2f}%")
    return 0


def cmd_vigilance(args) -> int:
    cfg = _config_from(args)
    sets = fuzzy.load_sets(cfg.fuzzy_config) if cfg.fuzzy_config else None
    if args.stream:
        events = fuzzy.read_blink_stream(args.stream)
        f, t = fuzzy.measure_blink_stream(events)
    else:
        if args.f is None or args.t is None:
            raise PipelineError("provide --f and --t, or --stream")
        f, t = args.f, args.t
    reading = fuzzy.infer(f, t, sets)
    print(json.dumps(reading.to_dict()))
    return 0


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, count = text.split(":")
        grid = np.linspace(float(start), float(stop), int(count))
    except ValueError:
        raise PipelineError(f"bad grid spec {text!r}, want start:stop:count") from None
    if grid.size == 0:
        raise PipelineError("grid must contain at least one point")
    return grid


def cmd_surface(args) -> int:
    cfg = _config_from(args)
    sets = fuzzy.load_sets(cfg.fuzzy_config) if cfg.fuzzy_config else None
    f_grid = _parse_grid(args.f_grid)
    t_grid = _parse_grid(args.t_grid)
    levels = fuzzy.control_surface(f_grid, t_grid, sets)
    lines = ["f,T,level"]
    for i, fv in enumerate(f_grid):
        for j, tv in enumerate(t_grid):
            lines.append(f"{float(fv)!r},{float(tv)!r},{float(levels[i, j])!r}")
    with open(args.output, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def cmd_synth(args) -> int:
    specs = synth.load_manifest(args.manifest)
    if not specs:
        raise PipelineError(f"manifest {args.manifest} contains no eye specs")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    for index, spec in enumerate(specs):
        img, truth = synth.render(spec)
        stem = outdir / f"eye_{index:04d}"
        write_pgm(stem.with_suffix(".pgm"), img)
        stem.with_suffix(".json").write_text(json.dumps(synth.truth_to_dict(truth)))
    print(f"rendered {len(specs)} images to {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vigileye",
        description="Pupil detection, iris segmentation, and fuzzy vigilance scoring",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter", help="band-pass filter an eye image")
    p.add_argument("image")
    p.add_argument("-o", "--output", required=True, help="filtered PGM path")
    _add_common(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("pupil", help="detect and correct the pupil center")
    p.add_argument("image")
    p.add_argument("--no-correct", action="store_true", help="report the raw summit only")
    _add_common(p)
    p.set_defaults(func=cmd_pupil)

    p = sub.add_parser("iris", help="segment the iris region")
    p.add_argument("image")
    p.add_argument("--method", required=True, choices=("entropy", "gabor"))
    p.add_argument("-o", "--output", required=True, help="mask PGM path")
    p.add_argument("--trace-csv", help="write the entropy trace (radius, h, e)")
    p.add_argument("--pca-csv", help="write the 18x18 PCA coefficient matrix")
    _add_common(p)
    p.set_defaults(func=cmd_iris)

    p = sub.add_parser("eval", help="run both methods over a synthetic manifest")
    p.add_argument("manifest")
    p.add_argument("-o", "--output", required=True, help="per-image results CSV")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("vigilance", help="fuzzy vigilance reading from f/T or a stream")
    p.add_argument("--f", type=float, help="glances per minute")
    p.add_argument("--t", type=float, help="current closed-eye interval, seconds")
    p.add_argument("--stream", help="blink stream file (timestamp 0|1 per line)")
    _add_common(p)
    p.set_defaults(func=cmd_vigilance)

    p = sub.add_parser("surface", help="export the control surface as CSV")
    p.add_argument("--f-grid", required=True, help="start:stop:count")
    p.add_argument("--t-grid", required=True, help="start:stop:count")
    p.add_argument("-o", "--output", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("synth", help="render a manifest to PGM images + ground truth")
    p.add_argument("manifest")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AlgorithmFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (PipelineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
