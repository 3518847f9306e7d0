"""Batch command-line interface.

Exit codes: 0 success, 2 usage error, 3 data/format error, 4 numeric error.
"""
import argparse
import os
import sys

import numpy as np

from . import analysis, dataio, pgm, spikes
from .errors import (
    ArgumentError,
    ConvergenceError,
    FormatError,
    InsufficientSamplesError,
    NonFiniteError,
    ParseError,
    PcaError,
    RangeError,
    ShapeError,
    SymmetryError,
    UndefinedRatioError,
    VerticalLineError,
)
from .linalg import frobenius
from .pca import center, covariance, fit, project, reconstruct, spectral_ratio

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

DEFAULT_SEED = 0
DEFAULT_SPIKE_COUNTS = (1000, 1000)
DEFAULT_SPIKE_NOISE = 5.0
DEFAULT_SPIKE_JITTER = 0.15

_EXIT_CODES = (
    ((RangeError, ArgumentError), EXIT_USAGE),
    ((ParseError, FormatError, ShapeError, NonFiniteError, InsufficientSamplesError, OSError), EXIT_DATA),
    ((ConvergenceError, SymmetryError, UndefinedRatioError, VerticalLineError), EXIT_NUMERIC),
)


def num(v):
    return f"{float(v):.10g}"


def nums(values):
    return ", ".join(num(v) for v in values)


def _print_spectrum(model, out):
    print(f"eigenvalues: {nums(model.eigenvalues)}", file=out)
    if model.total_variance > 0:
        for r in range(1, model.variable_count + 1):
            ratio = spectral_ratio(model, r)
            print(f"spectral_ratio[{r}]: {num(ratio)} ({ratio * 100:.4f}%)", file=out)


def _components_arg(args, m):
    r = m if args.components is None else args.components
    if not 1 <= r <= m:
        raise RangeError(f"--components must lie in [1, {m}], got {r}")
    return r


def cmd_fit(args, out):
    ds = dataio.load_csv(args.csv, args.orientation)
    model = fit(ds.data)
    r = _components_arg(args, model.variable_count)
    scores = project(model, ds.data, r)
    os.makedirs(args.out, exist_ok=True)
    labels = [f"PC{k + 1}" for k in range(r)]
    dataio.save_csv(model.components[:, :r], os.path.join(args.out, "components.csv"), header=labels)
    dataio.save_csv(scores.coords, os.path.join(args.out, "scores.csv"))
    dataio.save_csv(model.mean[:, None], os.path.join(args.out, "mean.csv"))
    dataio.save_csv(model.eigenvalues[:, None], os.path.join(args.out, "eigenvalues.csv"))

    print(f"input: {args.csv}", file=out)
    print(f"variables: {model.variable_count}", file=out)
    print(f"samples: {model.sample_count}", file=out)
    print(f"variable_names: {', '.join(ds.variable_names)}", file=out)
    print(f"mean: {nums(model.mean)}", file=out)
    _print_spectrum(model, out)
    print(f"components_kept: {r}", file=out)
    print(f"outputs: components.csv, scores.csv, mean.csv, eigenvalues.csv in {args.out}", file=out)


def cmd_demo_heightweight(args, out):
    ds = dataio.embedded_height_weight()
    model = fit(ds.data)
    s = covariance(center(ds.data, model.mean))
    slope, (a, b) = analysis.best_fit_line(model)
    print(f"dataset: {ds.source_label} ({ds.shape[0]} x {ds.shape[1]})", file=out)
    print(f"mean: {nums(model.mean)}", file=out)
    print(f"covariance: [[{nums(s[0])}], [{nums(s[1])}]]", file=out)
    for k in range(2):
        print(f"lambda{k + 1}: {num(model.eigenvalues[k])}", file=out)
        print(f"v{k + 1}: {nums(model.components[:, k])}", file=out)
    print(f"spectral_ratio[1]: {num(spectral_ratio(model, 1))}", file=out)
    print(f"best_fit_line: y - {num(b)} = {num(slope)} (x - {num(a)})", file=out)


def _sidecar_path(path):
    root, _ = os.path.splitext(path)
    return root + "_eigenvalues.csv"


def cmd_compress(args, out):
    image = pgm.load_pgm(args.pgm)
    x = image.pixels
    if not 1 <= args.components <= image.height:
        raise RangeError(f"--components must lie in [1, {image.height}] for this image, got {args.components}")
    model = fit(x)
    r = args.components
    approx = reconstruct(model, project(model, x, r))
    written = pgm.quantize(approx).astype(np.float64)
    pgm.save_pgm(written, args.out)
    sidecar = _sidecar_path(args.out)
    dataio.save_csv(model.eigenvalues[:, None], sidecar)

    norm = frobenius(x)
    rel = frobenius(x - written) / norm if norm > 0 else 0.0
    print(f"input: {args.pgm} ({image.height} x {image.width})", file=out)
    print(f"components: {r}", file=out)
    if model.total_variance > 0:
        ratio = spectral_ratio(model, r)
        print(f"spectral_ratio: {num(ratio)} ({ratio * 100:.4f}%)", file=out)
    else:
        print("spectral_ratio: undefined (constant image)", file=out)
    print(f"relative_frobenius_error: {num(rel)}", file=out)
    print(f"max_abs_pixel_error: {num(np.max(np.abs(x - written)))}", file=out)
    print(f"output: {args.out}", file=out)
    print(f"eigenvalues_csv: {sidecar}", file=out)


def cmd_biplot(args, out):
    ds = dataio.load_csv(args.csv, args.orientation)
    r = 2 if args.components is None else args.components
    if r not in (2, 3):
        raise RangeError(f"--components must be 2 or 3 for a biplot, got {r}")
    model = fit(ds.data)
    bp = analysis.biplot_data(model, ds.data, ds.variable_names, r)
    analysis.write_biplot(bp, args.out)
    print(f"input: {args.csv}", file=out)
    print(f"components: {r}", file=out)
    print(f"spectral_ratio: {num(spectral_ratio(model, r))}", file=out)
    for label, (lo, hi) in zip(bp.component_labels, bp.score_ranges()):
        print(f"score_range_{label}: {num(lo)}, {num(hi)}", file=out)
    for name, row in zip(bp.variable_names, bp.loadings):
        print(f"loading[{name}]: {nums(row)}", file=out)
    print(f"outputs: scores.csv, loadings.csv, biplot.svg in {args.out}", file=out)


def _parse_counts(text):
    try:
        counts = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise ArgumentError(f"--counts must be comma-separated integers, got {text!r}") from None
    return counts


def cmd_spikes(args, out):
    templates = spikes.default_templates()
    counts = _parse_counts(args.counts)
    if len(counts) != len(templates):
        raise ArgumentError(f"--counts needs {len(templates)} values, got {len(counts)}")
    x, truth = spikes.synthesize_spikes(templates, counts, args.noise, args.seed, args.amplitude_jitter)
    model = fit(x)
    r = 2
    scores = project(model, x, r).coords
    clustering = analysis.kmeans(scores, args.k, seed=args.seed)

    os.makedirs(args.out, exist_ok=True)
    table = np.column_stack([scores.T, clustering.assignments, truth])
    with open(os.path.join(args.out, "spike_scores.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("PC1,PC2,cluster,true_label\n")
        for s1, s2, c, t in table:
            fh.write(f"{float(s1):.17g},{float(s2):.17g},{int(c)},{int(t)}\n")
    reps = np.column_stack(
        [analysis.cluster_representative(model, clustering.centroids[:, j]) for j in range(clustering.k)]
    )
    header = ["time_ms"] + [f"cluster{j}" for j in range(clustering.k)]
    dataio.save_csv(np.column_stack([spikes.spike_times(x.shape[0]), reps]),
                    os.path.join(args.out, "representatives.csv"), header=header)

    ev = model.eigenvalues
    print(f"spikes: {x.shape[1]} x {x.shape[0]} samples", file=out)
    print(f"counts: {', '.join(str(c) for c in counts)}", file=out)
    print(f"noise_sd: {num(args.noise)}", file=out)
    print(f"amplitude_jitter: {num(args.amplitude_jitter)}", file=out)
    print(f"seed: {args.seed}", file=out)
    print(f"top_eigenvalues: {nums(ev[:5])}", file=out)
    if ev.shape[0] > 2 and ev[2] > 0:
        print(f"lambda2_over_lambda3: {num(ev[1] / ev[2])}", file=out)
    print(f"spectral_ratio[2]: {num(spectral_ratio(model, 2))}", file=out)
    print(f"k: {clustering.k}", file=out)
    print(f"inertia: {num(clustering.inertia)}", file=out)
    for j in range(clustering.k):
        size = int(np.sum(clustering.assignments == j))
        print(f"centroid{j}: {nums(clustering.centroids[:, j])} (size {size})", file=out)
    print(f"accuracy: {num(analysis.matched_accuracy(truth, clustering.assignments))}", file=out)
    print(f"outputs: spike_scores.csv, representatives.csv in {args.out}", file=out)


def build_parser():
    parser = argparse.ArgumentParser(prog="pcakit", description="Principal component analysis toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def orientation(p):
        p.add_argument("--orientation", choices=dataio.ORIENTATIONS, default=dataio.SAMPLES,
                       help="whether CSV rows are samples (default) or variables")

    p = sub.add_parser("fit", help="fit PCA to a CSV file and report the spectrum")
    p.add_argument("csv")
    p.add_argument("-r", "--components", type=int)
    p.add_argument("-o", "--out", default=".", help="output directory")
    orientation(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("demo-heightweight", help="worked example on the bundled height/weight data")
    p.set_defaults(func=cmd_demo_heightweight)

    p = sub.add_parser("compress", help="low-rank PCA reconstruction of a PGM image")
    p.add_argument("pgm")
    p.add_argument("-r", "--components", type=int, required=True)
    p.add_argument("-o", "--out", required=True, help="output PGM path")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("biplot", help="export biplot scores, loadings and SVG")
    p.add_argument("csv")
    p.add_argument("-r", "--components", type=int, default=2)
    p.add_argument("-o", "--out", default=".", help="output directory")
    orientation(p)
    p.set_defaults(func=cmd_biplot)

    p = sub.add_parser("spikes", help="synthetic spike-sorting demo")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--noise", type=float, default=DEFAULT_SPIKE_NOISE)
    p.add_argument("--amplitude-jitter", type=float, default=DEFAULT_SPIKE_JITTER)
    p.add_argument("--counts", default=",".join(str(c) for c in DEFAULT_SPIKE_COUNTS))
    p.add_argument("-o", "--out", default=".", help="output directory")
    p.set_defaults(func=cmd_spikes)
    return parser


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        args.func(args, out)
    except (PcaError, OSError) as exc:
        print(f"pcakit {args.command}: error: {exc}", file=err)
        for kinds, code in _EXIT_CODES:
            if isinstance(exc, kinds):
                return code
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
