"""Application-level computations on a fitted PCA model."""
import os
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np
from scipy.optimize import linear_sum_assignment

from .dataio import format_csv
from .errors import ArgumentError, RangeError, ShapeError, VerticalLineError
from .linalg import as_matrix, as_vector, frozen, matmul
from .pca import project

KMEANS_MAX_ITER = 300
KMEANS_RESTARTS = 20


def best_fit_line(model):
    """Slope and anchor point of the line through the mean along the first component.

    The line is ``y - point[1] = slope * (x - point[0])``.
    """
    if model.variable_count != 2:
        raise ShapeError(f"best-fit line needs exactly 2 variables, model has {model.variable_count}")
    v1 = model.components[:, 0]
    if abs(v1[0]) <= 1e-12:
        raise VerticalLineError("first principal component is vertical; slope is undefined")
    return float(v1[1] / v1[0]), (float(model.mean[0]), float(model.mean[1]))


@dataclass(frozen=True)
class BiplotData:
    scores: np.ndarray
    loadings: np.ndarray
    variable_names: tuple

    @property
    def component_count(self):
        return self.loadings.shape[1]

    @property
    def component_labels(self):
        return tuple(f"PC{k + 1}" for k in range(self.component_count))

    def score_ranges(self):
        """(min, max) of the scores along each component."""
        return [(float(row.min()), float(row.max())) for row in self.scores]

    def loading_ranges(self):
        return [(float(col.min()), float(col.max())) for col in self.loadings.T]


def biplot_data(model, x, names, r=2):
    if r not in (2, 3):
        raise RangeError(f"biplots use 2 or 3 components, got {r}")
    if r > model.variable_count:
        raise RangeError(f"cannot draw {r} components from a model with {model.variable_count} variables")
    names = tuple(str(n) for n in names)
    if len(names) != model.variable_count:
        raise ShapeError(f"{len(names)} names for {model.variable_count} variables")
    scores = project(model, x, r).coords
    loadings = frozen(model.components[:, :r].copy())
    return BiplotData(scores, loadings, names)


def biplot_svg(bp, size=600, margin=40):
    """Scatter of the first two score rows plus labelled loading arrows.

    Scores and arrows are each scaled uniformly to fit the drawing area; no
    other normalisation is applied.
    """
    pts = bp.scores[:2]
    arrows = bp.loadings[:, :2]
    half = (size - 2 * margin) / 2.0
    cx = cy = size / 2.0
    span = float(np.max(np.abs(pts))) or 1.0
    arrow_span = float(np.max(np.hypot(arrows[:, 0], arrows[:, 1]))) or 1.0

    def to_px(x, y, scale):
        return cx + x / scale * half, cy - y / scale * half

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {size} {size}" width="{size}" height="{size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{cy:g}" x2="{size - margin}" y2="{cy:g}" stroke="#bbbbbb"/>',
        f'<line x1="{cx:g}" y1="{margin}" x2="{cx:g}" y2="{size - margin}" stroke="#bbbbbb"/>',
        f'<text x="{size - margin}" y="{cy - 6:g}" text-anchor="end" font-size="12">PC1</text>',
        f'<text x="{cx + 6:g}" y="{margin - 6}" font-size="12">PC2</text>',
        f'<text x="{margin}" y="{size - 10}" font-size="10">score half-width {span:.6g}; '
        f"arrow half-width {arrow_span:.6g}</text>",
    ]
    for x, y in pts.T:
        px, py = to_px(x, y, span)
        lines.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2" fill="#1f77b4" fill-opacity="0.6"/>')
    for name, (x, y) in zip(bp.variable_names, arrows):
        px, py = to_px(x, y, arrow_span)
        lines.append(f'<line x1="{cx:g}" y1="{cy:g}" x2="{px:.3f}" y2="{py:.3f}" stroke="#d62728" stroke-width="1.5"/>')
        lines.append(f'<text x="{px:.3f}" y="{py:.3f}" font-size="12" fill="#d62728">{escape(name)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_biplot(bp, outdir, svg=True):
    """Write scores.csv (components x samples), loadings.csv and biplot.svg."""
    os.makedirs(outdir, exist_ok=True)
    paths = {
        "scores": os.path.join(outdir, "scores.csv"),
        "loadings": os.path.join(outdir, "loadings.csv"),
    }
    with open(paths["scores"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(bp.scores))
    with open(paths["loadings"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(bp.loadings, header=bp.component_labels))
    if svg:
        paths["svg"] = os.path.join(outdir, "biplot.svg")
        with open(paths["svg"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(biplot_svg(bp))
    return paths


@dataclass(frozen=True)
class Clustering:
    """k-means result. ``centroids`` is r x k: one column per cluster."""

    assignments: np.ndarray
    centroids: np.ndarray
    inertia: float

    @property
    def k(self):
        return self.centroids.shape[1]


def _sq_dists(pts, centroids):
    # n x k squared Euclidean distances; pts is n x r, centroids k x r
    diff = pts[:, None, :] - centroids[None, :, :]
    return np.sum(diff * diff, axis=2)


def _inertia(pts, centroids, labels):
    diff = pts - centroids[labels]
    return float(np.sum(diff * diff))


def _lloyd(pts, init, max_iter=KMEANS_MAX_ITER):
    """One Lloyd run from the given initial centroids (k x r).

    Returns ``(labels, centroids, history)`` where ``history`` holds the
    inertia after every assignment step.
    """
    centroids = init.copy()
    k = centroids.shape[0]
    labels = None
    history = []
    for _ in range(max_iter):
        new = np.argmin(_sq_dists(pts, centroids), axis=1)
        history.append(_inertia(pts, centroids, new))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        previous = centroids
        centroids = np.empty_like(previous)
        taken = set()
        for j in range(k):
            members = labels == j
            if members.any():
                centroids[j] = pts[members].mean(axis=0)
                continue
            # empty cluster: move it to the point farthest from where it was
            d = np.sum((pts - previous[j]) ** 2, axis=1)
            for idx in np.argsort(-d, kind="stable"):
                if int(idx) not in taken:
                    taken.add(int(idx))
                    centroids[j] = pts[idx]
                    break
    return labels, centroids, history


def kmeans(points, k, seed=0, restarts=KMEANS_RESTARTS, max_iter=KMEANS_MAX_ITER):
    """Lloyd's k-means on the columns of ``points`` (r x n), best of several restarts.

    Each restart starts from ``k`` distinct columns drawn uniformly without
    replacement from ``numpy.random.default_rng(seed)``. The lowest-inertia
    run wins; ties go to the earliest restart.
    """
    pts = as_matrix(points, "points").T
    n = pts.shape[0]
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ArgumentError(f"k must be a positive integer, got {k}")
    k = int(k)
    if n < k:
        raise ArgumentError(f"cannot form {k} clusters from {n} points")
    if restarts < 1:
        raise ArgumentError(f"restarts must be >= 1, got {restarts}")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        init = pts[rng.choice(n, size=k, replace=False)]
        labels, centroids, _history = _lloyd(pts, init, max_iter)
        inertia = _inertia(pts, centroids, labels)
        if best is None or inertia < best[2]:
            best = (labels, centroids, inertia)
    labels, centroids, inertia = best
    return Clustering(frozen(labels.astype(np.intp)), frozen(centroids.T.copy()), inertia)


def cluster_representative(model, coords):
    """Map a point in score space back to signal space: ``mean + P_r @ coords``."""
    coords = as_vector(coords, "coords")
    r = coords.shape[0]
    if r > model.variable_count:
        raise RangeError(f"{r} coordinates given but the model has {model.variable_count} components")
    return model.mean + matmul(model.components[:, :r], coords[:, None])[:, 0]


def matched_accuracy(truth, assignments):
    """Fraction of points whose cluster maps to their true label under the best one-to-one matching."""
    truth = np.asarray(truth)
    assignments = np.asarray(assignments)
    if truth.shape != assignments.shape or truth.ndim != 1 or truth.size == 0:
        raise ShapeError("truth and assignments must be equal-length, non-empty 1-D arrays")
    t_vals, t_idx = np.unique(truth, return_inverse=True)
    a_vals, a_idx = np.unique(assignments, return_inverse=True)
    confusion = np.zeros((a_vals.size, t_vals.size), dtype=np.int64)
    np.add.at(confusion, (a_idx, t_idx), 1)
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    return float(confusion[rows, cols].sum()) / truth.size
