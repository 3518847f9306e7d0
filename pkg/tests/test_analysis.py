import itertools
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from pcakit.analysis import (
    _lloyd,
    best_fit_line,
    biplot_data,
    biplot_svg,
    cluster_representative,
    kmeans,
    matched_accuracy,
    write_biplot,
)
from pcakit.errors import ArgumentError, RangeError, ShapeError, VerticalLineError
from pcakit.pca import fit, project

PUBLISHED_IRIS_LOADINGS = {
    "Sepal Length": (0.3614, 0.6566),
    "Sepal Width": (-0.0845, 0.7302),
    "Petal Length": (0.8567, -0.1734),
    "Petal Width": (0.3583, -0.0755),
}


def best_partition_inertia(pts):
    """Exhaustive minimum over all 2**n two-way assignments (pts is n x r)."""
    best = np.inf
    for bits in itertools.product((0, 1), repeat=len(pts)):
        mask = np.array(bits, dtype=bool)
        total = 0.0
        for group in (pts[mask], pts[~mask]):
            if len(group):
                total += float(np.sum((group - group.mean(axis=0)) ** 2))
        best = min(best, total)
    return best


class TestBestFitLine:
    def test_height_weight(self, height_weight):
        slope, point = best_fit_line(fit(height_weight.data))
        assert slope == pytest.approx(9.0, abs=0.5)
        assert point == pytest.approx(tuple(height_weight.data.mean(axis=1)), abs=1e-12)

    def test_exact_line(self):
        t = np.linspace(-3, 5, 9)
        slope, _ = best_fit_line(fit(np.vstack([t, 2 * t])))
        assert slope == pytest.approx(2.0, abs=1e-9)

    def test_flat(self):
        slope, _ = best_fit_line(fit(np.vstack([np.arange(5.0), np.full(5, 3.0)])))
        assert slope == 0.0

    def test_vertical(self):
        with pytest.raises(VerticalLineError):
            best_fit_line(fit(np.vstack([np.full(5, 1.0), np.arange(5.0)])))

    def test_needs_two_variables(self, rng):
        with pytest.raises(ShapeError):
            best_fit_line(fit(rng.standard_normal((3, 6))))

    def test_sign_flip_invariant(self, height_weight):
        from dataclasses import replace

        model = fit(height_weight.data)
        flipped = replace(model, components=-model.components)
        assert best_fit_line(flipped)[0] == best_fit_line(model)[0]


class TestBiplot:
    def test_iris_loadings(self, iris):
        bp = biplot_data(fit(iris.data), iris.data, iris.variable_names, 2)
        for name, row in zip(bp.variable_names, bp.loadings):
            expected = np.array(PUBLISHED_IRIS_LOADINGS[name])
            signs = np.sign(row) * np.sign(expected)
            assert row * signs == pytest.approx(expected, abs=0.01)

    def test_iris_petal_rows_aligned(self, iris):
        bp = biplot_data(fit(iris.data), iris.data, iris.variable_names, 2)
        length = bp.loadings[bp.variable_names.index("Petal Length")]
        width = bp.loadings[bp.variable_names.index("Petal Width")]
        assert length @ width / np.linalg.norm(length) / np.linalg.norm(width) > 0.95

    def test_identity_components(self):
        x = np.array([[3.0, -3.0, 0.0, 0.0], [0.0, 0.0, 1.0, -1.0]]) + [[10.0], [20.0]]
        model = fit(x)
        bp = biplot_data(model, x, ["a", "b"], 2)
        np.testing.assert_array_equal(bp.loadings, np.eye(2))
        np.testing.assert_array_equal(bp.scores, x - model.mean[:, None])

    def test_scores_equal_project(self, iris):
        model = fit(iris.data)
        bp = biplot_data(model, iris.data, iris.variable_names, 3)
        assert bp.scores.tobytes() == project(model, iris.data, 3).coords.tobytes()
        assert np.all(np.linalg.norm(bp.loadings, axis=1) <= 1 + 1e-12)
        np.testing.assert_allclose(bp.loadings.T @ bp.loadings, np.eye(3), atol=1e-10)
        assert bp.component_labels == ("PC1", "PC2", "PC3")

    @pytest.mark.parametrize("r", [1, 4])
    def test_r_range(self, iris, r):
        with pytest.raises(RangeError):
            biplot_data(fit(iris.data), iris.data, iris.variable_names, r)

    def test_r_exceeds_variables(self, height_weight):
        with pytest.raises(RangeError):
            biplot_data(fit(height_weight.data), height_weight.data, height_weight.variable_names, 3)

    def test_ranges(self, iris):
        bp = biplot_data(fit(iris.data), iris.data, iris.variable_names, 2)
        lo, hi = bp.score_ranges()[0]
        assert lo == bp.scores[0].min() and hi == bp.scores[0].max()

    def test_files(self, iris, tmp_path):
        bp = biplot_data(fit(iris.data), iris.data, iris.variable_names, 2)
        paths = write_biplot(bp, tmp_path)
        loadings = (tmp_path / "loadings.csv").read_text().splitlines()
        assert loadings[0] == "PC1,PC2"
        assert len(loadings) == 5
        scores = (tmp_path / "scores.csv").read_text().splitlines()
        assert len(scores) == 2
        assert all(len(line.split(",")) == 150 for line in scores)
        root = ET.parse(paths["svg"]).getroot()
        texts = [el.text for el in root.iter("{http://www.w3.org/2000/svg}text")]
        assert set(iris.variable_names) <= set(texts)
        circles = list(root.iter("{http://www.w3.org/2000/svg}circle"))
        assert len(circles) == 150

    def test_svg_escapes_labels(self):
        x = np.array([[1.0, 2.0, 4.0], [0.0, 1.0, 5.0]])
        bp = biplot_data(fit(x), x, ["a<b", "c&d"], 2)
        ET.fromstring(biplot_svg(bp))


class TestKmeans:
    def test_single_cluster(self, rng):
        pts = rng.standard_normal((2, 15))
        result = kmeans(pts, 1, seed=3)
        np.testing.assert_allclose(result.centroids[:, 0], pts.mean(axis=1), atol=1e-12)
        assert result.inertia == pytest.approx(np.sum((pts - pts.mean(axis=1, keepdims=True)) ** 2), rel=1e-12)
        assert np.all(result.assignments == 0)

    def test_separated_blobs(self, rng):
        a = rng.normal(0.0, 0.1, size=(2, 30))
        b = rng.normal(10.0, 0.1, size=(2, 20))
        pts = np.hstack([a, b])
        truth = np.array([0] * 30 + [1] * 20)
        result = kmeans(pts, 2, seed=0)
        assert matched_accuracy(truth, result.assignments) == 1.0

    def test_matches_exhaustive_optimum(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 9))
            pts = rng.standard_normal((2, n))
            result = kmeans(pts, 2, seed=int(rng.integers(1000)))
            assert result.inertia == pytest.approx(best_partition_inertia(pts.T), abs=1e-9)

    def test_inertia_recomputable(self, rng):
        pts = rng.standard_normal((3, 40))
        result = kmeans(pts, 4, seed=1)
        diff = pts - result.centroids[:, result.assignments]
        assert result.inertia == pytest.approx(float(np.sum(diff**2)), rel=1e-12)
        assert set(result.assignments.tolist()) <= set(range(4))

    def test_lloyd_inertia_non_increasing(self, rng):
        pts = rng.standard_normal((60, 2))
        init = pts[:5].copy()
        _, _, history = _lloyd(pts, init)
        assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))

    def test_empty_cluster_reseeded(self):
        pts = np.array([[0.0, 0.0], [0.1, 0.0], [5.0, 0.0]])
        init = np.array([[0.05, 0.0], [100.0, 100.0], [5.0, 0.0]])
        labels, centroids, _ = _lloyd(pts, init)
        assert np.all(np.isfinite(centroids))
        assert sorted(np.bincount(labels, minlength=3).tolist()) == [1, 1, 1]

    def test_deterministic(self, rng):
        pts = rng.standard_normal((2, 50))
        a = kmeans(pts, 3, seed=42)
        b = kmeans(pts, 3, seed=42)
        assert a.assignments.tobytes() == b.assignments.tobytes()
        assert a.centroids.tobytes() == b.centroids.tobytes()

    def test_too_few_points(self):
        with pytest.raises(ArgumentError):
            kmeans(np.zeros((2, 2)), 3)

    def test_bad_k(self):
        with pytest.raises(ArgumentError):
            kmeans(np.zeros((2, 2)), 0)


class TestClusterRepresentative:
    def test_origin_maps_to_mean(self, rng):
        model = fit(rng.standard_normal((5, 20)))
        np.testing.assert_array_equal(cluster_representative(model, [0.0, 0.0]), model.mean)

    def test_single_axis(self, rng):
        model = fit(rng.standard_normal((5, 20)))
        rep = cluster_representative(model, [0.0, 0.0, 2.5])
        np.testing.assert_allclose(rep, model.mean + 2.5 * model.components[:, 2], atol=1e-14)

    def test_projection_round_trip(self, rng):
        model = fit(rng.standard_normal((6, 30)))
        coords = rng.standard_normal(3) * 4
        rep = cluster_representative(model, coords)
        back = project(model, rep[:, None], 3).coords[:, 0]
        np.testing.assert_allclose(back, coords, atol=1e-9)

    def test_too_many_coords(self, rng):
        model = fit(rng.standard_normal((2, 10)))
        with pytest.raises(RangeError):
            cluster_representative(model, [1.0, 2.0, 3.0])


def test_matched_accuracy_permutation():
    assert matched_accuracy([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert matched_accuracy([0, 0, 1, 1], [0, 1, 1, 1]) == 0.75
    assert matched_accuracy([0, 1, 2], [0, 0, 0]) == pytest.approx(1 / 3)
