"""Covariance-based principal component analysis.

Data matrices are oriented with variables as rows and samples as columns
(m x n). Scores are computed from mean-centred data and the mean is added
back on reconstruction, so a full-rank project/reconstruct round trip is the
identity.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InsufficientSamplesError, RangeError, ShapeError, UndefinedRatioError
from .linalg import as_matrix, as_vector, frozen, matmul, symmetric_eigen, transpose

# Eigenvalues this far below zero (relative to ||S||_F) are rounding noise.
NEGATIVE_EIGENVALUE_RTOL = 1e-10


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    covariance: np.ndarray
    sample_count: int

    @property
    def variable_count(self):
        return self.mean.shape[0]

    @property
    def total_variance(self):
        """trace(S), equal to the sum of all eigenvalues."""
        return float(np.trace(self.covariance))


@dataclass(frozen=True)
class Scores:
    coords: np.ndarray

    @property
    def component_count(self):
        return self.coords.shape[0]


def mean_vector(x):
    x = as_matrix(x, "data")
    return x.sum(axis=1) / x.shape[1]


def center(x, mu):
    x = as_matrix(x, "data")
    mu = as_vector(mu, "mean")
    if mu.shape[0] != x.shape[0]:
        raise ShapeError(f"mean has length {mu.shape[0]} but data has {x.shape[0]} rows")
    return x - mu[:, None]


def covariance(b):
    """Sample covariance ``B B^T / (n - 1)`` of already-centred data ``b``."""
    b = as_matrix(b, "centred data")
    n = b.shape[1]
    if n < 2:
        raise InsufficientSamplesError(f"covariance needs at least 2 samples, got {n}")
    return matmul(b, transpose(b)) / (n - 1)


def fit(x):
    x = as_matrix(x, "data")
    if x.shape[1] < 2:
        raise InsufficientSamplesError(f"PCA needs at least 2 samples, got {x.shape[1]}")
    mu = mean_vector(x)
    s = covariance(center(x, mu))
    eig = symmetric_eigen(s)
    values = eig.values.copy()
    floor = -NEGATIVE_EIGENVALUE_RTOL * max(1.0, float(np.linalg.norm(s)))
    if values[-1] < floor:
        raise ConvergenceError(
            f"covariance has eigenvalue {values[-1]:.3e}; a covariance matrix is positive semidefinite",
            residual=float(-values[-1]),
        )
    values[values < 0.0] = 0.0
    return PcaModel(
        mean=frozen(mu),
        components=eig.vectors,
        eigenvalues=frozen(values),
        covariance=frozen(s),
        sample_count=x.shape[1],
    )


def _check_r(model, r):
    m = model.variable_count
    if isinstance(r, bool) or int(r) != r or not 1 <= r <= m:
        raise RangeError(f"component count must lie in [1, {m}], got {r}")
    return int(r)


def project(model, x, r=None):
    """Scores ``P_r^T (x - mean)`` for the first ``r`` components (default: all)."""
    r = model.variable_count if r is None else _check_r(model, r)
    x = as_matrix(x, "data")
    if x.shape[0] != model.variable_count:
        raise ShapeError(f"data has {x.shape[0]} rows but the model has {model.variable_count} variables")
    coords = matmul(transpose(model.components[:, :r]), center(x, model.mean))
    return Scores(frozen(coords))


def reconstruct(model, scores):
    coords = scores.coords if isinstance(scores, Scores) else as_matrix(scores, "scores")
    r = coords.shape[0]
    if r > model.variable_count:
        raise ShapeError(f"scores have {r} components but the model only has {model.variable_count}")
    return matmul(model.components[:, :r], coords) + model.mean[:, None]


def spectral_ratio(model, r):
    """Fraction of total variance carried by the first ``r`` components."""
    r = _check_r(model, r)
    total = model.total_variance
    if total <= 0.0:
        raise UndefinedRatioError("spectral ratio is undefined for data with zero variance")
    ratio = float(np.sum(model.eigenvalues[:r])) / total
    return min(1.0, max(0.0, ratio))
