"""Dense matrix kernels and a cyclic Jacobi eigensolver for symmetric matrices.

Matrices are plain 2-D ``float64`` numpy arrays. Every public function
validates its inputs (non-empty, finite) and returns fresh arrays, so callers
never observe aliasing with their arguments.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, NonFiniteError, RangeError, ShapeError, SymmetryError

SYMMETRY_RTOL = 1e-9
OFFDIAG_RTOL = 1e-12
MAX_SWEEPS = 100


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a finite, non-empty 2-D float64 array."""
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and one column, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteError(f"{name} contains NaN or infinite entries")
    return m


def as_vector(v, name="vector"):
    out = np.array(v, dtype=np.float64)
    if out.ndim != 1 or out.size < 1:
        raise ShapeError(f"{name} must be a non-empty 1-D vector, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise NonFiniteError(f"{name} contains NaN or infinite entries")
    return out


def frozen(a):
    a.setflags(write=False)
    return a


def matmul(a, b):
    """Matrix product with a fixed accumulation order.

    Entry (i, j) is accumulated as ``((a[i,0]*b[0,j] + a[i,1]*b[1,j]) + ...)``,
    left to right, with each product and sum rounded separately. The result is
    therefore identical to a naive triple loop and independent of BLAS.
    """
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    out = np.zeros((a.shape[0], b.shape[1]))
    for k in range(a.shape[1]):
        out += a[:, k, None] * b[None, k, :]
    return out


def transpose(a):
    return as_matrix(a).T.copy()


def frobenius(a):
    return float(np.sqrt(np.sum(np.square(a))))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in non-increasing order and matching unit eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def size(self):
        return self.values.shape[0]


def _round_robin(m):
    """Round-robin schedule of disjoint index pairs covering every (p, q) once.

    Each round is ``(p, q, partner)`` where ``partner[i]`` is the index paired
    with ``i`` in that round (``i`` itself when ``m`` is odd and ``i`` sits out).
    """
    players = list(range(m)) if m % 2 == 0 else list(range(m)) + [None]
    half = len(players) // 2
    rounds = []
    for _ in range(len(players) - 1):
        partner = np.arange(m)
        ps, qs = [], []
        for i in range(half):
            p, q = players[i], players[-1 - i]
            if p is None or q is None:
                continue
            p, q = min(p, q), max(p, q)
            ps.append(p)
            qs.append(q)
            partner[p] = q
            partner[q] = p
        order = np.argsort(ps, kind="stable")
        rounds.append((np.array(ps, dtype=np.intp)[order], np.array(qs, dtype=np.intp)[order], partner))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return frobenius(off)


def _apply_sign_rule(vectors):
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.where(vectors[idx, np.arange(vectors.shape[1])] < 0, -1.0, 1.0)
    return vectors * signs


def symmetric_eigen(s, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once in round-robin order.
    Iteration stops when the off-diagonal Frobenius norm falls to
    ``1e-12 * ||s||_F``; running out of sweeps raises ``ConvergenceError``.

    Eigenvectors are signed so that each column's largest-magnitude entry is
    positive (first such entry on ties). Inside a repeated eigenvalue's
    eigenspace the individual basis vectors are whatever the rotations
    produced; only the subspace is meaningful.
    """
    s = as_matrix(s, "symmetric matrix")
    m, n = s.shape
    if m != n:
        raise ShapeError(f"symmetric_eigen needs a square matrix, got {m}x{n}")
    scale = frobenius(s)
    asym = float(np.max(np.abs(s - s.T)))
    if asym > SYMMETRY_RTOL * max(1.0, scale):
        raise SymmetryError(f"matrix is not symmetric: max |s_ij - s_ji| = {asym:.3e}")

    a = (s + s.T) / 2.0
    vt = np.eye(m)
    tol = OFFDIAG_RTOL * scale
    rounds = _round_robin(m)
    off = _off_norm(a)
    sweeps = 0
    while off > tol:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, target {tol:.3e})",
                residual=off,
            )
        for p, q, partner in rounds:
            a = _rotate(a, vt, p, q, partner)
        off = _off_norm(a)
        sweeps += 1

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = _apply_sign_rule(vt.T[:, order])
    return EigenDecomposition(frozen(values), frozen(vectors))


def _rotate(a, vt, p, q, partner):
    """Annihilate a[p_i, q_i] for every i at once (pairs are disjoint).

    With per-index coefficients ``own`` and ``other`` the round's rotation is
    ``a <- own*a + other*a[partner]`` applied to rows, then to columns.
    ``vt`` holds the transposed eigenvector matrix and is updated in place.
    Returns the rotated matrix.
    """
    app = a[p, p]
    aqq = a[q, q]
    apq = a[p, q]
    nonzero = apq != 0.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta = np.where(nonzero, (aqq - app) / (2.0 * apq), 0.0)
        big = np.abs(theta) > 1e150
        root = np.sqrt(np.where(big, 1.0, theta * theta + 1.0))
        t = np.where(
            big,
            0.5 / np.where(theta == 0.0, 1.0, theta),
            np.where(theta < 0.0, -1.0, 1.0) / (np.abs(theta) + root),
        )
    t = np.where(nonzero, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    sn = t * c

    m = a.shape[0]
    own = np.ones(m)
    other = np.zeros(m)
    own[p] = c
    own[q] = c
    other[p] = -sn
    other[q] = sn

    b = a[partner]
    b *= other[:, None]
    b += a * own[:, None]
    cols = b[:, partner]
    cols *= other
    b *= own
    b += cols
    b[p, q] = 0.0
    b[q, p] = 0.0
    b[p, p] = app - t * apq
    b[q, q] = aqq + t * apq

    rows = vt[partner]
    rows *= other[:, None]
    vt *= own[:, None]
    vt += rows
    return b


def spectral_reconstruct(eig, r):
    """Partial spectral sum ``sum_{k<r} values[k] * v_k v_k^T``."""
    m = eig.size
    if not 1 <= r <= m:
        raise RangeError(f"r must lie in [1, {m}], got {r}")
    vr = eig.vectors[:, :r]
    return matmul(vr * eig.values[:r], transpose(vr))
