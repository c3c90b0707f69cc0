"""Finding the directions in which two constrained distributions differ most.

The figure of merit for a direction ``u`` is the variance ratio
``(u' S1 u) / (u' S2 u)`` of the two distributions.  Whitening the
denominator turns the maximisation into a symmetric eigenproblem: with
``W' S2 W = I`` the best directions are ``W v`` for the leading
eigenvectors ``v`` of ``W' S1 W``.

Near-singular denominators are regularised by clamping eigenvalues below
``floor * lambda_max`` up to that floor; clamped coordinates are excluded
from the search and the result is flagged, which keeps the optimiser
total when constraints induce linear dependencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariance import center
from .errors import DegenerateCovarianceError, DegenerateDirectionError, InvalidShapeError

DEFAULT_EIGENVALUE_FLOOR = 1e-9


@dataclass
class ProjectionResult:
    """Optimal directions, their variance-ratio gains, and the whitener used.

    ``directions`` has one unit column per direction, ordered by
    decreasing gain, each with its largest-magnitude loading made
    positive so output is deterministic across eigensolver backends.
    ``regularization`` is the absolute eigenvalue floor that was applied
    to the denominator covariance; ``n_clamped`` counts eigenvalues that
    hit it.  ``truncated`` flags that fewer directions than requested
    were available; ``degenerate`` that the two distributions do not
    differ in any direction (top gain <= 1) or that clamping occurred.
    """

    directions: np.ndarray
    gains: np.ndarray
    whitener: np.ndarray
    floor: float
    regularization: float
    n_clamped: int = 0
    truncated: bool = False
    degenerate: bool = False

    @property
    def num_dirs(self):
        return self.directions.shape[1]

    def to_json(self):
        return {
            "directions": self.directions.T.tolist(),
            "gains": self.gains.tolist(),
            "floor": self.floor,
            "regularization": self.regularization,
            "n_clamped": self.n_clamped,
            "truncated": self.truncated,
            "degenerate": self.degenerate,
        }


def _symmetrize(mat):
    return 0.5 * (mat + mat.T)


def gain(u, cov, floor=DEFAULT_EIGENVALUE_FLOOR):
    """Variance ratio of direction ``u`` under a covariance pair.

    Scale-invariant in ``u``.  Directions whose denominator variance is
    at or below ``floor * trace(S2) * |u|^2`` are rejected as degenerate
    rather than returning a huge, meaningless ratio.
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.shape[0] != cov.n_cols:
        raise InvalidShapeError(f"direction has length {u.shape[0]}, expected {cov.n_cols}")
    sq = float(u @ u)
    if sq == 0.0:
        raise DegenerateDirectionError("direction is the zero vector")
    num = float(u @ cov.sigma1 @ u)
    den = float(u @ cov.sigma2 @ u)
    if den <= floor * float(np.trace(cov.sigma2)) * sq:
        raise DegenerateDirectionError("direction has (near-)zero variance under the split distribution")
    return num / den


def whiten(sigma2, floor=DEFAULT_EIGENVALUE_FLOOR):
    """Whitening matrix W with W' S2 W = I on the subspace above the floor.

    Eigenvalues below ``floor * lambda_max`` are clamped up to that value
    before inversion, so W is always finite; on clamped coordinates the
    identity property is intentionally violated.
    """
    W, _, _, _ = _whiten_full(np.asarray(sigma2, dtype=np.float64), floor)
    return W


def _whiten_full(sigma2, floor):
    lam, q = np.linalg.eigh(_symmetrize(sigma2))
    lam_max = lam[-1]
    if lam_max <= 0.0:
        raise DegenerateCovarianceError("covariance has no positive variance to whiten")
    lo = floor * lam_max
    clamped = lam < lo
    lam_f = np.maximum(lam, lo)
    w = q / np.sqrt(lam_f)
    return w, ~clamped, int(clamped.sum()), lo


def most_informative_directions(cov, num_dirs=2, floor=DEFAULT_EIGENVALUE_FLOOR):
    """Directions maximising the variance-ratio gain, best first.

    Whitens the denominator covariance, then takes leading eigenvectors
    of the whitened numerator covariance restricted to the coordinates
    that were not clamped.  Requests for more directions than there are
    positive-gain candidates are truncated with a flag, never an error.
    """
    if num_dirs < 1:
        raise InvalidShapeError("num_dirs must be >= 1")
    sigma1 = np.asarray(cov.sigma1, dtype=np.float64)
    w, keep, n_clamped, lo = _whiten_full(np.asarray(cov.sigma2, dtype=np.float64), floor)
    m = w.shape[0]
    keep_idx = np.flatnonzero(keep)
    b = _symmetrize(w.T @ sigma1 @ w)[np.ix_(keep_idx, keep_idx)]
    lam, v = np.linalg.eigh(b)
    # eigenvalues at numerical-noise level relative to the top one are rank
    # deficiency of the numerator, not usable directions
    positive = lam > 1e-12 * max(lam[-1], 0.0)
    available = int(positive.sum())
    if available == 0:
        raise DegenerateCovarianceError("no direction with positive gain exists")
    k = min(num_dirs, available)
    order = np.argsort(lam)[::-1][:k]
    gains = lam[order]
    v_full = np.zeros((m, k))
    v_full[keep_idx] = v[:, order]
    directions = w @ v_full
    directions /= np.linalg.norm(directions, axis=0)
    for col in range(k):
        lead = np.argmax(np.abs(directions[:, col]))
        if directions[lead, col] < 0:
            directions[:, col] = -directions[:, col]
    return ProjectionResult(
        directions=directions,
        gains=gains,
        whitener=w,
        floor=floor,
        regularization=lo,
        n_clamped=n_clamped,
        truncated=k < num_dirs,
        degenerate=bool(n_clamped > 0 or gains[0] <= 1.0 + 1e-9),
    )


def principal_alignment(u, reference, eigenvalues=None, tol=1e-9):
    """|cosine| between ``u`` and a reference direction or eigenspace.

    When ``eigenvalues`` is given, all reference columns whose eigenvalue
    ties the largest one (within ``tol`` relative) span the comparison
    subspace, so repeated eigenvalues do not produce arbitrary-vector
    mismatches.
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    u = u / np.linalg.norm(u)
    ref = np.asarray(reference, dtype=np.float64)
    if ref.ndim == 1:
        ref = ref[:, None]
    if eigenvalues is not None:
        eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        top = eigenvalues.max()
        ref = ref[:, eigenvalues >= top - tol * max(abs(top), 1.0)]
    q, _ = np.linalg.qr(ref)
    return float(np.linalg.norm(q.T @ u))


def pca_limit_check(data, tol=1e-6):
    """Whether the unguided optimum matches plain correlation PCA.

    With no user tiles and the most generic hypothesis (everything kept
    together vs. every column on its own), the split-side covariance of
    unit-variance data is the identity, so the optimal direction must be
    the first principal component of the correlation matrix.  Verified
    against an independent eigendecomposition; repeated top eigenvalues
    are compared as subspaces.
    """
    from .tiling import HypothesisTilings, TileMap

    n, m = data.shape
    y = center(data)
    user = TileMap.baseline(n, m)
    h = HypothesisTilings.unguided(n, m)
    from .covariance import hypothesis_covariances

    cov = hypothesis_covariances(y, user, h)
    result = most_informative_directions(cov, num_dirs=1)
    corr = np.corrcoef(data.values, rowvar=False)
    lam, vecs = np.linalg.eigh(corr)
    cos = principal_alignment(result.directions[:, 0], vecs, eigenvalues=lam)
    return cos >= 1.0 - tol


def project(data, result):
    """Scatter coordinates: centered data times the result's directions."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=np.float64)
    if values.shape[1] != result.directions.shape[0]:
        raise InvalidShapeError(
            f"data has {values.shape[1]} columns, directions expect {result.directions.shape[0]}"
        )
    return center(values).values @ result.directions
