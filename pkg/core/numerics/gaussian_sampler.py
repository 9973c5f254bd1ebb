# core/numerics/gaussian_sampler.py
"""
Seeded multivariate Gaussian sampling for the beam-parameter vector
v = (x0, y0, Theta1, Theta2).

Pure calculation layer. No Django logic.
"""

from dataclasses import dataclass

import numpy as np

from core.exceptions import FactorizationError
from core.numerics.seeding import DEFAULT_CHUNK_SIZE, chunk_layout, rng_for

SYMMETRY_TOLERANCE = 1e-12
EIGENVALUE_CLAMP = 1e-12


def covariance_square_root(covariance):
    """
    Symmetric square root S with S @ S = covariance.

    Eigenvalues in [-1e-12, 0) are treated as rounding noise and clamped to
    zero; anything more negative is an indefinite matrix.
    """
    matrix = np.asarray(covariance, dtype=float)
    eigenvalues, eigenvectors = np.linalg.eigh(matrix)

    if eigenvalues.min() < -EIGENVALUE_CLAMP:
        raise FactorizationError(
            f"covariance is indefinite (smallest eigenvalue {eigenvalues.min():.3e})"
        )

    clamped = np.clip(eigenvalues, 0.0, None)
    return (eigenvectors * np.sqrt(clamped)) @ eigenvectors.T


@dataclass(frozen=True, eq=False)
class GaussianSpec:
    """
    Mean and covariance of v = (x0 [m], y0 [m], Theta1, Theta2).
    """

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float)
        covariance = np.array(self.covariance, dtype=float)

        if mean.ndim != 1:
            raise ValueError("mean must be a vector")
        if covariance.shape != (mean.size, mean.size):
            raise ValueError(
                f"covariance shape {covariance.shape} does not match mean of size {mean.size}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(covariance))):
            raise ValueError("mean and covariance must be finite")
        if np.max(np.abs(covariance - covariance.T)) > SYMMETRY_TOLERANCE:
            raise ValueError("covariance must be symmetric")

        mean.setflags(write=False)
        covariance.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", covariance)
        object.__setattr__(self, "_root", covariance_square_root(covariance))

    @property
    def root(self):
        return self._root


def gaussian_sample(gaussian, seed, count, chunk_size=DEFAULT_CHUNK_SIZE):
    """
    Draw ``count`` vectors from N(gaussian.mean, gaussian.covariance).

    Returns an array of shape (count, dim). Chunk k of the output is drawn
    from the stream derived from (seed, k), so the result is a function of
    (seed, count, chunk_size) only and shorter runs are prefixes of longer
    ones.
    """
    blocks = []
    for index, size in chunk_layout(count, chunk_size):
        rng = rng_for(seed, index)
        normals = rng.standard_normal((size, gaussian.mean.size))
        blocks.append(gaussian.mean + normals @ gaussian.root.T)
    return np.concatenate(blocks, axis=0)
