"""Covariance estimation and Hermitian eigendecomposition with a
jamming / noise subspace split.

Everything downstream (target detection, jamming mitigation, SINR) runs on
the eigenstructure of some covariance estimate, so this module pins down
the conventions once: eigenvalues always descending, subspace splits always
expressed through the 1-based rank of the first noise eigenvector, and
estimated matrices always symmetrized so the solver sees an exactly
Hermitian input.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class CovarianceMatrix:
    """Hermitian covariance with bookkeeping about its origin.

    kind is one of 'full_echo', 'interference_plus_noise', 'analytic';
    sample_count is 0 for analytic matrices.
    """

    values: np.ndarray
    sample_count: int
    kind: str


@dataclass(frozen=True)
class EigenSplit:
    """Descending eigensystem, optionally split into subspaces.

    split_index is the 1-based rank of the first noise eigenvector; the
    jamming subspace is everything above it.  None until assigned via
    split_subspaces.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    split_index: int | None = None

    @property
    def jamming_subspace(self) -> np.ndarray:
        if self.split_index is None:
            raise ValueError("subspace split not assigned; call split_subspaces")
        return self.eigenvectors[:, : self.split_index - 1]

    @property
    def noise_subspace(self) -> np.ndarray:
        if self.split_index is None:
            raise ValueError("subspace split not assigned; call split_subspaces")
        return self.eigenvectors[:, self.split_index - 1:]


def sample_covariance(snapshots, kind: str = "full_echo") -> CovarianceMatrix:
    """(1/K) * sum of x x^H over the snapshot rows, symmetrized.

    snapshots: array-like of shape (K, channels), K >= 1.
    """
    x = np.asarray(snapshots)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("need a nonempty (samples, channels) array")
    k = x.shape[0]
    if x.dtype in (np.complex128, np.complex64) and x.flags.c_contiguous:
        # BLAS rank-k update: X.T is Fortran-ordered for free, and herk
        # touches half the matrix, which matters at 256 channels x 60000
        # snapshots on the full-echo path.
        herk = scipy.linalg.blas.zherk if x.dtype == np.complex128 else scipy.linalg.blas.cherk
        upper = herk(1.0 / k, x.T, lower=0)
        r = upper + upper.conj().T
        np.fill_diagonal(r, np.diag(upper).real)
        r = r.astype(np.complex128, copy=False)
    else:
        x = x.astype(np.complex128, copy=False)
        # R[i, j] = E[x_i conj(x_j)], same orientation as the herk path
        r = x.T @ x.conj() / k
        r = (r + r.conj().T) / 2.0
    return CovarianceMatrix(values=r, sample_count=k, kind=kind)


def analytic_covariance(steering_vectors, powers, noise_power: float = 1.0) -> CovarianceMatrix:
    """sum_q power_q * v_q v_q^H + noise_power * I."""
    vs = [np.asarray(v, dtype=np.complex128) for v in steering_vectors]
    powers = np.asarray(powers, dtype=float)
    if len(vs) != powers.size:
        raise ValueError("one power per steering vector")
    dim = vs[0].size if vs else 0
    if dim == 0:
        raise ValueError("analytic covariance needs at least one steering vector")
    r = noise_power * np.eye(dim, dtype=np.complex128)
    for v, p in zip(vs, powers):
        r += p * np.outer(v, v.conj())
    r = (r + r.conj().T) / 2.0
    return CovarianceMatrix(values=r, sample_count=0, kind="analytic")


def eig_descending(cov: CovarianceMatrix | np.ndarray) -> EigenSplit:
    """Full orthonormal eigensystem sorted by descending eigenvalue."""
    r = cov.values if isinstance(cov, CovarianceMatrix) else np.asarray(cov)
    herm_gap = np.linalg.norm(r - r.conj().T)
    if herm_gap > 1e-8 * max(np.linalg.norm(r), 1.0):
        raise np.linalg.LinAlgError(f"matrix is not Hermitian (gap {herm_gap:.2e})")
    values, vectors = scipy.linalg.eigh(r)
    order = np.argsort(-values, kind="stable")
    return EigenSplit(eigenvalues=values[order], eigenvectors=vectors[:, order])


def split_subspaces(eigen: EigenSplit, split_index: int) -> EigenSplit:
    """Assign the jamming/noise partition at the given 1-based rank."""
    dim = eigen.eigenvalues.size
    if not 1 <= split_index <= dim:
        raise ValueError(f"split index {split_index} outside 1..{dim}")
    return replace(eigen, split_index=split_index)


def dominant_count(eigenvalues: np.ndarray, ratio: float = 10.0) -> int:
    """Number of eigenvalues exceeding ratio times the median.

    Crude rank detector for covariances of unknown composition; with a
    target-contaminated covariance it counts the target among the
    dominant components, which is exactly the self-nulling trap.
    """
    values = np.asarray(eigenvalues, dtype=float)
    return int(np.sum(values > ratio * np.median(values)))
