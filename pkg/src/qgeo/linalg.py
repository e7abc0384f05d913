"""Dense complex matrix kernel: Hermitian eigensystems, unitary
exponentials, and seeded random sampling.

The eigensolver is an in-house cyclic Jacobi iteration for complex Hermitian
matrices. Dimensions in this toolkit stay tiny (<= ~64), so a robust
rotation-based method is preferred over an external LAPACK contract. All
functions are pure; random sampling threads an explicit numpy ``Generator``.
"""

from __future__ import annotations

import numpy as np

from .config import Tolerances, default_tolerances
from .errors import BadDims, NoConvergence, NotAntiHermitian, NotHermitian

__all__ = [
    "frobenius",
    "check_finite",
    "check_square",
    "hermiticity_defect",
    "check_hermitian",
    "check_anti_hermitian",
    "hermitian_eigensystem",
    "unitary_exponential",
    "make_rng",
    "trial_rng",
    "sample_hermitian",
    "sample_haar_unitary",
    "sample_isometry",
    "sample_random",
]


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def check_finite(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise BadDims(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise BadDims(f"{name} contains non-finite entries")
    return m


def check_square(m: np.ndarray, name: str = "matrix") -> np.ndarray:
    m = check_finite(m, name)
    if m.shape[0] != m.shape[1]:
        raise BadDims(f"{name} must be square, got shape {m.shape}")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Relative defect |M - M†|_F / |M|_F (zero matrix has defect 0)."""
    norm = frobenius(m)
    if norm == 0.0:
        return 0.0
    return frobenius(m - m.conj().T) / norm


def check_hermitian(m: np.ndarray, tol: Tolerances | None = None,
                    name: str = "matrix") -> np.ndarray:
    tol = tol or default_tolerances()
    m = check_square(m, name)
    defect = hermiticity_defect(m)
    if defect > tol.herm:
        raise NotHermitian(f"{name}: relative Hermiticity defect {defect:.3e} > {tol.herm:.3e}")
    return m


def check_anti_hermitian(m: np.ndarray, tol: Tolerances | None = None,
                         name: str = "matrix") -> np.ndarray:
    tol = tol or default_tolerances()
    m = check_square(m, name)
    norm = frobenius(m)
    defect = 0.0 if norm == 0.0 else frobenius(m + m.conj().T) / norm
    if defect > tol.herm:
        raise NotAntiHermitian(f"{name}: anti-Hermiticity defect {defect:.3e} > {tol.herm:.3e}")
    return m


def hermitian_eigensystem(m: np.ndarray, tol: Tolerances | None = None,
                          max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of a Hermitian matrix.

    Cyclic Jacobi with complex plane rotations: each pivot (p, q) is
    dephased to a real 2x2 symmetric problem and annihilated with the
    classical stable rotation. Eigenvalues are sorted descending; ties keep
    the converged diagonal order (stable sort), which makes the output
    deterministic for degenerate spectra.

    Returns ``(values, vectors)`` with ``m = vectors @ diag(values) @ vectors†``.
    """
    tol = tol or default_tolerances()
    a = check_hermitian(m, tol).copy()
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real]), np.ones((1, 1), dtype=complex)

    a = 0.5 * (a + a.conj().T)  # work on an exactly Hermitian copy
    q = np.eye(n, dtype=complex)
    norm = frobenius(a)
    if norm == 0.0:
        return np.zeros(n), q
    stop = n * np.finfo(float).eps * norm

    def off_norm() -> float:
        # summed directly over off-diagonal entries; forming it as
        # total - diagonal cancels catastrophically near convergence
        off = np.abs(a) ** 2
        np.fill_diagonal(off, 0.0)
        return float(np.sqrt(np.sum(off)))

    converged = off_norm() <= stop
    for _ in range(max_sweeps):
        if converged:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apq = a[p, r]
                beta = abs(apq)
                if beta <= stop / (n * n):
                    continue
                phase = apq / beta
                app = a[p, p].real
                aqq = a[r, r].real
                tau = (aqq - app) / (2.0 * beta)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sph = s * phase
                # A <- V† A V with V the dephased rotation on the (p, r) plane
                col_p = a[:, p].copy()
                col_r = a[:, r].copy()
                a[:, p] = c * col_p - np.conj(sph) * col_r
                a[:, r] = sph * col_p + c * col_r
                row_p = a[p, :].copy()
                row_r = a[r, :].copy()
                a[p, :] = c * row_p - sph * row_r
                a[r, :] = np.conj(sph) * row_p + c * row_r
                a[p, r] = 0.0
                a[r, p] = 0.0
                a[p, p] = a[p, p].real
                a[r, r] = a[r, r].real
                qp = q[:, p].copy()
                qr = q[:, r].copy()
                q[:, p] = c * qp - np.conj(sph) * qr
                q[:, r] = sph * qp + c * qr
        converged = off_norm() <= stop
    if not converged:
        raise NoConvergence(
            f"Jacobi eigensolver: off-diagonal norm {off_norm():.3e} above "
            f"{stop:.3e} after {max_sweeps} sweeps (n={n})"
        )

    values = np.diagonal(a).real.copy()
    order = np.argsort(-values, kind="stable")
    return values[order], q[:, order]


def unitary_exponential(x: np.ndarray, t: float = 1.0,
                        tol: Tolerances | None = None) -> np.ndarray:
    """exp(t X) for anti-Hermitian X, unitary by construction.

    Diagonalizes the Hermitian matrix iX once and exponentiates its
    eigenvalues, so the result is unitary to eigensolver accuracy for any t.
    """
    return unitary_exponential_family(x, tol)(t)


def unitary_exponential_family(x: np.ndarray, tol: Tolerances | None = None):
    """One-parameter group t -> exp(t X) sharing a single eigendecomposition.

    Useful when many points of the same flow are needed (trajectories).
    """
    tol = tol or default_tolerances()
    x = check_anti_hermitian(x, tol, "generator")
    h = 1j * x  # Hermitian
    values, vectors = hermitian_eigensystem(h, tol)
    vh = vectors.conj().T

    def at(t: float) -> np.ndarray:
        # exp(tX) = exp(-it(iX))
        return (vectors * np.exp(-1j * t * values)) @ vh

    return at


# --- seeded sampling ---------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator; identical seeds give identical streams."""
    return np.random.default_rng(seed)


def trial_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator derived from (seed, *path), e.g. per (suite, trial).

    Derivation goes through ``SeedSequence`` so results are independent of
    how trials are scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, path)]))


def _complex_gaussian(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) * np.sqrt(0.5)


def sample_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """(Z + Z†)/2 for Z with i.i.d. standard complex Gaussian entries."""
    if n < 1:
        raise BadDims(f"need n >= 1, got {n}")
    z = _complex_gaussian(n, n, rng)
    return 0.5 * (z + z.conj().T)


def sample_haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix.

    The R diagonal phases are divided out, which fixes the QR gauge and
    makes the distribution exactly Haar.
    """
    if n < 1:
        raise BadDims(f"need n >= 1, got {n}")
    z = _complex_gaussian(n, n, rng)
    q, r = np.linalg.qr(z)
    d = np.where(np.abs(np.diagonal(r)) == 0, 1.0, np.diagonal(r))
    return q * (d / np.abs(d))


def sample_isometry(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """First k columns of an n x n Haar unitary; V†V = I_k."""
    if not 1 <= k <= n:
        raise BadDims(f"need 1 <= k <= n, got k={k}, n={n}")
    return sample_haar_unitary(n, rng)[:, :k]


def sample_random(kind: str, n: int, k: int | None = None,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Dispatch sampler: kind in {'hermitian', 'haar_unitary', 'isometry'}."""
    if rng is None:
        rng = make_rng(0)
    if kind == "hermitian":
        return sample_hermitian(n, rng)
    if kind == "haar_unitary":
        return sample_haar_unitary(n, rng)
    if kind == "isometry":
        if k is None:
            raise BadDims("isometry sampling requires k")
        return sample_isometry(n, k, rng)
    raise ValueError(f"unknown sample kind {kind!r}")
