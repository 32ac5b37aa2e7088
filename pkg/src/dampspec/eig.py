"""Dense nonsymmetric eigensolves, spectrum ordering, and spectrum matching.

Eigenvalues come from the LAPACK geev drivers; every solve is certified a
posteriori by the backward-error bound ||M w - eta w|| <= 1e-8 ||M||_F on
each eigenpair, so a silent misconverged solve cannot leak through.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

__all__ = [
    "Spectrum",
    "EigenSolverError",
    "eigen_real",
    "eigen_complex",
    "order_spectrum",
    "match_spectra",
]

_CERT_FACTOR = 1e-8


class EigenSolverError(RuntimeError):
    """Eigenvalue iteration failed or did not meet the residual certificate."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of one projected system, with the ordering contract flag.

    ``sides`` records how mode indices map onto positions: 2 for the
    conjugate ladders of second-order systems (values come in +/- branch
    pairs), 1 for first-order systems (a single branch).
    """

    values: np.ndarray
    ordering_applied: bool = False
    sides: int = 2

    def __len__(self):
        return len(self.values)


def _validate_matrix(M, allow_complex):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not allow_complex and np.iscomplexobj(M):
        raise ValueError("eigen_real expects a real matrix")
    if not np.all(np.isfinite(M.real)) or (np.iscomplexobj(M) and not np.all(np.isfinite(M.imag))):
        raise ValueError("matrix entries must be finite")
    return M


def _certified_eigenvalues(M) -> np.ndarray:
    try:
        values, vectors = scipy.linalg.eig(M, right=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigenvalue iteration did not converge: {exc}") from exc
    scale = np.linalg.norm(M)
    residual = M @ vectors - vectors * values[None, :]
    worst = float(np.linalg.norm(residual, axis=0).max()) if len(values) else 0.0
    if worst > _CERT_FACTOR * scale:
        raise EigenSolverError(
            f"residual certificate failed: max ||Mw - eta w|| = {worst:.3e} "
            f"exceeds {_CERT_FACTOR:g} * ||M|| = {_CERT_FACTOR * scale:.3e}"
        )
    return values


def eigen_real(M, sides: int = 2) -> Spectrum:
    """All eigenvalues of a real square matrix, unordered, certified."""
    M = _validate_matrix(M, allow_complex=False)
    return Spectrum(_certified_eigenvalues(M), ordering_applied=False, sides=sides)


def eigen_complex(M, sides: int = 1) -> Spectrum:
    """All eigenvalues of a complex square matrix, unordered, certified."""
    M = _validate_matrix(M, allow_complex=True)
    return Spectrum(_certified_eigenvalues(M.astype(complex)), ordering_applied=False, sides=sides)


def order_spectrum(spectrum: Spectrum) -> Spectrum:
    """Apply the ordering contract: Im ascending, then modulus descending,
    then Re ascending."""
    v = spectrum.values
    idx = np.lexsort((v.real, -np.abs(v), v.imag))
    return replace(spectrum, values=v[idx], ordering_applied=True)


def match_spectra(s1: Spectrum, s2: Spectrum, band) -> list[tuple[int, int, float]]:
    """Nearest-neighbor matching of s1[band] into s2.

    Parameters
    ----------
    s1, s2 : Spectrum
        Both must be ordered.
    band : iterable of int
        Positions into s1 (e.g. a range).

    Returns
    -------
    list of (i, j, distance) with j the nearest position in s2.
    """
    if not (s1.ordering_applied and s2.ordering_applied):
        raise ValueError("match_spectra requires ordered spectra")
    positions = np.asarray(list(band), dtype=int)
    if len(positions) == 0:
        return []
    if positions.min() < 0 or positions.max() >= len(s1.values):
        raise ValueError(
            f"band [{positions.min()}, {positions.max()}] exceeds spectrum length {len(s1.values)}"
        )
    dist = np.abs(s1.values[positions, None] - s2.values[None, :])
    nearest = dist.argmin(axis=1)
    return [
        (int(i), int(j), float(dist[row, j]))
        for row, (i, j) in enumerate(zip(positions, nearest))
    ]
