"""Catalog of the undamped operators behind the four supported systems.

Each system is reduced to the eigenstructure of a positive self-adjoint
operator on the unit interval or unit square with Dirichlet conditions:
mode indices, eigenvalues ``mu``, base frequencies of the undamped
generator, and pointwise evaluation of L2-normalized eigenfunctions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModalModel",
    "get_model",
    "model_names",
    "enumerate_modes",
    "base_frequencies",
]


def _index_1d(mode) -> int:
    if isinstance(mode, bool) or not isinstance(mode, (int, np.integer)):
        raise ValueError(f"1-D mode index must be an integer, got {mode!r}")
    if mode == 0:
        raise ValueError("1-D mode index must be nonzero")
    return abs(int(mode))


def _index_2d(mode) -> tuple[int, int]:
    try:
        k, l = mode
    except (TypeError, ValueError):
        raise ValueError(f"2-D mode index must be a (k, l) pair, got {mode!r}") from None
    if isinstance(k, bool) or isinstance(l, bool):
        raise ValueError(f"2-D mode index must be a pair of integers, got {mode!r}")
    if not isinstance(k, (int, np.integer)) or not isinstance(l, (int, np.integer)):
        raise ValueError(f"2-D mode index must be a pair of integers, got {mode!r}")
    if k < 1 or l < 1:
        raise ValueError(f"2-D mode indices must be >= 1, got {mode!r}")
    return int(k), int(l)


@dataclass(frozen=True)
class ModalModel:
    """One of the four supported systems.

    Parameters
    ----------
    kind : str
        Identifier, one of ``wave1d``, ``beam1d``, ``schrodinger1d``, ``wave2d``.
    order : str
        ``"second"`` for systems whose projected matrix is the real 2N x 2N
        companion form; ``"first"`` for the complex N x N form.
    dim : int
        Spatial dimension (1 or 2).
    damping_factor : float
        Multiplier c in the damping operator c * a(x): 2 for the second-order
        systems, 1 for the first-order one.
    """

    kind: str
    order: str
    dim: int
    damping_factor: float

    def validate_mode(self, mode):
        """Return the canonical unsigned form of a mode index."""
        if self.dim == 1:
            return _index_1d(mode)
        return _index_2d(mode)

    def mu(self, mode) -> float:
        """Eigenvalue of the underlying positive operator for this mode."""
        if self.dim == 1:
            k = _index_1d(mode)
            base = (k * math.pi) ** 2
            return base * base if self.kind == "beam1d" else base
        k, l = _index_2d(mode)
        return (k * k + l * l) * math.pi ** 2

    def frequencies(self, mode) -> tuple[complex, ...]:
        """Base frequencies of the undamped generator for this mode.

        Second-order systems contribute a conjugate pair +/- i*sqrt(mu);
        the first-order system contributes the single value -i*mu.
        """
        m = self.mu(mode)
        if self.order == "second":
            s = math.sqrt(m)
            return (-1j * s, 1j * s)
        return (-1j * m,)

    def eigenfunction(self, mode, x, y=None):
        """Evaluate the L2-normalized eigenfunction at a point (vectorized).

        Parameters
        ----------
        mode : int or (int, int)
            Mode index; 1-D indices may be signed (the eigenfunction depends
            only on |k|).
        x, y : float or ndarray
            Coordinates in [0, 1]; ``y`` is required exactly when dim == 2.
        """
        if self.dim == 1:
            if y is not None:
                raise ValueError(f"{self.kind} is one-dimensional; y must be omitted")
            k = _index_1d(mode)
            return math.sqrt(2.0) * np.sin(k * math.pi * np.asarray(x, dtype=float))
        if y is None:
            raise ValueError(f"{self.kind} is two-dimensional; y is required")
        k, l = _index_2d(mode)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return 2.0 * np.sin(k * math.pi * x) * np.sin(l * math.pi * y)


_MODELS = {
    "wave1d": ModalModel("wave1d", "second", 1, 2.0),
    "beam1d": ModalModel("beam1d", "second", 1, 2.0),
    "schrodinger1d": ModalModel("schrodinger1d", "first", 1, 1.0),
    "wave2d": ModalModel("wave2d", "second", 2, 2.0),
}


def model_names() -> tuple[str, ...]:
    return tuple(_MODELS)


def get_model(kind: str) -> ModalModel:
    try:
        return _MODELS[kind]
    except KeyError:
        known = ", ".join(_MODELS)
        raise ValueError(f"unknown model {kind!r}; expected one of: {known}") from None


def enumerate_modes(model: ModalModel, N: int) -> tuple:
    """The N modes of smallest ``mu``, ascending.

    For the 2-D model ties in mu are broken lexicographically by (k, l) and
    degenerate pairs (k, l)/(l, k) count separately toward N.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if model.dim == 1:
        return tuple(range(1, N + 1))
    # Every excluded pair has k or l > K and hence mu > K^2 pi^2, while at
    # least N candidates sit inside the quarter disk of radius K.
    K = int(2 * math.sqrt(N)) + 3
    candidates = sorted(
        (k * k + l * l, k, l) for k in range(1, K + 1) for l in range(1, K + 1)
    )
    if len(candidates) < N:
        raise ValueError(f"mode candidate window too small for N={N}")
    return tuple((k, l) for _, k, l in candidates[:N])


def base_frequencies(model: ModalModel, N: int) -> np.ndarray:
    """Frequency ladder of the undamped generator, ordered by Im ascending.

    Second-order models yield 2N values (both branches of each conjugate
    pair), first-order models yield N values -i*mu.
    """
    modes = enumerate_modes(model, N)
    mu = np.array([model.mu(m) for m in modes], dtype=float)
    if model.order == "second":
        s = np.sqrt(mu)
        return np.concatenate([-1j * s[::-1], 1j * s])
    return (-1j * mu)[::-1]
