"""Assembly of the projected finite-dimensional systems.

Second-order systems realize as the real 2N x 2N block companion matrix
[[0, I], [-diag(Lambda), Omega]]; the first-order system realizes as the
complex N x N matrix -i diag(Lambda) + Omega. Omega collects the damped
modal couplings -c <a v_i, v_j>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .damping import DampingProfile, overlap_gram
from .operators import ModalModel, enumerate_modes

__all__ = ["ProjectedSystem", "assemble", "realize_matrix", "dump_matrix"]


@dataclass(frozen=True)
class ProjectedSystem:
    """Assembled Galerkin system of resolution N."""

    model: ModalModel
    profile: DampingProfile
    N: int
    order: str
    modes: tuple
    Lambda: np.ndarray  # length N, eigenvalues mu ascending
    Omega: np.ndarray   # N x N symmetric, -damping_factor * overlap


def assemble(model: ModalModel, profile: DampingProfile, N: int) -> ProjectedSystem:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if model.dim != profile.dim:
        raise ValueError(
            f"profile dimension {profile.dim} does not match model {model.kind!r}"
        )
    modes = enumerate_modes(model, N)
    Lambda = np.array([model.mu(m) for m in modes], dtype=float)
    Omega = -model.damping_factor * overlap_gram(model, profile, modes)
    return ProjectedSystem(model, profile, N, model.order, modes, Lambda, Omega)


def realize_matrix(system: ProjectedSystem) -> np.ndarray:
    """Dense matrix of the projected generator (deterministic mode order)."""
    N = system.N
    if system.order == "second":
        M = np.zeros((2 * N, 2 * N))
        M[:N, N:] = np.eye(N)
        M[N:, :N] = -np.diag(system.Lambda)
        M[N:, N:] = system.Omega
        return M
    return -1j * np.diag(system.Lambda) + system.Omega


def _format_entry(value) -> str:
    if np.iscomplexobj(value):
        z = complex(value)
        return f"{z.real:.16e}{z.imag:+.16e}i"
    return f"{float(value):.16e}"


def dump_matrix(matrix: np.ndarray, path) -> None:
    """Plain-text dump, one row per line, 17 significant digits per entry."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValueError("dump_matrix expects a 2-D matrix")
    with open(path, "w", encoding="ascii") as handle:
        for row in matrix:
            handle.write(" ".join(_format_entry(v) for v in row))
            handle.write("\n")
