"""Decay-rate estimation: hypothesis checks and the three-step algorithm.

The central quantity is the modified spectral abscissa mu_r: the largest
real part over the discrete spectrum after discarding the r highest
frequencies on each branch. Projection accuracy degrades only in a band
of roughly constant width at the truncation edge, so r is estimated by
comparing solves at two resolutions, the high-frequency asymptote of the
real parts is located, and the final resolution is chosen past both.
"""

from __future__ import annotations

import logging
import math
import numbers
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .assembly import assemble, realize_matrix
from .damping import DampingProfile, overlap_block
from .eig import Spectrum, eigen_complex, eigen_real, match_spectra, order_spectrum
from .operators import ModalModel, base_frequencies, enumerate_modes

__all__ = [
    "HypothesisReport",
    "AsymptoteEstimate",
    "AbscissaReport",
    "signed_indices",
    "compute_spectrum",
    "check_hypotheses",
    "estimate_r",
    "estimate_N1",
    "modified_abscissa",
    "run_algorithm",
]

logger = logging.getLogger(__name__)


def signed_indices(count: int, sides: int) -> np.ndarray:
    """Signed mode indices for the positions of an ordered spectrum.

    Two-sided ladders (second-order systems, count = 2N) map positions to
    [-N..-1, 1..N]; one-sided ladders (first-order, count = N) map position
    p to N - p since Im = -mu is ascending.
    """
    if sides == 2:
        if count % 2:
            raise ValueError(f"two-sided spectrum must have even length, got {count}")
        N = count // 2
        return np.concatenate([np.arange(-N, 0), np.arange(1, N + 1)])
    if sides == 1:
        return np.arange(count, 0, -1)
    raise ValueError(f"sides must be 1 or 2, got {sides}")


def compute_spectrum(model: ModalModel, profile: DampingProfile, N: int) -> Spectrum:
    """Assemble at resolution N, solve, and order."""
    system = assemble(model, profile, N)
    matrix = realize_matrix(system)
    if system.order == "second":
        spectrum = eigen_real(matrix, sides=2)
    else:
        spectrum = eigen_complex(matrix, sides=1)
    return order_spectrum(spectrum)


# --------------------------------------------------------------------------
# hypothesis diagnostics


@dataclass(frozen=True)
class HypothesisReport:
    model: ModalModel
    profile: DampingProfile
    N: int
    b_norm_bound: float
    h1_simple: bool
    h2_margin: float
    h3_margin: float
    h5_table: tuple  # ((p, r1, value), ...)
    delta: np.ndarray
    delta_ratio: np.ndarray
    warnings: tuple


def _margin_warnings(h1_simple, h2_margin, h3_margin) -> list[str]:
    out = []
    if not h1_simple:
        out.append("eigenvalue multiplicities present: simplicity assumption fails")
    if h2_margin < 0:
        out.append(
            f"gap margin negative ({h2_margin:.6g}): frequency gaps smaller than "
            "twice the damping bound"
        )
    if h3_margin < 0:
        out.append(
            f"low-frequency margin negative ({h3_margin:.6g}): damping bound "
            "exceeds the lowest frequency"
        )
    return out


def check_hypotheses(
    model: ModalModel,
    profile: DampingProfile,
    N: int,
    p_list=(),
    r1_list=(),
    tail_terms: int = 2000,
) -> HypothesisReport:
    """Quantitative diagnostics for the assumptions behind the band estimates.

    ``b_norm_bound`` is damping_factor * sup(a), an exact operator norm for
    multiplication on L2 and an upper bound in the energy space. The margins
    measure the frequency-gap and lowest-frequency conditions; h5_table holds
    the off-band coupling tails max_{|i|<=p} sum_{|j|>=p+r1} |<B V_i, V_j>|^2
    with the infinite sum truncated after ``tail_terms`` column modes.
    Violations produce warnings, never aborts.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    p_list = tuple(int(p) for p in p_list)
    r1_list = tuple(int(r1) for r1 in r1_list)
    if any(p < 1 for p in p_list) or any(r1 < 1 for r1 in r1_list):
        raise ValueError("p_list and r1_list entries must be positive integers")
    if p_list and r1_list and N < max(p_list) + max(r1_list):
        raise ValueError(
            f"N = {N} is below max(p) + max(r1) = {max(p_list) + max(r1_list)}"
        )

    modes = enumerate_modes(model, N)
    mu = np.array([model.mu(m) for m in modes])
    b_norm = model.damping_factor * profile.sup_norm
    h1 = bool(np.all(np.diff(mu) > 0.0))

    freqs = base_frequencies(model, N)
    gaps = np.abs(np.diff(freqs))
    h2 = float(gaps.min() - 2.0 * b_norm) if len(gaps) else math.inf
    h3 = float(np.abs(freqs).min() - b_norm)

    # A1/A2 gap sequences: square-root gaps for second-order ladders, plain
    # eigenvalue gaps for the first-order one. Degenerate levels give zero
    # gaps; their ratios are reported as inf rather than raising.
    levels = np.sqrt(mu) if model.order == "second" else mu
    delta = np.diff(levels)
    if len(delta) > 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            delta_ratio = delta[1:] / delta[:-1] ** 2
        delta_ratio[~np.isfinite(delta_ratio)] = np.inf
    else:
        delta_ratio = np.empty(0)

    table = []
    if p_list and r1_list:
        depth = max(p_list) + max(r1_list) + tail_terms
        all_modes = enumerate_modes(model, depth)
        c = model.damping_factor
        # <B V_i, V_j> reduces to (c/2) <a v_i, v_j> on the two-sided energy
        # ladders (independent of branch signs) and to c <a v_i, v_j> on the
        # one-sided ladder; summing over both branch signs of j doubles the
        # two-sided tail: (1/2) c^2 sum_n overlap^2 vs c^2 sum_n overlap^2.
        factor = 0.5 * c * c if model.order == "second" else c * c
        for p in p_list:
            rows = all_modes[:p]
            for r1 in r1_list:
                cols = all_modes[p + r1 - 1 : depth]
                block = overlap_block(model, profile, rows, cols)
                value = float(factor * (block ** 2).sum(axis=1).max())
                table.append((p, r1, value))

    warnings = _margin_warnings(h1, h2, h3)
    return HypothesisReport(
        model=model,
        profile=profile,
        N=N,
        b_norm_bound=float(b_norm),
        h1_simple=h1,
        h2_margin=h2,
        h3_margin=h3,
        h5_table=tuple(table),
        delta=delta,
        delta_ratio=delta_ratio,
        warnings=tuple(warnings),
    )


# --------------------------------------------------------------------------
# the three steps


def _validate_eps(eps):
    if isinstance(eps, bool) or not isinstance(eps, numbers.Real) or not math.isfinite(eps) or eps <= 0:
        raise ValueError(f"eps must be a positive real, got {eps!r}")
    return float(eps)


def _r_from_spectra(s1: Spectrum, s2: Spectrum, N0: int, eps: float) -> int:
    matches = match_spectra(s1, s2, range(len(s1)))
    dists = np.array([d for _, _, d in matches])
    magnitudes = np.abs(signed_indices(len(s1), s1.sides))
    violating = magnitudes[dists > eps]
    if len(violating) == 0:
        return 0
    return N0 - int(violating.min()) + 1


def estimate_r(model: ModalModel, profile: DampingProfile, N0: int, eps: float) -> int:
    """Width of the unreliable band at the truncation edge.

    Solves at N0 and 2*N0, matches each lower-resolution eigenvalue to its
    nearest higher-resolution one, and returns the smallest r such that all
    matched distances with |index| <= N0 - r stay within eps (N0 when even
    the lowest mode moves more than eps).
    """
    if N0 < 4:
        raise ValueError(f"N0 must be >= 4, got {N0}")
    eps = _validate_eps(eps)
    s1 = compute_spectrum(model, profile, N0)
    s2 = compute_spectrum(model, profile, 2 * N0)
    r = _r_from_spectra(s1, s2, N0, eps)
    logger.debug("estimate_r(N0=%d, eps=%g) -> %d", N0, eps, r)
    return r


class AsymptoteEstimate(NamedTuple):
    N1: int
    alpha_hat: float
    detected: bool


def _detect_asymptote(spectrum: Spectrum, eps: float, r: int) -> AsymptoteEstimate:
    indices = signed_indices(len(spectrum), spectrum.sides)
    magnitudes = np.abs(indices)
    n_max = int(magnitudes.max())
    if not 0 <= r < n_max:
        raise ValueError(f"r = {r} must satisfy 0 <= r < {n_max}")
    band_edge = n_max - r
    band = magnitudes <= band_edge
    quarter = max(1, band_edge // 4)
    top = band & (magnitudes >= band_edge - quarter + 1)
    alpha_hat = float(np.median(spectrum.values.real[top]))
    violating = magnitudes[band & (np.abs(spectrum.values.real - alpha_hat) > eps)]
    if len(violating) == 0:
        return AsymptoteEstimate(1, alpha_hat, True)
    N1 = int(violating.max())
    return AsymptoteEstimate(N1, alpha_hat, N1 < band_edge)


def estimate_N1(
    model: ModalModel, profile: DampingProfile, N: int, eps: float, r: int = 0
) -> AsymptoteEstimate:
    """Locate the onset of the high-frequency asymptote of Re(eta_k).

    alpha_hat is the median real part over the top quarter of the retained
    band (the band left after discarding the r highest modes); N1 is the
    largest retained index still deviating from alpha_hat by more than eps.
    detected=False means even the top retained mode deviates, i.e. no
    asymptotic regime is visible at this resolution; the best band found is
    still reported.
    """
    if N < 16:
        raise ValueError(f"N must be >= 16, got {N}")
    eps = _validate_eps(eps)
    spectrum = compute_spectrum(model, profile, N)
    return _detect_asymptote(spectrum, eps, r)


def modified_abscissa(spectrum: Spectrum, r: int) -> tuple[float, int]:
    """Max real part over the retained band |index| <= N - r and its argmax.

    Ties go to the smallest |index|, positive branch first.
    """
    if not spectrum.ordering_applied:
        raise ValueError("modified_abscissa requires an ordered spectrum")
    indices = signed_indices(len(spectrum), spectrum.sides)
    magnitudes = np.abs(indices)
    n_max = int(magnitudes.max())
    if not 0 <= r < n_max:
        raise ValueError(f"r = {r} must satisfy 0 <= r < {n_max}")
    band = magnitudes <= n_max - r
    reals = spectrum.values.real[band]
    band_indices = indices[band]
    best = reals.max()
    attaining = band_indices[reals == best]
    argmax = min(attaining, key=lambda k: (abs(int(k)), int(k) < 0))
    return float(best), int(argmax)


# --------------------------------------------------------------------------
# full algorithm


@dataclass(frozen=True)
class AbscissaReport:
    """Everything the three-step run produced, for auditability."""

    model: ModalModel
    profile: DampingProfile
    eps: float
    N0: int
    r: int
    N1: int
    alpha_hat: float
    N_final: int
    mu_r: float
    argmax_index: int
    detected: bool
    budget_exhausted: bool
    warnings: tuple
    spectrum: Spectrum

    def to_dict(self) -> dict:
        indices = signed_indices(len(self.spectrum), self.spectrum.sides)
        return {
            "model": self.model.kind,
            "profile": self.profile.to_spec(),
            "eps": self.eps,
            "N0": self.N0,
            "r": self.r,
            "N1": self.N1,
            "alpha_hat": self.alpha_hat,
            "N_final": self.N_final,
            "mu_r": self.mu_r,
            "argmax_index": self.argmax_index,
            "detected": self.detected,
            "budget_exhausted": self.budget_exhausted,
            "profile_total_mass": self.profile.total_mass,
            "profile_sup_norm": self.profile.sup_norm,
            "warnings": list(self.warnings),
            "spectrum": [
                {"k": int(k), "re": float(v.real), "im": float(v.imag)}
                for k, v in zip(indices, self.spectrum.values)
            ],
        }


def run_algorithm(
    model: ModalModel,
    profile: DampingProfile,
    eps: float,
    N0: int = 50,
    max_resolution: int = 1024,
) -> AbscissaReport:
    """Estimate the decay rate: band width r, asymptote onset, final solve.

    Doubles the resolution from 2*N0 until the asymptote is detected or the
    resolution budget is exhausted; detection at resolution N guarantees
    N > N1 + r, so the detecting solve doubles as the final one. On budget
    exhaustion the report carries the best partial data and a warning.
    """
    eps = _validate_eps(eps)
    if N0 < 4:
        raise ValueError(f"N0 must be >= 4, got {N0}")
    if 2 * N0 > max_resolution:
        raise ValueError(f"resolution budget {max_resolution} cannot fit 2*N0 = {2 * N0}")

    s_coarse = compute_spectrum(model, profile, N0)
    N = 2 * N0
    spectrum = compute_spectrum(model, profile, N)
    r = _r_from_spectra(s_coarse, spectrum, N0, eps)
    logger.info("step 2: r = %d (N0 = %d, eps = %g)", r, N0, eps)

    estimate = _detect_asymptote(spectrum, eps, r)
    while not estimate.detected and 2 * N <= max_resolution:
        N *= 2
        spectrum = compute_spectrum(model, profile, N)
        estimate = _detect_asymptote(spectrum, eps, r)
    logger.info(
        "step 1: N1 = %d, alpha_hat = %.6g, detected = %s at N = %d",
        estimate.N1, estimate.alpha_hat, estimate.detected, N,
    )

    budget_exhausted = not estimate.detected
    # detected implies N1 < N - r, hence N > N1 + r already holds here.
    mu_r, argmax = modified_abscissa(spectrum, r)
    logger.info("step 3: mu_r = %.8g at index %d (N = %d)", mu_r, argmax, N)

    diagnostics = check_hypotheses(model, profile, N)
    warnings = list(diagnostics.warnings)
    if budget_exhausted:
        warnings.append("asymptote not detected within the resolution budget")

    return AbscissaReport(
        model=model,
        profile=profile,
        eps=eps,
        N0=N0,
        r=r,
        N1=estimate.N1,
        alpha_hat=estimate.alpha_hat,
        N_final=N,
        mu_r=mu_r,
        argmax_index=argmax,
        detected=estimate.detected,
        budget_exhausted=budget_exhausted,
        warnings=tuple(warnings),
        spectrum=spectrum,
    )
