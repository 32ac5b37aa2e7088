"""Piecewise-constant damping profiles and their modal overlap integrals.

A profile is a finite union of axis-aligned boxes with nonnegative
amplitudes; overlapping boxes add. Overlaps against the sine eigenbasis
are computed in closed form from the product-to-sum antiderivative, with
an adaptive Gauss quadrature oracle used for cross-checks.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .operators import ModalModel

__all__ = [
    "Box",
    "DampingProfile",
    "QuadratureConvergenceError",
    "profile_from_boxes",
    "family_interval",
    "family_comb",
    "family_square2d",
    "family_moving_square",
    "family_names",
    "build_profile",
    "overlap",
    "overlap_block",
    "overlap_gram",
    "overlap_quadrature",
]


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature exhausted its panel budget before reaching tol."""


class Box(NamedTuple):
    bounds: tuple  # ((lo, hi),) in 1-D, ((x0, x1), (y0, y1)) in 2-D
    amplitude: float


def _require_number(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValueError(f"{name} must be a real number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


def _validate_box(bounds, amplitude, dim):
    if len(bounds) != dim:
        raise ValueError(f"box has {len(bounds)} axes, profile is {dim}-D")
    clean = []
    for axis, (lo, hi) in enumerate(bounds):
        lo = _require_number(lo, f"box axis {axis} lower bound")
        hi = _require_number(hi, f"box axis {axis} upper bound")
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(
                f"box axis {axis} range ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1"
            )
        clean.append((lo, hi))
    amplitude = _require_number(amplitude, "amplitude")
    if amplitude < 0.0:
        raise ValueError(f"amplitude must be nonnegative, got {amplitude}")
    return Box(tuple(clean), amplitude)


@dataclass(frozen=True)
class DampingProfile:
    """Nonnegative piecewise-constant damping coefficient a(x)."""

    dim: int
    boxes: tuple
    family: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def total_mass(self) -> float:
        """Integral of a over the domain (overlaps counted by summation)."""
        total = 0.0
        for bounds, amp in self.boxes:
            measure = 1.0
            for lo, hi in bounds:
                measure *= hi - lo
            total += amp * measure
        return total

    @property
    def sup_norm(self) -> float:
        """Exact max of a(x): evaluate on midpoints of the box arrangement."""
        if not self.boxes:
            return 0.0
        axes_mids = []
        for axis in range(self.dim):
            cuts = sorted({b for box in self.boxes for b in box.bounds[axis]})
            axes_mids.append([0.5 * (a + b) for a, b in zip(cuts, cuts[1:])])
        best = 0.0
        if self.dim == 1:
            points = [(x,) for x in axes_mids[0]]
        else:
            points = [(x, y) for x in axes_mids[0] for y in axes_mids[1]]
        for pt in points:
            val = 0.0
            for bounds, amp in self.boxes:
                if all(lo <= c <= hi for c, (lo, hi) in zip(pt, bounds)):
                    val += amp
            best = max(best, val)
        return best

    def value(self, x, y=None):
        """Pointwise a(x) (boxes taken closed; vectorized)."""
        x = np.asarray(x, dtype=float)
        if self.dim == 2:
            if y is None:
                raise ValueError("2-D profile needs both coordinates")
            y = np.asarray(y, dtype=float)
        elif y is not None:
            raise ValueError("1-D profile takes a single coordinate")
        out = np.zeros(np.broadcast(x, y).shape if y is not None else x.shape)
        for bounds, amp in self.boxes:
            inside = (bounds[0][0] <= x) & (x <= bounds[0][1])
            if self.dim == 2:
                inside = inside & (bounds[1][0] <= y) & (y <= bounds[1][1])
            out = out + amp * inside
        return out

    def to_spec(self) -> dict:
        """Config-shaped serialization (family form when known, else boxes)."""
        if self.family is not None:
            return {"family": self.family, **self.params}
        return {
            "boxes": [
                {
                    "region": list(b.bounds[0]) if self.dim == 1 else [list(ax) for ax in b.bounds],
                    "amplitude": b.amplitude,
                }
                for b in self.boxes
            ]
        }


def profile_from_boxes(dim: int, boxes, family=None, params=None) -> DampingProfile:
    if dim not in (1, 2):
        raise ValueError(f"dim must be 1 or 2, got {dim}")
    clean = tuple(_validate_box(bounds, amp, dim) for bounds, amp in boxes)
    return DampingProfile(dim, clean, family, dict(params or {}))


def family_interval(x0: float, alpha: float) -> DampingProfile:
    """Single interval of mass 1: amplitude 1/alpha on (x0 - alpha/2, x0 + alpha/2)."""
    x0 = _require_number(x0, "x0")
    alpha = _require_number(alpha, "alpha")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lo, hi = x0 - alpha / 2.0, x0 + alpha / 2.0
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"support ({lo}, {hi}) escapes the unit interval")
    return profile_from_boxes(
        1, [(((lo, hi),), 1.0 / alpha)], family="interval", params={"x0": x0, "alpha": alpha}
    )


def family_comb(beta: int, width=None) -> DampingProfile:
    """beta intervals of amplitude 1/2 centered at (2i-1)/(2*beta), i = 1..beta.

    The default width of the i-th interval is 1/(2*i*beta), so the total
    mass is sum_i 1/(4*i*beta); it is reported by the profile, not pinned.
    ``width`` overrides the widths (scalar or one value per interval).
    """
    if isinstance(beta, bool) or not isinstance(beta, (int, np.integer)) or beta < 1:
        raise ValueError(f"beta must be a positive integer, got {beta!r}")
    beta = int(beta)
    if width is None:
        widths = [1.0 / (2.0 * i * beta) for i in range(1, beta + 1)]
        params = {"beta": beta}
    else:
        if isinstance(width, (list, tuple)):
            if len(width) != beta:
                raise ValueError(f"width list must have beta={beta} entries")
            widths = [_require_number(w, "width") for w in width]
        else:
            widths = [_require_number(width, "width")] * beta
        params = {"beta": beta, "width": width if isinstance(width, (int, float)) else list(widths)}
    boxes = []
    for i, w in zip(range(1, beta + 1), widths):
        if w <= 0:
            raise ValueError(f"interval width must be positive, got {w}")
        c = (2.0 * i - 1.0) / (2.0 * beta)
        lo, hi = c - w / 2.0, c + w / 2.0
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"comb interval {i} with width {w} escapes the unit interval")
        boxes.append((((lo, hi),), 0.5))
    return profile_from_boxes(1, boxes, family="comb", params=params)


def family_square2d(alpha: float) -> DampingProfile:
    """Centered square of side alpha with amplitude 1/alpha^2 (mass 1)."""
    alpha = _require_number(alpha, "alpha")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lo, hi = 0.5 - alpha / 2.0, 0.5 + alpha / 2.0
    if lo < 0.0 or hi > 1.0:
        raise ValueError(f"square of side {alpha} escapes the unit square")
    return profile_from_boxes(
        2,
        [(((lo, hi), (lo, hi)), 1.0 / alpha ** 2)],
        family="square2d",
        params={"alpha": alpha},
    )


def family_moving_square(a1: float, a2: float) -> DampingProfile:
    """The 1/8 x 1/8 square of amplitude 64 (mass 1) centered at (a1, a2)."""
    a1 = _require_number(a1, "a1")
    a2 = _require_number(a2, "a2")
    half = 1.0 / 16.0
    bounds = ((a1 - half, a1 + half), (a2 - half, a2 + half))
    for lo, hi in bounds:
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"square centered at ({a1}, {a2}) escapes the unit square")
    return profile_from_boxes(
        2, [(bounds, 64.0)], family="moving_square", params={"a1": a1, "a2": a2}
    )


_FAMILIES = {
    # name -> (builder, dim, required params, optional params)
    "interval": (family_interval, 1, ("x0", "alpha"), ()),
    "comb": (family_comb, 1, ("beta",), ("width",)),
    "square2d": (family_square2d, 2, ("alpha",), ()),
    "moving_square": (family_moving_square, 2, ("a1", "a2"), ()),
}


def family_names() -> tuple[str, ...]:
    return tuple(_FAMILIES)


def family_dim(name: str) -> int:
    if name not in _FAMILIES:
        known = ", ".join(_FAMILIES)
        raise ValueError(f"unknown family {name!r}; expected one of: {known}")
    return _FAMILIES[name][1]


def build_family(name: str, params: dict) -> DampingProfile:
    if name not in _FAMILIES:
        known = ", ".join(_FAMILIES)
        raise ValueError(f"unknown family {name!r}; expected one of: {known}")
    builder, _, required, optional = _FAMILIES[name]
    missing = [p for p in required if p not in params]
    if missing:
        raise ValueError(f"family {name!r} is missing parameters: {', '.join(missing)}")
    unknown = [p for p in params if p not in required and p not in optional]
    if unknown:
        raise ValueError(f"family {name!r} got unknown parameters: {', '.join(unknown)}")
    return builder(**params)


def build_profile(spec) -> DampingProfile:
    """Build a profile from its config form: {family, params...} or {boxes}."""
    if not isinstance(spec, dict):
        raise ValueError(f"profile must be a mapping, got {type(spec).__name__}")
    if "family" in spec:
        params = {k: v for k, v in spec.items() if k != "family"}
        return build_family(spec["family"], params)
    if "boxes" in spec:
        extra = [k for k in spec if k != "boxes"]
        if extra:
            raise ValueError(f"unknown profile keys: {', '.join(sorted(extra))}")
        entries = spec["boxes"]
        if not isinstance(entries, list) or not entries:
            raise ValueError("profile boxes must be a nonempty list")
        boxes = []
        dim = None
        for entry in entries:
            if not isinstance(entry, dict) or set(entry) != {"region", "amplitude"}:
                raise ValueError("each box must be {region, amplitude}")
            region = entry["region"]
            if not isinstance(region, (list, tuple)) or len(region) != 2:
                raise ValueError(f"bad box region {region!r}")
            if isinstance(region[0], (list, tuple)):
                this_dim, bounds = 2, (tuple(region[0]), tuple(region[1]))
            else:
                this_dim, bounds = 1, ((region[0], region[1]),)
            if dim is None:
                dim = this_dim
            elif dim != this_dim:
                raise ValueError("all boxes must share the same dimension")
            boxes.append((bounds, entry["amplitude"]))
        return profile_from_boxes(dim, boxes)
    raise ValueError("profile must contain either 'family' or 'boxes'")


# --------------------------------------------------------------------------
# closed-form overlaps


def _sine_product_integral(m, n, lo: float, hi: float):
    """Integral of sin(m pi x) sin(n pi x) over [lo, hi] for positive integer
    m, n (vectorized). Product-to-sum antiderivative; the m == n diagonal uses
    the half-angle form."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    same = m == n
    d = np.where(same, 1.0, m - n)
    s = m + n
    off = 0.5 * (
        (np.sin(d * math.pi * hi) - np.sin(d * math.pi * lo)) / (d * math.pi)
        - (np.sin(s * math.pi * hi) - np.sin(s * math.pi * lo)) / (s * math.pi)
    )
    diag = 0.5 * (
        (hi - lo)
        - (np.sin(2.0 * m * math.pi * hi) - np.sin(2.0 * m * math.pi * lo)) / (2.0 * m * math.pi)
    )
    return np.where(same, diag, off)


def _check_compatible(model: ModalModel, profile: DampingProfile):
    if model.dim != profile.dim:
        raise ValueError(
            f"profile dimension {profile.dim} does not match model {model.kind!r}"
        )


def overlap(model: ModalModel, profile: DampingProfile, i, j) -> float:
    """Closed-form <a v_i, v_j> against the L2-normalized eigenfunctions."""
    _check_compatible(model, profile)
    mi = model.validate_mode(i)
    mj = model.validate_mode(j)
    total = 0.0
    if model.dim == 1:
        for bounds, amp in profile.boxes:
            lo, hi = bounds[0]
            total += amp * 2.0 * float(_sine_product_integral(mi, mj, lo, hi))
    else:
        (ki, li), (kj, lj) = mi, mj
        for bounds, amp in profile.boxes:
            (x0, x1), (y0, y1) = bounds
            total += (
                amp
                * 4.0
                * float(_sine_product_integral(ki, kj, x0, x1))
                * float(_sine_product_integral(li, lj, y0, y1))
            )
    return total


def overlap_block(model: ModalModel, profile: DampingProfile, rows, cols) -> np.ndarray:
    """Matrix of overlaps for rows x cols mode lists (vectorized over boxes)."""
    _check_compatible(model, profile)
    if model.dim == 1:
        ri = np.array([abs(int(m)) for m in rows])[:, None]
        cj = np.array([abs(int(m)) for m in cols])[None, :]
        out = np.zeros((len(rows), len(cols)))
        for bounds, amp in profile.boxes:
            lo, hi = bounds[0]
            out += amp * 2.0 * _sine_product_integral(ri, cj, lo, hi)
        return out
    rk = np.array([m[0] for m in rows])[:, None]
    rl = np.array([m[1] for m in rows])[:, None]
    ck = np.array([m[0] for m in cols])[None, :]
    cl = np.array([m[1] for m in cols])[None, :]
    out = np.zeros((len(rows), len(cols)))
    for bounds, amp in profile.boxes:
        (x0, x1), (y0, y1) = bounds
        out += (
            amp
            * 4.0
            * _sine_product_integral(rk, ck, x0, x1)
            * _sine_product_integral(rl, cl, y0, y1)
        )
    return out


def overlap_gram(model: ModalModel, profile: DampingProfile, modes) -> np.ndarray:
    return overlap_block(model, profile, modes, modes)


# --------------------------------------------------------------------------
# quadrature oracle

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(10)


class _PanelBudget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise QuadratureConvergenceError(
                f"quadrature exceeded the panel budget ({self.limit})"
            )


def _gauss_1d(f, lo, hi):
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return half * float(np.sum(_GAUSS_W * f(mid + half * _GAUSS_X)))


def _adaptive_1d(f, lo, hi, tol, budget):
    total = 0.0
    stack = [(lo, hi, _gauss_1d(f, lo, hi), tol)]
    budget.spend()
    while stack:
        a, b, coarse, t = stack.pop()
        mid = 0.5 * (a + b)
        left = _gauss_1d(f, a, mid)
        right = _gauss_1d(f, mid, b)
        budget.spend(2)
        if abs(left + right - coarse) <= t:
            total += left + right
        else:
            stack.append((a, mid, left, 0.5 * t))
            stack.append((mid, b, right, 0.5 * t))
    return total


def _gauss_2d(f, x0, x1, y0, y1):
    mx, hx = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    my, hy = 0.5 * (y0 + y1), 0.5 * (y1 - y0)
    X = mx + hx * _GAUSS_X
    Y = my + hy * _GAUSS_X
    W = np.outer(_GAUSS_W, _GAUSS_W)
    return hx * hy * float(np.sum(W * f(X[:, None], Y[None, :])))


def _adaptive_2d(f, x0, x1, y0, y1, tol, budget):
    total = 0.0
    stack = [((x0, x1, y0, y1), _gauss_2d(f, x0, x1, y0, y1), tol)]
    budget.spend()
    while stack:
        (a, b, c, d), coarse, t = stack.pop()
        mx, my = 0.5 * (a + b), 0.5 * (c + d)
        quads = [(a, mx, c, my), (mx, b, c, my), (a, mx, my, d), (mx, b, my, d)]
        vals = [_gauss_2d(f, *q) for q in quads]
        budget.spend(4)
        if abs(sum(vals) - coarse) <= t:
            total += sum(vals)
        else:
            for q, v in zip(quads, vals):
                stack.append((q, v, 0.25 * t))
    return total


def overlap_quadrature(
    model: ModalModel, profile: DampingProfile, i, j, tol: float = 1e-10, max_panels: int = 10 ** 6
) -> float:
    """Same quantity as :func:`overlap` by adaptive Gauss quadrature.

    Integrates a(x) v_i(x) v_j(x) box by box through the model's
    eigenfunction evaluator, so it shares no code with the closed form.
    Raises :class:`QuadratureConvergenceError` past ``max_panels`` panels.
    """
    _check_compatible(model, profile)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    mi = model.validate_mode(i)
    mj = model.validate_mode(j)
    if not profile.boxes:
        return 0.0
    budget = _PanelBudget(max_panels)
    per_box = tol / len(profile.boxes)
    total = 0.0
    for bounds, amp in profile.boxes:
        if model.dim == 1:
            lo, hi = bounds[0]

            def f(x, amp=amp):
                return amp * model.eigenfunction(mi, x) * model.eigenfunction(mj, x)

            total += _adaptive_1d(f, lo, hi, per_box, budget)
        else:
            (x0, x1), (y0, y1) = bounds

            def f(x, y, amp=amp):
                return amp * model.eigenfunction(mi, x, y) * model.eigenfunction(mj, x, y)

            total += _adaptive_2d(f, x0, x1, y0, y1, per_box, budget)
    return total
