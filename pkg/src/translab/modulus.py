"""Moduli of continuity: evaluation, axiom checking, and inversion.

A modulus of continuity is a non-decreasing, subadditive function beta
with beta(0) = 0.  Two concrete representations are supported:

* power form    beta(s) = lam * s**alpha    with lam > 0 and 0 < alpha <= 1;
* table form    linear interpolation through a finite increasing list of
  (delta, value) breakpoints, extended from (0, 0) below the first
  breakpoint and clamped to the last value above the final one.

The inverse of a modulus is the largest separation that guarantees a
given oscillation,

    inverse(s) = sup{delta >= 0 : beta(delta) <= s},

which saturates to +inf once s reaches sup beta.  For the power form the
closed form (s/lam)**(1/alpha) is used; for tables a monotone bisection
resolves the supremum to 1e-12 relative accuracy.

Concavity of table moduli is deliberately not enforced at construction;
``check_modulus_axioms`` reports monotonicity, subadditivity, and the
vanishing value at zero on a caller-supplied grid instead, so adversarial
tables remain representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .errors import DomainError

if TYPE_CHECKING:  # pragma: no cover
    from .funcrep import SampledFunction

AXIOM_TOL = 1e-12
INVERSE_REL_TOL = 1e-12


@dataclass(frozen=True)
class ModulusSpec:
    """A modulus of continuity in power or table form.

    Instances are immutable and callable: ``beta(s)`` evaluates the
    modulus, ``beta.inverse(s)`` the (possibly infinite) inverse.
    """

    kind: str
    lam: float = 1.0
    alpha: float = 1.0
    breakpoints: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "power":
            if not (self.lam > 0.0):
                raise DomainError(f"power modulus needs lam > 0, got {self.lam}")
            if not (0.0 < self.alpha <= 1.0):
                raise DomainError(f"power modulus needs alpha in (0, 1], got {self.alpha}")
        elif self.kind == "table":
            pts = tuple((float(d), float(v)) for d, v in self.breakpoints)
            if not pts:
                raise DomainError("table modulus needs at least one breakpoint")
            deltas = [d for d, _ in pts]
            if any(b <= a for a, b in zip(deltas, deltas[1:])) or deltas[0] < 0.0:
                raise DomainError("table breakpoints must be nonnegative and strictly increasing")
            object.__setattr__(self, "breakpoints", pts)
        else:
            raise DomainError(f"unknown modulus kind {self.kind!r}")

    @classmethod
    def power(cls, lam: float, alpha: float) -> "ModulusSpec":
        return cls(kind="power", lam=float(lam), alpha=float(alpha))

    @classmethod
    def table(cls, points: Iterable[tuple[float, float]]) -> "ModulusSpec":
        return cls(kind="table", breakpoints=tuple(points))

    def __call__(self, s: float) -> float:
        s = float(s)
        if s < 0.0:
            raise DomainError(f"modulus argument must be nonnegative, got {s}")
        if self.kind == "power":
            if s == 0.0:
                return 0.0
            return self.lam * s ** self.alpha
        deltas = [0.0] + [d for d, _ in self.breakpoints]
        values = [0.0] + [v for _, v in self.breakpoints]
        if self.breakpoints[0][0] == 0.0:
            deltas, values = deltas[1:], values[1:]
        return float(np.interp(s, deltas, values))

    @property
    def saturation(self) -> float:
        """sup beta: the oscillation level above which the inverse is +inf."""
        if self.kind == "power":
            return math.inf
        return self.breakpoints[-1][1]

    def inverse(self, s: float) -> float:
        """sup{delta >= 0 : beta(delta) <= s}, +inf once s >= sup beta."""
        s = float(s)
        if s < 0.0:
            raise DomainError(f"inverse argument must be nonnegative, got {s}")
        if self.kind == "power":
            return (s / self.lam) ** (1.0 / self.alpha)
        if s >= self.saturation:
            return math.inf
        # beta(lo) <= s < beta(hi) throughout; the supremum lies in [lo, hi).
        lo, hi = 0.0, self.breakpoints[-1][0]
        while hi - lo > INVERSE_REL_TOL * max(hi, 1.0):
            mid = 0.5 * (lo + hi)
            if self(mid) <= s:
                lo = mid
            else:
                hi = mid
        return lo


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of checking the three modulus axioms on a sample grid."""

    monotone: bool
    subadditive: bool
    vanishes_at_zero: bool

    @property
    def all_hold(self) -> bool:
        return self.monotone and self.subadditive and self.vanishes_at_zero


def check_modulus_axioms(beta: ModulusSpec, grid: Sequence[float]) -> AxiomReport:
    """Check monotonicity, subadditivity, and beta(0) = 0 on a grid.

    Each flag is true iff the axiom holds at every grid point or pair
    within absolute tolerance 1e-12.  Subadditivity is tested on all
    pairs (s1, s2) from the grid, with beta evaluated directly at s1+s2.
    """
    pts = [float(s) for s in grid]
    if not pts:
        raise DomainError("axiom grid must be nonempty")
    if any(b < a for a, b in zip(pts, pts[1:])):
        raise DomainError("axiom grid must be sorted")
    vals = [beta(s) for s in pts]
    monotone = all(vb >= va - AXIOM_TOL for va, vb in zip(vals, vals[1:]))
    subadditive = True
    for i, (si, vi) in enumerate(zip(pts, vals)):
        for sj, vj in zip(pts[i:], vals[i:]):
            if beta(si + sj) > vi + vj + AXIOM_TOL:
                subadditive = False
                break
        if not subadditive:
            break
    vanishes = beta(0.0) <= AXIOM_TOL
    return AxiomReport(monotone=monotone, subadditive=subadditive, vanishes_at_zero=vanishes)


def minimal_modulus(h: "SampledFunction", delta: float) -> float:
    """Largest oscillation of h over grid-point pairs at distance <= delta.

    Exact for the piecewise-multilinear interpolant restricted to knot
    pairs; in d >= 2 this is a lower estimate of the true minimal
    modulus, since interior extrema are not scanned.
    """
    delta = float(delta)
    diam = math.sqrt(h.d)
    if not (0.0 <= delta <= diam):
        raise DomainError(f"delta must lie in [0, {diam}], got {delta}")
    pts = h.knot_points()
    vals = h.values.reshape(-1, h.m)
    best = 0.0
    # Chunked O(N^2) pair scan; test grids stay small enough for this.
    chunk = 512
    for i0 in range(0, len(pts), chunk):
        p = pts[i0 : i0 + chunk]
        v = vals[i0 : i0 + chunk]
        dist = np.sqrt(((p[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
        osc = np.sqrt(((v[:, None, :] - vals[None, :, :]) ** 2).sum(-1))
        mask = dist <= delta
        if mask.any():
            best = max(best, float(osc[mask].max()))
    return best
