"""Exact evaluation of the multi-scale extremal map.

The scalar profile is an infinite train of bumps packed level by level:
level n >= 1 occupies [1 - 2**(1-n), 1 - 2**(-n)] and carries 2**(n*n)
bumps of quarter-width

    scale_n = 2**(-n*n - n - 2),

so each level's train fills its slot exactly (2**(n*n) bumps of support
4*scale_n cover width 2**(-n)).  One bump rises along beta/2, falls back
symmetrically, and repeats negated over the second half of its support;
its extrema sit at odd multiples of scale_n with values +-beta(scale_n)/2.

All schedule quantities are dyadic rationals and the point locator works
in exact arithmetic (integer shifts for dyadic inputs, which every float
is; ``fractions.Fraction`` otherwise), so bump-corner evaluation is
exact: there is no truncation error, only the float rounding of beta
itself.  Levels beyond ``MAX_LEVEL`` are unreachable at double-precision
sweep scales and evaluate to 0 with a ``ResolutionWarning``.

The d-dimensional extremal map applies the profile coordinatewise to the
first q domain coordinates, scaled by 1/sqrt(q), and prepends p zero
components (the padding used to handle flat rectangle targets).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .funcrep import SampledFunction
from .modulus import ModulusSpec

MAX_LEVEL = 30


class ResolutionWarning(UserWarning):
    """Evaluation requested beyond the deepest representable level."""


@dataclass(frozen=True)
class LevelSchedule:
    """Dyadic layout of one bump-train level."""

    n: int
    start: Fraction       # left end of the level's slot, 1 - 2**(1-n)
    scale: Fraction       # bump quarter-width, 2**(-n*n-n-2)
    bump_count: int       # 2**(n*n)
    width: Fraction       # slot width, bump_count * 4 * scale = 2**(-n)


def level_schedule(n: int) -> LevelSchedule:
    if not (1 <= n <= MAX_LEVEL):
        raise DomainError(f"level must lie in [1, {MAX_LEVEL}], got {n}")
    start = 1 - Fraction(1, 2 ** (n - 1))
    scale = Fraction(1, 2 ** (n * n + n + 2))
    return LevelSchedule(
        n=n,
        start=start,
        scale=scale,
        bump_count=2 ** (n * n),
        width=Fraction(1, 2**n),
    )


def _bump_at(beta: ModulusSpec, scale: Fraction, t: Fraction) -> float:
    """One bump of quarter-width ``scale`` evaluated at offset t."""
    if t < 0 or t > 4 * scale:
        return 0.0
    sign = 1.0
    if t > 2 * scale:
        t = 4 * scale - t
        sign = -1.0
    if t < scale:
        return sign * beta(float(t)) / 2.0
    return sign * beta(float(2 * scale - t)) / 2.0


def bump(beta: ModulusSpec, n: int, t) -> float:
    """The level-n bump: beta(t)/2 rising, mirrored falling, then negated.

    Zero outside [0, 4*scale_n]; continuous everywhere.
    """
    return _bump_at(beta, level_schedule(n).scale, Fraction(t))


def _dyadic_float(numer: int, ebits: int) -> float:
    """numer / 2**ebits as a float, exact whenever representable."""
    if numer == 0:
        return 0.0
    shift = (numer & -numer).bit_length() - 1
    numer >>= shift
    ebits -= shift
    if numer.bit_length() <= 53 and -1020 < ebits < 1020:
        return math.ldexp(numer, -ebits)
    return float(Fraction(numer, 1 << ebits)) if ebits >= 0 else float(numer << -ebits)


def _profile_dyadic(beta: ModulusSpec, num: int, e: int) -> float:
    """Profile at s = num / 2**e in [0, 1), via integer arithmetic only.

    Every float is such a dyadic, so this is the hot path; the level
    locator, the bump index, and the bump offset are all exact shifts.
    """
    den = 1 << e
    ubits = den - num  # numerator of 1 - s over 2**e
    n = 1
    while (ubits << n) <= den:
        n += 1
        if n > MAX_LEVEL:
            warnings.warn(
                f"point {_dyadic_float(num, e)} lies beyond level {MAX_LEVEL}; returning 0",
                ResolutionWarning,
                stacklevel=3,
            )
            return 0.0
    # s sits in level n's slot, which forces e >= n - 1
    sbits = n * n + n + 2  # scale = 2**-sbits
    off_num = num - den + (den >> (n - 1))  # offset = s - start over 2**e
    k = (off_num << (sbits - 2)) >> e  # bump index within the train
    t_num = (off_num << (sbits - 2)) - (k << e)  # bump offset over 2**dt
    dt = e + sbits - 2
    sign = 1.0
    if (t_num << 1) > den:  # t > 2*scale: mirror into the rising half
        t_num = den - t_num
        sign = -1.0
    if (t_num << 2) < den:  # t < scale: rising branch beta(t)/2
        return sign * beta(_dyadic_float(t_num, dt)) / 2.0
    return sign * beta(_dyadic_float((den >> 1) - t_num, dt)) / 2.0


def profile(beta: ModulusSpec, s) -> float:
    """The scalar multi-scale profile at s in [0, 1], evaluated exactly.

    Locates the unique level containing s, reduces to the bump offset in
    exact dyadic arithmetic, and evaluates a single bump; level supports
    are disjoint so no truncation of the level sum occurs.
    """
    num, den = s.as_integer_ratio() if not isinstance(s, int) else (s, 1)
    if num < 0 or num > den:
        raise DomainError(f"profile argument must lie in [0, 1], got {s}")
    if num == den:
        return 0.0
    if den & (den - 1) == 0:
        return _profile_dyadic(beta, num, den.bit_length() - 1)
    # non-dyadic rational input: locate the level in exact arithmetic
    sf = Fraction(num, den)
    n = 1
    while 1 - sf <= Fraction(1, 2**n):
        n += 1
        if n > MAX_LEVEL:
            warnings.warn(
                f"point {float(sf)} lies beyond level {MAX_LEVEL}; returning 0",
                ResolutionWarning,
                stacklevel=2,
            )
            return 0.0
    lev = level_schedule(n)
    offset = sf - lev.start
    k = offset // (4 * lev.scale)
    return _bump_at(beta, lev.scale, offset - 4 * k * lev.scale)


def level_profile(beta: ModulusSpec, n: int, s) -> float:
    """The level-n train alone: equals ``profile`` on the level's slot, 0 off it."""
    lev = level_schedule(n)
    sf = Fraction(s)
    if sf < lev.start or sf >= lev.start + lev.width:
        return 0.0
    offset = sf - lev.start
    k = offset // (4 * lev.scale)
    return _bump_at(beta, lev.scale, offset - 4 * k * lev.scale)


@dataclass(frozen=True)
class ExtremalFunction:
    """The product extremal map [0,1]^d -> R^(p+q).

    Components are p leading zeros followed by profile(x_i)/sqrt(q) for
    i = 1..q; only the first q domain coordinates matter.  The map
    admits beta as a modulus of continuity.
    """

    beta: ModulusSpec
    d: int
    q: int
    p: int = 0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError(f"domain dimension must be >= 1, got {self.d}")
        if not (1 <= self.q <= self.d):
            raise DomainError(f"need 1 <= q <= d, got q={self.q}, d={self.d}")
        if self.p < 0:
            raise DomainError(f"padding dimension must be >= 0, got {self.p}")

    @property
    def m(self) -> int:
        return self.p + self.q

    def __call__(self, x) -> np.ndarray:
        pt = np.atleast_1d(np.asarray(x, dtype=float))
        if pt.shape != (self.d,):
            raise DomainError(f"expected a point in [0,1]^{self.d}, got shape {pt.shape}")
        if np.any(pt < 0.0) or np.any(pt > 1.0):
            raise DomainError(f"point {tuple(pt)} outside [0,1]^{self.d}")
        root = math.sqrt(self.q)
        out = np.zeros(self.m)
        for i in range(self.q):
            out[self.p + i] = profile(self.beta, pt[i]) / root
        return out

    def as_scalar(self):
        """The active profile as a plain scalar callable (d = q = 1 maps)."""
        if self.q != 1 or self.p != 0 or self.d != 1:
            raise DomainError("as_scalar needs d = q = 1 and p = 0")
        beta = self.beta
        return lambda s: profile(beta, s)

    def sample(self, step: float) -> SampledFunction:
        """Sample onto the uniform grid of the given step (1/step integral).

        The profile is evaluated once per distinct knot coordinate and
        broadcast across the product grid.
        """
        count = round(1.0 / step)
        if not math.isclose(count * step, 1.0, rel_tol=0, abs_tol=1e-12):
            raise DomainError(f"step must divide 1 exactly, got {step}")
        knots = np.linspace(0.0, 1.0, count + 1)
        root = math.sqrt(self.q)
        line = np.array([profile(self.beta, s) for s in knots]) / root
        lens = (len(knots),) * self.d
        vals = np.zeros(lens + (self.m,))
        for i in range(self.q):
            shape = [1] * self.d
            shape[i] = len(knots)
            vals[..., self.p + i] = line.reshape(shape)
        return SampledFunction(grid=(knots,) * self.d, values=vals)
