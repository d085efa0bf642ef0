"""Upper-bound perturbations that remove zeros at bounded sup-norm cost.

Three constructions for scalar 1-Lipschitz targets f on [0,1]:

* ``flatten_perturbation`` partitions [0,1] into ceil(C/(3 eps)) equal
  intervals (lengths land in [2 eps/C, 3 eps/C]), lifts each interval
  where |f| stays below eps/2 onto the constant plateau eps/2 via two
  unit-slope ramps, and re-interpolates the remaining intervals
  piecewise-linearly on ceil(3/C) subintervals.  The result stays
  within eps of f and carries at most 2 zeros per lifted interval.

* ``find_separated_peaks`` collects argmax points of |f| on the
  intervals whose sampled maximum exceeds eps/2 and greedily thins them
  to pairwise separation 2 eps/C.

* ``refine_interpolant`` interpolates f on the uniform mesh of
  ceil(4/eps) subintervals (mesh <= eps/4) and nudges knot zeros away,
  so each subinterval carries at most one zero and the distance stays
  below eps/4 + 2e-12; subintervals containing a peak end up zero-free.

``iterate_improvement`` chains peak finding and re-interpolation down a
geometric budget ladder eps0/4**k and reports the achieved zero counts
for comparison with the contradiction envelope
(1 - 7 C^2/36)**k * 4**k / eps0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .funcrep import SampledFunction, count_zero_components, nudge_knot_zeros

NUDGE_ETA = 1e-12
SCAN_STEP_DIVISOR = 64  # interval maxima sampled at step eps/64


@dataclass(frozen=True)
class PeakSet:
    """Separated points where |f| provably exceeds eps/2."""

    points: tuple[float, ...]
    values: tuple[float, ...]
    separation: float

    def __len__(self) -> int:
        return len(self.points)


def _check_budget(eps: float, C: float) -> None:
    # eps <= C/6 keeps the partition lengths inside [2 eps/C, 3 eps/C];
    # the cardinality guarantee of the peak count additionally needs
    # eps <= C**2/12, which is reported rather than enforced.
    if not (0.0 < C <= 1.0):
        raise DomainError(f"need C in (0, 1], got {C}")
    if not (0.0 < eps <= C / 6.0):
        raise DomainError(f"need 0 < eps <= C/6 = {C / 6.0}, got {eps}")


def _partition(eps: float, C: float) -> np.ndarray:
    k0 = math.ceil(C / (3.0 * eps))
    return np.linspace(0.0, 1.0, k0 + 1)


def _scan_interval(f: Callable, a: float, b: float, step: float) -> tuple[float, float]:
    """Sampled (max |f|, argmax) over [a, b] including both endpoints."""
    xs = np.arange(a, b, step)
    xs = np.append(xs, b)
    best_x, best_v = a, -1.0
    for x in xs:
        v = abs(float(f(x)))
        if v > best_v:
            best_x, best_v = float(x), v
    return best_v, best_x


def flatten_perturbation(f: Callable, eps: float, C: float) -> SampledFunction:
    """The zero-removing lift of f at budget eps.

    Intervals are classified by a sampled maximum with a Lipschitz
    safety margin of half the scan step, so a lifted interval truly
    satisfies max |f| <= eps/2 whenever f is 1-Lipschitz; borderline
    intervals fall through to the piecewise-linear branch, which is
    within eps regardless.
    """
    _check_budget(eps, C)
    cuts = _partition(eps, C)
    step = eps / SCAN_STEP_DIVISOR
    margin = step / 2.0
    k1 = math.ceil(3.0 / C)
    xs: list[float] = []
    vs: list[float] = []

    def emit(x: float, v: float) -> None:
        if xs and x <= xs[-1]:
            return  # duplicate or collapsed breakpoint; first value wins
        xs.append(x)
        vs.append(v)

    for a, b in zip(cuts[:-1], cuts[1:]):
        peak, _ = _scan_interval(f, a, b, step)
        fa, fb = float(f(a)), float(f(b))
        if peak <= eps / 2.0 - margin:
            ramp_up_end = a - fa + eps / 2.0
            ramp_down_start = b + fb - eps / 2.0
            emit(a, fa)
            emit(ramp_up_end, eps / 2.0)
            emit(ramp_down_start, eps / 2.0)
            emit(b, fb)
        else:
            for x in np.linspace(a, b, k1 + 1):
                emit(float(x), float(f(x)))
    if xs[-1] != 1.0:
        emit(1.0, float(f(1.0)))
    return SampledFunction(grid=(np.asarray(xs),), values=np.asarray(vs)[:, None])


def find_separated_peaks(f: Callable, eps: float, C: float) -> PeakSet:
    """Argmax points of |f| >= eps/2, thinned to 2 eps/C separation.

    The scan runs left to right and keeps the first point of each
    conflict cluster.  The returned count can fall short of the
    C^2/(18 eps) cardinality that holds under the contradiction
    hypothesis; that is reported, not an error.
    """
    _check_budget(eps, C)
    cuts = _partition(eps, C)
    step = eps / SCAN_STEP_DIVISOR
    separation = 2.0 * eps / C
    points: list[float] = []
    values: list[float] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        peak, arg = _scan_interval(f, a, b, step)
        if peak > eps / 2.0:
            if not points or arg - points[-1] >= separation:
                points.append(arg)
                values.append(peak)
    return PeakSet(points=tuple(points), values=tuple(values), separation=separation)


def refine_interpolant(f: Callable, eps: float, peaks: Optional[PeakSet] = None) -> SampledFunction:
    """Piecewise-linear interpolant of f on the mesh of ceil(4/eps) cells.

    Knot zeros are nudged to +1e-12 so each cell carries at most one
    zero; for 1-Lipschitz f the result stays within eps/4 + 2e-12 of f.
    The optional peak set does not alter the construction; it is the
    reference against which the caller compares the zero count with
    ceil(4/eps) - len(peaks).
    """
    if eps <= 0.0:
        raise DomainError(f"budget must be positive, got {eps}")
    k = math.ceil(4.0 / eps)
    knots = np.linspace(0.0, 1.0, k + 1)
    vals = np.array([float(f(x)) for x in knots])
    g = SampledFunction(grid=(knots,), values=vals[:, None])
    return nudge_knot_zeros(g, NUDGE_ETA)


def improvement_envelope(eps0: float, C: float, k: int) -> float:
    """The contradiction envelope (1 - 7C^2/36)**k * 4**k / eps0."""
    return (1.0 - 7.0 * C * C / 36.0) ** k * 4.0**k / eps0


def iterate_improvement(
    f: Callable, eps0: float, C: float, rounds: int
) -> list[tuple[float, int]]:
    """Drive the budget ladder eps0/4**k, k = 1..rounds.

    Round k finds peaks and re-interpolates at scale eps0/4**(k-1);
    the interpolant lies within eps0/4**k of f, so its zero count is an
    achieved value at that budget.  Returns (budget, count) pairs.
    """
    if rounds < 1:
        raise DomainError(f"need rounds >= 1, got {rounds}")
    _check_budget(eps0, C)
    out: list[tuple[float, int]] = []
    scale = eps0
    for k in range(1, rounds + 1):
        find_separated_peaks(f, scale, C)
        g = refine_interpolant(f, scale)
        count = count_zero_components(g).component_count
        out.append((eps0 / 4.0**k, count))
        scale /= 4.0
    return out


def theory_upper_curve(norm: float, eps: float, alpha: float, m: int, p: int, cw: float = 1.0) -> float:
    """Reference upper envelope cw * (norm/eps)**((m-p)/alpha)."""
    if eps <= 0.0:
        raise DomainError(f"budget must be positive, got {eps}")
    return cw * (norm / eps) ** ((m - p) / alpha)
