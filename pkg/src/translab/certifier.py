"""Lower-bound certification of zero sets under sup-norm perturbation.

Given a perturbation budget eps, the certifier resolves the deepest
verifiable level n0 (the budget band), enumerates the dyadic cubes
centered at bump extrema, and certifies a zero of the active block of
any admissible perturbation inside each cube via the Poincare-Miranda
sign condition: componentwise strict opposite signs on opposite faces,
with a modulus-slack margin that keeps the sign constant across each
face-lattice cell.

In theoretical mode every cube of every level n <= n0 counts as
verified (that is exactly what the construction guarantees); in
empirical mode the sign test actually runs against a supplied
evaluator.  The certificate reports both the per-level sum of verified
cubes and the single deepest-level count, next to the theoretical
envelope

    (16 / Psi(gamma * eps))**(m-p) * 2**(-4 (m-p) sqrt(|log2 Psi(gamma*eps)|)).

The face test is sound for evaluators that admit the stated modulus up
to an eps-bounded deviation from the extremal map; it is not an
interval-arithmetic proof.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .chart import Chart, gamma_w, pullback_perturbation
from .errors import DomainError, EnumerationCapError
from .extremal import MAX_LEVEL, ExtremalFunction, level_schedule
from .modulus import ModulusSpec

ENUMERATION_CAP_BITS = 24  # at most 2**24 cubes per level
FACE_LATTICE_POINTS = 9    # side 2*scale scanned at step scale/4


@dataclass(frozen=True)
class Cube:
    """The level-n cell of side 2*scale_n around one bump-extremum tuple."""

    n: int
    index: tuple[int, ...]
    scale: Fraction
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    @property
    def q(self) -> int:
        return len(self.index)

    @property
    def center(self) -> tuple[Fraction, ...]:
        return tuple(a + self.scale for a in self.lo)


def cube_at(n: int, index: Sequence[int]) -> Cube:
    lev = level_schedule(n)
    idx = tuple(int(i) for i in index)
    if any(not (0 <= i < lev.bump_count) for i in idx):
        raise DomainError(f"cube index {idx} out of range for level {n}")
    lo = tuple(lev.start + (4 * i + 1) * lev.scale for i in idx)
    hi = tuple(lev.start + (4 * i + 3) * lev.scale for i in idx)
    return Cube(n=n, index=idx, scale=lev.scale, lo=lo, hi=hi)


def enumerate_cubes(n: int, q: int) -> Iterator[Cube]:
    """All level-n cubes in lexicographic index order (2**(q*n*n) of them)."""
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    bits = q * n * n
    if bits > ENUMERATION_CAP_BITS:
        raise EnumerationCapError(
            f"level {n} at q={q} would enumerate 2**{bits} cubes, "
            f"beyond the 2**{ENUMERATION_CAP_BITS} cap"
        )
    lev = level_schedule(n)
    for idx in itertools.product(range(lev.bump_count), repeat=q):
        yield cube_at(n, idx)


def _half_scale(n: int) -> float:
    """scale_n / 2 as an exact float (exponent stays in double range)."""
    return math.ldexp(1.0, -(n * n + n + 3))


def resolve_depth(beta: ModulusSpec, q: int, eps: float) -> int:
    """Deepest level n0 whose budget band contains eps.

    Level n verifies when eps <= beta(scale_n/2) / (2 sqrt(q)); bands
    tile with shared endpoints, and a shared endpoint resolves to the
    shallower level (each band owns its lower edge).  Returns 0 when
    even level 1 fails, i.e. the budget is too large and the
    certificate is vacuous.
    """
    if eps <= 0.0:
        raise DomainError(f"budget must be positive, got {eps}")
    root = 2.0 * math.sqrt(q)
    if eps > beta(_half_scale(1)) / root:
        return 0
    n = 1
    while n < MAX_LEVEL and eps < beta(_half_scale(n + 1)) / root:
        n += 1
    return n


def miranda_verify(
    h: Callable,
    beta: ModulusSpec,
    cube: Cube,
    z: Sequence[float] = (),
    p: int = 0,
    eps: Optional[float] = None,
) -> bool:
    """Poincare-Miranda sign test for the active block of h on a cube.

    For each active axis i the component p+i must hold one strict sign
    on the whole face y_i = lo_i and the opposite strict sign on
    y_i = hi_i (the orientation may differ per axis).  Faces are
    scanned on a lattice of step scale/4 and a sign only counts when
    |value| exceeds beta(scale/4), the slack that freezes the sign
    across a lattice cell for any admissible evaluator.  ``eps`` is the
    caller's claimed sup-distance from the extremal map; the test
    itself does not consume it.  True implies the active block has a
    zero inside the cube under that claim.
    """
    q = cube.q
    slack = beta(float(cube.scale / 4))
    tail = [float(c) for c in np.asarray(z, dtype=float).ravel()]
    lattices = [
        [float(cube.lo[j] + k * cube.scale / 4) for k in range(FACE_LATTICE_POINTS)]
        for j in range(q)
    ]
    for axis in range(q):
        free = [j for j in range(q) if j != axis]
        orientation = 0.0
        for coord, side in ((cube.lo[axis], 1.0), (cube.hi[axis], -1.0)):
            for combo in itertools.product(*(lattices[j] for j in free)):
                y = [0.0] * q
                y[axis] = float(coord)
                for j, val in zip(free, combo):
                    y[j] = val
                value = float(np.asarray(h(np.array(y + tail)))[p + axis])
                if abs(value) <= slack:
                    return False
                sign = 1.0 if value > 0.0 else -1.0
                if orientation == 0.0:
                    orientation = sign * side
                if sign != orientation * side:
                    return False
    return True


@dataclass(frozen=True)
class LevelCount:
    n: int
    verified: int
    total: int


@dataclass(frozen=True)
class Certificate:
    """Outcome of one certification run at a fixed budget."""

    eps: float
    n0: int
    per_level_counts: tuple[LevelCount, ...]
    certified_count: int
    paper_bound: int
    theory_bound: float
    mode: str
    vacuous: bool
    envelope_ok: bool


def theory_lower_bound(beta: ModulusSpec, eps: float, m: int, p: int, gamma: float) -> float:
    """The theoretical zero-count envelope at budget eps.

    Returns 0.0 (vacuous) when the inverse modulus saturates to +inf,
    which happens for bounded moduli once gamma*eps reaches sup beta.
    """
    if eps <= 0.0:
        raise DomainError(f"budget must be positive, got {eps}")
    if not (0 <= p < m):
        raise DomainError(f"need 0 <= p < m, got p={p}, m={m}")
    psi = beta.inverse(gamma * eps)
    if not math.isfinite(psi) or psi <= 0.0:
        return 0.0
    codim = m - p
    return (16.0 / psi) ** codim * 2.0 ** (-4.0 * codim * math.sqrt(abs(math.log2(psi))))


def holder_lower_bound(lam: float, alpha: float, eps: float, m: int, p: int, gamma: float) -> float:
    """Closed-form envelope for the power modulus lam * s**alpha.

    Uses the explicit inverse (s/lam)**(1/alpha) folded into the
    exponents, and agrees with ``theory_lower_bound`` on the equivalent
    power ``ModulusSpec`` to floating-point accuracy.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"need alpha in (0, 1], got {alpha}")
    if lam <= 0.0:
        raise DomainError(f"need lam > 0, got {lam}")
    if eps <= 0.0:
        raise DomainError(f"budget must be positive, got {eps}")
    if not (0 <= p < m):
        raise DomainError(f"need 0 <= p < m, got p={p}, m={m}")
    codim = m - p
    ratio = gamma * eps / lam
    log_term = math.sqrt(abs(math.log2(ratio)) / alpha)
    return 16.0**codim * ratio ** (-codim / alpha) * 2.0 ** (-4.0 * codim * log_term)


def _z_slices(free_dims: int, z_grid: int) -> list[tuple[float, ...]]:
    if free_dims == 0:
        return [()]
    if z_grid < 1:
        raise DomainError(f"z-grid must be >= 1, got {z_grid}")
    axis = [(k + 0.5) / z_grid for k in range(z_grid)]
    return [tuple(c) for c in itertools.product(axis, repeat=free_dims)]


def certify(
    f: ExtremalFunction,
    eps: float,
    h: Optional[Callable] = None,
    chart: Optional[Chart] = None,
    z_grid: int = 1,
) -> Certificate:
    """Certify a zero-count lower bound at budget eps.

    Theoretical mode (no ``h``): every cube of every level n <= n0 is
    verified by construction and the counts are arithmetic.  Empirical
    mode runs ``miranda_verify`` on each cube, at the midpoint slice of
    the free coordinates by default or on a ``z_grid``-per-axis lattice
    of slices; a cube counts only when all checked slices pass.

    With a chart, the budget inflates by lam2/lam1 before depth
    resolution, perturbations are pulled back through the chart, and
    the envelope uses the chart distortion gamma_W.  When the flat
    target has a rectangle block (p >= 1) the reduction also needs
    eps <= r0, so larger budgets give a vacuous certificate; without a
    chart the rectangle half-width is treated as unbounded.
    """
    if eps <= 0.0:
        raise DomainError(f"budget must be positive, got {eps}")
    beta, q, p, d = f.beta, f.q, f.p, f.d
    m = f.m
    rectangle_ok = True
    if chart is not None:
        if chart.m != m:
            raise DomainError(f"chart dimension {chart.m} does not match map codomain {m}")
        gamma = gamma_w(chart, m, p)
        eps_flat = chart.distortion * eps
        evaluator = pullback_perturbation(chart, h)[0] if h is not None else None
        rectangle_ok = p == 0 or eps <= chart.r0
    else:
        gamma = 2.0 * math.sqrt(q)
        eps_flat = eps
        evaluator = h

    n0 = resolve_depth(beta, q, eps_flat) if rectangle_ok else 0
    slices = _z_slices(d - q, z_grid)
    levels = []
    certified = 0
    for n in range(1, n0 + 1):
        total = 2 ** (q * n * n)
        if evaluator is None:
            verified = total
        else:
            verified = sum(
                1
                for cube in enumerate_cubes(n, q)
                if all(miranda_verify(evaluator, beta, cube, z, p=p, eps=eps_flat) for z in slices)
            )
        certified += verified
        levels.append(LevelCount(n=n, verified=verified, total=total))

    theory = theory_lower_bound(beta, eps, m, p, gamma)
    vacuous = n0 == 0 or math.isinf(beta.inverse(gamma * eps))
    return Certificate(
        eps=float(eps),
        n0=n0,
        per_level_counts=tuple(levels),
        certified_count=certified,
        paper_bound=2 ** (q * n0 * n0) if n0 >= 1 else 0,
        theory_bound=theory,
        mode="theoretical" if evaluator is None else "empirical",
        vacuous=vacuous,
        envelope_ok=(n0 == 0) or theory <= certified,
    )
