"""Single-chart flattening of the target set.

A chart is a diffeomorphism phi between open sets U, V in R^m carrying
the target onto the coordinate plane R^p x {0}, together with its
analytic Lipschitz constants

    lam1 = inf |grad phi|,   lam2 = sup |grad phi|

(operator norms of the Jacobian; lam1 is the reciprocal of the sup of
the inverse Jacobian's norm).  Charts are a closed set of built-ins so
the constants never have to be estimated numerically:

* ``identity_chart``     phi = id, lam1 = lam2 = 1;
* ``affine_chart``       phi(y) = A y + b, constants from the singular
  values of A;
* ``polar_demo_chart``   a curved example flattening a circular arc,
  with exact constants on a half-annulus.

Transporting a flat-model function g into the chart composes
phi^{-1}(lam1 * g(x)); pulling a perturbation h back composes
phi(h(x))/lam1 and inflates the distance budget by lam2/lam1.  All
built-in charts have convex V, which is what makes the mean-value
bounds behind those factors valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, RangeEscapeError


def _everywhere(_) -> bool:
    return True


@dataclass(frozen=True)
class Chart:
    name: str
    m: int
    phi: Callable[[np.ndarray], np.ndarray]
    phi_inv: Callable[[np.ndarray], np.ndarray]
    lam1: float
    lam2: float
    r0: float = 1.0
    in_domain: Callable[[np.ndarray], bool] = field(default=_everywhere)
    in_image: Callable[[np.ndarray], bool] = field(default=_everywhere)

    def __post_init__(self) -> None:
        if not (0.0 < self.lam1 <= self.lam2 < math.inf):
            raise DomainError(f"need 0 < lam1 <= lam2 < inf, got {self.lam1}, {self.lam2}")
        if self.r0 <= 0.0:
            raise DomainError(f"rectangle half-width must be positive, got {self.r0}")

    @property
    def distortion(self) -> float:
        return self.lam2 / self.lam1


def identity_chart(m: int, r0: float = 1.0) -> Chart:
    return Chart(
        name="identity",
        m=m,
        phi=lambda y: np.asarray(y, dtype=float).copy(),
        phi_inv=lambda w: np.asarray(w, dtype=float).copy(),
        lam1=1.0,
        lam2=1.0,
        r0=r0,
    )


def affine_chart(A, b=None, r0: float = 1.0) -> Chart:
    """phi(y) = A y + b with Lipschitz constants from the singular values of A."""
    mat = np.asarray(A, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DomainError(f"affine chart needs a square matrix, got shape {mat.shape}")
    m = mat.shape[0]
    off = np.zeros(m) if b is None else np.asarray(b, dtype=float)
    if off.shape != (m,):
        raise DomainError(f"offset must have length {m}, got shape {off.shape}")
    svals = np.linalg.svd(mat, compute_uv=False)
    if svals[-1] <= 0.0:
        raise DomainError("affine chart matrix must be nonsingular")
    inv = np.linalg.inv(mat)
    return Chart(
        name="affine",
        m=m,
        phi=lambda y: mat @ np.asarray(y, dtype=float) + off,
        phi_inv=lambda w: inv @ (np.asarray(w, dtype=float) - off),
        lam1=float(svals[-1]),
        lam2=float(svals[0]),
        r0=r0,
    )


def polar_demo_chart(rho: float = 2.0, radius: float = 1.0, r0: float = 1.0) -> Chart:
    """Flatten the arc {|y| = radius, y_1 > 0} in R^2 to the u-axis.

    phi(y) = (radius * atan2(y2, y1), |y| - radius) on the half-annulus
    radius/rho < |y| < radius*rho, y_1 > 0.  The Jacobian has singular
    values radius/|y| and 1, so lam1 = 1/rho and lam2 = rho exactly.
    The image is the open rectangle (-pi*radius/2, pi*radius/2) x
    (radius/rho - radius, radius*rho - radius), which is convex.
    """
    if rho <= 1.0:
        raise DomainError(f"annulus ratio must exceed 1, got {rho}")
    if radius <= 0.0:
        raise DomainError(f"radius must be positive, got {radius}")
    if r0 >= math.pi * radius / 2.0:
        raise DomainError(f"r0 must stay below pi*radius/2 = {math.pi * radius / 2.0}")
    u_max = math.pi * radius / 2.0
    v_lo, v_hi = radius / rho - radius, radius * rho - radius

    def phi(y):
        y = np.asarray(y, dtype=float)
        r = math.hypot(y[0], y[1])
        return np.array([radius * math.atan2(y[1], y[0]), r - radius])

    def phi_inv(w):
        w = np.asarray(w, dtype=float)
        r = radius + w[1]
        theta = w[0] / radius
        return np.array([r * math.cos(theta), r * math.sin(theta)])

    def in_domain(y) -> bool:
        y = np.asarray(y, dtype=float)
        r = math.hypot(y[0], y[1])
        return radius / rho < r < radius * rho and y[0] > 0.0

    def in_image(w) -> bool:
        w = np.asarray(w, dtype=float)
        return abs(w[0]) < u_max and v_lo < w[1] < v_hi

    return Chart(
        name="polar-demo",
        m=2,
        phi=phi,
        phi_inv=phi_inv,
        lam1=1.0 / rho,
        lam2=rho,
        r0=r0,
        in_domain=in_domain,
        in_image=in_image,
    )


def gamma_w(chart: Chart, m: int, p: int) -> float:
    """Distortion constant 2*sqrt(m - p) * lam2/lam1 of the flattening."""
    if p >= m:
        raise DomainError(f"need p < m, got p={p}, m={m}")
    return 2.0 * math.sqrt(m - p) * chart.lam2 / chart.lam1


def transport_function(chart: Chart, g: Callable) -> Callable:
    """Carry a flat-model map into the chart: x -> phi^{-1}(lam1 * g(x)).

    The result admits the same modulus of continuity as g.  Evaluation
    raises if lam1 * g(x) leaves the chart image.
    """

    def f(x):
        w = chart.lam1 * np.asarray(g(x), dtype=float)
        if not chart.in_image(w):
            raise RangeEscapeError(f"lam1*g(x) = {tuple(w)} escapes the chart image at x = {x}")
        return chart.phi_inv(w)

    return f


def pullback_perturbation(chart: Chart, h: Callable) -> tuple[Callable, float]:
    """Flatten a perturbation: x -> phi(h(x))/lam1, plus the budget factor.

    If h stays within eps of the transported map, the returned function
    stays within factor*eps of the flat model, factor = lam2/lam1.
    """

    def flat(x):
        y = np.asarray(h(x), dtype=float)
        if not chart.in_domain(y):
            raise RangeEscapeError(f"h(x) = {tuple(y)} escapes the chart domain at x = {x}")
        return chart.phi(y) / chart.lam1

    return flat, chart.distortion


def membership_rectangle(v, r0: float, p: int) -> bool:
    """Is v inside the flat target [-r0, r0]^p x {0}^(m-p)?

    The trailing block is tested for exact zero; the leading block for
    |v_i| <= r0.
    """
    vec = np.atleast_1d(np.asarray(v, dtype=float))
    if p < 0 or p > len(vec):
        raise DomainError(f"need 0 <= p <= m, got p={p}, m={len(vec)}")
    return bool(np.all(np.abs(vec[:p]) <= r0) and np.all(vec[p:] == 0.0))
