"""Budget sweeps: certify, attack, and compare against both envelopes.

A sweep walks the dyadic budgets eps = 2**(-j) for j in [j_min, j_max],
certifies the theoretical lower bound at each budget, optionally runs
the adversary constructions to get an achieved upper count, evaluates
the theoretical upper curve, and emits one CSV row per budget.  The
dyadic grid keeps depth resolution exact at band edges.

Configuration is a plain-text key=value file; unknown keys are errors.
Recognized keys: alpha, lambda, d, m, p, j_min, j_max, adversary, C, cw.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .adversary import flatten_perturbation, refine_interpolant, theory_upper_curve
from .certifier import certify
from .errors import ConfigError, DomainError
from .extremal import ExtremalFunction
from .funcrep import count_zero_components
from .modulus import ModulusSpec

CSV_HEADER = ("eps", "n0", "certified_lb", "paper_lb", "theory_lb", "adversary_ub", "theory_ub", "wall_ms")


@dataclass(frozen=True)
class SweepConfig:
    alpha: float
    lam: float
    d: int
    m: int
    p: int
    j_min: int
    j_max: int
    adversary: bool = False
    C: float = 1.0
    cw: float = 1.0

    def validate(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.lam <= 0.0:
            raise ConfigError(f"lambda must be positive, got {self.lam}")
        q = self.m - self.p
        if not (1 <= q <= self.d):
            raise ConfigError(f"need d >= m - p >= 1, got d={self.d}, m={self.m}, p={self.p}")
        if self.p < 0:
            raise ConfigError(f"p must be nonnegative, got {self.p}")
        # j_min > j_max is allowed: an empty range sweeps zero budgets.
        if self.adversary and (self.d != 1 or self.m != 1 or self.p != 0):
            raise ConfigError("adversary runs need d = m = 1 and p = 0")
        if not (0.0 < self.C <= 1.0):
            raise ConfigError(f"C must lie in (0, 1], got {self.C}")


_CONFIG_KEYS = {
    "alpha": ("alpha", float),
    "lambda": ("lam", float),
    "d": ("d", int),
    "m": ("m", int),
    "p": ("p", int),
    "j_min": ("j_min", int),
    "j_max": ("j_max", int),
    "adversary": ("adversary", lambda s: s.strip().lower() in ("1", "true", "yes")),
    "c": ("C", float),
    "cw": ("cw", float),
}


def parse_config(text: str) -> SweepConfig:
    """Parse a key=value config; blank lines and #-comments are skipped."""
    seen: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        field, cast = _CONFIG_KEYS[key]
        try:
            seen[field] = cast(value.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    required = ("alpha", "lam", "d", "m", "p", "j_min", "j_max")
    missing = [f for f in required if f not in seen]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    cfg = SweepConfig(**seen)  # type: ignore[arg-type]
    cfg.validate()
    return cfg


@dataclass(frozen=True)
class SweepRecord:
    eps: float
    n0: int
    certified_lb: int
    paper_lb: int
    theory_lb: float
    adversary_ub: Optional[int]
    theory_ub: float
    wall_ms: int


def sweep(cfg: SweepConfig, chart=None) -> list[SweepRecord]:
    """One record per dyadic budget, ordered by decreasing eps."""
    cfg.validate()
    if chart is not None and cfg.adversary:
        raise ConfigError("adversary runs are flat-model only; drop the chart")
    beta = ModulusSpec.power(cfg.lam, cfg.alpha)
    q = cfg.m - cfg.p
    fn = ExtremalFunction(beta=beta, d=cfg.d, q=q, p=cfg.p)
    records = []
    for j in range(cfg.j_min, cfg.j_max + 1):
        eps = 2.0**-j
        t0 = time.perf_counter()
        cert = certify(fn, eps, chart=chart)
        ub: Optional[int] = None
        if cfg.adversary:
            scalar = fn.as_scalar()
            counts = []
            for h in (flatten_perturbation(scalar, eps, cfg.C), refine_interpolant(scalar, eps)):
                counts.append(count_zero_components(h).h0)
            best = min(counts)
            ub = int(best) if math.isfinite(best) else None
        records.append(
            SweepRecord(
                eps=eps,
                n0=cert.n0,
                certified_lb=cert.certified_count,
                paper_lb=cert.paper_bound,
                theory_lb=cert.theory_bound,
                adversary_ub=ub,
                theory_ub=theory_upper_curve(cfg.lam, eps, cfg.alpha, cfg.m, cfg.p, cfg.cw),
                wall_ms=int(round(1000.0 * (time.perf_counter() - t0))),
            )
        )
    return records


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(records: Sequence[SweepRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                [
                    _fmt(r.eps),
                    r.n0,
                    r.certified_lb,
                    r.paper_lb,
                    _fmt(r.theory_lb),
                    "" if r.adversary_ub is None else r.adversary_ub,
                    _fmt(r.theory_ub),
                    r.wall_ms,
                ]
            )


def read_csv(path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ConfigError(f"bad CSV header in {path}")
    records = []
    for row in rows[1:]:
        if not row:
            continue
        records.append(
            SweepRecord(
                eps=float(row[0]),
                n0=int(row[1]),
                certified_lb=int(row[2]),
                paper_lb=int(row[3]),
                theory_lb=float(row[4]),
                adversary_ub=None if row[5] == "" else int(row[5]),
                theory_ub=float(row[6]),
                wall_ms=int(row[7]),
            )
        )
    return records


def fit_slope(records: Sequence[SweepRecord], column: str) -> float:
    """Least-squares slope of log2(column) against log2(eps).

    Rows with missing or nonpositive values are skipped; at least three
    usable rows are required.
    """
    pts = []
    for r in records:
        value = getattr(r, column)
        if value is not None and value > 0:
            pts.append((math.log2(r.eps), math.log2(value)))
    if len(pts) < 3:
        raise DomainError(f"need >= 3 positive rows in {column!r}, have {len(pts)}")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])
