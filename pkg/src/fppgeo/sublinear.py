"""Sublinear gauge functions and their calculus.

A gauge kappa maps [0, inf) into [1, inf), is monotone increasing and
concave, and satisfies kappa(t)/t -> 0. Supported families: constants,
shifted logarithms a*log(t+e)+b, powers a*(t+1)^s with 0 < s < 1, and
piecewise-linear tables. Sublinearity is certified numerically at
construction: kappa(T)/T < 0.01 at T = 1e6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, TYPE_CHECKING

from .errors import ConfigError, DiagnosticError, DomainError, PreconditionError

if TYPE_CHECKING:  # pragma: no cover
    from .graphs import Graph
    from .percolation import WeightAssignment

_SUBLINEARITY_T = 1.0e6
_SUBLINEARITY_RATIO = 0.01


@dataclass(frozen=True)
class SublinearFn:
    """Evaluable sublinear gauge. Immutable and freely shareable."""

    kind: str  # "const" | "log" | "pow" | "table"
    params: tuple
    source_path: Optional[str] = None  # set for tables loaded from files

    def __post_init__(self):
        if self.kind == "const":
            (c,) = self.params
            if c < 1:
                raise ConfigError("constant gauge must be >= 1")
        elif self.kind == "log":
            a, b = self.params
            if a <= 0:
                raise ConfigError("log gauge needs a > 0")
            if a + b < 1:
                raise ConfigError("log gauge must be >= 1 at t = 0 (a + b >= 1)")
        elif self.kind == "pow":
            a, s = self.params
            if not (0 < s < 1):
                raise ConfigError("power gauge exponent must satisfy 0 < s < 1")
            if a < 1:
                raise ConfigError("power gauge must be >= 1 at t = 0 (a >= 1)")
        elif self.kind == "table":
            pts = self.params
            if len(pts) < 2:
                raise DomainError("table gauge needs at least 2 samples")
            ts = [t for t, _ in pts]
            vs = [v for _, v in pts]
            if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
                raise ConfigError("table abscissae must be strictly increasing")
            if any(v < 1 for v in vs):
                raise ConfigError("table values must be >= 1")
            if any(v2 < v1 for v1, v2 in zip(vs, vs[1:])):
                raise ConfigError("table values must be nondecreasing")
            for (t0, v0), (t1, v1), (t2, v2) in zip(pts, pts[1:], pts[2:]):
                # concavity: middle point on or above the chord
                if (v1 - v0) * (t2 - t1) < (v2 - v1) * (t1 - t0):
                    raise ConfigError("table is not concave")
        else:
            raise ConfigError(f"unknown gauge kind {self.kind!r}")
        ratio = self(_SUBLINEARITY_T) / _SUBLINEARITY_T
        if ratio >= _SUBLINEARITY_RATIO:
            raise ConfigError(
                f"gauge is not numerically sublinear: kappa({_SUBLINEARITY_T:g}) / "
                f"{_SUBLINEARITY_T:g} = {ratio:g} >= {_SUBLINEARITY_RATIO}"
            )

    def __call__(self, t: float) -> float:
        if t < 0:
            raise DomainError(f"gauge argument must be >= 0, got {t}")
        if self.kind == "const":
            return self.params[0]
        if self.kind == "log":
            a, b = self.params
            return a * math.log(t + math.e) + b
        if self.kind == "pow":
            a, s = self.params
            return a * (t + 1.0) ** s
        pts = self.params
        # flat outside the sampled range
        if t <= pts[0][0]:
            return pts[0][1]
        if t >= pts[-1][0]:
            return pts[-1][1]
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return pts[-1][1]  # pragma: no cover

    def spec_string(self) -> str:
        if self.kind == "const":
            return f"const:{self.params[0]:g}"
        if self.kind == "log":
            return f"log:{self.params[0]:g},{self.params[1]:g}"
        if self.kind == "pow":
            return f"pow:{self.params[0]:g},{self.params[1]:g}"
        return f"table:{self.source_path or '-'}"

    def __repr__(self) -> str:
        return f"SublinearFn({self.spec_string()})"


def constant(c: float = 1.0) -> SublinearFn:
    return SublinearFn("const", (float(c),))


def log_gauge(a: float = 1.0, b: float = 0.0) -> SublinearFn:
    return SublinearFn("log", (float(a), float(b)))


def power_gauge(a: float = 1.0, s: float = 0.5) -> SublinearFn:
    return SublinearFn("pow", (float(a), float(s)))


def table_gauge(points: Sequence[tuple[float, float]], source_path: str | None = None) -> SublinearFn:
    return SublinearFn("table", tuple((float(t), float(v)) for t, v in points), source_path)


DEFAULT_KAPPA_FAMILY: tuple[SublinearFn, ...] = (
    constant(1.0),
    log_gauge(1.0, 0.0),
    power_gauge(1.0, 0.5),
)


def parse_kappa(text: str) -> SublinearFn:
    """Parse the gauge grammar: const:c | log:a,b | pow:a,s | table:path."""
    head, _, tail = text.partition(":")
    try:
        if head == "const":
            return constant(float(tail))
        if head == "log":
            a, b = (float(x) for x in tail.split(","))
            return log_gauge(a, b)
        if head == "pow":
            a, s = (float(x) for x in tail.split(","))
            return power_gauge(a, s)
        if head == "table":
            points = []
            with open(tail, "r", encoding="ascii") as fh:
                for ln in fh:
                    if ln.strip():
                        t, v = ln.split()
                        points.append((float(t), float(v)))
            return table_gauge(points, source_path=tail)
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad gauge spec {text!r}: {exc}") from exc
    raise ConfigError(f"unknown gauge kind {head!r}")


# ---------------------------------------------------------------------------
# Concave regularization

def regularize_concave(
    samples: Sequence[tuple[float, float]],
) -> tuple[SublinearFn, float]:
    """Least concave nondecreasing majorant of a sample table.

    Returns the regularized gauge and the realized multiplicative gap
    max over samples of majorant/value. The majorant dominates the input
    pointwise and is concave and monotone by construction.
    """
    pts = sorted((float(t), float(v)) for t, v in samples)
    if len(pts) < 2:
        raise DomainError("need at least 2 samples")
    if any(t1 >= t2 for (t1, _), (t2, _) in zip(pts, pts[1:])):
        raise DomainError("sample abscissae must be strictly increasing")
    if any(v < 1 for _, v in pts):
        raise DomainError("sample values must be >= 1")
    # upper hull by the monotone chain: drop middle points below a chord
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (t0, v0), (t1, v1) = hull[-2], hull[-1]
            if (v1 - v0) * (p[0] - t1) <= (p[1] - v1) * (t1 - t0):
                hull.pop()
            else:
                break
        hull.append(p)
    # cap any decreasing tail at the running peak so the result is monotone
    capped: list[tuple[float, float]] = []
    peak = -math.inf
    for t, v in hull:
        peak = max(peak, v)
        capped.append((t, peak))
    fn = table_gauge(capped)
    gap = max(fn(t) / v for t, v in pts)
    return fn, gap


# ---------------------------------------------------------------------------
# Scale comparison helpers

def small_compared(D: float, r: float, kappa: SublinearFn) -> bool:
    """Whether D is small compared to radius r: D <= r / (2 kappa(r))."""
    if r <= 0:
        raise PreconditionError(f"radius must be positive, got {r}")
    return D <= r / (2.0 * kappa(r))


def comparison_constants(
    D: float,
    kappa: SublinearFn,
    grid_max: float = 1.0e6,
    grid_points: int = 10_000,
) -> tuple[float, float, float]:
    """Constants (R, D1, D2) comparing gauge values at nearby points.

    R is the smallest value with kappa(t) <= t/(2 D) + R over a log-spaced
    grid on [0, grid_max] (an upper-bound approximation of the true
    supremum), D2 = 3 + 2 R D and D1 = 1/D2. Whenever
    d(x, y) <= D * max(kappa(|x|), kappa(|y|)), the gauge values satisfy
    D1 * kappa(|x|) <= kappa(|y|) <= D2 * kappa(|x|).
    """
    if D <= 0:
        raise DomainError("D must be positive")
    step = math.log(grid_max) / (grid_points - 1)
    grid = [0.0] + [math.exp(i * step) for i in range(grid_points)]
    best_t, best = 0.0, -math.inf
    for t in grid:
        excess = kappa(t) - t / (2.0 * D)
        if excess > best:
            best, best_t = excess, t
    if best_t >= grid_max:
        raise DiagnosticError(
            f"kappa(t) - t/(2D) still rising at grid end t = {grid_max:g}; "
            "gauge is not sublinear enough for this grid"
        )
    R = max(best, 0.0)
    D2 = 3.0 + 2.0 * R * D
    return R, 1.0 / D2, D2


def in_neighborhood(
    g: "Graph",
    x: int,
    Z: Sequence[int],
    n: float,
    kappa: SublinearFn,
    omega: "WeightAssignment | None" = None,
) -> bool:
    """Whether x lies in the (kappa, n)-neighborhood of Z.

    True iff dist(x, Z) <= n * kappa(|x|), with both the distance and the
    norm |x| = dist(basepoint, x) measured in the selected metric (base
    when omega is None, weighted otherwise).
    """
    from .geodesy import distance_map

    if not Z:
        raise PreconditionError("Z must be nonempty")
    to_z = distance_map(g, list(Z), omega)[x]
    norm = distance_map(g, [g.basepoint], omega)[x]
    return to_z <= n * kappa(norm)
