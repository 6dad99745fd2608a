"""Zero location and counting via the argument principle.

Winding numbers are computed by adaptive phase tracking along contours:
every accepted segment keeps its phase increment below pi/2 and is
verified against its own midpoint, so branch aliasing is detected and
refined away.  Regions are quadrisected until each cell winds at most
once, then Newton polishes the zero.  Counting reports fit the growth
exponents the theory bounds.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (BoundaryZeroError, ClusterWarning, CompletenessError,
                     ConvergenceError, NoZeroError)
from .util import write_csv

_PHASE_CAP = 0.5 * math.pi
_MIN_PARAM = 1e-10


@dataclass(frozen=True)
class Rectangle:
    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def __post_init__(self):
        if not (self.re_lo < self.re_hi and self.im_lo < self.im_hi):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self) -> float:
        return self.re_hi - self.re_lo

    @property
    def height(self) -> float:
        return self.im_hi - self.im_lo

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_lo + self.re_hi), 0.5 * (self.im_lo + self.im_hi))

    @property
    def diag(self) -> float:
        return math.hypot(self.width, self.height)

    def corners(self) -> list[complex]:
        return [complex(self.re_lo, self.im_lo), complex(self.re_hi, self.im_lo),
                complex(self.re_hi, self.im_hi), complex(self.re_lo, self.im_hi)]

    def contains(self, s: complex, slack: float = 0.0) -> bool:
        return (self.re_lo - slack <= s.real <= self.re_hi + slack and
                self.im_lo - slack <= s.imag <= self.im_hi + slack)

    def shifted(self, dz: complex) -> "Rectangle":
        return Rectangle(self.re_lo + dz.real, self.re_hi + dz.real,
                         self.im_lo + dz.imag, self.im_hi + dz.imag)

    def split(self, fr: float = 0.5, fi: float = 0.5) -> list["Rectangle"]:
        mr = self.re_lo + fr * self.width
        mi = self.im_lo + fi * self.height
        return [Rectangle(self.re_lo, mr, self.im_lo, mi),
                Rectangle(mr, self.re_hi, self.im_lo, mi),
                Rectangle(self.re_lo, mr, mi, self.im_hi),
                Rectangle(mr, self.re_hi, mi, self.im_hi)]


class _CachedEvaluator:
    def __init__(self, ev):
        self.ev = ev
        self.cache: dict[complex, complex] = {}

    def __call__(self, s: complex) -> complex:
        s = complex(s)
        v = self.cache.get(s)
        if v is None:
            v = complex(self.ev(s))
            self.cache[s] = v
        return v

    def prefetch(self, ss) -> None:
        todo = [complex(s) for s in ss if complex(s) not in self.cache]
        if not todo:
            return
        if hasattr(self.ev, "batch"):
            vals = self.ev.batch(np.array(todo))
            for s, v in zip(todo, vals):
                self.cache[s] = complex(v)
        else:
            for s in todo:
                self.cache[s] = complex(self.ev(s))


def _segment_phase(ev: _CachedEvaluator, pa: complex, pb: complex,
                   va: complex, vb: complex, scale: float,
                   depth: int = 64) -> float:
    """Verified phase increment of Z from pa to pb.

    Accepts a segment only when both half-increments stay below pi/2 and
    their sum is consistent with the principal increment of the whole
    segment (a 2 pi mismatch is exactly a missed loop)."""
    if va == 0 or vb == 0:
        raise BoundaryZeroError(f"Z vanishes on the contour near {pa}")
    floor = max(_MIN_PARAM * scale, 64.0 * 2.3e-16 * (1.0 + abs(pa)))
    if depth <= 0 or abs(pb - pa) < floor:
        raise BoundaryZeroError(
            f"phase step cannot be refined below minimum near {pa}")
    pm = 0.5 * (pa + pb)
    if pm == pa or pm == pb:
        raise BoundaryZeroError(f"contour refinement hit float resolution at {pa}")
    vm = ev(pm)
    if vm == 0:
        raise BoundaryZeroError(f"Z vanishes on the contour at {pm}")
    whole = cmath.phase(vb / va)
    left = cmath.phase(vm / va)
    right = cmath.phase(vb / vm)
    if abs(left) < _PHASE_CAP and abs(right) < _PHASE_CAP and \
            abs(left + right - whole) < 1e-6:
        return left + right
    return (_segment_phase(ev, pa, pm, va, vm, scale, depth - 1) +
            _segment_phase(ev, pm, pb, vm, vb, scale, depth - 1))


def _path_phase(ev: _CachedEvaluator, points: list[complex], scale: float) -> float:
    ev.prefetch(points)
    values = [ev(p) for p in points]
    total = 0.0
    for k in range(len(points) - 1):
        total += _segment_phase(ev, points[k], points[k + 1],
                                values[k], values[k + 1], scale)
    return total


def winding_number(evaluator, rect: Rectangle, nodes_per_edge: int = 16,
                   boundary_step: float = 0.5) -> int:
    """Argument-principle count of zeros (with multiplicity) inside the
    rectangle, from the total phase change along its boundary.

    Initial samples are spaced at most `boundary_step` apart (and at
    least `nodes_per_edge` per edge); midpoint verification then refines
    every segment whose phase increment is in doubt.
    """
    ev = evaluator if isinstance(evaluator, _CachedEvaluator) else _CachedEvaluator(evaluator)
    corners = rect.corners() + [rect.corners()[0]]
    points: list[complex] = []
    for k in range(4):
        a, b = corners[k], corners[k + 1]
        n = max(nodes_per_edge, math.ceil(abs(b - a) / boundary_step))
        ts = np.linspace(0.0, 1.0, n, endpoint=False)
        points.extend(a + (b - a) * t for t in ts)
    points.append(points[0])
    total = _path_phase(ev, points, rect.diag)
    w = total / (2.0 * math.pi)
    if abs(w - round(w)) > 0.01:
        raise ConvergenceError(f"non-integer winding {w} on {rect}")
    return int(round(w))


def _circle_winding(ev, center: complex, radius: float, nodes: int = 24) -> int:
    ev = ev if isinstance(ev, _CachedEvaluator) else _CachedEvaluator(ev)
    points = [center + radius * cmath.exp(2j * math.pi * k / nodes)
              for k in range(nodes)]
    points.append(points[0])
    total = _path_phase(ev, points, radius)
    w = total / (2.0 * math.pi)
    if abs(w - round(w)) > 0.01:
        raise ConvergenceError(f"non-integer circle winding {w} at {center}")
    return int(round(w))


@dataclass(frozen=True)
class ZeroRecord:
    s: complex
    multiplicity: int
    residual: float
    method: str = ""
    resolved: bool = True


def _derivative(evaluator, s: complex, fd_scale: float) -> complex:
    if hasattr(evaluator, "dlog"):
        try:
            return evaluator(s) * evaluator.dlog(s)
        except ZeroDivisionError:
            pass  # landed exactly on a zero; the stencil below is fine there
    h = fd_scale * (1.0 + abs(s))
    return (evaluator(s + h) - evaluator(s - h)) / (2.0 * h)


def refine_zero(evaluator, seed: complex, r_loc: float = 0.05,
                max_iter: int = 60, step_tol: float = 5e-13,
                residual_factor: float = 1e-8,
                max_step: float = math.inf) -> ZeroRecord:
    """Newton-polish a zero from a seed and certify its multiplicity by a
    surrounding winding count.

    Steps are clamped to `max_step` so a distant seed cannot fling the
    iteration out of its basin.  The residual |Z(s)| must come out below
    `residual_factor` times the local scale of Z (median |Z| on the
    verification circle).
    """
    s = complex(seed)
    converged = False
    failure: Exception | None = None
    best_step, best_s, stale = math.inf, s, 0
    try:
        for _ in range(max_iter):
            z = complex(evaluator(s))
            dz = _derivative(evaluator, s, 1e-7)
            if dz == 0:
                break
            step = z / dz
            if abs(step) > max_step:
                step *= max_step / abs(step)
            s -= step
            if abs(step) < best_step:
                best_step, best_s, stale = abs(step), s, 0
            else:
                stale += 1
            if abs(step) <= step_tol * (1.0 + abs(s)):
                converged = True
                break
            # chattering at the evaluator noise floor: accept the best iterate
            if stale >= 4 and best_step <= 1e-8 * (1.0 + abs(s)):
                s = best_s
                converged = True
                break
    except OverflowError as exc:
        failure = ConvergenceError(f"Newton overflowed from seed {seed}")
        failure.__cause__ = exc
    except Exception as exc:
        # the iteration wandered out of the evaluator's validity region
        failure = ConvergenceError(f"Newton left the valid region from seed {seed}")
        failure.__cause__ = exc
    if not converged:
        # distinguish a bad seed from a hard iteration failure
        try:
            if _circle_winding(evaluator, complex(seed),
                               max(r_loc, 1e-7 * (1.0 + abs(seed)))) == 0:
                raise NoZeroError(f"winding 0 around seed {seed}")
        except BoundaryZeroError:
            pass
        raise failure if failure is not None else \
            ConvergenceError(f"Newton did not converge from seed {seed}")
    r_loc = max(r_loc, 1e-7 * (1.0 + abs(s)))
    nodes = [s + r_loc * cmath.exp(2j * math.pi * k / 24) for k in range(24)]
    scale = float(np.median([abs(complex(evaluator(p))) for p in nodes]))
    mult = _circle_winding(evaluator, s, r_loc)
    if mult == 0:
        raise NoZeroError(f"no zero within {r_loc} of refined seed {s}")
    residual = abs(complex(evaluator(s)))
    if residual > residual_factor * scale:
        raise ConvergenceError(
            f"residual {residual} exceeds {residual_factor} * local scale {scale}")
    method = getattr(getattr(evaluator, "method", None), "value", "")
    return ZeroRecord(s=s, multiplicity=mult, residual=residual, method=method)


def scan_region(evaluator, rect: Rectangle, depth_limit: int = 42,
                jitter_attempts: int = 3, boundary_step: float = 0.5) -> list[ZeroRecord]:
    """All zeros in the rectangle: recursive quadrisection until each
    cell winds at most once, then Newton refinement.

    The returned multiplicities sum to the whole-rectangle winding; a
    cell still winding > 1 at the depth limit is returned unresolved with
    a ClusterWarning.  A boundary grazing a zero is retried with the
    split point (or, for the outer contour, the rectangle) jittered.
    Parent/child winding sums are cross-checked, re-sampled more densely
    on mismatch, and a surviving mismatch is a completeness error.
    """
    ev = _CachedEvaluator(evaluator)
    split_fracs = (0.5, 0.5231, 0.4593, 0.5417, 0.4381, 0.5639)

    def split_consistently(cell: Rectangle, w: int, frac: float):
        """Quadrisect at the given fraction and verify winding
        additivity, tightening the boundary sampling (and re-verifying
        the parent) on mismatch."""
        children = cell.split(frac, frac)
        step = boundary_step
        for _ in range(3):
            ws = [winding_number(ev, child, boundary_step=step) for child in children]
            if sum(ws) == w:
                return children, ws, w
            w_again = winding_number(ev, cell, boundary_step=step / 2.0)
            if sum(ws) == w_again:
                return children, ws, w_again
            step /= 2.0
        raise CompletenessError(
            f"children of {cell} wind {sum(ws)}, parent winds {w}")

    def handle(cell: Rectangle, w: int, depth: int):
        """Returns (records, verified winding) for the cell.  A
        BoundaryZeroError from a descendant bubbles up to the level whose
        split line grazed the zero, which then re-splits elsewhere."""
        if w == 0:
            return [], 0
        if w == 1:
            try:
                rec = refine_zero(ev, cell.center, max_step=cell.diag)
            except (ConvergenceError, NoZeroError, BoundaryZeroError):
                rec = None
            if rec is not None and cell.contains(rec.s, slack=1e-12 * cell.diag):
                return [rec], w
            # Newton escaped the cell or stalled: keep subdividing
        if depth >= depth_limit or cell.diag < 1e-8 * (1.0 + abs(cell.center)):
            warnings.warn(f"cell {cell} unresolved with winding {w}", ClusterWarning)
            rec = ZeroRecord(s=cell.center, multiplicity=w,
                             residual=abs(complex(ev(cell.center))),
                             method=getattr(getattr(evaluator, "method", None), "value", ""),
                             resolved=False)
            return [rec], w
        last: BaseException | None = None
        for frac in split_fracs:
            try:
                children, ws, w2 = split_consistently(cell, w, frac)
                out = []
                for child, cw in zip(children, ws):
                    sub, _ = handle(child, cw, depth + 1)
                    out.extend(sub)
                return out, w2
            except BoundaryZeroError as exc:
                last = exc
                continue
        raise last if last is not None else AssertionError("unreachable")

    records: list[ZeroRecord] = []
    w_total = 0
    outer = rect
    for attempt in range(jitter_attempts + 1):
        try:
            w_total = winding_number(ev, outer, boundary_step=boundary_step)
            records, w_total = handle(outer, w_total, 0)
            break
        except BoundaryZeroError:
            if attempt == jitter_attempts:
                raise
            outer = rect.shifted(complex(1e-6 * rect.width * (attempt + 1),
                                         1.3e-6 * rect.height * (attempt + 1)))
    if sum(r.multiplicity for r in records) != w_total:
        raise CompletenessError(
            f"found multiplicities sum {sum(r.multiplicity for r in records)}, "
            f"rectangle winds {w_total}")
    records.sort(key=lambda r: (r.s.imag, r.s.real))
    # re-verify multiplicities of tightly-paired zeros on circles that
    # exclude every other record (half the nearest-record distance)
    for i, rec in enumerate(records):
        if not rec.resolved or len(records) < 2:
            continue
        nearest = min(abs(rec.s - q.s) for j, q in enumerate(records) if j != i)
        if nearest < 0.1:
            r = max(min(0.05, 0.45 * nearest), 1e-7 * (1.0 + abs(rec.s)))
            mult = _circle_winding(ev, rec.s, r)
            if mult != rec.multiplicity:
                records[i] = ZeroRecord(s=rec.s, multiplicity=mult,
                                        residual=rec.residual, method=rec.method)
    return records


def export_zeros(path: str, records) -> None:
    write_csv(path, "re_s,im_s,multiplicity,residual",
              [(r.s.real, r.s.imag, r.multiplicity, r.residual) for r in records])


def leading_real_zero(evaluator, bracket: tuple[float, float]) -> ZeroRecord:
    """The zero of largest real part on the real axis within the bracket
    (Z is real there for real parameters): locate the rightmost sign
    change of Re Z, bisect, then Newton-refine."""
    lo, hi = bracket
    n = 64
    xs = np.linspace(lo, hi, n)
    vals = [complex(evaluator(complex(x))).real for x in xs]
    idx = None
    for k in range(n - 2, -1, -1):
        if vals[k] == 0.0:
            return refine_zero(evaluator, complex(xs[k]), max_step=(hi - lo) / n)
        if vals[k] * vals[k + 1] < 0.0:
            idx = k
            break
    if idx is None:
        raise NoZeroError(f"no sign change of Z on [{lo}, {hi}]")
    a, b = xs[idx], xs[idx + 1]
    fa = vals[idx]
    for _ in range(60):
        m = 0.5 * (a + b)
        fm = complex(evaluator(complex(m))).real
        if fa * fm <= 0.0:
            b = m
        else:
            a, fa = m, fm
    return refine_zero(evaluator, complex(0.5 * (a + b)), max_step=(hi - lo) / n)


# ---------------------------------------------------------------------------
# counting reports

@dataclass(frozen=True)
class StripFamily:
    """{ Re s > -c0, |Im s| <= r }"""
    c0: float
    name: str = field(default="strip", init=False)

    def member(self, s: complex, r: float) -> bool:
        return s.real > -self.c0 and abs(s.imag) <= r

    def params(self) -> dict:
        return {"c0": self.c0}


@dataclass(frozen=True)
class PolyFamily:
    """{ |Re s| <= |Im s|^alpha, |s| >= 1, |s| <= r }"""
    alpha: float
    name: str = field(default="poly", init=False)

    def member(self, s: complex, r: float) -> bool:
        if abs(s) < 1.0 or abs(s) > r:
            return False
        return abs(s.real) <= abs(s.imag) ** self.alpha

    def params(self) -> dict:
        return {"alpha": self.alpha}


@dataclass(frozen=True)
class LogFamily:
    """Logarithmic neighbourhood in the rotated variable lambda =
    i (delta - s): { Im lambda < rho log |lambda|, |lambda| <= r }."""
    rho: float
    delta: float
    name: str = field(default="log", init=False)

    def member(self, s: complex, r: float) -> bool:
        lam = 1j * (self.delta - s)
        if abs(lam) > r or abs(lam) <= 1.0:
            return False
        return lam.imag < self.rho * math.log(abs(lam))

    def params(self) -> dict:
        return {"rho": self.rho, "delta": self.delta}


@dataclass(frozen=True)
class CountingReport:
    family: str
    params: dict
    rs: tuple[float, ...]
    counts: tuple[int, ...]
    exponent: float
    r2: float

    def to_csv(self, path: str) -> None:
        write_csv(path, "r,count", zip(self.rs, self.counts))

    def summary(self) -> dict:
        return {"family": self.family, "params": self.params,
                "exponent": self.exponent, "r2": self.r2}


def counting_report(zeros, family, rs) -> CountingReport:
    """Counts (with multiplicity) per radius plus a log-log fitted
    exponent over the radii with nonzero count."""
    rs = sorted(float(r) for r in rs)
    counts = []
    for r in rs:
        counts.append(sum(z.multiplicity for z in zeros if family.member(z.s, r)))
    xs = [math.log(r) for r, c in zip(rs, counts) if c > 0]
    ys = [math.log(c) for c in counts if c > 0]
    if len(xs) >= 2:
        slope, intercept = np.polyfit(xs, ys, 1)
        resid = np.array(ys) - (slope * np.array(xs) + intercept)
        tot = float(np.sum((np.array(ys) - np.mean(ys)) ** 2))
        r2 = 1.0 - float(np.sum(resid ** 2)) / tot if tot > 0 else 1.0
    else:
        slope, r2 = math.nan, math.nan
    return CountingReport(family=family.name, params=family.params(),
                          rs=tuple(rs), counts=tuple(counts),
                          exponent=float(slope), r2=float(r2))


# ---------------------------------------------------------------------------
# growth probe

@dataclass(frozen=True)
class GrowthFit:
    exponent: float
    r2: float
    rs: tuple[float, ...]
    max_log_abs: tuple[float, ...]
    skipped: tuple[float, ...]


def growth_exponent_probe(evaluator, c0: float, rs, re_samples: int = 33) -> GrowthFit:
    """Fit of log max log|Z| against log r, sampling |Z| on the segments
    { |Re s| <= c0, Im s = r }.

    Radii where max log|Z| <= 0 carry no exponent information and are
    skipped (reported in `skipped`).
    """
    res = np.linspace(-c0, c0, re_samples)
    rows, skipped = [], []
    for r in sorted(float(r) for r in rs):
        ss = res + 1j * r
        if hasattr(evaluator, "batch"):
            vals = np.abs(evaluator.batch(ss))
        else:
            vals = np.array([abs(complex(evaluator(s))) for s in ss])
        m = float(np.max(np.log(np.maximum(vals, 1e-300))))
        if m <= 0.0:
            skipped.append(r)
        else:
            rows.append((r, m))
    if len(rows) < 2:
        raise ConvergenceError("growth probe has fewer than two usable radii")
    xs = np.log([r for r, _ in rows])
    ys = np.log([m for _, m in rows])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / tot if tot > 0 else 1.0
    return GrowthFit(exponent=float(slope), r2=float(r2),
                     rs=tuple(r for r, _ in rows),
                     max_log_abs=tuple(m for _, m in rows),
                     skipped=tuple(skipped))
