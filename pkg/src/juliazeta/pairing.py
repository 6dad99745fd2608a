"""Distribution-identity test: the zero side against the periodic-orbit
side, paired with compactly supported test functions.

With w(s) = Z(i s + delta) and lambda_j = i (delta - mu_j) over the zeros
mu_j of Z, the two distributions

    u1 = sum_j e^{i t lambda_j}
    u2 = t e^{-delta t} sum_n (1/n) sum_{f^n(z)=z} delta_0(t - L_n) / den

agree on the positive axis.  Pairing both with a bump phi_hat supported
in [d - gamma, d + gamma] in R_+ gives, per window,

    orbit side:  sum_n (1/n) sum_z   L_n e^{-delta L_n} phi_hat(L_n) / den
    zero side:   sum_j  I(lambda_j),   I(lam) = int phi_hat(t) e^{i lam t} dt

computable up to a zero-side truncation tail that decays like
e^{-(d - gamma) Im lambda} in the depth of the discarded zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import OrbitCatalog
from .errors import CoverageError
from .util import atomic_write_text, write_csv
from .zeros import Rectangle, scan_region
from .zeta import Mode, _cycle_arrays


@dataclass(frozen=True)
class TestFunction:
    """Bump profile on the hat side: exp(-1/(1-u^2)) with u=(t-d)/gamma,
    supported in [d-gamma, d+gamma], which must sit inside R_+."""

    __test__ = False  # not a pytest class, despite the name

    d: float
    gamma: float
    quad_nodes: int = 64

    def __post_init__(self):
        if not (self.d > 0.0 and 0.0 < self.gamma < self.d):
            raise ValueError("need 0 < gamma < d so the support stays positive")
        if self.quad_nodes < 8:
            raise ValueError("too few quadrature nodes")

    def hat(self, t):
        """phi_hat(t); vectorized, zero outside the support."""
        t = np.asarray(t, dtype=float)
        u = (t - self.d) / self.gamma
        inside = np.abs(u) < 1.0
        out = np.zeros_like(t)
        usq = np.where(inside, u * u, 0.0)
        out[inside] = np.exp(-1.0 / (1.0 - usq[inside]))
        return out if out.ndim else float(out)

    def hat_mass(self) -> float:
        """L1 norm of the hat profile (the support integral)."""
        x, w = np.polynomial.legendre.leggauss(256)
        t = self.d + self.gamma * x
        return float(np.sum(w * self.hat(t)) * self.gamma)

    def transform(self, lam: complex, rtol: float = 1e-12) -> complex:
        """I(lam) = int phi_hat(t) e^{i lam t} dt, by Gauss-Legendre with
        node doubling until two refinements agree."""
        lam = complex(lam)
        prev = None
        n = self.quad_nodes
        while n <= 4096:
            x, w = np.polynomial.legendre.leggauss(n)
            t = self.d + self.gamma * x
            vals = self.hat(t) * np.exp(1j * lam * t)
            cur = complex(np.sum(w * vals) * self.gamma)
            if prev is not None and abs(cur - prev) <= rtol * max(1.0, abs(cur)):
                return cur
            prev = cur
            n *= 2
        return cur

    def transform_bound(self, im_lam: float) -> float:
        """|I| <= ||phi_hat||_1 e^{-(d-gamma) Im lam} for Im lam >= 0."""
        return self.hat_mass() * math.exp(-(self.d - self.gamma) * im_lam)


def orbit_side_pairing(catalog: OrbitCatalog, delta: float, phi: TestFunction,
                       mode: Mode | None = None) -> float:
    """sum_n (1/n) sum_{f^n(z)=z} L_n e^{-delta L_n} phi_hat(L_n) / den.

    All terms are nonnegative.  The catalog must exhaust the support:
    orbits of period beyond n_max have lengths > n log A past d + gamma.
    """
    if mode is None:
        mode = catalog.mode
    if (catalog.n_max + 1) * catalog.log_a <= phi.d + phi.gamma:
        raise CoverageError(
            f"catalog depth {catalog.n_max} does not exhaust the support "
            f"(need (n_max+1) log A > {phi.d + phi.gamma})")
    lengths, dens, weights = _cycle_arrays(catalog, catalog.n_max, mode)
    return float(np.sum(weights * lengths * np.exp(-delta * lengths)
                        * phi.hat(lengths) / dens))


def zero_side_pairing(zeros, delta: float, phi: TestFunction,
                      region: Rectangle, density_per_unit: float) -> tuple[float, float]:
    """(value, tail): sum of I(lambda_j) over the region's zeros, plus an
    estimate for what the region misses.

    The tail sums the strip-density estimate times the transform decay
    bound over excluded heights (zeros left of the region) and adds the
    lateral leakage at the region's top |Im mu| edge.  An estimate using
    the fitted strip density, not a certificate.
    """
    total = 0.0 + 0.0j
    for rec in zeros:
        lam = 1j * (delta - rec.s)
        total += rec.multiplicity * phi.transform(lam)
    y_deep = delta - region.re_lo     # smallest excluded Im lambda (left edge)
    tail = 0.0
    step = 1.0
    for k in range(200):
        inc = density_per_unit * phi.transform_bound(y_deep + k * step) * step
        tail += inc
        if inc < 1e-16 * max(tail, 1.0):
            break
    x_edge = max(abs(region.im_lo), abs(region.im_hi))
    y_min = max(delta - region.re_hi, 0.0)
    lateral = abs(phi.transform(complex(x_edge, y_min)))
    tail += 2.0 * density_per_unit * (y_deep - y_min + 1.0) * lateral
    return float(total.real), float(tail)


@dataclass(frozen=True)
class PairingResult:
    orbit_side: float
    zero_side: float
    zero_tail_estimate: float
    residual: float
    d: float
    gamma: float
    passed: bool

    def to_json(self, path: str) -> None:
        import json
        payload = {"orbit_side": self.orbit_side, "zero_side": self.zero_side,
                   "tail": self.zero_tail_estimate, "residual": self.residual,
                   "d": self.d, "gamma": self.gamma}
        atomic_write_text(path, json.dumps(payload, indent=1) + "\n")


def _local_strip_density(zeros, delta: float, region: Rectangle) -> float:
    """Zeros per unit height of Im lambda near the deep (left) edge of the
    region; extrapolation density for the tail estimate."""
    ys = sorted(delta - rec.s.real for rec in zeros for _ in range(rec.multiplicity))
    if not ys:
        return 1.0
    y_deep = delta - region.re_lo
    band = [y for y in ys if y >= y_deep - 1.5]
    return max(len(band) / 1.5, len(ys) / max(y_deep - ys[0], 1.0))


def identity_residual(catalog: OrbitCatalog, evaluator, delta: float,
                      phi: TestFunction, region: Rectangle,
                      zeros=None, density_per_unit: float | None = None,
                      mode: Mode | None = None,
                      rounding_budget_factor: float = 1e-9) -> PairingResult:
    """Assemble both pairings and compare.

    Passes when the residual is within the zero-side tail estimate plus
    an orbit-side rounding budget.  `zeros` may carry a pre-scanned,
    winding-validated list for the region; otherwise the region is
    scanned here.
    """
    orbit = orbit_side_pairing(catalog, delta, phi, mode=mode)
    if zeros is None:
        zeros = scan_region(evaluator, region)
    if density_per_unit is None:
        density_per_unit = _local_strip_density(zeros, delta, region)
    zside, tail = zero_side_pairing(zeros, delta, phi, region, density_per_unit)
    residual = abs(orbit - zside)
    budget = rounding_budget_factor * max(1.0, abs(orbit))
    return PairingResult(orbit_side=orbit, zero_side=zside,
                         zero_tail_estimate=tail, residual=residual,
                         d=phi.d, gamma=phi.gamma,
                         passed=residual <= tail + budget)


# ---------------------------------------------------------------------------
# length-spectrum statistics

@dataclass(frozen=True)
class LengthHistogram:
    edges: tuple[float, ...]
    weights: tuple[float, ...]
    mean: float
    variance: float
    n: int

    def to_csv(self, path: str) -> None:
        rows = [(self.edges[i], self.edges[i + 1], self.weights[i])
                for i in range(len(self.weights))]
        write_csv(path, "bin_lo,bin_hi,weight", rows)


def orbit_length_histogram(catalog: OrbitCatalog, n: int, bins=24) -> LengthHistogram:
    """Distribution of L_n(z)/n over the 2^n fixed points of f^n.

    The sample mean and variance are reported descriptively; the binomial
    length model predicts concentration at (log A + log B)/2 but that is
    not asserted here.
    """
    if n > catalog.n_max:
        raise ValueError(f"n = {n} exceeds catalog depth {catalog.n_max}")
    values, weights = [], []
    for length, _lam, p in catalog.fixed_point_data(n):
        values.append(length / n)
        weights.append(p)
    values = np.array(values)
    weights = np.array(weights, dtype=float)
    mean = float(np.average(values, weights=weights))
    var = float(np.average((values - mean) ** 2, weights=weights))
    hist, edges = np.histogram(values, bins=bins, weights=weights)
    return LengthHistogram(edges=tuple(float(e) for e in edges),
                           weights=tuple(float(w) for w in hist),
                           mean=mean, variance=var, n=n)
