"""Quadratic family f(z) = z^2 + c: inverse branches, certified expansion
bounds, and periodic-orbit catalogs with multipliers.

Periodic points are located as fixed points of composed inverse branches
(a guaranteed contraction once the expansion certificate holds), then
polished by Newton on f^n(z) - z.  The catalog stores one entry per prime
orbit; fixed points of every iterate are reconstructed from prime orbits.
"""

from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass, field

from .errors import (BranchPointError, ConvergenceError, DegeneracyError,
                     DomainError, HyperbolicityError)
from .intervals import Disk, Interval
from .util import parallel_map
from .words import Word, aperiodic_necklace_count, enumerate_words

N_MAX_CAP = 20
CATALOG_VERSION = 1
_MAX_CONTRACTION_APPLICATIONS = 400
_NEWTON_STEPS = 3


class Mode(enum.Enum):
    """Denominator convention for cycle weights (see the zeta module)."""

    REAL_1D = "real1d"
    COMPLEX_2D = "complex2d"


@dataclass(frozen=True)
class MapSpec:
    """Parameters of one quadratic map z -> z^2 + c.

    Real1D mode is the real Cantor regime (c real, c <= -2; the boundary
    point c = -2 is admitted but always fails certification).  Complex2D
    admits any complex c and lets the certificate decide.
    """

    c: complex
    mode: Mode = Mode.REAL_1D
    tol_point: float = 1e-12
    n_cert: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if self.tol_point <= 0.0:
            raise ValueError("tol_point must be positive")
        if not (1 <= self.n_cert <= 14):
            raise ValueError("n_cert must lie in 1..14")
        if self.mode is Mode.REAL_1D:
            if self.c.imag != 0.0:
                raise ValueError("Real1D mode requires a real parameter c")
            if self.c.real > -2.0:
                raise ValueError("Real1D mode requires c <= -2 (Cantor regime)")

    @property
    def trap_radius(self) -> float:
        """Radius of the closed trapping ball: the escape radius
        (1 + sqrt(1 + 4|c|)) / 2; for real c < -2 this is the largest
        fixed point beta."""
        return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * abs(self.c)))

    def trap_interval(self) -> Interval:
        r = self.trap_radius
        r = math.nextafter(r, math.inf)
        return Interval(-r, r)

    def trap_disk(self) -> Disk:
        r = self.trap_radius
        return Disk(0.0 + 0.0j, math.nextafter(r, math.inf))


@dataclass(frozen=True)
class ExpansionBounds:
    """Certified a <= min_J |f'| and b >= max_J |f'|."""

    a: float
    b: float
    n_cert: int


def inverse_branch(spec: MapSpec, branch: int, z: complex) -> complex:
    """One inverse branch of f: w with w^2 + c = z.

    Branch 0 is the principal square root of z - c (Re w > 0, or Re w = 0
    with Im w >= 0); branch 1 is its negative.
    """
    if branch not in (0, 1):
        raise ValueError("branch must be 0 or 1")
    z = complex(z)
    if z == spec.c:
        raise BranchPointError(f"inverse branch evaluated at the branch point z = c = {spec.c}")
    # generous overflow guard: far out in the escaping region the branch
    # is useless and |z - c| risks overflow downstream
    if abs(z) > 1e6 * max(1.0, spec.trap_radius):
        raise DomainError(f"|z| = {abs(z)} lies far beyond the escape radius "
                          f"{spec.trap_radius}")
    w = cmath.sqrt(z - spec.c)
    return w if branch == 0 else -w


def _branch_interval(spec: MapSpec, branch: int, iv: Interval) -> Interval:
    out = iv.shift(-spec.c.real).sqrt()
    return out if branch == 0 else out.neg()


def _branch_disk(spec: MapSpec, branch: int, disk: Disk) -> Disk:
    return disk.sqrt_shift(spec.c, branch)


def expansion_bounds(spec: MapSpec) -> ExpansionBounds:
    """Certify expansion by backward-iterating the trap n_cert times.

    The level-n_cert backward images enclose J, so 2 * min |z| over them
    bounds min_J |f'| from below (and symmetrically for the max).  Raises
    HyperbolicityError when the certified lower bound is not > 1.
    """
    if spec.mode is Mode.REAL_1D:
        elements = [spec.trap_interval()]
        try:
            for _ in range(spec.n_cert):
                elements = [_branch_interval(spec, b, iv)
                            for iv in elements for b in (0, 1)]
        except ValueError as exc:
            raise HyperbolicityError(f"backward interval iteration failed: {exc}") from exc
        lo = min(iv.abs_bounds()[0] for iv in elements)
        hi = max(iv.abs_bounds()[1] for iv in elements)
    else:
        elements = [spec.trap_disk()]
        try:
            for _ in range(spec.n_cert):
                elements = [_branch_disk(spec, b, d)
                            for d in elements for b in (0, 1)]
        except BranchPointError as exc:
            raise HyperbolicityError(
                f"certificate failed: {exc} (parameter outside the Cantor regime?)") from exc
        lo = min(max(abs(d.center) - d.radius, 0.0) for d in elements)
        hi = max(abs(d.center) + d.radius for d in elements)
    a, b = 2.0 * lo, 2.0 * hi
    if not a > 1.0:
        raise HyperbolicityError(
            f"expansion certificate failed at depth {spec.n_cert}: "
            f"certified min |f'| = {a} <= 1")
    return ExpansionBounds(a=a, b=b, n_cert=spec.n_cert)


_CERT_CACHE: dict[MapSpec, ExpansionBounds] = {}


def certified_bounds(spec: MapSpec) -> ExpansionBounds:
    """Memoized expansion certificate for a spec."""
    bounds = _CERT_CACHE.get(spec)
    if bounds is None:
        bounds = expansion_bounds(spec)
        _CERT_CACHE[spec] = bounds
    return bounds


@dataclass(frozen=True)
class PeriodicOrbitPoint:
    """One prime orbit: canonical word, the corresponding fixed point of
    the composed inverse branches, and the cycle multiplier."""

    word: Word
    z: complex
    multiplier: complex
    length: float          # log |multiplier|
    prime: bool
    residual: float = 0.0
    orbit: tuple = ()      # all period points, orbit[k] located from word rotated by k

    @property
    def n(self) -> int:
        return len(self.word)


def _locate_real(spec: MapSpec, letters: str) -> tuple[float, float, float]:
    """Real-axis contraction + Newton polish.  Returns (z, multiplier,
    residual) where residual estimates |z - z*| via the Newton step."""
    c = spec.c.real
    signs = [1.0 if ch == "0" else -1.0 for ch in letters]
    rev = signs[::-1]
    n = len(signs)
    z = 0.0
    prev = math.inf
    for _ in range(_MAX_CONTRACTION_APPLICATIONS):
        w = z
        for s in rev:
            w = s * math.sqrt(w - c)
        step = abs(w - z)
        z = w
        if step <= 1e-14 * (1.0 + abs(z)) or step >= prev and step < 1e-10:
            break
        prev = step
    else:
        raise ConvergenceError(f"contraction failed for word {letters!r} (c = {c})")
    # Newton polish on f^n(z) - z; derivative is the running multiplier - 1
    residual = math.inf
    for _ in range(_NEWTON_STEPS):
        x, lam = z, 1.0
        for _ in range(n):
            lam *= 2.0 * x
            x = x * x + c
        fval = x - z
        dval = lam - 1.0
        if dval == 0.0:
            break
        step = fval / dval
        residual = abs(step)
        z -= step
        if residual <= 1e-16 * (1.0 + abs(z)):
            break
    x, lam = z, 1.0
    for _ in range(n):
        lam *= 2.0 * x
        x = x * x + c
    residual = abs(x - z) / max(1.0, abs(lam - 1.0))
    return z, lam, residual


def _locate_complex(spec: MapSpec, letters: str) -> tuple[complex, complex, float]:
    c = spec.c
    signs = [1.0 if ch == "0" else -1.0 for ch in letters]
    rev = signs[::-1]
    n = len(signs)
    z = 0.0j
    prev = math.inf
    for _ in range(_MAX_CONTRACTION_APPLICATIONS):
        w = z
        for s in rev:
            w = s * cmath.sqrt(w - c)
        step = abs(w - z)
        z = w
        if step <= 1e-14 * (1.0 + abs(z)) or step >= prev and step < 1e-10:
            break
        prev = step
    else:
        raise ConvergenceError(f"contraction failed for word {letters!r} (c = {c})")
    for _ in range(_NEWTON_STEPS):
        x, lam = z, 1.0 + 0.0j
        for _ in range(n):
            lam *= 2.0 * x
            x = x * x + c
        dval = lam - 1.0
        if dval == 0.0:
            break
        step = (x - z) / dval
        z -= step
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    x, lam = z, 1.0 + 0.0j
    for _ in range(n):
        lam *= 2.0 * x
        x = x * x + c
    residual = abs(x - z) / max(1.0, abs(lam - 1.0))
    return z, lam, residual


def locate_periodic_point(spec: MapSpec, word: Word | str) -> PeriodicOrbitPoint:
    """Fixed point of g_{w1} o ... o g_{wn} for the given itinerary.

    The composed inverse branch is a uniform contraction once the spec is
    certified, so the iteration converges from the trap center.  Every
    orbit point is located from its own rotated word, and the multiplier
    is the chain product of f' over those located points: a forward orbit
    iterated from one point loses ~|Lambda| * eps of accuracy, while the
    located points keep the product exact to ~n ulps and identical across
    rotations.
    """
    if isinstance(word, str):
        word = Word(word)
    bounds = certified_bounds(spec)
    n = len(word)
    if spec.mode is Mode.REAL_1D:
        z, _lam, residual = _locate_real(spec, word.letters)
        orbit = [z] + [_locate_real(spec, word.rotated(k).letters)[0]
                       for k in range(1, n)]
        lam = 1.0
        for x in orbit:
            lam *= 2.0 * x
        z, lam = complex(z), complex(lam)
        orbit = tuple(complex(x) for x in orbit)
    else:
        z, _lam, residual = _locate_complex(spec, word.letters)
        orbit = [z] + [_locate_complex(spec, word.rotated(k).letters)[0]
                       for k in range(1, n)]
        lam = 1.0 + 0.0j
        for x in orbit:
            lam *= 2.0 * x
        orbit = tuple(orbit)
    if residual > spec.tol_point:
        raise ConvergenceError(
            f"periodic point for word {word} has residual {residual} > {spec.tol_point}")
    if not abs(lam) > 1.0:
        raise ConvergenceError(
            f"located point for word {word} is not repelling (|multiplier| = {abs(lam)})")
    length = math.log(abs(lam))
    if not (n * math.log(bounds.a) - 1e-9 <= length <= n * math.log(bounds.b) + 1e-9):
        raise ConvergenceError(
            f"length {length} for word {word} violates certified bounds "
            f"[{n * math.log(bounds.a)}, {n * math.log(bounds.b)}]")
    return PeriodicOrbitPoint(word=word, z=z, multiplier=lam, length=length,
                              prime=word.aperiodic, residual=residual, orbit=orbit)


@dataclass(frozen=True)
class OrbitCatalog:
    """Deduplicated prime orbits up to period n_max, plus the certified
    expansion bounds used for tail estimates."""

    n_max: int
    tol_point: float
    mode: Mode
    a: float
    b: float
    orbits: tuple[PeriodicOrbitPoint, ...]
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def log_a(self) -> float:
        return math.log(self.a)

    @property
    def log_b(self) -> float:
        return math.log(self.b)

    def prime_count(self, p: int) -> int:
        return sum(1 for o in self.orbits if o.n == p)

    def fixed_point_data(self, n: int):
        """Data for the 2^n fixed points of f^n, grouped by prime orbit:
        yields (length L_n, multiplier of f^n, point count p) triples."""
        for o in self.orbits:
            p = o.n
            if n % p == 0:
                k = n // p
                yield (k * o.length, o.multiplier ** k, p)

    def all_points(self) -> list[complex]:
        return [z for o in self.orbits for z in o.orbit]

    def shortest_length(self) -> float:
        return min(o.length for o in self.orbits)


def _separation_scan(points: list[complex], threshold: float, n: int) -> float:
    """Minimum pairwise distance, via a sweep over real parts."""
    pts = sorted(points, key=lambda z: (z.real, z.imag))
    best = math.inf
    for i, z in enumerate(pts):
        for j in range(i + 1, len(pts)):
            w = pts[j]
            if w.real - z.real >= best:
                break
            best = min(best, abs(w - z))
    if best <= threshold:
        raise DegeneracyError(
            f"fixed points of iterate {n} collide: min separation {best} <= guard {threshold}")
    return best


def build_orbit_catalog(spec: MapSpec, n_max: int = 12, threads: int = 1) -> OrbitCatalog:
    """Locate every prime orbit of period <= n_max.

    Each orbit point (one per rotation of the canonical word) is located
    independently by contraction, so all stored points carry full
    precision.  Validates the 2^n fixed-point count identity and the
    pairwise separation guard 10 * tol_point.
    """
    if not (1 <= n_max <= N_MAX_CAP):
        raise ValueError(f"n_max must lie in 1..{N_MAX_CAP}")
    bounds = certified_bounds(spec)

    jobs = []
    for n in range(1, n_max + 1):
        jobs.extend(w for w in enumerate_words(n) if w.aperiodic)

    orbits = parallel_map(lambda word: locate_periodic_point(spec, word),
                          jobs, threads=threads)

    # Separation is checked per iterate: the 2^n fixed points of f^n must be
    # pairwise distinct for each n <= n_max.  (Orbit pairs of coprime periods
    # p, q can agree to itinerary depth p + q - 2 and sit closer than double
    # precision resolves, but no computation ever compares across iterates.)
    for n in range(1, n_max + 1):
        sharing = [o for o in orbits if n % o.n == 0]
        got = sum(o.n for o in sharing)
        if got != 2 ** n:
            raise DegeneracyError(
                f"fixed-point count mismatch at n = {n}: reconstructed {got}, expected {2 ** n}")
        assert sum(1 for o in orbits if o.n == n) == aperiodic_necklace_count(n)
        points = [z for o in sharing for z in o.orbit]
        _separation_scan(points, 10.0 * spec.tol_point, n)

    meta = {"system": "quadratic", "c": spec.c, "mode": spec.mode.value,
            "n_cert": spec.n_cert}
    return OrbitCatalog(n_max=n_max, tol_point=spec.tol_point, mode=spec.mode,
                        a=bounds.a, b=bounds.b, orbits=tuple(orbits), meta=meta)


# ---------------------------------------------------------------------------
# two-branch affine fixture (exact orbits; test oracle for the model zeta)

@dataclass(frozen=True)
class AffinePair:
    """Expanding two-branch affine system on [0, 1].

    Branch derivatives are the constants (a, b), so period-n orbits have
    L_n = k log a + (n-k) log b with multiplicity C(n, k): the binomial
    length model realized by an actual dynamical system.
    """

    ratios: tuple[float, float]

    def __post_init__(self):
        a, b = self.ratios
        if not (a > 1.0 and b > 1.0):
            raise ValueError("affine ratios must exceed 1")
        if 1.0 / a + 1.0 / b >= 1.0:
            raise ValueError("branch images must be disjoint: 1/a + 1/b < 1")

    def inverse(self, branch: int, x: float) -> float:
        a, b = self.ratios
        return x / a if branch == 0 else 1.0 - (1.0 - x) / b

    def branch_interval(self, branch: int, iv: Interval) -> Interval:
        lo = self.inverse(branch, iv.lo)
        hi = self.inverse(branch, iv.hi)
        return Interval(math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))

    def trap_interval(self) -> Interval:
        return Interval(0.0, 1.0)

    def orbit_catalog(self, n_max: int = 12) -> OrbitCatalog:
        """Exact prime-orbit catalog (affine compositions solve in closed
        form, no iteration)."""
        if not (1 <= n_max <= N_MAX_CAP):
            raise ValueError(f"n_max must lie in 1..{N_MAX_CAP}")
        a, b = self.ratios
        orbits = []
        for n in range(1, n_max + 1):
            for word in enumerate_words(n):
                if not word.aperiodic:
                    continue
                pts = []
                for k in range(n):
                    rot = word.rotated(k).letters
                    slope, off = 1.0, 0.0
                    for ch in reversed(rot):
                        # g(x) = x/r + t composed outside-in
                        if ch == "0":
                            slope, off = slope / a, off / a
                        else:
                            slope, off = slope / b, 1.0 - (1.0 - off) / b
                    pts.append(complex(off / (1.0 - slope)))
                lam = 1.0
                for ch in word.letters:
                    lam *= a if ch == "0" else b
                orbits.append(PeriodicOrbitPoint(
                    word=word, z=pts[0], multiplier=complex(lam),
                    length=math.log(lam), prime=True, residual=0.0,
                    orbit=tuple(pts)))
        meta = {"system": "affine", "ratios": list(self.ratios)}
        return OrbitCatalog(n_max=n_max, tol_point=1e-15, mode=Mode.REAL_1D,
                            a=min(a, b), b=max(a, b), orbits=tuple(orbits), meta=meta)


# ---------------------------------------------------------------------------
# catalog cache file

def save_catalog(catalog: OrbitCatalog, path: str) -> None:
    """Versioned JSON cache of a quadratic catalog."""
    if catalog.meta.get("system") != "quadratic":
        raise ValueError("only quadratic catalogs are cached")
    payload = {
        "version": CATALOG_VERSION,
        "c": [catalog.meta["c"].real, catalog.meta["c"].imag],
        "mode": catalog.meta["mode"],
        "n_max": catalog.n_max,
        "tol_point": catalog.tol_point,
        "n_cert": catalog.meta["n_cert"],
        "expansion": {"a": catalog.a, "b": catalog.b},
        "orbits": [{"word": o.word.letters,
                    "re_z": o.z.real, "im_z": o.z.imag,
                    "re_multiplier": o.multiplier.real,
                    "im_multiplier": o.multiplier.imag}
                   for o in catalog.orbits],
    }
    from .util import atomic_write_text
    atomic_write_text(path, json.dumps(payload, indent=1) + "\n")


def load_catalog(path: str) -> OrbitCatalog:
    """Rebuild a catalog from its cache.

    Points are re-located from the cached words (the same deterministic
    code path as a fresh build), then cross-checked against the cached
    values; downstream results are therefore identical to a fresh build.
    """
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("version") != CATALOG_VERSION:
        raise ValueError(f"unsupported catalog cache version: {payload.get('version')}")
    spec = MapSpec(c=complex(payload["c"][0], payload["c"][1]),
                   mode=Mode(payload["mode"]),
                   tol_point=payload["tol_point"],
                   n_cert=payload["n_cert"])
    catalog = build_orbit_catalog(spec, n_max=payload["n_max"])
    cached = {rec["word"]: rec for rec in payload["orbits"]}
    if set(cached) != {o.word.letters for o in catalog.orbits}:
        raise ValueError("catalog cache words do not match the rebuilt catalog")
    for o in catalog.orbits:
        rec = cached[o.word.letters]
        if abs(o.z - complex(rec["re_z"], rec["im_z"])) > 100.0 * spec.tol_point:
            raise ValueError(f"cached point for word {o.word} disagrees with rebuild")
    return catalog
