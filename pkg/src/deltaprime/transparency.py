"""Reduced transparency equations, their roots, and the limiting chi and g.

Each set ``T0``..``T6`` is a window of exponents on the delta' surface plus a
transcendental equation in the constants. For ``T0``..``T3`` the unknown is
``c0`` (or ``b`` for ``T3``) at fixed ``lambda`` and ``varsigma``; for
``T4``..``T6`` the equation fixes ``varsigma`` as a function of ``lambda``.

Negative ``lambda`` is handled by evaluating with the principal complex
square root. The reduced equations are odd in the square-root argument
(except ``T4``, which has none), so their complex value is ``i`` times a
real function; we divide that ``i`` out to keep the residual real.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, InfeasibleTarget, NotFound, PoleError, PreconditionError, SolverFailure
from .moments import EXPONENT_TOL, constraint_residual

ROOT_TOL = 1e-10
POLE_GAP = 1e-9
_GRID_POINTS = 10_000
_GRID_MIN = 1e-6


def _eq(x, y):
    return abs(x - y) <= EXPONENT_TOL


def _ge(x, y):
    return x >= y - EXPONENT_TOL


def _gt(x, y):
    return x > y + EXPONENT_TOL


def _le(x, y):
    return x <= y + EXPONENT_TOL


class TransparencySet(str, Enum):
    T0 = "T0"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"

    @classmethod
    def parse(cls, value) -> "TransparencySet":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown transparency set {value!r}") from None

    @property
    def solves_constant(self) -> bool:
        """True when the equation is solved for ``c0`` or ``b``."""
        return self in (TransparencySet.T0, TransparencySet.T1, TransparencySet.T2, TransparencySet.T3)

    @property
    def canonical_exponents(self) -> tuple[float, float, float]:
        return _CANONICAL[self]

    def in_window(self, mu: float, nu: float, tau: float) -> bool:
        m = mu - 1.0
        low_mu = _gt(mu, 1.0) and _le(mu, 1.5)
        if self is TransparencySet.T0:
            return _eq(mu, 2) and _eq(nu, 2) and _eq(tau, 1)
        if self is TransparencySet.T1:
            return low_mu and _eq(nu, 2 * m) and _eq(tau, m)
        if self is TransparencySet.T2:
            return _eq(mu, 2) and _ge(nu, 3) and _eq(tau, 1)
        if self is TransparencySet.T3:
            return _eq(mu, 2) and _eq(nu, 2) and _ge(tau, 2)
        if self is TransparencySet.T4:
            return low_mu and _ge(nu, 3 * m) and _eq(tau, m)
        if self is TransparencySet.T5:
            return low_mu and _eq(nu, 2 * m) and _ge(tau, 2 * m)
        return _eq(mu, 2) and _ge(nu, 3) and _ge(tau, 2)

    def on_boundary(self, mu: float, nu: float, tau: float) -> bool:
        """Membership in the boundary set ``B_j``; ``T0`` has none."""
        m = mu - 1.0
        low_mu = _gt(mu, 1.0) and _le(mu, 1.5)
        if self is TransparencySet.T0:
            return False
        if self is TransparencySet.T1:
            return _eq(mu, 1.5) and _eq(nu, 1) and _eq(tau, 0.5)
        if self is TransparencySet.T2:
            return _eq(mu, 2) and _eq(nu, 3) and _eq(tau, 1)
        if self is TransparencySet.T3:
            return _eq(mu, 2) and _eq(nu, 2) and _eq(tau, 2)
        if self is TransparencySet.T4:
            return (low_mu and _eq(nu, 3 * m) and _eq(tau, m)) or (
                _eq(mu, 1.5) and _gt(nu, 1.5) and _eq(tau, 0.5)
            )
        if self is TransparencySet.T5:
            return (low_mu and _eq(nu, 2 * m) and _eq(tau, 2 * m)) or (
                _eq(mu, 1.5) and _eq(nu, 1) and _gt(tau, 1)
            )
        return (_eq(mu, 2) and _ge(nu, 3) and _eq(tau, 2)) or (_eq(mu, 2) and _eq(nu, 3) and _gt(tau, 2))


_CANONICAL = {
    TransparencySet.T0: (2.0, 2.0, 1.0),
    TransparencySet.T1: (1.5, 1.0, 0.5),
    TransparencySet.T2: (2.0, 3.0, 1.0),
    TransparencySet.T3: (2.0, 2.0, 2.0),
    TransparencySet.T4: (1.5, 1.5, 0.5),
    TransparencySet.T5: (1.5, 1.0, 1.0),
    TransparencySet.T6: (2.0, 3.0, 2.0),
}


@dataclass(frozen=True)
class TransparencyRoot:
    set: TransparencySet
    lam: float
    varsigma: float
    root_value: Optional[float]
    root_index: int
    residual: float

    def __post_init__(self):
        if not abs(self.residual) < ROOT_TOL:
            raise SolverFailure(f"{self.set.value} root residual {self.residual:.3g} exceeds {ROOT_TOL}")
        if self.root_value is not None and not self.root_value > 0:
            raise DomainError("root value must be positive")
        if self.root_index < 1:
            raise DomainError("root index starts at 1")


def _csqrt(x):
    return np.sqrt(np.asarray(x, dtype=complex))


def _odd_real(value, lam: float):
    """Real part after removing the factor ``i`` that negative lambda brings."""
    value = np.asarray(value, dtype=complex)
    return (value if lam >= 0 else value / 1j).real


def _tan_args(s: TransparencySet, lam: float, x):
    """Real arguments of every ``tan`` (after the lambda<0 swap) in a row."""
    x = np.asarray(x, dtype=float)
    a = abs(lam)
    if s is TransparencySet.T0:
        # for lambda<0 tan turns into tanh and tanh into tan; same argument
        return [np.sqrt(a * x / (1 + x))]
    if s is TransparencySet.T1:
        return [np.sqrt(2 * a * x / (1 + x))] if lam > 0 else []
    if s is TransparencySet.T2:
        return [np.sqrt(2 * a * x / (1 + x))] if lam < 0 else []
    if s is TransparencySet.T3:
        if lam > 0:
            return [np.sqrt(2 * a / (1 + x))]
        return [np.sqrt(2 * a / (1 + 1 / x))]
    if s is TransparencySet.T5:
        return [np.full_like(x, math.sqrt(2 * a))] if lam > 0 else []
    if s is TransparencySet.T6:
        return [np.full_like(x, math.sqrt(2 * a))] if lam < 0 else []
    return []


def _raw_residual(s: TransparencySet, lam: float, varsigma: float, x):
    """Vectorized residual, NaN where it is undefined."""
    vs = varsigma
    lam_c = complex(lam)
    with np.errstate(all="ignore"):
        if s is TransparencySet.T4:
            return np.broadcast_to(np.asarray(vs * (1 - lam) - 1.0, dtype=float), np.shape(x)).copy()
        x = np.asarray(x, dtype=float)
        if s in (TransparencySet.T5, TransparencySet.T6):
            z = _csqrt(2 * lam_c)
            val = np.tan(z) - vs * z if s is TransparencySet.T5 else vs * np.tanh(z) - z
            val = np.broadcast_to(val, np.shape(x))
        elif s is TransparencySet.T0:
            z = _csqrt(lam_c * x / (1 + x))
            w = _csqrt(lam_c / (x * (1 + x)))
            th = np.tanh(z)
            val = th / (1 / vs + w * th) - np.tan(z)
        elif s is TransparencySet.T1:
            z = _csqrt(2 * lam_c * x / (1 + x))
            val = (1 / vs + lam / (1 + x)) * np.tan(z) - z
        elif s is TransparencySet.T2:
            z = _csqrt(2 * lam_c * x / (1 + x))
            val = vs * (1 - lam / (1 + x)) * np.tanh(z) - z
        else:
            zp = _csqrt(2 * lam_c / (1 + 1 / x))
            zm = _csqrt(2 * lam_c / (1 + x))
            val = vs / np.sqrt(x) * np.tanh(zp) - np.tan(zm)
        out = _odd_real(val, lam)
    bad = ~np.isfinite(out)
    for arg in _tan_args(s, lam, x):
        bad |= np.abs(np.cos(arg)) < 1e-15
    return np.where(bad, np.nan, out)


def residual(set_, lam: float, varsigma: float, x=1.0):
    """LHS minus RHS of the reduced transparency equation.

    ``x`` is ``c0`` for ``T0``..``T2`` and ``b`` for ``T3``; it is ignored
    for ``T4``..``T6``, whose residual is a function of ``varsigma`` only.
    Accepts arrays for ``x``.

    Raises:
        PoleError: a scalar evaluation sitting on a pole of ``tan``.
    """
    s = TransparencySet.parse(set_)
    if not varsigma > 0:
        raise DomainError("varsigma must be positive")
    if s.solves_constant and np.any(np.asarray(x) <= 0):
        raise DomainError(f"{s.value} needs a positive unknown, got {x}")
    out = _raw_residual(s, lam, varsigma, x)
    if np.ndim(out) == 0:
        if math.isnan(float(out)):
            raise PoleError(f"{s.value} residual undefined at lambda={lam}, x={x}")
        return float(out)
    return out


def _pole_distance(s: TransparencySet, lam: float, x: float) -> float:
    args = _tan_args(s, lam, np.array([x]))
    if not args:
        return math.inf
    return min(float(abs(np.cos(a[0]))) for a in args)


def _pole_locations(s: TransparencySet, lam: float, lo: float, hi: float) -> list[float]:
    """Points in (lo, hi) where a tan argument hits pi/2 + n*pi."""
    out = []
    for k in range(len(_tan_args(s, lam, np.array([lo])))):

        def arg(x, k=k):
            return float(_tan_args(s, lam, np.array([x]))[k][0])

        a_lo, a_hi = arg(lo), arg(hi)
        n_lo = math.floor((a_lo - math.pi / 2) / math.pi)
        n_hi = math.floor((a_hi - math.pi / 2) / math.pi)
        for n in range(min(n_lo, n_hi) + 1, max(n_lo, n_hi) + 1):
            target = math.pi / 2 + n * math.pi
            out.append(brentq(lambda x: arg(x) - target, lo, hi, xtol=1e-15, rtol=8.9e-16))
    return sorted(out)


def _bracket_roots(f: Callable[[float], float], lo: float, hi: float, poles: Sequence[float]) -> list[float]:
    """Roots of ``f`` in [lo, hi], never bracketing across a pole."""
    edges = [lo]
    for p in poles:
        gap = POLE_GAP * max(1.0, abs(p))
        edges.extend([p - gap, p + gap])
    edges.append(hi)
    roots = []
    for a, b in zip(edges[::2], edges[1::2]):
        if not b > a:
            continue
        fa, fb = f(a), f(b)
        if not (math.isfinite(fa) and math.isfinite(fb)):
            continue
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(brentq(f, a, b, xtol=1e-15, rtol=8.9e-16, maxiter=500))
    return roots


def _polish(f: Callable[[float], float], x: float) -> float:
    """Walk a few ulps either way to the float with the smallest |f|."""
    best, fbest = x, abs(f(x))
    cand = x
    for direction in (1.0, -1.0):
        cand = x
        for _ in range(4):
            cand = math.nextafter(cand, direction * math.inf)
            fc = abs(f(cand))
            if fc < fbest:
                best, fbest = cand, fc
    return best


def solve_roots(
    set_,
    lam: float,
    varsigma: float = 1.0,
    search_max: float = 1e3,
    max_roots: int = 10,
) -> list[TransparencyRoot]:
    """Roots of the ``T0``..``T3`` equation in ``(0, search_max]``, ascending.

    The unknown axis is sampled on a log grid; sign changes between samples
    are refined with Brent's method, splitting intervals at ``tan`` poles.
    Sign changes caused by a pole of a rational factor are rejected by the
    residual check. Returns an empty list when no root exists.
    """
    s = TransparencySet.parse(set_)
    if not s.solves_constant:
        raise DomainError(f"{s.value} is solved for varsigma; use solve_lambda_roots or varsigma_for")
    if not search_max > _GRID_MIN:
        raise DomainError("search_max must exceed the grid start")
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    if not varsigma > 0:
        raise DomainError("varsigma must be positive")

    grid = np.logspace(math.log10(_GRID_MIN), math.log10(search_max), _GRID_POINTS)
    vals = _raw_residual(s, lam, varsigma, grid)
    if not np.any(np.isfinite(vals)):
        raise SolverFailure(f"{s.value} residual is not finite anywhere on the grid")

    def f(x):
        v = _raw_residual(s, lam, varsigma, np.array([x]))[0]
        return float(v)

    found: list[float] = []
    finite = np.isfinite(vals)
    crosses_pole = np.zeros(len(grid) - 1, dtype=bool)
    for arg in _tan_args(s, lam, grid):
        branch = np.floor((arg - math.pi / 2) / math.pi)
        crosses_pole |= branch[1:] != branch[:-1]
    with np.errstate(invalid="ignore"):
        sign_change = finite[:-1] & finite[1:] & (vals[:-1] * vals[1:] <= 0)
    for i in np.flatnonzero(crosses_pole | sign_change):
        lo, hi = float(grid[i]), float(grid[i + 1])
        poles = _pole_locations(s, lam, lo, hi) if crosses_pole[i] else []
        for r in _bracket_roots(f, lo, hi, poles):
            r = _polish(f, r)
            if abs(f(r)) < ROOT_TOL and _pole_distance(s, lam, r) > POLE_GAP:
                if not found or r > found[-1] * (1 + 1e-12):
                    found.append(r)
        if len(found) >= max_roots:
            break

    return [
        TransparencyRoot(s, lam, varsigma, r, k + 1, f(r)) for k, r in enumerate(found[:max_roots])
    ]


def has_root(set_, lam: float, varsigma: float = 1.0, search_max: float = 1e3) -> bool:
    return bool(solve_roots(set_, lam, varsigma, search_max, max_roots=1))


def critical_lambda(
    set_,
    varsigma: float = 1.0,
    lambda_max: float = 100.0,
    grid_points: int = 200,
    search_max: float = 1e3,
    tol: float = 1e-6,
) -> float:
    """Smallest positive lambda at which a root appears.

    A uniform grid on ``(0, lambda_max]`` finds the first lambda with a root;
    the transition is then bisected to ``tol``.

    Raises:
        NotFound: no root anywhere up to ``lambda_max``.
    """
    s = TransparencySet.parse(set_)
    lams = np.linspace(lambda_max / grid_points, lambda_max, grid_points)
    prev = 0.0
    for lam in lams:
        if has_root(s, float(lam), varsigma, search_max):
            lo, hi = prev, float(lam)
            if lo == 0.0:
                lo = hi * 1e-6
                if has_root(s, lo, varsigma, search_max):
                    return lo
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if has_root(s, mid, varsigma, search_max):
                    hi = mid
                else:
                    lo = mid
            return hi
        prev = float(lam)
    raise NotFound(f"no {s.value} root for lambda in (0, {lambda_max}] at varsigma={varsigma}")


def varsigma_for(set_, lam: float) -> float:
    """``varsigma(lambda)`` solving the ``T4``..``T6`` equation in closed form.

    Raises:
        InfeasibleTarget: when the closed form is not a positive number.
    """
    s = TransparencySet.parse(set_)
    if lam == 0:
        raise InfeasibleTarget(f"{s.value}: lambda must be nonzero")
    if s is TransparencySet.T4:
        if lam >= 1:
            raise InfeasibleTarget(f"T4 needs lambda < 1 for a positive varsigma, got {lam}")
        vs = 1.0 / (1.0 - lam)
    elif s is TransparencySet.T5:
        z = complex(np.sqrt(complex(2 * lam)))
        vs = (np.tan(z) / z).real
    elif s is TransparencySet.T6:
        z = complex(np.sqrt(complex(2 * lam)))
        vs = (z / np.tanh(z)).real
    else:
        raise DomainError(f"{s.value} does not fix varsigma")
    if not (math.isfinite(vs) and vs > 0):
        raise InfeasibleTarget(f"{s.value}: varsigma({lam}) = {vs} is not positive and finite")
    return float(vs)


def solve_lambda_roots(
    set_,
    varsigma: float = 1.0,
    lambda_range: tuple[float, float] = (1e-6, 200.0),
    max_roots: int = 10,
    grid_points: int = _GRID_POINTS,
) -> list[TransparencyRoot]:
    """Values of lambda at which the ``T4``..``T6`` equation holds for ``varsigma``.

    Raises:
        NotFound: ``T4`` with ``varsigma == 1``, whose only solution is the
            excluded ``lambda = 0``.
    """
    s = TransparencySet.parse(set_)
    if s.solves_constant:
        raise DomainError(f"{s.value} is solved for c0/b; use solve_roots")
    lo, hi = lambda_range
    if not hi > lo:
        raise DomainError("lambda_range must be increasing")
    if s is TransparencySet.T4:
        lam = 1.0 - 1.0 / varsigma
        if lam == 0 or abs(lam) < EXPONENT_TOL:
            raise NotFound("T4 has no admissible lambda at varsigma = 1 (it forces lambda = 0)")
        if not lo <= lam <= hi:
            return []
        return [TransparencyRoot(s, lam, varsigma, None, 1, residual(s, lam, varsigma))]

    def f(lam):
        return float(_raw_residual(s, lam, varsigma, np.array([0.0]))[0])

    def arg(lam):
        return math.sqrt(2 * abs(lam))

    tan_side = 1.0 if s is TransparencySet.T5 else -1.0
    grid = np.linspace(lo, hi, grid_points)
    grid = grid[grid != 0.0]
    found = []
    for a, b in zip(grid[:-1], grid[1:]):
        if a < 0 < b:
            continue
        poles = []
        if a * tan_side > 0:
            n_a = math.floor((arg(a) - math.pi / 2) / math.pi)
            n_b = math.floor((arg(b) - math.pi / 2) / math.pi)
            for n in range(min(n_a, n_b) + 1, max(n_a, n_b) + 1):
                t = math.pi / 2 + n * math.pi
                poles.append(math.copysign(t * t / 2, a))
        for r in _bracket_roots(f, float(a), float(b), sorted(poles)):
            r = _polish(f, r)
            if abs(f(r)) < ROOT_TOL and r != 0:
                found.append(r)
        if len(found) >= max_roots:
            break
    found = sorted(found)[:max_roots]
    return [TransparencyRoot(s, r, varsigma, None, k + 1, f(r)) for k, r in enumerate(found)]


def chi(set_, lam: float, varsigma: float = 1.0, root_value: Optional[float] = None) -> float:
    """Diagonal entry chi of the limiting connection matrix.

    Raises:
        PoleError: the ``cos`` (or ``sin``) in the denominator vanishes.
    """
    s = TransparencySet.parse(set_)
    vs = varsigma
    lc = complex(lam)
    x = root_value
    if s.solves_constant and (x is None or not x > 0):
        raise DomainError(f"{s.value} chi needs a positive root value")
    if s is TransparencySet.T0:
        z = np.sqrt(lc * x / (1 + x))
        num, den = vs * np.sinh(z), np.sin(z)
    elif s is TransparencySet.T1:
        z = np.sqrt(2 * lc * x / (1 + x))
        num, den = 1 + lam * vs / (1 + x), np.cos(z)
    elif s is TransparencySet.T2:
        z = np.sqrt(2 * lc * x / (1 + x))
        num, den = np.cosh(z), (1 - lam / (1 + x)) + 0j
    elif s is TransparencySet.T3:
        num, den = np.cosh(np.sqrt(2 * lc / (1 + 1 / x))), np.cos(np.sqrt(2 * lc / (1 + x)))
    elif s is TransparencySet.T4:
        num, den = 1.0 + 0j, (1 - lam) + 0j
    elif s is TransparencySet.T5:
        num, den = 1.0 + 0j, np.cos(np.sqrt(2 * lc))
    else:
        num, den = np.cosh(np.sqrt(2 * lc)), 1.0 + 0j
    if abs(den) < 1e-300:
        raise PoleError(f"{s.value} chi has a vanishing denominator at lambda={lam}")
    return float((num / den).real)


def varsigma_default(set_, lam: float, varsigma: float) -> float:
    s = TransparencySet.parse(set_)
    return varsigma if s.solves_constant else varsigma_for(s, lam)


def coupled_constants(set_, lam: float, varsigma: float = 1.0, root_value: Optional[float] = None, free=None):
    """Fill ``(c0, c1, c2, c3)`` from the root and the free constants.

    ``free`` maps names such as ``"c1"`` to values; unspecified free
    constants default to 1. For ``T4``..``T6`` the supplied ``varsigma`` is
    ignored in favour of ``varsigma(lambda)``.
    """
    s = TransparencySet.parse(set_)
    free = dict(free or {})
    for key, value in free.items():
        if key not in ("c0", "c1", "c2", "c3"):
            raise DomainError(f"unknown free constant {key!r}")
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"free constant {key} must be positive, got {value}")

    def get(name):
        return float(free.get(name, 1.0))

    vs = varsigma
    x = root_value
    if s.solves_constant and (x is None or not x > 0):
        raise DomainError(f"{s.value} needs a positive root value (c0 or b)")
    if s is TransparencySet.T0:
        c0 = x
        return (c0, 1 / (1 + c0), vs**2 / (1 + c0), vs / (c0 * (1 + c0)))
    if s is TransparencySet.T1:
        c0 = x
        return (c0, get("c1"), 2 * vs**2 / (1 + c0), vs / (c0 * (1 + c0)))
    if s is TransparencySet.T2:
        c0 = x
        return (c0, 2 / (1 + c0), get("c2"), vs / (c0 * (1 + c0)))
    if s is TransparencySet.T3:
        b, c1 = x, get("c1")
        return (2 / ((1 + 1 / b) * c1), c1, c1 * vs**2 / b, get("c3"))
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    c0 = get("c0")
    if s is TransparencySet.T4:
        if lam == 1:
            raise DomainError("T4 constants are singular at lambda = 1")
        return (c0, get("c1"), get("c2"), 1 / ((1 - lam) * c0))
    if s is TransparencySet.T5:
        t = np.tan(np.sqrt(complex(2 * lam)))
        c2 = float((t * t).real / (lam * c0))
        if not c2 > 0:
            raise DomainError(f"T5 gives a non-positive c2 at lambda={lam}")
        return (c0, get("c1"), c2, get("c3"))
    return (c0, 2 / c0, get("c2"), get("c3"))


def g_value(
    set_,
    lam: float,
    eta: float,
    varsigma: float,
    root_value: Optional[float],
    constants: Sequence[float],
    exponents: Sequence[float],
) -> float:
    """Coupling ``g`` of the effective delta term in the connection matrix.

    ``constants`` is ``(c0, c1, c2, c3)``. Terms tied to a special exponent
    value are switched on only when that exponent relation holds.

    Raises:
        DomainError: exponents outside the set's window.
    """
    s = TransparencySet.parse(set_)
    mu, nu, tau = exponents
    if not s.in_window(mu, nu, tau):
        raise DomainError(f"exponents {tuple(exponents)} lie outside the {s.value} window")
    c0, c1, c2, c3 = constants
    vs = varsigma
    lc = complex(lam)
    d = lambda x, y: 1.0 if _eq(x, y) else 0.0  # noqa: E731

    if s is TransparencySet.T0:
        z = np.sqrt(lc * c0 / (1 + c0))
        val = eta * (
            np.cos(z) * np.cosh(z) + lam * vs / (3 * c0 * (1 + c0)) * np.sin(z) * np.sinh(z)
        )
    elif s is TransparencySet.T1:
        x = lam * vs / (1 + c0)
        z = np.sqrt(2 * lc * c0 / (1 + c0))
        bracket = eta * (1 + x + x * x / 3) - lam**2 * c0**2 * c1 / 3 * d(mu, 1.5)
        val = bracket * np.cos(z) / (1 + x)
    elif s is TransparencySet.T2:
        y = lam / (1 + c0)
        z = np.sqrt(2 * lc * c0 / (1 + c0))
        bracket = eta * (1 - y + y * y / 3) - lam**2 * c0**2 * c2 / (3 * vs**3) * d(nu, 3)
        val = bracket * np.cosh(z) / (1 - y)
    elif s is TransparencySet.T3:
        b = root_value
        if b is None or not b > 0:
            raise DomainError("T3 g needs the root b")
        zp = np.sqrt(2 * lc / (1 + 1 / b))
        zm = np.sqrt(2 * lc / (1 + b))
        bracket = eta - 2 * lam * c3 / ((1 + 1 / b) * c1**2) * np.tanh(zp) ** 2 * d(tau, 2)
        val = bracket * np.cos(zm) * np.cosh(zp)
    elif s is TransparencySet.T4:
        val = eta * (1 + lam**2 / (3 * (1 - lam))) - lam**2 * c0**2 / 3 * (1 - lam) * (
            c1 * d(mu, 1.5) + c2 * (1 - lam) * d(nu, 3 * (mu - 1))
        )
    elif s is TransparencySet.T5:
        z = np.sqrt(2 * lc)
        val = (eta - lam**2 * c0**2 * (c1 / 3 * d(mu, 1.5) + c3 * d(tau, 2 * (mu - 1)))) * np.cos(z)
    else:
        z = np.sqrt(2 * lc)
        th = np.tanh(z)
        inner = c2 / (3 * z) * th * d(nu, 3) + c3 * d(tau, 2)
        val = (eta - lam * c0**2 / 2 * inner * th**2) * np.cosh(z)
    return float(complex(val).real) + 0.0


_P_FACTORS = {
    "P0": lambda c1, c2, c3: c1 + c2 + 3 * c3,
    "P1": lambda c1, c2, c3: c2 + 3 * c3,
    "P2": lambda c1, c2, c3: c1 + 3 * c3,
    "P3": lambda c1, c2, c3: c1 + c2,
    "P4": lambda c1, c2, c3: 3 * c3,
    "P5": lambda c1, c2, c3: c2,
    "P6": lambda c1, c2, c3: c1,
}


def g_on_s_delta(
    p_set: str,
    eta: float,
    lam: float,
    c: Sequence[float],
    a: Optional[Sequence[float]] = None,
    varsigma: float = 1.0,
) -> float:
    """Coupling ``g`` when the delta'-like sequence collapses to a delta.

    ``p_set`` is ``P0``..``P6`` or ``S_delta_interior``; ``chi`` is 1 in
    every case. If ``a`` is given, the element's constraint is checked.

    Raises:
        PreconditionError: the constraint residual exceeds 1e-8.
        DomainError: ``varsigma != 1`` or an unknown element.
    """
    if varsigma != 1.0:
        raise DomainError("the delta-surface coupling is only defined for varsigma = 1")
    if p_set == "S_delta_interior":
        return float(eta)
    if p_set not in _P_FACTORS:
        raise DomainError(f"unknown delta-surface element {p_set!r}")
    c0, c1, c2, c3 = c
    if a is not None:
        res = constraint_residual(p_set, a=a, c=c, varsigma=varsigma)
        if res > 1e-8:
            raise PreconditionError(f"{p_set} constraint violated (residual {res:.3g})")
    return float(eta + lam - lam**2 * c0**2 / 3 * _P_FACTORS[p_set](c1, c2, c3))
