"""Moments of the rescaled profiles and the exponent-space surfaces.

In the stretched variable ``xi = eps**(1 - mu) * x`` the delta-like
sequence and the delta'-like sequence become piecewise constant profiles
whose moments decide which distribution the sequence tends to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .potential import PiecewisePotential, RegularizationParams, Rectangle

# tolerance on the exponent relations that define the surface elements
EXPONENT_TOL = 1e-12

DEFAULT_LADDER = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)


class Role(str, Enum):
    DELTA = "delta"
    DELTA_PRIME = "delta_prime"


@dataclass(frozen=True)
class MomentReport:
    j: int
    value: float
    epsilon: float
    role: str = Role.DELTA_PRIME.value

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"moment of order {self.j} is not finite at eps={self.epsilon}")


@dataclass(frozen=True)
class SurfaceClass:
    """Result of :func:`classify`.

    ``surface`` is one of ``P0``..``P6``, ``Q0``..``Q6``,
    ``S_delta_interior``, ``S_delta_exterior`` or ``none``.
    """

    surface: str
    constraint_residual: float = 0.0

    @property
    def family(self) -> str:
        if self.surface[0] == "P":
            return "S_delta_boundary"
        if self.surface[0] == "Q":
            return "S_deltaprime"
        return self.surface


def _role(role) -> Role:
    try:
        return Role(role.value if isinstance(role, Role) else role)
    except ValueError:
        raise DomainError(f"unknown role {role!r}; expected 'delta' or 'delta_prime'") from None


def profile(params: RegularizationParams, role="delta_prime") -> PiecewisePotential:
    """Rescaled profile in the stretched coordinate ``xi``."""
    mu, nu, tau = params.exponents
    a1, a2, a3 = params.a
    c0, c1, c2, c3 = params.c
    eps, vs = params.epsilon, params.varsigma

    mid = c3 * eps ** (1.0 - mu + tau)
    if _role(role) is Role.DELTA:
        return PiecewisePotential((Rectangle(0.0, mid, eps ** (mu - 1.0 - tau) / c3),))

    left = c1 * eps ** (2.0 - mu)
    right = (c2 / vs) * eps ** (2.0 - 2.0 * mu + nu)
    return PiecewisePotential(
        (
            Rectangle(-left, left, a1 + (c0 / c1) * eps ** (mu - 2.0)),
            Rectangle(0.0, mid, a3),
            Rectangle(mid, right, a2 - (c0 / c2) * eps ** (2.0 * mu - 2.0 - nu)),
        )
    )


def _zeroth(params: RegularizationParams, role: Role) -> float:
    # reduced forms: the products height*width are simplified by hand so the
    # leading c0 terms cancel exactly instead of up to rounding
    if role is Role.DELTA:
        return 1.0
    mu, nu, tau = params.exponents
    a1, a2, a3 = params.a
    c0, c1, c2, c3 = params.c
    eps, vs = params.epsilon, params.varsigma
    left = (a1 * c1 * eps ** (2.0 - mu) + c0) / vs
    middle = a3 * c3 * eps ** (1.0 - mu + tau)
    right = a2 * c2 * eps ** (2.0 - 2.0 * mu + nu) / vs - c0 / vs
    return left + middle + right


def moment(params: RegularizationParams, role="delta_prime", j: int = 0) -> MomentReport:
    """Closed-form moment of order ``j`` of the rescaled profile.

    For ``j = 0`` the part of the profile on the negative half-axis is divided
    by ``varsigma``; for ``j >= 1`` the moment is
    ``(1/j!) * int xi**j V(xi) dxi``, summed rectangle by rectangle.
    """
    if int(j) != j or j < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {j}")
    j = int(j)
    r = _role(role)
    if j == 0:
        value = _zeroth(params, r)
    else:
        norm = (j + 1) * math.factorial(j)
        value = 0.0
        for rect in profile(params, r).rectangles:
            value += rect.height * (rect.right ** (j + 1) - rect.left ** (j + 1)) / norm
    return MomentReport(j, value, params.epsilon, r.value)


def quadrature_moment(params: RegularizationParams, role="delta_prime", j: int = 0, panels: int = 100_000) -> float:
    """Midpoint-rule version of :func:`moment` used as a cross-check.

    Every rectangle gets its own ``panels`` cells, so no cell straddles a jump.
    The profile is sampled through the generic evaluator rather than read
    off the rectangle heights.
    """
    if panels < 1:
        raise DomainError("need at least one panel")
    r = _role(role)
    prof = profile(params, r)
    total = 0.0
    for rect in prof.rectangles:
        edges = np.linspace(rect.left, rect.right, panels + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        weights = np.diff(edges)
        vals = np.asarray(prof(mids))
        if j == 0 and rect.right <= 0.0:
            vals = vals / params.varsigma
        total += float(np.sum(vals * mids**j * weights))
    return total / math.factorial(j)


def moment_ladder(
    params: RegularizationParams, role="delta_prime", j: int = 0, ladder: Sequence[float] = DEFAULT_LADDER
) -> list[MomentReport]:
    from dataclasses import replace

    return [moment(replace(params, epsilon=float(e)), role, j) for e in ladder]


def total_area(params: RegularizationParams, role="delta_prime") -> float:
    """Unweighted integral of the rescaled profile (``varsigma`` ignored)."""
    prof = profile(params, role)
    return sum(r.height * r.width for r in prof.rectangles)


def _eq(x: float, y: float) -> bool:
    return abs(x - y) <= EXPONENT_TOL


def _gt(x: float, y: float) -> bool:
    return x > y + EXPONENT_TOL


def _lt(x: float, y: float) -> bool:
    return x < y - EXPONENT_TOL


def p_element(mu: float, nu: float, tau: float) -> Optional[str]:
    """Which apex/edge/plane of the delta surface contains the triple."""
    m = mu - 1.0
    if _eq(mu, 1.5):
        if _eq(nu, 1.5):
            if _eq(tau, 1.0):
                return "P0"
            if _gt(tau, 1.0):
                return "P3"
        elif _gt(nu, 1.5):
            if _eq(tau, 1.0):
                return "P2"
            if _gt(tau, 1.0):
                return "P6"
        return None
    if _gt(mu, 1.0) and _lt(mu, 1.5):
        if _eq(nu, 3 * m):
            if _eq(tau, 2 * m):
                return "P1"
            if _gt(tau, 2 * m):
                return "P5"
        elif _gt(nu, 3 * m) and _eq(tau, 2 * m):
            return "P4"
    return None


def q_element(mu: float, nu: float, tau: float) -> Optional[str]:
    """Which apex/edge/plane of the delta' surface contains the triple."""
    m = mu - 1.0
    if _eq(mu, 2.0):
        if _eq(nu, 2.0):
            if _eq(tau, 1.0):
                return "Q0"
            if _gt(tau, 1.0):
                return "Q3"
        elif _gt(nu, 2.0):
            if _eq(tau, 1.0):
                return "Q2"
            if _gt(tau, 1.0):
                return "Q6"
        return None
    if _gt(mu, 1.0) and _lt(mu, 2.0):
        if _eq(nu, 2 * m):
            if _eq(tau, m):
                return "Q1"
            if _gt(tau, m):
                return "Q5"
        elif _gt(nu, 2 * m) and _eq(tau, m):
            return "Q4"
    return None


def in_delta_interior(mu: float, nu: float, tau: float) -> bool:
    """All three powers of eps in the delta-limit condition are positive."""
    m = mu - 1.0
    return _gt(mu, 1.0) and _lt(mu, 1.5) and _gt(nu, 3 * m) and _gt(tau, 2 * m)


def classify(
    mu: float,
    nu: float,
    tau: float,
    a: Optional[Sequence[float]] = None,
    c: Optional[Sequence[float]] = None,
    varsigma: float = 1.0,
) -> SurfaceClass:
    """Place ``(mu, nu, tau)`` on the delta or delta' surface.

    Boundary elements ``P_j`` are checked first, then ``Q_j``, then the open
    interior of the delta surface. Any other triple with ``mu > 1`` is
    exterior, and ``mu <= 1`` gives ``none``. When constants are supplied the
    element's constraint residual is attached; otherwise it is 0.
    """
    if not all(math.isfinite(v) for v in (mu, nu, tau)) or not mu > 1.0:
        return SurfaceClass("none", 0.0)
    tag = p_element(mu, nu, tau) or q_element(mu, nu, tau)
    if tag is not None:
        res = 0.0
        needs = a if tag[0] == "P" else c
        if needs is not None:
            res = constraint_residual(
                tag,
                a=a if a is not None else (0.0, 0.0, 0.0),
                c=c if c is not None else (1.0, 1.0, 1.0, 1.0),
                varsigma=varsigma,
            )
        return SurfaceClass(tag, res)
    if in_delta_interior(mu, nu, tau):
        return SurfaceClass("S_delta_interior", 0.0)
    return SurfaceClass("S_delta_exterior", 0.0)


def constraint_residual(
    element: str,
    a: Sequence[float] = (0.0, 0.0, 0.0),
    c: Sequence[float] = (1.0, 1.0, 1.0, 1.0),
    varsigma: float = 1.0,
) -> float:
    """``|LHS - RHS|`` of the constant constraint attached to a surface element.

    ``P_j`` constraints involve ``a`` and ``c1..c3``; ``Q_j`` constraints
    involve ``c0..c3``. All take ``varsigma``.
    """
    a1, a2, a3 = a
    c0, c1, c2, c3 = c
    s = varsigma
    rows = {
        "P0": (a1 * c1 + a2 * c2 + a3 * c3 * s, s),
        "P1": (a2 * c2 + a3 * c3 * s, s),
        "P2": (a1 * c1 + a3 * c3 * s, s),
        "P3": (a1 * c1 + a2 * c2, s),
        "P4": (a3 * c3, 1.0),
        "P5": (a2 * c2, s),
        "P6": (a1 * c1, s),
    }
    if element in rows:
        lhs, rhs = rows[element]
        return abs(lhs - rhs)
    if element[:1] == "Q" and c0 == 0:
        raise DomainError("Q constraints need c0 != 0")
    qrows = {
        "Q0": lambda: (0.5 * (c1 + c2 / s**2) + c3 / s, 1.0 / c0),
        "Q1": lambda: (c2 / (2 * s) + c3, s / c0),
        "Q2": lambda: (c1 / 2 + c3 / s, 1.0 / c0),
        "Q3": lambda: (c1 + c2 / s**2, 2.0 / c0),
        "Q4": lambda: (c0 * c3, s),
        "Q5": lambda: (c0 * c2, 2 * s**2),
        "Q6": lambda: (c0 * c1, 2.0),
    }
    if element not in qrows:
        raise DomainError(f"unknown surface element {element!r}")
    lhs, rhs = qrows[element]()
    return abs(lhs - rhs)
