"""Three-rectangle regularization of ``eta*delta(x) + lambda*delta'(x)``.

The squeezed potential lives on ``[-l, rho + r]`` and is made of a left slab
of height ``lambda*h1``, a middle slab carrying both the delta-like
rectangle ``eta*h`` and ``lambda*h3``, and a right slab of height
``lambda*h2``. All sizes are powers of the squeezing parameter ``epsilon``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConstraintViolation, DomainError


@dataclass(frozen=True)
class Rectangle:
    left: float
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and math.isfinite(self.width)):
            raise DomainError(f"rectangle width must be positive and finite, got {self.width}")
        if not (math.isfinite(self.height) and math.isfinite(self.left)):
            raise DomainError("rectangle left edge and height must be finite")

    @property
    def right(self) -> float:
        return self.left + self.width


@dataclass(frozen=True)
class PiecewisePotential:
    """Contiguous rectangles sorted by left edge; zero outside the support."""

    rectangles: tuple[Rectangle, ...] = field(default_factory=tuple)

    def __post_init__(self):
        rects = tuple(self.rectangles)
        object.__setattr__(self, "rectangles", rects)
        for prev, cur in zip(rects, rects[1:]):
            # edges are built as sums of floats, allow a few ulps of slack
            gap = cur.left - prev.right
            if abs(gap) > 8 * np.finfo(float).eps * max(1.0, abs(prev.right)):
                raise DomainError("rectangles must be contiguous and sorted by left edge")

    @property
    def support(self) -> tuple[float, float]:
        if not self.rectangles:
            return (0.0, 0.0)
        return (self.rectangles[0].left, self.rectangles[-1].right)

    def __call__(self, x):
        return evaluate(self, x)


class Geometry(NamedTuple):
    h: float
    h1: float
    h2: float
    h3: float
    l: float
    rho: float
    r: float

    @property
    def heights(self) -> tuple[float, float, float, float]:
        return (self.h, self.h1, self.h2, self.h3)

    @property
    def widths(self) -> tuple[float, float, float]:
        return (self.l, self.rho, self.r)


@dataclass(frozen=True)
class RegularizationParams:
    """Exponents, amplitudes and constants of the power parametrization.

    ``a`` holds ``(a1, a2, a3)`` and ``c`` holds ``(c0, c1, c2, c3)``.
    """

    mu: float
    nu: float
    tau: float
    a: tuple[float, float, float] = (0.0, 0.0, 0.0)
    c: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    varsigma: float = 1.0
    epsilon: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        if len(self.a) != 3 or len(self.c) != 4:
            raise DomainError("expected a=(a1, a2, a3) and c=(c0, c1, c2, c3)")
        values = (self.mu, self.nu, self.tau, self.varsigma, self.epsilon, *self.a, *self.c)
        if not all(math.isfinite(v) for v in values):
            raise DomainError("regularization parameters must be finite")
        if not self.mu > 1:
            raise DomainError(f"mu must exceed 1, got {self.mu}")
        if min(self.c) <= 0 or self.varsigma <= 0 or self.epsilon <= 0:
            raise DomainError("c0..c3, varsigma and epsilon must be positive")

    @classmethod
    def from_mapping(cls, data: dict) -> "RegularizationParams":
        """Build from the JSON parameter schema (extra keys are ignored)."""
        return cls(
            mu=data["mu"],
            nu=data["nu"],
            tau=data["tau"],
            a=tuple(data.get("a", (0.0, 0.0, 0.0))),
            c=tuple(data.get("c", (1.0, 1.0, 1.0, 1.0))),
            varsigma=data.get("varsigma", 1.0),
            epsilon=data.get("epsilon", 1e-3),
        )

    def to_mapping(self) -> dict:
        return {
            "mu": self.mu,
            "nu": self.nu,
            "tau": self.tau,
            "a": list(self.a),
            "c": list(self.c),
            "varsigma": self.varsigma,
            "epsilon": self.epsilon,
        }

    @property
    def exponents(self) -> tuple[float, float, float]:
        return (self.mu, self.nu, self.tau)


def geometry(params: RegularizationParams) -> Geometry:
    """Heights and widths of the rectangles at the current ``epsilon``."""
    mu, nu, tau = params.mu, params.nu, params.tau
    a1, a2, a3 = params.a
    c0, c1, c2, c3 = params.c
    eps, vs = params.epsilon, params.varsigma

    try:
        # a-amplitudes share the scale of the delta' profile
        base = eps ** (2.0 * (1.0 - mu))
        left_lead = (c0 / c1) * eps ** (-mu)
        right_lead = (c0 / c2) * eps ** (-nu)
        h1 = a1 * base + left_lead
        h2 = a2 * base - right_lead
        h3 = a3 * base
        h = eps ** (-tau) / c3
        l = c1 * eps
        r = (c2 / vs) * eps ** (1.0 - mu + nu)
        rho = c3 * eps**tau
    except OverflowError:
        raise DomainError(f"epsilon={eps} overflows the rectangle sizes") from None

    geo = Geometry(h, h1, h2, h3, l, rho, r)
    if not all(math.isfinite(v) for v in geo):
        raise DomainError(f"epsilon={eps} overflows the rectangle sizes")
    if min(l, rho, r) <= 0:
        raise DomainError(f"epsilon={eps} underflows a rectangle width")
    if a1 == 0 and a2 == 0 and not left_lead * right_lead > 0:
        # h1 = +lead, h2 = -lead: the double-well sign structure
        raise ConstraintViolation("double-well structure requires h1*h2 < 0")
    return geo


def build_total_potential(params: RegularizationParams, lam: float, eta: float = 0.0) -> PiecewisePotential:
    """Finite-range potential ``eta*Delta_eps + lam*Delta'_eps``.

    Raises:
        DomainError: for ``lam == 0``; the delta' strength must be nonzero.
    """
    if lam == 0 or not math.isfinite(lam):
        raise DomainError("lambda must be a nonzero finite number")
    if not math.isfinite(eta):
        raise DomainError("eta must be finite")
    g = geometry(params)
    return PiecewisePotential(
        (
            Rectangle(-g.l, g.l, lam * g.h1),
            Rectangle(0.0, g.rho, eta * g.h + lam * g.h3),
            Rectangle(g.rho, g.r, lam * g.h2),
        )
    )


def evaluate(potential: PiecewisePotential, x):
    """Potential value at ``x`` (scalar or array).

    Intervals are closed on the left and open on the right, so shared edges
    take the height of the rectangle to their right.
    """
    xs = np.asarray(x, dtype=float)
    out = np.zeros_like(xs)
    for rect in potential.rectangles:
        out = np.where((xs >= rect.left) & (xs < rect.right), rect.height, out)
    return out.item() if out.ndim == 0 else out


def rectangles_from_sizes(
    widths: Sequence[float], heights: Sequence[float], start: float = 0.0
) -> PiecewisePotential:
    """Chain rectangles of given widths and heights starting at ``start``."""
    rects = []
    left = start
    for w, v in zip(widths, heights):
        rects.append(Rectangle(left, w, v))
        left += w
    return PiecewisePotential(tuple(rects))
