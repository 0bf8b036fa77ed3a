"""Exact transfer matrices, scattering amplitudes and bound states.

Wave functions are propagated as ``(psi, psi')`` from the left edge
``x1 = -l`` to the right edge ``x2 = rho + r`` of the support, in units
where hbar^2/2m = 1, so that ``-psi'' + V psi = E psi``.
"""
from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, SingularScattering
from .potential import PiecewisePotential, RegularizationParams, geometry

# below this |z*w| the removable singularity of sin(z*w)/z is expanded
_TAYLOR_CUTOFF = 1e-6


@dataclass(frozen=True)
class TransferMatrix:
    l11: complex
    l12: complex
    l21: complex
    l22: complex

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, m) -> "TransferMatrix":
        m = np.asarray(m)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.l11, self.l12], [self.l21, self.l22]], dtype=complex)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(
            self.l11 * other.l11 + self.l12 * other.l21,
            self.l11 * other.l12 + self.l12 * other.l22,
            self.l21 * other.l11 + self.l22 * other.l21,
            self.l21 * other.l12 + self.l22 * other.l22,
        )

    @property
    def det(self) -> complex:
        return self.l11 * self.l22 - self.l12 * self.l21

    @property
    def max_imag(self) -> float:
        return max(abs(z.imag) for z in (self.l11, self.l12, self.l21, self.l22))

    @property
    def real(self) -> np.ndarray:
        return self.as_array().real


@dataclass(frozen=True)
class Wavenumbers:
    p: complex
    q: complex
    s: complex
    E: float

    @property
    def k(self) -> float:
        """Free wavenumber; only meaningful for scattering energies."""
        return math.sqrt(self.E) if self.E > 0 else float("nan")


@dataclass(frozen=True)
class ScatteringResult:
    R: complex
    T: complex
    R2: float
    T2: float
    conservation_residual: float
    u: float
    v: float


@dataclass(frozen=True)
class ConnectionMatrix:
    """Zero-range limit ``[[chi, 0], [g, 1/chi]]`` of the transfer matrix."""

    chi: float
    g: float

    def __post_init__(self):
        if self.chi == 0 or not math.isfinite(self.chi):
            raise DomainError("connection matrix needs a finite nonzero chi")

    def as_transfer_matrix(self) -> TransferMatrix:
        return TransferMatrix(self.chi, 0.0, self.g, 1.0 / self.chi)

    def transmissibility(self, k: float) -> float:
        """``4 / (4 + (chi - 1/chi)^2 + g^2/k^2)``."""
        return 4.0 / (4.0 + (self.chi - 1.0 / self.chi) ** 2 + (self.g / k) ** 2)


@dataclass(frozen=True)
class BoundState:
    kappa: float

    @property
    def energy(self) -> float:
        return -self.kappa**2


@dataclass(frozen=True)
class ProbePoint:
    epsilon: float
    matrix: TransferMatrix
    T2: float


def wavenumbers(E: float, lam: float, eta: float, heights: Sequence[float]) -> Wavenumbers:
    """Principal square roots of ``E - lam*h1``, ``E - lam*h2``, ``E - eta*h - lam*h3``."""
    h, h1, h2, h3 = heights
    return Wavenumbers(
        p=cmath.sqrt(E - lam * h1),
        q=cmath.sqrt(E - lam * h2),
        s=cmath.sqrt(E - eta * h - lam * h3),
        E=E,
    )


def _cos(z: complex, w: float) -> complex:
    return cmath.cos(z * w)


def _sinc(z: complex, w: float) -> complex:
    """``sin(z w) / z`` with the z -> 0 limit ``w``."""
    zw = z * w
    if abs(zw) < _TAYLOR_CUTOFF:
        return w * (1.0 - zw * zw / 6.0)
    return cmath.sin(zw) / z


def _zsin(z: complex, w: float) -> complex:
    return z * cmath.sin(z * w)


def closed_form_lambda(wn: Wavenumbers, widths: Sequence[float]) -> TransferMatrix:
    """Closed-form transfer matrix across the three slabs.

    ``widths`` is ``(l, rho, r)``. The expressions are the four products of
    the left (p), middle (s) and right (q) slab propagators written out in
    terms of ``cos``, ``sin(.)/z`` and ``z sin(.)`` so that every entry is
    even in each wavenumber and free of 0/0 at vanishing wavenumbers.
    """
    l, rho, r = widths
    if min(l, rho, r) < 0:
        raise DomainError("slab widths must be non-negative")
    p, q, s = wn.p, wn.q, wn.s

    try:
        cp, cq, cs = _cos(p, l), _cos(q, r), _cos(s, rho)
        sp, sq, ss = _sinc(p, l), _sinc(q, r), _sinc(s, rho)  # sin(.)/z
        zp, zq, zs = _zsin(p, l), _zsin(q, r), _zsin(s, rho)  # z sin(.)
    except OverflowError:
        raise DomainError("transfer matrix overflows; increase epsilon or reduce the coupling") from None

    l11 = (cp * cq - zp * sq) * cs - (zp * cq * ss + cp * sq * zs)
    l12 = (sp * cq + cp * sq) * cs + (cp * cq * ss - sp * sq * zs)
    l21 = -(zp * cq + cp * zq) * cs - (cp * cq * zs - zp * zq * ss)
    l22 = (cp * cq - sp * zq) * cs - (sp * cq * zs + cp * zq * ss)
    return _finite(TransferMatrix(l11, l12, l21, l22))


def _finite(m: TransferMatrix) -> TransferMatrix:
    if not all(cmath.isfinite(x) for x in (m.l11, m.l12, m.l21, m.l22)):
        raise DomainError("transfer matrix overflows; increase epsilon or reduce the coupling")
    return m


def slab_matrix(E: float, height: float, width: float) -> TransferMatrix:
    """Propagator of ``(psi, psi')`` across one constant slab."""
    kappa = cmath.sqrt(E - height)
    kw = kappa * width
    try:
        c = cmath.cos(kw)
        if abs(kw) < _TAYLOR_CUTOFF:
            sinc = width * (1.0 - kw * kw / 6.0)
        else:
            sinc = cmath.sin(kw) / kappa
    except OverflowError:
        raise DomainError("slab propagator overflows") from None
    return _finite(TransferMatrix(c, sinc, -kappa * kappa * sinc, c))


def compose_lambda(potential: PiecewisePotential, E: float) -> TransferMatrix:
    """Slab-by-slab product, applied left (x1) to right (x2)."""
    total = TransferMatrix.identity()
    for rect in potential.rectangles:
        total = slab_matrix(E, rect.height, rect.width) @ total
    return total


def scattering(matrix: TransferMatrix, k: float, x1: float = 0.0, x2: float = 0.0) -> ScatteringResult:
    """Reflection and transmission for a wave incident from the left.

    ``R`` is referred to the left edge ``x1``; ``T`` carries the phase
    ``exp(-i k (x2 - x1))``. Only the amplitude phases depend on that
    convention.
    """
    if not k > 0:
        raise DomainError("scattering needs k > 0")
    a, b, c, d = matrix.l11, matrix.l12, matrix.l21, matrix.l22
    delta = a + d - 1j * (k * b - c / k)
    if delta == 0:
        raise SingularScattering("vanishing denominator in the scattering amplitudes")
    R = -(a - d + 1j * (k * b + c / k)) / delta
    T = 2.0 / delta * cmath.exp(-1j * k * (x2 - x1))

    u = (a - d).real
    v = (k * b + c / k).real
    if matrix.max_imag <= 1e-12 * max(1.0, abs(a), abs(b), abs(c), abs(d)):
        denom = 4.0 + u * u + v * v
        T2 = 4.0 / denom
        R2 = (u * u + v * v) / denom
    else:
        T2 = abs(T) ** 2
        R2 = abs(R) ** 2
    residual = abs(R) ** 2 + abs(T) ** 2 - 1.0
    return ScatteringResult(R, T, R2, T2, residual, u, v)


def bound_state(conn: ConnectionMatrix) -> Optional[BoundState]:
    """Decaying solution of the point interaction, if any.

    Matching ``A e^{kappa x}`` to ``B e^{-kappa x}`` through the connection
    matrix gives ``kappa = -g / (chi + 1/chi)``; only ``kappa > 0`` is
    normalizable.
    """
    if conn.chi == 0:
        raise DomainError("chi must be nonzero")
    kappa = -conn.g / (conn.chi + 1.0 / conn.chi)
    return BoundState(kappa) if kappa > 0 else None


def bound_state_residual(matrix: TransferMatrix, kappa: float) -> complex:
    """Compatibility ``L21 + kappa (L11 + L22) + kappa^2 L12`` at E = -kappa^2.

    Vanishes exactly when ``e^{kappa x}`` on the left continues into
    ``e^{-kappa x}`` on the right.
    """
    return matrix.l21 + kappa * (matrix.l11 + matrix.l22) + kappa**2 * matrix.l12


def finite_bound_state(params: RegularizationParams, lam: float, eta: float, bracket: tuple[float, float]) -> float:
    """Self-consistent ``kappa`` of the finite-range potential inside ``bracket``."""
    from scipy.optimize import brentq

    if lam == 0:
        raise DomainError("lambda must be nonzero")
    g = geometry(params)

    def f(kappa):
        wn = wavenumbers(-(kappa**2), lam, eta, g.heights)
        return bound_state_residual(closed_form_lambda(wn, g.widths), kappa).real

    return brentq(f, *bracket, xtol=1e-14, rtol=1e-14)


def transfer_matrix(params: RegularizationParams, lam: float, eta: float, E: float) -> TransferMatrix:
    g = geometry(params)
    return closed_form_lambda(wavenumbers(E, lam, eta, g.heights), g.widths)


def epsilon_limit_probe(
    params: RegularizationParams,
    lam: float,
    eta: float,
    k: float,
    epsilon_ladder: Sequence[float],
) -> list[ProbePoint]:
    """Transfer matrix and transmissibility down a decreasing epsilon ladder."""
    ladder = [float(e) for e in epsilon_ladder]
    if any(b >= a for a, b in zip(ladder, ladder[1:])):
        raise DomainError("epsilon ladder must be strictly decreasing")
    out = []
    for eps in ladder:
        m = transfer_matrix(dataclasses.replace(params, epsilon=eps), lam, eta, k * k)
        out.append(ProbePoint(eps, m, scattering(m, k).T2))
    return out


def shooting_transmission(potential: PiecewisePotential, k: float, steps: int = 100_000) -> float:
    """``|T|^2`` by direct RK4 integration of the Schroedinger equation.

    Starts from the transmitted wave ``exp(i k x)`` at the right edge,
    integrates ``psi'' = (V - k^2) psi`` back to the left edge and reads off
    the incident amplitude. The total number of fixed steps is at least
    ``steps``, split over the rectangles in proportion to their widths.
    """
    x1, x2 = potential.support
    E = k * k
    psi = cmath.exp(1j * k * x2)
    dpsi = 1j * k * psi
    span = x2 - x1
    for rect in reversed(potential.rectangles):
        n = max(1, math.ceil(steps * rect.width / span))
        h = -rect.width / n
        w = rect.height - E
        for _ in range(n):
            k1p, k1d = dpsi, w * psi
            k2p, k2d = dpsi + 0.5 * h * k1d, w * (psi + 0.5 * h * k1p)
            k3p, k3d = dpsi + 0.5 * h * k2d, w * (psi + 0.5 * h * k2p)
            k4p, k4d = dpsi + h * k3d, w * (psi + h * k3p)
            psi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
            dpsi += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)
    incident = 0.5 * (psi + dpsi / (1j * k)) * cmath.exp(-1j * k * x1)
    return 1.0 / abs(incident) ** 2
