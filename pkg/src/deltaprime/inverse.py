"""Design of a finite-range potential that transmits at a chosen coupling.

Given a target ``lambda_bar``, a transparency set and ``varsigma``, the
designer solves the set's equation for the free constant, fills the coupled
constants and returns a concrete three-slab potential. A transmission scan
over ``lambda`` then checks that the resonance sits where it should.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, InfeasibleTarget, VerificationFailed
from .potential import Geometry, PiecewisePotential, RegularizationParams, build_total_potential, geometry
from .transfer import (
    ConnectionMatrix,
    TransferMatrix,
    Wavenumbers,
    closed_form_lambda,
    scattering,
    wavenumbers,
)
from .transparency import (
    TransparencyRoot,
    TransparencySet,
    chi,
    coupled_constants,
    g_value,
    residual,
    solve_roots,
    varsigma_for,
)

DEFAULT_SAMPLES = 2000
PEAK_XTOL = 1e-6


@dataclass(frozen=True)
class InverseDesign:
    target_lambda: float
    set: TransparencySet
    varsigma: float
    eta: float
    root: TransparencyRoot
    constants: tuple[float, float, float, float]
    exponents: tuple[float, float, float]
    epsilon: float
    params: RegularizationParams = field(repr=False)

    @property
    def geometry(self) -> Geometry:
        return geometry(self.params)

    def potential(self, lam: Optional[float] = None) -> PiecewisePotential:
        """Three-slab potential probed at coupling ``lam`` (default: target)."""
        return build_total_potential(self.params, self.target_lambda if lam is None else lam, self.eta)

    def wavenumbers(self, lam: float, k: float) -> Wavenumbers:
        return wavenumbers(k * k, lam, self.eta, self.geometry.heights)

    def matrix(self, lam: float, k: float = 1.0) -> TransferMatrix:
        return closed_form_lambda(self.wavenumbers(lam, k), self.geometry.widths)

    def transmissibility(self, lam: float, k: float = 1.0) -> float:
        return scattering(self.matrix(lam, k), k).T2

    def to_record(self) -> dict:
        g = self.geometry
        return {
            "set": self.set.value,
            "target_lambda": self.target_lambda,
            "varsigma": self.varsigma,
            "eta": self.eta,
            "epsilon": self.epsilon,
            "root_index": self.root.root_index,
            "root_value": self.root.root_value,
            "root_residual": self.root.residual,
            "exponents": {"mu": self.exponents[0], "nu": self.exponents[1], "tau": self.exponents[2]},
            "constants": dict(zip(("c0", "c1", "c2", "c3"), self.constants)),
            "geometry": {"l": g.l, "rho": g.rho, "r": g.r, "h": g.h, "h1": g.h1, "h2": g.h2, "h3": g.h3},
        }


@dataclass(frozen=True)
class ResonanceReport:
    """Outcome of a transmission scan around the target coupling.

    ``limit_T2`` is the zero-range prediction with both ``chi`` and ``g``;
    ``envelope_T2`` drops the ``g`` term and is the height of a pure
    ``chi`` resonance.
    """

    scan: list[tuple[float, float]]
    peak_lambda: float
    peak_T2: float
    limit_T2: float
    envelope_T2: float
    k: float

    def relative_position_error(self, target: float) -> float:
        return abs(self.peak_lambda - target) / abs(target)

    def relative_height_error(self, use_g: bool = False) -> float:
        ref = self.limit_T2 if use_g else self.envelope_T2
        return abs(self.peak_T2 - ref) / ref


def design(
    target_lambda: float,
    set_,
    varsigma: float = 1.0,
    eta: float = 0.0,
    free: Optional[dict] = None,
    exponents: Optional[Sequence[float]] = None,
    epsilon: float = 1e-4,
    root_index: int = 1,
    search_max: float = 1e3,
) -> InverseDesign:
    """Regularizing potential resonantly transparent at ``target_lambda``.

    For ``T0``..``T3`` the ``root_index``-th root of the reduced equation
    fixes ``c0`` (or ``b``); for ``T4``..``T6`` the equation fixes
    ``varsigma`` and the supplied one is replaced. ``free`` holds the
    constants left open by the set (defaults 1). ``exponents`` default to a
    representative point of the set's window.

    Raises:
        InfeasibleTarget: no root at the target, or no positive varsigma.
        DomainError: exponents outside the window, or bad arguments.
    """
    s = TransparencySet.parse(set_)
    lam = float(target_lambda)
    if lam == 0 or not math.isfinite(lam):
        raise DomainError("target lambda must be nonzero and finite")
    if root_index < 1:
        raise DomainError("root_index starts at 1")
    mu, nu, tau = tuple(float(e) for e in (exponents or s.canonical_exponents))
    if not s.in_window(mu, nu, tau):
        raise DomainError(f"exponents {(mu, nu, tau)} lie outside the {s.value} window")

    if s.solves_constant:
        roots = solve_roots(s, lam, varsigma, search_max=search_max, max_roots=root_index)
        if len(roots) < root_index:
            raise InfeasibleTarget(
                f"{s.value} has {len(roots)} root(s) at lambda={lam}, varsigma={varsigma}; "
                f"root {root_index} requested (lambda may be below the critical value)"
            )
        root = roots[root_index - 1]
        vs = varsigma
    else:
        if root_index != 1:
            raise DomainError(f"{s.value} has a single closed-form solution; root_index must be 1")
        vs = varsigma_for(s, lam)
        root = TransparencyRoot(s, lam, vs, None, 1, residual(s, lam, vs))

    constants = coupled_constants(s, lam, vs, root.root_value, free)
    params = RegularizationParams(
        mu=mu, nu=nu, tau=tau, a=(0.0, 0.0, 0.0), c=constants, varsigma=vs, epsilon=epsilon
    )
    geometry(params)  # surface overflow problems now rather than at scan time
    return InverseDesign(lam, s, vs, float(eta), root, tuple(constants), (mu, nu, tau), float(epsilon), params)


def predicted_connection(d: InverseDesign) -> ConnectionMatrix:
    """Zero-range ``(chi, g)`` of the design at its target coupling."""
    x = d.root.root_value
    c = chi(d.set, d.target_lambda, d.varsigma, x)
    g = g_value(d.set, d.target_lambda, d.eta, d.varsigma, x, d.constants, d.exponents)
    return ConnectionMatrix(c, g)


def default_window(target: float, width: float = 0.25) -> tuple[float, float]:
    lo, hi = target * (1 - width), target * (1 + width)
    return (min(lo, hi), max(lo, hi))


def scan_transmissibility(d: InverseDesign, k: float, lambdas) -> np.ndarray:
    return np.array([d.transmissibility(float(lam), k) for lam in lambdas])


def _v(d: InverseDesign, lam: float, k: float) -> float:
    m = d.matrix(lam, k)
    return (k * m.l12 + m.l21 / k).real


def verify_resonance(
    d: InverseDesign,
    k: float = 1.0,
    lambda_window: Optional[tuple[float, float]] = None,
    samples: int = DEFAULT_SAMPLES,
) -> ResonanceReport:
    """Scan ``|T|^2`` over a lambda window and locate the resonance.

    Candidate peaks are the sampled local maxima together with sign changes
    of ``v = k L12 + L21/k``, which stays smooth even when the peak is
    narrower than the sample spacing. Each candidate is refined with a
    bounded scalar maximization and the refined peak closest to the target
    is reported.

    Raises:
        DomainError: window not containing the target, or ``k <= 0``.
        VerificationFailed: no local maximum inside the window.
    """
    if not k > 0:
        raise DomainError("k must be positive")
    lo, hi = lambda_window if lambda_window is not None else default_window(d.target_lambda)
    if not lo < d.target_lambda < hi:
        raise DomainError(f"window ({lo}, {hi}) does not contain the target {d.target_lambda}")
    if samples < 3:
        raise DomainError("need at least 3 samples")

    lams = np.linspace(lo, hi, samples)
    t2 = np.empty(samples)
    v = np.empty(samples)
    for i, lam in enumerate(lams):
        res = scattering(d.matrix(float(lam), k), k)
        t2[i], v[i] = res.T2, res.v

    cand = set()
    for i in range(1, samples - 1):
        if t2[i] >= t2[i - 1] and t2[i] >= t2[i + 1] and (t2[i] > t2[i - 1] or t2[i] > t2[i + 1]):
            cand.add(i)
    for i in range(samples - 1):
        if v[i] == 0 or v[i] * v[i + 1] < 0:
            cand.add(i)

    peaks = []
    for i in sorted(cand):
        a, b = lams[max(i - 1, 0)], lams[min(i + 2, samples - 1)]
        opt = minimize_scalar(
            lambda x: -d.transmissibility(x, k), bounds=(a, b), method="bounded",
            options={"xatol": PEAK_XTOL},
        )
        x = float(opt.x)
        val = -float(opt.fun)
        # an interior maximum only; reject edges of the window
        if lo < x < hi and val >= max(d.transmissibility(x - 10 * PEAK_XTOL, k), d.transmissibility(x + 10 * PEAK_XTOL, k)):
            peaks.append((x, val))
    if not peaks:
        raise VerificationFailed(f"no local maximum of |T|^2 in ({lo}, {hi})")

    peak_lambda, peak_T2 = min(peaks, key=lambda p: abs(p[0] - d.target_lambda))
    conn = predicted_connection(d)
    envelope = 4.0 / (4.0 + (conn.chi - 1.0 / conn.chi) ** 2)
    return ResonanceReport(
        scan=list(zip(lams.tolist(), t2.tolist())),
        peak_lambda=peak_lambda,
        peak_T2=peak_T2,
        limit_T2=conn.transmissibility(k),
        envelope_T2=envelope,
        k=k,
    )
