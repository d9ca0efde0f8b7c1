"""Equilibrium measures for the three one-parameter families.

Phase diagram implemented here (coupling g, potential from
``potentials.FAMILY_POTENTIALS``):

* (1,0)  g cos(theta):            ungapped for |g| <= 1, one-cut outside;
  arc [pi - theta_g, pi + theta_g] for g > 1 with sin^2(theta_g/2) = 1/g.
* (1,1)  (g/2) cos(2 theta):      ungapped for |g| <= 1, two-cut outside;
  for g > 1 two arcs around +-pi/2 with cos^2(gamma_c) = 1/g, for g < -1
  two arcs around 0 and pi with sin^2(alpha_c) = 1/|g|.  (The doubling map
  theta -> 2 theta reduces both to the one-cut (1,0) law, which fixes the
  squares in the endpoint equations and makes the densities normalized.)
* (2,0)  (4g/3) cos - (g/6) cos 2: ungapped for -3/5 <= g <= 1, one-cut
  outside, endpoints from cos^4(theta_c/2) = 1 - 1/g (g > 1) or
  (8/3) cos^2 - cos^4 = 5/3 + 1/g (g < -3/5).

Support arcs are stored as raw intervals (a, b) with b > a; an arc may
cross theta = 0 so that square-root edges sit at true endpoints.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import bisect

from .opuc import ACMeasure, CircleMeasure, DiscreteMeasure, MixedMeasure, \
    VerblunskySeq, register_family, verblunsky_from_density
from .potentials import FAMILY_POTENTIALS, LaurentPotential
from .quadrature import TWO_PI, DEFAULT_QUAD, QuadratureConfig, arc_nodes, \
    integrate_adaptive, integrate_arc, integrate_circle

FAMILIES = ("10", "11", "20")
ENDPOINT_XTOL = 1e-14


class GappedPhaseError(ValueError):
    """The trigonometric-polynomial density formula went negative."""


def _wrap_into(theta, a: float, b: float) -> np.ndarray:
    """Map angles into [a, a + 2pi); the arc (a, b) sits inside that window."""
    theta = np.asarray(theta, dtype=float)
    return a + np.mod(theta - a, TWO_PI)


def _sqrt_clip(x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.clip(x, 0.0, None))


@dataclass(frozen=True, eq=False)
class EquilibriumModel:
    """One of the (1,0)/(1,1)/(2,0) equilibrium measures at coupling g."""

    family: str
    g: float
    phase: str                       # ungapped | one-cut | two-cut
    support: tuple[tuple[float, float], ...]
    density: object                  # callable theta -> rho(theta)
    robin_shift: float               # Euler-Lagrange level 2 xi_V of J_V on the support
    potential: LaurentPotential
    log_zeros: tuple[tuple[float, int], ...] = ()

    def measure(self) -> ACMeasure:
        return ACMeasure(density=self.density, arcs=self.support,
                         family="equilibrium",
                         params={"family": self.family, "g": self.g},
                         log_zeros=self.log_zeros)

    @cached_property
    def reference_coeffs(self) -> VerblunskySeq:
        """Coefficients of mu_V: closed form for (1,0), numeric otherwise."""
        return reference_coefficients(self, 64)

    def endpoint_residual(self) -> float:
        """Residual of the defining equation at the stored support endpoints."""
        g = self.g
        if self.phase == "ungapped":
            return 0.0
        if self.family == "10":
            theta_g = self.support[0][1] - math.pi if g > 1 else self.support[0][1]
            return abs(math.sin(theta_g / 2.0) ** 2 - 1.0 / abs(g))
        if self.family == "11":
            if g > 1:
                gamma_c = self.support[0][0]
                return abs(math.cos(gamma_c) ** 2 - 1.0 / g)
            alpha_c = self.support[0][1]
            return abs(math.sin(alpha_c) ** 2 - 1.0 / abs(g))
        theta_c = self.support[0][1] - math.pi if g > 1 else self.support[0][1]
        c2 = math.cos(theta_c / 2.0) ** 2
        if g > 1:
            return abs(c2 * c2 - (1.0 - 1.0 / g))
        return abs((8.0 / 3.0) * c2 - c2 * c2 - (5.0 / 3.0 + 1.0 / g))

    def contains_angle(self, theta: float, margin: float = 0.0) -> bool:
        for a, b in self.support:
            t = a + float(np.mod(theta - a, TWO_PI))
            if a - margin <= t <= b + margin:
                return True
        return False


def _ungapped_density(family: str, g: float):
    if family == "10":
        return lambda th: (1.0 - g * np.cos(th)) / TWO_PI
    if family == "11":
        return lambda th: (1.0 - g * np.cos(2.0 * np.asarray(th))) / TWO_PI
    return lambda th: (1.0 - (4.0 * g / 3.0) * np.cos(th)
                       + (g / 3.0) * np.cos(2.0 * np.asarray(th))) / TWO_PI


def _ungapped_log_zeros(family: str, g: float) -> tuple[tuple[float, int], ...]:
    eps = 1e-13
    if family == "10":
        if abs(g - 1.0) <= eps:
            return ((0.0, 1),)
        if abs(g + 1.0) <= eps:
            return ((math.pi, 1),)
    elif family == "11":
        if abs(g - 1.0) <= eps:
            return ((0.0, 1), (math.pi, 1))
        if abs(g + 1.0) <= eps:
            return ((math.pi / 2.0, 1), (3.0 * math.pi / 2.0, 1))
    else:
        if abs(g - 1.0) <= eps:
            return ((0.0, 2),)
        if abs(g + 0.6) <= eps:
            return ((math.pi, 1),)
    return ()


def build_model(family: str, g: float, quad: QuadratureConfig = DEFAULT_QUAD) -> EquilibriumModel:
    """Equilibrium model with phase detection, support arcs, and Robin level.

    Couplings exactly at a phase boundary are assigned to the (closed)
    ungapped branch.
    """
    family = str(family)
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    g = float(g)
    pot = FAMILY_POTENTIALS[family](g)

    ungapped = (abs(g) <= 1.0) if family in ("10", "11") else (-0.6 <= g <= 1.0)
    if ungapped:
        model = EquilibriumModel(family=family, g=g, phase="ungapped",
                                 support=((0.0, TWO_PI),),
                                 density=_ungapped_density(family, g),
                                 robin_shift=0.0, potential=pot,
                                 log_zeros=_ungapped_log_zeros(family, g))
    elif family == "10":
        theta_g = bisect(lambda t: math.sin(t / 2.0) ** 2 - 1.0 / abs(g),
                         1e-12, math.pi, xtol=ENDPOINT_XTOL)
        c2 = math.cos(theta_g / 2.0) ** 2
        if g > 1:
            arc = (math.pi - theta_g, math.pi + theta_g)
            density = lambda th: (g / math.pi) * np.sin(_wrap_into(th, *arc) / 2.0) \
                * _sqrt_clip(np.sin(_wrap_into(th, *arc) / 2.0) ** 2 - c2)
        else:
            arc = (-theta_g, theta_g)
            density = lambda th: (abs(g) / math.pi) * np.cos(_wrap_into(th, *arc) / 2.0) \
                * _sqrt_clip((1.0 - c2) - np.sin(_wrap_into(th, *arc) / 2.0) ** 2)
        model = EquilibriumModel(family=family, g=g, phase="one-cut", support=(arc,),
                                 density=density, robin_shift=0.0, potential=pot)
    elif family == "11":
        if g > 1:
            gamma_c = bisect(lambda t: math.cos(t) ** 2 - 1.0 / g,
                             1e-12, math.pi / 2.0 - 1e-12, xtol=ENDPOINT_XTOL)
            arcs = ((gamma_c, math.pi - gamma_c),
                    (math.pi + gamma_c, TWO_PI - gamma_c))
            c2 = math.cos(gamma_c) ** 2
            density = lambda th: (g / math.pi) * np.abs(np.sin(th)) \
                * _sqrt_clip(c2 - np.cos(np.asarray(th)) ** 2)
        else:
            alpha_c = bisect(lambda t: math.sin(t) ** 2 - 1.0 / abs(g),
                             1e-12, math.pi / 2.0 - 1e-12, xtol=ENDPOINT_XTOL)
            arcs = ((-alpha_c, alpha_c), (math.pi - alpha_c, math.pi + alpha_c))
            s2 = math.sin(alpha_c) ** 2
            density = lambda th: (abs(g) / math.pi) * np.abs(np.cos(th)) \
                * _sqrt_clip(s2 - np.sin(np.asarray(th)) ** 2)
        model = EquilibriumModel(family=family, g=g, phase="two-cut", support=arcs,
                                 density=density, robin_shift=0.0, potential=pot)
    else:
        if g > 1:
            theta_c = bisect(lambda t: math.cos(t / 2.0) ** 4 - (1.0 - 1.0 / g),
                             1e-12, math.pi, xtol=ENDPOINT_XTOL)
            arc = (math.pi - theta_c, math.pi + theta_c)
            c2 = math.cos(theta_c / 2.0) ** 2

            def density(th, _arc=arc, _c2=c2, _g=g):
                t = _wrap_into(th, *_arc)
                s = np.sin(t / 2.0)
                return (2.0 * _g / (3.0 * math.pi)) * s * (1.0 + _c2 - np.cos(t)) \
                    * _sqrt_clip(s ** 2 - _c2)
        else:
            theta_c = bisect(
                lambda t: (8.0 / 3.0) * math.cos(t / 2.0) ** 2 - math.cos(t / 2.0) ** 4
                - (5.0 / 3.0 + 1.0 / g),
                1e-12, math.pi, xtol=ENDPOINT_XTOL)
            arc = (-theta_c, theta_c)
            s2 = math.sin(theta_c / 2.0) ** 2

            def density(th, _arc=arc, _s2=s2, _g=g):
                t = _wrap_into(th, *_arc)
                return (2.0 * abs(_g) / (3.0 * math.pi)) * np.cos(t / 2.0) \
                    * (2.0 + _s2 - np.cos(t)) * _sqrt_clip(_s2 - np.sin(t / 2.0) ** 2)
        model = EquilibriumModel(family=family, g=g, phase="one-cut", support=(arc,),
                                 density=density, robin_shift=0.0, potential=pot)

    shift = _robin_level(model, quad)
    object.__setattr__(model, "robin_shift", shift)
    return model


def equilibrium_from_potential(pot: LaurentPotential) -> ACMeasure:
    """Ungapped equilibrium density (1 - g sum l v_l cos(l theta)) / 2pi.

    Raises GappedPhaseError (naming the first sign change) when the
    formula goes negative, i.e. outside the ungapped phase.
    """
    def density(th):
        th = np.asarray(th, dtype=float)
        out = np.ones_like(th)
        for l, vl in enumerate(pot.v, start=1):
            out = out - pot.g * l * vl * np.cos(l * th)
        return out / TWO_PI

    grid = np.linspace(0.0, TWO_PI, 8192, endpoint=False)
    vals = density(grid)
    if vals.min() < -1e-12:
        theta_bad = float(grid[int(np.argmin(vals >= 0))])
        raise GappedPhaseError(
            f"density goes negative near theta = {theta_bad:.6f}; potential is in a gapped phase")
    return ACMeasure(density=density, family="polynomial-equilibrium",
                     params={"v": list(pot.v), "g": pot.g})


# --------------------------------------------------------------------------
# logarithmic potential and Euler-Lagrange machinery
# --------------------------------------------------------------------------

def _log_kernel(phi: np.ndarray, theta: float) -> np.ndarray:
    return 0.5 * np.log(np.clip(2.0 - 2.0 * np.cos(phi - theta), 1e-300, None))


def log_potential(mu: CircleMeasure, theta: float,
                  quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """int log|e^{i theta} - zeta| dmu(zeta).

    On-support angles integrate the log singularity adaptively in the
    edge-desingularized variable; off-support arcs use the spectral rule.
    """
    theta = float(theta)
    if isinstance(mu, DiscreteMeasure):
        return float(np.sum(mu.weights * _log_kernel(mu.angles, theta)))
    total = 0.0
    for a, b in mu.arcs:
        t = a + float(np.mod(theta - a, TWO_PI))
        inside = a + 1e-12 < t < b - 1e-12
        full_circle = abs((b - a) - TWO_PI) <= 1e-12
        if full_circle:
            total += integrate_adaptive(
                lambda p: float(mu.density(np.array([p]))[0] * _log_kernel(np.array([p]), theta)[0]),
                0.0, TWO_PI, points=[theta % TWO_PI])
        elif inside:
            u0 = 2.0 * math.asin(math.sqrt(min(max((t - a) / (b - a), 0.0), 1.0)))

            def integrand(u: float) -> float:
                phi = a + (b - a) * math.sin(u / 2.0) ** 2
                jac = 0.5 * (b - a) * math.sin(u)
                return float(mu.density(np.array([phi]))[0]
                             * _log_kernel(np.array([phi]), theta)[0] * jac)

            total += integrate_adaptive(integrand, 0.0, math.pi, points=[u0])
        else:
            total += integrate_arc(
                lambda p: np.asarray(mu.density(p), dtype=float) * _log_kernel(p, theta),
                a, b, quad)
    if isinstance(mu, MixedMeasure):
        total += float(np.sum(mu.atom_weights * _log_kernel(mu.atom_angles, theta)))
    return total


def effective_j(model: EquilibriumModel, theta: float,
                quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """J_V(theta) = V(theta) - 2 int log|e^{i theta} - zeta| dmu_V."""
    return float(model.potential(theta)) - 2.0 * log_potential(model.measure(), theta, quad)


def _robin_level(model: EquilibriumModel, quad: QuadratureConfig) -> float:
    """On-support median of J_V; quadrature-noise-robust stand-in for 2 xi_V."""
    vals = []
    for a, b in model.support:
        for frac in np.linspace(0.25, 0.75, 7):
            vals.append(effective_j(model, a + frac * (b - a), quad))
    return float(np.median(vals))


def effective_potential(model: EquilibriumModel, theta: float,
                        quad: QuadratureConfig = DEFAULT_QUAD) -> float:
    """F_V(theta) = J_V(theta) - inf J_V, clipped at zero from below."""
    val = effective_j(model, theta, quad) - model.robin_shift
    if val < -1e-9:
        warnings.warn(f"effective potential {val:.3e} below -1e-9 at theta = {theta}; clipping")
    return max(val, 0.0)


# --------------------------------------------------------------------------
# reference coefficients
# --------------------------------------------------------------------------

def gw_coefficients(g: float, n: int) -> VerblunskySeq:
    """Verblunsky coefficients of the (1,0) equilibrium measure.

    Ungapped |g| < 1: alpha_k = -(x+ - x-)/(x+^{k+2} - x-^{k+2}) with
    x+- = 1/g +- sqrt(1/g^2 - 1), evaluated in the overflow-free form
    -(x+ - x-) x+^{-(k+2)} / (1 - (x-/x+)^{k+2}).  At |g| = 1 the limit is
    -1/(k+2) (up to the sign pattern for g = -1).  Gapped g > 1:
    alpha_k = 1 - (2/(1+q)) (1-q^{k+3})/(1-q^{k+2}), q = (sqrt g - sqrt(g-1))^2;
    g < -1 follows from the rotation rule alpha_k(-g) = (-1)^{k+1} alpha_k(g).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    k = np.arange(n)
    if g == 0.0 or n == 0:
        coeffs = np.zeros(n, dtype=complex)
    elif abs(abs(g) - 1.0) <= 1e-15:
        coeffs = -1.0 / (k + 2.0)
        if g < 0:
            coeffs = coeffs * (-1.0) ** (k + 1)
    elif abs(g) < 1.0:
        s = math.sqrt(1.0 - g * g)
        x_plus = (1.0 + s) / g
        x_minus = (1.0 - s) / g
        r = x_minus / x_plus
        coeffs = -(x_plus - x_minus) * x_plus ** (-(k + 2.0)) / (1.0 - r ** (k + 2.0))
    else:
        ga = abs(g)
        q = (math.sqrt(ga) - math.sqrt(ga - 1.0)) ** 2
        coeffs = 1.0 - (2.0 / (1.0 + q)) * (1.0 - q ** (k + 3.0)) / (1.0 - q ** (k + 2.0))
        if g < 0:
            coeffs = coeffs * (-1.0) ** (k + 1)
    return VerblunskySeq(tuple(complex(c) for c in np.atleast_1d(coeffs)[:n]))


def reference_coefficients(model: EquilibriumModel, n: int,
                           quad: QuadratureConfig = DEFAULT_QUAD) -> VerblunskySeq:
    """Coefficients of mu_V: closed form for (1,0), quadrature otherwise.

    Symmetric densities give real coefficients; no parity pattern is
    assumed for the (1,1) family (its even-index structure is left as an
    observation, not an assertion).
    """
    if model.family == "10":
        return gw_coefficients(model.g, n)
    return verblunsky_from_density(model.measure(), n, quad)


register_family("equilibrium",
                lambda params: build_model(params["family"], params["g"]).measure())
register_family("polynomial-equilibrium",
                lambda params: equilibrium_from_potential(
                    LaurentPotential(tuple(params["v"]), g=params["g"])))
