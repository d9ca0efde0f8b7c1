"""Quadrature toolkit for measures on the unit circle.

Three integration regimes show up throughout the package:

* smooth periodic integrands on the full circle -> periodic trapezoid
  (spectrally accurate);
* densities supported on arcs with square-root vanishing at the edges ->
  the substitution theta = a + (b-a) sin^2(u/2) turns the integrand into
  a function with even analytic extension at both ends of [0, pi], so the
  trapezoid rule in u is again spectral;
* integrands with logarithmic singularities at known angles -> either
  subtract c * log(2 - 2cos(theta - theta0)) (which integrates to zero
  over the circle) and integrate the smooth remainder, or fall back to
  adaptive Gauss-Kronrod with explicit breakpoints.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureConfig:
    """Node budget and singularity handling for circle/arc integrals."""

    nodes: int = 2048
    edge_substitution: bool = True
    log_split: bool = True

    def __post_init__(self) -> None:
        if self.nodes < 64:
            raise ValueError(f"quadrature node count must be >= 64, got {self.nodes}")
        if self.nodes & (self.nodes - 1):
            raise ValueError(f"quadrature node count must be a power of two, got {self.nodes}")


DEFAULT_QUAD = QuadratureConfig()


def circle_nodes(cfg: QuadratureConfig = DEFAULT_QUAD, offset: bool = False) -> tuple[np.ndarray, float]:
    """Equispaced angles on [0, 2pi) and the common trapezoid weight.

    With ``offset=True`` the grid is shifted by half a step, which dodges
    integrand singularities sitting at rational multiples of pi.
    """
    n = cfg.nodes
    shift = 0.5 if offset else 0.0
    theta = (np.arange(n) + shift) * (TWO_PI / n)
    return theta, TWO_PI / n


def integrate_circle(f: Callable[[np.ndarray], np.ndarray],
                     cfg: QuadratureConfig = DEFAULT_QUAD,
                     offset: bool = False) -> float | complex:
    """Integral of f(theta) d(theta) over [0, 2pi) by periodic trapezoid."""
    theta, w = circle_nodes(cfg, offset=offset)
    vals = np.asarray(f(theta))
    total = w * vals.sum()
    return complex(total) if np.iscomplexobj(vals) else float(total)


def integrate_circle_logsplit(f: Callable[[np.ndarray], np.ndarray],
                              log_zeros: Sequence[tuple[float, float]],
                              cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Circle integral of f with log singularities of known strength.

    ``log_zeros`` lists pairs (theta0, c) such that
    f(theta) - c * log(2 - 2 cos(theta - theta0)) is smooth near theta0.
    Each subtracted model integrates to zero over the circle (Jensen), so
    the returned value is still the integral of f itself.
    """
    if not log_zeros or not cfg.log_split:
        return float(integrate_circle(f, cfg, offset=True))
    theta, w = circle_nodes(cfg, offset=True)
    vals = np.asarray(f(theta), dtype=float)
    for theta0, c in log_zeros:
        vals = vals - c * np.log(2.0 - 2.0 * np.cos(theta - theta0))
    return float(w * vals.sum())


def arc_nodes(a: float, b: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on the arc [a, b] adapted to sqrt-edge densities.

    Uses theta = a + (b-a) sin^2(u/2) with a trapezoid grid in u; the
    Jacobian (b-a)/2 sin(u) is folded into the weights.  Exact edge nodes
    carry zero weight for sqrt-vanishing integrands, so the endpoints are
    simply dropped.
    """
    if not b > a:
        raise ValueError(f"empty arc [{a}, {b}]")
    n = cfg.nodes
    u = np.linspace(0.0, np.pi, n + 1)[1:-1]
    theta = a + (b - a) * np.sin(u / 2.0) ** 2
    w = (np.pi / n) * (b - a) / 2.0 * np.sin(u)
    return theta, w


def integrate_arc(f: Callable[[np.ndarray], np.ndarray],
                  a: float,
                  b: float,
                  cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of f over [a, b]; spectral when f has sqrt edges at a and b."""
    if cfg.edge_substitution:
        theta, w = arc_nodes(a, b, cfg)
        return float(np.sum(w * np.asarray(f(theta), dtype=float)))
    x, gw = np.polynomial.legendre.leggauss(cfg.nodes)
    theta = 0.5 * (b - a) * x + 0.5 * (a + b)
    return float(0.5 * (b - a) * np.sum(gw * np.asarray(f(theta), dtype=float)))


def integrate_arcs(f: Callable[[np.ndarray], np.ndarray],
                   arcs: Sequence[tuple[float, float]],
                   cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Sum of arc integrals; full-circle arcs route to the periodic rule."""
    total = 0.0
    for a, b in arcs:
        if abs((b - a) - TWO_PI) <= 1e-12:
            total += float(integrate_circle(f, cfg, offset=True))
        else:
            total += integrate_arc(f, a, b, cfg)
    return total


def integrate_adaptive(f: Callable[[float], float],
                       a: float,
                       b: float,
                       points: Sequence[float] = (),
                       tol: float = 1e-11) -> float:
    """Adaptive Gauss-Kronrod integral, robust to integrable singularities.

    ``points`` marks interior break angles (log singularities, support
    edges).  This is the independent oracle used to cross-check the
    spectral rules and closed forms.
    """
    interior = sorted(p for p in points if a < p < b)
    if interior:
        val, _ = integrate.quad(f, a, b, points=interior, limit=400,
                                epsabs=tol, epsrel=tol)
    else:
        val, _ = integrate.quad(f, a, b, limit=400, epsabs=tol, epsrel=tol)
    return float(val)
