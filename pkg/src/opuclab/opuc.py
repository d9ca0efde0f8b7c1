"""Finite-dimensional OPUC machinery.

Measures on the unit circle, their recursion (Verblunsky) coefficients,
the maps between the two representations, and the GGT / CMV matrix models
of multiplication by z.  Everything here is exact finite linear algebra
plus quadrature; the convention alpha_{-1} = -1 is wired into the matrix
builders and exposed read-only on coefficient sequences.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .quadrature import TWO_PI, DEFAULT_QUAD, QuadratureConfig, arc_nodes, circle_nodes

UNIT_CIRCLE_TOL = 1e-12     # |alpha| - 1 tolerance for "terminated"
ATOM_ANGLE_TOL = 1e-10      # angular tolerance for atom equality
MASS_TOL = 1e-12
WEIGHT_UNDERFLOW = 1e-14
PREDICTION_FLOOR = 1e-14    # honest stop: next recursion step is informationless


class DegenerateMeasureError(ValueError):
    """Measure does not determine the requested coefficients (duplicate atoms)."""


class InsufficientCoefficientsError(ValueError):
    """A matrix section was requested beyond the available coefficients."""


class IllConditionedError(RuntimeError):
    """Coefficient extraction lost positive-definiteness at some degree."""

    def __init__(self, degree: int, message: str):
        self.degree = degree
        super().__init__(f"{message} (failing degree {degree})")


def canonical_angle(theta):
    """Map angles to [0, 2pi)."""
    return np.mod(theta, TWO_PI)


# --------------------------------------------------------------------------
# coefficient sequences
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VerblunskySeq:
    """Finite sequence of Verblunsky coefficients.

    ``terminated`` means the last entry lies on the unit circle, i.e. the
    sequence encodes a measure with exactly ``len(coeffs)`` atoms.  All
    earlier entries must be in the open disk.
    """

    coeffs: tuple[complex, ...]
    terminated: bool = False
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        for k, c in enumerate(self.coeffs):
            mod = abs(c)
            last = k == len(self.coeffs) - 1
            if last and self.terminated:
                if abs(mod - 1.0) > UNIT_CIRCLE_TOL:
                    raise ValueError(
                        f"terminated sequence must end on the unit circle, got |alpha_{k}| = {mod}")
            elif mod >= 1.0:
                raise ValueError(f"|alpha_{k}| = {mod} >= 1 in the open-disk range")
        if self.terminated and not self.coeffs:
            raise ValueError("terminated sequence cannot be empty")

    @property
    def virtual_prefix(self) -> complex:
        return -1.0 + 0.0j

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def alpha(self, k: int) -> complex:
        """alpha_k with the alpha_{-1} = -1 convention."""
        if k == -1:
            return self.virtual_prefix
        return self.coeffs[k]

    def rho(self, k: int) -> float:
        r2 = 1.0 - abs(self.coeffs[k]) ** 2
        return math.sqrt(max(r2, 0.0))

    @property
    def first_unit_index(self) -> float:
        """N(alpha): index count to the first unit-modulus entry (inf if none)."""
        return float(len(self.coeffs)) if self.terminated else math.inf

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def prefix(self, n: int) -> "VerblunskySeq":
        if n > len(self.coeffs) or (self.terminated and n == len(self.coeffs)):
            raise ValueError("prefix must stay strictly inside the open-disk range")
        return VerblunskySeq(self.coeffs[:n], terminated=False)


def aleksandrov_rotate(alpha: VerblunskySeq, lam: complex) -> VerblunskySeq:
    """Coefficient-wise rotation alpha_k -> lam * alpha_k, |lam| = 1."""
    if abs(abs(lam) - 1.0) > UNIT_CIRCLE_TOL:
        raise ValueError(f"rotation parameter must be unimodular, got |lam| = {abs(lam)}")
    return VerblunskySeq(tuple(lam * c for c in alpha.coeffs), terminated=alpha.terminated)


# --------------------------------------------------------------------------
# measures
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Purely atomic probability measure on the circle."""

    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        angles = canonical_angle(np.asarray(self.angles, dtype=float))
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "weights", weights)
        if angles.shape != weights.shape or angles.ndim != 1 or angles.size == 0:
            raise ValueError("angles and weights must be matching nonempty 1-d arrays")
        if np.any(weights <= 0):
            raise ValueError("atom weights must be positive")
        if abs(weights.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"atom weights must sum to 1, got {weights.sum()}")

    @property
    def n_atoms(self) -> int:
        return self.angles.size

    def sorted(self) -> "DiscreteMeasure":
        order = np.argsort(self.angles)
        return DiscreteMeasure(self.angles[order], self.weights[order])


@dataclass(frozen=True, eq=False)
class ACMeasure:
    """Absolutely continuous measure: density on a list of closed arcs.

    Arcs are (a, b) with b > a; an arc may cross theta = 0 (a < 0 allowed)
    so that genuine square-root edges stay at genuine endpoints.  The
    density callable must accept numpy arrays and is zero off-arc by
    definition.  ``log_zeros`` records angles where the density vanishes
    (with the order of the zero) for log-aware entropy quadrature.
    """

    density: Callable[[np.ndarray], np.ndarray]
    arcs: tuple[tuple[float, float], ...] = ((0.0, TWO_PI),)
    family: str | None = None
    params: dict | None = None
    log_zeros: tuple[tuple[float, int], ...] = ()

    def __post_init__(self) -> None:
        arcs = tuple((float(a), float(b)) for a, b in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        for a, b in arcs:
            if not (b > a and b - a <= TWO_PI + 1e-12):
                raise ValueError(f"invalid arc ({a}, {b})")

    @property
    def full_support(self) -> bool:
        return len(self.arcs) == 1 and abs((self.arcs[0][1] - self.arcs[0][0]) - TWO_PI) <= 1e-12

    def mass(self, quad: QuadratureConfig = DEFAULT_QUAD) -> float:
        from .quadrature import integrate_arcs
        return integrate_arcs(self.density, self.arcs, quad)

    def contains_angle(self, theta: float, margin: float = 0.0) -> bool:
        """Whether theta (mod 2pi) lies in one of the closed arcs."""
        for a, b in self.arcs:
            t = a + float(np.mod(theta - a, TWO_PI))
            if a - margin <= t <= b + margin:
                return True
        return False


@dataclass(frozen=True, eq=False)
class MixedMeasure:
    """AC part plus finitely many atoms off the (open) arc interiors.

    ``density`` is the honest dmu_ac/dtheta, integrating to ``ac_mass``;
    atom weights carry the remaining 1 - ac_mass.
    """

    ac_mass: float
    density: Callable[[np.ndarray], np.ndarray]
    arcs: tuple[tuple[float, float], ...]
    atom_angles: np.ndarray
    atom_weights: np.ndarray
    family: str | None = None
    params: dict | None = None
    log_zeros: tuple[tuple[float, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple((float(a), float(b)) for a, b in self.arcs))
        angles = canonical_angle(np.asarray(self.atom_angles, dtype=float))
        weights = np.asarray(self.atom_weights, dtype=float)
        object.__setattr__(self, "atom_angles", angles)
        object.__setattr__(self, "atom_weights", weights)
        if not 0.0 < self.ac_mass < 1.0:
            raise ValueError(f"ac_mass must lie in (0, 1), got {self.ac_mass}")
        if np.any(weights <= 0):
            raise ValueError("atom weights must be positive")
        if abs(self.ac_mass + weights.sum() - 1.0) > MASS_TOL:
            raise ValueError("ac mass plus atom weights must total 1")
        for theta in angles:
            if self._in_open_interior(theta):
                raise ValueError(f"atom at {theta} lies inside the AC support")

    def _in_open_interior(self, theta: float) -> bool:
        for a, b in self.arcs:
            t = a + float(np.mod(theta - a, TWO_PI))
            if a + ATOM_ANGLE_TOL < t < b - ATOM_ANGLE_TOL:
                return True
        return False

    def contains_angle(self, theta: float, margin: float = 0.0) -> bool:
        for a, b in self.arcs:
            t = a + float(np.mod(theta - a, TWO_PI))
            if a - margin <= t <= b + margin:
                return True
        return False


CircleMeasure = DiscreteMeasure | ACMeasure | MixedMeasure


def uniform_measure() -> ACMeasure:
    return ACMeasure(density=lambda th: np.full_like(np.asarray(th, dtype=float), 1.0 / TWO_PI),
                     family="uniform", params={})


# --------------------------------------------------------------------------
# monic orthogonal polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonicOPState:
    """Coefficient vectors of Phi_k and Phi_k* with the running norm."""

    degree: int
    phi: np.ndarray        # Phi_k, coefficients low -> high, length k+1
    phi_star: np.ndarray
    norm_sq: float         # prod_{i<k} (1 - |alpha_i|^2)

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return _horner(self.phi, z)

    def evaluate_star(self, theta: np.ndarray) -> np.ndarray:
        z = np.exp(1j * np.asarray(theta, dtype=float))
        return _horner(self.phi_star, z)


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z, dtype=complex)
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def monic_polynomials(alpha: Sequence[complex]) -> MonicOPState:
    """Run the Szego recursion Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k*."""
    phi = np.array([1.0 + 0j])
    phis = np.array([1.0 + 0j])
    norm_sq = 1.0
    for a in alpha:
        a = complex(a)
        shifted = np.concatenate(([0.0 + 0j], phi))
        padded_star = np.concatenate((phis, [0.0 + 0j]))
        phi = shifted - np.conj(a) * padded_star
        phis = padded_star - a * shifted
        norm_sq *= 1.0 - abs(a) ** 2
    return MonicOPState(degree=len(list(alpha)), phi=phi, phi_star=phis, norm_sq=norm_sq)


# --------------------------------------------------------------------------
# coefficient extraction
# --------------------------------------------------------------------------

def _szego_recursion_on_nodes(z: np.ndarray, w: np.ndarray, count: int,
                              terminate: bool) -> tuple[list[complex], list[str]]:
    """Normalized Szego recursion with inner products under sum(w dirac_z).

    Tracking orthonormal values on the support keeps the recursion stable
    even when the cumulative norm product underflows (gapped measures);
    alpha_k = conj(<phi_k*, z phi_k>).
    """
    phi = np.ones_like(z, dtype=complex)
    phis = np.ones_like(z, dtype=complex)
    out: list[complex] = []
    notes: list[str] = []
    for k in range(count):
        a = np.conj(np.sum(w * np.conj(phis) * z * phi))
        last = terminate and k == count - 1
        if last:
            mod = abs(a)
            if abs(mod - 1.0) > 1e-6:
                raise IllConditionedError(k, f"terminal coefficient off the circle (|alpha| = {mod})")
            if abs(mod - 1.0) > UNIT_CIRCLE_TOL:
                notes.append(f"terminal coefficient re-projected onto the circle (defect {mod - 1.0:.3e})")
            a = a / mod
            out.append(complex(a))
            break
        r2 = 1.0 - abs(a) ** 2
        if r2 < PREDICTION_FLOOR:
            raise IllConditionedError(k, "recursion step power below floor; measure is numerically finite")
        out.append(complex(a))
        r = math.sqrt(r2)
        zphi = z * phi
        phi = (zphi - np.conj(a) * phis) / r
        phis = (phis - a * zphi) / r
    return out, notes


def verblunsky_from_discrete(measure: DiscreteMeasure) -> VerblunskySeq:
    """Coefficients of an n-atom measure; exactly n of them, the last unimodular."""
    mu = measure.sorted()
    n = mu.n_atoms
    gaps = np.diff(np.concatenate((mu.angles, [mu.angles[0] + TWO_PI])))
    if n > 1 and gaps.min() <= ATOM_ANGLE_TOL:
        raise DegenerateMeasureError("duplicate atoms within angular tolerance")
    notes = []
    if mu.weights.min() < WEIGHT_UNDERFLOW:
        notes.append(f"atom weight underflow (min weight {mu.weights.min():.3e})")
    z = np.exp(1j * mu.angles)
    coeffs, rec_notes = _szego_recursion_on_nodes(z, mu.weights.astype(complex), n, terminate=True)
    return VerblunskySeq(tuple(coeffs), terminated=True, notes=tuple(notes + rec_notes))


def _measure_nodes(measure: ACMeasure | MixedMeasure,
                   quad: QuadratureConfig) -> tuple[np.ndarray, np.ndarray]:
    """Discretize an AC/Mixed measure into quadrature atoms of total mass 1."""
    thetas: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for a, b in measure.arcs:
        if abs((b - a) - TWO_PI) <= 1e-12:
            th, h = circle_nodes(quad, offset=True)
            wq = np.full_like(th, h)
        else:
            th, wq = arc_nodes(a, b, quad)
        thetas.append(th)
        weights.append(wq * np.asarray(measure.density(th), dtype=float))
    if isinstance(measure, MixedMeasure):
        thetas.append(measure.atom_angles)
        weights.append(measure.atom_weights)
    theta = np.concatenate(thetas)
    w = np.concatenate(weights)
    w = np.clip(w, 0.0, None)
    return theta, w / w.sum()


def verblunsky_from_density(measure: ACMeasure | MixedMeasure, count: int,
                            quad: QuadratureConfig = DEFAULT_QUAD,
                            method: str = "stieltjes") -> VerblunskySeq:
    """First ``count`` coefficients of a measure with infinite support.

    ``stieltjes`` (default) runs the normalized recursion on quadrature
    nodes, which stays accurate for gapped supports.  ``levinson`` goes
    through trigonometric moments c_k = int e^{-ik theta} dmu and the
    classical Toeplitz recursion; it aborts once the prediction-error
    power drops below 1e-14.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    theta, w = _measure_nodes(measure, quad)
    z = np.exp(1j * theta)
    if method == "stieltjes":
        coeffs, notes = _szego_recursion_on_nodes(z, w.astype(complex), count, terminate=False)
        return VerblunskySeq(tuple(coeffs), terminated=False, notes=tuple(notes))
    if method == "levinson":
        moments = np.array([np.sum(w * z ** l) for l in range(count + 1)])
        return _levinson_from_moments(moments, count)
    raise ValueError(f"unknown extraction method {method!r}")


def trigonometric_moments(measure: ACMeasure | MixedMeasure, k_max: int,
                          quad: QuadratureConfig = DEFAULT_QUAD) -> np.ndarray:
    """c_k = int e^{-ik theta} dmu for k = 0..k_max."""
    theta, w = _measure_nodes(measure, quad)
    return np.array([np.sum(w * np.exp(-1j * k * theta)) for k in range(k_max + 1)])


def _levinson_from_moments(moments: np.ndarray, count: int) -> VerblunskySeq:
    """Szego-Levinson recursion on moments m_l = int z^l dmu, l = 0..count."""
    m = np.concatenate((np.conj(moments[:0:-1]), moments))  # m[-count..count]
    ofs = count

    def mom(l: int) -> complex:
        return m[ofs + l]

    phi = np.array([1.0 + 0j])
    power = 1.0
    out: list[complex] = []
    for k in range(count):
        if power < PREDICTION_FLOOR:
            raise IllConditionedError(k, "prediction-error power below 1e-14")
        inner = sum(phi[j] * mom(j + 1) for j in range(k + 1))
        a = np.conj(inner / power)
        if abs(a) >= 1.0:
            raise IllConditionedError(k, "moment matrix lost positive-definiteness")
        phis = np.conj(phi[::-1])
        shifted = np.concatenate(([0.0 + 0j], phi))
        phi = shifted - np.conj(a) * np.concatenate((phis, [0.0 + 0j]))
        power *= 1.0 - abs(a) ** 2
        out.append(complex(a))
    return VerblunskySeq(tuple(out), terminated=False)


# --------------------------------------------------------------------------
# matrix representations
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UnitaryMatrixRep:
    """GGT or CMV matrix built from a coefficient sequence."""

    kind: str
    entries: np.ndarray
    source: VerblunskySeq

    def __post_init__(self) -> None:
        m = self.entries
        n = m.shape[0]
        if self.kind == "cmv":
            for off in range(3, n):
                if np.abs(np.diagonal(m, off)).max(initial=0.0) > 1e-13 or \
                   np.abs(np.diagonal(m, -off)).max(initial=0.0) > 1e-13:
                    raise ValueError("CMV matrix must have bandwidth <= 2")
        elif self.kind == "ggt":
            for off in range(2, n):
                if np.abs(np.diagonal(m, -off)).max(initial=0.0) > 1e-13:
                    raise ValueError("GGT matrix must vanish below the first subdiagonal")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.source.terminated and n == len(self.source):
            defect = np.abs(m.conj().T @ m - np.eye(n)).max()
            if defect > 1e-10:
                raise ValueError(f"terminated matrix must be unitary (defect {defect:.3e})")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def is_unitary(self, tol: float = 1e-10) -> bool:
        n = self.size
        return bool(np.abs(self.entries.conj().T @ self.entries - np.eye(n)).max() <= tol)


def ggt_matrix(alpha: VerblunskySeq, L: int) -> UnitaryMatrixRep:
    """Upper-left L x L section of the GGT matrix of alpha.

    Entries: G[i, j] = -alpha_{i-1} conj(alpha_j) rho_i ... rho_{j-1} for
    i <= j (alpha_{-1} = -1), rho_j on the subdiagonal, zero elsewhere.
    When alpha is terminated and L = len(alpha) this is the full unitary
    matrix, including its special last row and column.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if L > len(alpha):
        raise InsufficientCoefficientsError(
            f"GGT section of size {L} needs {L} coefficients, have {len(alpha)}")
    a = alpha.as_array()[:L]
    a_prev = np.concatenate(([-1.0 + 0j], a[:-1]))           # alpha_{i-1}
    rho = np.sqrt(np.clip(1.0 - np.abs(a[:max(L - 1, 0)]) ** 2, 0.0, None))
    logrho = np.concatenate(([0.0], np.cumsum(np.log(rho)))) if L > 1 else np.array([0.0])
    # prod_{k=i}^{j-1} rho_k = exp(S[j] - S[i]) with S the cumulative log
    upper = -np.outer(a_prev, np.conj(a)) * np.exp(logrho[None, :L] - logrho[:L, None])
    g = np.triu(upper)
    if L > 1:
        g[np.arange(1, L), np.arange(L - 1)] = rho
    return UnitaryMatrixRep(kind="ggt", entries=g, source=alpha)


def _theta_block(a: complex) -> np.ndarray:
    r = math.sqrt(max(1.0 - abs(a) ** 2, 0.0))
    return np.array([[np.conj(a), r], [r, -a]], dtype=complex)


def _cmv_factors(coeffs: Sequence[complex], n: int, terminated: bool) -> tuple[np.ndarray, np.ndarray]:
    lm = np.zeros((n, n), dtype=complex)
    mm = np.zeros((n, n), dtype=complex)
    mm[0, 0] = 1.0
    for j in range(0, n, 2):          # Theta_j blocks of L start at row j, j even
        if j + 1 < n:
            lm[j:j + 2, j:j + 2] = _theta_block(coeffs[j])
        else:
            lm[j, j] = np.conj(coeffs[j]) if terminated else _theta_block(coeffs[j])[0, 0]
    for j in range(1, n, 2):          # Theta_j blocks of M start at row j, j odd
        if j + 1 < n:
            mm[j:j + 2, j:j + 2] = _theta_block(coeffs[j])
        else:
            mm[j, j] = np.conj(coeffs[j]) if terminated else _theta_block(coeffs[j])[0, 0]
    return lm, mm


def cmv_matrix(alpha: VerblunskySeq, n: int) -> UnitaryMatrixRep:
    """Upper-left n x n section of the CMV matrix (full matrix if terminated).

    C = L M with L = Theta_0 + Theta_2 + ..., M = (1) + Theta_1 + ...;
    the terminated case truncates the trailing block to the 1 x 1 entry
    conj(alpha_{n-1}).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > len(alpha):
        raise InsufficientCoefficientsError(
            f"CMV section of size {n} needs {n} coefficients, have {len(alpha)}")
    if alpha.terminated and n == len(alpha):
        lm, mm = _cmv_factors(alpha.coeffs, n, terminated=True)
        c = lm @ mm
    else:
        # The n x n section only involves alpha_0..alpha_{n-1}; padding with
        # zeros beyond the available range leaves it untouched.
        ext = n + 2
        padded = list(alpha.coeffs[:n]) + [0.0 + 0j] * (ext - n)
        lm, mm = _cmv_factors(padded, ext, terminated=False)
        c = (lm @ mm)[:n, :n]
    return UnitaryMatrixRep(kind="cmv", entries=c, source=alpha)


def spectral_measure(rep: UnitaryMatrixRep) -> DiscreteMeasure:
    """Spectral measure of (M, e_1): atoms at eigenvalue angles.

    Weights are the squared first components of the orthonormal
    eigenvectors.
    """
    if not rep.is_unitary():
        raise ValueError("spectral measure requires a unitary (terminated) matrix")
    eigvals, eigvecs = np.linalg.eig(rep.entries)
    norms = np.linalg.norm(eigvecs, axis=0)
    weights = np.abs(eigvecs[0, :] / norms) ** 2
    total = weights.sum()
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"eigenvector weights sum to {total}, expected 1")
    angles = canonical_angle(np.angle(eigvals))
    order = np.argsort(angles)
    return DiscreteMeasure(angles[order], (weights / total)[order])


def bernstein_szego_measure(alpha: VerblunskySeq) -> ACMeasure:
    """AC measure whose coefficients are alpha followed by zeros.

    Density prod rho_k^2 / (2 pi |Phi_n(e^{i theta})|^2) on the full
    circle; Phi_n has no zeros on |z| = 1, so the density is smooth and
    strictly positive.
    """
    if alpha.terminated:
        raise ValueError("Bernstein-Szego measure needs open-disk coefficients")
    state = monic_polynomials(alpha.coeffs)

    def density(theta: np.ndarray) -> np.ndarray:
        vals = state.evaluate(theta)
        return state.norm_sq / (TWO_PI * np.abs(vals) ** 2)

    params = {"coeffs": [[c.real, c.imag] for c in alpha.coeffs]}
    return ACMeasure(density=density, family="bernstein-szego", params=params)


# --------------------------------------------------------------------------
# JSON serialization
# --------------------------------------------------------------------------

FAMILY_BUILDERS: dict[str, Callable[[dict], CircleMeasure]] = {}


def register_family(name: str, builder: Callable[[dict], CircleMeasure]) -> None:
    FAMILY_BUILDERS[name] = builder


register_family("uniform", lambda params: uniform_measure())
register_family("bernstein-szego", lambda params: bernstein_szego_measure(
    VerblunskySeq(tuple(complex(re, im) for re, im in params["coeffs"]))))


def verblunsky_to_json(alpha: VerblunskySeq) -> dict:
    return {"coeffs": [[c.real, c.imag] for c in alpha.coeffs],
            "terminated": alpha.terminated}


def verblunsky_from_json(data: dict) -> VerblunskySeq:
    coeffs = tuple(complex(re, im) for re, im in data["coeffs"])
    return VerblunskySeq(coeffs, terminated=bool(data.get("terminated", False)))


def measure_to_json(mu: CircleMeasure) -> dict:
    if isinstance(mu, DiscreteMeasure):
        return {"type": "discrete",
                "atoms": [{"theta": float(t), "w": float(w)}
                          for t, w in zip(mu.angles, mu.weights)]}
    if mu.family is None:
        raise ValueError("only family-backed AC/Mixed measures serialize to JSON")
    kind = "ac" if isinstance(mu, ACMeasure) else "mixed"
    return {"type": kind, "family": mu.family, "params": mu.params or {}}


def measure_from_json(data: dict) -> CircleMeasure:
    kind = data["type"]
    if kind == "discrete":
        atoms = data["atoms"]
        return DiscreteMeasure(np.array([a["theta"] for a in atoms]),
                               np.array([a["w"] for a in atoms]))
    if kind in ("ac", "mixed"):
        family = data["family"]
        if family not in FAMILY_BUILDERS:
            raise ValueError(f"unknown measure family {family!r}")
        return FAMILY_BUILDERS[family](data.get("params", {}))
    raise ValueError(f"unknown measure type {kind!r}")
