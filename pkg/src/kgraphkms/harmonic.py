"""Harmonic vertex vectors and their component classification.

A vector psi >= 0 of unit 1-norm with A_i psi = e^{beta r_i} psi for
every color i encodes a gauge-invariant equilibrium state at inverse
temperature beta for the dynamics scaled by r.  Every such vector is a
unique convex combination of extremal vectors x^C attached to the
"harmonic" strong components: the positive components whose per-color
spectral radius vector strictly dominates (somewhere strictly, nowhere
smaller) that of every component strictly inside their closure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import spectral
from .kgraph import Component, Degree, KGraph, KGraphError
from .spectral import DEFAULT_CMP_TOL, WellChosenSet

Scalar = Union[int, float, Fraction]


class SingularSolve(KGraphError):
    """Linear solve for the closure part failed; cannot occur for a
    genuinely harmonic component."""


class ResidualTooLarge(KGraphError):
    def __init__(self, residual: float, detail: str = ""):
        self.residual = residual
        super().__init__(
            f"decomposition residual {residual:.3e} exceeds tolerance"
            + (f" ({detail})" if detail else "")
        )


# ---------------------------------------------------------------------------
# Dynamics parameters (r, beta) with an optional exact-arithmetic route
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dynamics:
    """The pair (r, beta) defining the one-parameter dynamics.

    When beta is given as ln(base) for a rational base and the entries
    of r are integers, the per-color weights e^{beta r_i} = base^{r_i}
    are exact fractions and Boltzmann factors stay exact.
    """

    r: tuple[float, ...]
    beta: float
    log_base: Optional[Fraction] = None

    @classmethod
    def from_log_base(cls, r: Sequence[float], base: Fraction) -> "Dynamics":
        if base <= 0:
            raise ValueError("log base must be positive")
        return cls(tuple(float(x) for x in r), math.log(base), base)

    def weight(self, color: int) -> float:
        """e^{beta r_i}."""
        return math.exp(self.beta * self.r[color - 1])

    def exact_weight(self, color: int) -> Optional[Fraction]:
        if self.log_base is None:
            return None
        ri = self.r[color - 1]
        if ri != int(ri):
            return None
        return self.log_base ** int(ri)

    def boltzmann(self, n: Sequence[int]) -> Scalar:
        """e^{-beta r . n} for a (possibly signed) integer vector n."""
        exact = Fraction(1)
        for i, ni in enumerate(n):
            if ni == 0:
                continue
            w = self.exact_weight(i + 1)
            if w is None:
                exact = None  # type: ignore[assignment]
                break
            if w == 0:
                raise ValueError("zero weight cannot be inverted")
            exact *= w ** (-ni)
        if exact is not None:
            return exact
        return math.exp(-self.beta * sum(ri * ni for ri, ni in zip(self.r, n)))

    def with_beta(self, beta: float) -> "Dynamics":
        return Dynamics(self.r, beta, None)


@dataclass(frozen=True)
class HarmonicVector:
    """Vertex-indexed nonnegative unit-1-norm vector tied to a Dynamics."""

    graph: KGraph
    dyn: Dynamics
    values: tuple[Scalar, ...]

    def psi(self, v: str) -> Scalar:
        return self.values[self.graph.vertex_index(v)]

    def as_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.values], dtype=float)


@dataclass(frozen=True)
class HarmonicCheck:
    ok: bool
    one_norm_error: float
    min_entry: float
    residuals: tuple[float, ...]  # per color, inf-norm of A_i psi - e^{beta r_i} psi
    max_residual: float


def verify_harmonic(
    g: KGraph,
    values: Sequence[Scalar],
    dyn: Dynamics,
    norm_tol: float = 1e-10,
    residual_tol: float = 1e-9,
) -> HarmonicCheck:
    psi = np.array([float(x) for x in values], dtype=float)
    one_norm_error = abs(float(np.abs(psi).sum()) - 1.0)
    min_entry = float(psi.min())
    residuals = []
    for i in range(1, g.rank + 1):
        a = spectral.float_matrix(g.vertex_matrix(i))
        residuals.append(float(np.abs(a @ psi - dyn.weight(i) * psi).max()))
    max_residual = max(residuals)
    ok = (
        one_norm_error <= norm_tol
        and min_entry >= -norm_tol
        and max_residual <= residual_tol
    )
    return HarmonicCheck(ok, one_norm_error, min_entry, tuple(residuals), max_residual)


# ---------------------------------------------------------------------------
# Component classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HarmonicComponentInfo:
    component: Component
    spectrum: tuple[float, ...]
    positive: bool
    harmonic: bool
    # components inside the closure that block harmonicity, with the
    # per-color differences rho_i(C) - rho_i(D)
    blocking: tuple[tuple[Component, tuple[float, ...]], ...]
    indeterminate: bool
    x: Optional[np.ndarray]  # extremal vector, present iff harmonic


def component_spectrum(g: KGraph, c: Component) -> tuple[float, ...]:
    """(rho(A_i^C))_i computed per color on the component."""
    idx = sorted(g.vertex_index(v) for v in c.vertices)
    return tuple(
        spectral.spectral_radius(g.vertex_matrix(i), idx)
        for i in range(1, g.rank + 1)
    )


def _dominates(
    spec_c: Sequence[float], spec_d: Sequence[float], eps_cmp: float
) -> tuple[bool, bool]:
    """Does spec_d <= spec_c coordinatewise with >= 1 strict drop?

    Returns (decision, murky) where murky marks a tie coordinate whose
    measured gap is inside the tolerance band but not a clean zero, so
    the strict comparison is numerically indeterminate.
    """
    strict = False
    murky = False
    clean = max(1e-12, eps_cmp * 1e-2)
    for rc, rd in zip(spec_c, spec_d):
        diff = rc - rd
        if diff < -eps_cmp:
            return False, False
        if diff > eps_cmp:
            strict = True
        elif abs(diff) > clean:
            murky = True
    return strict, murky


def classify_components(
    g: KGraph,
    eps_cmp: float = DEFAULT_CMP_TOL,
    f: Optional[WellChosenSet] = None,
) -> tuple[HarmonicComponentInfo, ...]:
    """Spectrum, positivity and harmonicity for every strong component.

    Harmonicity is decided by the per-color criterion (no A_F needed):
    C is harmonic iff it is non-trivial, positive, and the spectrum
    vector of every other component inside closure(C) is dominated
    with at least one strictly smaller coordinate.
    """
    comps = g.components()
    spectra = {c.index: component_spectrum(g, c) for c in comps}
    infos: list[HarmonicComponentInfo] = []
    for c in comps:
        spec_c = spectra[c.index]
        positive = all(rho > eps_cmp for rho in spec_c)
        blocking: list[tuple[Component, tuple[float, ...]]] = []
        indeterminate = False
        harmonic = positive and not c.trivial
        for d in comps:
            if d.index == c.index or not (d.vertices <= c.closure):
                continue
            ok, murky = _dominates(spec_c, spectra[d.index], eps_cmp)
            indeterminate = indeterminate or murky
            if not ok:
                blocking.append(
                    (d, tuple(rc - rd for rc, rd in zip(spec_c, spectra[d.index])))
                )
        if blocking:
            harmonic = False
        x = extremal_vector(g, c, f) if harmonic else None
        infos.append(
            HarmonicComponentInfo(
                c, spec_c, positive, harmonic, tuple(blocking), indeterminate, x
            )
        )
    return tuple(infos)


def is_harmonic(
    g: KGraph, c: Component, eps_cmp: float = DEFAULT_CMP_TOL
) -> bool:
    if c.trivial:
        return False
    spec_c = component_spectrum(g, c)
    if not all(rho > eps_cmp for rho in spec_c):
        return False
    for d in g.components():
        if d.index == c.index or not (d.vertices <= c.closure):
            continue
        ok, _ = _dominates(spec_c, component_spectrum(g, d), eps_cmp)
        if not ok:
            return False
    return True


def extremal_vector(
    g: KGraph,
    c: Component,
    f: Optional[WellChosenSet] = None,
    residual_tol: float = 1e-9,
) -> np.ndarray:
    """The unique unit-1-norm eigenvector of A_F supported on closure(C).

    Perron vector on the component block, then the strictly-inside part
    of the closure is filled in by solving
    (I - rho^{-1} A_F^{out}) y = rho^{-1} A_F^{out,C} x,
    which sums the geometric series dominated by rho(A_F^out) < rho.
    """
    if not is_harmonic(g, c):
        raise ValueError(f"component {c.label()} is not harmonic")
    if f is None:
        f = spectral.default_well_chosen(g)
    af = spectral.float_matrix(spectral.a_f_matrix(g, f))
    c_idx = sorted(g.vertex_index(v) for v in c.vertices)
    out_idx = sorted(g.vertex_index(v) for v in c.closure - c.vertices)
    rho = spectral.spectral_radius(af, c_idx)
    x_c = spectral.perron_vector(af[np.ix_(c_idx, c_idx)])
    full = np.zeros(len(g.vertices))
    full[c_idx] = x_c
    if out_idx:
        a_out = af[np.ix_(out_idx, out_idx)] / rho
        a_cross = af[np.ix_(out_idx, c_idx)] / rho
        try:
            y = np.linalg.solve(np.eye(len(out_idx)) - a_out, a_cross @ x_c)
        except np.linalg.LinAlgError as exc:
            raise SingularSolve(str(exc)) from exc
        full[out_idx] = y
    full = full / full.sum()
    resid = float(np.abs(af @ full - rho * full).max())
    if resid > residual_tol * max(rho, 1.0):
        raise SingularSolve(
            f"extremal vector residual {resid:.3e} too large (internal error)"
        )
    return full


@dataclass(frozen=True)
class FIndependenceReport:
    component: Component
    max_diff: float
    harmonic_f1: bool
    harmonic_f2: bool
    passed: bool


def _f_harmonic(g: KGraph, c: Component, f: WellChosenSet) -> bool:
    """The A_F-based harmonicity criterion for one concrete F."""
    if c.trivial:
        return False
    af = spectral.a_f_matrix(g, f)
    c_idx = sorted(g.vertex_index(v) for v in c.vertices)
    out_idx = sorted(g.vertex_index(v) for v in c.closure - c.vertices)
    if not out_idx:
        return True
    return spectral.spectral_radius(af, c_idx) > spectral.spectral_radius(af, out_idx)


def f_independence_check(
    g: KGraph,
    c: Component,
    f1: WellChosenSet,
    f2: WellChosenSet,
    tol: float = 1e-8,
) -> FIndependenceReport:
    """Extremal vector and harmonicity must not depend on the choice of F."""
    h1 = _f_harmonic(g, c, f1)
    h2 = _f_harmonic(g, c, f2)
    if h1 and h2:
        x1 = extremal_vector(g, c, f1)
        x2 = extremal_vector(g, c, f2)
        max_diff = float(np.abs(x1 - x2).max())
    else:
        max_diff = 0.0
    return FIndependenceReport(c, max_diff, h1, h2, h1 == h2 and max_diff <= tol)


# ---------------------------------------------------------------------------
# Matching components to (r, beta)
# ---------------------------------------------------------------------------

def matches_dynamics(
    spectrum: Sequence[float], dyn: Dynamics, eps_match: float = 1e-9
) -> bool:
    """beta r_i == ln rho_i for every color, within eps_match.

    At beta = 0 this reduces to rho_i == 1 for all i, which is exactly
    the reduction of the zero-temperature case to the trivial dynamics.
    """
    for i, rho in enumerate(spectrum):
        if rho <= 0:
            return False
        if abs(dyn.beta * dyn.r[i] - math.log(rho)) > eps_match:
            return False
    return True


def harmonic_components_for(
    g: KGraph,
    dyn: Dynamics,
    eps_match: float = 1e-9,
    eps_cmp: float = DEFAULT_CMP_TOL,
    f: Optional[WellChosenSet] = None,
) -> tuple[HarmonicComponentInfo, ...]:
    """The harmonic components whose spectrum matches (r, beta)."""
    return tuple(
        info
        for info in classify_components(g, eps_cmp, f)
        if info.harmonic and matches_dynamics(info.spectrum, dyn, eps_match)
    )


def extremal_harmonic_vector(
    g: KGraph, c: Component, dyn: Dynamics, f: Optional[WellChosenSet] = None
) -> HarmonicVector:
    x = extremal_vector(g, c, f)
    return HarmonicVector(g, dyn, tuple(float(v) for v in x))


@dataclass(frozen=True)
class AdmissibleTemperature:
    component: Component
    beta: Optional[float]  # None means every beta works (flagged all_beta)
    all_beta: bool
    spectrum: tuple[float, ...]


def admissible_temperatures(
    g: KGraph,
    r: Sequence[float],
    eps_match: float = 1e-9,
    eps_cmp: float = DEFAULT_CMP_TOL,
) -> tuple[AdmissibleTemperature, ...]:
    """For each positive harmonic component, the beta solving
    beta r_i = ln rho_i for all i, if one exists.

    r = 0 admits every beta exactly when the spectrum is identically 1,
    reported symbolically rather than as an enumeration.
    """
    r = tuple(float(x) for x in r)
    out: list[AdmissibleTemperature] = []
    for info in classify_components(g, eps_cmp):
        if not info.harmonic:
            continue
        logs = [math.log(rho) for rho in info.spectrum]
        if all(x == 0.0 for x in r):
            if all(abs(l) <= eps_match for l in logs):
                out.append(AdmissibleTemperature(info.component, None, True,
                                                 info.spectrum))
            continue
        pivot = max(range(len(r)), key=lambda i: abs(r[i]))
        beta = logs[pivot] / r[pivot]
        if all(abs(beta * ri - l) <= eps_match for ri, l in zip(r, logs)):
            out.append(AdmissibleTemperature(info.component, beta, False,
                                             info.spectrum))
    return tuple(out)


# ---------------------------------------------------------------------------
# Decomposition into extremal vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    parts: tuple[tuple[Component, float], ...]
    residual: float
    weight_sum: float


def decompose(
    hv: HarmonicVector,
    f: Optional[WellChosenSet] = None,
    eps_supp: float = 1e-12,
    eps_cmp: float = DEFAULT_CMP_TOL,
    tol: float = 1e-8,
) -> Decomposition:
    """Write psi as sum_C t_C x^C over <=-minimal matching components.

    Follows the constructive uniqueness argument: restrict to the
    support W, renormalize A_F by K = sum_{n in F} e^{beta r . n} so
    psi is a fixed vector, collect the components of W whose
    renormalized block radius is 1, and keep the minimal ones.
    """
    g = hv.graph
    check = verify_harmonic(g, hv.values, hv.dyn)
    if not check.ok:
        raise ResidualTooLarge(check.max_residual, "input vector is not harmonic")
    if f is None:
        f = spectral.default_well_chosen(g)
    psi = hv.as_array()
    support = {v for v in g.vertices if psi[g.vertex_index(v)] > eps_supp}
    k_const = sum(
        float(spectral.spectrum_product([hv.dyn.weight(i + 1) for i in range(g.rank)], n))
        for n in f
    )
    af = spectral.float_matrix(spectral.a_f_matrix(g, f))
    candidates: list[Component] = []
    for c in g.components():
        if not (c.vertices <= support):
            continue
        idx = sorted(g.vertex_index(v) for v in c.vertices)
        if abs(spectral.spectral_radius(af, idx) / k_const - 1.0) <= eps_cmp:
            candidates.append(c)
    minimal = [
        c
        for c in candidates
        if not any(d is not c and d.vertices <= c.closure for d in candidates)
    ]
    parts: list[tuple[Component, float]] = []
    recon = np.zeros_like(psi)
    for c in minimal:
        x = extremal_vector(g, c, f)
        ratios = [
            psi[g.vertex_index(v)] / x[g.vertex_index(v)] for v in sorted(c.vertices)
        ]
        t = float(np.mean(ratios))
        spread = max(ratios) - min(ratios)
        if spread > tol * max(t, 1.0):
            raise ResidualTooLarge(
                spread, f"psi is not proportional to x^C on {c.label()}"
            )
        parts.append((c, t))
        recon = recon + t * x
    residual = float(np.abs(psi - recon).max())
    if residual > tol:
        raise ResidualTooLarge(residual)
    weight_sum = sum(t for _, t in parts)
    parts.sort(key=lambda item: item[0].index)
    return Decomposition(tuple(parts), residual, weight_sum)
