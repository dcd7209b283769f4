"""Symbolic arithmetic in the span of the Cuntz-Krieger generators.

Elements are finite complex combinations of spanning pairs t_lam t_gam*
with a common source.  Products expand through minimal common
extensions,
    (t_lam t_gam*)(t_del t_eps*) = sum over (eta, nu) minimal with
    gam.eta = del.nu of t_{lam.eta} t_{eps.nu}*,
which keeps every computation inside the span.  Coefficients stay
exact (ints / fractions) whenever the inputs are; floats and complex
floats mix in transparently.

State evaluation: gauge-invariant states use the diagonal formula
omega(t_lam t_gam*) = [lam == gam] e^{-beta r.d(lam)} psi_{s(lam)};
twisted extremal states multiply the character phase of the degree
difference with the isotropy-cylinder mass, which is generally an
interval — a point only when the bounds close.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .harmonic import Dynamics, HarmonicVector, extremal_harmonic_vector
from .kgraph import Component, Degree, KGraph, Path, deg_sub
from .pathspace import (
    Character,
    CylinderMeasure,
    PeriodicityGroup,
    Phase,
    cis,
    isotropy_cylinder_bounds,
    periodicity_group,
    restrict_torus_point,
)

Coefficient = Union[int, float, complex, Fraction]


class UncertifiedPeriodicity(Warning):
    """Degree difference undecided within the certification box."""


def _conj(c: Coefficient) -> Coefficient:
    if isinstance(c, complex):
        return c.conjugate()
    return c


# ---------------------------------------------------------------------------
# Spanning elements and their span
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpanningElement:
    """t_lam t_gam* with s(lam) = s(gam)."""

    lam: Path
    gam: Path

    def __post_init__(self):
        if self.lam.source != self.gam.source:
            raise ValueError("spanning pair needs a common source")

    def degree_diff(self) -> tuple[int, ...]:
        return deg_sub(self.lam.degree, self.gam.degree)

    def adjoint(self) -> "SpanningElement":
        return SpanningElement(self.gam, self.lam)

    def sort_key(self):
        return (self.lam.degree, self.gam.degree, self.lam.edges,
                self.gam.edges, self.lam.range, self.gam.range)


class AlgebraElement:
    """Finite formal combination of spanning elements (immutable)."""

    __slots__ = ("graph", "_terms")

    def __init__(self, graph: KGraph, terms: Optional[dict] = None):
        self.graph = graph
        clean: dict[SpanningElement, Coefficient] = {}
        for s, c in (terms or {}).items():
            if c != 0:
                clean[s] = c
        self._terms = clean

    def terms(self) -> list[tuple[SpanningElement, Coefficient]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, s: SpanningElement) -> Coefficient:
        return self._terms.get(s, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, 0) + c
        return AlgebraElement(self.graph, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-1) * other

    def __rmul__(self, scalar: Coefficient) -> "AlgebraElement":
        return AlgebraElement(
            self.graph, {s: scalar * c for s, c in self._terms.items()}
        )

    def __mul__(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(
            self.graph, {s: c * other for s, c in self._terms.items()}
        )

    def __neg__(self) -> "AlgebraElement":
        return (-1) * self

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.graph is other.graph
            and self._terms == other._terms
        )

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        bits = []
        for s, c in self.terms():
            bits.append(f"({c})*t[{s.lam.word()}]t[{s.gam.word()}]*")
        return " + ".join(bits)


def spanning(g: KGraph, lam: Path, gam: Path,
             coeff: Coefficient = 1) -> AlgebraElement:
    return AlgebraElement(g, {SpanningElement(lam, gam): coeff})


def vertex_projection(g: KGraph, v: str) -> AlgebraElement:
    e = g.identity(v)
    return spanning(g, e, e)


def zero(g: KGraph) -> AlgebraElement:
    return AlgebraElement(g, {})


def unit(g: KGraph) -> AlgebraElement:
    out = zero(g)
    for v in g.vertices:
        out = out + vertex_projection(g, v)
    return out


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the spanning-pair product via minimal
    common extensions of the two middle paths."""
    g = a.graph
    out: dict[SpanningElement, Coefficient] = {}
    for s1, c1 in a._terms.items():
        for s2, c2 in b._terms.items():
            for eta, nu in g.lambda_min(s1.gam, s2.lam):
                key = SpanningElement(
                    g.compose(s1.lam, eta), g.compose(s2.gam, nu)
                )
                out[key] = out.get(key, 0) + c1 * c2
    return AlgebraElement(g, out)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(
        a.graph, {s.adjoint(): _conj(c) for s, c in a._terms.items()}
    )


def ck4_expand(g: KGraph, v: str, n: Degree) -> AlgebraElement:
    """The projection identity p_v = sum over vLambda^n of t_lam t_lam*."""
    out: dict[SpanningElement, Coefficient] = {}
    for lam in g.enumerate_paths(v, n):
        out[SpanningElement(lam, lam)] = 1
    return AlgebraElement(g, out)


def dynamics(a: AlgebraElement, dyn: Dynamics) -> AlgebraElement:
    """Analytic continuation of the dynamics to imaginary time i*beta:
    scales t_lam t_gam* by e^{-beta r.(d(lam)-d(gam))}."""
    return AlgebraElement(
        a.graph,
        {s: c * dyn.boltzmann(s.degree_diff()) for s, c in a._terms.items()},
    )


def gauge_transform(a: AlgebraElement, eta: Sequence[Phase]) -> AlgebraElement:
    """Torus point eta acting by t_lam t_gam* -> eta(d(lam)-d(gam)) t ..."""
    g = a.graph
    if len(eta) != g.rank:
        raise ValueError("need one phase per color")
    out: dict[SpanningElement, Coefficient] = {}
    for s, c in a._terms.items():
        diff = s.degree_diff()
        if all(isinstance(e, (Fraction, int)) for e in eta):
            phase: Phase = sum(
                (Fraction(e) * d for e, d in zip(eta, diff)), Fraction(0)
            )
        else:
            phase = math.fsum(float(e) * d for e, d in zip(eta, diff))
        factor = cis(phase)
        if factor == 1:
            out[s] = out.get(s, 0) + c
        else:
            out[s] = out.get(s, 0) + c * factor
    return AlgebraElement(g, out)


def element_to_obj(a: AlgebraElement) -> list[dict]:
    """Canonical serialization: sorted list of term records."""
    out = []
    for s, c in a.terms():
        z = complex(c)
        out.append(
            {
                "source": s.lam.source,
                "lambda": list(s.lam.edges),
                "gamma": list(s.gam.edges),
                "re": z.real,
                "im": z.imag,
            }
        )
    return out


# ---------------------------------------------------------------------------
# Interval values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle of possible complex values."""

    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float
    notes: tuple[str, ...] = ()

    @staticmethod
    def point(z: complex) -> "ComplexBox":
        z = complex(z)
        return ComplexBox(z.real, z.real, z.imag, z.imag)

    def width(self) -> float:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def is_point(self, tol: float = 1e-12) -> bool:
        return self.width() <= tol

    def midpoint(self) -> complex:
        return complex((self.re_lo + self.re_hi) / 2,
                       (self.im_lo + self.im_hi) / 2)

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(
            self.re_lo + other.re_lo,
            self.re_hi + other.re_hi,
            self.im_lo + other.im_lo,
            self.im_hi + other.im_hi,
            self.notes + other.notes,
        )

    def scale(self, z: Coefficient) -> "ComplexBox":
        z = complex(z)
        corners = [
            z * complex(re, im)
            for re in (self.re_lo, self.re_hi)
            for im in (self.im_lo, self.im_hi)
        ]
        return ComplexBox(
            min(c.real for c in corners),
            max(c.real for c in corners),
            min(c.imag for c in corners),
            max(c.imag for c in corners),
            self.notes,
        )

    def with_note(self, note: str) -> "ComplexBox":
        return ComplexBox(self.re_lo, self.re_hi, self.im_lo, self.im_hi,
                          self.notes + (note,))


EvalValue = Union[int, float, complex, Fraction, ComplexBox]


def value_distance(x: EvalValue, y: EvalValue) -> float:
    """0 when the values (or intervals) are compatible; otherwise the
    Chebyshev gap between the boxes."""
    bx = x if isinstance(x, ComplexBox) else ComplexBox.point(complex(x))
    by = y if isinstance(y, ComplexBox) else ComplexBox.point(complex(y))
    re_gap = max(bx.re_lo - by.re_hi, by.re_lo - bx.re_hi, 0.0)
    im_gap = max(bx.im_lo - by.im_hi, by.im_lo - bx.im_hi, 0.0)
    return max(re_gap, im_gap)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeInvariantState:
    """State determined by a harmonic vector via the diagonal formula."""

    hv: HarmonicVector


@dataclass(frozen=True)
class TwistedState:
    """Extremal state attached to a component and a character of its
    periodicity group; evaluations are certified only to the recorded
    search depth."""

    measure: CylinderMeasure
    component: Component
    per: PeriodicityGroup
    xi: Character
    depth: int = 2
    budget: int = 200_000


StateDescriptor = Union[GaugeInvariantState, TwistedState]


def gauge_state(hv: HarmonicVector) -> GaugeInvariantState:
    return GaugeInvariantState(hv)


def twisted_state(
    g: KGraph,
    dyn: Dynamics,
    c: Component,
    phases: Sequence[Phase] = (),
    per: Optional[PeriodicityGroup] = None,
    depth: int = 2,
    box: Optional[Degree] = None,
    p_max: Optional[int] = None,
    budget: int = 200_000,
) -> TwistedState:
    hv = extremal_harmonic_vector(g, c, dyn)
    if per is None:
        per = periodicity_group(g, c, box, p_max, budget)
    phases = tuple(phases) or (Fraction(0),) * per.rank
    return TwistedState(
        CylinderMeasure(hv), c, per, Character(per, phases), depth, budget
    )


def _evaluate_gauge(state: GaugeInvariantState, a: AlgebraElement) -> EvalValue:
    hv = state.hv
    total: Coefficient = 0
    for s, c in a._terms.items():
        if s.lam == s.gam:
            total = total + c * hv.dyn.boltzmann(s.lam.degree) * hv.psi(s.lam.source)
    return total


@lru_cache(maxsize=200_000)
def _bounds_cached(measure, component, per, lam, gam, depth, budget):
    return isotropy_cylinder_bounds(measure, component, per, lam, gam, depth,
                                    budget)


def _evaluate_twisted(state: TwistedState, a: AlgebraElement) -> EvalValue:
    point_total: Coefficient = 0
    box_total: Optional[ComplexBox] = None
    g = a.graph
    for s, c in a._terms.items():
        diff = s.degree_diff()
        if not any(diff):
            if s.lam == s.gam:
                point_total = point_total + c * state.measure.mass(s.lam)
            continue
        status = state.per.membership(diff)
        if status == "refuted":
            continue
        bounds = _bounds_cached(
            state.measure, state.component, state.per, s.lam, s.gam,
            state.depth, state.budget
        )
        if status == "unknown":
            note = (
                f"degree difference {diff} undecided within the certified "
                f"box {state.per.box}"
            )
            warnings.warn(note, UncertifiedPeriodicity, stacklevel=3)
            contrib = ComplexBox(-bounds.hi, bounds.hi, -bounds.hi,
                                 bounds.hi).scale(c).with_note(note)
        else:
            phase = state.xi.value(diff)
            contrib = ComplexBox(bounds.lo, bounds.hi, 0.0, 0.0).scale(
                phase * complex(c)
            )
            if contrib.is_point():
                point_total = point_total + contrib.midpoint()
                continue
        box_total = contrib if box_total is None else box_total + contrib
    if box_total is None:
        return point_total
    return box_total + ComplexBox.point(complex(point_total))


def evaluate(state: StateDescriptor, a: AlgebraElement) -> EvalValue:
    """omega(a).  Exact scalar when possible, ComplexBox otherwise."""
    if isinstance(state, GaugeInvariantState):
        return _evaluate_gauge(state, a)
    return _evaluate_twisted(state, a)


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------

def spanning_family(
    g: KGraph,
    cap: Degree,
    within: Optional[frozenset[str]] = None,
) -> list[SpanningElement]:
    """All spanning pairs with both degrees <= cap (sorted).

    `within` restricts the paths to a vertex subset (component-local
    families for twisted states)."""
    from .pathspace import _degrees_upto

    by_source: dict[str, list[Path]] = {v: [] for v in g.vertices}
    for n in _degrees_upto(cap):
        for v in g.vertices:
            if within is not None and v not in within:
                continue
            for p in g.enumerate_paths(v, n, within=within):
                by_source[p.source].append(p)
    out = []
    for v in g.vertices:
        paths = by_source[v]
        for lam in paths:
            for gam in paths:
                out.append(SpanningElement(lam, gam))
    out.sort(key=lambda s: s.sort_key())
    return out


@dataclass(frozen=True)
class KMSReport:
    ok: bool
    checked: int
    max_violation: float
    worst_pair: Optional[tuple[str, str]]


def verify_kms(
    state: StateDescriptor,
    pairs: Iterable[tuple[AlgebraElement, AlgebraElement]],
    dyn: Dynamics,
    tol: float = 1e-9,
) -> KMSReport:
    """|omega(ab) - omega(b alpha_{i beta}(a))| <= tol for every pair;
    interval values must overlap within tol."""
    worst = 0.0
    worst_pair = None
    checked = 0
    for a, b in pairs:
        lhs = evaluate(state, multiply(a, b))
        rhs = evaluate(state, multiply(b, dynamics(a, dyn)))
        gap = value_distance(lhs, rhs)
        checked += 1
        if gap > worst:
            worst = gap
            worst_pair = (repr(a), repr(b))
    return KMSReport(worst <= tol, checked, worst, worst_pair)


@dataclass(frozen=True)
class SymmetryReport:
    ok: bool
    checked: int
    equivariance_max_err: float
    eta_trivial_on_group: bool
    distinguished: bool
    witness: Optional[str]


def verify_symmetry(
    g: KGraph,
    dyn: Dynamics,
    c: Component,
    xi_phases: Sequence[Phase],
    eta: Sequence[Phase],
    per: Optional[PeriodicityGroup] = None,
    elements: Optional[Sequence[AlgebraElement]] = None,
    depth: int = 2,
    tol: float = 1e-9,
    distinguish_tol: float = 1e-6,
) -> SymmetryReport:
    """The gauge action twists characters: omega_{C,xi} o Psi_eta equals
    omega_{C, xi.eta|} on the test set, and eta with a nontrivial
    restriction must be distinguished by some element (free action)."""
    if per is None:
        per = periodicity_group(g, c)
    state1 = twisted_state(g, dyn, c, xi_phases, per=per, depth=depth)
    eta_restricted = restrict_torus_point(per, eta)
    xi2 = Character(per, tuple(xi_phases) or (Fraction(0),) * per.rank).compose(
        eta_restricted
    )
    state2 = TwistedState(state1.measure, c, per, xi2, depth, state1.budget)
    if elements is None:
        elements = [
            spanning(g, s.lam, s.gam)
            for s in spanning_family(g, (1,) * g.rank, within=frozenset(c.vertices))
        ]
    max_err = 0.0
    max_direct_gap = 0.0
    witness = None
    for a in elements:
        lhs = evaluate(state1, gauge_transform(a, eta))
        rhs = evaluate(state2, a)
        max_err = max(max_err, value_distance(lhs, rhs))
        d1 = evaluate(state1, a)
        d2 = evaluate(state2, a)
        gap = value_distance(d1, d2)
        if gap > max_direct_gap:
            max_direct_gap = gap
            witness = repr(a)
    trivial = eta_restricted.is_trivial()
    if trivial:
        ok = max_err <= tol and max_direct_gap <= tol
        distinguished = False
        witness = None
    else:
        distinguished = max_direct_gap > distinguish_tol
        ok = max_err <= tol and distinguished
    return SymmetryReport(ok, len(elements), max_err, trivial, distinguished,
                          witness)


@dataclass(frozen=True)
class ExtremalFamily:
    component: Component
    spectrum: tuple[float, ...]
    per: PeriodicityGroup
    torus_dim: int


def extremal_states(
    g: KGraph,
    dyn: Dynamics,
    eps_match: float = 1e-9,
    box: Optional[Degree] = None,
    p_max: Optional[int] = None,
    budget: int = 200_000,
) -> tuple[ExtremalFamily, ...]:
    """One torus family per matching harmonic component: the extremal
    states over C form a torus of dimension rank(Per(C))."""
    from .harmonic import harmonic_components_for

    out = []
    for info in harmonic_components_for(g, dyn, eps_match):
        per = periodicity_group(g, info.component, box, p_max, budget)
        out.append(ExtremalFamily(info.component, info.spectrum, per, per.rank))
    return tuple(out)
