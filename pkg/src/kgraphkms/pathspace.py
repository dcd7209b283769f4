"""Infinite-path-space machinery, represented through finite cylinders.

A harmonic vector psi induces the cylinder measure
M(Z(lambda)) = e^{-beta r . d(lambda)} psi_{s(lambda)}; Kolmogorov
consistency of these masses is exactly the harmonic eigenvalue
relation, checked here to finite depth.  Shift periodicity of a
component is certified by exhaustive finite-depth search.  There is no
finite decision procedure for "holds at every depth", so the resulting
group always carries its search box and depth as explicit
certification metadata: membership answers are 'member' (relative to
that certification), 'refuted' (an exact finite witness exists), or
'unknown' (outside the certified box).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .harmonic import HarmonicVector, Scalar
from .kgraph import (
    Component,
    Degree,
    IntMatrix,
    KGraph,
    KGraphError,
    Path,
    deg_add,
    deg_join,
    deg_meet,
    deg_sub,
    deg_zero,
    mat_identity,
    mat_mul,
    mat_pow,
)

Phase = Union[Fraction, float]


class SearchExplosion(KGraphError):
    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(
            f"path enumeration needs {needed} paths, over the budget of {budget}"
        )


# ---------------------------------------------------------------------------
# Cylinder measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CylinderMeasure:
    """The probability measure with M(Z(lambda)) = e^{-beta r.d} psi_s."""

    hv: HarmonicVector

    def mass(self, p: Path) -> Scalar:
        return self.hv.dyn.boltzmann(p.degree) * self.hv.psi(p.source)

    def mass_float(self, p: Path) -> float:
        return float(self.mass(p))


@dataclass(frozen=True)
class ConsistencyViolation:
    path: Path
    color: int
    mass: float
    refined_mass: float


@dataclass(frozen=True)
class ConsistencyReport:
    ok: bool
    checked: int
    max_error: float
    total_mass_error: float
    violations: tuple[ConsistencyViolation, ...]


def check_consistency(
    measure: CylinderMeasure, depth: Degree, tol: float = 1e-10
) -> ConsistencyReport:
    """M(Z(lambda)) must equal the sum of its one-edge refinements, for
    every path of degree <= depth and every color."""
    g = measure.hv.graph
    violations: list[ConsistencyViolation] = []
    checked = 0
    max_error = 0.0
    box = [deg_zero(g.rank)] + [
        n for n in _degrees_upto(depth) if any(n)
    ]
    for n in box:
        for v in g.vertices:
            for p in g.enumerate_paths(v, n):
                lhs = measure.mass_float(p)
                for color in range(1, g.rank + 1):
                    rhs = sum(
                        measure.mass_float(g.compose(p, _edge_path(g, e)))
                        for e in g.edges_into(p.source, color)
                    )
                    err = abs(lhs - rhs)
                    max_error = max(max_error, err)
                    checked += 1
                    if err > tol:
                        violations.append(
                            ConsistencyViolation(p, color, lhs, rhs)
                        )
    total = sum(measure.mass_float(g.identity(v)) for v in g.vertices)
    total_mass_error = abs(total - 1.0)
    ok = not violations and total_mass_error <= tol
    return ConsistencyReport(ok, checked, max_error, total_mass_error,
                             tuple(violations))


def _edge_path(g: KGraph, e) -> Path:
    return Path(g, (e.id,), e.dst, e.src,
                tuple(1 if i == e.color - 1 else 0 for i in range(g.rank)))


def _degrees_upto(depth: Degree) -> list[Degree]:
    out: list[Degree] = []

    def rec(prefix: tuple[int, ...]) -> None:
        if len(prefix) == len(depth):
            out.append(prefix)
            return
        for c in range(depth[len(prefix)] + 1):
            rec(prefix + (c,))

    rec(())
    return out


@dataclass(frozen=True)
class QuasiInvarianceReport:
    ok: bool
    checked: int
    max_relative_error: float
    failures: tuple[tuple[Path, Path, float], ...]


def check_quasi_invariance(
    measure: CylinderMeasure,
    pairs: Sequence[tuple[Path, Path]],
    tol: float = 1e-10,
) -> QuasiInvarianceReport:
    """On the basic bisection carried by a pair (lambda, gamma) with a
    common source, the measure transforms by e^{beta r.(d(lambda)-d(gamma))}."""
    dyn = measure.hv.dyn
    failures: list[tuple[Path, Path, float]] = []
    max_err = 0.0
    for lam, gam in pairs:
        if lam.source != gam.source:
            raise ValueError("quasi-invariance pairs need a common source")
        lhs = measure.mass_float(gam)
        factor = float(dyn.boltzmann(deg_sub(gam.degree, lam.degree)))
        rhs = factor * measure.mass_float(lam)
        err = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        if lhs == rhs == 0.0:
            err = 0.0
        max_err = max(max_err, err)
        if err > tol:
            failures.append((lam, gam, err))
    return QuasiInvarianceReport(not failures, len(pairs), max_err,
                                 tuple(failures))


# ---------------------------------------------------------------------------
# Shift periodicity
# ---------------------------------------------------------------------------

def _restricted_matrix(g: KGraph, color: int, verts: Sequence[str]) -> IntMatrix:
    idx = [g.vertex_index(v) for v in verts]
    a = g.vertex_matrix(color)
    return tuple(tuple(a[i][j] for j in idx) for i in idx)


def _component_path_count(g: KGraph, c: Component, n: Degree) -> int:
    verts = sorted(c.vertices)
    total = mat_identity(len(verts))
    for color in range(1, g.rank + 1):
        if n[color - 1]:
            total = mat_mul(
                total, mat_pow(_restricted_matrix(g, color, verts), n[color - 1])
            )
    return sum(sum(row) for row in total)


@dataclass(frozen=True)
class ShiftRelation:
    status: str  # 'holds' | 'refuted' | 'unknown'
    m: Degree
    n: Degree
    p_max: int
    p_reached: int
    witness: Optional[Path]
    paths_checked: int


def shift_relation_holds(
    g: KGraph,
    c: Component,
    m: Degree,
    n: Degree,
    p_max: int,
    budget: int = 200_000,
) -> ShiftRelation:
    """Does sigma^m = sigma^n on every component path, to depth p_max?

    For p = 1..p_max all component paths of degree (m v n) + p*(1,..,1)
    are enumerated and the two shifted windows compared.  A mismatch is
    an exact refutation (the witness path); surviving every level only
    certifies the relation to the stated depth.
    """
    join = deg_join(m, n)
    ones = (1,) * g.rank
    checked = 0
    verts = frozenset(c.vertices)
    for p in range(1, p_max + 1):
        deg = deg_add(join, tuple(x * p for x in ones))
        level = _component_path_count(g, c, deg)
        if checked + level > budget:
            return ShiftRelation("unknown", m, n, p_max, p - 1, None, checked)
        window = tuple(x * p for x in ones)
        for v in sorted(c.vertices):
            for lam in g.enumerate_paths(v, deg, within=verts):
                checked += 1
                left = g.segment(lam, m, deg_add(m, window))
                right = g.segment(lam, n, deg_add(n, window))
                if left != right:
                    return ShiftRelation("refuted", m, n, p_max, p, lam, checked)
    return ShiftRelation("holds", m, n, p_max, p_max, None, checked)


# ---------------------------------------------------------------------------
# Integer lattices in Z^k (row echelon / Hermite-style basis)
# ---------------------------------------------------------------------------

def _canonical_sign(gvec: tuple[int, ...]) -> tuple[int, ...]:
    for x in gvec:
        if x > 0:
            return gvec
        if x < 0:
            return tuple(-y for y in gvec)
    return gvec


class _IntLattice:
    """Mutable helper: integer row lattice with pivot-per-column rows."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, list[int]] = {}  # pivot column -> row

    def add(self, vec: Sequence[int]) -> None:
        v = list(vec)
        for j in range(self.dim):
            if v[j] == 0:
                continue
            if j not in self.rows:
                if v[j] < 0:
                    v = [-x for x in v]
                self.rows[j] = v
                return
            row = self.rows[j]
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
            else:
                g, s, t = _xgcd(a, b)
                new = [s * x + t * y for x, y in zip(row, v)]
                v = [(a // g) * y - (b // g) * x for x, y in zip(row, v)]
                self.rows[j] = new
        # fully reduced to zero: already in the lattice

    def echelon(self) -> tuple[tuple[int, ...], ...]:
        pivots = sorted(self.rows)
        # reduce entries above each pivot into [0, pivot)
        for pi, j in enumerate(pivots):
            row = self.rows[j]
            for j2 in pivots[:pi]:
                upper = self.rows[j2]
                if upper[j]:
                    q = upper[j] // row[j]
                    self.rows[j2] = [x - q * y for x, y in zip(upper, row)]
        return tuple(tuple(self.rows[j]) for j in sorted(self.rows))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> tuple[tuple[int, ...], ...]:
    lat = _IntLattice(dim)
    for v in vectors:
        if any(v):
            lat.add(v)
    return lat.echelon()


def lattice_coordinates(
    basis: Sequence[Sequence[int]], vec: Sequence[int]
) -> Optional[tuple[int, ...]]:
    """Integer coordinates of vec in an echelon basis, or None."""
    v = list(vec)
    coeffs = []
    for row in basis:
        j = next((i for i, x in enumerate(row) if x), None)
        if j is None:
            continue
        if v[j] % row[j] != 0:
            return None
        q = v[j] // row[j]
        coeffs.append(q)
        v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        return None
    return tuple(coeffs)


@dataclass(frozen=True)
class PeriodicityGroup:
    """Subgroup of Z^k generated by certified shift relations.

    Everything is relative to the recorded certification: generators
    were verified exhaustively over the search box to depth p_max;
    refuted differences carry exact witnesses.
    """

    dim: int
    basis: tuple[tuple[int, ...], ...]
    box: Degree
    p_max: int
    held: tuple[tuple[int, ...], ...]
    refuted: tuple[tuple[int, ...], ...]
    unknown: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, gvec: Sequence[int]) -> Optional[tuple[int, ...]]:
        return lattice_coordinates(self.basis, tuple(gvec))

    def membership(self, gvec: Sequence[int]) -> str:
        """'member' | 'refuted' | 'unknown', honoring certification."""
        gvec = tuple(gvec)
        if not any(gvec):
            return "member"
        if _canonical_sign(gvec) in self.refuted:
            return "refuted"
        if self.coordinates(gvec) is not None:
            return "member"
        return "unknown"


def periodicity_group(
    g: KGraph,
    c: Component,
    box: Optional[Degree] = None,
    p_max: Optional[int] = None,
    budget: int = 200_000,
) -> PeriodicityGroup:
    """Search all differences g with g+, g- inside the box.

    Each difference is tested at its canonical pair (g+, g-); relations
    for other pairs with the same difference follow by applying shifts.
    """
    k = g.rank
    if box is None:
        box = (2 * len(c.vertices),) * k
    held: list[tuple[int, ...]] = []
    refuted: list[tuple[int, ...]] = []
    unknown: list[tuple[int, ...]] = []
    candidates: set[tuple[int, ...]] = set()
    for gvec in _signed_box(box):
        if any(gvec):
            candidates.add(_canonical_sign(gvec))
    p_used = 0
    for gvec in sorted(candidates, key=lambda v: (sum(abs(x) for x in v), v)):
        m = tuple(max(x, 0) for x in gvec)
        n = tuple(max(-x, 0) for x in gvec)
        pm = p_max if p_max is not None else (
            len(c.vertices) + max(deg_join(m, n))
        )
        p_used = max(p_used, pm)
        rel = shift_relation_holds(g, c, m, n, pm, budget)
        if rel.status == "holds":
            held.append(gvec)
        elif rel.status == "refuted":
            refuted.append(gvec)
        else:
            unknown.append(gvec)
    basis = lattice_basis(held, k)
    return PeriodicityGroup(
        k, basis, box, p_used, tuple(held), tuple(refuted), tuple(unknown)
    )


def _signed_box(box: Degree):
    def rec(prefix: tuple[int, ...]):
        if len(prefix) == len(box):
            yield prefix
            return
        b = box[len(prefix)]
        for x in range(-b, b + 1):
            yield from rec(prefix + (x,))

    yield from rec(())


# ---------------------------------------------------------------------------
# Characters of a periodicity group
# ---------------------------------------------------------------------------

def _norm_phase(x: Phase) -> Phase:
    if isinstance(x, Fraction):
        return x % 1
    return float(x) % 1.0


def cis(phase: Phase) -> complex:
    """exp(2 pi i phase); exact on quarter turns."""
    if isinstance(phase, (Fraction, int)):
        q = Fraction(phase) % 1
        table = {
            Fraction(0): 1 + 0j,
            Fraction(1, 4): 1j,
            Fraction(1, 2): -1 + 0j,
            Fraction(3, 4): -1j,
        }
        if q in table:
            return table[q]
        phase = float(q)
    return cmath.exp(2j * math.pi * float(phase))


@dataclass(frozen=True)
class Character:
    """Point of the dual torus, as phases against the group basis.

    xi(g) = exp(2 pi i theta . coords(g)); composition adds phases mod
    1, so xi(g + h) = xi(g) xi(h) holds exactly in phase arithmetic.
    """

    group: PeriodicityGroup
    phases: tuple[Phase, ...]

    def __post_init__(self):
        if len(self.phases) != self.group.rank:
            raise ValueError("need one phase per basis vector")
        object.__setattr__(
            self, "phases", tuple(_norm_phase(x) for x in self.phases)
        )

    def value(self, gvec: Sequence[int]) -> complex:
        coords = self.group.coordinates(gvec)
        if coords is None:
            raise KGraphError(
                f"{tuple(gvec)} is outside the certified periodicity group"
            )
        theta: Phase = Fraction(0)
        for p, q in zip(self.phases, coords):
            theta = _add_phase(theta, p * q if isinstance(p, Fraction) else float(p) * q)
        return cis(theta)

    def compose(self, other: "Character") -> "Character":
        if other.group is not self.group and other.group != self.group:
            raise ValueError("characters live on different groups")
        return Character(
            self.group,
            tuple(_add_phase(a, b) for a, b in zip(self.phases, other.phases)),
        )

    def is_trivial(self, tol: float = 1e-12) -> bool:
        for p in self.phases:
            x = float(_norm_phase(p))
            if min(x, 1.0 - x) > tol:
                return False
        return True


def _add_phase(a: Phase, b: Phase) -> Phase:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a + b) % 1
    return (float(a) + float(b)) % 1.0


def trivial_character(group: PeriodicityGroup) -> Character:
    return Character(group, (Fraction(0),) * group.rank)


def restrict_torus_point(
    group: PeriodicityGroup, eta: Sequence[Phase]
) -> Character:
    """Restrict a character of Z^k (torus point eta) to the subgroup:
    the phase against basis vector b_j is eta . b_j mod 1."""
    if len(eta) != group.dim:
        raise ValueError("torus point must have one phase per ambient color")
    phases: list[Phase] = []
    for row in group.basis:
        if all(isinstance(e, (Fraction, int)) for e in eta):
            acc: Phase = sum(
                (Fraction(e) * x for e, x in zip(eta, row)), Fraction(0)
            )
        else:
            acc = math.fsum(float(e) * x for e, x in zip(eta, row))
        phases.append(_norm_phase(acc))
    return Character(group, tuple(phases))


# ---------------------------------------------------------------------------
# Isotropy cylinder bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsotropyBounds:
    lo: float
    hi: float
    depth: int
    cylinders: int
    surviving: int
    certified: int


def _vertex_at(g: KGraph, p: Path, q: Degree) -> str:
    return g.segment(p, deg_zero(g.rank), q).source


def _tail_in_component(
    g: KGraph, tau: Path, start: Degree, c: Component
) -> bool:
    """Every grid vertex of tau from `start` on lies in C, and every
    continuation from s(tau) is trapped in C."""
    if not (g.forward_vertices(tau.source) <= c.vertices):
        return False
    for q in _grid_between(start, tau.degree):
        if _vertex_at(g, tau, q) not in c.vertices:
            return False
    return True


def _grid_between(a: Degree, b: Degree):
    ranges = [range(x, y + 1) for x, y in zip(a, b)]

    def rec(prefix: tuple[int, ...]):
        if len(prefix) == len(a):
            yield prefix
            return
        for x in ranges[len(prefix)]:
            yield from rec(prefix + (x,))

    yield from rec(())


def isotropy_cylinder_bounds(
    measure: CylinderMeasure,
    c: Component,
    per: PeriodicityGroup,
    lam: Path,
    gam: Path,
    depth: int,
    budget: int = 200_000,
) -> IsotropyBounds:
    """Monotone bounds on the measure of
    {x in Z(lambda) n Z(gamma): sigma^{d(lambda)} x = sigma^{d(gamma)} x}.

    hi sums masses of depth-`depth` refinements whose visible shift
    windows have not been refuted; lo sums those whose continuations
    are all forced to satisfy the relation (tail trapped in C and the
    degree difference certified in the periodicity group).
    """
    g = measure.hv.graph
    if lam.range != gam.range:
        return IsotropyBounds(0.0, 0.0, depth, 0, 0, 0)
    m, n = lam.degree, gam.degree
    if m == n:
        mass = measure.mass_float(lam) if lam == gam else 0.0
        return IsotropyBounds(mass, mass, depth, 1, 1 if mass else 0,
                              1 if mass else 0)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mins = g.lambda_min(lam, gam)
    if not mins:
        return IsotropyBounds(0.0, 0.0, depth, 0, 0, 0)
    gvec = deg_sub(m, n)
    member = per.membership(gvec) == "member"
    join = deg_join(m, n)
    window = (depth,) * g.rank
    total = sum(g.count_paths(delta.source, window) for delta, _ in mins)
    if total > budget:
        raise SearchExplosion(total, budget)
    start = deg_meet(m, n)
    lo = hi = 0.0
    cylinders = surviving = certified = 0
    for delta, _nu in mins:
        base = g.compose(lam, delta)
        for kappa in g.enumerate_paths(base.source, window):
            tau = g.compose(base, kappa)
            cylinders += 1
            left = g.segment(tau, m, deg_add(m, window))
            right = g.segment(tau, n, deg_add(n, window))
            if left != right:
                continue
            surviving += 1
            mass = measure.mass_float(tau)
            hi += mass
            if member and _tail_in_component(g, tau, start, c):
                certified += 1
                lo += mass
    return IsotropyBounds(lo, hi, depth, cylinders, surviving, certified)
