import itertools
import math
import random
from fractions import Fraction

import pytest

import corpus as corpus_mod
import graphs as gb
from kgraphkms import (
    ComplexBox,
    Dynamics,
    HarmonicVector,
    UncertifiedPeriodicity,
    adjoint,
    ck4_expand,
    dynamics,
    evaluate,
    extremal_states,
    gauge_state,
    gauge_transform,
    multiply,
    periodicity_group,
    spanning,
    twisted_state,
    verify_harmonic,
    verify_kms,
    verify_symmetry,
    vertex_projection,
)
from kgraphkms.algebra import (
    element_to_obj,
    spanning_family,
    value_distance,
    zero,
)
from kgraphkms.harmonic import extremal_harmonic_vector


def _two_loop_state():
    g = gb.two_loop(2)
    dyn = Dynamics.from_log_base((1.0,), Fraction(2))
    hv = extremal_harmonic_vector(g, g.component_of("v"), dyn)
    return g, dyn, gauge_state(hv)


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------

def test_projection_squares():
    g = gb.flip_square()
    f = g.normal_form(["f"])
    p = spanning(g, f, f)
    assert multiply(p, p) == p


def test_vertex_projections_orthogonal():
    g = gb.sink_feeding()
    pv = vertex_projection(g, "v")
    pu = vertex_projection(g, "u")
    assert multiply(pv, pu).is_zero()
    assert multiply(pv, pv) == pv


def test_flip_square_product_merges():
    g = gb.flip_square()
    f = g.normal_form(["f"])
    gg = g.normal_form(["g"])
    fg = g.normal_form(["f", "g"])
    lhs = multiply(spanning(g, f, f), spanning(g, gg, gg))
    assert lhs == spanning(g, fg, fg)


def test_ck_isometry_relation():
    # t_lam* t_lam = p_{s(lam)}
    g = gb.sink_feeding()
    lam = g.normal_form(["c"])
    star = spanning(g, g.identity(lam.source), lam)  # t_lam*
    t = spanning(g, lam, g.identity(lam.source))
    assert multiply(star, t) == vertex_projection(g, lam.source)


def test_composition_relation():
    # t_lam t_gam = t_{lam gam} when composable
    g = gb.cycle(3)
    lam = g.normal_form(["c1"])
    gam = g.normal_form(["c2"])  # s(c1) = v1? compose requires s(lam)=r(gam)
    lam, gam = (lam, gam) if lam.source == gam.range else (gam, lam)
    t1 = spanning(g, lam, g.identity(lam.source))
    t2 = spanning(g, gam, g.identity(gam.source))
    prod = multiply(t1, t2)
    composed = g.compose(lam, gam)
    assert prod == spanning(g, composed, g.identity(composed.source))


def test_multiply_empty_minimal_extensions_zero():
    g = gb.disjoint_loops(2)
    pv = vertex_projection(g, "v")
    qw = spanning(g, g.normal_form(["q1"]), g.normal_form(["q1"]))
    assert multiply(pv, qw).is_zero()


def test_associativity_exact(corpus):
    rng = random.Random(41)
    for cg in corpus[:6]:
        g = cg.graph
        fam = spanning_family(g, (1,) * g.rank)
        if len(fam) > 12:
            fam = [fam[rng.randrange(len(fam))] for _ in range(12)]
        els = [spanning(g, s.lam, s.gam, Fraction(1)) for s in fam]
        for a, b, c in itertools.islice(
            itertools.product(els, repeat=3), 300
        ):
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_bilinearity_with_exact_coefficients():
    g = gb.two_loop(2)
    e1 = g.normal_form(["e1"])
    e2 = g.normal_form(["e2"])
    a = spanning(g, e1, e1, Fraction(1, 3)) + spanning(g, e2, e2, Fraction(2, 3))
    b = spanning(g, e1, e1, 3)
    prod = multiply(a, b)
    assert prod.coefficient(next(iter(prod._terms))) == Fraction(1)


# ---------------------------------------------------------------------------
# adjoint
# ---------------------------------------------------------------------------

def test_adjoint_swaps_and_conjugates():
    g = gb.two_loop(2)
    e1 = g.normal_form(["e1"])
    a = spanning(g, e1, g.identity("v"), 2 + 1j)
    astar = adjoint(a)
    (s, c), = astar.terms()
    assert s.lam.is_identity() and s.gam == e1
    assert c == 2 - 1j


def test_adjoint_involution_and_antihomomorphism(corpus):
    rng = random.Random(43)
    for cg in corpus[:5]:
        g = cg.graph
        fam = spanning_family(g, (1,) * g.rank)
        for _ in range(10):
            s1 = fam[rng.randrange(len(fam))]
            s2 = fam[rng.randrange(len(fam))]
            a = spanning(g, s1.lam, s1.gam, 1 + 2j)
            b = spanning(g, s2.lam, s2.gam, Fraction(1, 2))
            assert adjoint(adjoint(a)) == a
            assert adjoint(multiply(a, b)) == multiply(adjoint(b), adjoint(a))


def test_projection_self_adjoint():
    g = gb.cycle(2)
    pv = vertex_projection(g, "v1")
    assert adjoint(pv) == pv


# ---------------------------------------------------------------------------
# CK4 expansions
# ---------------------------------------------------------------------------

def test_ck4_degree_zero():
    g = gb.cycle(3)
    assert ck4_expand(g, "v1", (0,)) == vertex_projection(g, "v1")


def test_ck4_two_loop():
    g = gb.two_loop(2)
    e1, e2 = g.normal_form(["e1"]), g.normal_form(["e2"])
    expected = spanning(g, e1, e1) + spanning(g, e2, e2)
    assert ck4_expand(g, "v", (1,)) == expected


def test_ck4_idempotent_under_product():
    g = gb.multi_loop(2, 2)
    a = ck4_expand(g, "v", (1, 1))
    assert multiply(a, a) == a


def test_ck4_refines_vertex_projection():
    # multiplying p_v by the expansion reproduces the expansion
    g = gb.sink_feeding()
    a = ck4_expand(g, "v", (2,))
    assert multiply(vertex_projection(g, "v"), a) == a


# ---------------------------------------------------------------------------
# dynamics and gauge action
# ---------------------------------------------------------------------------

def test_dynamics_fixes_diagonal():
    g, dyn, _ = _two_loop_state()
    a = ck4_expand(g, "v", (2,))
    assert dynamics(a, dyn) == a


def test_dynamics_scales_off_diagonal_exactly():
    g, dyn, _ = _two_loop_state()
    t = spanning(g, g.normal_form(["e1"]), g.identity("v"))
    (_, c), = dynamics(t, dyn).terms()
    assert c == Fraction(1, 2)


def test_dynamics_beta_zero_identity():
    g = gb.two_loop(2)
    dyn = Dynamics((1.0,), 0.0)
    t = spanning(g, g.normal_form(["e1", "e2"]), g.identity("v"), 1 - 2j)
    assert dynamics(t, dyn) == t


def test_gauge_identity_and_diagonal():
    g = gb.flip_square()
    a = spanning(g, g.normal_form(["f"]), g.normal_form(["f"]), 3)
    assert gauge_transform(a, (Fraction(0), Fraction(0))) == a
    assert gauge_transform(a, (Fraction(1, 3), 0.25)) == a


def test_gauge_phase_flip():
    g = gb.flip_square()
    t = spanning(g, g.normal_form(["f"]), g.identity("v"))
    out = gauge_transform(t, (Fraction(1, 2), Fraction(0)))
    (_, c), = out.terms()
    assert c == -1


def test_gauge_composition_is_phase_addition(corpus):
    rng = random.Random(47)
    for cg in corpus[:4]:
        g = cg.graph
        fam = spanning_family(g, (1,) * g.rank)
        eta1 = tuple(Fraction(rng.randrange(8), 8) for _ in range(g.rank))
        eta2 = tuple(Fraction(rng.randrange(8), 8) for _ in range(g.rank))
        combo = tuple(a + b for a, b in zip(eta1, eta2))
        for _ in range(6):
            s = fam[rng.randrange(len(fam))]
            a = spanning(g, s.lam, s.gam, 1 + 1j)
            lhs = gauge_transform(gauge_transform(a, eta1), eta2)
            rhs = gauge_transform(a, combo)
            (_, cl), = lhs.terms()
            (_, cr), = rhs.terms()
            assert complex(cl) == pytest.approx(complex(cr), abs=1e-12)


# ---------------------------------------------------------------------------
# gauge-invariant evaluation
# ---------------------------------------------------------------------------

def test_evaluate_vertex_projection():
    g, dyn, state = _two_loop_state()
    assert evaluate(state, vertex_projection(g, "v")) == pytest.approx(1.0)


def test_evaluate_single_edge_projection():
    g, dyn, state = _two_loop_state()
    e1 = g.normal_form(["e1"])
    assert evaluate(state, spanning(g, e1, e1)) == pytest.approx(0.5)


def test_evaluate_off_diagonal_vanishes():
    g, dyn, state = _two_loop_state()
    t = spanning(g, g.normal_form(["e1"]), g.normal_form(["e2"]))
    assert evaluate(state, t) == 0


def test_state_positivity_spot_check(corpus):
    rng = random.Random(53)
    for cg in corpus[:8]:
        g = cg.graph
        for dyn, infos in corpus_mod.matching_sessions(g):
            hv = extremal_harmonic_vector(g, infos[0].component, dyn)
            state = gauge_state(hv)
            fam = spanning_family(g, (1,) * g.rank)
            for _ in range(5):
                a = zero(g)
                for _ in range(rng.randrange(1, 6)):
                    s = fam[rng.randrange(len(fam))]
                    a = a + spanning(
                        g, s.lam, s.gam, complex(rng.uniform(-1, 1),
                                                 rng.uniform(-1, 1))
                    )
                val = evaluate(state, multiply(adjoint(a), a))
                assert complex(val).real >= -1e-10
                assert abs(complex(val).imag) <= 1e-10


def test_vertex_values_are_harmonic(corpus):
    # the vector v -> omega(p_v) must pass the harmonic check, for
    # extremal states and for mixtures
    rng = random.Random(59)
    for cg in corpus[:10]:
        g = cg.graph
        for dyn, infos in corpus_mod.matching_sessions(g):
            weights = [rng.random() + 0.1 for _ in infos]
            total = sum(weights)
            psi = [0.0] * len(g.vertices)
            for w, info in zip(weights, infos):
                for i in range(len(g.vertices)):
                    psi[i] += (w / total) * info.x[i]
            state = gauge_state(HarmonicVector(g, dyn, tuple(psi)))
            values = [
                complex(evaluate(state, vertex_projection(g, v))).real
                for v in g.vertices
            ]
            assert verify_harmonic(g, tuple(values), dyn).ok


# ---------------------------------------------------------------------------
# KMS verification
# ---------------------------------------------------------------------------

def test_kms_identity_two_loop_exact():
    g, dyn, state = _two_loop_state()
    fam = spanning_family(g, (2,))
    els = [spanning(g, s.lam, s.gam) for s in fam]
    pairs = [(a, b) for a in els for b in els]
    rep = verify_kms(state, pairs, dyn)
    assert rep.ok
    assert rep.max_violation <= 1e-12


def test_kms_wrong_beta_fails():
    g, dyn, state = _two_loop_state()
    bad = Dynamics((1.0,), 1.0)
    fam = spanning_family(g, (2,))
    els = [spanning(g, s.lam, s.gam) for s in fam]
    pairs = [(a, b) for a in els for b in els]
    rep = verify_kms(state, pairs, bad)
    assert not rep.ok
    assert rep.max_violation > 1e-3


def test_kms_projection_pair_tautology():
    g, dyn, state = _two_loop_state()
    pv = vertex_projection(g, "v")
    rep = verify_kms(state, [(pv, pv)], dyn)
    assert rep.ok and rep.max_violation == 0.0


# ---------------------------------------------------------------------------
# twisted states
# ---------------------------------------------------------------------------

def test_twisted_diagonal_matches_gauge_invariant():
    g = gb.flip_square()
    dyn = Dynamics((0.0, 0.0), 1.0)
    c = g.component_of("v")
    state = twisted_state(g, dyn, c, (Fraction(1, 3), Fraction(1, 7)), depth=1)
    f = g.normal_form(["f"])
    assert evaluate(state, spanning(g, f, f)) == pytest.approx(1.0)


def test_twisted_phase_evaluation():
    g = gb.flip_square()
    dyn = Dynamics((0.0, 0.0), 1.0)
    c = g.component_of("v")
    t_f = spanning(g, g.normal_form(["f"]), g.identity("v"))
    for phases, expected in [
        ((Fraction(0), Fraction(0)), 1),
        ((Fraction(1, 2), Fraction(0)), -1),
        ((Fraction(1, 4), Fraction(0)), 1j),
    ]:
        state = twisted_state(g, dyn, c, phases, depth=1)
        assert evaluate(state, t_f) == pytest.approx(expected)


def test_twisted_refuted_difference_is_zero():
    g = gb.two_loop(2)
    dyn = Dynamics.from_log_base((1.0,), Fraction(2))
    c = g.component_of("v")
    state = twisted_state(g, dyn, c, (), depth=2)
    t = spanning(g, g.normal_form(["e1"]), g.identity("v"))
    assert evaluate(state, t) == 0


def test_twisted_unknown_membership_warns_interval():
    g = gb.two_loop(2)
    dyn = Dynamics.from_log_base((1.0,), Fraction(2))
    c = g.component_of("v")
    state = twisted_state(g, dyn, c, (), depth=1)
    lam = g.normal_form(["e1"] * 5)
    t = spanning(g, lam, g.identity("v"))
    with pytest.warns(UncertifiedPeriodicity):
        val = evaluate(state, t)
    assert isinstance(val, ComplexBox)
    assert val.notes


def test_twisted_cycle_character_separates():
    g = gb.cycle(3)
    dyn = Dynamics((1.0,), 0.0)
    c = g.component_of("v1")
    per = periodicity_group(g, c)
    full = g.enumerate_paths("v1", (3,), "v1")[0]
    t = spanning(g, full, g.identity("v1"))
    vals = []
    for j in range(3):
        state = twisted_state(g, dyn, c, (Fraction(j, 3),), per=per, depth=1)
        vals.append(complex(evaluate(state, t)))
    assert vals[0] == pytest.approx(1 / 3)
    assert vals[1] == pytest.approx(complex(1 / 3) * complex(-0.5, 3 ** 0.5 / 2))
    for a, b in itertools.combinations(vals, 2):
        assert abs(a - b) > 1e-6


# ---------------------------------------------------------------------------
# symmetry of the extremal family
# ---------------------------------------------------------------------------

def test_symmetry_trivial_eta():
    g = gb.flip_square()
    dyn = Dynamics((0.0, 0.0), 1.0)
    c = g.component_of("v")
    rep = verify_symmetry(g, dyn, c, (), (Fraction(0), Fraction(0)), depth=1)
    assert rep.ok and rep.eta_trivial_on_group and not rep.distinguished


def test_symmetry_flip_square_half_phase():
    g = gb.flip_square()
    dyn = Dynamics((0.0, 0.0), 1.0)
    c = g.component_of("v")
    rep = verify_symmetry(g, dyn, c, (), (Fraction(1, 2), Fraction(0)), depth=1)
    assert rep.ok and rep.distinguished


def test_symmetry_cycle_third_rotation():
    # Per = 3Z, so the ambient point 1/9 restricts to the basis phase
    # 1/3 and rotates the three distinguished characters freely, while
    # the ambient 1/3-grid restricts trivially (3 * 1/3 = 1).
    g = gb.cycle(3)
    dyn = Dynamics((1.0,), 0.0)
    c = g.component_of("v1")
    per = periodicity_group(g, c)
    full = [
        spanning(g, g.enumerate_paths(v, (3,), v)[0], g.identity(v))
        for v in g.vertices
    ]
    rep = verify_symmetry(
        g, dyn, c, (), (Fraction(1, 9),), per=per, elements=full, depth=1
    )
    assert rep.ok and rep.distinguished and not rep.eta_trivial_on_group
    rep2 = verify_symmetry(
        g, dyn, c, (), (Fraction(1, 3),), per=per, elements=full, depth=1
    )
    assert rep2.ok and rep2.eta_trivial_on_group


# ---------------------------------------------------------------------------
# extremal state families
# ---------------------------------------------------------------------------

def test_extremal_states_two_loop():
    g = gb.two_loop(2)
    fams = extremal_states(g, Dynamics.from_log_base((1.0,), Fraction(2)))
    assert len(fams) == 1
    assert fams[0].torus_dim == 0
    assert fams[0].per.basis == ()


def test_extremal_states_flip_square():
    g = gb.flip_square()
    fams = extremal_states(g, Dynamics((0.0, 0.0), 1.0))
    assert len(fams) == 1
    assert fams[0].torus_dim == 2


def test_extremal_states_no_match():
    g = gb.two_loop(2)
    assert extremal_states(g, Dynamics((1.0,), 1.0)) == ()


# ---------------------------------------------------------------------------
# serialization, intervals
# ---------------------------------------------------------------------------

def test_element_serialization_sorted():
    g = gb.two_loop(2)
    e1, e2 = g.normal_form(["e1"]), g.normal_form(["e2"])
    a = spanning(g, e2, e2, 2) + spanning(g, e1, e1, Fraction(1, 2))
    obj = element_to_obj(a)
    assert obj == [
        {"source": "v", "lambda": ["e1"], "gamma": ["e1"], "re": 0.5, "im": 0.0},
        {"source": "v", "lambda": ["e2"], "gamma": ["e2"], "re": 2.0, "im": 0.0},
    ]


def test_value_distance_boxes():
    a = ComplexBox(0.0, 1.0, 0.0, 0.0)
    b = ComplexBox(0.5, 2.0, 0.0, 0.0)
    assert value_distance(a, b) == 0.0
    c = ComplexBox(2.0, 3.0, 0.0, 0.0)
    assert value_distance(a, c) == 1.0
    assert value_distance(1 + 0j, a) == 0.0


def test_box_scale_rotates():
    b = ComplexBox(1.0, 2.0, 0.0, 0.0).scale(1j)
    assert b.im_lo == pytest.approx(1.0) and b.im_hi == pytest.approx(2.0)
    assert b.re_lo == pytest.approx(0.0) and b.re_hi == pytest.approx(0.0)
