import random

import numpy as np
import pytest

import graphs as gb
from kgraphkms import (
    WellChosenSet,
    a_f_matrix,
    certify_well_chosen,
    default_well_chosen,
    perron_vector,
    spectral_radius,
)
from kgraphkms.harmonic import component_spectrum
from kgraphkms.spectral import (
    collatz_wielandt_bounds,
    float_matrix,
    spectrum_product,
)


def test_default_box_flip_square():
    g = gb.flip_square()
    f = default_well_chosen(g)
    assert set(f.degrees) == {(0, 1), (1, 0), (1, 1)}


def test_default_box_cycle():
    g = gb.cycle(3)
    f = default_well_chosen(g)
    assert set(f.degrees) == {(1,), (2,), (3,)}


def test_default_certifies_on_corpus(corpus):
    for cg in corpus:
        assert certify_well_chosen(cg.graph, default_well_chosen(cg.graph))


def test_random_extensions_stay_well_chosen(corpus):
    rng = random.Random(5)
    for cg in corpus:
        g = cg.graph
        f = default_well_chosen(g)
        extra = [
            tuple(rng.randrange(1, 4) for _ in range(g.rank))
            for _ in range(2)
        ]
        assert certify_well_chosen(g, f.extended(extra))


def test_well_chosen_rejects_empty_and_zero():
    with pytest.raises(ValueError):
        WellChosenSet(())
    with pytest.raises(ValueError):
        WellChosenSet(((0, 0),))


def test_a_f_flip():
    g = gb.flip_square()
    assert a_f_matrix(g, default_well_chosen(g)) == ((3,),)


def test_a_f_sink_feeding_by_hand():
    # A = [[2,0],[1,0]] on (v, u); A + A^2 = [[6,0],[3,0]]
    g = gb.sink_feeding()
    af = a_f_matrix(g, WellChosenSet(((1,), (2,))))
    iv, iu = g.vertex_index("v"), g.vertex_index("u")
    assert af[iv][iv] == 6
    assert af[iu][iv] == 3
    assert af[iu][iu] == 0


def test_a_f_multiset_counts_multiplicity():
    g = gb.two_loop(2)
    af = a_f_matrix(g, WellChosenSet(((1,), (1,))))
    assert af == ((4,),)  # 2 * A_1


def test_spectral_radius_scalar():
    assert spectral_radius([[2.0]]) == pytest.approx(2.0, abs=1e-12)


def test_spectral_radius_block_maximum():
    g = gb.sink_feeding()
    af = a_f_matrix(g, WellChosenSet(((1,), (2,))))
    assert spectral_radius(af) == pytest.approx(6.0, abs=1e-9)


def test_spectral_radius_empty_subset():
    assert spectral_radius([[2.0]], subset=[]) == 0.0


def test_spectral_radius_periodic_block():
    # pure 2-cycle with uneven weights: rho = sqrt(2), bare power
    # iteration oscillates but the shifted iteration settles
    m = [[0.0, 2.0], [1.0, 0.0]]
    assert spectral_radius(m) == pytest.approx(2 ** 0.5, abs=1e-9)


def test_spectral_radius_monotone_in_subset(corpus):
    rng = random.Random(13)
    for cg in corpus[:10]:
        g = cg.graph
        af = a_f_matrix(g, default_well_chosen(g))
        n = len(g.vertices)
        full = list(range(n))
        small = sorted(rng.sample(full, rng.randrange(1, n + 1)))
        assert spectral_radius(af, small) <= spectral_radius(af, full) + 1e-12


def test_spectral_radius_against_dense_eigensolve(corpus):
    for cg in corpus:
        g = cg.graph
        af = float_matrix(a_f_matrix(g, default_well_chosen(g)))
        expected = max(abs(np.linalg.eigvals(af)))
        assert spectral_radius(af) == pytest.approx(expected, abs=1e-8)


def test_perron_scalar():
    assert perron_vector([[3.0]]) == pytest.approx([1.0])


def test_perron_symmetric():
    x = perron_vector([[1.0, 1.0], [1.0, 1.0]])
    assert x == pytest.approx([0.5, 0.5], abs=1e-12)


def test_perron_random_positive_residual():
    rng = np.random.default_rng(42)
    for _ in range(5):
        m = rng.uniform(0.1, 3.0, size=(5, 5))
        x = perron_vector(m)
        lo, hi = collatz_wielandt_bounds(m, x)
        rho = (lo + hi) / 2
        assert np.abs(m @ x - rho * x).max() <= 1e-10
        assert (x > 0).all()
        assert abs(x.sum() - 1.0) <= 1e-12


def test_collatz_wielandt_sandwich():
    rng = np.random.default_rng(0)
    m = rng.uniform(0.5, 2.0, size=(4, 4))
    x = perron_vector(m)
    lo, hi = collatz_wielandt_bounds(m, x)
    rho = max(abs(np.linalg.eigvals(m)))
    assert lo - 1e-10 <= rho <= hi + 1e-10
    assert hi - lo <= 1e-10


def test_perron_rejects_nonpositive():
    with pytest.raises(ValueError):
        perron_vector([[1.0, 0.0], [1.0, 1.0]])


def test_block_radius_factors_over_colors(corpus):
    # rho(A_F^C) must equal sum over F of prod_i rho(A_i^C)^{n_i}
    for cg in corpus:
        g = cg.graph
        f = default_well_chosen(g)
        af = a_f_matrix(g, f)
        for c in g.components():
            idx = sorted(g.vertex_index(v) for v in c.vertices)
            lhs = spectral_radius(af, idx)
            spec = component_spectrum(g, c)
            rhs = sum(spectrum_product(spec, n) for n in f)
            if c.trivial:
                assert lhs == 0.0 and rhs == 0.0
            else:
                assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-8)
