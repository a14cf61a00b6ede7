from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from k3mono.lattice import (
    Isometry,
    Lattice,
    determinant,
    direct_sum,
    discriminant_form,
    e8,
    hyperbolic,
    identity,
    induced_disc_action,
    is_in_O_star,
    is_isometry,
    m_lattice,
    m_n_lattice,
    m_n_perp,
    m_n_perp_twisted,
    make_standard,
    matmul,
    rank_one,
    smith_normal_form,
    twist,
)
from k3mono.groups import MNG_GENERATORS

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_snf_transforms_and_invariants(m):
    d, u, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == d
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    diag = [d[i][i] for i in range(len(m))]
    assert all(d[i][j] == 0 for i in range(len(m)) for j in range(len(m)) if i != j)
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) or (x != 0 and y % x == 0)
    ref = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    assert sorted(abs(int(ref[i, i])) for i in range(len(m))) == sorted(diag)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_determinant_matches_sympy(m):
    assert determinant(m) == sympy.Matrix(m).det()


def test_standard_lattices():
    h = make_standard("H")
    assert h.signature == (1, 1) and h.det == -1
    assert e8().det == 1 and e8().signature == (0, 8) and e8().is_even
    assert twist(h, 2).gram == ((0, 2), (2, 0))
    assert abs(twist(h, 2).det) == 4
    m2 = m_n_lattice(2)
    assert m2.rank == 19 and abs(m2.det) == 4
    assert m_lattice().signature == (1, 17)


def test_signature_agrees_with_eigenvalues():
    for lat in (m_n_lattice(3), direct_sum(twist(hyperbolic(), 2), rank_one(-8)), e8()):
        ev = np.linalg.eigvalsh(np.array(lat.gram, dtype=float))
        assert lat.signature == (int((ev > 0).sum()), int((ev < 0).sum()))


@pytest.mark.parametrize("bad", [3, 0, -1])
def test_rank_one_rejects_odd_or_zero(bad):
    with pytest.raises(ValueError):
        rank_one(bad)


def test_degenerate_and_unknown_kinds_rejected():
    with pytest.raises(ValueError):
        Lattice(((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        make_standard("D4")
    with pytest.raises(ValueError):
        Lattice.from_json({"gram": [[0, 1.5], [1.5, 0]]})


def test_json_round_trip():
    lat = m_n_perp(3)
    assert Lattice.from_json(lat.to_json()) == lat


def test_is_isometry_examples():
    g1 = ((0, 1, 0), (1, 0, 0), (0, 0, -2))
    assert is_isometry(Lattice(g1), ((1, 0, 0), (1, 1, 2), (1, 0, 1)))
    assert is_isometry(e8(), identity(8))
    assert not is_isometry(hyperbolic(), ((1, 1), (0, 1)))
    with pytest.raises(ValueError):
        is_isometry(hyperbolic(), identity(3))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mng_generators_are_isometries(n):
    for g in MNG_GENERATORS[n]:
        assert is_isometry(m_n_perp(n), g)
        assert abs(determinant(g)) == 1


def test_flipped_sign_convention_fails_for_published_generators():
    # with <+2n> instead of <-2n> the printed matrices are not isometries
    flipped = Lattice(((0, 1, 0), (1, 0, 0), (0, 0, 2)))
    assert not is_isometry(flipped, MNG_GENERATORS[1][1])


def test_discriminant_form_examples():
    assert discriminant_form(hyperbolic()).order == 1
    for n in (1, 2, 3, 5):
        a = discriminant_form(rank_one(-2 * n))
        assert a.invariant_factors == (2 * n,)
        assert a.b((1,), (1,)) == Fraction(-1, 2 * n) % 1
    a = discriminant_form(direct_sum(twist(hyperbolic(), 2), rank_one(-4)))
    assert a.invariant_factors == (2, 2, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_order_equals_det(n):
    for lat in (m_n_lattice(n), m_n_perp(n), m_n_perp_twisted(n)):
        a = discriminant_form(lat)
        assert a.order == abs(lat.det)
        assert a.quadratic is not None
        for i in range(len(a.invariant_factors)):
            assert a.quadratic[i] % 1 == a.bilinear[i][i]
            for j in range(len(a.invariant_factors)):
                assert a.bilinear[i][j] == a.bilinear[j][i]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
def test_mn_and_perp_forms_are_opposite(n):
    a = discriminant_form(m_n_lattice(n))
    b = discriminant_form(Lattice(((0, 1, 0), (1, 0, 0), (0, 0, 2 * n))))
    assert a.invariant_factors == b.invariant_factors == (2 * n,)
    # both cyclic; the matching of generators can be taken to be x -> x
    assert (a.quadratic[0] + b.quadratic[0]) % 2 == 0
    assert (a.bilinear[0][0] + b.bilinear[0][0]) % 1 == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.data())
def test_bilinear_form_well_defined(n, shift, data):
    lat = m_n_perp_twisted(n)
    a = discriminant_form(lat)
    x = data.draw(st.sampled_from(a.elements()))
    y = data.draw(st.sampled_from(a.elements()))
    vx = [c + s for c, s in zip(a.vector(x), shift)]
    assert a.coords(vx) == x
    exact = sum(vx[i] * lat.gram[i][j] * a.vector(y)[j] for i in range(3) for j in range(3))
    assert exact % 1 == a.b(x, y)
    assert sum(vx[i] * lat.gram[i][j] * vx[j] for i in range(3) for j in range(3)) % 2 == a.q(x)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.lists(st.integers(0, 2), min_size=1, max_size=5),
       st.lists(st.integers(0, 2), min_size=1, max_size=5))
def test_induced_action_is_homomorphism(n, w1, w2):
    lat = m_n_perp_twisted(n)
    a = discriminant_form(lat)
    gens = MNG_GENERATORS[n]

    def word(w):
        m = identity(3)
        for k in w:
            m = matmul(m, gens[k])
        return m

    g, h = word(w1), word(w2)
    lhs = induced_disc_action(lat, matmul(g, h), a)
    rhs = induced_disc_action(lat, g, a) @ induced_disc_action(lat, h, a)
    assert lhs.table() == rhs.table()
    assert lhs.preserves_form()


def test_o_star_examples():
    assert is_in_O_star(hyperbolic(), ((-1, 0), (0, -1)))
    lat = m_n_perp_twisted(1)
    minus = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))
    assert not is_in_O_star(lat, minus)
    phi = induced_disc_action(lat, minus)
    assert not phi.is_identity and (phi @ phi).is_identity
    assert is_in_O_star(lat, identity(3))
    with pytest.raises(ValueError):
        induced_disc_action(lat, ((1, 1, 0), (0, 1, 0), (0, 0, 1)))


def test_h1h3_squared_not_in_o_star_for_n2():
    lat = m_n_perp_twisted(2)
    g1, _, g3 = MNG_GENERATORS[2]
    g13 = matmul(g1, g3)
    assert not is_in_O_star(lat, matmul(g13, g13))


def test_isometry_type_composes():
    lat = m_n_perp(2)
    g = Isometry(MNG_GENERATORS[2][0], lat)
    h = Isometry(MNG_GENERATORS[2][2], lat)
    assert (g @ h).matrix == matmul(g.matrix, h.matrix)
    with pytest.raises(ValueError):
        Isometry(((2, 0, 0), (0, 1, 0), (0, 0, 1)), lat)
