import cmath
import os
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from k3mono.moduli import (
    FunctionalInvariant,
    MPoint,
    alternate_fibre_roots,
    catalog,
    check_thin,
    check_thin_by_threefold,
    critical_value,
    degeneracy_invariant,
    functional_invariant_map,
    is_degenerate,
    m1_catalog,
    m1_family,
    m1_gamma,
    ramification_profile,
    residuals,
    sigma_pi,
    thin_predicate,
)

x = sympy.Symbol("x")
A_, t_, u_, k_ = sympy.symbols("A t u k")

cplx = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


def discriminant_oracle(a, b) -> bool:
    """Exact: does 4x^3 - 3ax - (b -+ 1) have a repeated root?"""
    a, b = sympy.Rational(a), sympy.Rational(b)
    return any(sympy.discriminant(4 * x**3 - 3 * a * x - (b + s), x) == 0 for s in (1, -1))


def test_sigma_pi_examples():
    s, p, js = sigma_pi(MPoint(0, 0))
    assert (s, p) == (1, 0)
    assert [round(abs(j), 12) for j in js] == [0, 1]
    assert sigma_pi(MPoint(1, 1))[:2] == (1, 1)
    for q in (Fraction(1, 3), Fraction(-2, 5), Fraction(7)):
        assert sigma_pi(MPoint(q**2, q**3))[0] == 1


@settings(max_examples=100, deadline=None)
@given(cplx, cplx, cplx.filter(lambda z: abs(z) > 0.1), cplx.filter(lambda z: abs(z) > 0.3))
def test_sigma_pi_weighted_invariance(a, b, d, lam):
    p = MPoint(a, b, d)
    s1, p1, _ = sigma_pi(p)
    s2, p2, _ = sigma_pi(p.rescale(lam))
    s3, p3, _ = sigma_pi(p.normalized())
    for u, v in ((s1, s2), (p1, p2), (s1, s3), (p1, p3)):
        assert abs(u - v) <= 1e-10 * max(1, abs(u))
    assert p.normalized().normalized() == p.normalized()
    assert abs(degeneracy_invariant(p.rescale(lam)) - lam**12 * degeneracy_invariant(p)) <= 1e-8 * max(
        1, abs(lam**12 * degeneracy_invariant(p))
    )


def test_roots_examples():
    r = alternate_fibre_roots(MPoint(1, 0))
    assert r.degenerate
    assert min(abs(z + 0.5) for z in r.roots_minus) < 1e-6
    r0 = alternate_fibre_roots(MPoint(0, 0))
    assert not r0.degenerate
    for z in r0.roots_minus:
        assert abs(z**3 - 0.25) < 1e-12
    for z in r0.roots_plus:
        assert abs(z**3 + 0.25) < 1e-12
    assert list(r0.roots_minus) == sorted(r0.roots_minus, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


@settings(max_examples=200, deadline=None)
@given(cplx, cplx)
def test_root_residuals(a, b):
    p = MPoint(a, b)
    r = alternate_fibre_roots(p)
    if not r.degenerate:
        assert residuals(p, r) < 1e-10


def _sample(rng):
    if rng.random() < 0.5:
        return Fraction(rng.randint(-40, 40), rng.randint(1, 12)), Fraction(rng.randint(-40, 40), rng.randint(1, 12))
    s = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return s * s, s**3 + rng.choice((1, -1))


def test_degeneracy_three_ways_agree():
    rng = random.Random(20241015)
    flagged = 0
    for _ in range(1000):
        a, b = _sample(rng)
        exact = is_degenerate(MPoint(a, b))
        oracle = discriminant_oracle(a, b)
        floating = is_degenerate(MPoint(float(a) + 0j, float(b) + 0j))
        gap = alternate_fibre_roots(MPoint(complex(a), complex(b))).min_gap() < 1e-5 * (1 + abs(float(a)) ** 0.5)
        assert exact == oracle == floating == gap, (a, b)
        flagged += exact
    assert 300 < flagged < 700


def test_m1_family_examples():
    for alpha in (Fraction(1), Fraction(-3, 7), Fraction(5, 2)):
        assert m1_gamma(alpha, 0) == -1728 * alpha
    fam = m1_family(0, Fraction(1, 3))
    assert fam.gamma == 0 and not fam.smooth and fam.point is None
    assert m1_family(Fraction(-1, 1728), 0).smooth  # gamma = 1
    assert m1_family(Fraction(1, 1728), 0).gamma == -1 and not m1_family(Fraction(1, 1728), 0).smooth
    with pytest.raises(ZeroDivisionError):
        m1_family(1, Fraction(1, 4))


def test_m1_family_fails_assumption_identically():
    rng = random.Random(7)
    for _ in range(100):
        g = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        alpha = g * (4 * 0.1 - 1) ** 3 / 1728
        fam = m1_family(alpha, 0.1)
        assert abs(fam.gamma - g) < 1e-9 * max(1, abs(g))
        assert is_degenerate(fam.point)
    gam = sympy.Symbol("gamma")
    assert sympy.expand(degeneracy_invariant(MPoint(1, gam + 1, gam**2))) == 0


def test_m1_catalog_gamma_matches_alpha_beta():
    rows = m1_catalog()
    assert len(rows) == 5
    for r in rows:
        ns = {"A": A_, "t": t_, "u": u_, "k": k_}
        alpha, beta, gamma = (sympy.sympify(getattr(r, f), locals=ns) for f in ("alpha", "beta", "gamma"))
        assert sympy.simplify(1728 * alpha / (4 * beta - 1) ** 3 - gamma) == 0


def _pole_zero_orders(expr):
    """Orders of gamma(t : u) at its zeros and poles on P^1 (set u = 1, add t = oo)."""
    f = sympy.factor(expr.subs(u_, 1))
    num, den = sympy.fraction(sympy.together(f))
    deg = sympy.degree(num, t_) - sympy.degree(den, t_)
    zeros = [m for _, m in sympy.roots(sympy.Poly(num, t_)).items()]
    poles = [m for _, m in sympy.roots(sympy.Poly(den, t_)).items()]
    if deg < 0:
        zeros.append(-deg)
    elif deg > 0:
        poles.append(deg)
    return sorted(zeros), sorted(poles)


def test_m1_gamma_orders_match_ij():
    ij = {r.threefold: (r.i, r.j) for r in catalog() if r.lattice == "M1"}
    for r in m1_catalog():
        gamma = sympy.sympify(r.gamma, locals={"A": A_, "t": t_, "u": u_, "k": k_})
        zeros, poles = _pole_zero_orders(gamma)
        i, j = ij[r.threefold]
        assert zeros == [i + j]  # totally ramified over the cusp gamma = 0
        assert poles == sorted((i, j))  # orders i, j over gamma = oo


def test_functional_invariant_examples():
    fi = FunctionalInvariant(1, 4)
    assert functional_invariant_map(fi, 1, 2) == 32
    assert cmath.isinf(functional_invariant_map(fi, 0, 1))
    with pytest.raises(ValueError):
        functional_invariant_map(fi, 0, 0)


def test_critical_point_symbolic():
    for i in range(1, 6):
        for j in range(1, 6):
            lam = A_ / (t_**i * (1 - t_) ** j)
            crit = sympy.solve(sympy.numer(sympy.together(sympy.diff(lam, t_))), t_)
            finite = [c for c in crit if c not in (0, 1)]
            assert finite == [sympy.Rational(i, i + j)]
            val = sympy.simplify(lam.subs(t_, finite[0]) / A_)
            assert val == sympy.Rational((i + j) ** (i + j), i**i * j**j)
            assert critical_value(FunctionalInvariant(i, j)) == val


def test_quintic_profile():
    pr = ramification_profile(FunctionalInvariant(1, 4, A=1))
    v = critical_value(FunctionalInvariant(1, 4))
    assert v == Fraction(5**5, 2**8)
    assert pr.over(complex("inf")) == [4, 1]
    assert pr.over(0) == [5]
    assert pr.over(v) == [2, 1, 1, 1]
    assert sorted(p.order for p in pr.critical()) == [2, 4, 5]


@pytest.mark.parametrize("row", catalog(), ids=lambda r: f"{r.lattice}-{r.threefold}")
def test_profile_orders_sum_to_degree(row):
    pr = ramification_profile(FunctionalInvariant(row.i, row.j, A=0.37 - 0.2j))
    for target in pr.targets():
        assert sum(pr.over(target)) == row.i + row.j
    # Riemann-Hurwitz for a degree i+j self-map of P^1
    assert sum(p.order - 1 for p in pr.points) == 2 * (row.i + row.j) - 2


def test_profile_limits():
    with pytest.raises(ValueError):
        ramification_profile(FunctionalInvariant(6, 7))
    with pytest.raises(ValueError):
        FunctionalInvariant(0, 3)


def test_catalog_shape():
    rows = catalog()
    assert len(rows) == 19
    counts = {}
    for r in rows:
        counts[r.lattice] = counts.get(r.lattice, 0) + 1
    assert counts == {"M1": 5, "M2": 5, "M3": 5, "M4": 3, "M": 1}


def test_thin_predicate_examples():
    assert thin_predicate(FunctionalInvariant(1, 4)) == "thin"
    assert thin_predicate(FunctionalInvariant(2, 4)) == "arithmetic"
    assert thin_predicate(FunctionalInvariant(1, 1)) == "thin"


def test_thin_predicate_on_toric_rows():
    checks = check_thin(toric_only=True)
    assert len(checks) == 15
    assert all(c.agrees for c in checks)
    assert all(check_thin_by_threefold().values())


def test_non_toric_rows_are_outside_the_predicate():
    bad = [c.row for c in check_thin() if not c.agrees]
    assert {(r.lattice, r.threefold) for r in bad} == {("M3", "P4[5]"), ("M4", "P5[2,4]"), ("M4", "P6[2,2,3]")}
    assert not any(r.toric for r in bad)


def test_data_override(tmp_path, monkeypatch):
    (tmp_path / "table1.jsonl").write_text(
        "# one row\n" '{"lattice": "M2", "n": 2, "threefold": "X", "toric": true, "i": 3, "j": 3, "classification": "thin"}\n'
    )
    monkeypatch.setenv("K3MONO_DATA", str(tmp_path))
    rows = catalog()
    assert len(rows) == 1 and rows[0].threefold == "X"


def test_bad_catalog_line(tmp_path):
    p = tmp_path / "t.jsonl"
    p.write_text("{not json}\n")
    with pytest.raises(ValueError):
        catalog(p)
