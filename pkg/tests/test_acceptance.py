"""The ten acceptance criteria, one test each, at their stated tolerances and time limits."""

import cmath
import math
import random
import time
from fractions import Fraction

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from conftest import criterion
from k3mono.groups import canonical_name, close, full_aut, identify, inverse, mng_disc_actions, mng_group
from k3mono.lattice import direct_sum, discriminant_form, hyperbolic, twist
from k3mono.modular import CongruenceSubgroup, cover_fixtures, curve_data, verify_modular_lemma
from k3mono.moduli import (
    FunctionalInvariant,
    MPoint,
    catalog,
    is_degenerate,
    m1_family,
    m1_gamma,
    ramification_profile,
)
from k3mono.monodromy import (
    DegeneratePathError,
    LoopPath,
    assumption_check,
    cover_report,
    track_loop,
)
from k3mono.pencil import accepted_group, build_nikulin

SEED = 20261015
x = sympy.Symbol("x")


def test_criterion_1_mng_groups():
    with criterion(1, "M_n groups have orders 12/8/12/8 named S3xC2 (= D12)/D8/D12/D8"):
        expected = {1: (12, "S3xC2"), 2: (8, "D8"), 3: (12, "D12"), 4: (8, "D8")}
        for n, (order, name) in expected.items():
            t0 = time.perf_counter()
            gid = identify(mng_group(n))
            assert time.perf_counter() - t0 < 1
            assert gid.order == order
            assert gid.name == canonical_name(name)
            assert name == gid.name or name in gid.aliases


def test_criterion_2_full_automorphisms():
    with criterion(2, "automorphisms of the (Z/2)^4 split form: order 72, (S3xS3)⋊C2"):
        t0 = time.perf_counter()
        h2 = twist(hyperbolic(), 2)
        form = discriminant_form(direct_sum(h2, h2))
        aut = full_aut(form)
        gid = identify(aut)
        assert time.perf_counter() - t0 < 1
        assert form.invariant_factors == (2, 2, 2, 2)
        assert aut.order == 72 and gid.name == "(S3xS3)⋊C2"


def test_criterion_3_generator_relations():
    with criterion(3, "generator relations hold as discriminant actions"):
        failed = []
        h1, h2, h3 = mng_disc_actions(1)
        if (h1 @ h2 @ h1).table() != (h2 @ h2).table():
            failed.append("n=1: g1 g2 g1 = g2^2")
        for n in (2, 3, 4):
            h1, h2, h3 = mng_disc_actions(n)
            r = h1 @ h3
            if (r @ r).table() != h2.table():
                failed.append(f"n={n}: (h1h3)^2 = h2")
            if (h1 @ r @ h1).table() != inverse(r.table()):
                failed.append(f"n={n}: h1(h1h3)h1 = (h1h3)^-1")
        h1, h2, h3 = mng_disc_actions(4)
        if (h1 @ h2).table() != (h2 @ h1).table() or (h3 @ h2).table() != (h2 @ h3).table():
            failed.append("n=4: commutations")
        assert not failed, f"relations that do not hold: {failed}"


def test_criterion_4_modular_lemma():
    with criterion(4, "R_n(m) in O* iff m in Gamma(2) & Gamma0(2n), entries <= 20, n = 1..4"):
        t0 = time.perf_counter()
        reports = [verify_modular_lemma(n, 20) for n in (1, 2, 3, 4)]
        assert time.perf_counter() - t0 < 60
        for rep in reports:
            assert rep.checked > 0 and rep.in_subgroup > 0
            assert rep.counterexamples == ()


def test_criterion_5_cover_data():
    with criterion(5, "cusp widths, composite degrees 12/8/12/8 and deck groups"):
        data = lambda name: curve_data(CongruenceSubgroup.parse(name))
        assert data("gamma0:2").cusps == 2
        assert sorted(data("gamma0:4").cusp_widths, reverse=True) == [4, 1, 1]
        assert sorted(data("gamma0:8").cusp_widths, reverse=True) == [8, 2, 1, 1]
        assert sorted(data("cm:4").cusp_widths, reverse=True) == [8, 8, 2, 2, 2, 2]
        for n, degree in zip((1, 2, 3, 4), (12, 8, 12, 8)):
            fx = cover_fixtures(n)
            assert fx.total_degree == degree
            assert fx.composite == fx.composite_fixture
            assert identify(mng_group(n)).name in {canonical_name(d) for d in fx.deck}


def test_criterion_6_quintic():
    with criterion(6, "quintic invariant: critical value 5^5/2^8, orders {1,4} over inf, 5 over 0"):
        t0 = time.perf_counter()
        prof = ramification_profile(FunctionalInvariant(1, 4, A=1))
        assert time.perf_counter() - t0 < 1
        finite = [t for t in prof.targets() if t != 0 and t != complex("inf")]
        critical = [t for t in finite if prof.over(t) != [1] * 5]
        assert len(critical) == 1
        assert abs(complex(critical[0]) - 12.20703125) <= 1e-9 * 12.20703125
        assert prof.over(critical[0]) == [2, 1, 1, 1]
        assert sorted(prof.over(complex("inf"))) == [1, 4]
        assert prof.over(0) == [5]


def test_criterion_7_thin_predicate():
    with criterion(7, "(i != 2 and j != 2) <=> thin on all 19 catalog rows"):
        rows = catalog()
        assert len(rows) == 19
        mismatches = []
        for r in rows:
            predicted = "thin" if (r.i != 2 and r.j != 2) else "arithmetic"
            if predicted != r.classification:
                mismatches.append(f"{r.lattice} {r.threefold} ({r.i},{r.j}) is {r.classification}")
        assert not mismatches, f"rows contradicting the predicate: {mismatches}"


def _random_loop(rng, base, corners=4, radius=0.6, per_edge=24):
    a0, b0 = base
    pts = [base]
    for _ in range(corners):
        pts.append((a0 + radius * complex(*rng.normal(size=2)), b0 + radius * complex(*rng.normal(size=2))))
    pts.append(base)
    dense = [base]
    for (p0, q0), (p1, q1) in zip(pts, pts[1:]):
        dense += [(p0 + k / per_edge * (p1 - p0), q0 + k / per_edge * (q1 - q0)) for k in range(1, per_edge + 1)]
    dense[-1] = base
    return LoopPath(tuple(dense), "random")


def test_criterion_8_monodromy_engine():
    with criterion(8, "monodromy engine: identity, inverse, homomorphism, stability, bounds, transposition"):
        t0 = time.perf_counter()
        small = LoopPath.circle(0.3, 0.05, 32, "small", a_of=lambda s: s, b_of=lambda s: 0.2j)
        assert track_loop(small).is_identity

        sigma_one = LoopPath.circle(2 ** (-1 / 3), 0.1, 64, "sigma1", a_of=lambda s: s * s, b_of=lambda s: s**3)
        step = track_loop(sigma_one)
        assert track_loop(sigma_one.reversed()) == step.inverse()

        rng = np.random.default_rng(SEED)
        print(f"random loops seed {SEED}")
        base = (0.3 + 0.2j, 0.1 - 0.4j)
        pairs, steps = 0, []
        while pairs < 20:
            l1, l2 = _random_loop(rng, base), _random_loop(rng, base)
            try:
                s1, s2 = track_loop(l1), track_loop(l2)
            except DegeneratePathError:
                continue
            assert track_loop(l1.then(l2)) == s1.then(s2)
            assert track_loop(l1.refined(2)) == track_loop(l1.refined(4)) == s1
            steps += [s1, s2]
            pairs += 1

        d_samples = [(0.1, 0.2, cmath.exp(2j * math.pi * k / 64)) for k in range(65)]
        d_samples[-1] = d_samples[0]
        swap = track_loop(LoopPath.from_abd(d_samples, "d"))
        for run in (steps, [step, swap], steps + [swap]):
            rep = cover_report(run)
            assert 36 % rep.H_order == 0 and rep.G_order <= 72

        assert step.order == 2 and step.cycle_type() == (2, 1, 1, 1, 1)
        assert track_loop(sigma_one.refined(2)) == step == track_loop(sigma_one.refined(4))
        assert time.perf_counter() - t0 < 120


def test_criterion_9_nikulin():
    with criterion(9, "Nikulin lattice: even, negative definite, rank 8, |det| 64, (Z/2)^6; accepted group order 72"):
        t0 = time.perf_counter()
        nik = build_nikulin()
        gram = np.array(nik.gram)
        assert nik.lattice.is_even and gram.shape == (8, 8)
        assert np.all(np.linalg.eigvalsh(gram.astype(float)) < 0)
        assert abs(sympy.Matrix(nik.gram).det()) == 64
        snf = sympy_snf(sympy.Matrix(nik.gram), domain=sympy.ZZ)
        assert sorted(abs(snf[i, i]) for i in range(8)) == [1, 1] + [2] * 6
        assert accepted_group().order == 72
        assert time.perf_counter() - t0 < 10


def _discriminant_oracle(a, b) -> bool:
    a, b = sympy.Rational(a), sympy.Rational(b)
    return any(sympy.discriminant(4 * x**3 - 3 * a * x - (b + s), x) == 0 for s in (1, -1))


def test_criterion_10_m1_family():
    with criterion(10, "M1 family: gamma = -1728 alpha at beta = 0; assumption fails; degeneracy matches oracle"):
        for alpha in (Fraction(1), Fraction(-3, 7), Fraction(5, 2), Fraction(1, 1728)):
            assert m1_gamma(alpha, 0) == -1728 * alpha
            assert m1_family(alpha, 0).gamma == -1728 * alpha

        rng = random.Random(SEED)
        print(f"random samples seed {SEED}")
        gammas = [complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(100)]
        points = [MPoint(1, g + 1, g * g) for g in gammas]
        report = assumption_check(points)
        assert not report.holds and report.failures == tuple(range(100))

        disagreements = 0
        for _ in range(1000):
            if rng.random() < 0.5:
                a = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
                b = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            else:
                s = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                a, b = s * s, s**3 + rng.choice((1, -1))
            disagreements += is_degenerate(MPoint(a, b)) != _discriminant_oracle(a, b)
        assert disagreements == 0
