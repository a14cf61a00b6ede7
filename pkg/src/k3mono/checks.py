"""Registry of reproducibility checks, keyed by the result each one reproduces.

Each check returns a list of ``CheckResult`` lines.  The registry order is
the output order of ``k3mono paper-check``.
"""

from __future__ import annotations

import cmath
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
import sympy

from . import groups, lattice, modular, moduli, monodromy, pencil


@dataclass(frozen=True)
class CheckResult:
    section: str
    label: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"section": self.section, "label": self.label, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class CheckConfig:
    seed: int = 20261015
    tol: float = monodromy.DEFAULT_TOL
    bound: int = 20


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def check_mng(cfg: CheckConfig) -> list[CheckResult]:
    out = []
    for n, (order, name) in groups.MNG_EXPECTED.items():
        gid, dt = _timed(lambda: groups.identify(groups.mng_group(n)))
        ok = gid.order == order and groups.canonical_name(name) == gid.name and dt < 1
        out.append(CheckResult("MnG", f"n={n}", ok, f"order {gid.order}, {gid.display}"))
    return out


def check_mg(cfg: CheckConfig) -> list[CheckResult]:
    h2 = lattice.twist(lattice.hyperbolic(), 2)
    form = lattice.discriminant_form(lattice.direct_sum(h2, h2))
    aut, dt = _timed(lambda: groups.full_aut(form))
    gid = groups.identify(aut)
    ok = aut.order == 72 and gid.name == "(S3xS3)⋊C2" and dt < 1
    return [CheckResult("MG", "full automorphisms of (Z/2)^4", ok, f"order {aut.order}, {gid.display}")]


def check_relations(cfg: CheckConfig) -> list[CheckResult]:
    out = []
    h1, h2, h3 = groups.mng_disc_actions(1)
    lhs = (h1 @ h2 @ h1).table()
    rhs = (h2 @ h2).table()
    out.append(CheckResult("MnG-relations", "n=1: g1 g2 g1 = g2^2", lhs == rhs, f"orders of h1,h2,h3: "
                           f"{[groups.perm_order(h.table()) for h in (h1, h2, h3)]}"))
    for n in (2, 3, 4):
        h1, h2, h3 = groups.mng_disc_actions(n)
        r = h1 @ h3
        out.append(CheckResult("MnG-relations", f"n={n}: (h1h3)^2 = h2", (r @ r).table() == h2.table()))
        inv = groups.inverse(r.table())
        out.append(CheckResult("MnG-relations", f"n={n}: h1(h1h3)h1 = (h1h3)^-1", (h1 @ r @ h1).table() == inv))
    h1, h2, h3 = groups.mng_disc_actions(4)
    comm = (h1 @ h2).table() == (h2 @ h1).table() and (h3 @ h2).table() == (h2 @ h3).table()
    out.append(CheckResult("MnG-relations", "n=4: h2 commutes with h1, h3", comm))
    return out


def check_lemma(cfg: CheckConfig) -> list[CheckResult]:
    out, total = [], 0.0
    for n in (1, 2, 3, 4):
        rep, dt = _timed(lambda: modular.verify_modular_lemma(n, cfg.bound))
        total += dt
        out.append(CheckResult("lemma-modular", f"n={n}", rep.ok, f"{rep.checked} matrices, "
                               f"{len(rep.counterexamples)} counterexamples"))
    if total >= 60:
        out.append(CheckResult("lemma-modular", "time", False, f"{total:.1f} s"))
    return out


def check_covers(cfg: CheckConfig) -> list[CheckResult]:
    out = []
    widths = {
        "gamma0:2": None,
        "gamma0:4": (4, 1, 1),
        "gamma0:8": (8, 2, 1, 1),
        "cm:4": (8, 8, 2, 2, 2, 2),
    }
    for name, expected in widths.items():
        data = modular.curve_data(modular.CongruenceSubgroup.parse(name))
        got = tuple(sorted(data.cusp_widths, reverse=True))
        ok = data.cusps == 2 if expected is None else got == expected
        out.append(CheckResult("covers", name, ok, f"widths {got}"))
    for n, degree in zip((1, 2, 3, 4), (12, 8, 12, 8)):
        fx = modular.cover_fixtures(n)
        gid = groups.identify(groups.mng_group(n))
        deck = {groups.canonical_name(x) for x in fx.deck}
        ok = fx.total_degree == degree and fx.composite == fx.composite_fixture and gid.name in deck
        out.append(CheckResult("covers", f"n={n} composite", ok, f"degree {fx.total_degree}, deck {gid.name}"))
    return out


def check_quintic(cfg: CheckConfig) -> list[CheckResult]:
    fi = moduli.FunctionalInvariant(1, 4, A=1)
    prof, dt = _timed(lambda: moduli.ramification_profile(fi))
    target = 5**5 / 2**8
    crit = [t for t in prof.targets() if t not in (0, complex("inf")) and prof.over(t) != [1] * 5]
    ok_val = len(crit) == 1 and abs(complex(crit[0]) - target) <= 1e-9 * target and prof.over(crit[0]) == [2, 1, 1, 1]
    ok_inf = sorted(prof.over(complex("inf"))) == [1, 4]
    ok_zero = prof.over(0) == [5]
    return [
        CheckResult("quintic", "critical value 5^5/2^8", ok_val and dt < 1, f"{[complex(c) for c in crit]}"),
        CheckResult("quintic", "orders over infinity {1,4}", ok_inf),
        CheckResult("quintic", "order 5 over 0", ok_zero),
    ]


def check_thin(cfg: CheckConfig) -> list[CheckResult]:
    out = []
    for c in moduli.check_thin():
        r = c.row
        out.append(CheckResult("thinarith", f"{r.lattice} {r.threefold} (i,j)=({r.i},{r.j})", c.agrees,
                               f"predicted {c.predicted}, table {r.classification}"))
    return out


def _sigma_one_loop(radius=0.1, n=64):
    return monodromy.LoopPath.circle(2 ** (-1 / 3), radius, n, "sigma1", a_of=lambda s: s * s, b_of=lambda s: s**3)


def _random_loop(rng: np.random.Generator, base, corners=4, radius=0.6, per_edge=24):
    a0, b0 = base
    pts = [base] + [
        (a0 + radius * complex(*rng.normal(size=2)), b0 + radius * complex(*rng.normal(size=2))) for _ in range(corners)
    ] + [base]
    dense = [pts[0]]
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        dense += [(x0 + k / per_edge * (x1 - x0), y0 + k / per_edge * (y1 - y0)) for k in range(1, per_edge + 1)]
    dense[-1] = base
    return monodromy.LoopPath(tuple(dense), "random")


def check_monodromy(cfg: CheckConfig) -> list[CheckResult]:
    t0 = time.perf_counter()
    tol = cfg.tol
    track = lambda loop: monodromy.track_loop(loop, tol)
    out = []
    small = monodromy.LoopPath.circle(0.3, 0.05, 32, "small", a_of=lambda s: s, b_of=lambda s: 0.2j)
    out.append(CheckResult("monodromy", "contractible loop is identity", track(small).is_identity))
    sig = _sigma_one_loop()
    step = track(sig)
    out.append(CheckResult("monodromy", "reversal gives inverse", track(sig.reversed()) == step.inverse()))

    rng = np.random.default_rng(cfg.seed)
    base = (0.3 + 0.2j, 0.1 - 0.4j)
    pairs = bad = 0
    steps = []
    while pairs < 20:
        l1, l2 = _random_loop(rng, base), _random_loop(rng, base)
        try:
            s1, s2 = track(l1), track(l2)
        except monodromy.DegeneratePathError:
            continue
        bad += track(l1.then(l2)) != s1.then(s2)
        steps += [s1, s2]
        pairs += 1
    out.append(CheckResult("monodromy", "homomorphism on 20 random pairs", bad == 0, f"seed {cfg.seed}"))

    stable = all(track(l.refined(2)) == track(l.refined(4)) == track(l) for l in (sig,))
    out.append(CheckResult("monodromy", "stable under two refinements", stable))

    d_samples = [(0.1, 0.2, cmath.exp(2j * math.pi * k / 64)) for k in range(65)]
    d_samples[-1] = d_samples[0]
    runs = [steps, [step, track(monodromy.LoopPath.from_abd(d_samples, "d"))]]
    bounds_ok = True
    for run in runs:
        try:
            rep = monodromy.cover_report(run)
            bounds_ok &= 36 % rep.H_order == 0 and rep.G_order <= 72
        except ArithmeticError:
            bounds_ok = False
    out.append(CheckResult("monodromy", "|H| divides 36 and |G| <= 72", bounds_ok))

    trans = step.order == 2 and step.cycle_type() == (2, 1, 1, 1, 1) and track(sig.refined(2)) == step
    out.append(CheckResult("monodromy", "sigma=1 loop gives a stable transposition", trans,
                           f"{step.to_json()['minus']} on P-1, {step.to_json()['plus']} on P+1"))
    dt = time.perf_counter() - t0
    if dt >= 120:
        out.append(CheckResult("monodromy", "time", False, f"{dt:.1f} s"))
    return out


def check_nikulin(cfg: CheckConfig) -> list[CheckResult]:
    nik = pencil.build_nikulin()
    lat = nik.lattice
    ok = lat.is_even and lat.signature == (0, 8) and lat.rank == 8 and abs(lat.det) == 64
    ok_disc = nik.discriminant_factors() == (2,) * 6
    acc, dt = _timed(lambda: pencil.accepted_group())
    return [
        CheckResult("nikulin", "even, negative definite, rank 8, |det| = 64", ok, f"det {lat.det}"),
        CheckResult("nikulin", "discriminant group (Z/2)^6", ok_disc, f"{nik.discriminant_factors()}"),
        CheckResult("nikulin", "accepted pencil permutations form a group of order 72", acc.order == 72 and dt < 10,
                    groups.identify(acc).display),
    ]


def _discriminant_oracle(a, b) -> bool:
    x = sympy.Symbol("x")
    a, b = sympy.Rational(a), sympy.Rational(b)
    return any(sympy.discriminant(4 * x**3 - 3 * a * x - (b + s), x) == 0 for s in (1, -1))


def check_m1(cfg: CheckConfig) -> list[CheckResult]:
    rng = random.Random(cfg.seed)
    gamma_ok = all(moduli.m1_gamma(Fraction(k, 7), 0) == -1728 * Fraction(k, 7) for k in range(-5, 6))
    gammas = [complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(100)]
    path = [moduli.MPoint(1, g + 1, g * g) for g in gammas]
    rep = monodromy.assumption_check(path)
    same = not rep.holds and len(rep.failures) == len(path)
    disagree = 0
    for _ in range(1000):
        if rng.random() < 0.5:
            a = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
            b = Fraction(rng.randint(-40, 40), rng.randint(1, 12))
        else:
            s = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
            a, b = s * s, s**3 + rng.choice((1, -1))
        disagree += moduli.is_degenerate(moduli.MPoint(a, b)) != _discriminant_oracle(a, b)
    return [
        CheckResult("M1", "gamma = -1728 alpha at beta = 0", gamma_ok),
        CheckResult("M1", "assumption fails at all 100 random gamma", same, f"seed {cfg.seed}"),
        CheckResult("M1", "degeneracy matches discriminant oracle on 1000 samples", disagree == 0,
                    f"{disagree} disagreements"),
    ]


REGISTRY: dict[str, Callable[[CheckConfig], list[CheckResult]]] = {
    "MnG": check_mng,
    "MG": check_mg,
    "MnG-relations": check_relations,
    "lemma-modular": check_lemma,
    "covers": check_covers,
    "quintic": check_quintic,
    "thinarith": check_thin,
    "monodromy": check_monodromy,
    "nikulin": check_nikulin,
    "M1": check_m1,
}


def run_checks(sections=None, cfg: CheckConfig | None = None) -> list[CheckResult]:
    cfg = cfg or CheckConfig()
    names = list(REGISTRY) if not sections else sections
    unknown = [s for s in names if s not in REGISTRY]
    if unknown:
        raise KeyError(f"unknown section(s): {', '.join(unknown)}")
    out = []
    for name in names:
        out += REGISTRY[name](cfg)
    return out
