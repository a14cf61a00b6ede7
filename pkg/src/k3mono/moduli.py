"""Moduli of M-polarized K3 surfaces in (a, b, d) coordinates.

A point is a class of (a, b, d), d != 0, under (a, b, d) ~ (l^2 a, l^3 b, l^6 d).
The alternate elliptic fibration has its I_2 fibres at the roots of
P(x) - 1 and P(x) + 1 with P(x) = 4x^3 - 3ax - b (after normalising d = 1);
these collide exactly when a^3 = (b - 1)^2 or a^3 = (b + 1)^2.
"""

from __future__ import annotations

import cmath
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from numbers import Rational
from pathlib import Path

import numpy as np

ROOT_RESIDUAL = 1e-10
DEGENERACY_THRESHOLD = 1e-8
_EXACT_GUARD = 2**63


def _is_exact(x) -> bool:
    return isinstance(x, Rational) and abs(Fraction(x).numerator) < _EXACT_GUARD and Fraction(x).denominator < _EXACT_GUARD


@dataclass(frozen=True)
class MPoint:
    a: complex
    b: complex
    d: complex = 1

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero")

    def rescale(self, lam: complex) -> "MPoint":
        return MPoint(lam**2 * self.a, lam**3 * self.b, lam**6 * self.d)

    def normalized(self) -> "MPoint":
        """A representative with d = 1 (principal sixth root; idempotent)."""
        if self.d == 1:
            return self
        lam = complex(self.d) ** (-1 / 6)
        return MPoint(lam**2 * self.a, lam**3 * self.b, 1)

    @property
    def is_normalized(self) -> bool:
        return self.d == 1


def sigma_pi(p: MPoint) -> tuple[complex, complex, tuple[complex, complex]]:
    """(sigma, pi) and the two j-invariants, roots of j^2 - sigma j + pi.

    Written with d so the values are invariant under rescaling:
    sigma = (a^3 - b^2 + d) / d, pi = a^3 / d.
    """
    a, b, d = p.a, p.b, p.d
    if all(_is_exact(x) for x in (a, b, d)):
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
    sigma = (a**3 - b**2 + d) / d
    pi = a**3 / d
    disc = cmath.sqrt(complex(sigma) ** 2 - 4 * complex(pi))
    j1, j2 = (complex(sigma) - disc) / 2, (complex(sigma) + disc) / 2
    return sigma, pi, tuple(sorted((j1, j2), key=_root_key))


def degeneracy_invariant(p: MPoint):
    """(a^3 - b^2 - d)^2 - 4 b^2 d; zero iff a^3 = (b +- sqrt(d))^2.

    Weighted-homogeneous of degree 12, so it vanishes on whole classes.
    """
    a, b, d = p.a, p.b, p.d
    return (a**3 - b**2 - d) ** 2 - 4 * b**2 * d


def is_degenerate(p: MPoint, threshold: float = DEGENERACY_THRESHOLD) -> bool:
    """Exact test for rational input, otherwise a scaled discriminant test."""
    if all(_is_exact(x) for x in (p.a, p.b, p.d)):
        a, b, d = (Fraction(x) for x in (p.a, p.b, p.d))
        return degeneracy_invariant(MPoint(a, b, d)) == 0
    q = p.normalized()
    a, b = complex(q.a), complex(q.b)
    for c in (b + 1, b - 1):
        scale = abs(a) ** 3 + abs(c) ** 2
        if scale == 0 or abs(a**3 - c**2) <= threshold * scale:
            return True
    return False


def _root_key(z: complex):
    return (round(z.real, 9), round(z.imag, 9))


def cubic_roots(a: complex, c: complex, polish: int = 3) -> np.ndarray:
    """Roots of 4x^3 - 3ax - c, Newton-polished."""
    r = np.roots([4.0, 0.0, -3.0 * complex(a), -complex(c)]).astype(complex)
    for _ in range(polish):
        f = 4 * r**3 - 3 * a * r - c
        df = 12 * r**2 - 3 * a
        step = np.where(np.abs(df) > 1e-300, f / np.where(df == 0, 1, df), 0)
        r = r - step
    return r


@dataclass(frozen=True)
class FibreRoots:
    roots_minus: tuple[complex, complex, complex]  # roots of P(x) - 1
    roots_plus: tuple[complex, complex, complex]  # roots of P(x) + 1
    degenerate: bool

    def min_gap(self) -> float:
        gaps = []
        for rs in (self.roots_minus, self.roots_plus):
            gaps += [abs(rs[i] - rs[j]) for i in range(3) for j in range(i + 1, 3)]
        return min(gaps)


def alternate_fibre_roots(p: MPoint) -> FibreRoots:
    """Roots of P - 1 and P + 1 at the d = 1 representative, sorted by (Re, Im)."""
    q = p.normalized()
    a, b = complex(q.a), complex(q.b)
    minus = sorted((complex(z) for z in cubic_roots(a, b + 1)), key=_root_key)
    plus = sorted((complex(z) for z in cubic_roots(a, b - 1)), key=_root_key)
    return FibreRoots(tuple(minus), tuple(plus), is_degenerate(p))


def residuals(p: MPoint, roots: FibreRoots) -> float:
    q = p.normalized()
    a, b = complex(q.a), complex(q.b)
    worst = 0.0
    for sign, rs in ((1, roots.roots_minus), (-1, roots.roots_plus)):
        for x in rs:
            worst = max(worst, abs(4 * x**3 - 3 * a * x - b - sign))
    return worst


# --------------------------------------------------------------------------
# The two-parameter M_1 family


@dataclass(frozen=True)
class M1Point:
    point: MPoint | None  # None when gamma = 0 (d would vanish)
    gamma: complex
    smooth: bool


def m1_gamma(alpha, beta):
    if complex(beta) == 0.25:
        raise ZeroDivisionError("beta = 1/4 is a pole of gamma")
    if _is_exact(alpha) and _is_exact(beta):
        return 1728 * Fraction(alpha) / (4 * Fraction(beta) - 1) ** 3
    return 1728 * complex(alpha) / (4 * complex(beta) - 1) ** 3


def m1_family(alpha, beta) -> M1Point:
    """(a, b, d) = (1, gamma + 1, gamma^2) with gamma = 2^6 3^3 alpha / (4 beta - 1)^3."""
    g = m1_gamma(alpha, beta)
    smooth = g != 0 and g != -1
    if g == 0:
        # d = gamma^2 vanishes: no point of the moduli space
        return M1Point(None, g, False)
    return M1Point(MPoint(1, g + 1, g * g), g, smooth)


# --------------------------------------------------------------------------
# Functional invariants lambda = A u^(i+j) / (t^i (u - t)^j)


@dataclass(frozen=True)
class FunctionalInvariant:
    i: int
    j: int
    A: complex = 1
    n: int | None = None
    toric: bool = True
    classification: str = ""
    lattice: str = ""
    threefold: str = ""

    def __post_init__(self):
        if self.i < 1 or self.j < 1:
            raise ValueError("i and j must be positive")
        if self.classification not in ("", "arithmetic", "thin"):
            raise ValueError(f"unknown classification {self.classification!r}")

    @property
    def degree(self) -> int:
        return self.i + self.j


def functional_invariant_map(fi: FunctionalInvariant, t: complex, u: complex) -> complex:
    if t == 0 and u == 0:
        raise ValueError("(t, u) = (0, 0) is not a point of P^1")
    den = t**fi.i * (u - t) ** fi.j
    num = fi.A * u ** (fi.i + fi.j)
    if den == 0:
        return complex("inf")
    return num / den


def critical_value(fi: FunctionalInvariant) -> complex:
    """A (i+j)^(i+j) / (i^i j^j), the value at t/u = i/(i+j)."""
    i, j = fi.i, fi.j
    if all(_is_exact(x) for x in (fi.A,)):
        return Fraction(fi.A) * Fraction((i + j) ** (i + j), i**i * j**j)
    return fi.A * (i + j) ** (i + j) / (i**i * j**j)


@dataclass(frozen=True)
class RamificationPoint:
    source: tuple[complex, complex]  # (t : u)
    target: complex  # complex('inf') for the pole
    order: int


@dataclass(frozen=True)
class RamificationProfile:
    degree: int
    points: tuple[RamificationPoint, ...]

    def over(self, target) -> list[int]:
        return sorted((p.order for p in self.points if _same_value(p.target, target)), reverse=True)

    def targets(self) -> list:
        out = []
        for p in self.points:
            if not any(_same_value(p.target, t) for t in out):
                out.append(p.target)
        return out

    def critical(self) -> list[RamificationPoint]:
        return [p for p in self.points if p.order > 1]

    def to_json(self) -> dict:
        def enc(z):
            z = complex(z)
            return "inf" if cmath.isinf(z) else [z.real, z.imag]

        return {
            "degree": self.degree,
            "points": [
                {"source": [enc(p.source[0]), enc(p.source[1])], "target": enc(p.target), "order": p.order}
                for p in self.points
            ],
        }


def _same_value(x, y, rel=1e-9) -> bool:
    x, y = complex(x), complex(y)
    if cmath.isinf(x) or cmath.isinf(y):
        return cmath.isinf(x) and cmath.isinf(y)
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))


def ramification_profile(fi: FunctionalInvariant) -> RamificationProfile:
    """All points of P^1 over the branch values of lambda.

    Over infinity: t = 0 (order i) and t = u (order j); over 0: u = 0
    (order i+j); over the critical value: t = i u/(i+j) (order 2) plus the
    remaining simple preimages, found numerically.  The critical point is
    also located numerically from the derivative and checked against the
    closed form.
    """
    i, j = fi.i, fi.j
    if i + j > 12:
        raise ValueError("i + j must be at most 12")
    if fi.A == 0:
        raise ValueError("A must be nonzero")
    inf = complex("inf")
    pts = [
        RamificationPoint((0, 1), inf, i),
        RamificationPoint((1, 1), inf, j),
        RamificationPoint((1, 0), 0, i + j),
    ]
    # numerator of d/dt log lambda at u = 1: -i (1 - t) + j t
    crit_ts = np.roots([i + j, -i])
    t_c = complex(crit_ts[0])
    if abs(t_c - i / (i + j)) > 1e-12:
        raise ArithmeticError("critical point disagrees with closed form")
    v_num = functional_invariant_map(fi, t_c, 1)
    v = critical_value(fi)
    if not _same_value(v_num, v, 1e-12):
        raise ArithmeticError(f"critical value {v_num} disagrees with closed form {v}")
    pts.append(RamificationPoint((t_c, 1), v, 2))
    # other preimages: A - v t^i (1 - t)^j = 0
    poly = np.poly1d([1.0])
    for _ in range(i):
        poly = poly * np.poly1d([1.0, 0.0])
    for _ in range(j):
        poly = poly * np.poly1d([-1.0, 1.0])
    coeffs = -complex(v) * poly.coeffs.astype(complex)
    coeffs[-1] += complex(fi.A)
    others = [complex(r) for r in np.roots(coeffs) if abs(r - t_c) > 1e-5]
    if len(others) != i + j - 2:
        raise ArithmeticError("unexpected multiplicity over the critical value")
    pts += [RamificationPoint((t, 1), v, 1) for t in sorted(others, key=_root_key)]
    return RamificationProfile(i + j, tuple(pts))


# --------------------------------------------------------------------------
# Catalog


def data_dir() -> Path:
    override = os.environ.get("K3MONO_DATA")
    if override:
        return Path(override)
    return Path(str(resources.files("k3mono") / "data"))


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return rows


def catalog(path: str | os.PathLike | None = None) -> list[FunctionalInvariant]:
    path = Path(path) if path else data_dir() / "table1.jsonl"
    out = []
    for r in _read_jsonl(path):
        out.append(
            FunctionalInvariant(
                i=int(r["i"]),
                j=int(r["j"]),
                n=r.get("n"),
                toric=bool(r["toric"]),
                classification=r["classification"],
                lattice=r["lattice"],
                threefold=r["threefold"],
            )
        )
    return out


@dataclass(frozen=True)
class M1FamilyMap:
    threefold: str
    alpha: str
    beta: str
    gamma: str


def m1_catalog(path: str | os.PathLike | None = None) -> list[M1FamilyMap]:
    path = Path(path) if path else data_dir() / "table2.jsonl"
    return [M1FamilyMap(r["threefold"], r["alpha"], r["beta"], r["gamma"]) for r in _read_jsonl(path)]


def thin_predicate(fi: FunctionalInvariant) -> str:
    """'thin' iff neither i nor j equals 2."""
    return "thin" if fi.i != 2 and fi.j != 2 else "arithmetic"


@dataclass(frozen=True)
class PredicateCheck:
    row: FunctionalInvariant
    predicted: str

    @property
    def agrees(self) -> bool:
        return self.predicted == self.row.classification


def check_thin(rows: list[FunctionalInvariant] | None = None, toric_only: bool = False) -> list[PredicateCheck]:
    rows = catalog() if rows is None else rows
    return [PredicateCheck(r, thin_predicate(r)) for r in rows if r.toric or not toric_only]


def check_thin_by_threefold(rows: list[FunctionalInvariant] | None = None) -> dict[str, bool]:
    """Per threefold: does every torically induced fibration predict its type?"""
    rows = catalog() if rows is None else rows
    out: dict[str, bool] = {}
    for r in rows:
        if r.toric:
            out[r.threefold] = out.get(r.threefold, True) and thin_predicate(r) == r.classification
    return out
