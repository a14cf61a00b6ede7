"""Finite permutation groups: closure, identification and Aut(A, q).

Group elements are permutations stored as tuples, ``p[i]`` being the image
of point ``i``.  ``compose(p, q)`` is ``p o q`` (apply ``q`` first), which
matches the matrix product convention for induced discriminant actions.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .lattice import (
    DiscAutomorphism,
    DiscriminantForm,
    discriminant_form,
    induced_disc_action,
    is_isometry,
    m_n_perp,
    m_n_perp_twisted,
)

Perm = tuple[int, ...]


class GroupTooLarge(RuntimeError):
    pass


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    o = 1
    for i in range(len(p)):
        if not seen[i]:
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            o = o * n // gcd(o, n)
    return o


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        return power(inverse(p), -k)
    r = tuple(range(len(p)))
    for _ in range(k):
        r = compose(p, r)
    return r


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = p[j]
        out.append(tuple(c))
    return out


def _as_perm(g) -> Perm:
    if isinstance(g, DiscAutomorphism):
        return g.table()
    return tuple(g)


@dataclass(frozen=True)
class GeneratedGroup:
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...] = ()
    generator_words: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return len(self.elements[0])

    def __contains__(self, p) -> bool:
        return _as_perm(p) in self._set

    @property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def is_abelian(self) -> bool:
        gens = self.generators or self.elements
        return all(compose(a, b) == compose(b, a) for a in gens for b in gens)

    def spectrum(self) -> dict[int, int]:
        return dict(sorted(Counter(perm_order(p) for p in self.elements).items()))

    def center_order(self) -> int:
        gens = self.generators or self.elements
        return sum(all(compose(z, g) == compose(g, z) for g in gens) for z in self.elements)

    def class_count(self) -> int:
        remaining = set(self.elements)
        n = 0
        while remaining:
            x = remaining.pop()
            for g in self.elements:
                remaining.discard(compose(compose(g, x), inverse(g)))
            n += 1
        return n

    def issubset(self, other: "GeneratedGroup") -> bool:
        return self._set <= other._set


def close(generators: Iterable, cap: int = 1024, degree: int | None = None) -> GeneratedGroup:
    """Breadth-first closure of ``generators`` under composition.

    Raises ``GroupTooLarge`` once more than ``cap`` elements are found, which
    usually means the generators or the lattice are wrong.
    """
    gens = tuple(_as_perm(g) for g in generators)
    if not gens and degree is None:
        degree = 1
    n = len(gens[0]) if gens else degree
    if any(len(g) != n for g in gens):
        raise ValueError("generators act on different sets")
    ident = tuple(range(n))
    words = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for k, g in enumerate(gens):
                y = compose(g, x)
                if y not in words:
                    words[y] = words[x] + (k,)
                    if len(words) > cap:
                        raise GroupTooLarge(f"closure exceeded cap={cap}")
                    nxt.append(y)
        frontier = nxt
    return GeneratedGroup(tuple(sorted(words)), gens, words)


# --------------------------------------------------------------------------
# Identification


@dataclass(frozen=True)
class GroupId:
    name: str
    order: int
    spectrum: dict
    aliases: tuple[str, ...] = ()

    @property
    def display(self) -> str:
        if not self.aliases:
            return self.name
        return f"{self.name} (≅ {', '.join(self.aliases)})"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "name": self.name,
            "aliases": list(self.aliases),
            "spectrum": {str(k): v for k, v in self.spectrum.items()},
        }


ALIASES = {
    "D12": ("S3xC2",),
    "S3": ("D6",),
    "C2xC2": ("V4",),
    "(S3xS3)⋊C2": ("S3 wr C2", "O+(4,2)"),
}

# alternative labels that name the same abstract group under a different presentation
CANONICAL = {"S3xC2": "D12", "S3×C2": "D12", "D6": "S3", "V4": "C2xC2"}


def canonical_name(name: str) -> str:
    return CANONICAL.get(name, name)


def _abelian_counts(factors_by_prime: dict[int, tuple[int, ...]], order: int) -> dict[int, int]:
    # number of elements of order dividing m is multiplicative over primes
    def divides(m):
        total = 1
        for p, exps in factors_by_prime.items():
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            total *= p ** sum(min(e, k) for e in exps)
        return total

    divisors = [m for m in range(1, order + 1) if order % m == 0]
    exact = {}
    for m in divisors:
        exact[m] = divides(m) - sum(exact[e] for e in divisors if e < m and m % e == 0)
    return {m: c for m, c in exact.items() if c}


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _factor(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _abelian_name(order: int, spectrum: dict[int, int]) -> str | None:
    primes = _factor(order)
    for choice in itertools.product(*(_partitions(e) for e in primes.values())):
        fac = dict(zip(primes, choice))
        if _abelian_counts(fac, order) == spectrum:
            # invariant factors, largest first
            width = max(len(c) for c in choice) if choice else 0
            inv = []
            for k in range(width):
                inv.append(prod_(p ** (exps[k] if k < len(exps) else 0) for p, exps in fac.items()))
            return "x".join(f"C{d}" for d in inv if d > 1)
    return None


def prod_(it):
    out = 1
    for x in it:
        out *= x
    return out


def _perm_group(gens: Sequence[Sequence[int]]) -> GeneratedGroup:
    return close([tuple(g) for g in gens], cap=100000)


def _shift(p: Sequence[int], k: int, n: int) -> tuple[int, ...]:
    full = list(range(n))
    for i, j in enumerate(p):
        full[i + k] = j + k
    return tuple(full)


@lru_cache(maxsize=None)
def reference_groups() -> dict[str, GeneratedGroup]:
    """Small permutation models of the non-abelian groups the catalog names."""
    s3 = [(1, 0, 2), (1, 2, 0)]
    refs = {}
    for m in range(3, 19):
        rot = tuple((i + 1) % m for i in range(m))
        ref = tuple((-i) % m for i in range(m))
        refs[f"D{2 * m}" if m > 3 else "S3"] = _perm_group([rot, ref])
    refs["Q8"] = _perm_group([(2, 3, 1, 0, 6, 7, 5, 4), (4, 5, 7, 6, 1, 0, 2, 3)])
    refs["A4"] = _perm_group([(1, 2, 0, 3), (1, 0, 3, 2)])
    refs["S4"] = _perm_group([(1, 0, 2, 3), (1, 2, 3, 0)])
    # Dic3 = C3 ⋊ C4 acting regularly on itself
    dic = [(a, b) for b in range(4) for a in range(3)]
    def dmul(x, y):
        a1, b1 = x
        a2, b2 = y
        return ((a1 + (a2 if b1 % 2 == 0 else -a2)) % 3, (b1 + b2) % 4)
    idx = {e: i for i, e in enumerate(dic)}
    refs["Dic3"] = _perm_group([tuple(idx[dmul(g, e)] for e in dic) for g in [(1, 0), (0, 1)]])
    six = 6
    left = [_shift(g, 0, six) for g in s3]
    right = [_shift(g, 3, six) for g in s3]
    swap = (3, 4, 5, 0, 1, 2)
    refs["S3xS3"] = _perm_group(left + right)
    refs["(S3xS3)⋊C2"] = _perm_group(left + right + [swap])
    c3 = _shift((1, 2, 0), 3, six)
    refs["S3xC3"] = _perm_group(left + [c3])
    refs["(C3xC3)⋊C2"] = _perm_group([_shift((1, 2, 0), 0, six), c3, (0, 2, 1, 3, 5, 4)])
    return refs


def _signature(g: GeneratedGroup) -> tuple:
    return (g.order, tuple(g.spectrum().items()), g.center_order(), g.class_count())


@lru_cache(maxsize=None)
def _reference_signatures() -> dict[tuple, list[str]]:
    out: dict[tuple, list[str]] = {}
    for name, grp in reference_groups().items():
        out.setdefault(_signature(grp), []).append(name)
    return out


def identify(g: GeneratedGroup) -> GroupId:
    order = g.order
    if order > 10000:
        raise ValueError("identify() only handles groups of order <= 10000")
    spec = g.spectrum()
    involutions = spec.get(2, 0)

    def gid(name):
        return GroupId(name, order, spec, ALIASES.get(name, ()))

    if order == 1:
        return gid("trivial")
    if g.is_abelian:
        name = _abelian_name(order, spec)
        if name is not None:
            return gid(name)
    elif order == 6:
        return gid("S3")
    elif order == 8:
        return gid("D8" if involutions > 1 else "Q8")
    elif order == 12:
        if 6 not in spec:
            return gid("A4")
        if involutions == 1:
            return gid("Dic3")
        return gid("D12")
    else:
        names = _reference_signatures().get(_signature(g), [])
        if len(names) == 1:
            return gid(names[0])
    spectrum_txt = ",".join(f"{k}:{v}" for k, v in spec.items())
    return gid(f"unidentified(order={order}, spectrum={spectrum_txt})")


# --------------------------------------------------------------------------
# Automorphisms of a discriminant form


def full_aut(form: DiscriminantForm, preserve: str = "quadratic", cap: int = 100000) -> GeneratedGroup:
    """All group automorphisms of ``form`` preserving its forms.

    ``preserve="quadratic"`` keeps q (mod 2), which also fixes b; with
    ``"bilinear"`` only b (mod 1) is kept.  Brute-force backtracking over
    generator images, so ``|A|`` is limited to 4096.
    """
    if form.order > 4096:
        raise ValueError(f"|A| = {form.order} exceeds the brute-force bound 4096")
    if preserve not in ("quadratic", "bilinear"):
        raise ValueError(preserve)
    use_q = preserve == "quadratic" and form.quadratic is not None
    els = form.elements()
    ngen = len(form.invariant_factors)
    results: list[DiscAutomorphism] = []

    def candidates(k, chosen):
        d = form.invariant_factors[k]
        for y in els:
            if form.element_order(y) != d:
                continue
            if use_q and form.q(y) != form.quadratic[k]:
                continue
            if form.b(y, y) != form.bilinear[k][k]:
                continue
            if any(form.b(y, chosen[i]) != form.bilinear[k][i] for i in range(k)):
                continue
            yield y

    def search(chosen):
        k = len(chosen)
        if k == ngen:
            phi = DiscAutomorphism(form, tuple(chosen))
            table = phi.table()
            if len(set(table)) == len(table):
                results.append(phi)
                if len(results) > cap:
                    raise GroupTooLarge(f"more than {cap} automorphisms")
            return
        for y in candidates(k, chosen):
            search(chosen + [y])

    search([])
    return GeneratedGroup(tuple(sorted(phi.table() for phi in results)))


# --------------------------------------------------------------------------
# Published generators of O(H + <-2n>)* for n = 1..4, acting on columns.
# Each g must satisfy g^T G_n g = G_n with G_n = [[0,1,0],[1,0,0],[0,0,-2n]].

MNG_GENERATORS: dict[int, tuple] = {
    1: (
        ((0, -1, 0), (-1, 0, 0), (0, 0, 1)),
        ((1, 0, 0), (1, 1, 2), (1, 0, 1)),
        ((-1, 0, 0), (0, -1, 0), (0, 0, -1)),
    ),
    2: (
        ((1, 0, 0), (2, 1, 4), (1, 0, 1)),
        ((1, 2, 4), (2, 1, 4), (-1, -1, -3)),
        ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    ),
    3: (
        ((1, 0, 0), (3, 1, 6), (1, 0, 1)),
        ((1, 3, 6), (3, 4, 12), (-1, -2, -5)),
        ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    ),
    4: (
        ((1, 0, 0), (4, 1, 8), (1, 0, 1)),
        ((9, 4, 24), (4, 1, 8), (-3, -1, -7)),
        ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    ),
}

# names as printed alongside each n; D12 and S3xC2 are the same abstract group
MNG_EXPECTED = {1: (12, "S3xC2"), 2: (8, "D8"), 3: (12, "D12"), 4: (8, "D8")}


def mng_disc_actions(n: int) -> list[DiscAutomorphism]:
    """Induced actions h_1, h_2, h_3 on the discriminant form of H(2) + <-4n>."""
    if n not in MNG_GENERATORS:
        raise ValueError(f"generators are only catalogued for n in 1..4, got {n}")
    lat = m_n_perp(n)
    twisted = m_n_perp_twisted(n)
    form = discriminant_form(twisted)
    # an isometry of L is an isometry of L(2): same matrix, scaled Gram
    out = []
    for g in MNG_GENERATORS[n]:
        if not is_isometry(lat, g):
            raise ValueError(f"catalogued generator {g} is not an isometry for n={n}")
        out.append(induced_disc_action(twisted, g, form))
    return out


def mng_group(n: int) -> GeneratedGroup:
    return close(mng_disc_actions(n))
