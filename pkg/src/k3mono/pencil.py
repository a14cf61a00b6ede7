"""Double Kummer pencil, the Nikulin lattice and the fixed-curve constraints.

The pencil has 24 curves G_0..G_3, H_0..H_3 and E_ij (0 <= i, j <= 3).
The six I_2 components F_3..F_8 of the alternate fibration are added as
extra vertices, joined to the pencil by the section incidences of
Kuwata and Shioda; F_1 and F_2 are the pencil curves E_02 and E_03.

Triple convention: F_3, F_4, F_5 sit over the roots of P - 1 and F_6,
F_7, F_8 over the roots of P + 1.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .groups import GeneratedGroup, GroupId, close, compose, identify
from .lattice import Lattice, discriminant_form, is_isometry, smith_normal_form
from .monodromy import MonodromyStep

TRIPLE_CONVENTION = "F_3,F_4,F_5 over roots of P-1; F_6,F_7,F_8 over roots of P+1"

PENCIL_LABELS = (
    [f"G_{i}" for i in range(4)]
    + [f"H_{j}" for j in range(4)]
    + [f"E_{i}{j}" for i in range(4) for j in range(4)]
)
EXTRA_F = [f"F_{k}" for k in range(3, 9)]
LABELS = tuple(PENCIL_LABELS + EXTRA_F)
INDEX = {name: k for k, name in enumerate(LABELS)}

FIXED_TEN = ("G_0", "G_1", "G_2", "H_0", "H_1", "E_01", "E_10", "E_11", "E_20", "E_30")
FIXED = FIXED_TEN + ("G_3",)
TRIPLE_MINUS = ("F_3", "F_4", "F_5")
TRIPLE_PLUS = ("F_6", "F_7", "F_8")

# identifications of the alternate fibration's curves with pencil vertices
ALTERNATE_LABELS = {
    "R_1": "G_2",
    "R_2": "E_20",
    "R_3": "H_0",
    "R_4": "E_30",
    "R_5": "E_10",
    "R_6": "G_1",
    "R_7": "E_11",
    "R_8": "H_1",
    "R_9": "E_01",
    "S~_1": "G_0",
    "F_1": "E_02",
    "F_2": "E_03",
}

# section incidences with the I_2 components, stored as extra graph edges
SECTION_EDGES = (
    [("G_3", f) for f in EXTRA_F]
    + [("H_2", f) for f in TRIPLE_MINUS]
    + [("H_3", f) for f in TRIPLE_PLUS]
)


def curve_type(label: str) -> str:
    return label[0]


def resolve(label: str) -> str:
    """Canonical vertex name for a label or one of its aliases."""
    name = label.strip().replace("̃", "~").replace("S̃", "S~")
    if name in INDEX:
        return name
    if name in ALTERNATE_LABELS:
        return ALTERNATE_LABELS[name]
    m = re.fullmatch(r"([GHEFRS]~?)_?(\d+)", name)
    if m:
        cand = f"{m.group(1)}_{m.group(2)}"
        if cand in INDEX:
            return cand
        if cand in ALTERNATE_LABELS:
            return ALTERNATE_LABELS[cand]
    raise KeyError(f"unknown curve label {label!r}")


@dataclass(frozen=True)
class PencilGraph:
    labels: tuple[str, ...]
    intersection: tuple[tuple[int, ...], ...]

    def dot(self, x: str, y: str) -> int:
        return self.intersection[self.labels.index(resolve(x))][self.labels.index(resolve(y))]

    def __len__(self) -> int:
        return len(self.labels)


def _pencil_matrix() -> list[list[int]]:
    n = len(PENCIL_LABELS)
    m = [[0] * n for _ in range(n)]
    for k in range(n):
        m[k][k] = -2
    for i in range(4):
        for j in range(4):
            e = INDEX[f"E_{i}{j}"]
            for a, b in ((INDEX[f"G_{i}"], e), (INDEX[f"H_{j}"], e)):
                m[a][b] = m[b][a] = 1
    return m


def build_pencil() -> PencilGraph:
    """The 24 x 24 intersection matrix of the double Kummer pencil."""
    m = _pencil_matrix()
    return PencilGraph(tuple(PENCIL_LABELS), tuple(tuple(r) for r in m))


def alternate_fibration_labels() -> dict[str, str]:
    return dict(ALTERNATE_LABELS)


def extended_graph() -> PencilGraph:
    """Pencil plus F_3..F_8 with the section incidences as edges."""
    base = _pencil_matrix()
    n = len(LABELS)
    m = [[0] * n for _ in range(n)]
    for a in range(len(base)):
        for b in range(len(base)):
            m[a][b] = base[a][b]
    for f in EXTRA_F:
        m[INDEX[f]][INDEX[f]] = -2
    for x, y in SECTION_EDGES:
        m[INDEX[x]][INDEX[y]] = m[INDEX[y]][INDEX[x]] = 1
    return PencilGraph(LABELS, tuple(tuple(r) for r in m))


# --------------------------------------------------------------------------
# Nikulin lattice


@dataclass(frozen=True)
class NikulinLattice:
    lattice: Lattice

    @property
    def gram(self):
        return self.lattice.gram

    @property
    def det(self) -> int:
        return self.lattice.det

    def discriminant_factors(self) -> tuple[int, ...]:
        d, _, _ = smith_normal_form(self.gram)
        return tuple(d[i][i] for i in range(len(d)) if abs(d[i][i]) != 1)

    def f_coords(self, k: int) -> tuple[int, ...]:
        """Coordinates of F_k (k = 1..8) in the basis F_1..F_7, B."""
        if k <= 7:
            return tuple(int(i == k - 1) for i in range(8))
        return tuple([-1] * 7 + [2])

    def permutation_matrix(self, f_perm: Mapping[int, int]) -> list[list[int]]:
        """Integral matrix (acting on columns) sending F_k to F_{f_perm[k]} and fixing B."""
        cols = [self.f_coords(f_perm[k]) for k in range(1, 8)]
        cols.append(tuple(int(i == 7) for i in range(8)))
        return [[cols[c][r] for c in range(8)] for r in range(8)]

    def roots(self, bound: int = 2) -> np.ndarray:
        """All vectors of square -2 with basis coefficients in [-bound, bound]."""
        g = np.array(self.gram, dtype=np.int64)
        rng = np.arange(-bound, bound + 1)
        pts = np.array(list(itertools.product(rng, repeat=8)), dtype=np.int64)
        norms = np.einsum("ij,jk,ik->i", pts, g, pts)
        return pts[norms == -2]


def build_nikulin() -> NikulinLattice:
    gram = [[0] * 8 for _ in range(8)]
    for i in range(7):
        gram[i][i] = -2
        gram[i][7] = gram[7][i] = -1
    gram[7][7] = -4
    return NikulinLattice(Lattice(gram, "K_Nik"))


# --------------------------------------------------------------------------
# Permutations of the labelled curves


Perm = tuple[int, ...]


def parse_cycles(text: str) -> Perm:
    """Parse cycle notation such as "(F_3 F_4)(H_2 H_3)" into a permutation of LABELS."""
    perm = list(range(len(LABELS)))
    text = text.strip()
    if not re.fullmatch(r"(\([^()]*\))*", text.replace(" ", "")) and text != "":
        raise ValueError(f"malformed cycle notation: {text!r}")
    seen = set()
    for body in re.findall(r"\(([^()]*)\)", text):
        names = [resolve(x) for x in re.split(r"[\s,]+", body.strip()) if x]
        idx = [INDEX[x] for x in names]
        if seen & set(idx) or len(set(idx)) != len(idx):
            raise ValueError("cycles are not disjoint")
        seen |= set(idx)
        for a, b in zip(idx, idx[1:] + idx[:1]):
            perm[a] = b
    return tuple(perm)


def format_cycles(perm: Perm) -> str:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        c, k = [], start
        while k not in seen:
            seen.add(k)
            c.append(LABELS[k])
            k = perm[k]
        out.append("(" + " ".join(c) + ")")
    return "".join(out) or "()"


def load_perms(path) -> list[Perm]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("perms", data.get("perm"))
    if isinstance(data, str):
        data = [data]
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise ValueError("expected a cycle-notation string or a list of them")
    return [parse_cycles(x) for x in data]


@dataclass(frozen=True)
class ConstraintReport:
    accepted: bool
    violations: tuple[str, ...]
    case: int | None  # 1: F_1, F_2 fixed; 2: interchanged

    def to_json(self) -> dict:
        return {
            "accepted": self.accepted,
            "case": self.case,
            "violations": list(self.violations),
            "triple_convention": TRIPLE_CONVENTION,
        }


def _preserves(graph: PencilGraph, perm: Perm) -> bool:
    m = graph.intersection
    n = len(m)
    return all(m[perm[a]][perm[b]] == m[a][b] for a in range(n) for b in range(n))


def check_monodromy_constraints(perm: Perm) -> ConstraintReport:
    perm = tuple(perm)
    if sorted(perm) != list(range(len(LABELS))):
        raise ValueError(f"expected a permutation of {len(LABELS)} labels")
    bad = []
    moved_type = [LABELS[k] for k in range(len(perm)) if curve_type(LABELS[k]) != curve_type(LABELS[perm[k]])]
    if moved_type:
        bad.append("curve types not preserved: " + ", ".join(moved_type))
    for name in FIXED:
        if perm[INDEX[name]] != INDEX[name]:
            bad.append(f"{name} is not fixed")
    if not _preserves(extended_graph(), perm):
        bad.append("intersection matrix not preserved")

    img = lambda name: LABELS[perm[INDEX[name]]]
    minus, plus = set(TRIPLE_MINUS), set(TRIPLE_PLUS)
    img_minus = {img(x) for x in TRIPLE_MINUS}
    case = None
    if img("E_02") == "E_02" and img("E_03") == "E_03":
        if img("H_2") == "H_2" and img("H_3") == "H_3" and img_minus == minus:
            case = 1
    elif img("E_02") == "E_03" and img("E_03") == "E_02":
        if img("H_2") == "H_3" and img("H_3") == "H_2" and img_minus == plus:
            case = 2
    if case is None:
        bad.append("action on F_1..F_8 matches neither allowed shape")
    return ConstraintReport(not bad, tuple(bad), case if not bad else None)


def _graph_automorphisms(graph: PencilGraph, fixed: Iterable[str]) -> list[Perm]:
    """Type-preserving automorphisms of the graph fixing ``fixed`` (backtracking)."""
    m = graph.intersection
    n = len(m)
    fixed_idx = {INDEX[x] for x in fixed}
    order = sorted(range(n), key=lambda k: (k not in fixed_idx, -sum(m[k][j] > 0 for j in range(n)), k))
    out: list[Perm] = []
    assign = [-1] * n
    used = [False] * n

    def ok(v, w):
        if curve_type(LABELS[v]) != curve_type(LABELS[w]):
            return False
        if v in fixed_idx and v != w:
            return False
        return all(m[v][u] == m[w][assign[u]] for u in range(n) if assign[u] >= 0)

    def go(pos):
        if pos == n:
            out.append(tuple(assign))
            return
        v = order[pos]
        for w in range(n):
            if not used[w] and ok(v, w):
                assign[v], used[w] = w, True
                go(pos + 1)
                assign[v], used[w] = -1, False

    go(0)
    return out


@lru_cache(maxsize=None)
def accepted_permutations() -> tuple[Perm, ...]:
    """All automorphisms of the extended graph fixing the eleven curves that pass the constraints."""
    candidates = _graph_automorphisms(extended_graph(), FIXED)
    return tuple(p for p in candidates if check_monodromy_constraints(p).accepted)


def restrict_to_f(perm: Perm) -> tuple[int, ...]:
    """Action on F_3..F_8 as a permutation of 0..5."""
    base = INDEX["F_3"]
    return tuple(perm[base + k] - base for k in range(6))


def accepted_group() -> GeneratedGroup:
    elements = accepted_permutations()
    group = close(elements, degree=len(LABELS), cap=4096)
    if set(group.elements) != set(elements):
        raise ArithmeticError("accepted permutations are not closed under composition")
    return group


def identify_accepted() -> GroupId:
    return identify(accepted_group())


def nikulin_action(perm: Perm) -> dict[int, int]:
    """Induced permutation of F_1..F_8 (indices 1..8)."""
    names = ["E_02", "E_03"] + EXTRA_F
    pos = {INDEX[x]: k + 1 for k, x in enumerate(names)}
    return {pos[INDEX[x]]: pos[perm[INDEX[x]]] for x in names}


def induces_nikulin_isometry(perm: Perm, nik: NikulinLattice | None = None) -> bool:
    nik = nik or build_nikulin()
    return is_isometry(nik.lattice, nik.permutation_matrix(nikulin_action(perm)))


def step_to_pencil(step: MonodromyStep) -> Perm:
    """Pencil permutation induced by a root monodromy step.

    Root labels 0, 1, 2 (roots of P - 1) go to F_3, F_4, F_5 and labels
    3, 4, 5 to F_6, F_7, F_8; a swap also exchanges H_2 with H_3 and so
    every E_i2 with E_i3.
    """
    perm = list(range(len(LABELS)))
    base = INDEX["F_3"]
    for k in range(6):
        perm[base + k] = base + step.perm[k]
    if step.swapped:
        for a, b in [("H_2", "H_3")] + [(f"E_{i}2", f"E_{i}3") for i in range(4)]:
            perm[INDEX[a]], perm[INDEX[b]] = INDEX[b], INDEX[a]
    return tuple(perm)


def full_swap() -> Perm:
    return parse_cycles("(F_1 F_2)(H_2 H_3)(E_12 E_13)(E_22 E_23)(E_32 E_33)(F_3 F_6)(F_4 F_7)(F_5 F_8)")
