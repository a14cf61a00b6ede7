"""Numerical monodromy of the six roots of P(x) - 1 and P(x) + 1.

Roots are labelled at the basepoint in canonical order: labels 0, 1, 2
are the roots of P - 1 and 3, 4, 5 the roots of P + 1.  A permutation
``perm`` records that the root starting at label ``k`` is carried to the
position of label ``perm[k]`` when the loop closes.

Loops live in the weighted projective plane, so a loop may close up to
(a, b) ~ (l^2 a, l^3 b) with l^6 = 1.  When l^3 = -1 the continuation
lands the roots of P - 1 on those of P + 1, which is the swap case.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .groups import GeneratedGroup, close, compose, cycles, inverse
from .moduli import MPoint, alternate_fibre_roots, cubic_roots, is_degenerate

DEFAULT_TOL = 1e-9
DEFAULT_LIMIT = 2**20
SWAP = (3, 4, 5, 0, 1, 2)
IDENTITY6 = tuple(range(6))


class TrackingError(RuntimeError):
    pass


class DegeneratePathError(TrackingError):
    pass


class RefinementLimitExceeded(TrackingError):
    pass


def _sixth_roots() -> list[complex]:
    return [cmath.exp(2j * math.pi * k / 6) for k in range(6)]


@dataclass(frozen=True)
class LoopPath:
    """Piecewise-linear path through ``samples`` of normalised (a, b).

    ``twist`` is the sixth root of unity l with last = (l^2 a_0, l^3 b_0);
    for ordinary loops it is 1 and the last sample must equal the first.
    """

    samples: tuple[tuple[complex, complex], ...]
    label: str = ""
    twist: complex = 1
    refinement_limit: int = DEFAULT_LIMIT

    def __post_init__(self):
        pts = tuple((complex(a), complex(b)) for a, b in self.samples)
        object.__setattr__(self, "samples", pts)
        if len(pts) < 2:
            raise ValueError("a loop needs at least two samples")
        (a0, b0), (a1, b1) = pts[0], pts[-1]
        lam = complex(self.twist)
        if abs(lam**6 - 1) > 1e-12:
            raise ValueError("twist must be a sixth root of unity")
        if lam == 1:
            if pts[0] != pts[-1]:
                raise ValueError("loop is not closed: first and last samples differ")
        else:
            err = abs(lam**2 * a0 - a1) + abs(lam**3 * b0 - b1)
            if err > 1e-10 * (1 + abs(a0) + abs(b0)):
                raise ValueError("loop endpoints are not related by the stated twist")

    @property
    def basepoint(self) -> tuple[complex, complex]:
        return self.samples[0]

    @classmethod
    def from_abd(cls, samples: Sequence[tuple[complex, complex, complex]], label: str = "", **kw) -> "LoopPath":
        """Normalise (a, b, d) samples with a sixth root of d chosen continuously along the path."""
        out, lam_prev = [], None
        for a, b, d in samples:
            if d == 0:
                raise ValueError("d must be nonzero")
            base = complex(d) ** (-1 / 6)
            if lam_prev is None:
                lam = base
            else:
                lam = min((base * z for z in _sixth_roots()), key=lambda c: abs(c - lam_prev))
            lam_prev = lam
            out.append((lam**2 * a, lam**3 * b))
        (a0, b0), (a1, b1) = out[0], out[-1]
        # the endpoints represent the same weighted point when (a, b, d) closes up
        first, last = samples[0], samples[-1]
        if any(abs(complex(x) - complex(y)) > 1e-12 * (1 + abs(complex(x))) for x, y in zip(first, last)):
            raise ValueError("(a, b, d) samples do not return to their starting value")
        twist = min(_sixth_roots(), key=lambda z: abs(z**2 * a0 - a1) + abs(z**3 * b0 - b1))
        if abs(twist - 1) < 1e-9:
            twist = 1
            out[-1] = out[0]
        else:
            out[-1] = (twist**2 * a0, twist**3 * b0)
        return cls(tuple(out), label, twist, **kw)

    @classmethod
    def from_parameter(cls, ts: Sequence[complex], a_of, b_of, label: str = "") -> "LoopPath":
        """Image of a closed polygon ``ts`` in a parameter plane under t -> (a_of(t), b_of(t))."""
        pts = [(complex(a_of(t)), complex(b_of(t))) for t in ts]
        pts[-1] = pts[0]
        return cls(tuple(pts), label)

    @classmethod
    def lasso(cls, base: complex, target: complex, radius: float, a_of, b_of, n: int = 48, label: str = "") -> "LoopPath":
        """Go straight from ``base`` towards ``target``, circle it once anticlockwise, come back."""
        u = (target - base) / abs(target - base)
        entry = target - radius * u
        leg = [base + (entry - base) * k / n for k in range(n + 1)]
        phase = cmath.phase(-u)
        ring = [target + radius * cmath.exp(1j * (phase + 2 * math.pi * k / n)) for k in range(1, n + 1)]
        ring[-1] = entry
        ts = leg + ring + leg[-2::-1]
        return cls.from_parameter(ts, a_of, b_of, label)

    @classmethod
    def circle(cls, center: complex, radius: float, n: int = 64, label: str = "", a_of=None, b_of=None) -> "LoopPath":
        """Image of a counter-clockwise circle under s -> (a_of(s), b_of(s))."""
        pts = []
        for k in range(n + 1):
            s = center + radius * cmath.exp(2j * math.pi * (k % n) / n)
            pts.append((a_of(s), b_of(s)))
        return cls(tuple(pts), label)

    def reversed(self) -> "LoopPath":
        inv = 1 / complex(self.twist)
        pts = tuple((inv**2 * a, inv**3 * b) for a, b in reversed(self.samples))
        tw = 1 if self.twist == 1 else inv
        if tw == 1:
            pts = (self.samples[0],) + pts[1:-1] + (self.samples[0],)
        else:
            pts = (self.samples[0],) + pts[1:]
        return LoopPath(pts, f"reverse({self.label})", tw, self.refinement_limit)

    def then(self, other: "LoopPath") -> "LoopPath":
        """This loop followed by ``other`` (which must share the basepoint)."""
        if other.basepoint != self.basepoint:
            raise ValueError("loops do not share a basepoint")
        lam = complex(self.twist)
        tail = tuple((lam**2 * a, lam**3 * b) for a, b in other.samples[1:])
        tw = lam * complex(other.twist)
        if abs(tw - 1) < 1e-12:
            tw = 1
            tail = tail[:-1] + (self.samples[0],)
        return LoopPath(self.samples + tail, f"{self.label}*{other.label}", tw, self.refinement_limit)

    def refined(self, k: int) -> "LoopPath":
        """Insert k - 1 evenly spaced points into every segment."""
        pts = [self.samples[0]]
        for (a0, b0), (a1, b1) in zip(self.samples, self.samples[1:]):
            for m in range(1, k + 1):
                s = m / k
                pts.append((a0 + s * (a1 - a0), b0 + s * (b1 - b0)))
        pts[-1] = self.samples[-1]
        return LoopPath(tuple(pts), self.label, self.twist, self.refinement_limit)

    def to_json(self) -> dict:
        data = {
            "samples": [[a.real, a.imag, b.real, b.imag] for a, b in self.samples],
            "label": self.label,
        }
        if self.twist != 1:
            data["twist"] = [complex(self.twist).real, complex(self.twist).imag]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "LoopPath":
        raw = data["samples"]
        if not raw:
            raise ValueError("empty loop")
        if all(len(s) == 6 for s in raw):
            triples = [(complex(s[0], s[1]), complex(s[2], s[3]), complex(s[4], s[5])) for s in raw]
            return cls.from_abd(triples, data.get("label", ""))
        if not all(len(s) == 4 for s in raw):
            raise ValueError("samples must be [re_a, im_a, re_b, im_b] (or with re_d, im_d)")
        pts = tuple((complex(s[0], s[1]), complex(s[2], s[3])) for s in raw)
        tw = data.get("twist")
        return cls(pts, data.get("label", ""), complex(*tw) if tw else 1)


def load_loops(path) -> list[LoopPath]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("loops", [data])
    return [LoopPath.from_json(d) for d in data]


# --------------------------------------------------------------------------
# Steps


LETTERS = "abcdef"


def cycle_notation(perm: Sequence[int], points: Sequence[int]) -> str:
    sub = {p: perm[p] for p in points}
    seen, parts = set(), []
    for p in points:
        if p in seen or sub[p] == p:
            continue
        c, q = [], p
        while q not in seen:
            seen.add(q)
            c.append(LETTERS[q])
            q = sub[q]
        parts.append("(" + "".join(c) + ")")
    return "".join(parts) or "()"


@dataclass(frozen=True)
class MonodromyStep:
    perm: tuple[int, ...]  # permutation of the six labels

    def __post_init__(self):
        p = tuple(int(x) for x in self.perm)
        object.__setattr__(self, "perm", p)
        if sorted(p) != list(range(6)):
            raise ValueError("not a permutation of six labels")
        first = {p[0], p[1], p[2]}
        if first not in ({0, 1, 2}, {3, 4, 5}):
            raise ValueError("permutation mixes the two root sets")

    @property
    def swapped(self) -> bool:
        return self.perm[0] >= 3

    def _unswapped(self) -> tuple[int, ...]:
        return compose(SWAP, self.perm) if self.swapped else self.perm

    @property
    def permutation_minus(self) -> tuple[int, int, int]:
        """Action on the P - 1 roots after removing the fixed swap s (i <-> i+3)."""
        return tuple(self._unswapped()[:3])

    @property
    def permutation_plus(self) -> tuple[int, int, int]:
        return tuple(x - 3 for x in self._unswapped()[3:])

    def then(self, other: "MonodromyStep") -> "MonodromyStep":
        """Monodromy of this loop followed by ``other``."""
        return MonodromyStep(compose(other.perm, self.perm))

    def inverse(self) -> "MonodromyStep":
        return MonodromyStep(inverse(self.perm))

    @property
    def is_identity(self) -> bool:
        return self.perm == IDENTITY6

    @property
    def order(self) -> int:
        from .groups import perm_order

        return perm_order(self.perm)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in cycles(self.perm)), reverse=True))

    def to_json(self) -> dict:
        return {
            "perm": list(self.perm),
            "minus": cycle_notation(self.perm, (0, 1, 2)) if not self.swapped else None,
            "plus": cycle_notation(self.perm, (3, 4, 5)) if not self.swapped else None,
            "swapped": self.swapped,
            "cycle_type": list(self.cycle_type()),
        }


# --------------------------------------------------------------------------
# Tracking


def _roots_at(a: complex, b: complex) -> np.ndarray:
    return np.concatenate([cubic_roots(a, b + 1), cubic_roots(a, b - 1)])


def _match3(old: np.ndarray, new: np.ndarray) -> tuple[tuple[int, ...], float, float]:
    """Best assignment old[k] -> new[p[k]], its max motion, and the runner-up's."""
    best = []
    for p in itertools.permutations(range(3)):
        best.append((max(abs(old[k] - new[p[k]]) for k in range(3)), p))
    best.sort()
    return best[0][1], best[0][0], best[1][0]


def _min_gap(r: np.ndarray) -> float:
    return min(abs(r[i] - r[j]) for i in range(3) for j in range(i + 1, 3))


@dataclass
class TrackStats:
    evaluations: int = 0
    subdivisions: int = 0


def _check_point(a, b):
    if is_degenerate(MPoint(a, b)):
        raise DegeneratePathError(f"degenerate point on path at a={a}, b={b}")


def continue_roots(samples, start: np.ndarray, tol: float, limit: int, stats: TrackStats) -> np.ndarray:
    """Carry the six roots along the piecewise-linear path with adaptive steps."""
    cur = np.array(start, dtype=complex)
    for (a0, b0), (a1, b1) in zip(samples, samples[1:]):
        _check_point(a1, b1)
        stack = [(0.0, 1.0)]
        s_done = 0.0
        while stack:
            lo, hi = stack.pop()
            a = a0 + hi * (a1 - a0)
            b = b0 + hi * (b1 - b0)
            new = _roots_at(a, b)
            stats.evaluations += 1
            if stats.evaluations > limit:
                raise RefinementLimitExceeded(f"more than {limit} root evaluations")
            ok = True
            nxt = np.empty(6, dtype=complex)
            for half in (0, 3):
                old3, new3 = cur[half : half + 3], new[half : half + 3]
                gap = _min_gap(new3)
                if gap < 1e-12:
                    ok = False
                    break
                p, motion, runner = _match3(old3, new3)
                # refine if roots could have swapped places, or the match is ambiguous
                if motion * 3 >= gap or runner - motion < 10 * tol:
                    ok = False
                    break
                for k in range(3):
                    nxt[half + k] = new3[p[k]]
            if ok:
                cur = nxt
                s_done = hi
                continue
            if hi - lo < 1e-14:
                _check_point(a, b)
                raise RefinementLimitExceeded("step size underflow near a root collision")
            mid = (lo + hi) / 2
            mid_a, mid_b = a0 + mid * (a1 - a0), b0 + mid * (b1 - b0)
            _check_point(mid_a, mid_b)
            stats.subdivisions += 1
            stack.append((mid, hi))
            stack.append((lo, mid))
        assert s_done == 1.0
    return cur


@dataclass(frozen=True)
class TrackResult:
    step: MonodromyStep
    base_roots: tuple[complex, ...]
    end_roots: tuple[complex, ...]
    max_residual: float
    evaluations: int


def track(loop: LoopPath, tol: float = DEFAULT_TOL) -> TrackResult:
    a0, b0 = loop.basepoint
    _check_point(a0, b0)
    base = alternate_fibre_roots(MPoint(a0, b0))
    start = np.array(base.roots_minus + base.roots_plus, dtype=complex)
    stats = TrackStats()
    end = continue_roots(loop.samples, start, tol, loop.refinement_limit, stats)
    lam = complex(loop.twist)
    # transport back to the basepoint's coordinates: x -> x / l
    back = end / lam
    swapped = abs(lam**3 + 1) < 1e-9
    perm = [0] * 6
    max_res = 0.0
    for half in (0, 3):
        target = 3 - half if swapped else half
        p, motion, runner = _match3(back[half : half + 3], start[target : target + 3])
        if runner - motion < 10 * tol:
            raise TrackingError("ambiguous identification of roots at the basepoint")
        sign = 1 if target == 0 else -1
        for k in range(3):
            perm[half + k] = target + p[k]
            x = back[half + k]
            max_res = max(max_res, abs(4 * x**3 - 3 * a0 * x - b0 - sign))
    if max_res > 1e-6:
        raise TrackingError(f"transported roots miss their targets (residual {max_res:.2e})")
    return TrackResult(MonodromyStep(tuple(perm)), tuple(start), tuple(back), max_res, stats.evaluations)


def track_loop(loop: LoopPath, tol: float = DEFAULT_TOL) -> MonodromyStep:
    return track(loop, tol).step


def stable_step(loop: LoopPath, tol: float = DEFAULT_TOL, max_doublings: int = 6) -> MonodromyStep:
    """Track, then re-track with doubled sampling until two successive results agree."""
    prev = track_loop(loop, tol)
    k = 2
    for _ in range(max_doublings):
        cur = track_loop(loop.refined(k), tol)
        if cur == prev:
            return cur
        prev, k = cur, 2 * k
    raise TrackingError("permutation did not stabilise under refinement")


# --------------------------------------------------------------------------
# Cover report


@dataclass(frozen=True)
class CoverReport:
    H: tuple[tuple[int, ...], ...]
    G: tuple[tuple[int, ...], ...]
    has_swap: bool
    steps: tuple[MonodromyStep, ...] = field(default=(), repr=False)

    @property
    def H_order(self) -> int:
        return len(self.H)

    @property
    def G_order(self) -> int:
        return len(self.G)

    @property
    def exact_sequence_note(self) -> str:
        if self.has_swap:
            return f"1 -> H (order {self.H_order}) -> G (order {self.G_order}) -> C2 -> 1"
        return f"no loop exchanges the root sets, so G = H (order {self.H_order})"

    def to_json(self) -> dict:
        return {
            "H": [[cycle_notation(h, (0, 1, 2)), cycle_notation(h, (3, 4, 5))] for h in self.H],
            "H_order": self.H_order,
            "G_order": self.G_order,
            "has_swap": self.has_swap,
            "exact_sequence_note": self.exact_sequence_note,
            "steps": [s.to_json() for s in self.steps],
        }


def cover_report(steps: Iterable[MonodromyStep]) -> CoverReport:
    steps = tuple(steps)
    g = close([s.perm for s in steps], degree=6, cap=72)
    h = tuple(p for p in g.elements if p[0] < 3)
    has_swap = any(s.swapped for s in steps)
    report = CoverReport(h, g.elements, has_swap, steps)
    if 36 % report.H_order or report.G_order > 72:
        raise ArithmeticError("group exceeds the wreath product bound")
    if report.G_order != (2 if has_swap else 1) * report.H_order:
        raise ArithmeticError("exact sequence violated")
    return report


def fundamental_group_run(loops: Sequence[LoopPath], tol: float = DEFAULT_TOL) -> CoverReport:
    if loops:
        base = loops[0].basepoint
        if any(l.basepoint != base for l in loops):
            raise ValueError("loops must share a basepoint")
    return cover_report(track_loop(l, tol) for l in loops)


# --------------------------------------------------------------------------
# Assumption check


@dataclass(frozen=True)
class AssumptionReport:
    holds: bool
    failures: tuple[int, ...]
    note: str


def assumption_check(path: Iterable[MPoint]) -> AssumptionReport:
    """Six I_2 fibres on every sampled point, i.e. a^3 != (b +- 1)^2 throughout."""
    bad = tuple(k for k, p in enumerate(path) if is_degenerate(p))
    if not bad:
        return AssumptionReport(True, (), "six I_2 fibres at every sample")
    note = f"degenerate at {len(bad)} sample(s); root tracking is inapplicable here"
    return AssumptionReport(False, bad, note)
