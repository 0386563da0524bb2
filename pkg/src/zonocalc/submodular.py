"""Submodular set functions, multi-hypergraph compressions and the compression-sum inequality.

Subsets of the ground set ``{0, ..., m-1}`` are bitmasks internally and sorted
index lists at the edges of the API.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import numerics as nm
from .numerics import Mode
from .result import CheckResult, judge

MAX_GROUND = 16
MAX_STEPS = 10**4


def mask_of(s: Iterable[int]) -> int:
    out = 0
    for i in s:
        out |= 1 << i
    return out


def members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass(frozen=True)
class SetFunction:
    """Dense table of ``F(S)`` for all ``S`` subsets of ``{0..m-1}``, indexed by bitmask."""

    m: int
    table: tuple

    def __post_init__(self):
        if not 0 <= self.m <= MAX_GROUND:
            raise ValueError(f"ground set size must be in [0, {MAX_GROUND}]")
        if len(self.table) != 1 << self.m:
            raise ValueError("table length must be 2^m")
        vals = tuple(Fraction(v) if isinstance(v, int) else v for v in self.table)
        nm.mode_of(vals)
        object.__setattr__(self, "table", vals)

    @classmethod
    def from_callable(cls, m: int, f: Callable[[frozenset], object]) -> "SetFunction":
        return cls(m, tuple(f(frozenset(members(mask))) for mask in range(1 << m)))

    @property
    def mode(self) -> Mode:
        return nm.mode_of(self.table)

    def __call__(self, s) -> object:
        return self.table[s if isinstance(s, int) else mask_of(s)]


@dataclass(frozen=True)
class Violation:
    s: tuple
    t: tuple
    amount: object  # lhs - rhs of F(S u T) + F(S n T) <= F(S) + F(T), positive


@dataclass(frozen=True)
class SubmodularReport:
    submodular: bool
    worst: Optional[Violation]


def _gap(f: SetFunction, a: int, b: int, multiplicative: bool):
    t = f.table
    if multiplicative:
        return t[a | b] * t[a & b] - t[a] * t[b]
    return t[a | b] + t[a & b] - t[a] - t[b]


def _report(f: SetFunction, pairs, tol, multiplicative) -> SubmodularReport:
    worst = None
    for a, b in pairs:
        g = _gap(f, a, b, multiplicative)
        if g > tol and (worst is None or g > worst[2]):
            worst = (a, b, g)
    if worst is None:
        return SubmodularReport(True, None)
    return SubmodularReport(False, Violation(members(worst[0]), members(worst[1]), worst[2]))


def _tol(f: SetFunction, rel_tol: float) -> float:
    if f.mode is Mode.EXACT:
        return 0
    return rel_tol * max((abs(v) for v in f.table), default=0.0)


def is_submodular_local(f: SetFunction, rel_tol: float = 1e-12, multiplicative: bool = False) -> SubmodularReport:
    """Adjacent pairs only: ``F(S+i+j) + F(S) <= F(S+i) + F(S+j)`` for ``i, j`` outside S.

    ``multiplicative`` tests ``F(S u T) F(S n T) <= F(S) F(T)`` instead, which for
    positive F is submodularity of ``log F`` without taking logarithms.
    """
    m = f.m

    def pairs():
        for s in range(1 << m):
            free = [i for i in range(m) if not s >> i & 1]
            for x in range(len(free)):
                for y in range(x + 1, len(free)):
                    yield s | 1 << free[x], s | 1 << free[y]

    return _report(f, pairs(), _tol(f, rel_tol), multiplicative)


def is_submodular_global(f: SetFunction, rel_tol: float = 1e-12, multiplicative: bool = False) -> SubmodularReport:
    """Every pair ``S, T`` of subsets."""
    n = 1 << f.m
    pairs = ((a, b) for a in range(n) for b in range(a + 1, n))
    return _report(f, pairs, _tol(f, rel_tol), multiplicative)


is_submodular = is_submodular_local


# --------------------------------------------------------------------------
# multi-hypergraphs


@dataclass(frozen=True)
class MultiHypergraph:
    """Ordered list of non-empty subsets (repeats allowed); compare with :meth:`multiset`."""

    sets: tuple

    def __post_init__(self):
        sets = tuple(frozenset(s) for s in self.sets)
        if any(not s for s in sets):
            raise ValueError("hypergraph members must be non-empty")
        if any(i < 0 for s in sets for i in s):
            raise ValueError("elements must be non-negative integers")
        object.__setattr__(self, "sets", sets)

    def multiset(self) -> tuple:
        return tuple(sorted(tuple(sorted(s)) for s in self.sets))

    def weight(self) -> int:
        return sum(len(s) for s in self.sets)

    def degree(self, i: int) -> int:
        return sum(1 for s in self.sets if i in s)

    def non_nested_pairs(self) -> list[tuple[int, int]]:
        out = []
        for i, a in enumerate(self.sets):
            for j in range(i + 1, len(self.sets)):
                b = self.sets[j]
                if not (a <= b or b <= a):
                    out.append((i, j))
        return out

    def is_chain(self) -> bool:
        return not self.non_nested_pairs()


def elementary_compression(h: MultiHypergraph, i: int, j: int) -> MultiHypergraph:
    """Replace ``S_i, S_j`` by ``S_i n S_j`` and ``S_i u S_j``; an empty intersection is dropped."""
    if i == j:
        raise ValueError("need two distinct members")
    a, b = h.sets[i], h.sets[j]
    if a <= b or b <= a:
        raise ValueError("sets are nested")
    out = list(h.sets)
    out[i] = a & b
    out[j] = a | b
    return MultiHypergraph(tuple(s for s in out if s))


def minimal_hypergraph(h: MultiHypergraph) -> MultiHypergraph:
    """``S_j = {i : i lies in at least j members}`` for j = 1, 2, ... (non-empty ones)."""
    ground = sorted(set().union(*h.sets)) if h.sets else []
    deg = {i: h.degree(i) for i in ground}
    top = max(deg.values(), default=0)
    return MultiHypergraph(tuple(frozenset(i for i in ground if deg[i] >= j) for j in range(1, top + 1)))


def greedy_compress(h: MultiHypergraph, rng=None, max_steps: int = MAX_STEPS) -> tuple[MultiHypergraph, list]:
    """Compress until the members form a chain; picks pairs at random when ``rng`` is given."""
    steps = []
    cur = h
    while len(steps) < max_steps:
        pairs = cur.non_nested_pairs()
        if not pairs:
            return cur, steps
        pick = pairs[int(rng.integers(len(pairs)))] if rng is not None else pairs[0]
        steps.append(pick)
        cur = elementary_compression(cur, *pick)
    raise nm.CapExceeded(f"no chain after {max_steps} compressions")


def compression_sum_check(f: SetFunction, h: MultiHypergraph, steps: Sequence[tuple[int, int]]) -> CheckResult:
    """Each compression step must not increase ``sum_S F(S)``.

    A dropped empty intersection counts as ``F(empty)``: the inequality is about
    ``F - F(empty)``, and that shift only matters when members disappear.
    Reports the step with the smallest margin.
    """
    if len(steps) > MAX_STEPS:
        raise nm.CapExceeded(f"more than {MAX_STEPS} compression steps")
    if any(i >= f.m for s in h.sets for i in s):
        raise ValueError("hypergraph element outside the ground set")
    empty = f.table[0]

    def total(g: MultiHypergraph, dropped: int):
        return sum((f(s) for s in g.sets), nm.zero(f.mode)) + dropped * empty

    cur, dropped = h, 0
    before = total(cur, 0)
    first = before
    worst = None
    for k, (i, j) in enumerate(steps):
        nxt = elementary_compression(cur, i, j)
        dropped += len(cur.sets) - len(nxt.sets)
        after = total(nxt, dropped)
        if worst is None or before - after < worst[1] - worst[0]:
            worst = (after, before, k)
        cur, before = nxt, after
    if worst is None:
        worst = (first, first, -1)
    lhs, rhs, k = worst
    return judge(
        "submod.compression",
        lhs,
        rhs,
        mode=f.mode,
        details={"worst_step": k, "steps": len(steps), "initial_sum": first, "final_sum": before},
    )


# --------------------------------------------------------------------------
# random instances


def random_submodular(rng, m: int, terms: int = 4, exact: bool = True, offset: bool = True) -> SetFunction:
    """Sum of concave functions of weighted cardinalities, plus a modular part.

    Each term is ``min(sum_{i in S} w_i, c)``, which is submodular; sums of
    submodular functions and modular functions stay submodular.
    """
    def draw(lo, hi):
        v = int(rng.integers(lo, hi + 1))
        return Fraction(v) if exact else float(v) + float(rng.uniform(0, 1))

    ws = [[draw(0, 5) for _ in range(m)] for _ in range(terms)]
    caps = [draw(1, 10) for _ in range(terms)]
    lin = [draw(-3, 3) for _ in range(m)]
    base = draw(-5, 5) if offset else (Fraction(0) if exact else 0.0)

    def f(s):
        val = base + sum((lin[i] for i in s), 0 * base)
        for w, c in zip(ws, caps):
            val += min(sum((w[i] for i in s), 0 * base), c)
        return val

    return SetFunction.from_callable(m, f)


def random_table(rng, m: int, lo: int = -10, hi: int = 10) -> SetFunction:
    """Integer table, near-submodular half of the time so both verdicts occur."""
    if rng.random() < 0.5:
        return SetFunction(m, tuple(Fraction(int(v)) for v in rng.integers(lo, hi + 1, size=1 << m)))
    f = random_submodular(rng, m)
    noise = rng.integers(-1, 2, size=1 << m) * (rng.random(1 << m) < 0.1)
    return SetFunction(m, tuple(v + int(d) for v, d in zip(f.table, noise)))


def random_hypergraph(rng, m: int, count: int) -> MultiHypergraph:
    sets = []
    while len(sets) < count:
        mask = int(rng.integers(1, 1 << m))
        sets.append(frozenset(members(mask)))
    return MultiHypergraph(tuple(sets))
