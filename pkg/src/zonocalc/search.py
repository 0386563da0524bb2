"""Seeded falsification campaigns over the check registry, plus built-in reproductions.

Trial ``k`` of a campaign with seed ``s`` draws from a Philox generator keyed
by ``(s, k)``, so any trial can be regenerated on its own and trials can run
in any order or in parallel without changing the output.
"""

from __future__ import annotations

import hashlib
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional, TextIO

import numpy as np

from . import checks
from . import lp_cases
from . import numerics as nm
from . import serialize as ser
from . import steiner
from . import submodular as sm
from .ellipsoid import EllipsoidL2
from .numerics import Mode
from .polygon2d import random_polygon
from .result import HOLDS, INCONCLUSIVE, VIOLATED, CheckResult, judge
from .zonotope import Parallelotope, Zonotope, steiner3

DISTRIBUTIONS = ("integer-lattice", "gaussian", "sphere", "flat", "near-parallel")
DEFAULT_LATTICE = 10


@dataclass(frozen=True)
class Campaign:
    check_id: str
    dim: int = 3
    gens: tuple = (3, 6)
    trials: int = 100
    seed: int = 0
    distribution: str = "integer-lattice"
    mode: Optional[Mode] = None  # default: exact for the lattice, float otherwise
    lattice: int = DEFAULT_LATTICE
    codim: int = 1
    epsilon: float = 1e-3
    p: Optional[float] = None

    def __post_init__(self):
        checks.get_spec(self.check_id)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.dim <= nm.MAX_DIM:
            raise ValueError(f"dim must be in [1, {nm.MAX_DIM}]")
        lo, hi = self.gens
        if not 1 <= lo <= hi <= nm.MAX_GENERATORS:
            raise ValueError(f"generator range must satisfy 1 <= min <= max <= {nm.MAX_GENERATORS}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"distribution must be one of {', '.join(DISTRIBUTIONS)}")
        if self.lattice < 1:
            raise ValueError("lattice range must be >= 1")
        if self.distribution == "flat" and not 0 <= self.codim < self.dim:
            raise ValueError("codim must be in [0, dim)")
        if self.mode is None:
            default = Mode.EXACT if self.distribution == "integer-lattice" else Mode.FLOAT
            object.__setattr__(self, "mode", default)
        object.__setattr__(self, "gens", (int(lo), int(hi)))

    def config(self) -> dict:
        d = asdict(self)
        d["mode"] = self.mode.value
        d["gens"] = list(self.gens)
        return d

    def config_hash(self) -> str:
        return hashlib.sha256(ser.dumps(self.config()).encode()).hexdigest()


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator for one trial."""
    return np.random.Generator(np.random.Philox(key=(seed << 64) | trial))


# --------------------------------------------------------------------------
# random geometry


class Sampler:
    """Draws vectors and bodies for one trial according to a campaign."""

    def __init__(self, c: Campaign, rng: np.random.Generator):
        self.c = c
        self.rng = rng
        self.exact = c.mode is Mode.EXACT
        self._flat_basis = None
        self._axis = None

    def scalar(self, x: float):
        if self.exact:
            return Fraction(x).limit_denominator(10**4) if isinstance(x, float) else Fraction(x)
        return float(x)

    def _raw(self, n: int) -> list:
        c, rng = self.c, self.rng
        dist = c.distribution
        if dist == "integer-lattice":
            return [int(x) for x in rng.integers(-c.lattice, c.lattice + 1, size=n)]
        if dist == "gaussian":
            return [float(x) for x in rng.standard_normal(n)]
        if dist == "sphere":
            g = rng.standard_normal(n)
            return [float(x) for x in g / np.linalg.norm(g)]
        if dist == "flat":
            if self._flat_basis is None or len(self._flat_basis[0]) != n:
                k = max(n - c.codim, 1)
                self._flat_basis = [[int(x) for x in rng.integers(-3, 4, size=n)] for _ in range(k)]
            coef = rng.integers(-c.lattice, c.lattice + 1, size=len(self._flat_basis))
            return [int(sum(int(a) * b[i] for a, b in zip(coef, self._flat_basis))) for i in range(n)]
        # near-parallel: a common axis plus epsilon noise
        if self._axis is None or len(self._axis) != n:
            self._axis = [int(x) for x in rng.integers(-c.lattice, c.lattice + 1, size=n)]
            if not any(self._axis):
                self._axis[0] = 1
        t = float(rng.uniform(-1, 1))
        return [t * a + c.epsilon * float(rng.uniform(-1, 1)) for a in self._axis]

    def vector(self, n: Optional[int] = None) -> tuple:
        n = self.c.dim if n is None else n
        while True:
            v = tuple(self.scalar(x) for x in self._raw(n))
            if any(x != 0 for x in v):
                return v

    def count(self, lo: Optional[int] = None) -> int:
        a, b = self.c.gens
        a = max(a, lo or a)
        return int(self.rng.integers(a, max(a, b) + 1))

    def zonotope(self, n: Optional[int] = None, count: Optional[int] = None) -> Zonotope:
        n = self.c.dim if n is None else n
        count = self.count() if count is None else count
        return Zonotope(n, tuple(self.vector(n) for _ in range(count)))

    def small_zonotope(self, n: Optional[int] = None) -> Zonotope:
        return self.zonotope(n, int(self.rng.integers(1, 4)))

    def frame(self, n: Optional[int] = None) -> tuple:
        """Random orthonormal rows: rational via a Cayley transform, or QR for floats."""
        n = self.c.dim if n is None else n
        if self.exact:
            s = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    x = Fraction(int(self.rng.integers(-6, 7)), int(self.rng.integers(1, 5)))
                    s[i][j], s[j][i] = x, -x
            return nm.cayley(s)
        q, _ = np.linalg.qr(self.rng.standard_normal((n, n)))
        return tuple(tuple(float(x) for x in row) for row in q.T)

    def orthonormal_pair(self, n: Optional[int] = None) -> tuple:
        q = self.frame(n)
        return q[0], q[1]

    def polygon(self):
        k = self.count(lo=3)
        if self.exact:
            return random_polygon(self.rng, k, scale=self.c.lattice, exact=True)
        return random_polygon(self.rng, k, scale=1.0, exact=False)

    def parallelotope(self, n: Optional[int] = None) -> Parallelotope:
        n = self.c.dim if n is None else n
        while True:
            edges = tuple(self.vector(n) for _ in range(n))
            if nm.det(edges) != 0:
                return Parallelotope(tuple(self.scalar(0) for _ in range(n)), edges)

    def ellipsoid(self, n: Optional[int] = None) -> EllipsoidL2:
        n = self.c.dim if n is None else n
        while True:
            e = EllipsoidL2(n, tuple(self.vector(n) for _ in range(self.count(lo=n))))
            if e.is_full_dimensional():
                return e

    def columns(self, n: int, count: int) -> tuple:
        return tuple(self.vector(n) for _ in range(count))

    def exponent(self) -> float:
        return self.c.p if self.c.p is not None else int(self.rng.integers(1, 5))


def _lp_columns(s: Sampler) -> dict:
    n = s.c.dim
    count = s.count(lo=max(n + 1, 2 * n - 2))
    split = int(s.rng.integers(max(n - 1, 1), count - max(n - 1, 1) + 1))
    return {"columns": s.columns(n, count), "split": split}


def _compression(s: Sampler) -> dict:
    m = int(s.rng.integers(2, 6))
    f = sm.random_submodular(s.rng, m, exact=s.exact)
    h = sm.random_hypergraph(s.rng, m, int(s.rng.integers(2, 6)))
    _, steps = sm.greedy_compress(h, s.rng)
    return {"m": m, "table": f.table, "hypergraph": [sorted(x) for x in h.sets], "steps": steps}


def _lattice(s: Sampler) -> dict:
    m = int(s.rng.integers(2, 6))
    return {"m": m, "table": sm.random_table(s.rng, m).table}


def _zon_equivalents(s: Sampler) -> dict:
    n = s.c.dim
    u, v = s.vector(), s.vector()
    k = int(s.rng.integers(1, n + 1))
    perm = [int(i) for i in s.rng.permutation(n)]
    cut = int(s.rng.integers(1, n)) if n > 1 else 1
    return {
        "A": s.zonotope(),
        "u": u,
        "v": v,
        "frame": s.frame(),
        "I": perm[:cut],
        "J": perm[cut : cut + int(s.rng.integers(0, n - cut + 1))],
        "m": int(s.rng.integers(1, n + 1)),
        "B": [s.small_zonotope() for _ in range(k)],
    }


_SAMPLERS: dict[str, Callable[[Sampler], dict]] = {
    "logsubmod.zonotope": lambda s: {"A": s.zonotope(), "B1": s.zonotope(), "B2": s.zonotope()},
    "localaf.zonotope": lambda s: {"A": s.zonotope(), "Z1": s.small_zonotope(), "Z2": s.small_zonotope()},
    "fenchel2.zonotope": lambda s: {"A": s.zonotope(), "Z1": s.small_zonotope(), "Z2": s.small_zonotope()},
    "hope.r3": lambda s: dict(zip(("A", "u", "v"), (s.zonotope(3),) + s.orthonormal_pair(3))),
    "hope.matr": lambda s: {"A": s.zonotope(3)},
    "weak.zonotope": lambda s: {"A": s.zonotope(), "B": s.zonotope(), "u": s.vector()},
    "constrong.zonotope": lambda s: {"A": s.zonotope(), "B": s.zonotope(), "u": s.vector()},
    "surfproj.zonotope": lambda s: {"A": s.zonotope(), "u": s.vector()},
    "linear.equivalents": lambda s: {"A": s.zonotope(), "u": s.vector(), "v": s.vector()},
    "zon.equivalents": _zon_equivalents,
    "parallelotope.rn": lambda s: {"A": s.parallelotope(), "u": s.vector(), "v": s.vector()},
    "parallelotope.subspaces": lambda s: {
        "A": s.parallelotope(),
        "I": [0],
        "J": list(range(1, int(s.rng.integers(2, s.c.dim + 1)))),
    },
    "courtade.2d": lambda s: {"A": s.polygon(), "B": s.polygon(), "C": s.polygon()},
    "bonnesen.2d": lambda s: {"A": s.polygon(), "B": s.polygon(), "u": s.vector(2)},
    "fenchel.bon": lambda s: {"A": s.polygon(), "B": s.polygon(), "C": s.polygon()},
    "logsubmod.2d": lambda s: {"A": s.polygon(), "B1": s.polygon(), "B2": s.polygon()},
    "dct.ratio": lambda s: {"A": s.zonotope(), "B": s.zonotope()},
    "l2.strong": lambda s: {"A": s.ellipsoid(), "B": s.ellipsoid(), "u": s.vector()},
    "l2.det": _lp_columns,
    "l2.proj": lambda s: {
        "A": s.ellipsoid(),
        "B": s.ellipsoid(),
        "basis": s.frame()[: int(s.rng.integers(1, s.c.dim + 1))],
    },
    "l2.mixed": lambda s: {
        "A": s.ellipsoid(),
        "B": s.ellipsoid(),
        "Z": [s.small_zonotope() for _ in range(int(s.rng.integers(1, s.c.dim + 1)))],
    },
    "l2.surface": lambda s: {"A": s.ellipsoid(), "B": s.ellipsoid(), "samples": 20000, "seed": int(s.rng.integers(2**31))},
    "l2.concavity": lambda s: {"A": s.ellipsoid(), "B": s.ellipsoid(), "u": s.vector()},
    "lp.det": lambda s: {**_lp_columns(s), "p": s.exponent()},
    "lp.gamma": lambda s: {"n": int(s.rng.integers(2, 9)), "p": s.c.p if s.c.p is not None else float(s.rng.uniform(1, 4))},
    "lp.polygon": lambda s: {
        "a": s.scalar(float(s.rng.uniform(0.01, 0.99))),
        "p": s.c.p if s.c.p is not None else int(s.rng.integers(2, 9)),
    },
    "steiner.marcus": lambda s: {"Z": s.zonotope(3)},
    "steiner.sqrt-concavity": lambda s: {"A": s.zonotope(), "u": s.vector(), "v": s.vector()},
    "submod.compression": _compression,
    "submod.lattice": _lattice,
}


def sample_inputs(c: Campaign, trial: int) -> dict:
    """Inputs of one trial, as the keyword arguments of the check."""
    s = Sampler(c, trial_rng(c.seed, trial))
    return _SAMPLERS[c.check_id](s)


# --------------------------------------------------------------------------
# running


def run_trial(c: Campaign, trial: int) -> CheckResult:
    kwargs = sample_inputs(c, trial)
    # go through JSON once so the run sees exactly what a replay will parse
    raw = ser.to_jsonable(kwargs)
    parsed, _ = checks.parse_inputs(c.check_id, raw, c.mode)
    return checks.run_check(c.check_id, parsed, seed=c.seed)


def _run_chunk(args) -> list:
    c, trials = args
    return [run_trial(c, k) for k in trials]


def witness_record(c: Campaign, trial: int, r: CheckResult, timestamp: Optional[str] = None) -> dict:
    rec = {"trial": trial, "campaign": c.config_hash(), **r.to_dict()}
    if timestamp is not None:
        rec["timestamp"] = timestamp
    return rec


@dataclass
class Summary:
    trials: int = 0
    holds: int = 0
    equality: int = 0
    violated: int = 0
    inconclusive: int = 0
    min_margin: Optional[dict] = None
    max_ratio: Optional[float] = None  # largest lhs/rhs seen, for sharpness of constants
    config: dict = field(default_factory=dict)
    config_hash: str = ""

    def add(self, trial: int, r: CheckResult) -> None:
        self.trials += 1
        setattr(self, r.verdict, getattr(self, r.verdict) + 1)
        if r.verdict == INCONCLUSIVE:
            return
        best = self.min_margin
        if best is None or (r.margin, trial) < (best["_margin"], best["trial"]):
            self.min_margin = {"trial": trial, "_margin": r.margin, "result": r}
        if r.rhs > 0:
            ratio = float(r.lhs) / float(r.rhs)
            if self.max_ratio is None or ratio > self.max_ratio:
                self.max_ratio = ratio

    def to_dict(self) -> dict:
        mm = None
        if self.min_margin is not None:
            mm = {"trial": self.min_margin["trial"], **self.min_margin["result"].to_dict()}
        return {
            "trials": self.trials,
            "holds": self.holds,
            "equality": self.equality,
            "violated": self.violated,
            "inconclusive": self.inconclusive,
            "min_margin": mm,
            "max_ratio": self.max_ratio,
            "config": self.config,
            "config_hash": self.config_hash,
        }


def run_campaign(
    c: Campaign,
    out: Optional[TextIO] = None,
    workers: int = 1,
    chunk: int = 64,
    timestamps: bool = False,
) -> dict:
    """Run every trial, stream JSONL records to ``out`` and return the summary.

    Records are written in trial order whatever the worker count, so the
    output is byte-identical across runs with the same campaign.
    """
    summary = Summary(config=c.config(), config_hash=c.config_hash())
    batches = [(c, range(i, min(i + chunk, c.trials))) for i in range(0, c.trials, chunk)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_run_chunk, batches)
            _consume(c, batches, results, summary, out, timestamps)
    else:
        _consume(c, batches, map(_run_chunk, batches), summary, out, timestamps)
    footer = summary.to_dict()
    if out is not None:
        out.write(ser.dumps({"summary": footer}) + "\n")
    return footer


def _consume(c, batches, results, summary, out, timestamps) -> None:
    import datetime

    for (_, trials), rs in zip(batches, results):
        for k, r in zip(trials, rs):
            summary.add(k, r)
            if out is not None:
                ts = datetime.datetime.now(datetime.timezone.utc).isoformat() if timestamps else None
                out.write(ser.dumps(witness_record(c, k, r, ts)) + "\n")


def campaign_jsonl(c: Campaign, **kw) -> str:
    buf = io.StringIO()
    run_campaign(c, buf, **kw)
    return buf.getvalue()


def replay(record: dict) -> CheckResult:
    """Re-run a persisted witness record.

    The input mode comes from the witness itself (exact values are stored as
    strings, floats as numbers); the result mode can differ from it.
    """
    parsed, _ = checks.parse_inputs(record["check_id"], record["witness"])
    return checks.run_check(record["check_id"], parsed, seed=record.get("seed"))


def replay_matches(record: dict) -> bool:
    """Same verdict; exact margins equal; float sides equal to the bit."""
    r = replay(record)
    again = ser.to_jsonable(r.to_dict())
    before = ser.to_jsonable(record)
    return all(again[k] == before[k] for k in ("verdict", "lhs", "rhs", "margin"))


# --------------------------------------------------------------------------
# perturbation and reproductions


def perturb(z: Zonotope, eps, seed: int = 0) -> Zonotope:
    """Add ``eps`` times pseudorandom rationals in [-1, 1] (denominator 1000) to each coordinate."""
    if eps == 0:
        return z
    rng = trial_rng(seed, 0)
    exact = z.mode is Mode.EXACT and not isinstance(eps, float)
    gens = []
    for g in z.generators:
        offs = [Fraction(int(k), 1000) for k in rng.integers(-1000, 1001, size=len(g))]
        if exact:
            gens.append(tuple(x + Fraction(eps) * o for x, o in zip(g, offs)))
        else:
            gens.append(tuple(float(x) + float(eps) * float(o) for x, o in zip(g, offs)))
    return Zonotope(z.dim, tuple(gens))


def polygon_zonotope(m: int) -> Zonotope:
    """Regular m-gon (m even, circumradius 1) in the plane z = 0 of R^3, as a sum of m/2 edges."""
    if m < 4 or m % 2:
        raise ValueError("a zonogon needs an even number m >= 4 of vertices")
    pts = [(math.cos(2 * math.pi * k / m), math.sin(2 * math.pi * k / m)) for k in range(m // 2 + 1)]
    gens = tuple((b[0] - a[0], b[1] - a[1], 0.0) for a, b in zip(pts, pts[1:]))
    return Zonotope(3, gens)


def flat_discriminant(z: Zonotope) -> float:
    """Discriminant of the non-zero-root factor of the Steiner polynomial, divided by pi."""
    r = checks.steiner_root_check(steiner3(z), math.pi)
    return float(r.margin)


@dataclass(frozen=True)
class Repro:
    case_id: str
    description: str
    result: Optional[CheckResult]
    expected: str
    reproduced: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "description": self.description,
            "expected": self.expected,
            "reproduced": self.reproduced,
            "result": self.result.to_dict() if self.result is not None else None,
            "details": self.details,
        }


def _repro_marcus() -> Repro:
    disk = checks.steiner_root_check(steiner.flat_disk_steiner(3), math.pi)
    ms = list(range(32, 130, 2))
    polys = {m: flat_discriminant(polygon_zonotope(m)) for m in ms}
    perturbed = {m: flat_discriminant(perturb(polygon_zonotope(m), 1e-3, seed=m)) for m in (32, 64, 128)}
    ok = disk.verdict == VIOLATED and all(d < 0 for d in polys.values()) and all(d < 0 for d in perturbed.values())
    return Repro(
        "marcus.flat-disk",
        "flat unit disk in R^3: the Steiner polynomial has non-real roots",
        disk,
        VIOLATED,
        ok,
        {
            "closed_form": math.pi**2 - 32 / 3,
            "mgon_discriminants": {str(m): d for m, d in polys.items()},
            "perturbed_1e-3": {str(m): d for m, d in perturbed.items()},
        },
    )


def _repro_lp_det() -> Repro:
    r = lp_cases.lp_determinant_check(lp_cases.P3_MATRIX_COLUMNS, lp_cases.P3_MATRIX_SPLIT, 3)
    return Repro(
        "lp.det.p3",
        "3-power determinant ratio inequality on the 2x3 matrix with columns (1,1), (-1,1), (0,1)",
        r,
        VIOLATED,
        r.verdict == VIOLATED and r.margin == Fraction(-2, 3),
    )


def _repro_lp_polygon() -> Repro:
    r = lp_cases.lp_polygon_counterexample(Fraction(1, 2), 4)
    return Repro(
        "lp.polygon",
        "octagon family at a = 1/2, p = 4",
        r,
        VIOLATED,
        r.verdict == VIOLATED,
        {"crosscheck": lp_cases.lp_polygon_crosscheck(0.5, 4)},
    )


def _repro_gamma() -> Repro:
    ts = {n: lp_cases.gamma_threshold(n) for n in range(2, 9)}
    worst = max(abs(t - 2.0) for t in ts.values())
    r = judge("gamma.threshold", worst, 1e-6, details={"thresholds": {str(n): t for n, t in ts.items()}})
    return Repro(
        "gamma.threshold",
        "sign change of the Gamma ball test in p, for n = 2..8",
        r,
        HOLDS,
        r.verdict == HOLDS,
    )


def _repro_c3() -> Repro:
    return Repro(
        "c3.note",
        "recorded best constants of the sum inequality in dimensions 2 and 3 (context only)",
        None,
        "none",
        True,
        {"c2": 1, "c3": Fraction(4, 3)},
    )


REPRO_CASES: dict[str, Callable[[], Repro]] = {
    "marcus.flat-disk": _repro_marcus,
    "lp.det.p3": _repro_lp_det,
    "lp.polygon": _repro_lp_polygon,
    "gamma.threshold": _repro_gamma,
    "c3.note": _repro_c3,
}


def repro(case_id: str) -> Repro:
    try:
        return REPRO_CASES[case_id]()
    except KeyError:
        raise KeyError(f"unknown repro case {case_id!r}") from None
