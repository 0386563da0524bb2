"""Acceptance criteria 1-10.

Each test records one pass/fail line; ``conftest.pytest_terminal_summary``
prints them after the run.
"""

import io
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from zonocalc import checks, lp_cases, search
from zonocalc import numerics as nm
from zonocalc import polygon2d as pg
from zonocalc import submodular as sm
from zonocalc.ellipsoid import EllipsoidL2, strong_check
from zonocalc.steiner import flat_disk_steiner
from zonocalc.zonotope import Parallelotope, Zonotope, volume

REPORT: dict[int, tuple[str, bool, str]] = {}


class Criterion:
    """Context manager that stores a pass/fail line for the summary."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.notes: list[str] = []
        self.start = time.perf_counter()

    def note(self, text: str) -> None:
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        detail = "; ".join(self.notes + [f"{elapsed:.1f}s"])
        if exc_type is not None and not self.notes:
            detail = f"{exc_type.__name__}: {exc}; {elapsed:.1f}s"
        REPORT[self.number] = (self.title, exc_type is None, detail)
        return False


def campaign(check_id, **kw):
    c = search.Campaign(check_id, **kw)
    buf = io.StringIO()
    summary = search.run_campaign(c, buf)
    recs = [json.loads(x) for x in buf.getvalue().splitlines()[:-1]]
    return summary, recs


def subset_sums(gens):
    out = []
    for r in range(len(gens) + 1):
        for s in itertools.combinations(gens, r):
            out.append(tuple(sum(c) for c in zip(*s)) if s else (Fraction(0),) * len(gens[0]))
    return out


# --------------------------------------------------------------------------


def test_criterion_1_volume_oracles():
    with Criterion(1, "zonotope volume vs hull oracles") as cr:
        rng = np.random.default_rng(101)
        for _ in range(500):
            m = int(rng.integers(1, 9))
            gens = [tuple(Fraction(int(x)) for x in rng.integers(-9, 10, 2)) for _ in range(m)]
            pts = subset_sums(gens)
            try:
                hull = ConvexHull(np.asarray(pts, dtype=float))
                ring = [pts[i] for i in hull.vertices]  # counter-clockwise in 2-D
                shoelace = sum(
                    (ring[i][0] * ring[(i + 1) % len(ring)][1] - ring[(i + 1) % len(ring)][0] * ring[i][1]
                     for i in range(len(ring))),
                    Fraction(0),
                ) / 2
            except QhullError:
                shoelace = Fraction(0)
            assert volume(Zonotope(2, tuple(gens))) == shoelace
        cr.note("500/500 planar exact")

        worst = 0.0
        n_samples = 40_000
        for _ in range(100):
            m = int(rng.integers(3, 7))
            gens = [tuple(int(x) for x in rng.integers(-5, 6, 3)) for _ in range(m)]
            pts = np.asarray(subset_sums([tuple(map(Fraction, g)) for g in gens]), dtype=float)
            lo, hi = pts.min(axis=0), pts.max(axis=0)
            box = float(np.prod(hi - lo))
            v = float(volume(Zonotope(3, tuple(map(lambda g: tuple(map(Fraction, g)), gens)))))
            if box == 0.0:
                assert v == 0.0
                continue
            try:
                eq = ConvexHull(pts).equations
            except QhullError:
                assert v == 0.0
                continue
            samples = rng.uniform(lo, hi, size=(n_samples, 3))
            inside = np.all(samples @ eq[:, :3].T + eq[:, 3] <= 1e-12, axis=1)
            p = inside.mean()
            est = box * p
            sigma = box * math.sqrt(max(p * (1 - p), 1e-300) / n_samples)
            z = abs(est - v) / sigma if sigma > 0 else 0.0
            worst = max(worst, z)
            assert abs(est - v) <= 3 * sigma, (gens, est, v, sigma)
        cr.note(f"100/100 spatial within 3 sigma (worst {worst:.2f} sigma)")
    assert time.perf_counter() - cr.start < 60


def test_criterion_2_hope_exact():
    with Criterion(2, "projection inequality in R^3, 10^4 exact trials") as cr:
        s, recs = campaign("hope.r3", dim=3, gens=(3, 6), trials=10_000, seed=2)
        assert all(r["mode"] == "exact" for r in recs)
        assert s["violated"] == 0 and s["inconclusive"] == 0
        # directions really are orthonormal rationals
        for r in recs[:200]:
            u = [Fraction(x) for x in r["witness"]["u"]]
            v = [Fraction(x) for x in r["witness"]["v"]]
            assert nm.dot(u, u) == 1 and nm.dot(v, v) == 1 and nm.dot(u, v) == 0
        cr.note(f"holds {s['holds']}, equality {s['equality']}, violated 0")
    assert time.perf_counter() - cr.start < 300


def test_criterion_3_zonoid_equivalences():
    with Criterion(3, "five equivalent zonoid forms agree") as cr:
        s, recs = campaign("zon.equivalents", dim=3, trials=1000, seed=3)
        disagree = [r["trial"] for r in recs if not r["details"]["agree"]]
        bad = [r["trial"] for r in recs if r["verdict"] not in ("holds", "equality")]
        cr.note(f"{len(disagree)} discrepancies, {len(bad)} non-holding")
        assert not disagree and not bad


def test_criterion_4_courtade():
    with Criterion(4, "planar square-root inequality") as cr:
        s, recs = campaign("courtade.2d", dim=2, gens=(3, 8), trials=10_000, seed=4)
        worst = min(
            float(r["margin"]) / max(float(r["lhs"]), float(r["rhs"]), 1e-300) for r in recs
        )
        assert all(float(r["margin"]) >= -1e-9 * max(float(r["lhs"]), float(r["rhs"])) for r in recs)
        assert s["violated"] == 0
        assert all(r["details"]["exact_verdict"] in ("holds", "equality") for r in recs)
        sq = pg.square()
        r = checks.check_courtade2(sq, sq, sq)
        assert abs(r.margin) <= 1e-12 and r.details["exact_verdict"] == "equality"
        cr.note(f"violated 0, worst relative margin {worst:.3g}; square triple margin {r.margin:.1g}")


def test_criterion_5_parallelotopes():
    with Criterion(5, "parallelotope inequality and equality detector") as cr:
        s, recs = campaign("parallelotope.rn", dim=3, trials=10_000, seed=5)
        assert s["violated"] == 0
        mismatch = [r["trial"] for r in recs if r["details"]["equality_predicted"] != (r["verdict"] == "equality")]
        assert not mismatch

        rng = np.random.default_rng(55)
        fired = missed = false_alarm = 0
        for _ in range(1000):
            n = int(rng.integers(2, 6))
            while True:
                w = [tuple(Fraction(int(x)) for x in rng.integers(-5, 6, n)) for _ in range(n)]
                if nm.det(w) != 0:
                    break
            p = Parallelotope((Fraction(0),) * n, tuple(w))
            cut = int(rng.integers(1, n))
            idx = [int(i) for i in rng.permutation(n)]
            part_i, part_j = idx[:cut], idx[cut:]

            def combo(support):
                c = [Fraction(int(rng.integers(1, 6))) * (1 if rng.random() < 0.5 else -1) for _ in support]
                out = (Fraction(0),) * n
                for k, i in enumerate(support):
                    out = nm.add(out, nm.scale(c[k], w[i]))
                return out

            u, v = combo(part_i), combo(part_j)
            r = checks.check_parallelotope(p, u, v)
            if r.verdict == "equality" and r.details["equality_predicted"]:
                fired += 1
            else:
                missed += 1
            # full support on both sides: never split
            u2, v2 = combo(range(n)), combo(range(n))
            r2 = checks.check_parallelotope(p, u2, v2)
            if r2.details["equality_predicted"] or r2.verdict == "equality":
                false_alarm += 1
        cr.note(f"10^4 random violated 0; split instances {fired}/1000 fired; non-split false alarms {false_alarm}")
        assert missed == 0 and false_alarm == 0


def test_criterion_6_marcus():
    with Criterion(6, "flat disk Steiner polynomial has complex roots") as cr:
        r = checks.check_marcus(flat_disk=3)
        target = math.pi**2 - 32 / 3
        assert abs(float(r.margin) - target) <= 1e-10 and r.verdict == "violated"
        assert flat_disk_steiner(3).coeffs[1] > 0
        ms = range(32, 258, 2)
        discs = {m: search.flat_discriminant(search.polygon_zonotope(m)) for m in ms}
        assert all(d < 0 for d in discs.values())
        pert = [
            search.flat_discriminant(search.perturb(search.polygon_zonotope(m), 1e-3, seed=seed))
            for m in (32, 48, 64, 128, 256)
            for seed in range(5)
        ]
        assert all(d < 0 for d in pert)
        cr.note(
            f"disk {float(r.margin):.13f} vs {target:.13f}; m-gons 32..256 max {max(discs.values()):.4f}; "
            f"perturbed max {max(pert):.4f}"
        )


def test_criterion_7_l2_suite():
    with Criterion(7, "L2-zonoid (ellipsoid) suite") as cr:
        viol = 0
        for n in (2, 3, 4, 5):
            s, _ = campaign("l2.strong", dim=n, gens=(n, n + 3), trials=2500, seed=70 + n, distribution="gaussian")
            viol += s["violated"]
        assert viol == 0
        cr.note("l2.strong 10^4 violated 0")

        rng = np.random.default_rng(71)
        agree = 0
        for i in range(1000):
            n = int(rng.integers(2, 6))
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            a, b = np.exp(rng.uniform(-1, 1, n)), np.exp(rng.uniform(-1, 1, n))
            ea = EllipsoidL2(n, tuple(tuple(q[:, j] * a[j]) for j in range(n)))
            eb = EllipsoidL2(n, tuple(tuple(q[:, j] * b[j]) for j in range(n)))
            if i % 2 == 0:
                u = q[:, int(rng.integers(n))]
            else:
                u = rng.standard_normal(n)
                u /= np.linalg.norm(u)
            r = strong_check(ea, eb, tuple(u))
            is_eq = abs(r.margin) <= 1e-8 * abs(r.rhs)
            agree += is_eq == r.details["equality_case"]
        assert agree == 1000
        cr.note("eigen-direction criterion 1000/1000")

        s, recs = campaign("l2.det", dim=3, trials=1000, seed=72)
        assert all(r["mode"] == "exact" for r in recs) and s["violated"] == 0
        cr.note(f"l2.det exact violated 0 ({s['inconclusive']} degenerate)")

        viol = 0
        for n in range(1, 6):
            s, _ = campaign("l2.proj", dim=n, gens=(n, n + 3), trials=200, seed=73 + n, distribution="gaussian")
            viol += s["violated"]
        assert viol == 0
        cr.note("l2.proj k<=n<=5 violated 0")


def test_criterion_8_lp_counterexamples():
    with Criterion(8, "L_p counterexamples") as cr:
        r = search.repro("lp.det.p3").result
        assert r.margin == Fraction(-2, 3) and r.mode is nm.Mode.EXACT
        for n in range(2, 9):
            assert lp_cases.gamma_ball_check(n, 2 - 1e-6).verdict == "holds"
            assert lp_cases.gamma_ball_check(n, 2 + 1e-6).verdict == "violated"
            assert abs(lp_cases.gamma_threshold(n) - 2) <= 1e-6
        for p in (3, 4, 8):
            a0 = 2 - 2 ** (1 / p)
            below, above = a0 - 1e-9, a0 + 1e-9
            assert lp_cases.lp_polygon_counterexample(below, p).verdict == "violated"
            assert lp_cases.lp_polygon_counterexample(above, p).verdict == "holds"
            # the same flip with exact rational a
            assert lp_cases.lp_polygon_counterexample(Fraction(below), p).verdict == "violated"
            assert lp_cases.lp_polygon_counterexample(Fraction(above), p).verdict == "holds"
        cr.note("margin -2/3; gamma flips at 2 +- 1e-6 for n=2..8; polygon flips for p=3,4,8")


def test_criterion_9_submodularity():
    with Criterion(9, "compression sums and submodularity checkers") as cr:
        s, recs = campaign("submod.compression", trials=1000, seed=9)
        assert s["violated"] == 0 and s["inconclusive"] == 0
        rng = np.random.default_rng(99)
        disagree = 0
        counts = [0, 0]
        for _ in range(10_000):
            f = sm.random_table(rng, int(rng.integers(1, 6)))
            loc = sm.is_submodular_local(f).submodular
            glob = sm.is_submodular_global(f).submodular
            disagree += loc != glob
            counts[glob] += 1
        assert disagree == 0
        cr.note(f"compression violated 0; local/global agree on 10^4 ({counts[1]} submodular, {counts[0]} not)")


def test_criterion_10_determinism():
    with Criterion(10, "byte-identical reruns and witness replay") as cr:
        planar = {"courtade.2d", "bonnesen.2d", "fenchel.bon", "logsubmod.2d"}
        total = 0
        for cid in sorted(checks.REGISTRY):
            dim = 2 if cid in planar else 3
            for dist in ("integer-lattice", "gaussian"):
                c = search.Campaign(cid, dim=dim, trials=15, seed=10, distribution=dist)
                first = search.campaign_jsonl(c)
                assert first == search.campaign_jsonl(c), cid
                assert first == search.campaign_jsonl(c, workers=2, chunk=4), cid
                for line in first.splitlines()[:-1]:
                    assert search.replay_matches(json.loads(line)), (cid, line[:200])
                    total += 1
        cr.note(f"{len(checks.REGISTRY)} checks x 2 distributions identical; {total} witnesses replayed")
