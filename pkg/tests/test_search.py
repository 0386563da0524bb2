import io
import json
import math

import pytest

from zonocalc import checks, search
from zonocalc.numerics import Mode


def test_campaign_defaults_and_validation():
    c = search.Campaign("hope.r3")
    assert c.mode is Mode.EXACT
    assert search.Campaign("hope.r3", distribution="gaussian").mode is Mode.FLOAT
    with pytest.raises(KeyError):
        search.Campaign("no.such.check")
    with pytest.raises(ValueError):
        search.Campaign("hope.r3", distribution="cauchy")


def test_config_hash_changes_with_seed():
    assert search.Campaign("hope.r3", seed=1).config_hash() != search.Campaign("hope.r3", seed=2).config_hash()


def test_trial_streams_are_independent_of_order():
    c = search.Campaign("logsubmod.zonotope", seed=9)
    a = [search.sample_inputs(c, t) for t in range(5)]
    b = [search.sample_inputs(c, t) for t in reversed(range(5))][::-1]
    assert a == b


@pytest.mark.parametrize("check_id", sorted(checks.REGISTRY))
def test_every_check_runs_in_a_short_campaign(check_id):
    dim = 2 if check_id in ("courtade.2d", "bonnesen.2d", "fenchel.bon", "logsubmod.2d") else 3
    c = search.Campaign(check_id, dim=dim, trials=4, seed=3)
    s = search.run_campaign(c)
    assert s["trials"] == 4
    if checks.REGISTRY[check_id].proven(dim):
        assert s["violated"] == 0


def test_jsonl_layout_and_replay():
    c = search.Campaign("fenchel2.zonotope", trials=6, seed=5)
    buf = io.StringIO()
    search.run_campaign(c, buf)
    lines = buf.getvalue().splitlines()
    assert len(lines) == 7
    recs = [json.loads(x) for x in lines[:-1]]
    assert [r["trial"] for r in recs] == list(range(6))
    footer = json.loads(lines[-1])["summary"]
    assert footer["config_hash"] == c.config_hash()
    assert all(search.replay_matches(r) for r in recs)


def test_parallel_run_is_byte_identical():
    c = search.Campaign("hope.matr", trials=20, seed=8)
    assert search.campaign_jsonl(c) == search.campaign_jsonl(c, workers=2, chunk=3)


def test_float_campaign_replays_bit_for_bit():
    c = search.Campaign("l2.strong", trials=5, seed=2, distribution="gaussian")
    recs = [json.loads(x) for x in search.campaign_jsonl(c).splitlines()[:-1]]
    assert all(search.replay_matches(r) for r in recs)


def test_timestamps_are_opt_in():
    c = search.Campaign("hope.matr", trials=2)
    assert "timestamp" not in search.campaign_jsonl(c)
    assert "timestamp" in search.campaign_jsonl(c, timestamps=True)


def test_polygon_zonotope_approaches_disk():
    z = search.polygon_zonotope(64)
    assert len(z) == 32
    assert search.flat_discriminant(z) < 0
    with pytest.raises(ValueError):
        search.polygon_zonotope(7)


def test_perturb_is_deterministic_and_small():
    z = search.polygon_zonotope(32)
    a, b = search.perturb(z, 1e-3, seed=1), search.perturb(z, 1e-3, seed=1)
    assert a == b
    diff = max(abs(x - y) for g, h in zip(z.generators, a.generators) for x, y in zip(g, h))
    assert 0 < diff <= 1e-3
    assert search.perturb(z, 0) is z


@pytest.mark.parametrize("case_id", sorted(search.REPRO_CASES))
def test_repro_cases(case_id):
    assert search.repro(case_id).reproduced


def test_marcus_repro_values():
    r = search.repro("marcus.flat-disk")
    assert r.result.margin == pytest.approx(math.pi**2 - 32 / 3, abs=1e-10)


def test_replay_uses_witness_mode_not_result_mode():
    # exact lattice inputs, float result: replay must re-parse the inputs exactly
    c = search.Campaign("steiner.marcus", trials=3, seed=10)
    recs = [json.loads(x) for x in search.campaign_jsonl(c).splitlines()[:-1]]
    assert all(r["mode"] == "float" for r in recs)
    assert all(search.replay_matches(r) for r in recs)
