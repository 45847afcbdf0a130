import json
import math
import os
import pathlib

import pytest

import credal_chain as cc

DATA = pathlib.Path(os.environ.get("CREDAL_CHAIN_DATA", pathlib.Path(__file__).resolve().parents[2] / "data"))

URN_LOWER = [0.06, 0.10, 0.15, 0.25]
URN_UPPER = [0.33, 0.42, 0.32, 0.58]


def test_goodness_of_the_urn():
    g = cc.goodness(cc.Interval(URN_LOWER, URN_UPPER))
    assert not g.good
    assert g.delta == pytest.approx(-0.23, abs=1e-12)
    assert g.slack == pytest.approx([0.17, 0.12, 0.27, 0.11], abs=1e-12)


def test_interval_errors_map_to_value_error():
    with pytest.raises(ValueError):
        cc.Interval([0.5, 0.6], [0.4, 0.7])
    assert not cc.is_coherent(cc.Interval([0.6, 0.6], [0.7, 0.7]))


def test_sgm_reproduces_its_interval():
    iv = cc.Interval([0.2, 0.2, 0.2], [0.5, 0.5, 0.5])
    masses = cc.sgm(iv)
    assert sum(masses.values()) == pytest.approx(1.0)
    for i in range(3):
        bel, pl = cc.belief(3, masses, [i])
        assert bel == pytest.approx(0.2)
        assert pl == pytest.approx(0.5)
    assert cc.natural_extension(iv, [0, 1]) == pytest.approx((0.5, 0.8))


def test_fixing_adds_minus_delta():
    iv = cc.Interval(URN_LOWER, URN_UPPER)
    fixed, added = cc.fix_uniform(iv)
    assert sum(added) == pytest.approx(0.23)
    assert cc.goodness(fixed).delta == pytest.approx(0.0, abs=1e-12)


def test_urn_methods():
    chain = cc.read_model(DATA / "urn.json")
    assert len(chain) == 2
    credal = cc.credal_bounds(chain)[0]
    assert credal["lower"][0] == pytest.approx(0.328, abs=1e-9)
    adhoc = cc.propagate(chain, "adhoc-mass")[0]
    assert adhoc["lower"][0] == pytest.approx(0.286144, abs=1e-6)
    sgm_adhoc = cc.propagate(chain, "sgm-adhoc")[0]
    assert sgm_adhoc["diagnostics"]["lower_fix"][0] == pytest.approx([0.17, 0.06, 0.0, 0.0], abs=1e-12)
    for r in (adhoc, sgm_adhoc):
        assert r["lower"][0] <= credal["lower"][0] + 1e-9


def test_prior_mass():
    chain = cc.read_model(DATA / "four_state.json")
    mass = {frozenset([0]): 0.2, frozenset([1]): 0.2, frozenset([2]): 0.2, frozenset([3]): 0.2,
            frozenset([0, 1]): 0.1, frozenset([2, 3]): 0.1}
    r = cc.propagate(chain, "sgm-uniform", prior_mass=mass)[0]
    assert r["lower"][0] == pytest.approx(0.54, abs=1e-12)
    assert math.isnan(r["diagnostics"]["parent_delta"])
    with pytest.raises(ValueError):
        cc.propagate(chain, "bogus")


def test_model_round_trip():
    chain = cc.sample_chain(3, 4, eps=0.2, seed=5)
    again = cc.parse_model(chain.to_json())
    assert again.to_json() == chain.to_json()
    with pytest.raises(cc.ParseError):
        cc.parse_model("{")


def test_sampler():
    a = cc.sample_intervals(4, 20, eps=0.1, seed=3, burn_in=50, thinning=5)
    b = cc.sample_intervals(4, 20, eps=0.1, seed=3, burn_in=50, thinning=5)
    assert [x.lower for x in a] == [x.lower for x in b]
    for iv in a:
        assert cc.is_coherent(iv)
        assert max(u - l for l, u in zip(iv.lower, iv.upper)) <= 0.1 + 1e-12


def test_experiment():
    out = cc.run_experiment(3, 3, 20, ["credal", "sgm-adhoc"], seed=2, eps=0.3, threads=2)
    assert out["csv"].splitlines()[0] == "step,method,mean_width,band_low,band_high,samples"
    assert len(out["csv"].splitlines()) == 1 + 3 * 2
    methods = {m["method"]: m for m in out["summary"]["methods"]}
    assert methods["credal"]["riw"] == 0.0
    assert methods["sgm-adhoc"]["riw"] >= 0.0
    assert json.dumps(out["summary"])
