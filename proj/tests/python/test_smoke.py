import math
import pathlib

import pytest

import ohr

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def test_symmetric_ratios_agree():
    ds = [0.3, -0.1, 0.8, -0.6, 0.2, 0.0, -0.4, 0.5]
    df = [0.4, -0.2, 0.9, -0.5, 0.1, 0.1, -0.6, 0.7]
    m = ohr.moment_hedge_ratio(ds, df)
    o = ohr.ols_hedge_ratio(ds, df)
    assert math.isclose(m["h"], o["h"], rel_tol=1e-10)
    assert o["se_h"] > 0


def test_split_and_asymmetric_moments():
    c = ohr.split_components([1.0, -2.0, 0.5], [2.0, -1.0, -0.5])
    assert c["ds_pos"] == [1.0, 0.0, 0.5]
    assert c["df_neg"] == [0.0, -1.0, -0.5]
    sim = ohr.simulate(0.4, 0.7, length=300, seed=3)
    pos, neg = ohr.asymmetric_moment_ratios(sim["ds_pos"], sim["ds_neg"], sim["df_pos"], sim["df_neg"])
    assert pos["kind"] != neg["kind"]
    assert 0.0 < pos["h"] < neg["h"]


def test_wald_examples():
    w = ohr.wald_symmetry_test(0.5, 0.5, 0.01, 0.01, 0.0)
    assert w["statistic"] == 0.0 and w["p_value"] == 1.0
    w = ohr.wald_symmetry_test(0.4, 0.7, 0.01, 0.01, 0.0)
    assert math.isclose(w["statistic"], 4.5, rel_tol=1e-12)


def test_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        ohr.ols_hedge_ratio([1.0, 2.0, 3.0], [1.0, 1.0, 1.0])
    with pytest.raises(ohr.OhrError):
        ohr.estimate(DATA / "prices.csv", distribution="cauchy")


def test_pipeline_on_price_fixture():
    r = ohr.estimate(DATA / "prices.csv", force_path="sure")
    assert r["estimation_path"] == "sure"
    assert 0.0 <= r["wald"]["p_value"] <= 1.0
    assert r["generated_at"] == "1970-01-01T00:00:00Z"
    again = ohr.estimate(DATA / "prices.csv", force_path="sure")
    assert again == r


def test_pipeline_on_components():
    sim = ohr.simulate(0.4, 0.7, length=400, seed=11)
    r = ohr.estimate_components(sim["ds_pos"], sim["ds_neg"], sim["df_pos"], sim["df_neg"], force_path="sure")
    names = {e["name"]: e["value"] for e in r["estimates"]}
    assert abs(names["h_pos"] - 0.4) < 0.1
    assert abs(names["h_neg"] - 0.7) < 0.1
