import io
from fractions import Fraction

import pytest

import oracle
from divisorsums.means import (
    CONSTANTS,
    ZETA2,
    mean_checkpoints,
    mean_ratio_S_s,
    mean_S_s,
    mean_S_sigma,
    mean_sigma,
    parse_checkpoints,
    write_csv,
)
from divisorsums.moments import empirical_moment


def test_small_partial_sums():
    assert mean_sigma(10).partial_sum == 87
    assert mean_S_sigma(6).partial_sum == 48
    assert mean_S_s(6).partial_sum == 15
    assert mean_ratio_S_s(3).partial_sum == Fraction(5, 6)
    assert mean_ratio_S_s(1).partial_sum == 0
    assert mean_ratio_S_s(2).partial_sum == Fraction(1, 2)


def test_partial_sums_match_oracle():
    x = 777
    rows = {r.statistic: r for r in mean_checkpoints([x])}
    assert rows["sigma"].partial_sum == sum(oracle.sigma(n) for n in range(1, x + 1))
    assert rows["S_sigma"].partial_sum == sum(oracle.big_s_sigma(n) for n in range(1, x + 1))
    assert rows["S_s"].partial_sum == sum(oracle.big_s_s(n) for n in range(1, x + 1))
    assert rows["S_s_ratio"].partial_sum == sum(Fraction(oracle.big_s_s(n), n) for n in range(1, x + 1))


def test_linearity():
    # S_s = S_sigma - sigma holds for the partial sums too
    for r in [mean_checkpoints([x]) for x in (1, 50, 12345)]:
        d = {c.statistic: c.partial_sum for c in r}
        assert d["S_s"] == d["S_sigma"] - d["sigma"]


def test_constants():
    assert CONSTANTS.c_mean_sigma == pytest.approx(0.8224670334241132)
    assert CONSTANTS.c_mean_S_sigma == pytest.approx(1.352904, abs=1e-6)
    assert CONSTANTS.c_mean_Ss == pytest.approx(0.530437, abs=1e-6)
    assert CONSTANTS.c_mean_ratio == pytest.approx(1.060874, abs=1e-6)
    assert CONSTANTS.c_mean_S_sigma - CONSTANTS.c_mean_sigma == pytest.approx(CONSTANTS.c_mean_Ss)
    assert ZETA2 == pytest.approx(1.6449340668482264)


def test_compensated_agrees_with_exact():
    exact = mean_ratio_S_s(20000)
    approx = mean_ratio_S_s(20000, exact_ratio_limit=10)
    assert exact.mode == "exact" and approx.mode == "compensated"
    assert approx.partial_sum == pytest.approx(float(exact.partial_sum), rel=1e-14)


def test_ratio_mean_equals_first_moment():
    assert mean_ratio_S_s(5000).mean == pytest.approx(empirical_moment(1, 5000), rel=1e-13)


def test_means_approach_limits():
    rows = mean_checkpoints([10**3, 10**5], ("S_s", "S_s_ratio"))
    by = {(r.statistic, r.x): r for r in rows}
    assert by[("S_s", 10**5)].mean / 10**5 == pytest.approx(CONSTANTS.c_mean_Ss, rel=1e-3)
    assert by[("S_s_ratio", 10**5)].mean == pytest.approx(CONSTANTS.c_mean_ratio, rel=1e-3)


def test_parse_checkpoints():
    assert parse_checkpoints("decades:3:5") == [1000, 10000, 100000]
    assert parse_checkpoints("1e4, 100,100") == [100, 10000]
    for bad in ("decades:5:3", "0", "", "1.5"):
        with pytest.raises(ValueError):
            parse_checkpoints(bad)


def test_csv_and_errors():
    buf = io.StringIO()
    write_csv(mean_checkpoints([3], ("S_s_ratio",)), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,statistic,partial_sum,mean,limit,normalized_error"
    assert lines[1].startswith("3,S_s_ratio,5/6,")
    with pytest.raises(ValueError):
        mean_checkpoints([10], ("nope",))
    with pytest.raises(ValueError):
        mean_sigma(0)
