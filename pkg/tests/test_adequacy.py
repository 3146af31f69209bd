import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcadequacy.adequacy import (AdequacyInputs, assess, bisect_max, committed_limits, dc_limit,
                                 lole_hours, shortage_indicator, supply_headroom_bound)
from dcadequacy.timeseries import TimeSeries
from instances import inputs_from
from oracles import scan_dc_limit, scan_lole

seeds = st.integers(0, 2**32 - 1)


def random_inputs(seed, standard=None):
    rng = np.random.default_rng(seed)
    step = int(rng.choice([720, 1440]))
    n = 525600 // step
    nondc = rng.uniform(100, 900, n)
    renew = rng.uniform(0, 400, n) * (rng.random(n) < 0.7)
    firm = float(rng.uniform(300, 1000))
    std = float(rng.choice([8.0, 24.0, 100.0])) if standard is None else standard
    return inputs_from(nondc, renew, firm, step=step, standard=std)


@pytest.mark.parametrize("args, expected", [((1000, 300, 700), False), ((1000.01, 300, 700), True),
                                            ((0, 0, 0), False)])
def test_shortage_indicator(args, expected):
    assert shortage_indicator(*args) is expected


def test_assess_quarter_hour_examples():
    inputs = inputs_from(10.0, 0.0, 10.0, step=15)
    assert assess(inputs, 0).lole_hours == 0
    # only the first four intervals get load above supply
    load = np.full(35040, 9.0)
    load[:4] = 10.0
    inputs = inputs_from(load, 0.0, 10.0, step=15)
    assert assess(inputs, 1.0).lole_hours == 1.0 == 4 * 15 / 60


def test_assess_rejects_negative_dc():
    with pytest.raises(ValueError):
        assess(inputs_from(1.0, 0.0, 10.0), -1)


def test_misaligned_series():
    a = TimeSeries(2022, 1440, np.ones(365))
    b = TimeSeries(2023, 1440, np.ones(365))
    with pytest.raises(ValueError, match="misaligned"):
        AdequacyInputs(a, b, a, 1.0, 1440, 8.0)
    with pytest.raises(ValueError, match="misaligned"):
        AdequacyInputs(a, a, a, 1.0, 60, 8.0)


@given(seeds, st.floats(0, 2000))
def test_result_invariants(seed, dc):
    inputs = random_inputs(seed)
    r = assess(inputs, dc)
    assert r.lole_hours == np.count_nonzero(r.shortage_flags) * inputs.interval_minutes / 60
    assert np.array_equal(r.deficit_mw > 0, r.shortage_flags)
    assert r.lole_hours == scan_lole(inputs, dc)


@given(seeds, st.floats(0, 1500), st.floats(0, 500))
def test_lole_monotone_in_dc(seed, dc, extra):
    inputs = random_inputs(seed)
    assert assess(inputs, dc).lole_hours <= assess(inputs, dc + extra).lole_hours


def test_lole_hours_helper():
    assert lole_hours(np.array([True, False, True]), 15) == 0.5


# ---- limits --------------------------------------------------------------------------

def test_flat_system_limit():
    r = dc_limit(inputs_from(400.0, 0.0, 1000.0, step=60))
    assert r.mw == pytest.approx(600, abs=1)
    assert not (r.infeasible_at_zero or r.upper_bound_binding)


def test_no_supply_is_infeasible():
    r = dc_limit(inputs_from(5.0, 0.0, 0.0))
    assert r.mw == 0 and r.infeasible_at_zero


@given(seeds)
def test_dc_limit_matches_scan(seed):
    inputs = random_inputs(seed)
    r = dc_limit(inputs)
    stop = supply_headroom_bound(inputs) + inputs.nondc_load.values.max()
    best = scan_dc_limit(inputs, stop)
    if r.infeasible_at_zero:
        assert best == -1
    else:
        assert abs(r.mw - best) <= 1.0


@given(seeds)
def test_dc_limit_tight(seed):
    inputs = random_inputs(seed)
    r = dc_limit(inputs)
    if r.infeasible_at_zero or r.upper_bound_binding:
        return
    std = inputs.lole_standard_hours
    assert assess(inputs, r.mw).lole_hours <= std
    assert assess(inputs, r.mw + 2).lole_hours > std


def test_bisect_max_flags():
    assert bisect_max(lambda x: x <= 10.3, 100).mw == pytest.approx(10.3, abs=1)
    assert bisect_max(lambda x: True, 50).upper_bound_binding
    assert bisect_max(lambda x: True, math.inf).mw == math.inf
    assert bisect_max(lambda x: False, 50).infeasible_at_zero


def test_float_of_limit():
    assert float(bisect_max(lambda x: x <= 3, 8)) <= 3


# ---- committed limits ---------------------------------------------------------------

@pytest.mark.parametrize("annual, expected", [
    ([5, 3, 4], [3, 3, 4]),
    ([1, 2, 3], [1, 2, 3]),
    ([7, 7, 7], [7, 7, 7]),
])
def test_committed_examples(annual, expected):
    out = committed_limits(dict(zip(range(1, 4), annual)))
    assert [out[y] for y in (1, 2, 3)] == expected


@given(st.lists(st.floats(0, 1e5), min_size=1, max_size=12), st.integers(1990, 2040))
def test_committed_is_suffix_minimum(values, start):
    annual = {start + i: v for i, v in enumerate(values)}
    out = committed_limits(annual)
    last = start + len(values) - 1
    assert out[last] == annual[last]
    for y in range(start, last):
        assert out[y] == min(annual[y], out[y + 1])
        assert out[y] <= annual[y]


def test_committed_errors():
    with pytest.raises(ValueError):
        committed_limits({})
    with pytest.raises(ValueError):
        committed_limits({2023: 1.0, 2025: 2.0})


def test_committed_nan_poisons_earlier_years():
    out = committed_limits({1: 5.0, 2: math.nan, 3: 4.0})
    assert math.isnan(out[1]) and math.isnan(out[2]) and out[3] == 4.0
