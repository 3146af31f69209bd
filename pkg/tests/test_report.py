import io
import json
import math

import numpy as np
import pytest

from dcadequacy.demand import DemandModelConfig
from dcadequacy.grid_model import GridScenario, YearResources
from dcadequacy.qos import FLEX, PARTIAL_80, RELIABLE, QosScheme
from dcadequacy.report import (DAILY_COLUMNS, LIMITS_COLUMNS, LimitRow, RunManifest, fmt_mw,
                               fmt_pct, read_daily_csv, read_limits_csv, run_limits,
                               run_outage_report, write_bundles, write_table)
from dcadequacy.scenario import load_scenario
from dcadequacy.timeseries import BaseYearTraces, TimeSeries

SCHEMES = [RELIABLE, PARTIAL_80, FLEX]


def flat_scenario(dc_base=100.0, cagr=0.3, firm=(1000,) * 4):
    rng = np.random.default_rng(0)
    ts = lambda v: TimeSeries(2022, 1440, v)  # noqa: E731
    base = BaseYearTraces(ts(rng.uniform(400, 700, 365) + dc_base), dc_base,
                          ts(rng.uniform(0, 200, 365)), ts(np.zeros(365)), 200.0, 0.0)
    years = range(2022, 2022 + len(firm))
    plans = {y: YearResources(y, conventional_mw=f, wind_mw=200) for y, f in zip(years, firm)}
    return GridScenario("flat", 8.0, 1440, base, plans, dc_base, {y: 1.0 for y in years},
                        demand=DemandModelConfig(dc_base, 2022, cagr, ai_cagr_increment_global=0.0))


@pytest.mark.parametrize("x, s", [(1.005, "1.00"), (-0.001, "0.00"), (1234.5678, "1234.57"),
                                  (math.inf, "inf"), (math.nan, "nan")])
def test_fmt_mw(x, s):
    assert fmt_mw(x) == s


def test_fmt_pct():
    assert fmt_pct(34.5 / 8760) == "0.4"
    assert fmt_pct(1 - 34.5 / 8760) == "99.6"
    assert fmt_pct(1010 / 8760) == "11.5"
    assert fmt_pct(-1e-9) == "0.0"


def test_flat_scenario_identical_limits():
    b = run_limits(flat_scenario(), SCHEMES)
    for q in ("reliable", "partial:0.8", "flex:cap=0.01"):
        rows = [r for r in b.rows if r.qos == q]
        assert len({r.annual_limit_mw for r in rows}) == 1
        assert all(r.committed_limit_mw == r.annual_limit_mw for r in rows)


def test_bundle_invariants_and_first_shortage():
    b = run_limits(flat_scenario(firm=(1000, 950, 900, 1000)), SCHEMES)
    years = [r.year for r in b.rows if r.qos == "reliable"]
    assert years == [2023, 2024, 2025]
    for r in b.rows:
        assert r.committed_limit_mw <= r.annual_limit_mw
        assert r.surplus_mw == pytest.approx(r.committed_limit_mw + 100 - b.demand[r.year])
    by = {(r.year, r.qos): r.annual_limit_mw for r in b.rows}
    for y in years:
        assert by[(y, "partial:0.8")] >= by[(y, "reliable")]
    rel = [r for r in b.rows if r.qos == "reliable"]
    short = [r.year for r in rel if r.surplus_mw < 0]
    assert b.first_shortage_year("reliable") == (short[0] if short else None)
    assert b.summary()["first_shortage_year"]["reliable"] == b.first_shortage_year("reliable")


def test_first_shortage_constructed():
    # demand grows 150%/yr from 100 MW against fixed limits
    b = run_limits(flat_scenario(cagr=1.5), [RELIABLE])
    limit = b.rows[0].committed_limit_mw + 100
    expected = next(y for y in (2023, 2024, 2025) if 100 * 2.5 ** (y - 2022) > limit)
    assert b.first_shortage_year("reliable") == expected


def test_outage_report():
    s = flat_scenario()
    rel = run_outage_report(s, 2024, 500.0, RELIABLE)
    assert not rel.daily_fractions.any() and rel.outage_hours == 0
    flex = run_outage_report(s, 2024, 500.0, QosScheme(0.0))
    assert len(flex.records()) == 365
    summary = flex.summary()
    assert summary["availability_time_pct"] == float(fmt_pct(1 - flex.outage_hours / 8760))
    with pytest.raises(KeyError):
        run_outage_report(s, 2031, 1.0, FLEX)


def test_year_selection():
    s = flat_scenario()
    b = run_limits(s, [RELIABLE], years=[2023, 2024])
    assert not b.failures
    with pytest.raises(KeyError):
        run_limits(s, [RELIABLE], years=[2030])


def test_limits_csv_round_trip():
    b = run_limits(load_scenario("caiso").scenario, SCHEMES, years=[2024, 2025])
    buf = io.StringIO()
    write_table([r.as_record() for r in b.rows], LIMITS_COLUMNS, buf)
    back = read_limits_csv(io.StringIO(buf.getvalue()))
    assert [r.as_record() for r in back] == [r.as_record() for r in b.rows]
    with pytest.raises(ValueError):
        read_limits_csv(io.StringIO("a,b\n1,2\n"))


def test_daily_csv_round_trip():
    o = run_outage_report(flat_scenario(), 2024, 600.0, FLEX)
    buf = io.StringIO()
    write_table(o.records(), DAILY_COLUMNS, buf)
    rows = read_daily_csv(io.StringIO(buf.getvalue()))
    assert len(rows) == 365
    assert [r[4] for r in rows] == pytest.approx(o.daily_fractions.tolist(), abs=5e-7)


def test_json_tables_and_bundle_files(tmp_path):
    b = run_limits(flat_scenario(), SCHEMES)
    manifest = RunManifest(("flat",), "report", (), "abc")
    paths = write_bundles([b], manifest, tmp_path, "json")
    assert sorted(p.name for p in paths) == ["daily_outage.json", "limits.json", "manifest.json", "summary.json"]
    records = json.loads((tmp_path / "limits.json").read_text())
    assert list(records[0]) == list(LIMITS_COLUMNS)
    with pytest.raises(ValueError):
        write_table([], LIMITS_COLUMNS, io.StringIO(), "xml")


def test_row_formatting():
    row = LimitRow("g", 2025, "reliable", 10.0, 5.0, 7.256, -2.0, "")
    assert row.as_record()["demand_mw"] == "7.26"
