"""Randomized small adequacy instances shared by the oracle and monotonicity tests.

Each instance covers a full calendar year at a coarse interval so that it has
at most 1000 intervals, which keeps a 1 MW exhaustive scan affordable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dcadequacy.adequacy import AdequacyInputs
from dcadequacy.synthetic import SyntheticTraceConfig, generate
from dcadequacy.timeseries import scale_nondc_load

COARSE_INTERVALS = (720, 1440)


@dataclass(frozen=True)
class Instance:
    seed: int
    inputs: AdequacyInputs
    existing_dc_mw: float


def make_instance(seed: int) -> Instance:
    rng = np.random.default_rng(10_000 + seed)
    step = int(rng.choice(COARSE_INTERVALS))
    mean_load = float(rng.uniform(200, 1500))
    cfg = SyntheticTraceConfig(
        year=int(rng.choice([2022, 2024])),
        interval_minutes=step,
        seed=seed,
        mean_load_mw=mean_load,
        seasonal_amplitude=float(rng.uniform(0.05, 0.3)),
        seasonal_peak_day=float(rng.choice([15, 200])),
        diurnal_amplitude=float(rng.uniform(0.0, 0.2)),
        load_noise=float(rng.uniform(0.01, 0.05)),
        wind_cap_mw=float(rng.uniform(0, 1.5) * mean_load),
        wind_mean_cf=float(rng.uniform(0.2, 0.45)),
        solar_cap_mw=float(rng.uniform(0, 0.8) * mean_load),
        latitude_deg=float(rng.uniform(25, 55)),
    )
    traces = generate(cfg)
    nondc = scale_nondc_load(traces, 1.0)
    existing = float(rng.uniform(0, 0.1) * mean_load)
    # firm capacity just covers the worst net-load interval plus a random margin;
    # the slightly negative end of the range leaves a few instances infeasible at zero
    net_peak = float((nondc.values - traces.wind_gen.values - traces.solar_gen.values).max())
    firm = max(net_peak + existing + float(rng.uniform(-0.02, 0.4)) * mean_load, 0.0)
    inputs = AdequacyInputs(
        nondc_load=nondc,
        wind=traces.wind_gen,
        solar=traces.solar_gen,
        firm_mw=firm,
        interval_minutes=step,
        lole_standard_hours=float(rng.choice([8.0, 24.0, 48.0])),
    )
    return Instance(seed, inputs, existing)


N_INSTANCES = 60


def inputs_from(nondc, renew=0.0, firm=0.0, *, step=1440, year=2022, standard=8.0, solar=0.0):
    """Inputs from per-interval arrays (scalars broadcast to a full year)."""
    from dcadequacy.timeseries import TimeSeries, minutes_in_year

    n = minutes_in_year(year) // step

    def series(v):
        return TimeSeries(year, step, np.broadcast_to(np.asarray(v, float), (n,)).copy())

    return AdequacyInputs(series(nondc), series(renew), series(solar), float(firm), step, standard)
