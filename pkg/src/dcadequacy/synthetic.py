"""Seeded synthetic base-year traces.

Real grid traces are not redistributable, so scenarios can describe their
base year with a handful of shape parameters instead.  Load is a seasonal and
diurnal profile with AR(1) noise; wind is a logistic transform of an AR(1)
latent process with a seasonal bias; solar follows a clear-sky elevation curve
scaled by a daily cloudiness factor.  Output depends only on the config.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .timeseries import BaseYearTraces, TimeSeries, minutes_in_year


@dataclass(frozen=True)
class SyntheticTraceConfig:
    year: int = 2022
    interval_minutes: int = 60
    seed: int = 0
    # non-DC load
    mean_load_mw: float = 1000.0
    seasonal_amplitude: float = 0.10      # fraction of mean
    seasonal_peak_day: float = 15.0       # day of year of the seasonal maximum
    semiannual_amplitude: float = 0.0     # second (summer + winter) peak
    diurnal_amplitude: float = 0.12
    diurnal_peak_hour: float = 18.0
    weekend_factor: float = 0.95
    load_noise: float = 0.02
    # datacenter block inside the total-load trace
    dc_load_mw: float = 0.0
    # wind
    wind_cap_mw: float = 0.0
    wind_mean_cf: float = 0.33
    wind_volatility: float = 1.6
    wind_seasonal_bias: float = 0.3       # latent shift at the wind-season peak
    wind_peak_day: float = 15.0
    wind_hourly_autocorr: float = 0.97
    # solar
    solar_cap_mw: float = 0.0
    solar_peak_cf: float = 0.75
    latitude_deg: float = 40.0

    @classmethod
    def from_dict(cls, d: dict) -> "SyntheticTraceConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown synthetic trace keys: {sorted(unknown)}")
        return cls(**d)

    def as_dict(self) -> dict:
        return asdict(self)


def _ar1(rng: np.random.Generator, n: int, phi: float) -> np.ndarray:
    """Unit-variance stationary AR(1)."""
    eps = rng.standard_normal(n) * np.sqrt(1 - phi * phi)
    out = np.empty(n)
    x = rng.standard_normal()
    for i in range(n):
        x = phi * x + eps[i]
        out[i] = x
    return out


def _logistic(x):
    return 1.0 / (1.0 + np.exp(-x))


def _match_mean(latent: np.ndarray, target: float) -> np.ndarray:
    """Shift ``latent`` so its logistic transform has the requested mean."""
    lo, hi = -20.0, 20.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _logistic(latent + mid).mean() < target:
            lo = mid
        else:
            hi = mid
    return _logistic(latent + 0.5 * (lo + hi))


def generate(cfg: SyntheticTraceConfig) -> BaseYearTraces:
    step = cfg.interval_minutes
    n = minutes_in_year(cfg.year) // step
    rng = np.random.default_rng(cfg.seed)
    t_min = np.arange(n) * step
    day = t_min / 1440.0
    hour = (t_min % 1440) / 60.0
    days_in_year = minutes_in_year(cfg.year) / 1440
    phi = lambda hourly: hourly ** (step / 60)  # noqa: E731

    season = np.cos(2 * np.pi * (day - cfg.seasonal_peak_day) / days_in_year)
    semi = np.cos(4 * np.pi * (day - cfg.seasonal_peak_day) / days_in_year)
    daily = np.cos(2 * np.pi * (hour - cfg.diurnal_peak_hour) / 24)
    # every 6th and 7th day counted from Jan 1 is a weekend; the true weekday does not matter
    weekend = np.where((np.floor(day) % 7) >= 5, cfg.weekend_factor, 1.0)
    noise = _ar1(rng, n, phi(0.9)) * cfg.load_noise
    nondc = cfg.mean_load_mw * (1 + cfg.seasonal_amplitude * season
                                + cfg.semiannual_amplitude * semi
                                + cfg.diurnal_amplitude * daily + noise) * weekend
    nondc = np.maximum(nondc, 0.0)

    wind_season = np.cos(2 * np.pi * (day - cfg.wind_peak_day) / days_in_year)
    latent = cfg.wind_volatility * _ar1(rng, n, phi(cfg.wind_hourly_autocorr)) \
        + cfg.wind_seasonal_bias * wind_season
    wind_cf = _match_mean(latent, cfg.wind_mean_cf) if cfg.wind_cap_mw > 0 else np.zeros(n)

    lat = np.radians(cfg.latitude_deg)
    decl = np.radians(23.44) * np.sin(2 * np.pi * (284 + day) / days_in_year)
    # use the interval midpoint for the sun position
    hour_angle = np.radians(15.0 * (hour + step / 120.0 - 12.0))
    sin_elev = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(hour_angle)
    n_days = int(np.ceil(days_in_year))
    clouds = 0.65 + 0.35 * _logistic(2.0 * _ar1(rng, n_days, 0.6))
    solar_cf = cfg.solar_peak_cf * np.clip(sin_elev, 0.0, None) * clouds[np.floor(day).astype(int)]

    ts = lambda v: TimeSeries(cfg.year, step, v)  # noqa: E731
    return BaseYearTraces(
        total_load=ts(nondc + cfg.dc_load_mw),
        dc_load_base=cfg.dc_load_mw,
        wind_gen=ts(wind_cf * cfg.wind_cap_mw),
        solar_gen=ts(solar_cf * cfg.solar_cap_mw),
        wind_cap_base=cfg.wind_cap_mw,
        solar_cap_base=cfg.solar_cap_mw,
    )
