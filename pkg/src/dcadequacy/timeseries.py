"""Annual load and renewable-generation traces.

A trace covers one full calendar year at a fixed interval length.  Future
grid years are modelled by rescaling the base-year traces: renewables by the
ratio of planned to base nameplate capacity, non-datacenter load by a growth
factor after subtracting the (flat) base datacenter block.
"""
from __future__ import annotations

import calendar
import csv
import io
import warnings
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from typing import BinaryIO, Optional, Union

import numpy as np

TRACE_HEADER = ("timestamp", "total_load_mw", "wind_mw", "solar_mw")


class TraceError(ValueError):
    """Raised for a trace file or series that violates the trace schema."""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        super().__init__(message if row is None else f"{message} at row {row}")


class NonDCClampWarning(UserWarning):
    """Base datacenter load exceeded total load in some intervals."""

    def __init__(self, count: int):
        self.count = count
        super().__init__(f"non-DC load clamped to 0 in {count} interval(s)")


def minutes_in_year(year: int) -> int:
    return (366 if calendar.isleap(year) else 365) * 1440


def valid_interval(interval_minutes: int) -> bool:
    if interval_minutes <= 0:
        return False
    return 60 % interval_minutes == 0 or interval_minutes % 60 == 0


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Per-interval megawatt readings covering one calendar year.

    ``values`` is stored as a read-only float64 array.
    """

    year: int
    interval_minutes: int
    values: np.ndarray

    def __post_init__(self):
        if not valid_interval(self.interval_minutes):
            raise TraceError(
                f"interval of {self.interval_minutes} min must divide 60 or be a multiple of 60"
            )
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise TraceError("values must be one-dimensional")
        expected = minutes_in_year(self.year) // self.interval_minutes
        if minutes_in_year(self.year) % self.interval_minutes or len(values) != expected:
            raise TraceError(
                f"wrong row count for {self.year}: got {len(values)}, expected "
                f"{minutes_in_year(self.year) / self.interval_minutes:g}"
            )
        if not np.all(np.isfinite(values)):
            raise TraceError("non-finite MW value")
        if np.any(values < 0):
            raise TraceError("negative MW value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def hours(self) -> float:
        return len(self.values) * self.interval_minutes / 60

    @property
    def intervals_per_day(self) -> int:
        if 1440 % self.interval_minutes:
            raise ValueError(f"{self.interval_minutes}-min intervals do not tile a day")
        return 1440 // self.interval_minutes

    def timestamps(self) -> np.ndarray:
        start = np.datetime64(f"{self.year}-01-01T00:00", "m")
        return start + np.arange(len(self.values)) * np.timedelta64(self.interval_minutes, "m")

    def with_values(self, values) -> "TimeSeries":
        return TimeSeries(self.year, self.interval_minutes, values)

    def aligned_with(self, other: "TimeSeries") -> bool:
        return (
            self.year == other.year
            and self.interval_minutes == other.interval_minutes
            and len(self) == len(other)
        )


@dataclass(frozen=True, eq=False)
class BaseYearTraces:
    """The base-year traces plus the capacities they were recorded against.

    ``dc_load_base`` is a flat MW block assumed to be inside ``total_load``.
    """

    total_load: TimeSeries
    dc_load_base: float
    wind_gen: TimeSeries
    solar_gen: TimeSeries
    wind_cap_base: float
    solar_cap_base: float

    def __post_init__(self):
        for s in (self.wind_gen, self.solar_gen):
            if not self.total_load.aligned_with(s):
                raise TraceError("load, wind and solar series are not aligned")
        if self.dc_load_base < 0:
            raise TraceError("dc_load_base must be >= 0")
        if self.wind_cap_base < 0 or self.solar_cap_base < 0:
            raise TraceError("base capacities must be >= 0")
        if self.wind_cap_base == 0 and np.any(self.wind_gen.values > 0):
            raise TraceError("wind_cap_base must be > 0 when wind generation is present")
        if self.solar_cap_base == 0 and np.any(self.solar_gen.values > 0):
            raise TraceError("solar_cap_base must be > 0 when solar generation is present")

    @property
    def year(self) -> int:
        return self.total_load.year

    @property
    def interval_minutes(self) -> int:
        return self.total_load.interval_minutes


def _parse_timestamp(text: str) -> datetime:
    text = text.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    ts = datetime.fromisoformat(text)
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    if ts.utcoffset() != timedelta(0):
        raise ValueError("timestamp is not UTC")
    return ts


def parse_trace(
    source: Union[BinaryIO, bytes],
    *,
    dc_load_base: float = 0.0,
    wind_cap_base: Optional[float] = None,
    solar_cap_base: Optional[float] = None,
) -> BaseYearTraces:
    """Parse a trace CSV byte stream into validated base-year traces.

    Row numbers in error messages are file line numbers (the header is row 1).
    Rows may arrive unordered; they are sorted by timestamp before the
    spacing checks.  A missing capacity is only accepted when the matching
    generation column is all zero.
    """
    raw = source if isinstance(source, (bytes, bytearray)) else source.read()
    try:
        text = bytes(raw).decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise TraceError(f"trace is not valid UTF-8: {exc}") from None
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != TRACE_HEADER:
        raise TraceError(f"bad header, expected {','.join(TRACE_HEADER)}", row=1)

    rows = []
    for lineno, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != 4:
            raise TraceError("malformed row (expected 4 fields)", row=lineno)
        try:
            ts = _parse_timestamp(fields[0])
            mw = [float(f) for f in fields[1:]]
        except ValueError:
            raise TraceError("malformed row", row=lineno) from None
        if not all(np.isfinite(mw)):
            raise TraceError("non-finite MW", row=lineno)
        if any(v < 0 for v in mw):
            raise TraceError("negative MW", row=lineno)
        rows.append((ts, lineno, mw))

    if len(rows) < 2:
        raise TraceError("trace needs at least two rows")
    rows.sort(key=lambda r: r[0])

    step = rows[1][0] - rows[0][0]
    if step <= timedelta(0) or step % timedelta(minutes=1):
        raise TraceError("non-constant interval", row=rows[1][1])
    for (prev, _, _), (cur, lineno, _) in zip(rows, rows[1:]):
        gap = cur - prev
        if gap == step:
            continue
        if gap > step and gap % step == timedelta(0):
            raise TraceError("missing interval", row=lineno)
        raise TraceError("non-constant interval", row=lineno)
    interval = int(step / timedelta(minutes=1))
    if not valid_interval(interval):
        raise TraceError(f"interval of {interval} min must divide 60 or be a multiple of 60")

    year = rows[0][0].year
    if rows[0][0] != datetime(year, 1, 1, tzinfo=timezone.utc):
        raise TraceError(f"trace must start at {year}-01-01T00:00Z", row=rows[0][1])
    expected = minutes_in_year(year) // interval
    if len(rows) != expected:
        bad_row = rows[expected][1] if len(rows) > expected else None
        raise TraceError(
            f"wrong row count for {year}: got {len(rows)}, expected {expected}", row=bad_row
        )

    data = np.array([r[2] for r in rows], dtype=float)
    load, wind, solar = (TimeSeries(year, interval, data[:, i]) for i in range(3))
    if wind_cap_base is None:
        wind_cap_base = 0.0
    if solar_cap_base is None:
        solar_cap_base = 0.0
    return BaseYearTraces(load, float(dc_load_base), wind, solar,
                          float(wind_cap_base), float(solar_cap_base))


def read_trace(path, **kwargs) -> BaseYearTraces:
    with open(path, "rb") as fh:
        return parse_trace(fh, **kwargs)


def write_trace(traces: BaseYearTraces, stream) -> None:
    """Write traces as trace CSV to a text stream; floats use repr so they round-trip."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    stamps = traces.total_load.timestamps()
    cols = zip(stamps, traces.total_load.values, traces.wind_gen.values, traces.solar_gen.values)
    for ts, load, wind, solar in cols:
        writer.writerow([f"{ts.astype(datetime):%Y-%m-%dT%H:%M:%S}Z",
                         repr(float(load)), repr(float(wind)), repr(float(solar))])


def scale_renewables(gen: TimeSeries, cap_base: float, cap_future: float) -> TimeSeries:
    """Rescale a generation trace by ``cap_future / cap_base``."""
    if cap_future < 0 or cap_base < 0:
        raise ValueError("capacities must be >= 0")
    if cap_base == 0:
        if np.any(gen.values > 0):
            raise ValueError("undefined scaling ratio: cap_base is 0 with nonzero generation")
        return gen.with_values(np.zeros(len(gen)))
    ratio = cap_future / cap_base
    return gen.with_values(gen.values * ratio)


def scale_nondc_load(traces: BaseYearTraces, nondc_growth_factor: float) -> TimeSeries:
    """Non-datacenter load for a future year.

    Subtracts the flat base DC block from total load and scales the remainder.
    Intervals where the DC block exceeds total load clamp to 0 and raise a
    :class:`NonDCClampWarning` carrying the number of clamped intervals.
    """
    if not nondc_growth_factor >= 0:
        raise ValueError("nondc_growth_factor must be >= 0")
    nondc = traces.total_load.values - traces.dc_load_base
    clamped = int(np.count_nonzero(nondc < 0))
    if clamped:
        warnings.warn(NonDCClampWarning(clamped), stacklevel=2)
        nondc = np.maximum(nondc, 0.0)
    return traces.total_load.with_values(nondc * nondc_growth_factor)

