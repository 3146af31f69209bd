"""Datacenter demand projections.

Two models:

* exponential: a regional cloud CAGR lifted by a global AI increment that is
  allocated to regions in proportion to their cloud growth rate;
* linear: GPU-vendor quarterly revenue grows by a fixed amount per quarter;
  each year's increase in annual revenue becomes new global capacity through
  the revenue -> GPUs -> MW chain, and the region's share of it is stacked on
  the cloud-only exponential baseline.

Revenue amounts are plain USD floats (``12e9`` for $12B).
"""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

MODELS = ("exponential", "linear")


@dataclass(frozen=True)
class RevenueChainParams:
    gpu_unit_price: float = 10_000.0
    incremental_watts_per_gpu: float = 300.0
    vendor_market_share: float = 0.68
    global_dc_capacity_mw: float = 33_000.0

    def __post_init__(self):
        if not (self.gpu_unit_price > 0 and self.incremental_watts_per_gpu > 0
                and self.global_dc_capacity_mw > 0):
            raise ValueError("revenue chain parameters must be > 0")
        if not 0 < self.vendor_market_share <= 1:
            raise ValueError("vendor_market_share must lie in (0, 1]")


# Post-boom quarterly DC revenue of the GPU vendor, keyed by quarter-end month.
LINEAR_ANCHORS_2024 = (
    ("2023-07", 10.32e9),
    ("2023-10", 14.51e9),
    ("2024-01", 18.40e9),
    ("2024-04", 23.34e9),
)


@dataclass(frozen=True)
class DemandModelConfig:
    base_capacity_mw: float
    base_year: int
    cloud_cagr: float
    model: str = "exponential"
    cloud_cagr_global_avg: float = 0.0721
    ai_cagr_increment_global: float = 0.0412
    linear_quarterly_revenue_growth: Optional[float] = 4.34e9
    linear_anchor_quarters: Tuple[Tuple[str, float], ...] = LINEAR_ANCHORS_2024
    chain: RevenueChainParams = field(default_factory=RevenueChainParams)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown demand model {self.model!r}; expected one of {MODELS}")
        if not self.base_capacity_mw > 0:
            raise ValueError("base_capacity_mw must be > 0")
        object.__setattr__(self, "linear_anchor_quarters",
                           tuple((str(q), float(r)) for q, r in self.linear_anchor_quarters))

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DemandProjection:
    demand_mw: Dict[int, float]
    model: str
    params: dict

    def __getitem__(self, year: int) -> float:
        return self.demand_mw[year]

    @property
    def years(self) -> List[int]:
        return sorted(self.demand_mw)


# ---- revenue -> capacity chain ------------------------------------------------

def annualize_revenue(quarterly_revenue: float) -> float:
    if quarterly_revenue < 0:
        raise ValueError("quarterly revenue must be >= 0")
    return 4.0 * quarterly_revenue


def gpus_sold(annual_revenue: float, p: RevenueChainParams) -> float:
    return annual_revenue / p.gpu_unit_price


def revenue_to_vendor_capacity(annual_revenue: float, p: RevenueChainParams) -> float:
    """MW backed by the vendor's GPUs alone."""
    return gpus_sold(annual_revenue, p) * p.incremental_watts_per_gpu / 1e6


def revenue_to_global_capacity(annual_revenue: float, p: RevenueChainParams) -> float:
    """Global MW implied by the vendor MW after grossing up for market share."""
    return revenue_to_vendor_capacity(annual_revenue, p) / p.vendor_market_share


def normalized_capacity(quarterly_revenue: float, p: RevenueChainParams) -> float:
    return revenue_to_global_capacity(annualize_revenue(quarterly_revenue), p) / p.global_dc_capacity_mw


def ai_cagr_increment(q_new: float, q_old: float, p: RevenueChainParams) -> float:
    return normalized_capacity(q_new, p) - normalized_capacity(q_old, p)


def regional_cagr(cloud_cagr_region: float, cloud_cagr_avg: float, ai_increment_avg: float) -> float:
    """Cloud CAGR of a region lifted by its proportional share of the AI increment."""
    if cloud_cagr_avg == 0:
        raise ValueError("cloud_cagr_avg must be nonzero")
    return cloud_cagr_region + cloud_cagr_region / cloud_cagr_avg * ai_increment_avg


def config_cagr(cfg: DemandModelConfig) -> float:
    return regional_cagr(cfg.cloud_cagr, cfg.cloud_cagr_global_avg, cfg.ai_cagr_increment_global)


def _check_years(cfg: DemandModelConfig, years: Iterable[int]) -> List[int]:
    years = list(years)
    if years and min(years) < cfg.base_year:
        raise ValueError(f"projection years must start at or after base year {cfg.base_year}")
    return years


def cloud_baseline(cfg: DemandModelConfig, years: Iterable[int]) -> Dict[int, float]:
    return {y: cfg.base_capacity_mw * (1 + cfg.cloud_cagr) ** (y - cfg.base_year)
            for y in _check_years(cfg, years)}


def project_exponential(cfg: DemandModelConfig, years: Iterable[int]) -> DemandProjection:
    """End-of-year capacity ``base * (1 + cagr) ** (year - base_year)``."""
    cagr = config_cagr(cfg)
    demand = {y: cfg.base_capacity_mw * (1 + cagr) ** (y - cfg.base_year)
              for y in _check_years(cfg, years)}
    return DemandProjection(demand, "exponential", {"cagr": cagr, **_echo(cfg)})


# ---- linear revenue model -------------------------------------------------------

_QUARTER_RE = re.compile(r"^(\d{4})-(\d{2})$")


def quarter_index(label: str) -> int:
    """Quarter number for a quarter-end month label ``YYYY-MM``; four per calendar year."""
    m = _QUARTER_RE.match(label.strip())
    if not m or not 1 <= int(m.group(2)) <= 12:
        raise ValueError(f"bad quarter label {label!r}; expected YYYY-MM of the quarter-end month")
    year, month = int(m.group(1)), int(m.group(2))
    return year * 4 + (month - 1) // 3


def _anchor_series(anchors: Sequence[Tuple[str, float]]) -> Tuple[int, List[float]]:
    if not anchors:
        raise ValueError("linear model needs at least one anchor quarter")
    idx = [quarter_index(q) for q, _ in anchors]
    months = {int(q.strip()[-2:]) % 3 for q, _ in anchors}
    if len(months) != 1 or idx != list(range(idx[0], idx[0] + len(idx))):
        raise ValueError("anchor quarters must be consecutive quarter-end months")
    return idx[0], [float(r) for _, r in anchors]


def quarterly_growths(anchors: Sequence[Tuple[str, float]]) -> List[float]:
    _, revenue = _anchor_series(anchors)
    return [b - a for a, b in zip(revenue, revenue[1:])]


def average_quarterly_growth(anchors: Sequence[Tuple[str, float]]) -> float:
    growths = quarterly_growths(anchors)
    if not growths:
        raise ValueError("average growth needs at least two anchor quarters")
    return sum(growths) / len(growths)


def trailing_revenue(anchors: Sequence[Tuple[str, float]], quarters: int = 4) -> float:
    _, revenue = _anchor_series(anchors)
    return sum(revenue[-quarters:])


def linear_growth(cfg: DemandModelConfig) -> float:
    g = cfg.linear_quarterly_revenue_growth
    return average_quarterly_growth(cfg.linear_anchor_quarters) if g is None else g


def quarterly_revenue(cfg: DemandModelConfig, q: int) -> float:
    """Revenue of quarter index ``q``: anchor value, or linear extrapolation.

    Quarters after the last anchor add the growth per quarter; quarters before
    the first anchor subtract it and are floored at zero.
    """
    first, revenue = _anchor_series(cfg.linear_anchor_quarters)
    g = linear_growth(cfg)
    last = first + len(revenue) - 1
    if q < first:
        return max(revenue[0] - g * (first - q), 0.0)
    if q > last:
        return revenue[-1] + g * (q - last)
    return revenue[q - first]


def annual_revenue(cfg: DemandModelConfig, year: int) -> float:
    """Calendar-year revenue: the four quarters whose end month falls in ``year``."""
    return sum(quarterly_revenue(cfg, year * 4 + k) for k in range(4))


def regional_share(cfg: DemandModelConfig, p: RevenueChainParams) -> float:
    """Fraction of a global capacity increment allocated to the region."""
    return (cfg.base_capacity_mw / p.global_dc_capacity_mw) * (cfg.cloud_cagr / cfg.cloud_cagr_global_avg)


def project_linear(cfg: DemandModelConfig, p: RevenueChainParams,
                   years: Iterable[int]) -> DemandProjection:
    years = _check_years(cfg, years)
    baseline = cloud_baseline(cfg, years)
    share = regional_share(cfg, p)
    demand: Dict[int, float] = {}
    ai_mw = 0.0
    ai_by_year: Dict[int, float] = {}
    for y in range(cfg.base_year + 1, max(years, default=cfg.base_year) + 1):
        added_revenue = annual_revenue(cfg, y) - annual_revenue(cfg, y - 1)
        ai_mw += share * revenue_to_global_capacity(added_revenue, p)
        ai_by_year[y] = ai_mw
    for y in years:
        demand[y] = baseline[y] + ai_by_year.get(y, 0.0)
    params = {"quarterly_growth": linear_growth(cfg), "regional_share": share, **_echo(cfg)}
    return DemandProjection(demand, "linear", params)


def project(cfg: DemandModelConfig, years: Iterable[int], model: Optional[str] = None) -> DemandProjection:
    model = model or cfg.model
    if model in ("exp", "exponential"):
        return project_exponential(cfg, years)
    if model == "linear":
        return project_linear(cfg, cfg.chain, years)
    raise ValueError(f"unknown demand model {model!r}")


def _echo(cfg: DemandModelConfig) -> dict:
    return {
        "base_capacity_mw": cfg.base_capacity_mw,
        "base_year": cfg.base_year,
        "cloud_cagr": cfg.cloud_cagr,
        "cloud_cagr_global_avg": cfg.cloud_cagr_global_avg,
        "ai_cagr_increment_global": cfg.ai_cagr_increment_global,
    }
