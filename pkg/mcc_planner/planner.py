"""
Core planner
Picks comm-cores (channel x spatial index) that meet a target aggregate rate
at minimum power, splits cores between uplink and downlink, simulates core
power gating against a traffic trace and projects traffic growth.
"""
import csv
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from mcc_planner.errors import InfeasiblePlanError, InvalidArgumentError, SearchLimitError
from mcc_planner.link_budget import LinkParams, evaluate
from mcc_planner.spectrum import BandGroup, Channel, SpectrumRegistry, carve_registry

logger = logging.getLogger(__name__)

PLAN_CSV_HEADER = ('channel_id', 'band_id', 'f_center_ghz', 'spatial_index', 'rate_gbps', 'power_w')
SIMULATION_CSV_HEADER = ('t_s', 'demand_gbps', 'active_cores', 'served_gbps', 'power_w')
TRACE_CSV_HEADER = ('t_s', 'ul_gbps', 'dl_gbps')


@dataclass(frozen=True)
class CandidateCore:
    channel: Channel
    spatial_index: int
    rate: float
    power: float

    def __post_init__(self):
        if self.rate < 0:
            raise InvalidArgumentError(f"Core rate must be >= 0, got {self.rate}")
        if not self.power > 0:
            raise InvalidArgumentError(f"Core power must be positive, got {self.power}")

    @property
    def key(self) -> Tuple[str, int]:
        return self.channel.id, self.spatial_index


@dataclass(frozen=True)
class CoreConfiguration:
    selected: Tuple[CandidateCore, ...]

    @property
    def total_rate(self) -> float:
        return math.fsum(core.rate for core in self.selected)

    @property
    def total_power(self) -> float:
        return math.fsum(core.power for core in self.selected)

    @property
    def n_cores(self) -> int:
        return len(self.selected)

    def csv_rows(self) -> List[Tuple]:
        return [
            (core.channel.id, core.channel.band_id, core.channel.f_center,
             core.spatial_index, core.rate, core.power)
            for core in self.selected
        ]


def _greedy_key(core: CandidateCore):
    # Rate per watt descending, then higher rate, lower f_center, lower
    # spatial index, channel id.
    return (-(core.rate / core.power), -core.rate, core.channel.f_center,
            core.spatial_index, core.channel.id)


def _check_unique(candidates: Sequence[CandidateCore]):
    keys = [core.key for core in candidates]
    if len(set(keys)) != len(keys):
        raise InvalidArgumentError("Candidates must be unique per (channel, spatial_index)")


def _slack(value: float) -> float:
    return Config.SUM_RTOL * max(1.0, abs(value))


def meets_target(rate, target_rate: float):
    """
    Shared feasibility rule of both planners.

    A rate sum short of the target by float rounding alone still meets it.
    Works elementwise on numpy arrays.
    """
    return rate >= target_rate - _slack(target_rate)


def fits_budget(power, power_budget: Optional[float]):
    if power_budget is None:
        return np.ones(np.shape(power), dtype=bool) if np.ndim(power) else True
    return power <= power_budget + _slack(power_budget)


def enumerate_candidates(registry: SpectrumRegistry, core_bw: float, n_spatial_max: int,
                         link: LinkParams, power_w: float,
                         groups: Optional[Iterable[BandGroup]] = None,
                         evaluate_at_carrier: bool = False) -> List[CandidateCore]:
    """
    Every carved channel times every spatial index, rated by the link budget.

    Args:
        registry (SpectrumRegistry): Bands to carve
        core_bw (float): Channel width in GHz
        n_spatial_max (int): Spatial cores per channel
        link (LinkParams): Link geometry; frequency is replaced per channel
        power_w (float): Power of one core in watts
        groups (iterable, optional): Only carve bands in these groups
        evaluate_at_carrier (bool): Rate every core at link.frequency_ghz
            instead of its channel centre

    Returns:
        list: Candidates ordered by channel then spatial index
    """
    if n_spatial_max < 1:
        raise InvalidArgumentError(f"n_spatial_max must be >= 1, got {n_spatial_max}")

    channels = carve_registry(registry, core_bw, groups)
    carrier_rate = evaluate(link.at_frequency(link.frequency_ghz, core_bw)).core_rate

    candidates = []
    for channel in channels:
        if evaluate_at_carrier:
            rate = carrier_rate
        else:
            rate = evaluate(link.at_frequency(channel.f_center, channel.bandwidth)).core_rate
        for spatial_index in range(n_spatial_max):
            candidates.append(CandidateCore(channel, spatial_index, rate, power_w))

    logger.info(f"Enumerated {len(candidates)} candidate cores over {len(channels)} channels")
    return candidates


def plan_greedy(candidates: Sequence[CandidateCore], target_rate: float,
                power_budget: Optional[float] = None) -> CoreConfiguration:
    """
    Select cores by rate per watt until the target rate is met.

    Cores that no longer fit the power budget are skipped.

    Raises:
        InfeasiblePlanError: If the candidates run out before the target is met
    """
    if target_rate < 0:
        raise InvalidArgumentError(f"Target rate must be >= 0, got {target_rate}")
    _check_unique(candidates)

    selected = []
    skipped = 0
    for core in sorted(candidates, key=_greedy_key):
        if meets_target(math.fsum(c.rate for c in selected), target_rate):
            break
        if not fits_budget(math.fsum(c.power for c in selected) + core.power, power_budget):
            logger.debug(f"Skipping {core.key}: exceeds power budget {power_budget} W")
            skipped += 1
            continue
        selected.append(core)

    if skipped:
        logger.warning(f"Power budget {power_budget} W excluded {skipped} candidate cores")

    config = CoreConfiguration(tuple(selected))
    if not meets_target(config.total_rate, target_rate):
        logger.error(f"Greedy plan infeasible: {config.total_rate:.2f} of {target_rate:.2f} Gb/s")
        raise InfeasiblePlanError(target_rate, config)

    logger.info(f"Greedy plan: {config.n_cores} cores, {config.total_rate:.2f} Gb/s, {config.total_power:.3f} W")
    return config


def _subset_sums(values: np.ndarray) -> np.ndarray:
    # sums[mask] for every bitmask; bit j selects values[j].
    sums = np.zeros(1)
    for value in values:
        sums = np.concatenate([sums, sums + value])
    return sums


def plan_exact(candidates: Sequence[CandidateCore], target_rate: float,
               power_budget: Optional[float] = None,
               limit: int = Config.EXHAUSTIVE_LIMIT) -> CoreConfiguration:
    """
    Minimum-power selection meeting the target, by exhaustive enumeration.

    Ties on power go to fewer cores, then to the selection that comes first
    in greedy order.

    Raises:
        SearchLimitError: If there are more than `limit` candidates
        InfeasiblePlanError: If no subset meets the target within budget
    """
    if target_rate < 0:
        raise InvalidArgumentError(f"Target rate must be >= 0, got {target_rate}")
    if len(candidates) > limit:
        raise SearchLimitError(len(candidates), limit)
    _check_unique(candidates)

    # Greedy rank r sits on bit n-1-r, so among equal-size selections the
    # larger mask is the one that comes first in greedy order.
    ordered = sorted(candidates, key=_greedy_key)
    by_bit = ordered[::-1]
    rate_sums = _subset_sums(np.array([core.rate for core in by_bit]))
    power_sums = _subset_sums(np.array([core.power for core in by_bit]))
    counts = _subset_sums(np.ones(len(by_bit)))

    within_budget = fits_budget(power_sums, power_budget)
    feasible = within_budget & meets_target(rate_sums, target_rate)

    def decode(mask: int) -> CoreConfiguration:
        chosen = [by_bit[bit] for bit in range(len(by_bit)) if mask >> bit & 1]
        return CoreConfiguration(tuple(sorted(chosen, key=_greedy_key)))

    if not feasible.any():
        best_mask = int(np.argmax(np.where(within_budget, rate_sums, -1.0)))
        best = decode(best_mask)
        logger.error(f"Exact plan infeasible: {best.total_rate:.2f} of {target_rate:.2f} Gb/s")
        raise InfeasiblePlanError(target_rate, best)

    best_power = power_sums[feasible].min()
    tied = feasible & (power_sums <= best_power + 1e-12 * max(1.0, best_power))
    fewest = counts[tied].min()
    tied &= counts == fewest
    mask = int(np.flatnonzero(tied).max())

    config = decode(mask)
    logger.info(f"Exact plan: {config.n_cores} cores, {config.total_rate:.2f} Gb/s, {config.total_power:.3f} W")
    return config


def core_combinations(core_rate: float, target_rate: float, max_bw_cores: int,
                      max_spatial_cores: int) -> List[Tuple[int, int]]:
    """
    (n_bw, n_spatial) pairs of identical cores reaching the target with the
    fewest total cores, ordered by n_bw descending.
    """
    if not core_rate > 0:
        raise InvalidArgumentError(f"Core rate must be positive, got {core_rate}")
    if target_rate <= 0:
        return [(0, 0)]

    best_total = None
    pairs = []
    for n_bw in range(1, max_bw_cores + 1):
        n_spatial = math.ceil(target_rate / (core_rate * n_bw))
        if n_spatial > max_spatial_cores:
            continue
        total = n_bw * n_spatial
        if best_total is None or total < best_total:
            best_total = total
            pairs = [(n_bw, n_spatial)]
        elif total == best_total:
            pairs.append((n_bw, n_spatial))
    return sorted(pairs, reverse=True)


def duplex_split(n_cores: int, ul_share: float) -> Tuple[int, int]:
    """Split cores between uplink and downlink, rounding the uplink half up."""
    if n_cores < 0:
        raise InvalidArgumentError(f"Core count must be >= 0, got {n_cores}")
    if not 0.0 <= ul_share <= 1.0:
        raise InvalidArgumentError(f"Uplink share must be within [0, 1], got {ul_share}")
    ul_cores = min(n_cores, math.floor(n_cores * ul_share + 0.5))
    return ul_cores, n_cores - ul_cores


@dataclass(frozen=True)
class TrafficTrace:
    """
    Demand per time step. dl_demand is the part of demand not on the uplink.
    """
    timestamps: np.ndarray
    demand: np.ndarray
    ul_demand: np.ndarray

    def __post_init__(self):
        if not (len(self.timestamps) == len(self.demand) == len(self.ul_demand)):
            raise InvalidArgumentError("Trace columns must have equal length")
        if len(self.timestamps) and np.any(np.diff(self.timestamps) <= 0):
            raise InvalidArgumentError("Trace timestamps must be strictly increasing")
        if np.any(self.demand < 0) or np.any(self.ul_demand < 0) or np.any(self.ul_demand > self.demand):
            raise InvalidArgumentError("Trace demands must be >= 0 with uplink within total demand")

    @classmethod
    def from_columns(cls, timestamps, ul_demand, dl_demand) -> 'TrafficTrace':
        ul = np.asarray(ul_demand, dtype=float)
        return cls(np.asarray(timestamps, dtype=float), ul + np.asarray(dl_demand, dtype=float), ul)

    @property
    def dl_demand(self) -> np.ndarray:
        return self.demand - self.ul_demand

    @property
    def durations(self) -> np.ndarray:
        if len(self.timestamps) < 2:
            return np.ones(len(self.timestamps))
        return np.diff(self.timestamps, append=2 * self.timestamps[-1] - self.timestamps[-2])


def synth_trace(peak: float, steps: int, profile: str = 'flat', seed: int = 0,
                ul_share: float = 0.5, step_s: float = Config.DEFAULT_STEP_S) -> TrafficTrace:
    """
    Synthetic demand trace.

    'flat' holds the peak; 'diurnal' follows peak * (0.5 + 0.5 * sin) over one
    period with a phase drawn from the seed.
    """
    if steps < 1:
        raise InvalidArgumentError(f"Trace needs at least one step, got {steps}")
    if peak < 0:
        raise InvalidArgumentError(f"Peak demand must be >= 0, got {peak}")
    if not 0.0 <= ul_share <= 1.0:
        raise InvalidArgumentError(f"Uplink share must be within [0, 1], got {ul_share}")

    timestamps = np.arange(steps, dtype=float) * step_s
    if profile == 'flat':
        demand = np.full(steps, float(peak))
    elif profile == 'diurnal':
        phase = np.random.default_rng(seed).uniform(0.0, 2 * np.pi)
        angle = 2 * np.pi * np.arange(steps) / steps + phase
        demand = np.clip(peak * (0.5 + 0.5 * np.sin(angle)), 0.0, peak)
    else:
        raise InvalidArgumentError(f"Unknown traffic profile: {profile}")

    return TrafficTrace(timestamps, demand, demand * ul_share)


def load_trace_csv(path) -> TrafficTrace:
    """
    Read a trace with columns t_s, ul_gbps, dl_gbps.

    Raises:
        OSError: If the file cannot be read
        InvalidArgumentError: If the content is malformed
    """
    with open(path, newline='', encoding='utf-8') as handle:
        reader = csv.DictReader(handle)
        missing = set(TRACE_CSV_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise InvalidArgumentError(f"Trace file {path} is missing columns: {', '.join(sorted(missing))}")
        columns = {name: [] for name in TRACE_CSV_HEADER}
        for row in reader:
            for name in TRACE_CSV_HEADER:
                try:
                    columns[name].append(float(row[name]))
                except (TypeError, ValueError):
                    raise InvalidArgumentError(f"Trace file {path}, line {reader.line_num}: bad {name}")
    logger.info(f"Loaded {len(columns['t_s'])} trace steps from {path}")
    return TrafficTrace.from_columns(columns['t_s'], columns['ul_gbps'], columns['dl_gbps'])


@dataclass(frozen=True)
class GatingSeries:
    t_s: np.ndarray
    demand: np.ndarray
    active_cores: np.ndarray
    power: np.ndarray
    served: np.ndarray
    unserved: np.ndarray
    durations: np.ndarray

    def total_energy_j(self) -> float:
        return float(np.sum(self.power * self.durations))

    def always_on_energy_j(self, n_max: int, p_core: float) -> float:
        return float(n_max * p_core * np.sum(self.durations))

    def csv_rows(self) -> List[Tuple]:
        return [
            (float(t), float(d), int(a), float(s), float(p))
            for t, d, a, s, p in zip(self.t_s, self.demand, self.active_cores, self.served, self.power)
        ]


def simulate_gating(trace: TrafficTrace, core_rate: float, p_core: float, n_max: int) -> GatingSeries:
    """
    Turn on only the cores each step's demand needs, up to n_max.

    Returns:
        GatingSeries: active cores, power, served and unserved demand per step
    """
    if not core_rate > 0:
        raise InvalidArgumentError(f"Core rate must be positive, got {core_rate}")
    if n_max < 0:
        raise InvalidArgumentError(f"n_max must be >= 0, got {n_max}")

    demand = trace.demand
    active = np.ceil(demand / core_rate)
    # Division can round k*r/r just below k; never serve less than asked.
    active = np.where(active * core_rate < demand, active + 1, active)
    active = np.minimum(active, n_max).astype(int)
    served = np.minimum(demand, active * core_rate)
    series = GatingSeries(
        t_s=trace.timestamps,
        demand=demand,
        active_cores=active,
        power=active * p_core,
        served=served,
        unserved=demand - served,
        durations=trace.durations,
    )

    short = int(np.count_nonzero(series.unserved > 0))
    if short:
        logger.warning(f"{short} of {len(demand)} steps exceed capacity of {n_max} cores")
    logger.info(f"Simulated {len(demand)} steps, peak {int(active.max(initial=0))} active cores")
    return series


def omnify_project(v0: float, y0: float, y1: float) -> float:
    """Project a traffic figure by one order of magnitude every five years."""
    return v0 * 10 ** ((y1 - y0) / 5)
