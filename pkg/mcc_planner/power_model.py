"""
Converter and amplifier power for comm-cores: Walden FOM, the CMOS dynamic
power law, PA totals and the monolithic vs. multi-core conversion comparison.
"""
import logging
import math
from dataclasses import dataclass

from mcc_planner.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# An I and a Q converter per comm-core.
CONVERTERS_PER_CORE = 2


@dataclass(frozen=True)
class FomModel:
    """
    Walden FOM trend versus sampling rate: flat at fom_base up to f_corner,
    then rising as (fs / f_corner) ** alpha.
    """
    fom_base: float = 1e-12
    f_corner: float = 1e9
    alpha: float = 1.0

    def __post_init__(self):
        if not self.fom_base > 0:
            raise InvalidArgumentError(f"fom_base must be positive, got {self.fom_base}")
        if not self.f_corner > 0:
            raise InvalidArgumentError(f"f_corner must be positive, got {self.f_corner}")
        if self.alpha < 0:
            raise InvalidArgumentError(f"alpha must be >= 0, got {self.alpha}")


@dataclass(frozen=True)
class AdcSpec:
    enob: float
    fs: float

    def __post_init__(self):
        if self.enob < 0:
            raise InvalidArgumentError(f"ENOB must be >= 0, got {self.enob}")
        if not self.fs > 0:
            raise InvalidArgumentError(f"Sampling rate must be positive, got {self.fs}")


@dataclass(frozen=True)
class DynamicPowerParams:
    c: float
    v: float
    f: float
    p_static: float = 0.0

    def __post_init__(self):
        for name in ('c', 'v', 'f', 'p_static'):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class PowerBreakdown:
    pa: float
    conversion: float
    overhead_factor: float

    @classmethod
    def for_cores(cls, n_cores: int, pa_per_core: float, model: FomModel, enob: float,
                  core_bw_hz: float, overhead_factor: float) -> 'PowerBreakdown':
        """PA and I/Q conversion totals of n_cores identical comm-cores."""
        converter = adc_power_w(fom_at(model, core_bw_hz), AdcSpec(enob, core_bw_hz))
        return cls(pa_power_total_w(n_cores, pa_per_core), n_cores * CONVERTERS_PER_CORE * converter,
                   overhead_factor)

    @property
    def rf_and_conversion(self) -> float:
        return self.pa + self.conversion

    @property
    def system_estimate(self) -> float:
        return system_power_estimate_w(self.pa, self.overhead_factor)


def adc_power_w(fom: float, spec: AdcSpec) -> float:
    """Converter power from its FOM: P = FOM * 2**ENOB * fs."""
    if not fom > 0:
        raise InvalidArgumentError(f"FOM must be positive, got {fom}")
    return fom * 2 ** spec.enob * spec.fs


def walden_fom(power_w: float, spec: AdcSpec) -> float:
    """Energy per conversion step, P / (2**ENOB * fs), in joules."""
    if power_w < 0:
        raise InvalidArgumentError(f"Power must be >= 0, got {power_w}")
    return power_w / (2 ** spec.enob * spec.fs)


def fom_at(model: FomModel, fs: float) -> float:
    if not fs > 0:
        raise InvalidArgumentError(f"Sampling rate must be positive, got {fs}")
    if fs <= model.f_corner:
        return model.fom_base
    return model.fom_base * (fs / model.f_corner) ** model.alpha


def dynamic_power_w(params: DynamicPowerParams) -> float:
    """Switching power C*V^2*f plus static leakage."""
    return params.c * params.v ** 2 * params.f + params.p_static


def pa_power_total_w(n_cores: int, p_per_core: float) -> float:
    if n_cores < 0 or p_per_core < 0:
        raise InvalidArgumentError(f"Core count and per-core power must be >= 0, got {n_cores}, {p_per_core}")
    return n_cores * p_per_core


def system_power_estimate_w(pa_total: float, overhead_factor: float = 10.0) -> float:
    """
    Whole-radio power scaled up from the PA total.

    Raises:
        InvalidArgumentError: If overhead_factor is below 1
    """
    if overhead_factor < 1:
        raise InvalidArgumentError(f"Overhead factor must be >= 1, got {overhead_factor}")
    return pa_total * overhead_factor


def _split_count(total_bw: float, core_bw: float) -> int:
    if not (total_bw > 0 and core_bw > 0):
        raise InvalidArgumentError(f"Bandwidths must be positive, got {total_bw} and {core_bw}")
    ratio = total_bw / core_bw
    n_cores = round(ratio)
    if n_cores < 1 or abs(ratio - n_cores) > 1e-9 * ratio:
        raise InvalidArgumentError(
            f"Total bandwidth {total_bw} Hz is not an integer multiple of core bandwidth {core_bw} Hz"
        )
    return n_cores


def conversion_power_w(total_bw: float, core_bw: float, model: FomModel, enob: float) -> float:
    """I/Q conversion power of total_bw split into cores of core_bw each."""
    n_cores = _split_count(total_bw, core_bw)
    per_converter = adc_power_w(fom_at(model, core_bw), AdcSpec(enob, core_bw))
    return n_cores * CONVERTERS_PER_CORE * per_converter


def conversion_power_ratio(total_bw: float, core_bw: float, model: FomModel, enob: float) -> float:
    """
    Monolithic over multi-core conversion power for the same total bandwidth.

    N cores at core_bw need N * 2 converters sampling at core_bw; one
    monolithic core needs 2 converters at total_bw. The ENOB, the I/Q factor
    and the N * core_bw = total_bw sample count cancel, leaving the FOM ratio.

    Raises:
        InvalidArgumentError: If total_bw is not a multiple of core_bw
    """
    _split_count(total_bw, core_bw)
    if enob < 0:
        raise InvalidArgumentError(f"ENOB must be >= 0, got {enob}")
    ratio = fom_at(model, total_bw) / fom_at(model, core_bw)
    logger.debug(f"Conversion power ratio for {total_bw:.3g} Hz in {core_bw:.3g} Hz cores: {ratio:.3f}")
    return ratio


def core_power_w(pa_per_core: float, model: FomModel, enob: float, core_bw_hz: float) -> float:
    """Per-core power: PA plus an I/Q converter pair sampling at the core bandwidth."""
    if pa_per_core < 0:
        raise InvalidArgumentError(f"PA power must be >= 0, got {pa_per_core}")
    converter = adc_power_w(fom_at(model, core_bw_hz), AdcSpec(enob, core_bw_hz))
    return pa_per_core + CONVERTERS_PER_CORE * converter
