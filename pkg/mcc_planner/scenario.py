"""
Scenario files
Line-oriented `key = value` documents grouped under `[section]` headers.
Full-line comments start with '#'. The `band` key may repeat; every other
key may appear once.
"""
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from config import Config
from mcc_planner.errors import InvalidArgumentError, ScenarioError
from mcc_planner.link_budget import LinkParams
from mcc_planner.power_model import FomModel
from mcc_planner.radio_physics import AntennaArray
from mcc_planner.spectrum import Band, BandGroup, SpectrumRegistry, builtin_registry, parse_band_line

logger = logging.getLogger(__name__)

REQUIRED = object()


@dataclass(frozen=True)
class TrafficSpec:
    profile: str = 'flat'
    peak_gbps: float = 0.0
    steps: int = Config.DEFAULT_TRACE_STEPS
    step_s: float = Config.DEFAULT_STEP_S
    seed: int = 0
    trace_path: Optional[str] = None
    n_max: Optional[int] = None


@dataclass(frozen=True)
class Scenario:
    link: LinkParams
    registry_override: Tuple[Band, ...] = ()
    groups: Optional[Tuple[BandGroup, ...]] = None
    core_bw: float = Config.DEFAULT_CORE_BW_GHZ
    n_bw_cores: int = Config.DEFAULT_N_BW_CORES
    n_spatial_max: int = Config.DEFAULT_N_SPATIAL_MAX
    ul_share: float = Config.DEFAULT_UL_SHARE
    rate_reference: str = 'channel'
    pa_per_core: float = Config.DEFAULT_PA_PER_CORE_W
    fom: FomModel = FomModel()
    enob: float = Config.DEFAULT_ENOB
    overhead_factor: float = Config.DEFAULT_OVERHEAD_FACTOR
    target_rate: float = 0.0
    power_budget: Optional[float] = None
    method: str = Config.DEFAULT_METHOD
    traffic: TrafficSpec = field(default_factory=TrafficSpec)

    def registry(self) -> SpectrumRegistry:
        return builtin_registry().with_bands(self.registry_override)


# Converters

def _float(text: str) -> float:
    return float(text)


def _int(text: str) -> int:
    return int(text)


def _optional(convert: Callable[[str], Any]) -> Callable[[str], Any]:
    def parse(text: str):
        return None if text.lower() == 'none' else convert(text)
    return parse


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got '{text}'")
        return text
    return parse


def _groups(text: str) -> Optional[Tuple[BandGroup, ...]]:
    if text.lower() == 'all':
        return None
    return tuple(BandGroup(part.strip().lower()) for part in text.split(',') if part.strip())


def _band(text: str) -> Band:
    return parse_band_line(text)


# Validators return an error message or None

def _positive(value) -> Optional[str]:
    return None if value is None or value > 0 else 'must be > 0'


def _non_negative(value) -> Optional[str]:
    return None if value is None or value >= 0 else 'must be >= 0'


def _at_least_one(value) -> Optional[str]:
    return None if value is None or value >= 1 else 'must be >= 1'


def _fraction(value) -> Optional[str]:
    return None if 0.0 <= value <= 1.0 else 'must be within [0, 1]'


def _any(value) -> Optional[str]:
    return None


@dataclass(frozen=True)
class _Key:
    convert: Callable[[str], Any]
    default: Any = None
    check: Callable[[Any], Optional[str]] = _any
    repeatable: bool = False


SCHEMA: Dict[str, Dict[str, _Key]] = {
    'link': {
        'tx_power_dbm': _Key(_float, 20.0),
        'tx_elements': _Key(_int, 512, _at_least_one),
        'tx_element_gain_dbi': _Key(_float, 5.0),
        'tx_gain_dbi': _Key(_optional(_float), None),
        'rx_elements': _Key(_int, 64, _at_least_one),
        'rx_element_gain_dbi': _Key(_float, 5.0),
        'rx_gain_dbi': _Key(_optional(_float), None),
        'frequency_ghz': _Key(_float, REQUIRED, _positive),
        'distance_m': _Key(_float, REQUIRED, _positive),
        'atm_db_per_km': _Key(_float, 0.0, _non_negative),
        'other_path_loss_db': _Key(_float, 10.0, _non_negative),
        'tx_frontend_loss_db': _Key(_float, 3.0, _non_negative),
        'rx_noise_figure_db': _Key(_float, 5.0, _non_negative),
        'impl_loss_db': _Key(_float, 5.0, _non_negative),
        'se_cap': _Key(_optional(_float), None, _positive),
    },
    'spectrum': {
        'band': _Key(_band, (), repeatable=True),
        'groups': _Key(_groups, None),
    },
    'cores': {
        'core_bw_ghz': _Key(_float, Config.DEFAULT_CORE_BW_GHZ, _positive),
        'n_bw_cores': _Key(_int, Config.DEFAULT_N_BW_CORES, _non_negative),
        'n_spatial_max': _Key(_int, Config.DEFAULT_N_SPATIAL_MAX, _at_least_one),
        'ul_share': _Key(_float, Config.DEFAULT_UL_SHARE, _fraction),
        'rate_reference': _Key(_choice('channel', 'carrier'), 'channel'),
    },
    'power': {
        'pa_per_core_w': _Key(_float, Config.DEFAULT_PA_PER_CORE_W, _non_negative),
        'fom_base_j': _Key(_float, Config.DEFAULT_FOM_BASE_J, _positive),
        'f_corner_hz': _Key(_float, Config.DEFAULT_F_CORNER_HZ, _positive),
        'alpha': _Key(_float, Config.DEFAULT_FOM_ALPHA, _non_negative),
        'enob': _Key(_float, Config.DEFAULT_ENOB, _non_negative),
        'overhead_factor': _Key(_float, Config.DEFAULT_OVERHEAD_FACTOR, _at_least_one),
    },
    'plan': {
        'target_rate_gbps': _Key(_float, 0.0, _non_negative),
        'power_budget_w': _Key(_optional(_float), None, _non_negative),
        'method': _Key(_choice('greedy', 'exact'), Config.DEFAULT_METHOD),
    },
    'traffic': {
        'profile': _Key(_choice('flat', 'diurnal'), 'flat'),
        'peak_gbps': _Key(_float, 0.0, _non_negative),
        'steps': _Key(_int, Config.DEFAULT_TRACE_STEPS, _at_least_one),
        'step_s': _Key(_float, Config.DEFAULT_STEP_S, _positive),
        'seed': _Key(_int, 0),
        'trace_path': _Key(_optional(str), None),
        'n_max': _Key(_optional(_int), None, _non_negative),
    },
}


def _read_values(text: str) -> Tuple[Dict[str, Dict[str, Any]], Dict[str, Any]]:
    values = {section: {} for section in SCHEMA}
    lines = {}
    section = None

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue

        if line.startswith('[') and line.endswith(']'):
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ScenarioError(f"unknown section [{section}]", line=line_no)
            continue

        if '=' not in line:
            raise ScenarioError(f"expected 'key = value', got '{line}'", line=line_no)
        key, value = (part.strip() for part in line.split('=', 1))
        if section is None:
            raise ScenarioError("key outside of any [section]", line=line_no, key=key)
        spec = SCHEMA[section].get(key)
        if spec is None:
            raise ScenarioError("unknown key", line=line_no, key=f"{section}.{key}")

        qualified = f"{section}.{key}"
        try:
            converted = spec.convert(value)
        except (ValueError, InvalidArgumentError) as e:
            raise ScenarioError(f"invalid value '{value}' ({e})", line=line_no, key=qualified)
        problem = spec.check(converted)
        if problem:
            raise ScenarioError(f"{problem}, got {value}", line=line_no, key=qualified)

        if spec.repeatable:
            values[section].setdefault(key, []).append(converted)
            lines.setdefault(qualified, []).append(line_no)
        elif key in values[section]:
            raise ScenarioError(f"duplicate key (first set on line {lines[qualified]})",
                                line=line_no, key=qualified)
        else:
            values[section][key] = converted
            lines[qualified] = line_no

    for section, keys in SCHEMA.items():
        for key, spec in keys.items():
            if key in values[section]:
                continue
            if spec.default is REQUIRED:
                raise ScenarioError("missing required key", key=f"{section}.{key}")
            values[section][key] = spec.default
    return values, lines


def _invariant_error(error: InvalidArgumentError, lines: Dict[str, Any], *sections: str) -> ScenarioError:
    # Invariant messages open with the field name; map it back to its key.
    message = str(error)
    for section in sections:
        for key in SCHEMA[section]:
            if message.startswith(f"{key} "):
                qualified = f"{section}.{key}"
                return ScenarioError(message, line=lines.get(qualified), key=qualified)
    return ScenarioError(message, key=sections[0])


def parse_scenario(text: str) -> Scenario:
    """
    Parse and validate a scenario document.

    Args:
        text (str): Scenario file content

    Returns:
        Scenario: Validated scenario with defaults applied

    Raises:
        ScenarioError: On unknown keys, bad values or violated invariants
    """
    values, lines = _read_values(text)
    link, spectrum, cores = values['link'], values['spectrum'], values['cores']
    power, plan, traffic = values['power'], values['plan'], values['traffic']

    try:
        link_params = LinkParams(
            frequency_ghz=link['frequency_ghz'],
            distance_m=link['distance_m'],
            tx_power_dbm=link['tx_power_dbm'],
            tx_array=AntennaArray(link['tx_elements'], link['tx_element_gain_dbi']),
            rx_array=AntennaArray(link['rx_elements'], link['rx_element_gain_dbi']),
            atm_db_per_km=link['atm_db_per_km'],
            other_path_loss_db=link['other_path_loss_db'],
            tx_frontend_loss_db=link['tx_frontend_loss_db'],
            rx_noise_figure_db=link['rx_noise_figure_db'],
            impl_loss_db=link['impl_loss_db'],
            core_bw_ghz=cores['core_bw_ghz'],
            se_cap=link['se_cap'],
            tx_gain_dbi=link['tx_gain_dbi'],
            rx_gain_dbi=link['rx_gain_dbi'],
        )
    except InvalidArgumentError as e:
        raise _invariant_error(e, lines, 'link', 'cores')
    try:
        fom = FomModel(power['fom_base_j'], power['f_corner_hz'], power['alpha'])
    except InvalidArgumentError as e:
        raise _invariant_error(e, lines, 'power')

    # Bands join one at a time so an overlap names its own line.
    overrides = tuple(spectrum['band'])
    registry = builtin_registry()
    for band, line_no in zip(overrides, lines.get('spectrum.band', ())):
        try:
            registry = registry.with_bands([band])
        except InvalidArgumentError as e:
            raise ScenarioError(str(e), line=line_no, key='spectrum.band')

    scenario = Scenario(
        link=link_params,
        registry_override=overrides,
        groups=spectrum['groups'],
        core_bw=cores['core_bw_ghz'],
        n_bw_cores=cores['n_bw_cores'],
        n_spatial_max=cores['n_spatial_max'],
        ul_share=cores['ul_share'],
        rate_reference=cores['rate_reference'],
        pa_per_core=power['pa_per_core_w'],
        fom=fom,
        enob=power['enob'],
        overhead_factor=power['overhead_factor'],
        target_rate=plan['target_rate_gbps'],
        power_budget=plan['power_budget_w'],
        method=plan['method'],
        traffic=TrafficSpec(
            profile=traffic['profile'],
            peak_gbps=traffic['peak_gbps'],
            steps=traffic['steps'],
            step_s=traffic['step_s'],
            seed=traffic['seed'],
            trace_path=traffic['trace_path'],
            n_max=traffic['n_max'],
        ),
    )
    logger.info(f"Parsed scenario: {link_params.frequency_ghz} GHz at {link_params.distance_m} m, "
                f"{len(overrides)} band overrides")
    return scenario


def load_scenario(path) -> Scenario:
    """
    Read and parse a scenario file.

    Raises:
        OSError: If the file cannot be read
        ScenarioError: If the content is invalid
    """
    path = Path(path)
    scenario = parse_scenario(path.read_text(encoding='utf-8'))
    trace_path = scenario.traffic.trace_path
    if trace_path and not Path(trace_path).is_absolute():
        # Trace files are looked up next to the scenario that names them.
        traffic = replace(scenario.traffic, trace_path=str(path.parent / trace_path))
        scenario = replace(scenario, traffic=traffic)
    return scenario
