"""
Per comm-core link budget: transmit power through path loss and noise to
spectral efficiency and data rate.
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from mcc_planner.errors import InvalidArgumentError
from mcc_planner.radio_physics import AntennaArray, PathLossBreakdown, array_gain_dbi, path_loss

logger = logging.getLogger(__name__)

THERMAL_NOISE_PSD_DBM_HZ = -174.0


@dataclass(frozen=True)
class LinkParams:
    """
    Everything the link budget consumes for one comm-core.

    tx_gain_dbi / rx_gain_dbi, when set, replace the element + array gain
    computed from the arrays (tables usually quote rounded total gains).
    """
    frequency_ghz: float
    distance_m: float
    tx_power_dbm: float = 20.0
    tx_array: AntennaArray = AntennaArray(512, 5.0)
    rx_array: AntennaArray = AntennaArray(64, 5.0)
    atm_db_per_km: float = 0.0
    other_path_loss_db: float = 0.0
    tx_frontend_loss_db: float = 0.0
    rx_noise_figure_db: float = 0.0
    impl_loss_db: float = 0.0
    core_bw_ghz: float = 1.0
    se_cap: Optional[float] = None
    tx_gain_dbi: Optional[float] = None
    rx_gain_dbi: Optional[float] = None

    def __post_init__(self):
        if not self.frequency_ghz > 0:
            raise InvalidArgumentError(f"frequency_ghz must be positive, got {self.frequency_ghz}")
        if not self.distance_m > 0:
            raise InvalidArgumentError(f"distance_m must be positive, got {self.distance_m}")
        if not self.core_bw_ghz > 0:
            raise InvalidArgumentError(f"core_bw_ghz must be positive, got {self.core_bw_ghz}")
        for name in ('atm_db_per_km', 'other_path_loss_db', 'tx_frontend_loss_db',
                     'rx_noise_figure_db', 'impl_loss_db'):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.se_cap is not None and not self.se_cap > 0:
            raise InvalidArgumentError(f"se_cap must be positive, got {self.se_cap}")

    def at_frequency(self, frequency_ghz: float, core_bw_ghz: Optional[float] = None) -> 'LinkParams':
        """Same link geometry evaluated on another carrier (and core width)."""
        return replace(
            self,
            frequency_ghz=frequency_ghz,
            core_bw_ghz=self.core_bw_ghz if core_bw_ghz is None else core_bw_ghz,
        )

    @property
    def effective_tx_gain_dbi(self) -> float:
        return self.tx_gain_dbi if self.tx_gain_dbi is not None else array_gain_dbi(self.tx_array)

    @property
    def effective_rx_gain_dbi(self) -> float:
        return self.rx_gain_dbi if self.rx_gain_dbi is not None else array_gain_dbi(self.rx_array)


@dataclass(frozen=True)
class LinkBudgetResult:
    tx_gain: float
    rx_gain: float
    path: PathLossBreakdown
    rx_power: float
    noise_floor: float
    snr: float
    snr_eff: float
    se: float
    core_rate: float


def noise_floor_dbm(bw_hz: float, nf_db: float) -> float:
    """
    Thermal noise power over a bandwidth plus receiver noise figure.

    Raises:
        InvalidArgumentError: If bandwidth is not positive or NF is negative
    """
    if not bw_hz > 0:
        raise InvalidArgumentError(f"Bandwidth must be positive, got {bw_hz} Hz")
    if nf_db < 0:
        raise InvalidArgumentError(f"Noise figure must be >= 0, got {nf_db} dB")
    return THERMAL_NOISE_PSD_DBM_HZ + 10 * math.log10(bw_hz) + nf_db


def received_power_dbm(tx_dbm: float, tx_gain_dbi: float, total_loss_db: float,
                       frontend_db: float, rx_gain_dbi: float) -> float:
    return tx_dbm + tx_gain_dbi - total_loss_db - frontend_db + rx_gain_dbi


def spectral_efficiency(snr_db: float, impl_loss_db: float, cap: Optional[float] = None) -> float:
    """
    Shannon spectral efficiency after an implementation-loss back-off.

    Args:
        snr_db (float): SNR in dB
        impl_loss_db (float): Back-off applied to the SNR, dB
        cap (float, optional): Upper limit in b/s/Hz (finite modulation order)

    Returns:
        float: Spectral efficiency in b/s/Hz
    """
    if impl_loss_db < 0:
        raise InvalidArgumentError(f"Implementation loss must be >= 0, got {impl_loss_db} dB")
    se = math.log2(1 + 10 ** ((snr_db - impl_loss_db) / 10))
    if cap is not None:
        se = min(cap, se)
    return se


def required_snr_db(se: float, impl_loss_db: float = 0.0) -> float:
    """SNR (dB) needed to reach a spectral efficiency after the back-off."""
    if not se > 0:
        raise InvalidArgumentError(f"Spectral efficiency must be positive, got {se}")
    return 10 * math.log10(2 ** se - 1) + impl_loss_db


def evaluate(params: LinkParams) -> LinkBudgetResult:
    """Run the full per-core budget for one set of link parameters."""
    tx_gain = params.effective_tx_gain_dbi
    rx_gain = params.effective_rx_gain_dbi
    path = path_loss(params.frequency_ghz, params.distance_m,
                     params.atm_db_per_km, params.other_path_loss_db)
    rx_power = received_power_dbm(params.tx_power_dbm, tx_gain, path.total,
                                  params.tx_frontend_loss_db, rx_gain)
    noise = noise_floor_dbm(params.core_bw_ghz * 1e9, params.rx_noise_figure_db)
    snr = rx_power - noise
    se = spectral_efficiency(snr, params.impl_loss_db, params.se_cap)
    result = LinkBudgetResult(
        tx_gain=tx_gain,
        rx_gain=rx_gain,
        path=path,
        rx_power=rx_power,
        noise_floor=noise,
        snr=snr,
        snr_eff=snr - params.impl_loss_db,
        se=se,
        core_rate=se * params.core_bw_ghz,
    )
    logger.debug(f"Link at {params.frequency_ghz} GHz, {params.distance_m} m: "
                 f"SNR {snr:.2f} dB, {result.core_rate:.3f} Gb/s per core")
    return result


def link_margin_db(result: LinkBudgetResult, params: LinkParams, target_se: float) -> float:
    """Headroom of the achieved SNR over what a target SE requires."""
    return result.snr - required_snr_db(target_se, params.impl_loss_db)


def aggregate_rate(core_rate: float, n_bw_cores: int, n_spatial_cores: int) -> float:
    """Aggregate rate (Gb/s) of identical cores stacked in bandwidth and space."""
    if n_bw_cores < 0 or n_spatial_cores < 0:
        raise InvalidArgumentError(f"Core counts must be >= 0, got {n_bw_cores} x {n_spatial_cores}")
    return core_rate * n_bw_cores * n_spatial_cores


def report_rows(params: LinkParams, result: LinkBudgetResult,
                n_bw_cores: int, n_spatial_cores: int) -> List[Tuple[str, float, str]]:
    """
    Rows of the link budget table as (parameter, value, unit), in table order.
    """
    n_cores = n_bw_cores * n_spatial_cores
    return [
        ('Transmit Power', params.tx_power_dbm, 'dBm'),
        ('Transmit Antenna Gain', result.tx_gain, 'dBi'),
        ('Carrier Frequency', params.frequency_ghz, 'GHz'),
        ('Distance', params.distance_m, 'm'),
        ('Propagation Loss', result.path.fspl, 'dB'),
        ('Atmospheric Absorption', result.path.atmospheric, 'dB'),
        ('Other path losses', result.path.other_losses, 'dB'),
        ('Tx front end loss', params.tx_frontend_loss_db, 'dB'),
        ('Receive Antenna Gain', result.rx_gain, 'dBi'),
        ('Received Power', result.rx_power, 'dBm'),
        ('Bandwidth (BW)', params.core_bw_ghz, 'GHz'),
        ('Thermal Noise PSD', THERMAL_NOISE_PSD_DBM_HZ, 'dBm/Hz'),
        ('Receiver Noise Figure', params.rx_noise_figure_db, 'dB'),
        ('Thermal Noise', result.noise_floor, 'dBm'),
        ('SNR', result.snr, 'dB'),
        ('Implementation loss', params.impl_loss_db, 'dB'),
        ('Spectral Efficiency (SE)', result.se, 'b/s/Hz'),
        ('Data rate / comm-core', result.core_rate, 'Gb/s'),
        ('Number of comm-cores', n_cores, 'cores'),
        ('Aggregate data rate', aggregate_rate(result.core_rate, n_bw_cores, n_spatial_cores) / 1000.0, 'Tb/s'),
    ]
