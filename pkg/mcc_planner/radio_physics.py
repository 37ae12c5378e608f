"""
Propagation loss, antenna array gain and beam squint.
Units at the boundary are GHz, meters, degrees and dB.
"""
import math
from dataclasses import dataclass

from mcc_planner.errors import DomainError, InvalidArgumentError

SPEED_OF_LIGHT = 299792458.0  # m/s


@dataclass(frozen=True)
class PathLossBreakdown:
    fspl: float
    atmospheric: float
    other_losses: float

    @property
    def total(self) -> float:
        return self.fspl + self.atmospheric + self.other_losses


@dataclass(frozen=True)
class AntennaArray:
    n_elements: int
    element_gain: float = 0.0

    def __post_init__(self):
        if self.n_elements < 1:
            raise InvalidArgumentError(f"Array needs at least one element, got {self.n_elements}")


def wavelength_m(f_ghz: float) -> float:
    if not f_ghz > 0:
        raise InvalidArgumentError(f"Frequency must be positive, got {f_ghz} GHz")
    return SPEED_OF_LIGHT / (f_ghz * 1e9)


def fspl_db(f_ghz: float, d_m: float) -> float:
    """
    Free-space path loss, 20*log10(4*pi*d/wavelength).

    Args:
        f_ghz (float): Carrier frequency in GHz
        d_m (float): Distance in meters

    Returns:
        float: Loss in dB

    Raises:
        InvalidArgumentError: If frequency or distance is not positive
    """
    wavelength = wavelength_m(f_ghz)
    if not d_m > 0:
        raise InvalidArgumentError(f"Distance must be positive, got {d_m} m")
    return 20 * math.log10(4 * math.pi * d_m / wavelength)


def array_gain_dbi(array: AntennaArray) -> float:
    """Element gain plus array gain, 10*log10(N)."""
    return array.element_gain + 10 * math.log10(array.n_elements)


def path_loss(f_ghz: float, d_m: float, atm_db_per_km: float = 0.0,
              other_db: float = 0.0) -> PathLossBreakdown:
    """
    Total path loss split into free space, atmospheric absorption and a
    lumped term for NLOS/reflection losses.

    Raises:
        InvalidArgumentError: If a loss term is negative or f/d not positive
    """
    if atm_db_per_km < 0:
        raise InvalidArgumentError(f"Atmospheric attenuation must be >= 0, got {atm_db_per_km} dB/km")
    if other_db < 0:
        raise InvalidArgumentError(f"Other path losses must be >= 0, got {other_db} dB")
    return PathLossBreakdown(
        fspl=fspl_db(f_ghz, d_m),
        atmospheric=atm_db_per_km * d_m / 1000.0,
        other_losses=other_db,
    )


def beam_squint_deg(theta0_deg: float, fc_ghz: float, f_ghz: float) -> float:
    """
    Pointing error of a phase-shifter steered array at frequency f when the
    phases were set for fc: arcsin((fc/f) * sin(theta0)) - theta0.

    Args:
        theta0_deg (float): Steering angle at fc, |theta0| < 90
        fc_ghz (float): Design frequency in GHz
        f_ghz (float): Operating frequency in GHz

    Returns:
        float: Squint in degrees (negative means toward broadside)

    Raises:
        InvalidArgumentError: If the angle or frequencies are out of range
        DomainError: If the beam would steer past endfire at f
    """
    if not abs(theta0_deg) < 90:
        raise InvalidArgumentError(f"Steering angle must be within (-90, 90), got {theta0_deg}")
    if not (fc_ghz > 0 and f_ghz > 0):
        raise InvalidArgumentError(f"Frequencies must be positive, got fc={fc_ghz}, f={f_ghz}")
    sine = (fc_ghz / f_ghz) * math.sin(math.radians(theta0_deg))
    if not -1.0 <= sine <= 1.0:
        raise DomainError(
            f"No real steering angle at {f_ghz} GHz for {theta0_deg} deg set at {fc_ghz} GHz"
        )
    return math.degrees(math.asin(sine)) - theta0_deg


def squint_span_deg(theta0_deg: float, fc_ghz: float, bw_ghz: float) -> float:
    """Worst-case squint magnitude at the two edges of a span centred on fc."""
    if not bw_ghz > 0:
        raise InvalidArgumentError(f"Bandwidth must be positive, got {bw_ghz} GHz")
    if not bw_ghz / 2 < fc_ghz:
        raise InvalidArgumentError(f"Span of {bw_ghz} GHz reaches below 0 Hz around {fc_ghz} GHz")
    lower = beam_squint_deg(theta0_deg, fc_ghz, fc_ghz - bw_ghz / 2)
    upper = beam_squint_deg(theta0_deg, fc_ghz, fc_ghz + bw_ghz / 2)
    return max(abs(lower), abs(upper))
