"""
Spectrum registry
Holds the mid-band and high-band candidate bands, classifies frequencies into
band groups and carves bands into comm-core-width channels.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from mcc_planner.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

# Frequencies are kept to 1 Hz resolution (9 decimals in GHz) so that sums
# of table widths come out exact.
GHZ_DECIMALS = 9

LOW_MID_EDGE_GHZ = 6.0
MID_HIGH_EDGE_GHZ = 56.0
HIGH_TOP_GHZ = 164.0


class BandGroup(Enum):
    LOW = 'low'
    MID = 'mid'
    HIGH = 'high'


def classify(f_ghz: float) -> BandGroup:
    """
    Classify a frequency into its band group.

    Args:
        f_ghz (float): Frequency in GHz

    Returns:
        BandGroup: LOW below 6 GHz, MID for 6-56 GHz inclusive, HIGH above

    Raises:
        InvalidArgumentError: If the frequency is not positive
    """
    if not f_ghz > 0:
        raise InvalidArgumentError(f"Frequency must be positive, got {f_ghz} GHz")
    if f_ghz < LOW_MID_EDGE_GHZ:
        return BandGroup.LOW
    if f_ghz <= MID_HIGH_EDGE_GHZ:
        return BandGroup.MID
    return BandGroup.HIGH


def group_span_ghz(group: BandGroup) -> Tuple[float, float]:
    """Nominal frequency edges of a band group."""
    return {
        BandGroup.LOW: (0.0, LOW_MID_EDGE_GHZ),
        BandGroup.MID: (LOW_MID_EDGE_GHZ, MID_HIGH_EDGE_GHZ),
        BandGroup.HIGH: (MID_HIGH_EDGE_GHZ, HIGH_TOP_GHZ),
    }[group]


@dataclass(frozen=True)
class Band:
    id: str
    f_low: float
    f_high: float
    label: str = ''

    def __post_init__(self):
        if not self.id:
            raise InvalidArgumentError("Band id must not be empty")
        if not self.f_low > 0:
            raise InvalidArgumentError(f"Band {self.id}: f_low must be positive, got {self.f_low}")
        if not self.f_low < self.f_high:
            raise InvalidArgumentError(
                f"Band {self.id}: f_low ({self.f_low}) must be below f_high ({self.f_high})"
            )
        # Every channel carved from the band must share the group of f_low.
        # 56 GHz itself is mid-band, so a band may end on either edge but
        # only start on the 6 GHz one.
        if self.f_low < LOW_MID_EDGE_GHZ < self.f_high:
            raise InvalidArgumentError(self._edge_message(LOW_MID_EDGE_GHZ))
        if self.f_low <= MID_HIGH_EDGE_GHZ < self.f_high:
            raise InvalidArgumentError(self._edge_message(MID_HIGH_EDGE_GHZ))

    def _edge_message(self, edge: float) -> str:
        return f"Band {self.id}: {self.f_low}-{self.f_high} GHz crosses the {edge:g} GHz group edge"

    @property
    def bandwidth_ghz(self) -> float:
        return round(self.f_high - self.f_low, GHZ_DECIMALS)

    @property
    def group(self) -> BandGroup:
        return classify(self.f_low)


@dataclass(frozen=True)
class Channel:
    id: str
    band_id: str
    f_center: float
    bandwidth: float

    @property
    def f_low(self) -> float:
        return round(self.f_center - self.bandwidth / 2, GHZ_DECIMALS)

    @property
    def f_high(self) -> float:
        return round(self.f_center + self.bandwidth / 2, GHZ_DECIMALS)


class SpectrumRegistry:
    """Ordered, non-overlapping collection of bands."""

    def __init__(self, bands: Iterable[Band] = ()):
        ordered = sorted(bands, key=lambda b: (b.f_low, b.f_high, b.id))
        seen_ids = set()
        for band in ordered:
            if band.id in seen_ids:
                raise InvalidArgumentError(f"Duplicate band id: {band.id}")
            seen_ids.add(band.id)
        for lower, upper in zip(ordered, ordered[1:]):
            if lower.f_high > upper.f_low:
                raise InvalidArgumentError(
                    f"Bands {lower.id} ({lower.f_low}-{lower.f_high}) and "
                    f"{upper.id} ({upper.f_low}-{upper.f_high}) overlap"
                )
        self._bands = tuple(ordered)

    @property
    def bands(self) -> Tuple[Band, ...]:
        return self._bands

    def __len__(self):
        return len(self._bands)

    def __iter__(self):
        return iter(self._bands)

    def bands_in(self, group: BandGroup) -> List[Band]:
        return [band for band in self._bands if band.group is group]

    def find(self, band_id: str) -> Optional[Band]:
        for band in self._bands:
            if band.id == band_id:
                return band
        return None

    def with_bands(self, bands: Iterable[Band]) -> 'SpectrumRegistry':
        """
        Return a new registry holding these bands plus the given ones.

        Raises:
            InvalidArgumentError: If an added band overlaps an existing one
        """
        extra = list(bands)
        if extra:
            logger.info(f"Adding {len(extra)} user-defined bands to the registry")
        return SpectrumRegistry(list(self._bands) + extra)


# Mid-band and high-band candidates. The two 90 GHz ranges are kept as
# separate rows so carving never bridges the 94.0-94.1 GHz gap.
_CANDIDATE_BANDS = (
    ('24a', 24.25, 24.45, '24 GHz Bands'),
    ('24b', 25.05, 25.25, '24 GHz Bands'),
    ('lmds-a', 27.5, 28.35, 'LMDS Band'),
    ('lmds-b', 29.1, 29.25, 'LMDS Band'),
    ('lmds-c', 31.0, 31.3, 'LMDS Band'),
    ('37', 37.0, 38.6, '37/42 GHz Bands'),
    ('39', 38.6, 40.0, '39 GHz Band'),
    ('42', 42.0, 42.5, '37/42 GHz Bands'),
    ('60a', 57.0, 64.0, '60 GHz'),
    ('60b', 64.0, 71.0, '60 GHz'),
    ('70', 71.0, 76.0, '70/80 GHz'),
    ('80', 81.0, 86.0, '70/80 GHz'),
    ('90a', 92.0, 94.0, '90 GHz'),
    ('90b', 94.1, 95.0, '90 GHz'),
    ('95', 95.0, 100.0, '95 GHz'),
    ('105a', 102.0, 105.0, '105 GHz'),
    ('105b', 105.0, 109.5, '105 GHz'),
    ('112', 111.8, 114.25, '112 GHz'),
    ('122', 122.25, 123.0, '122 GHz'),
    ('130', 130.0, 134.0, '130 GHz'),
    ('140', 141.0, 148.5, '140 GHz'),
    ('150', 151.5, 155.5, '150/160 GHz'),
    ('155', 155.5, 158.5, '150/160 GHz'),
    ('160', 158.5, 164.0, '150/160 GHz'),
)


def builtin_registry() -> SpectrumRegistry:
    """Registry of the mid-band and high-band spectrum candidates."""
    return SpectrumRegistry(Band(*row) for row in _CANDIDATE_BANDS)


def total_bandwidth(registry: SpectrumRegistry, group: BandGroup) -> float:
    """Sum of band widths (GHz) over the registry bands in a group."""
    widths = [band.bandwidth_ghz for band in registry if band.group is group]
    return round(math.fsum(widths), GHZ_DECIMALS)


def spectrum_utilization(registry: SpectrumRegistry, group: BandGroup) -> float:
    """Fraction of a group's nominal span covered by registry bands."""
    low, high = group_span_ghz(group)
    return total_bandwidth(registry, group) / (high - low)


def carve_channels(band: Band, core_bw: float) -> List[Channel]:
    """
    Carve a band into channels of one comm-core width.

    Channels are packed from the band's low edge upward; spectrum left over
    at the top of the band stays unassigned.

    Args:
        band (Band): Band to carve
        core_bw (float): Channel width in GHz

    Returns:
        list: Channels sorted by f_center ascending

    Raises:
        InvalidArgumentError: If core_bw is not positive
    """
    if not core_bw > 0:
        raise InvalidArgumentError(f"Core bandwidth must be positive, got {core_bw} GHz")

    # Tolerance keeps e.g. 0.3 / 0.1 from flooring to 2.
    count = math.floor(band.bandwidth_ghz / core_bw + 1e-9)
    channels = [
        Channel(
            id=f"{band.id}-{index}",
            band_id=band.id,
            f_center=round(band.f_low + (index + 0.5) * core_bw, GHZ_DECIMALS),
            bandwidth=core_bw,
        )
        for index in range(count)
    ]

    remainder = round(band.bandwidth_ghz - count * core_bw, GHZ_DECIMALS)
    if remainder > 0:
        logger.debug(f"Band {band.id}: {remainder} GHz left unassigned after carving {count} channels")
    return channels


def carve_registry(registry: SpectrumRegistry, core_bw: float,
                   groups: Optional[Iterable[BandGroup]] = None) -> List[Channel]:
    """Carve every band (optionally only those in the given groups)."""
    wanted = set(groups) if groups is not None else set(BandGroup)
    bands = [band for band in registry if band.group in wanted]
    channels = []
    for band in bands:
        channels.extend(carve_channels(band, core_bw))
    channels.sort(key=lambda ch: (ch.f_center, ch.id))
    logger.debug(f"Carved {len(channels)} channels of {core_bw} GHz")

    unassigned = round(math.fsum(band.bandwidth_ghz for band in bands) - len(channels) * core_bw, GHZ_DECIMALS)
    if unassigned > 0:
        logger.warning(f"{unassigned} GHz of band spectrum left unassigned by {core_bw} GHz channels")
    return channels


def parse_band_line(value: str) -> Band:
    """
    Parse a band encoded as "<id>,<f_low>,<f_high>,<label>".

    Raises:
        InvalidArgumentError: If the value is malformed or the band is invalid
    """
    parts = [part.strip() for part in value.split(',', 3)]
    if len(parts) < 3:
        raise InvalidArgumentError(f"Band must be '<id>,<f_low>,<f_high>,<label>', got '{value}'")
    try:
        f_low = float(parts[1])
        f_high = float(parts[2])
    except ValueError:
        raise InvalidArgumentError(f"Band frequencies must be numbers, got '{value}'")
    label = parts[3] if len(parts) == 4 else ''
    return Band(parts[0], f_low, f_high, label)
