"""
Text and CSV rendering for command output.
Numbers use fixed decimals and '.' separators so output is byte-stable.
"""
import csv
import io
from collections import OrderedDict
from typing import Iterable, List, Sequence, Tuple

from config import Config
from mcc_planner.planner import PLAN_CSV_HEADER, SIMULATION_CSV_HEADER

DB_UNITS = ('dB', 'dBm', 'dBi', 'dBm/Hz')
RATE_UNITS = ('Gb/s', 'Tb/s', 'b/s/Hz')
MILLI_UNITS = ('GHz', 'deg')  # MHz / millidegree resolution
ENERGY_UNITS = ('J',)
WATT_UNITS = ('W',)


def format_fixed(value: float, decimals: int) -> str:
    text = f"{value:.{decimals}f}"
    # Never print a negative zero.
    if text.startswith('-') and float(text) == 0:
        text = text[1:]
    return text


def format_value(value, unit: str) -> str:
    if unit in ('cores', 'count'):
        return str(int(value))
    if unit in WATT_UNITS:
        return format_fixed(value, Config.WATT_DECIMALS)
    if unit in DB_UNITS:
        return format_fixed(value, Config.DB_DECIMALS)
    if unit in RATE_UNITS:
        return format_fixed(value, Config.RATE_DECIMALS)
    if unit in MILLI_UNITS:
        return format_fixed(value, 3)
    if unit in ENERGY_UNITS:
        return f"{value:.3e}"
    return format_fixed(value, 2)


def format_number(value: float) -> str:
    return f"{value:.12g}"


def render_table(title: str, rows: Sequence[Tuple[str, object, str]]) -> str:
    """Two-column parameter/value report."""
    lines = [title, '=' * len(title)]
    for name, value, unit in rows:
        lines.append(f"{name:<28}{format_value(value, unit):>12} {unit}".rstrip())
    return '\n'.join(lines) + '\n'


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def table_csv(rows: Sequence[Tuple[str, object, str]]) -> str:
    return render_csv(('parameter', 'value', 'unit'),
                      ((name, format_value(value, unit), unit) for name, value, unit in rows))


def plan_csv(config) -> str:
    rows = [
        (channel_id, band_id, format_fixed(f_center, 3), spatial_index,
         format_fixed(rate, Config.RATE_DECIMALS), format_fixed(power, Config.WATT_DECIMALS))
        for channel_id, band_id, f_center, spatial_index, rate, power in config.csv_rows()
    ]
    return render_csv(PLAN_CSV_HEADER, rows)


def simulation_csv(series) -> str:
    rows = [
        (format_fixed(t, 1), format_fixed(demand, Config.RATE_DECIMALS), active,
         format_fixed(served, Config.RATE_DECIMALS), format_fixed(power, Config.WATT_DECIMALS))
        for t, demand, active, served, power in series.csv_rows()
    ]
    return render_csv(SIMULATION_CSV_HEADER, rows)


def channel_summary(config) -> List[str]:
    """One line per channel: spatial cores used and rate contributed."""
    by_channel = OrderedDict()
    for core in sorted(config.selected, key=lambda c: (c.channel.f_center, c.channel.id, c.spatial_index)):
        entry = by_channel.setdefault(core.channel.id, [core.channel, 0, 0.0])
        entry[1] += 1
        entry[2] += core.rate
    lines = []
    for channel, n_spatial, rate in by_channel.values():
        lines.append(f"  {channel.id:<12}{channel.band_id:<8}{format_fixed(channel.f_center, 3):>10} GHz"
                     f"{n_spatial:>4} x spatial{format_fixed(rate, Config.RATE_DECIMALS):>10} Gb/s")
    return lines
