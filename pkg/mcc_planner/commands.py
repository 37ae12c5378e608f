"""
Command-line surface: one click command per report.

Exit codes: 0 success, 1 infeasible plan, 2 invalid scenario or arguments,
3 I/O failure.
"""
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

import click

from mcc_planner.errors import InfeasiblePlanError
from mcc_planner.link_budget import evaluate, link_margin_db, report_rows
from mcc_planner.planner import (core_combinations, duplex_split, enumerate_candidates, load_trace_csv,
                                 omnify_project, plan_exact, plan_greedy, simulate_gating, synth_trace)
from mcc_planner.power_model import (PowerBreakdown, conversion_power_ratio, conversion_power_w, core_power_w,
                                     fom_at, pa_power_total_w)
from mcc_planner.radio_physics import beam_squint_deg, squint_span_deg
from mcc_planner.reports import (channel_summary, format_fixed, format_number, format_value, plan_csv,
                                 render_csv, render_table, simulation_csv, table_csv)
from mcc_planner.scenario import load_scenario
from mcc_planner.spectrum import BandGroup, builtin_registry, spectrum_utilization, total_bandwidth

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INVALID = 2
EXIT_IO = 3

csv_option = click.option('--csv', 'csv_path', default=None, metavar='PATH',
                          help='Also write the report as CSV to PATH.')


@contextmanager
def exit_codes():
    """Turn domain and I/O failures into the documented exit codes."""
    try:
        yield
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_IO)
    except ValueError as e:
        logger.error(f"Invalid input: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_INVALID)
    except (click.ClickException, click.exceptions.Exit, click.Abort):
        raise
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_INVALID)


def write_csv(path, text):
    if path:
        Path(path).write_text(text, encoding='utf-8')
        logger.info(f"Wrote CSV report to {path}")


@click.command('linkbudget')
@click.argument('scenario_path')
@click.option('--target-se', type=float, default=None, metavar='B/S/HZ',
              help='Also report the SNR margin over this spectral efficiency.')
@csv_option
def linkbudget(scenario_path, target_se, csv_path):
    """Per comm-core link budget for a scenario."""
    with exit_codes():
        scenario = load_scenario(scenario_path)
        result = evaluate(scenario.link)
        rows = report_rows(scenario.link, result, scenario.n_bw_cores, scenario.n_spatial_max)
        if target_se is not None:
            rows += [
                ('Target SE', target_se, 'b/s/Hz'),
                ('Link margin', link_margin_db(result, scenario.link, target_se), 'dB'),
            ]
        click.echo(render_table('Link budget per comm-core', rows), nl=False)
        write_csv(csv_path, table_csv(rows))


@click.command('plan')
@click.argument('scenario_path')
@click.option('--method', type=click.Choice(['greedy', 'exact']), default=None,
              help='Selection method; defaults to the scenario [plan] method.')
@csv_option
@click.pass_obj
def plan(config, scenario_path, method, csv_path):
    """Choose comm-cores that meet the scenario's target rate."""
    with exit_codes():
        scenario = load_scenario(scenario_path)
        method = method or scenario.method
        p_core = core_power_w(scenario.pa_per_core, scenario.fom, scenario.enob, scenario.core_bw * 1e9)
        candidates = enumerate_candidates(
            scenario.registry(), scenario.core_bw, scenario.n_spatial_max, scenario.link, p_core,
            groups=scenario.groups, evaluate_at_carrier=scenario.rate_reference == 'carrier',
        )

        feasible = True
        try:
            if method == 'exact':
                chosen = plan_exact(candidates, scenario.target_rate, scenario.power_budget,
                                    limit=config.EXHAUSTIVE_LIMIT)
            else:
                chosen = plan_greedy(candidates, scenario.target_rate, scenario.power_budget)
        except InfeasiblePlanError as e:
            chosen = e.best
            feasible = False

        n_cores = chosen.n_cores
        ul_cores, dl_cores = duplex_split(n_cores, scenario.ul_share)
        breakdown = PowerBreakdown.for_cores(n_cores, scenario.pa_per_core, scenario.fom, scenario.enob,
                                             scenario.core_bw * 1e9, scenario.overhead_factor)
        rows = [
            ('Target rate', scenario.target_rate, 'Gb/s'),
            ('Selected comm-cores', n_cores, 'cores'),
            ('Bandwidth cores', len({core.channel.id for core in chosen.selected}), 'cores'),
            ('Spatial cores (max)', max((core.spatial_index + 1 for core in chosen.selected), default=0), 'cores'),
            ('Uplink cores', ul_cores, 'cores'),
            ('Downlink cores', dl_cores, 'cores'),
            ('Aggregate data rate', chosen.total_rate, 'Gb/s'),
            ('PA power', breakdown.pa, 'W'),
            ('Conversion power (I/Q)', breakdown.conversion, 'W'),
            ('Core power total', chosen.total_power, 'W'),
            ('System power estimate', breakdown.system_estimate, 'W'),
        ]
        click.echo(render_table(f'MCC plan ({method})', rows), nl=False)
        if feasible:
            click.echo('Status: feasible')
        else:
            click.echo(f"Status: INFEASIBLE, best achievable {format_value(chosen.total_rate, 'Gb/s')} Gb/s")
        for line in channel_summary(chosen):
            click.echo(line)
        write_csv(csv_path, plan_csv(chosen))

    if not feasible:
        sys.exit(EXIT_INFEASIBLE)


@click.command('simulate')
@click.argument('scenario_path')
@csv_option
def simulate(scenario_path, csv_path):
    """Per-step core gating against the scenario's traffic, as CSV."""
    with exit_codes():
        scenario = load_scenario(scenario_path)
        traffic = scenario.traffic
        core_rate = evaluate(scenario.link).core_rate
        p_core = core_power_w(scenario.pa_per_core, scenario.fom, scenario.enob, scenario.core_bw * 1e9)
        n_max = traffic.n_max if traffic.n_max is not None else scenario.n_bw_cores * scenario.n_spatial_max

        if traffic.trace_path:
            trace = load_trace_csv(traffic.trace_path)
        else:
            trace = synth_trace(traffic.peak_gbps, traffic.steps, traffic.profile, traffic.seed,
                                ul_share=scenario.ul_share, step_s=traffic.step_s)

        series = simulate_gating(trace, core_rate, p_core, n_max)
        text = simulation_csv(series)
        click.echo(text, nl=False)
        write_csv(csv_path, text)

        always_on = series.always_on_energy_j(n_max, p_core)
        if always_on > 0:
            saved = 1 - series.total_energy_j() / always_on
            logger.info(f"Gating uses {series.total_energy_j():.1f} J vs {always_on:.1f} J always on "
                        f"({saved:.1%} saved)")


@click.command('spectrum')
@click.argument('view', type=click.Choice(['list', 'totals']))
@click.option('--scenario', 'scenario_path', default=None, metavar='PATH',
              help='Scenario whose [spectrum] bands are added to the built-in registry.')
@csv_option
def spectrum(view, scenario_path, csv_path):
    """List candidate bands or total them per band group."""
    with exit_codes():
        registry = load_scenario(scenario_path).registry() if scenario_path else builtin_registry()

        if view == 'list':
            header = ('band_id', 'f_low_ghz', 'f_high_ghz', 'bandwidth_ghz', 'group', 'label')
            rows = [
                (band.id, format_fixed(band.f_low, 3), format_fixed(band.f_high, 3),
                 format_fixed(band.bandwidth_ghz, 3), band.group.value, band.label)
                for band in registry
            ]
            click.echo(f"{'Band':<10}{'From':>10}{'To':>10}{'Width':>9}  {'Group':<6}Label")
            for band_id, f_low, f_high, width, group, label in rows:
                click.echo(f"{band_id:<10}{f_low:>10}{f_high:>10}{width:>9}  {group:<6}{label}".rstrip())
            write_csv(csv_path, render_csv(header, rows))
            return

        rows = []
        for group in BandGroup:
            rows.append((f'{group.value.capitalize()}-band spectrum', total_bandwidth(registry, group), 'GHz'))
            rows.append((f'{group.value.capitalize()}-band utilization',
                         100 * spectrum_utilization(registry, group), '%'))
        click.echo(render_table('Spectrum totals', rows), nl=False)
        write_csv(csv_path, table_csv(rows))


@click.command('project')
@click.argument('v0', type=float)
@click.argument('y0', type=float)
@click.argument('y1', type=float)
@csv_option
def project(v0, y0, y1, csv_path):
    """Project V0 from year Y0 to Y1, ten times every five years."""
    with exit_codes():
        value = omnify_project(v0, y0, y1)
        click.echo(format_number(value))
        write_csv(csv_path, render_csv(('v0', 'y0', 'y1', 'value'),
                                       [(format_number(v0), format_number(y0), format_number(y1),
                                         format_number(value))]))


@click.command('squint')
@click.argument('theta0', type=float)
@click.argument('fc', type=float)
@click.argument('bw', type=float)
@click.option('--span', default=32.0, show_default=True,
              help='Monolithic span (GHz) to compare against.')
@csv_option
def squint(theta0, fc, bw, span, csv_path):
    """Beam squint at the edges of a BW-GHz core centred on FC."""
    with exit_codes():
        rows = [
            ('Steering angle', theta0, 'deg'),
            ('Design frequency', fc, 'GHz'),
            ('Core bandwidth', bw, 'GHz'),
            ('Squint at lower edge', beam_squint_deg(theta0, fc, fc - bw / 2), 'deg'),
            ('Squint at upper edge', beam_squint_deg(theta0, fc, fc + bw / 2), 'deg'),
            ('Worst-case core squint', squint_span_deg(theta0, fc, bw), 'deg'),
            ('Monolithic span', span, 'GHz'),
            ('Worst-case span squint', squint_span_deg(theta0, fc, span), 'deg'),
        ]
        click.echo(render_table('Beam squint', rows), nl=False)
        write_csv(csv_path, table_csv(rows))


@click.command('power')
@click.argument('scenario_path')
@csv_option
def power(scenario_path, csv_path):
    """Multi-core vs. monolithic conversion power and PA totals."""
    with exit_codes():
        scenario = load_scenario(scenario_path)
        core_hz = scenario.core_bw * 1e9
        total_hz = scenario.n_bw_cores * core_hz
        n_cores = scenario.n_bw_cores * scenario.n_spatial_max
        conversion = 0.0
        if scenario.n_bw_cores > 0:
            conversion = scenario.n_spatial_max * conversion_power_w(total_hz, core_hz, scenario.fom, scenario.enob)
        breakdown = PowerBreakdown(pa_power_total_w(n_cores, scenario.pa_per_core), conversion,
                                   scenario.overhead_factor)

        rows = [
            ('Core bandwidth', scenario.core_bw, 'GHz'),
            ('Bandwidth cores', scenario.n_bw_cores, 'cores'),
            ('Spatial cores', scenario.n_spatial_max, 'cores'),
            ('Total bandwidth', scenario.n_bw_cores * scenario.core_bw, 'GHz'),
        ]
        if scenario.n_bw_cores > 0:
            rows += [
                ('FOM at core rate', fom_at(scenario.fom, core_hz), 'J'),
                ('FOM at total rate', fom_at(scenario.fom, total_hz), 'J'),
                ('Conversion power ratio', conversion_power_ratio(total_hz, core_hz, scenario.fom, scenario.enob), 'x'),
                ('Multi-core conversion power', breakdown.conversion, 'W'),
                ('Monolithic conversion power',
                 scenario.n_spatial_max * conversion_power_w(total_hz, total_hz, scenario.fom, scenario.enob), 'W'),
            ]
        rows += [
            ('PA power', breakdown.pa, 'W'),
            ('PA and conversion power', breakdown.rf_and_conversion, 'W'),
            ('System power estimate', breakdown.system_estimate, 'W'),
        ]
        click.echo(render_table('Power', rows), nl=False)
        write_csv(csv_path, table_csv(rows))


@click.command('combinations')
@click.argument('scenario_path')
@click.option('--max-bw-cores', default=64, show_default=True)
@click.option('--max-spatial-cores', default=16, show_default=True)
def combinations(scenario_path, max_bw_cores, max_spatial_cores):
    """BW x spatial core counts reaching the target with the fewest cores."""
    with exit_codes():
        scenario = load_scenario(scenario_path)
        core_rate = evaluate(scenario.link).core_rate
        pairs = core_combinations(core_rate, scenario.target_rate, max_bw_cores, max_spatial_cores)
        if not pairs:
            click.echo('No combination reaches the target')
            sys.exit(EXIT_INFEASIBLE)
        click.echo(f"{'BW cores':>9}{'Spatial':>9}{'Cores':>7}{'Rate Gb/s':>12}")
        for n_bw, n_spatial in pairs:
            rate = core_rate * n_bw * n_spatial
            click.echo(f"{n_bw:>9}{n_spatial:>9}{n_bw * n_spatial:>7}{format_fixed(rate, 2):>12}")


COMMANDS = (linkbudget, plan, simulate, spectrum, project, squint, power, combinations)


def build_group(config_class):
    """Assemble the `mcc` command group around a configuration class."""

    @click.group(name='mcc', help='Multi-comm-core terabit link planner.')
    @click.option('--verbose', is_flag=True, help='Enable debug logging.')
    @click.pass_context
    def cli(ctx, verbose):
        ctx.obj = config_class
        level = logging.DEBUG if verbose else getattr(logging, config_class.LOG_LEVEL)
        logging.getLogger('mcc_planner').setLevel(level)

    for command in COMMANDS:
        cli.add_command(command)
    return cli
