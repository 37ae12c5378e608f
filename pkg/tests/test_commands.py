"""
Tests for the mcc command group: reports, CSV output and exit codes
"""
from pathlib import Path

import pytest
from click.testing import CliRunner

from mcc_planner import create_cli

HERE = Path(__file__).resolve().parent
SCENARIOS = HERE.parent / 'scenarios'
GOLDEN = HERE / 'golden'
TABLE2 = str(SCENARIOS / 'table2.scenario')

SMALL_LINK = """
[link]
frequency_ghz = 100
distance_m = 200
"""


@pytest.fixture
def cli():
    """The mcc command group"""
    return create_cli()


@pytest.fixture
def runner():
    """Click test runner"""
    return CliRunner()


@pytest.fixture
def write_scenario(tmp_path):
    """Write scenario text to a temporary file and return its path"""
    def write(text, name='site.scenario'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def table_line(name, value, unit):
    return f"{name:<28}{value:>12} {unit}"


class TestLinkBudget:
    """linkbudget command"""

    def test_matches_golden_report(self, cli, runner):
        """Test the reference link report byte for byte"""
        result = runner.invoke(cli, ['linkbudget', TABLE2])
        assert result.exit_code == 0
        assert result.stdout == (GOLDEN / 'table2_linkbudget.txt').read_text()

    def test_matches_golden_csv(self, cli, runner, tmp_path):
        """Test the CSV report byte for byte"""
        out = tmp_path / 'budget.csv'
        result = runner.invoke(cli, ['linkbudget', TABLE2, '--csv', str(out)])
        assert result.exit_code == 0
        assert out.read_text() == (GOLDEN / 'table2_linkbudget.csv').read_text()

    def test_repeatable(self, cli, runner):
        """Test two runs print identical output"""
        first = runner.invoke(cli, ['linkbudget', TABLE2]).stdout
        assert runner.invoke(cli, ['linkbudget', TABLE2]).stdout == first

    def test_target_se_margin(self, cli, runner):
        """Test the margin of the reference link over 4 b/s/Hz"""
        result = runner.invoke(cli, ['linkbudget', TABLE2, '--target-se', '4'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        golden = (GOLDEN / 'table2_linkbudget.txt').read_text().splitlines()
        assert lines[:len(golden)] == golden
        assert lines[-2] == table_line('Target SE', '4.00', 'b/s/Hz')
        assert lines[-1].startswith('Link margin')
        assert float(lines[-1][28:40]) == pytest.approx(5.77, abs=0.01)

    def test_invalid_target_se(self, cli, runner):
        """Test a non-positive target SE exits 2"""
        assert runner.invoke(cli, ['linkbudget', TABLE2, '--target-se', '0']).exit_code == 2

    def test_missing_file(self, cli, runner, tmp_path):
        """Test an unreadable scenario exits 3"""
        result = runner.invoke(cli, ['linkbudget', str(tmp_path / 'absent.scenario')])
        assert result.exit_code == 3

    def test_invalid_scenario(self, cli, runner, write_scenario):
        """Test a negative distance exits 2 naming the line and key"""
        path = write_scenario("[link]\nfrequency_ghz = 100\ndistance_m = -5\n")
        result = runner.invoke(cli, ['linkbudget', path])
        assert result.exit_code == 2
        assert 'line 3: link.distance_m' in result.output

    def test_empty_scenario(self, cli, runner, write_scenario):
        """Test an empty scenario exits 2"""
        result = runner.invoke(cli, ['linkbudget', write_scenario("")])
        assert result.exit_code == 2
        assert 'frequency_ghz' in result.output


class TestPlan:
    """plan command"""

    def test_terabit_plan(self, cli, runner):
        """Test 256 cores split evenly, 25.6 W of PA power"""
        result = runner.invoke(cli, ['plan', TABLE2])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[0] == 'MCC plan (greedy)'
        assert table_line('Selected comm-cores', '256', 'cores') in lines
        assert table_line('Bandwidth cores', '32', 'cores') in lines
        assert table_line('Spatial cores (max)', '8', 'cores') in lines
        assert table_line('Uplink cores', '128', 'cores') in lines
        assert table_line('Downlink cores', '128', 'cores') in lines
        assert table_line('Conversion power (I/Q)', '131.072', 'W') in lines
        assert table_line('PA power', '25.600', 'W') in lines
        assert table_line('System power estimate', '256.000', 'W') in lines
        assert 'Status: feasible' in lines

    def test_plan_csv(self, cli, runner, tmp_path):
        """Test one CSV row per selected core"""
        out = tmp_path / 'plan.csv'
        result = runner.invoke(cli, ['plan', TABLE2, '--csv', str(out)])
        assert result.exit_code == 0
        rows = out.read_text().splitlines()
        assert rows[0] == 'channel_id,band_id,f_center_ghz,spatial_index,rate_gbps,power_w'
        assert len(rows) == 257
        assert rows[1].startswith('60a-0,60a,57.500,0,')

    def test_infeasible_target(self, cli, runner, write_scenario):
        """Test an unreachable target exits 1 and reports the best rate"""
        text = Path(TABLE2).read_text().replace('target_rate_gbps = 1497', 'target_rate_gbps = 5000')
        result = runner.invoke(cli, ['plan', write_scenario(text)])
        assert result.exit_code == 1
        assert 'Status: INFEASIBLE, best achievable' in result.stdout
        assert table_line('Selected comm-cores', '504', 'cores') in result.stdout.splitlines()

    def test_exact_refuses_large_search(self, cli, runner):
        """Test exhaustive search over 504 candidates exits 2"""
        result = runner.invoke(cli, ['plan', TABLE2, '--method', 'exact'])
        assert result.exit_code == 2
        assert 'limited to 20 candidates' in result.output

    def test_exact_small_search(self, cli, runner, write_scenario):
        """Test exact selection on a two-candidate low-band scenario"""
        path = write_scenario(
            "[link]\nfrequency_ghz = 3.5\ndistance_m = 100\n"
            "[spectrum]\ngroups = low\nband = n78,3.3,3.8,C-band\n"
            "[cores]\ncore_bw_ghz = 0.5\nn_spatial_max = 2\n"
            "[plan]\ntarget_rate_gbps = 1\nmethod = exact\n"
        )
        result = runner.invoke(cli, ['plan', path])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == 'MCC plan (exact)'
        assert table_line('Selected comm-cores', '1', 'cores') in result.stdout.splitlines()


class TestSimulate:
    """simulate command"""

    def test_three_and_a_half_cores(self, cli, runner, write_scenario):
        """Test 7 Gb/s on 2 Gb/s cores runs 4 cores"""
        path = write_scenario(SMALL_LINK + "se_cap = 2\n[traffic]\nprofile = flat\npeak_gbps = 7\nsteps = 3\n")
        result = runner.invoke(cli, ['simulate', path])
        assert result.exit_code == 0
        assert result.stdout == (
            "t_s,demand_gbps,active_cores,served_gbps,power_w\n"
            "0.0,7.00,4,7.00,2.448\n"
            "3600.0,7.00,4,7.00,2.448\n"
            "7200.0,7.00,4,7.00,2.448\n"
        )

    def test_deterministic(self, cli, runner):
        """Test the seeded diurnal trace gives identical runs"""
        first = runner.invoke(cli, ['simulate', TABLE2])
        second = runner.invoke(cli, ['simulate', TABLE2])
        assert first.exit_code == 0
        assert first.stdout == second.stdout
        assert len(first.stdout.splitlines()) == 25

    def test_trace_file(self, cli, runner, write_scenario, tmp_path):
        """Test a trace named relative to the scenario"""
        (tmp_path / 'trace.csv').write_text("t_s,ul_gbps,dl_gbps\n0,1,2\n60,0,0\n")
        path = write_scenario(SMALL_LINK + "se_cap = 2\n[traffic]\ntrace_path = trace.csv\n")
        result = runner.invoke(cli, ['simulate', path])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[1:] == ['0.0,3.00,2,3.00,1.224', '60.0,0.00,0,0.00,0.000']

    def test_malformed_trace(self, cli, runner, write_scenario, tmp_path):
        """Test a malformed trace exits 2"""
        (tmp_path / 'trace.csv').write_text("t_s,ul_gbps\n0,1\n")
        path = write_scenario(SMALL_LINK + "[traffic]\ntrace_path = trace.csv\n")
        assert runner.invoke(cli, ['simulate', path]).exit_code == 2

    def test_missing_trace(self, cli, runner, write_scenario):
        """Test an unreadable trace exits 3"""
        path = write_scenario(SMALL_LINK + "[traffic]\ntrace_path = absent.csv\n")
        assert runner.invoke(cli, ['simulate', path]).exit_code == 3


class TestSpectrum:
    """spectrum command"""

    def test_totals(self, cli, runner):
        """Test group totals of the built-in registry"""
        result = runner.invoke(cli, ['spectrum', 'totals'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert table_line('Low-band spectrum', '0.000', 'GHz') in lines
        assert table_line('Mid-band spectrum', '5.200', 'GHz') in lines
        assert table_line('High-band spectrum', '66.600', 'GHz') in lines

    def test_list(self, cli, runner):
        """Test one line per band after the header"""
        result = runner.invoke(cli, ['spectrum', 'list'])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert len(lines) == 25
        assert lines[1].split()[:5] == ['24a', '24.250', '24.450', '0.200', 'mid']

    def test_list_with_scenario_bands(self, cli, runner, write_scenario, tmp_path):
        """Test scenario bands join the listing and the CSV"""
        path = write_scenario(SMALL_LINK + "[spectrum]\nband = n78,3.3,3.8,C-band\n")
        out = tmp_path / 'bands.csv'
        result = runner.invoke(cli, ['spectrum', 'list', '--scenario', path, '--csv', str(out)])
        assert result.exit_code == 0
        assert result.stdout.splitlines()[1].startswith('n78')
        assert out.read_text().splitlines()[1] == 'n78,3.300,3.800,0.500,low,C-band'

    def test_verbose(self, cli, runner):
        """Test the verbose flag is accepted"""
        assert runner.invoke(cli, ['--verbose', 'spectrum', 'totals']).exit_code == 0


class TestSmallCommands:
    """project, squint, power and combinations"""

    def test_project(self, cli, runner):
        """Test 1 unit in 2013 becomes 1000 in 2028"""
        result = runner.invoke(cli, ['project', '1', '2013', '2028'])
        assert result.exit_code == 0
        assert result.stdout == '1000\n'

    @pytest.mark.parametrize("args, expected", [
        (['1', '2013', '2018'], 10.0),
        (['1e6', '2000', '2030'], 1e12),
    ])
    def test_project_decades(self, cli, runner, args, expected):
        """Test tenfold growth every five years"""
        result = runner.invoke(cli, ['project'] + args)
        assert result.exit_code == 0
        assert float(result.stdout) == pytest.approx(expected, rel=1e-12)

    def test_squint(self, cli, runner):
        """Test a 1 GHz core squints less than a 32 GHz span"""
        result = runner.invoke(cli, ['squint', '30', '100', '1'])
        assert result.exit_code == 0
        values = {line[:28].strip(): float(line[28:40]) for line in result.stdout.splitlines()[2:]}
        assert abs(values['Worst-case core squint']) < abs(values['Worst-case span squint'])

    def test_squint_invalid_angle(self, cli, runner):
        """Test a steering angle past endfire exits 2"""
        assert runner.invoke(cli, ['squint', '95', '100', '1']).exit_code == 2

    def test_power(self, cli, runner):
        """Test the 32-fold conversion saving and the PA totals"""
        result = runner.invoke(cli, ['power', TABLE2])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert table_line('Conversion power ratio', '32.00', 'x') in lines
        assert table_line('Multi-core conversion power', '131.072', 'W') in lines
        assert table_line('PA and conversion power', '156.672', 'W') in lines
        assert table_line('PA power', '25.600', 'W') in lines
        assert table_line('System power estimate', '256.000', 'W') in lines

    def test_combinations(self, cli, runner):
        """Test the 256-core factorisations of the terabit target"""
        result = runner.invoke(cli, ['combinations', TABLE2])
        assert result.exit_code == 0
        rows = [line.split()[:3] for line in result.stdout.splitlines()[1:]]
        assert rows == [['64', '4', '256'], ['32', '8', '256'], ['16', '16', '256']]

    def test_combinations_unreachable(self, cli, runner):
        """Test no combination within the limits exits 1"""
        result = runner.invoke(cli, ['combinations', TABLE2, '--max-bw-cores', '4', '--max-spatial-cores', '4'])
        assert result.exit_code == 1
