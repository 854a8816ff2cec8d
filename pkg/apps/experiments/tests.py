import csv
import io
import json
import math
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings, tag

from apps.collocation.exceptions import EvaluationError, InvalidArgument, OutputNotWritable, SingularMatrix

from apps.oracles.exact import CaseParams

from . import reference, tables
from .config import RunConfig, load_config, read_config_document
from .forms import RunConfigForm, StabilitySweepForm, form_error_message
from .models import SimulationRun
from .tables import (
    TABLES, CellStatus, Check, bound_cell, get_table, measure, reproduce_table, within_cell,
)
from .writers import format_value, snapshot_header, table_header, write_csv, write_json


WOOD_ARGS = [
    '--model', 'burgers1d', '--case', '1d-wood', '--sigma', '2', '--nu', '1',
    '--nodes', '40', '--dt', '1e-4', '--t-final', '1e-3',
]

ZERO_ARGS = [
    '--model', 'burgers1d', '--case', '1d-zero', '--nu', '1',
    '--nodes', '6', '--dt', '0.1', '--t-final', '0.3',
]


def run_command(name, *args, **options):
    """call_command with captured streams; returns (stdout, stderr)."""
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr, **options)
    return stdout.getvalue(), stderr.getvalue()


def read_rows(path):
    with open(path, newline='', encoding='utf-8') as handle:
        return list(csv.reader(handle))


class TempDirMixin:

    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self.addCleanup(self._tmp.cleanup)


# ============================================================================
# FORMS
# ============================================================================

class RunConfigFormTests(SimpleTestCase):

    def base(self, **extra):
        data = {
            'model': 'burgers1d', 'case_id': '1d-wood', 'sigma': 2, 'nu': 1,
            'm_nodes': 10, 'dt': 1e-3, 't_final': 1e-2,
        }
        data.update(extra)
        return {key: value for key, value in data.items() if value is not None}

    def test_valid_defaults(self):
        form = RunConfigForm(data=self.base())
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['startup'], 'implicit')
        self.assertEqual(form.cleaned_data['sample_every'], 1)

    def test_both_viscosity_and_reynolds(self):
        form = RunConfigForm(data=self.base(reynolds=1))
        self.assertFalse(form.is_valid())
        self.assertIn('exactly one of reynolds or nu', form_error_message(form))

    def test_neither_viscosity_nor_reynolds(self):
        form = RunConfigForm(data=self.base(nu=None))
        self.assertFalse(form.is_valid())
        self.assertIn('__all__', form.errors)

    def test_case_must_match_model(self):
        form = RunConfigForm(data=self.base(case_id='coupled'))
        self.assertFalse(form.is_valid())
        self.assertIn('case_id', form.errors)

    def test_sigma_required_and_above_one(self):
        self.assertIn('sigma', RunConfigForm(data=self.base(sigma=None)).errors)
        self.assertIn('sigma', RunConfigForm(data=self.base(sigma=1)).errors)

    def test_nodes_minimum(self):
        self.assertIn('m_nodes', RunConfigForm(data=self.base(m_nodes=3)).errors)

    def test_two_dimensional_grid(self):
        data = self.base(model='burgers2d', case_id='2d', sigma=None, m_nodes=None, nu=None, reynolds=1)
        self.assertIn('m_nodes', RunConfigForm(data=data).errors)
        self.assertTrue(RunConfigForm(data={**data, 'mx': 6, 'my': 8}).is_valid())

    def test_steps_must_divide(self):
        form = RunConfigForm(data=self.base(dt=0.3, t_final=1.0))
        self.assertFalse(form.is_valid())
        self.assertIn('t_final/dt must be a positive integer', form_error_message(form))

    def test_negative_time_step(self):
        self.assertIn('dt', RunConfigForm(data=self.base(dt=-1e-3)).errors)


class StabilitySweepFormTests(SimpleTestCase):

    def test_sizes_parsed(self):
        form = StabilitySweepForm(data={'model': 'burgers1d', 'sizes': '10, 17,24', 'nu': 1})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['sizes'], [10, 17, 24])
        self.assertEqual(form.cleaned_data['frozen'], 'initial')
        self.assertEqual(form.cleaned_data['case_id'], '1d-fourier')
        self.assertEqual(form.cleaned_data['alpha'], 1.0)
        self.assertEqual(form.cleaned_data['order'], 1)

    def test_empty_and_small_sizes(self):
        self.assertIn('sizes', StabilitySweepForm(data={'model': 'burgers1d', 'sizes': ' , ', 'nu': 1}).errors)
        self.assertIn('sizes', StabilitySweepForm(data={'model': 'burgers1d', 'sizes': '3', 'nu': 1}).errors)
        self.assertIn('sizes', StabilitySweepForm(data={'model': 'burgers1d', 'sizes': '4,x', 'nu': 1}).errors)

    def test_sweep_parameter(self):
        form = StabilitySweepForm(data={'model': 'burgers1d', 'sizes': '5', 'reynolds': 4})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.sweep_parameter(), 0.25)

        form = StabilitySweepForm(data={'model': 'coupled', 'sizes': '5', 'reynolds': 100})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.sweep_parameter(), 100)

    def test_weighting_blocks_need_no_viscosity(self):
        form = StabilitySweepForm(data={'model': 'weights-x', 'sizes': '5', 'order': '2'})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.cleaned_data['order'], 2)
        self.assertEqual(form.sweep_parameter(), 0.0)

    def test_supplied_policy_not_offered(self):
        form = StabilitySweepForm(data={'model': 'burgers1d', 'sizes': '5', 'nu': 1, 'frozen': 'supplied'})
        self.assertIn('frozen', form.errors)

    def test_wood_state_needs_sigma(self):
        data = {'model': 'burgers1d', 'sizes': '5', 'nu': 1, 'case_id': '1d-wood'}
        self.assertIn('sigma', StabilitySweepForm(data=data).errors)
        self.assertIn('sigma', StabilitySweepForm(data={**data, 'sigma': 1}).errors)
        self.assertTrue(StabilitySweepForm(data={**data, 'sigma': 2}).is_valid())
        self.assertTrue(StabilitySweepForm(data={**data, 'frozen': 'zero'}).is_valid())

    def test_only_one_dimensional_cases_offered(self):
        form = StabilitySweepForm(data={'model': 'burgers1d', 'sizes': '5', 'nu': 1, 'case_id': '1d-zero'})
        self.assertIn('case_id', form.errors)


# ============================================================================
# CONFIG
# ============================================================================

class RunConfigTests(TempDirMixin, SimpleTestCase):

    def test_round_trip(self):
        cfg = load_config(overrides={
            'model': 'burgers1d', 'case_id': '1d-wood', 'sigma': 2.0, 'nu': 1.0,
            'm_nodes': 12, 'dt': 1e-3, 't_final': 1e-2, 'output_dir': str(self.tmp),
        })
        self.assertEqual(RunConfig.from_mapping(cfg.to_dict()), cfg)
        self.assertNotIn('reynolds', cfg.to_dict())

    def test_unknown_field(self):
        with self.assertRaisesMessage(InvalidArgument, 'unknown config field(s): nodes'):
            RunConfig.from_mapping({'nodes': 4})

    def test_overrides_win_and_none_is_ignored(self):
        path = self.tmp / 'run.json'
        path.write_text(json.dumps({
            'model': 'burgers1d', 'case_id': '1d-zero', 'nu': 1, 'm_nodes': 6, 'dt': 0.1, 't_final': 0.3,
        }))
        cfg = load_config(str(path), {'m_nodes': 8, 'dt': None})
        self.assertEqual(cfg.m_nodes, 8)
        self.assertEqual(cfg.dt, 0.1)

    def test_unreadable_documents(self):
        with self.assertRaisesMessage(InvalidArgument, 'cannot read config'):
            read_config_document(str(self.tmp / 'missing.json'))
        with self.assertRaisesMessage(InvalidArgument, 'is not valid JSON'):
            read_config_document('-', stdin=io.StringIO('{model:'))
        with self.assertRaisesMessage(InvalidArgument, 'must be a JSON object'):
            read_config_document('-', stdin=io.StringIO('[1, 2]'))


# ============================================================================
# WRITERS
# ============================================================================

class WriterTests(TempDirMixin, SimpleTestCase):

    def test_format_value(self):
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(3), '3')
        self.assertEqual(format_value(0.1), '0.10000000000000001')
        self.assertEqual(format_value(math.nan), 'nan')

    def test_write_csv(self):
        path = self.tmp / 'nested' / 'out.csv'
        count = write_csv(path, ['a', 'b'], [[1, 0.5], [2, None]])
        self.assertEqual(count, 2)
        self.assertEqual(path.read_text(), 'a,b\n1,0.5\n2,\n')

    def test_unwritable_destination(self):
        blocker = self.tmp / 'blocker'
        blocker.write_text('x')
        with self.assertRaisesMessage(OutputNotWritable, 'cannot write'):
            write_csv(blocker / 'out.csv', ['a'], [[1]])
        with self.assertRaises(OutputNotWritable):
            write_json(blocker / 'summary.json', {'a': 1})
        self.assertEqual(blocker.read_text(), 'x')

    def test_table_header(self):
        header = table_header(get_table(9))
        self.assertEqual(header[:3], ['T', 'L2', 'L2_published'])
        self.assertEqual(header[-1], 'notes')
        self.assertEqual(len(header), 1 + 2 * 4 + 1)


# ============================================================================
# TABLE CELLS
# ============================================================================

class CellTests(SimpleTestCase):

    def test_within(self):
        cell = within_cell(1, (1.0, '0.1'), 'u', 0.65355, 0.653544, 5e-5)
        self.assertIs(cell.status, CellStatus.PASS)
        self.assertIs(cell.check, Check.WITHIN)
        self.assertIs(within_cell(1, (1.0, '0.1'), 'u', 0.6537, 0.653544, 5e-5).status, CellStatus.FAIL)

    def test_nan_fails(self):
        self.assertTrue(within_cell(1, (1.0, '0.1'), 'u', math.nan, 0.65, 1.0).failed)
        self.assertTrue(bound_cell(2, (100.0, 10), 'L2', math.nan, 1e-10, 10).failed)

    def test_bound_uses_factor_and_floor(self):
        cell = bound_cell(2, (100.0, 10), 'L2', 2e-9, 2.3494e-10, 10)
        self.assertIs(cell.status, CellStatus.PASS)
        self.assertAlmostEqual(cell.tolerance, 2.3494e-9)
        self.assertIs(bound_cell(2, (100.0, 10), 'L2', 3e-9, 2.3494e-10, 10).status, CellStatus.FAIL)
        self.assertEqual(bound_cell(2, (100.0, 10), 'L2', 5e-13, 0.0, 10).tolerance, 1e-12)

    def test_flagged_cells_never_fail(self):
        key = (0.3, 0.7)
        self.assertTrue(reference.flag_for(10, key, 'exact_t2'))
        cell = within_cell(10, key, 'exact_t2', 0.0, 1.0, 1e-5)
        self.assertIs(cell.status, CellStatus.FLAGGED)
        self.assertEqual(reference.flag_for(10, key, 't2'), '')

    def test_known_divergence_flags_a_miss(self):
        key = (0.5, 0.4)
        self.assertIn('0.68368', reference.divergence_for(4, key, 'N=40'))
        cell = within_cell(4, key, 'N=40', 0.683669, 0.68369, 2e-5)
        self.assertIs(cell.status, CellStatus.FLAGGED)
        self.assertIn('0.68368', cell.note)
        self.assertIs(within_cell(4, key, 'N=40', 0.68369, 0.68369, 2e-5).status, CellStatus.PASS)
        self.assertIs(within_cell(4, (0.25, 0.4), 'N=40', 0.3624, 0.36226, 2e-5).status, CellStatus.FAIL)

    def test_known_divergence_covers_a_whole_table(self):
        miss = bound_cell(6, (0.5, 0.5), 'T=0.75', 6.74e-05, 1e-7, 30, floor=1e-5)
        self.assertIs(miss.status, CellStatus.FLAGGED)
        self.assertIn('16x16 grid', miss.note)
        self.assertIs(bound_cell(6, (0.5, 0.5), 'T=0.75', 5e-6, 1e-7, 30, floor=1e-5).status, CellStatus.PASS)
        self.assertTrue(bound_cell(6, (0.5, 0.5), 'T=0.75', math.nan, 1e-7, 30, floor=1e-5).failed)

    def test_measure(self):
        def unevaluable():
            raise EvaluationError('series did not converge')

        def singular():
            raise SingularMatrix('pivot 0')

        self.assertEqual(measure(lambda: 1.5), (1.5, ''))
        value, note = measure(unevaluable)
        self.assertTrue(math.isnan(value))
        self.assertIn('series did not converge', note)
        value, note = measure(singular)
        self.assertTrue(math.isnan(value))
        self.assertEqual(note, '')

    def test_rounded(self):
        cell = within_cell(1, (10.0, '0.1'), 'u', 0.0657497612, 0.065749761, 1e-6, display='.9f')
        self.assertEqual(cell.rounded(cell.computed), '0.065749761')
        self.assertEqual(cell.rounded(math.nan), '')

    def test_registry(self):
        self.assertEqual(sorted(TABLES), list(range(1, 12)))
        self.assertEqual(get_table('3').table_id, 3)
        with self.assertRaisesMessage(InvalidArgument, 'table must be one of 1..11'):
            get_table(12)
        with self.assertRaises(InvalidArgument):
            reproduce_table(1, jobs=0)

    def test_reference_layout(self):
        self.assertEqual(len(reference.TABLE_11), 12)
        for table_id, key, column in reference.FLAGGED:
            self.assertIn(column, get_table(table_id).columns)
            self.assertEqual(len(key), len(get_table(table_id).key_names))


class TableOneTests(SimpleTestCase):

    def test_exact_column_matches_closed_form(self):
        result = reproduce_table(1)
        exact = [cell for cell in result.cells if cell.column == 'exact']
        self.assertEqual(len(exact), 2 * len(reference.POINTS_1D))
        self.assertTrue(all(cell.status is CellStatus.PASS for cell in exact))

    @tag('slow')
    def test_table_passes(self):
        result = reproduce_table(1, jobs=2)
        self.assertEqual(result.failures, [])
        self.assertEqual(result.counts()['flagged'], 0)


class SolveCaseTests(SimpleTestCase):

    def setUp(self):
        super().setUp()
        tables._solve_case.cache_clear()
        self.addCleanup(tables._solve_case.cache_clear)

    def test_concurrent_callers_share_one_march(self):
        started, release = threading.Event(), threading.Event()
        calls = []

        def slow_march(problem, time_config, sample_every):
            calls.append(time_config)
            started.set()
            release.wait(5)
            return 'solution'

        args = ('1d-zero', CaseParams(nu=1.0, m_nodes=6), 0.1, 0.3, 1)
        with mock.patch('apps.experiments.tables.problem_factory', return_value='problem'), \
                mock.patch('apps.experiments.tables.march', side_effect=slow_march):
            with ThreadPoolExecutor(max_workers=2) as pool:
                first = pool.submit(tables.solve_case, *args)
                self.assertTrue(started.wait(5))
                second = pool.submit(tables.solve_case, *args)
                time.sleep(0.05)
                release.set()
                results = [first.result(timeout=5), second.result(timeout=5)]

        self.assertEqual(results, ['solution', 'solution'])
        self.assertEqual(len(calls), 1)

    def test_breakdown_becomes_a_failed_run(self):
        with mock.patch('apps.experiments.tables.problem_factory', return_value='problem'), \
                mock.patch('apps.experiments.tables.march', side_effect=SingularMatrix('pivot 0')):
            solution = tables.solve_case('1d-zero', CaseParams(nu=1.0, m_nodes=6), 0.1, 0.3, 1)
        self.assertIsInstance(solution, tables.FailedRun)


def find_cell(result, key, column):
    matches = [cell for cell in result.cells if cell.key == key and cell.column == column]
    if len(matches) != 1:
        raise AssertionError(f"expected one cell at {key} / {column}, found {len(matches)}")
    return matches[0]


@tag('slow')
class ReproducedTableTests(SimpleTestCase):
    """Full re-runs of tables 2-11."""

    def assertNoFailures(self, result):
        self.assertEqual([(cell.key, cell.column, cell.computed) for cell in result.failures], [])

    def test_table_2_wood_steep_front(self):
        result = reproduce_table(2, jobs=2)
        self.assertNoFailures(result)
        self.assertLessEqual(find_cell(result, (100.0, 10), 'L2').computed, 2.4e-9)
        self.assertLessEqual(find_cell(result, (100.0, 10), 'Linf').computed, 4e-9)
        self.assertLessEqual(find_cell(result, (200.0, 10), 'L2').computed, 3.2e-10)

    def test_table_3(self):
        self.assertNoFailures(reproduce_table(3, jobs=2))

    def test_table_4_fourier_point_values(self):
        result = reproduce_table(4, jobs=3)
        self.assertNoFailures(result)
        cell = find_cell(result, (0.5, 0.4), 'N=40')
        self.assertAlmostEqual(cell.computed, 0.68368, delta=2e-5)
        if cell.status is CellStatus.FLAGGED:
            self.assertIn('0.68368', cell.note)

    def test_table_5(self):
        result = reproduce_table(5, jobs=2)
        self.assertNoFailures(result)
        self.assertIs(find_cell(result, (1e-4, 5.0), 'L2').status, CellStatus.FLAGGED)

    def test_table_6_resolution_bound_cells_are_flagged(self):
        result = reproduce_table(6)
        self.assertEqual(result.counts()['fail'], 0)
        for cell in result.cells:
            if cell.status is CellStatus.FLAGGED:
                self.assertIn('16x16 grid', cell.note)

    def test_table_7_grid_refinement(self):
        result = reproduce_table(7, jobs=3)
        self.assertNoFailures(result)
        coarse = find_cell(result, (0.25, 5, 0.005), 'L2').computed
        fine = find_cell(result, (0.25, 15, 0.0001), 'L2').computed
        self.assertLess(fine, coarse)

    def test_table_8_two_dimensional_norms(self):
        result = reproduce_table(8, jobs=3)
        self.assertNoFailures(result)
        self.assertLessEqual(find_cell(result, (3.0, 10.0), 'L2').computed, 1e-7)
        self.assertLessEqual(find_cell(result, (3.0, 100.0), 'L2').computed, 1e-4)

    def test_table_9_coupled_norms(self):
        result = reproduce_table(9)
        self.assertNoFailures(result)
        self.assertEqual(result.counts()['flagged'], 0)

    def test_tables_10_and_11_coupled_point_values(self):
        for table_id in (10, 11):
            with self.subTest(table=table_id):
                result = reproduce_table(table_id)
                self.assertNoFailures(result)
                for flagged_table, key, column in reference.FLAGGED:
                    if flagged_table == table_id:
                        self.assertIs(find_cell(result, key, column).status, CellStatus.FLAGGED)


# ============================================================================
# COMMANDS
# ============================================================================

class SolveCommandTests(TempDirMixin, TestCase):

    def test_wood_run(self):
        out, _ = run_command('solve', *WOOD_ARGS, '--sample-every', '5', '--out', str(self.tmp), verbosity=0)
        summary = json.loads(out)
        self.assertLessEqual(summary['linf'], 5e-5)
        self.assertEqual(summary['n_steps'], 10)
        self.assertEqual(summary['sample_count'], 3)
        self.assertEqual(summary['config']['nu'], 1.0)

        rows = read_rows(self.tmp / 'snapshots.csv')
        self.assertEqual(rows[0], ['t', 'x', 'u', 'u_exact', 'abs_err'])
        self.assertEqual(len(rows) - 1, 3 * 40)
        on_disk = json.loads((self.tmp / 'summary.json').read_text())
        self.assertEqual(on_disk['l2'], summary['l2'])

        run = SimulationRun.objects.get()
        self.assertEqual(run.kind, 'SOLVE')
        self.assertTrue(run.succeeded)
        self.assertEqual(run.case_id, '1d-wood')
        self.assertAlmostEqual(run.linf, summary['linf'])

    def test_zero_case_stays_zero(self):
        run_command('solve', *ZERO_ARGS, '--out', str(self.tmp), verbosity=0)
        rows = read_rows(self.tmp / 'snapshots.csv')
        for row in rows[1:]:
            self.assertEqual([float(value) for value in row[2:]], [0.0, 0.0, 0.0])

    def test_time_step_must_divide(self):
        args = [arg if arg != '0.1' else '0.07' for arg in ZERO_ARGS]
        with self.assertRaises(CommandError) as ctx:
            run_command('solve', *args, '--out', str(self.tmp), verbosity=0)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('t_final/dt must be a positive integer', str(ctx.exception))

        run = SimulationRun.objects.get()
        self.assertEqual(run.status, 'CONFIG_ERROR')
        self.assertEqual(run.reason, 'invalid-argument')

    def test_unknown_model(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('solve', '--model', 'burgers3d', '--case', '2d', '--nu', '1',
                        '--nodes', '6', '--dt', '0.1', '--t-final', '0.1', verbosity=0)
        self.assertEqual(ctx.exception.returncode, 2)

    def test_config_file_with_override(self):
        path = self.tmp / 'run.json'
        path.write_text(json.dumps({
            'model': 'burgers1d', 'case_id': '1d-zero', 'nu': 1, 'm_nodes': 6,
            'dt': 0.1, 't_final': 0.3, 'output_dir': str(self.tmp),
        }))
        out, _ = run_command('solve', '--config', str(path), '--nodes', '8', verbosity=0)
        self.assertEqual(json.loads(out)['config']['m_nodes'], 8)
        self.assertEqual(len(read_rows(self.tmp / 'snapshots.csv')) - 1, 4 * 8)

    def test_config_from_stdin(self):
        document = json.dumps({
            'model': 'burgers1d', 'case_id': '1d-zero', 'reynolds': 2, 'm_nodes': 5,
            'dt': 0.5, 't_final': 1.0, 'output_dir': str(self.tmp),
        })
        out, _ = run_command('solve', '--config', '-', stdin=io.StringIO(document), verbosity=0)
        summary = json.loads(out)
        self.assertEqual(summary['n_steps'], 2)
        self.assertEqual(summary['config']['reynolds'], 2.0)

    def test_pointwise_summary(self):
        out, _ = run_command('solve', *ZERO_ARGS, '--pointwise', '--out', str(self.tmp), verbosity=0)
        pointwise = json.loads(out)['pointwise']
        self.assertEqual(list(pointwise), ['u'])
        self.assertEqual(len(pointwise['u']), 6)

    def test_repeated_runs_write_identical_csv(self):
        first, second = self.tmp / 'a', self.tmp / 'b'
        run_command('solve', *WOOD_ARGS, '--out', str(first), verbosity=0)
        run_command('solve', *WOOD_ARGS, '--out', str(second), verbosity=0)
        self.assertEqual((first / 'snapshots.csv').read_bytes(), (second / 'snapshots.csv').read_bytes())

    def test_banner_goes_to_stderr(self):
        out, err = run_command('solve', *ZERO_ARGS, '--out', str(self.tmp))
        self.assertIn('BURGERS SOLVE', err)
        self.assertNotIn('BURGERS SOLVE', out)
        json.loads(out)

    def test_output_path_is_a_file(self):
        blocker = self.tmp / 'blocker'
        blocker.write_text('x')
        with self.assertRaises(CommandError) as ctx:
            run_command('solve', *ZERO_ARGS, '--out', str(blocker), verbosity=0)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('output-not-writable', str(ctx.exception))
        run = SimulationRun.objects.get()
        self.assertEqual(run.status, 'CONFIG_ERROR')
        self.assertEqual(run.reason, 'output-not-writable')

    @override_settings(BURGERS_RECORD_RUNS=False)
    def test_recording_switched_off(self):
        run_command('solve', *ZERO_ARGS, '--out', str(self.tmp), verbosity=0)
        self.assertFalse(SimulationRun.objects.exists())

    @tag('slow')
    def test_coupled_header(self):
        out, _ = run_command(
            'solve', '--model', 'coupled', '--case', 'coupled', '--re', '10', '--nodes', '8',
            '--dt', '0.01', '--t-final', '0.05', '--out', str(self.tmp), verbosity=0,
        )
        summary = json.loads(out)
        self.assertIn('max_sum_drift', summary)
        self.assertEqual(read_rows(self.tmp / 'snapshots.csv')[0],
                         ['t', 'x', 'y', 'u', 'v', 'u_exact', 'v_exact', 'abs_err'])


class StabilityCommandTests(TempDirMixin, TestCase):

    def test_diffusion_sweep_is_stable(self):
        out, _ = run_command('stability', '--sizes', '10,17,24,31', '--nu', '1', '--frozen', 'zero',
                             '--out', str(self.tmp), verbosity=0)
        summary = json.loads(out)
        self.assertTrue(summary['all_stable'])
        self.assertEqual([report['size'] for report in summary['reports']], [10, 17, 24, 31])
        self.assertTrue(all(report['max_real_part'] < 0 for report in summary['reports']))

        rows = read_rows(self.tmp / 'spectra.csv')
        self.assertEqual(rows[0], ['size', 'eig_index', 're', 'im', 'max_real_part', 'verdict'])
        self.assertEqual(len(rows) - 1, 8 + 15 + 22 + 29)
        self.assertTrue((self.tmp / 'stability_summary.json').exists())
        self.assertEqual(SimulationRun.objects.get().kind, 'STABILITY')

    def test_smallest_grid(self):
        out, _ = run_command('stability', '--sizes', '4', '--nu', '1', '--frozen', 'zero', '--out', str(self.tmp), verbosity=0)
        self.assertEqual(json.loads(out)['reports'][0]['eigenvalues'], 2)

    def test_empty_size_list(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('stability', '--nu', '1', '--out', str(self.tmp), verbosity=0)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('the size list is empty', str(ctx.exception))

    def test_initial_state_is_the_default(self):
        out, _ = run_command('stability', '--sizes', '6', '--nu', '1', '--out', str(self.tmp), verbosity=0)
        summary = json.loads(out)
        self.assertEqual(summary['frozen'], 'initial')
        self.assertEqual(summary['case_id'], '1d-fourier')

    def test_wood_state_from_the_command_line(self):
        out, _ = run_command('stability', '--sizes', '6', '--nu', '1', '--case', '1d-wood', '--sigma', '2',
                             '--out', str(self.tmp), verbosity=0)
        self.assertEqual(json.loads(out)['case_id'], '1d-wood')

    def test_output_path_is_a_file(self):
        blocker = self.tmp / 'blocker'
        blocker.write_text('x')
        with self.assertRaises(CommandError) as ctx:
            run_command('stability', '--sizes', '4', '--nu', '1', '--frozen', 'zero',
                        '--out', str(blocker), verbosity=0)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('output-not-writable', str(ctx.exception))
        self.assertEqual(SimulationRun.objects.get().reason, 'output-not-writable')


class ReproduceCommandTests(TempDirMixin, TestCase):

    def test_unknown_table(self):
        with self.assertRaises(CommandError) as ctx:
            run_command('reproduce', '--table', '12', '--out', str(self.tmp), verbosity=0)
        self.assertEqual(ctx.exception.returncode, 2)
        run = SimulationRun.objects.get()
        self.assertEqual(run.status, 'CONFIG_ERROR')
        self.assertIsNone(run.table_id)

    @tag('slow')
    def test_table_one(self):
        out, _ = run_command('reproduce', '--table', '1', '--out', str(self.tmp), verbosity=0)
        lines = out.strip().split('\n')
        self.assertEqual(lines[0], 'Re\tx\tu\texact\tnorm')
        self.assertEqual(len(lines), 1 + 2 * (len(reference.POINTS_1D) + 2))

        rows = read_rows(self.tmp / 'table_1.csv')
        self.assertEqual(rows[0], table_header(get_table(1)))
        run = SimulationRun.objects.get()
        self.assertEqual(run.table_id, 1)
        self.assertEqual(run.metadata['fail'], 0)
