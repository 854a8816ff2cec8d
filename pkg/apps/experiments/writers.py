# apps/experiments/writers.py
"""
CSV and JSON artifact writers.

Values go out at full precision ('.17g'). CSV bodies depend only on the
computed numbers, so identical runs give byte-identical files; timestamps
are confined to the JSON summaries.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from apps.collocation.exceptions import OutputNotWritable
from apps.metrics.norms import exact_snapshot


class ArrayJSONEncoder(DjangoJSONEncoder):
    """DjangoJSONEncoder that also understands numpy scalars and arrays."""

    def default(self, o):
        if isinstance(o, np.generic):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, Path):
            return str(o)
        return super().default(o)


def format_value(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return format(value, '.17g') if math.isfinite(value) else str(value)
    return str(value)


def _unwritable(path, exc):
    return OutputNotWritable(f"cannot write {path}: {exc.strerror or exc}")


def write_csv(path, header, rows):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='', encoding='utf-8') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow([format_value(value) for value in row])
                count += 1
    except OSError as exc:
        raise _unwritable(path, exc) from None
    return count


def write_json(path, payload):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, cls=ArrayJSONEncoder, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    except OSError as exc:
        raise _unwritable(path, exc) from None
    return path


def dumps_line(payload):
    """Single-line JSON for standard output."""
    return json.dumps(payload, cls=ArrayJSONEncoder, sort_keys=True)


# ============================================================================
# SNAPSHOTS
# ============================================================================

def snapshot_header(solution):
    columns = ['t', 'x']
    if len(solution.coordinates()) == 2:
        columns.append('y')
    columns.append('u')
    if solution.v is not None:
        columns.append('v')
    columns.append('u_exact')
    if solution.v is not None:
        columns.append('v_exact')
    columns.append('abs_err')
    return columns


def snapshot_rows(solution):
    """
    One row per (snapshot, node). abs_err is |u - u_exact|, or the larger
    of the two component errors for a coupled solution.
    """
    coords = solution.coordinates()
    for index, t in enumerate(solution.times):
        u = solution.u[index]
        u_exact = exact_snapshot(solution, index, 'u')
        err = np.abs(u - u_exact)
        columns = [*coords, u]
        if solution.v is not None:
            v = solution.v[index]
            v_exact = exact_snapshot(solution, index, 'v')
            err = np.maximum(err, np.abs(v - v_exact))
            columns += [v, u_exact, v_exact]
        else:
            columns.append(u_exact)
        columns.append(err)
        for node in range(u.size):
            yield [float(t)] + [float(column[node]) for column in columns]


def write_snapshots(path, solution):
    return write_csv(path, snapshot_header(solution), snapshot_rows(solution))


# ============================================================================
# SPECTRA
# ============================================================================

SPECTRA_HEADER = ['size', 'eig_index', 're', 'im', 'max_real_part', 'verdict']


def spectra_rows(reports):
    for report in reports:
        order = np.lexsort((report.eigenvalues.imag, report.eigenvalues.real))
        for rank, index in enumerate(order):
            value = report.eigenvalues[index]
            yield [report.size, rank, value.real, value.imag, report.max_real_part, report.verdict]


def write_spectra(path, reports):
    return write_csv(path, SPECTRA_HEADER, spectra_rows(reports))


# ============================================================================
# REPRODUCED TABLES
# ============================================================================

def table_header(spec):
    header = list(spec.key_names)
    for column in spec.columns:
        header += [column, f"{column}_published", f"{column}_tolerance", f"{column}_status"]
    header.append('notes')
    return header


def table_rows(result):
    """One row per table row key; columns follow the published layout."""
    for key, cells in result.rows():
        row = list(key)
        notes = []
        for column in result.spec.columns:
            cell = cells.get(column)
            if cell is None:
                row += [None, None, None, None]
                continue
            row += [cell.computed, cell.published, cell.tolerance, cell.status.value]
            if cell.note:
                notes.append(f"{column}: {cell.note}")
        row.append(' | '.join(notes))
        yield row


def write_table(path, result):
    return write_csv(path, table_header(result.spec), table_rows(result))
