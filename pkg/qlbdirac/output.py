"""
Delimiter-separated writers for run results.

Floats are written with 17 significant digits so files round-trip exactly.
Line endings are always ``\\n``.
"""
import csv
import logging
import os

import numpy as np

from .version import version_string

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = (
    'step', 'norm2', 'centroid_left', 'centroid_right', 'v_mean_running',
    'time', 'split_left', 'split_right')

PROFILE_VALUES = ('rho', 'rho_s', 'rho_a', 'rho_right', 'rho_left')

CONVERGENCE_COLUMNS = ('level', 'dt', 'sites', 'steps', 'phase_error')


def format_value(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return '{0:.17g}'.format(float(value))


def _writer(f):
    return csv.writer(f, lineterminator='\n')


def write_rows(path, header, rows):
    with open(path, 'w', newline='') as f:
        writer = _writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    logger.debug("Wrote %s", path)
    return path


def summary_row(record):
    return (record.step, record.norm2, record.centroid_left, record.centroid_right,
            record.v_mean, record.time, record.split_left, record.split_right)


def write_summary(path, records):
    return write_rows(path, SUMMARY_COLUMNS, (summary_row(record) for record in records))


def profile_path(output_dir, step):
    return os.path.join(output_dir, 'profile_{0}.csv'.format(step))


def write_profile(path, record, grid):
    """
    One row per site: a coordinate column for each active axis, then the
    densities of :data:`PROFILE_VALUES`.
    """
    axes = grid.active_axes
    coordinates = [grid.mesh(axis).reshape(-1) for axis in axes]
    values = [getattr(record, name).reshape(-1) for name in (
        'density', 'rho_s', 'rho_a', 'rho_right', 'rho_left')]
    rows = zip(*[c.astype(int) for c in coordinates], *values)
    return write_rows(path, axes + PROFILE_VALUES, rows)


def write_convergence(path, result):
    rows = ((level.level, level.dt, level.sites, level.steps, level.phase_error)
            for level in result.levels)
    return write_rows(path, CONVERGENCE_COLUMNS, rows)


def write_run_meta(path, items):
    """
    Echo the resolved configuration as ``key = value`` lines.
    """
    with open(path, 'w', newline='') as f:
        f.write('# qlbdirac {0}\n'.format(version_string))
        for key, value in items:
            f.write('{0} = {1}\n'.format(key, value))
    logger.debug("Wrote %s", path)
    return path
