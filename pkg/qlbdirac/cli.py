"""
Command line front end.

.. code::

    qlbdirac run configs/fig1.cfg
    qlbdirac bench configs/bench.cfg
    qlbdirac converge configs/converge.cfg
    qlbdirac check

Exit status is 0 on success, 1 for usage and configuration errors and
2 when a numerical invariant is violated.
"""
import argparse
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field

from .algebra import build_dirac_set
from .checks import run_checks
from .config import (
    ConfigError, InvalidDataException, RunConfig, parse_config_text, validation_messages)
from .convergence import run_convergence
from .exceptions import QLBError
from .lattice import Boundary, SpinorField
from .layout import compare_layouts, mlups
from .output import (
    profile_path, write_convergence, write_profile, write_run_meta, write_summary)
from .physics import (
    init_gaussian, measured_mean_velocity, observe, plane_wave, theory_group_velocity)
from .scheme import Stepper, evolve
from .version import version_string

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

#: Below this many steps bench timings are dominated by setup.
BENCH_MIN_STEPS = 100


def initial_field(config, grid, dirac):
    """
    The initial condition selected by ``config.initial``.
    """
    if config.initial == 'gaussian':
        return init_gaussian(grid, dirac, config.packet(), normalize=config.normalize_ic,
                             dt=config.dt)
    if config.initial == 'plane_wave':
        sites = grid.extent['xyz'.index(config.packet_axis)]
        k = 2.0 * math.pi * config.plane_wave_modes / sites
        return plane_wave(grid, dirac, k, config.mass * config.dt, config.plane_wave_branch,
                          axis=config.packet_axis, dt=config.dt)
    return SpinorField.random(grid, config.seed, dt=config.dt)


@dataclass
class RunResult:
    records: list
    final: SpinorField
    #: Steps at which a profile was written.
    profile_steps: list = field(default_factory=list)

    @property
    def final_record(self):
        return self.records[-1]


def run_simulation(config, dirac=None, write=True):
    """
    Evolve the configured initial condition, observing it along the way.
    With ``write`` the summary, profiles and ``run_meta`` go to
    ``config.output_dir``.
    """
    dirac = dirac or build_dirac_set()
    grid = config.grid()
    model = config.make_model(grid)
    if grid.boundary is Boundary.COPY:
        logger.warning("Copy boundaries do not conserve the norm")

    field = initial_field(config, grid, dirac)
    if write:
        os.makedirs(config.output_dir, exist_ok=True)
        write_run_meta(os.path.join(config.output_dir, 'run_meta'), config.resolved_items())
    logger.info("Running %d steps of %s on %s", config.steps, model, grid)

    profile_steps = set(config.snapshot_steps)
    records = []
    written = []

    def observer(step, current):
        reference = records[0] if records else None
        record = observe(current, dirac, step, config.packet_axis,
                         center=config.packet_center, reference=reference)
        records.append(record)
        if not profile_steps or step in profile_steps or step in (0, config.steps):
            written.append(step)
            if write:
                write_profile(profile_path(config.output_dir, step), record, grid)
                logger.info("Snapshot at step %d, norm2 = %.17g", step, record.norm2)

    final = evolve(field, dirac, model, config.plan(), config.steps, observer=observer,
                   cadence=config.snapshot_cadence, snapshot_steps=config.snapshot_steps,
                   workers=config.workers)
    if write:
        write_summary(os.path.join(config.output_dir, 'summary.csv'), records)

    try:
        velocity = measured_mean_velocity(records, tuple(config.velocity_window))
        logger.info("Mean velocity over steps %d..%d: %.6f",
                    config.velocity_window[0], config.velocity_window[1], velocity)
        logger.info("Free group velocity: %.6f",
                    theory_group_velocity(config.packet_k, config.mass))
    except QLBError as err:
        logger.debug("No mean velocity: %s", err)

    return RunResult(records, final, written)


def cmd_run(config, dirac=None):
    run_simulation(config, dirac)
    return EXIT_OK


@dataclass(frozen=True)
class BenchReport:
    sites: int
    steps: int
    updates: int
    seconds_single: float
    mlups_single: float
    workers: int
    seconds_multi: float
    mlups_multi: float

    def lines(self):
        yield 'sites          {0}'.format(self.sites)
        yield 'steps          {0}'.format(self.steps)
        yield 'site updates   {0}'.format(self.updates)
        yield '1 worker       {0:.6f} s  {1:.2f} MLUPS'.format(
            self.seconds_single, self.mlups_single)
        yield '{0} workers{1}  {2:.6f} s  {3:.2f} MLUPS'.format(
            self.workers, ' ' * max(0, 4 - len(str(self.workers))),
            self.seconds_multi, self.mlups_multi)


def _time_run(stepper, field, steps, repeats):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        stepper.run(field, steps)
        best = min(best, time.perf_counter() - start)
    return best


def cmd_bench(config, dirac=None, out=None):
    """
    Time ``config.steps`` steps with one worker and with ``config.workers``,
    keeping the best of ``config.bench_repeats`` runs of each.
    """
    dirac = dirac or build_dirac_set()
    grid = config.grid()
    model = config.make_model(grid)
    if config.steps < BENCH_MIN_STEPS:
        logger.warning("Timings of fewer than %d steps are unreliable", BENCH_MIN_STEPS)
    field = SpinorField.random(grid, config.seed, dt=config.dt)

    single = Stepper(grid, dirac, model, config.plan(), dt=config.dt, workers=1)
    seconds_single = _time_run(single, field, config.steps, config.bench_repeats)
    if config.workers > 1:
        multi = Stepper(grid, dirac, model, config.plan(), dt=config.dt, workers=config.workers)
        seconds_multi = _time_run(multi, field, config.steps, config.bench_repeats)
    else:
        seconds_multi = seconds_single

    updates = grid.sites * config.steps
    report = BenchReport(
        sites=grid.sites, steps=config.steps, updates=updates,
        seconds_single=seconds_single, mlups_single=mlups(updates, seconds_single),
        workers=config.workers, seconds_multi=seconds_multi,
        mlups_multi=mlups(updates, seconds_multi))
    for line in report.lines():
        print(line, file=out or sys.stdout)
    logger.info("Bench: %.2f MLUPS single worker", report.mlups_single)
    return report


def cmd_layout(config, dirac=None, out=None):
    """
    The free step of ``config`` in both storage layouts, as a single line of
    ``grid.sites`` sites.
    """
    if config.steps < BENCH_MIN_STEPS:
        logger.warning("Timings of fewer than %d steps are unreliable", BENCH_MIN_STEPS)
    return compare_layouts(
        config.grid().sites, config.steps, mass=config.mass * config.dt,
        repeats=config.bench_repeats, seed=config.seed, dirac=dirac, out=out)


def cmd_converge(config, dirac=None, out=None):
    """
    Plane wave phase error against the continuum over ``config.levels``
    refinements. Writes ``convergence.csv`` to the output directory.
    """
    out = out or sys.stdout
    sites = config.grid().extent['xyz'.index(config.packet_axis)]
    result = run_convergence(
        sites, config.plane_wave_modes, config.mass, config.converge_time,
        levels=config.levels, branch=config.plane_wave_branch, axis=config.packet_axis,
        dirac=dirac, workers=config.workers)

    os.makedirs(config.output_dir, exist_ok=True)
    write_convergence(os.path.join(config.output_dir, 'convergence.csv'), result)

    print('{0:>5}  {1:>12}  {2:>8}  {3:>8}  {4:>24}'.format(
        'level', 'dt', 'sites', 'steps', 'phase error'), file=out)
    for level in result.levels:
        print('{0:>5}  {1:>12.6g}  {2:>8}  {3:>8}  {4:>24.17g}'.format(
            level.level, level.dt, level.sites, level.steps, level.phase_error), file=out)
    if result.exact:
        print('order: exact', file=out)
    else:
        print('order: {0:.4f}'.format(result.order), file=out)
    return result


def cmd_check(dirac=None, seed=42, draws=1000, out=None):
    out = out or sys.stdout
    results = run_checks(dirac, seed=seed, draws=draws)
    for result in results:
        print(result, file=out)
    failed = sum(1 for result in results if not result.passed)
    print('{0} checks, {1} failed'.format(len(results), failed), file=out)
    return results


class ArgumentParser(argparse.ArgumentParser):
    """
    Exits with status 1 on usage errors.
    """
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, '{0}: error: {1}\n'.format(self.prog, message))


def _override(text):
    """
    ``key=value`` on the command line, parsed like a config file line.
    """
    try:
        return parse_config_text(text)
    except ConfigError as err:
        raise argparse.ArgumentTypeError(str(err))


def build_parser():
    parser = ArgumentParser(
        prog='qlbdirac', description="Quantum lattice Boltzmann simulator for the Dirac equation")
    parser.add_argument('--version', action='version', version=version_string)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="More logging, repeat for debug output")
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    for name, help_text in (
            ('run', "Run a simulation and write its observables"),
            ('bench', "Measure throughput in million lattice updates per second"),
            ('converge', "Measure the splitting order on a free plane wave")):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('config', help="Path to a key = value configuration file")
        sub.add_argument('-s', '--set', dest='overrides', action='append', default=[],
                         type=_override, metavar='KEY=VALUE',
                         help="Override a configuration key")
        sub.add_argument('-o', '--output-dir', help="Override output_dir")
        if name == 'bench':
            sub.add_argument('--layout', action='store_true',
                             help="Compare the (4, sites) and (sites, 4) storage layouts")

    check = subparsers.add_parser('check', help="Verify the matrix algebra")
    check.add_argument('--seed', type=int, default=42)
    check.add_argument('--draws', type=int, default=1000)
    return parser


def _load_config(args):
    overrides = {}
    for item in args.overrides:
        overrides.update(item)
    if args.output_dir:
        overrides['output_dir'] = args.output_dir
    return RunConfig.from_file(args.config, **overrides)


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(format="[%(module)-12s] %(message)s", level=level)


def _fail(status, message):
    print('qlbdirac: {0}'.format(message), file=sys.stderr)
    return status


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        if args.command == 'check':
            results = cmd_check(seed=args.seed, draws=args.draws)
            return EXIT_OK if all(result.passed for result in results) else EXIT_NUMERICAL

        config = _load_config(args)
        if args.command == 'run':
            return cmd_run(config)
        if args.command == 'bench':
            if args.layout:
                cmd_layout(config)
            else:
                cmd_bench(config)
        else:
            cmd_converge(config)
        return EXIT_OK

    except InvalidDataException as err:
        return _fail(EXIT_CONFIG, 'invalid configuration: ' + '; '.join(
            validation_messages(err)))
    except (ConfigError, OSError) as err:
        return _fail(EXIT_CONFIG, str(err))
    except QLBError as err:
        return _fail(EXIT_NUMERICAL, '{0} ({1})'.format(err.msg, err.code))


if __name__ == '__main__':
    sys.exit(main())
