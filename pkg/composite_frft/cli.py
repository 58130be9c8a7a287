#!/usr/bin/env python

# Python standard library
import logging
import os
import sys

# external dependencies
import click
from attr import attrs, attrib, evolve

# imports from this very package
from .exceptions import ConfigError, FrftError
from .inversion import SCHEMES, Scheme
from .models import ModelPresetManager


logger = logging.getLogger('composite_frft')

EXIT_VALIDATION = 1
EXIT_TOLERANCE = 2


@attrs(frozen=True)
class RunConfig(object):
    """
    Validated options of an ``invert`` or ``compare`` run.
    """
    #: Subcommand name.
    command = attrib(type=str)
    #: Preset name or path of a JSON parameter file.
    model = attrib(type=str)
    #: Newton-Cotes order.
    q = attrib(type=int)
    #: Number of panels.
    n = attrib(type=int)
    #: Width of the frequency window.
    a = attrib(type=float)
    #: Width of the output window, None to derive it from the model cumulants.
    span = attrib(type=float)
    #: Fractional output shift.
    s = attrib(type=float)
    #: Schemes to run, in order.
    schemes = attrib(type=tuple)
    #: Tolerance on pairwise differences, relative to the peak.
    tol = attrib(type=float, default=None)
    #: Also evaluate quadrature oracles as the reference density.
    oracle = attrib(type=bool, default=False)

    def validate(self):
        if self.q < 1:
            raise ConfigError('--q must be at least 1, got %d' % self.q)
        if self.n < 1:
            raise ConfigError('--n must be at least 1, got %d' % self.n)
        if self.q * self.n < 2:
            raise ConfigError('--q times --n must be at least 2')
        if not self.a > 0.0:
            raise ConfigError('--a must be positive, got %g' % self.a)
        if self.span is not None and not self.span > 0.0:
            raise ConfigError('--span must be positive, got %g' % self.span)
        if not 0.0 <= self.s < 1.0:
            raise ConfigError('--s must lie in [0, 1), got %g' % self.s)
        if not self.schemes:
            raise ConfigError('--schemes must name at least one scheme')
        if self.command == 'compare' and len(self.schemes) < 2:
            raise ConfigError('compare needs at least two schemes')
        if self.tol is not None and not self.tol > 0.0:
            raise ConfigError('--tol must be positive, got %g' % self.tol)
        return self

    def grid(self):
        from .inversion import InversionGrid
        return InversionGrid.build(self.q, self.n, self.a, self.span, self.s)


def _parse_schemes(value):
    return tuple(Scheme.parse(item) for item in value.split(',') if item.strip())


def _parse_orders(value):
    try:
        orders = tuple(int(item) for item in str(value).split(',') if item.strip())
    except ValueError:
        raise ConfigError('--q must be an integer or a comma-separated list of integers, got %r' % value)
    if not orders:
        raise ConfigError('--q must name at least one order')
    return orders


def _report_path(out, q, count):
    """ ``--out`` itself for a single order, else ``<stem>_q<Q><suffix>``. """
    if count == 1:
        return out
    root, ext = os.path.splitext(out)
    return '%s_q%d%s' % (root, q, ext)


def _fail(ctx, error):
    logger.error('%s', error)
    ctx.exit(EXIT_VALIDATION)


@click.group()
@click.option('--debug', is_flag=True)
@click.version_option(package_name='composite-frft')
@click.pass_context
def cli(ctx, *args, **kwargs):
    """ Command line interface for the composite_frft Python package. """

    debug = kwargs.get('debug')

    logging.basicConfig(level='DEBUG' if debug else 'INFO')


@cli.command('weights')
@click.option('--q', 'q', type=int, required=True, envvar='COMPOSITE_FRFT_Q', help='Newton-Cotes order.')
@click.option('--n', 'n', type=int, help='Print the composite vector over this many panels.')
@click.option('--out', type=click.File('w'), help='Also write the weights as CSV to this file.')
@click.pass_context
def weights_cmd(ctx, q, n, out):
    """ Exact closed Newton-Cotes weights. """
    from .engine import FrftInverter
    from .export import write_weights_csv

    try:
        weights = FrftInverter().weights(q, n)
    except FrftError as e:
        _fail(ctx, e)

    exact = weights.weights if n is None else weights.exact
    print(' '.join(str(w) for w in exact))
    for index, w in enumerate(exact):
        print('{0:4d} {1:>24s} {2:.17g}'.format(index, str(w), float(w)))
    if n is None:
        print('common denominator %d' % weights.common_denominator)

    if out:
        write_weights_csv(out, q, n)


@cli.command('selftest')
@click.option('--inject-fault', is_flag=True, hidden=True)
@click.pass_context
def selftest_cmd(ctx, inject_fault):
    """ Run the numerical invariant checks. """
    from .selftest import run_selftest

    results = run_selftest(perturbation=1e-6 if inject_fault else 0.0)

    fmt = '{name:24s} {status:6s} {seconds:>8s}  {detail}'
    print(fmt.format(name='Check', status='Result', seconds='Time', detail='Detail'))
    print('=' * 96)
    for result in results:
        print(fmt.format(
            name=result.name,
            status='pass' if result.passed else 'FAIL',
            seconds='%.2fs' % result.seconds,
            detail=result.detail,
        ))

    if not all(result.passed for result in results):
        ctx.exit(EXIT_TOLERANCE)


def run_options(default_schemes):
    def decorator(f):
        options = [
            click.option('--model', default='vg-star', envvar='COMPOSITE_FRFT_MODEL', show_default=True,
                         help='Model preset (see `composite_frft info models`) or JSON parameter file.'),
            click.option('--q', 'q', default='2', envvar='COMPOSITE_FRFT_Q', show_default=True,
                         help='Newton-Cotes order, or a comma-separated list for one report per order.'),
            click.option('--n', 'n', type=int, default=512, envvar='COMPOSITE_FRFT_N', show_default=True,
                         help='Number of panels.'),
            click.option('--a', 'a', type=float, default=100.0, envvar='COMPOSITE_FRFT_A', show_default=True,
                         help='Width of the frequency window [-a/2, a/2].'),
            click.option('--span', type=float, envvar='COMPOSITE_FRFT_SPAN',
                         help='Width of the output window around 0 [default: mean +- 12 sd of the model].'),
            click.option('--s', 's', type=float, default=0.0, show_default=True,
                         help='Fractional output shift in [0, 1).'),
            click.option('--schemes', default=default_schemes, show_default=True,
                         help='Comma-separated schemes (see `composite_frft info schemes`).'),
            click.option('--out', type=click.Path(dir_okay=False),
                         help='Write the density table as CSV to this file, one file per order.'),
            click.option('--tol', type=float, help='Flag scheme pairs differing by more than this times the peak.'),
            click.option('--oracle', is_flag=True, help='Use quadrature oracles as reference density (slow).'),
        ]
        for option in reversed(options):
            f = option(f)
        return f
    return decorator


def _run(ctx, command, kwargs):
    from .engine import FrftInverter
    from .export import write_report_csv
    from .inversion import ErrorReport

    reports = []
    try:
        orders = _parse_orders(kwargs['q'])
        inverter = None
        for q in orders:
            config = RunConfig(
                command=command,
                model=kwargs['model'],
                q=q,
                n=kwargs['n'],
                a=kwargs['a'],
                span=kwargs['span'],
                s=kwargs['s'],
                schemes=_parse_schemes(kwargs['schemes']),
                tol=kwargs.get('tol'),
                oracle=kwargs.get('oracle', False),
            ).validate()
            if inverter is None:
                inverter = FrftInverter(config.model)
            if config.span is None:
                config = evolve(config, span=inverter.default_span())
            inverter.grid = config.grid()

            reference = True if config.oracle else 'auto'
            if command == 'compare':
                report = inverter.compare(config.schemes, reference=reference)
            else:
                samples = [inverter.invert(scheme) for scheme in config.schemes]
                density = None
                if config.oracle or inverter.model.has_closed_density:
                    density = inverter.model.density(inverter.grid.output_nodes())
                report = ErrorReport.from_samples(samples, density)
            reports.append((config, report))
    except FrftError as e:
        _fail(ctx, e)

    out = kwargs.get('out')
    stream = sys.stdout if out else sys.stderr
    for index, (config, report) in enumerate(reports):
        grid = report.grid
        print('Q={0} N={1} M={2} a={3:g} span={4:g}'.format(config.q, config.n, grid.M, config.a, config.span),
              file=stream)
        _summarize(report, inverter.model, config.tol, stream)
        if out:
            path = _report_path(out, config.q, len(reports))
            with click.open_file(path, 'w') as fh:
                write_report_csv(fh, report)
            logger.debug('Wrote %s', path)
        else:
            if index:
                print()
            write_report_csv(sys.stdout, report)


def _summarize(report, model, tol, stream):
    mu = model.params.mu
    peak = report.peak
    for label, samples in report.samples.items():
        line = '{0:14s} peak {1:.10g}  mass {2:.10f}  f({3:.6g}) = {4:.10g}'.format(
            label, samples.peak, samples.mass(), samples.nodes[samples.index_near(mu)], samples.value_near(mu))
        error = report.true_errors.get(label)
        if error is not None:
            line += '  max|err| {0:.3e}  mean|err| {1:.3e}'.format(error.max, error.mean)
        print(line, file=stream)

    for (first, second), diff in report.pairwise.items():
        line = '{0} - {1}: max {2:.3e} ({3:.3e} of peak)  mean {4:.3e}'.format(
            first, second, diff.max, diff.max / peak if peak else 0.0, diff.mean)
        if tol is not None:
            line += '  %s' % ('ok' if diff.max <= tol * peak else 'EXCEEDS --tol %g' % tol)
        print(line, file=stream)


@cli.command('invert', short_help='invert a characteristic function')
@run_options('weighted_qn')
@click.pass_context
def invert_cmd(ctx, *args, **kwargs):
    """ Recover the density of a model on the output grid. """
    _run(ctx, 'invert', kwargs)


@cli.command('compare', short_help='compare inversion schemes')
@run_options('weighted_qn,nonweighted')
@click.pass_context
def compare_cmd(ctx, *args, **kwargs):
    """ Run several schemes on one grid and report their differences. """
    _run(ctx, 'compare', kwargs)


@cli.group()
@click.pass_context
def info(ctx, *args, **kwargs):
    """ list available models and schemes """


@info.command('models')
@click.pass_context
def models_cmd(ctx, *args, **kwargs):
    """
    List the choices for --model
    """
    print('Model presets:')
    print()

    for preset in ModelPresetManager().values():
        print('{0:10s} {1:4s} {2}'.format(preset.identifier, preset.kind, preset.description))


@info.command('schemes')
@click.pass_context
def schemes_cmd(ctx, *args, **kwargs):
    """
    List the choices for --schemes
    """
    print('Inversion schemes:')
    print()

    for entry in SCHEMES.values():
        print('{0:14s} {1}'.format(entry.identifier, entry.description))


if __name__ == '__main__':
    cli()
