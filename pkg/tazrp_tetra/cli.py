from typing import Any, Dict, Optional, Tuple
import logging
import sys

import click
from pydantic import ValidationError

from .errors import TazrpError, Unstable
from .interface import VerificationInterface
from .models import OutputFormat, Sector, Settings, Suite
from .writers import writer_for

logger = logging.getLogger(__name__)


class IntArray(click.ParamType):
    """Comma-separated non-negative integers, e.g. ``2,1``."""
    name = 'array'

    def convert(self, value, param, ctx) -> Tuple[int, ...]:
        if isinstance(value, tuple):
            return value
        try:
            array = tuple(int(part) for part in str(value).split(','))
        except ValueError:
            self.fail(f'{value!r} is not a comma-separated list of integers',
                      param, ctx)
        if any(part < 0 for part in array):
            self.fail(f'{value!r} has a negative entry', param, ctx)
        return array


ARRAY = IntArray()
COUNT = click.IntRange(0)
POSITIVE = click.IntRange(1)

# suite -> (interface method, {cli option: method keyword})
_SUITES: Dict[Suite, Tuple[str, Dict[str, str]]] = {
    Suite.r_properties: ('verify_r_properties', {
        'max_index': 'max_index', 'mutate': 'mutate'}),
    Suite.tetrahedron: ('verify_tetrahedron', {
        'max_mode': 'max_mode', 'spectral': 'spectral', 'mutate': 'mutate'}),
    Suite.eigenvectors: ('verify_eigenvectors', {
        'max_component': 'max_component', 'mutate': 'mutate'}),
    Suite.intertwining: ('verify_intertwining', {
        'm': 'm', 'n': 'n', 'max_label': 'max_label',
        'green_max': 'green_max', 'blue_window': 'blue_window'}),
    Suite.bilinear: ('verify_bilinear', {
        'm': 'm', 'n': 'n', 's': 's', 'r': 'r', 'window': 'window',
        'q_mode': 'q_mode'}),
    Suite.q0_limit: ('verify_q0_limit', {
        'max_index': 'max_index', 'm': 'm', 'n': 'n',
        'max_label': 'max_label', 'window': 'window'}),
    Suite.hat_relation: ('verify_hat_relation', {
        'n': 'n', 'alpha': 'alpha', 'beta': 'beta', 'max_size': 'max_size',
        'cutoff': 'cutoff'}),
    Suite.embedding: ('verify_embedding', {
        'n': 'n', 'max_r': 'max_r', 'window': 'window'}),
    Suite.f_symmetry: ('verify_f_symmetry', {'max_f': 'max_index'}),
    Suite.bilinear_x: ('verify_bilinear_x', {
        'n': 'n', 'alpha': 'alpha', 'beta': 'beta', 'max_size': 'max_size',
        'cutoff': 'cutoff'}),
    Suite.oracle: ('verify_oracle', {
        'max_n': 'max_n', 'max_L': 'max_L',
        'max_particles': 'max_particles', 'with_three': 'with_three'}),
    Suite.markov: ('verify_markov', {
        'n': 'n', 'L': 'L', 'multiplicity': 'multiplicity',
        'max_size': 'max_size'}),
}

# bilinear needs the layer shape and both arrays
_BILINEAR_DEFAULTS = {'m': 1, 'n': 2, 's': (0, 0), 'r': (0,), 'window': 3}


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


@click.group()
@click.option('--log-level', default=None,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                                case_sensitive=False),
              help='Overrides TAZRP_LOG_LEVEL.')
@click.option('--workers', type=POSITIVE, default=None,
              help='Worker processes; overrides TAZRP_WORKERS.')
@click.pass_context
def main(ctx: click.Context, log_level: Optional[str],
         workers: Optional[int]) -> None:
    """Exact checks of the 3D R-operator, layer transfer matrices and the
    n-species TAZRP steady state."""
    settings = Settings()
    if log_level is not None:
        settings.log_level = log_level
    if workers is not None:
        settings.workers = workers
    _configure_logging(settings.log_level)
    ctx.obj = VerificationInterface(settings)


def _emit(text: str) -> None:
    if text:
        click.echo(text)


@main.command()
@click.argument('suite', type=click.Choice([s.value for s in Suite]))
@click.option('--max-index', type=COUNT)
@click.option('--max-mode', type=COUNT)
@click.option('--max-component', type=COUNT)
@click.option('--max', 'max_f', type=COUNT, help='f-symmetry bound.')
@click.option('--m', 'm', type=POSITIVE, help='Layer rows.')
@click.option('--n', 'n', type=POSITIVE,
              help='Layer columns, or number of species.')
@click.option('--L', 'L', type=POSITIVE)
@click.option('--multiplicity', type=ARRAY)
@click.option('--max-label', type=COUNT)
@click.option('--green-max', type=COUNT)
@click.option('--blue-window', type=COUNT)
@click.option('--s', 's', type=ARRAY)
@click.option('--r', 'r', type=ARRAY)
@click.option('--max-r', type=COUNT)
@click.option('--window', type=COUNT)
@click.option('--q-mode', type=click.Choice(['generic', 'zero']))
@click.option('--alpha', type=ARRAY)
@click.option('--beta', type=ARRAY)
@click.option('--max-size', type=COUNT)
@click.option('--cutoff', type=COUNT)
@click.option('--max-n', type=POSITIVE)
@click.option('--max-L', 'max_L', type=POSITIVE)
@click.option('--max-particles', type=POSITIVE)
@click.option('--with-three/--without-three', default=None)
@click.option('--spectral/--constant', default=None)
@click.option('--mutate', is_flag=True, default=None,
              help='Flip the sign of the alternating factor of R.')
@click.option('--format', 'output_format', default=OutputFormat.text.value,
              type=click.Choice([f.value for f in OutputFormat]))
@click.option('--timing', is_flag=True)
@click.pass_obj
def verify(interface: VerificationInterface, suite: str,
           output_format: str, timing: bool, **options: Any) -> None:
    """Run a verification SUITE; exit status 1 when it fails."""
    suite = Suite(suite)
    method, accepted = _SUITES[suite]
    unused = [
        key for key, value in options.items()
        if value is not None and value is not False and key not in accepted
    ]
    if unused:
        flags = {
            param.name: param.opts[0]
            for param in click.get_current_context().command.params
        }
        raise click.UsageError(
            f'{suite.value} does not take '
            + ', '.join(flags[key] for key in unused)
        )
    kwargs = {
        accepted[key]: value for key, value in options.items()
        if key in accepted and value is not None
    }
    if suite == Suite.bilinear:
        kwargs = {**_BILINEAR_DEFAULTS, **kwargs}
    if (options['alpha'] is None) != (options['beta'] is None):
        raise click.UsageError('--alpha and --beta go together')
    try:
        report = getattr(interface, method)(**kwargs)
    except TazrpError as error:
        raise click.ClickException(str(error))
    except (ValidationError, ValueError) as error:
        raise click.UsageError(str(error))
    _emit(writer_for(output_format, timing).write_report(report))
    sys.exit(0 if report.passed else 1)


@main.command('steady-state')
@click.option('--n', 'n', type=POSITIVE, required=True)
@click.option('--L', 'L', type=POSITIVE, required=True)
@click.option('--m', 'multiplicity', type=ARRAY, required=True)
@click.option('--cutoff', type=COUNT, default=None,
              help='Omit to run the stability sweep.')
@click.option('--cross-check', is_flag=True,
              help='Compare against the Markov matrix kernel.')
@click.option('--format', 'output_format', default=OutputFormat.text.value,
              type=click.Choice([f.value for f in OutputFormat]))
@click.pass_obj
def steady_state(interface: VerificationInterface, n: int, L: int,
                 multiplicity: Tuple[int, ...], cutoff: Optional[int],
                 cross_check: bool, output_format: str) -> None:
    """Matrix product steady state probabilities of a basic sector."""
    try:
        sector = Sector(n=n, L=L, multiplicity=multiplicity)
    except ValidationError as error:
        raise click.UsageError(str(error))
    if not sector.is_basic:
        raise click.UsageError(
            f'Sector {multiplicity} is not basic: every m_a must be >= 1'
        )
    try:
        rows, summary = interface.steady_state(sector, cutoff, cross_check)
    except Unstable as error:
        raise click.ClickException(
            f"{error}. Raise --cutoff above {error.cutoff}."
        )
    except TazrpError as error:
        raise click.ClickException(str(error))
    _emit(writer_for(output_format).write_table(rows, summary))


if __name__ == '__main__':
    main()
