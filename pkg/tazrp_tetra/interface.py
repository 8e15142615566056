from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple
import logging
import time

from . import layer, tazrp, threed_r
from .errors import TazrpError
from .fock import states_up_to
from .models import (
    Configuration, FockSpace, Report, Sector, Settings, SteadyStateRow, Suite,
    render_configuration,
)
from .threed_r import CoeffFn

logger = logging.getLogger(__name__)

Task = Tuple[Callable[..., Report], Dict[str, Any]]


def coefficient_formula(mutate: bool = False) -> CoeffFn:
    """The R coefficients, or the sign-flipped variant used as a negative
    control."""
    return threed_r.r_coeff_variant(+1) if mutate else threed_r.r_coeff


def _run(task: Task) -> Report:
    fn, kwargs = task
    return fn(**kwargs)


def _r_properties(max_index: int, mutate: bool) -> Report:
    return threed_r.check_r_properties(max_index, coefficient_formula(mutate))


def _tetrahedron(states: List[Tuple[int, ...]], max_total_mode: int,
                 spectral: bool, mutate: bool) -> Report:
    return threed_r.check_tetrahedron(
        max_total_mode, spectral, coefficient_formula(mutate), states
    )


def _eigenvectors(max_component: int, mutate: bool) -> Report:
    return threed_r.check_eigenvectors(
        max_component, coeff=coefficient_formula(mutate)
    )


def _local_states(n: int, max_size: int) -> List[Tuple[int, ...]]:
    return states_up_to(n, max_size)


class VerificationInterface:
    """Runs verification suites and steady state computations. Independent
    checks are fanned out over `settings.workers` processes and merged in
    submission order, so the merged report does not depend on scheduling.
    """
    def __init__(self, settings: Optional[Settings] = None) -> None:
        self.settings = settings or Settings()

    def run_tasks(
        self, suite: Suite, parameters: Dict[str, Any], tasks: Sequence[Task]
    ) -> Report:
        started = time.perf_counter()
        tasks = list(tasks)
        logger.info(
            f'Running {len(tasks)} {Suite(suite).value} checks on '
            f'{self.settings.workers} worker(s)'
        )
        if self.settings.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(self.settings.workers) as pool:
                reports = list(pool.map(_run, tasks))
        else:
            reports = [_run(task) for task in tasks]
        report = Report.merge(Suite(suite).value, parameters, reports)
        report.timing_ms = (time.perf_counter() - started) * 1000.0
        if not report.passed:
            logger.warning(
                f'{report.suite} failed on {len(report.failures)} elements'
            )
        return report

    def verify_r_properties(
        self, max_index: int = 3, mutate: bool = False
    ) -> Report:
        tasks = [(_r_properties, {'max_index': max_index, 'mutate': mutate})]
        return self.run_tasks(
            Suite.r_properties, {'max_index': max_index, 'mutate': mutate},
            tasks,
        )

    def verify_tetrahedron(
        self, max_mode: int = 3, spectral: bool = True, mutate: bool = False
    ) -> Report:
        states = states_up_to(6, max_mode)
        chunks = max(1, self.settings.workers)
        tasks = [
            (_tetrahedron, {
                'states': states[k::chunks], 'max_total_mode': max_mode,
                'spectral': spectral, 'mutate': mutate,
            })
            for k in range(chunks) if states[k::chunks]
        ]
        return self.run_tasks(
            Suite.tetrahedron,
            {'max_mode': max_mode, 'spectral': spectral, 'mutate': mutate},
            tasks,
        )

    def verify_eigenvectors(
        self, max_component: int = 3, mutate: bool = False
    ) -> Report:
        tasks = [(_eigenvectors, {'max_component': max_component,
                                  'mutate': mutate})]
        return self.run_tasks(
            Suite.eigenvectors, {'max_component': max_component}, tasks
        )

    def verify_intertwining(
        self, m: int = 1, n: int = 1, max_label: int = 1,
        green_max: int = 1, blue_window: int = 1,
    ) -> Report:
        kwargs = {'m': m, 'n': n, 'max_label': max_label,
                  'green_max': green_max, 'blue_window': blue_window}
        return self.run_tasks(
            Suite.intertwining, kwargs,
            [(layer.check_intertwining, kwargs)],
        )

    def verify_bilinear(
        self, m: int, n: int, s: Sequence[int], r: Sequence[int],
        window: int, q_mode: str = 'generic',
    ) -> Report:
        space = FockSpace(cutoff=window, q_mode=q_mode)
        kwargs = {'m': m, 'n': n, 's': tuple(s), 'r': tuple(r),
                  'window': window, 'space': space,
                  'exploration_bound': self.settings.exploration_bound}
        return self.run_tasks(
            Suite.bilinear,
            {'m': m, 'n': n, 's': tuple(s), 'r': tuple(r), 'window': window,
             'q_mode': q_mode},
            [(layer.check_bilinear, kwargs)],
        )

    def verify_q0_limit(
        self, max_index: int = 4, m: int = 2, n: int = 2,
        max_label: int = 1, window: int = 2,
    ) -> Report:
        tasks = [
            (threed_r.check_q0_limit, {'max_index': max_index}),
            (layer.check_q0_layer, {'m': m, 'n': n, 'max_label': max_label,
                                    'window': window}),
        ]
        return self.run_tasks(
            Suite.q0_limit,
            {'max_index': max_index, 'm': m, 'n': n, 'max_label': max_label,
             'window': window},
            tasks,
        )

    def _pair_tasks(
        self, check: Callable[..., Report], n: int,
        alpha: Optional[Sequence[int]], beta: Optional[Sequence[int]],
        max_size: int, cutoff: int,
    ) -> List[Task]:
        if alpha is not None and beta is not None:
            if len(alpha) != n or len(beta) != n:
                raise ValueError(
                    f'alpha={tuple(alpha)} and beta={tuple(beta)} need '
                    f'{n} entries each'
                )
            pairs = [(tuple(alpha), tuple(beta))]
        else:
            states = _local_states(n, max_size)
            pairs = list(product(states, states))
        return [
            (check, {'alpha': a, 'beta': b, 'cutoff': cutoff})
            for a, b in pairs
        ]

    def verify_hat_relation(
        self, n: int = 2, alpha: Optional[Sequence[int]] = None,
        beta: Optional[Sequence[int]] = None, max_size: int = 2,
        cutoff: int = 8,
    ) -> Report:
        tasks = self._pair_tasks(
            tazrp.check_hat_relation, n, alpha, beta, max_size, cutoff
        )
        alphas = sorted({task[1]['alpha'] for task in tasks})
        tasks += [
            (tazrp.check_hat_derivative, {'alpha': a, 'cutoff': cutoff})
            for a in alphas
        ]
        return self.run_tasks(
            Suite.hat_relation,
            {'n': n, 'alpha': alpha, 'beta': beta, 'max_size': max_size,
             'cutoff': cutoff},
            tasks,
        )

    def verify_bilinear_x(
        self, n: int = 2, alpha: Optional[Sequence[int]] = None,
        beta: Optional[Sequence[int]] = None, max_size: int = 2,
        cutoff: int = 8,
    ) -> Report:
        tasks = self._pair_tasks(
            tazrp.check_bilinear_X, n, alpha, beta, max_size, cutoff
        )
        return self.run_tasks(
            Suite.bilinear_x,
            {'n': n, 'alpha': alpha, 'beta': beta, 'max_size': max_size,
             'cutoff': cutoff},
            tasks,
        )

    def verify_embedding(
        self, n: int = 2, max_r: int = 2, window: int = 3
    ) -> Report:
        tasks = [
            (tazrp.check_embedding, {'n': n, 'r': r, 'window': window})
            for r in range(max_r + 1)
        ]
        return self.run_tasks(
            Suite.embedding, {'n': n, 'max_r': max_r, 'window': window},
            tasks,
        )

    def verify_f_symmetry(self, max_index: int = 5) -> Report:
        return self.run_tasks(
            Suite.f_symmetry, {'max': max_index},
            [(layer.check_f_symmetry, {'max_index': max_index})],
        )

    def verify_oracle(
        self, max_n: int = 2, max_L: int = 4, max_particles: int = 4,
        with_three: bool = True,
    ) -> Report:
        sectors = tazrp.basic_sectors(max_n, max_L, max_particles)
        if with_three:
            sectors.append(Sector(n=3, L=3, multiplicity=(1, 1, 1)))
        tasks = [
            (tazrp.check_sector_oracle, {'sector': sector})
            for sector in sectors
        ]
        return self.run_tasks(
            Suite.oracle,
            {'max_n': max_n, 'max_L': max_L, 'max_particles': max_particles,
             'with_three': with_three},
            tasks,
        )

    def verify_markov(
        self, n: int = 2, L: int = 3, multiplicity: Sequence[int] = (2, 1),
        max_size: int = 4,
    ) -> Report:
        sector = Sector(n=n, L=L, multiplicity=tuple(multiplicity))
        tasks = [
            (tazrp.check_markov_property, {'sector': sector}),
            (tazrp.check_total_order, {'max_size': max_size, 'n': n}),
        ]
        return self.run_tasks(
            Suite.markov,
            {'n': n, 'L': L, 'm': tuple(multiplicity), 'max_size': max_size},
            tasks,
        )

    def steady_state(
        self, sector: Sector, cutoff: Optional[int] = None,
        cross_check: bool = False,
    ) -> Tuple[List[SteadyStateRow], Dict[str, str]]:
        """Matrix product probabilities of every configuration of a basic
        sector. Without `cutoff` the stability sweep picks one.

        Raises:
            Unstable: the traces at `cutoff` and `cutoff + 1` differ
            TazrpError: `cross_check` found a disagreement with the oracle
        """
        if not sector.is_basic:
            raise ValueError(f'Sector {sector.multiplicity} is not basic')
        if cutoff is None:
            cutoff, table = tazrp.stable_cutoff(
                sector, self.settings.stability_start,
                self.settings.stability_limit,
            )
        else:
            table = {
                config: tazrp.mp_probability(sector, config, cutoff)
                for config in sector.configurations()
            }
        rows = [
            SteadyStateRow(config=render_configuration(config),
                           probability=value)
            for config, value in sorted(table.items())
        ]
        summary = {'cutoff': str(cutoff), 'sum': str(sum(table.values()))}
        if cross_check:
            summary['cross_check'] = self._cross_check(sector, table)
        return rows, summary

    def _cross_check(
        self, sector: Sector, table: Dict[Configuration, int]
    ) -> str:
        expected = tazrp.steady_state_oracle(sector)
        wrong = [
            render_configuration(config) for config in sorted(expected)
            if expected[config] != table.get(config)
        ]
        if wrong or sum(table.values()) != sector.normalization:
            raise TazrpError(
                f'Matrix product disagrees with the oracle on {wrong}'
            )
        return 'pass'
