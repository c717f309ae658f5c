# -*- coding: utf-8 -*-
"""
Greedy learner of stratified theories from noisy labeled defaults.

Each iteration:
    1. samples candidate clauses from misclassified examples;
    2. installs the candidate whose best position (an existing stratum or a
       new one) gives the lowest training error;
    3. drops literals from the installed clause while the error does not
       increase;
    4. deletes clauses whose removal does not increase the error;
    5. re-places every clause at its best position.
Ties prefer fewer strata, then shorter clauses, then the lexicographically
smaller clause, then the lower position.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import json
import logging
import os
import sys
from typing import FrozenSet, Iterable, List, NamedTuple, Optional, Sequence

import contextlib2
import numpy as np
from tqdm import tqdm

from poss_ml.errors import EmptyDatasetError
from poss_ml.experiment_utils.prints import (TqdmLoggingHandler,
                                             format_dict_to_str)
from poss_ml.learning.monitoring import (BestIterationMonitoring, Deadline,
                                         IterTimer, TimeoutReachedError,
                                         ValueHistoryMonitor)
from poss_ml.logic.literals import Clause
from poss_ml.possibilistic.defaults import LabeledExample, POSITIVE
from poss_ml.possibilistic.inference import (BACKEND_CHOICES, QueryEngine,
                                             make_query_engine)
from poss_ml.possibilistic.theory import PossTheory

logger = logging.getLogger('learning')
logger.propagate = False

TSV_COLUMNS = ['iteration', 'train_error', 'n_strata', 'n_clauses']


@dataclass(frozen=True)
class LearnConfig:
    iterations: int = 100
    timeout: Optional[float] = None
    sample_size: int = 10
    rng_seed: int = 1234
    hard_constraints: FrozenSet[Clause] = field(default_factory=frozenset)
    worker_count: int = 1
    patience: Optional[int] = None
    backend: str = 'auto'

    def __post_init__(self):
        object.__setattr__(self, 'hard_constraints',
                           frozenset(self.hard_constraints))
        if self.iterations < 1:
            raise ValueError('iterations must be >= 1, got {}'
                             .format(self.iterations))
        if self.sample_size < 1:
            raise ValueError('sample_size must be >= 1, got {}'
                             .format(self.sample_size))
        if self.worker_count < 1:
            raise ValueError('worker_count must be >= 1, got {}'
                             .format(self.worker_count))
        if self.timeout is not None and self.timeout <= 0:
            raise ValueError('timeout must be positive, got {}'
                             .format(self.timeout))
        if self.backend not in BACKEND_CHOICES:
            raise ValueError('backend must be one of {}'
                             .format(BACKEND_CHOICES))

    @property
    def params(self):
        return {'iterations': self.iterations,
                'timeout': self.timeout,
                'sample_size': self.sample_size,
                'rng_seed': self.rng_seed,
                'hard_constraints': sorted(str(c)
                                           for c in self.hard_constraints),
                'worker_count': self.worker_count,
                'patience': self.patience,
                'backend': self.backend}


class Position(NamedTuple):
    """Where a clause goes: a new stratum inserted at `index`, or the
    existing stratum `index` (0-based, lowest first)."""
    index: int
    new_stratum: bool

    @property
    def ordinal(self):
        """Positions from lowest to highest certainty: new@0, existing 0,
        new@1, existing 1, ..."""
        return 2 * self.index + (0 if self.new_stratum else 1)


class Placement(NamedTuple):
    theory: PossTheory
    clause: Clause
    position: Position
    errors: int

    @property
    def sort_key(self):
        return (self.errors, self.theory.n_strata, len(self.clause),
                str(self.clause), self.position.ordinal)


def iter_positions(theory: PossTheory):
    k = theory.n_strata
    for i in range(k + 1):
        yield Position(i, True)
        if i < k:
            yield Position(i, False)


class TheoryScorer(object):
    """
    Training error of theories on a fixed dataset. The queries are compiled
    once; predictions are cached by the engine under the canonical theory.

    Parameters
    ----------
    data: list of LabeledExample
    engine: QueryEngine, optional
        Built for the data and `extra_variables` if not given.
    worker_count: int
        Threads used by `errors_many`. Results keep the input order.
    deadline: Deadline, optional
        Checked before every evaluation.
    """
    def __init__(self, data: Sequence[LabeledExample],
                 engine: Optional[QueryEngine] = None, worker_count=1,
                 deadline: Optional[Deadline] = None, extra_variables=(),
                 backend='auto'):
        self.data = list(data)
        if len(self.data) == 0:
            raise EmptyDatasetError('Cannot learn from an empty dataset.')
        if engine is None:
            variables = set(extra_variables)
            for e in self.data:
                variables |= e.rule.variables
            engine = make_query_engine(variables, backend=backend)
        self.engine = engine
        self.queries = engine.compile([e.rule for e in self.data])
        self.labels = np.array([e.label for e in self.data], dtype=np.int8)
        self.deadline = deadline or Deadline(None)
        self.worker_count = worker_count
        self._executor = ThreadPoolExecutor(max_workers=worker_count) \
            if worker_count > 1 else None

    def __len__(self):
        return len(self.data)

    def predict(self, theory: PossTheory):
        covered = self.engine.predict(theory, self.queries)
        return np.where(covered, POSITIVE, -POSITIVE).astype(np.int8)

    def errors(self, theory: PossTheory) -> int:
        self.deadline.check()
        return int((self.predict(theory) != self.labels).sum())

    def errors_many(self, theories: Sequence[PossTheory]) -> List[int]:
        if self._executor is None:
            return [self.errors(t) for t in theories]
        return list(self._executor.map(self.errors, theories))

    def misclassified(self, theory: PossTheory) -> List[LabeledExample]:
        wrong = np.flatnonzero(self.predict(theory) != self.labels)
        return [self.data[i] for i in wrong]

    def close(self):
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None


def _as_scorer(data):
    if isinstance(data, TheoryScorer):
        return data
    return TheoryScorer(data)


def _sample_subset(literals, rng):
    return [lit for lit in literals if rng.random() < 0.5]


def sample_candidates(misclassified: Sequence[LabeledExample], rng,
                      sample_size=10, theory: Optional[PossTheory] = None
                      ) -> FrozenSet[Clause]:
    """
    Parameters
    ----------
    misclassified: list of LabeledExample
        Examples the working theory gets wrong. Must not be empty.
    rng: np.random.Generator
    sample_size: int
        Number of examples sampled, uniformly without replacement.
    theory: PossTheory, optional
        Clauses already in the theory (hard ones included) are discarded.

    Returns
    -------
    frozenset of Clause. From a positive a ~> b the candidate is
    !a' | b' with a', b' random sub-sets of the literals; from a negative it
    is !a' | !b' (literal-wise negation of b'). Tautologies are discarded.
    """
    if len(misclassified) == 0:
        raise ValueError('Cannot sample candidates without misclassified '
                         'examples.')
    size = min(sample_size, len(misclassified))
    chosen = rng.choice(len(misclassified), size=size, replace=False)

    candidates = set()
    for i in chosen:
        example = misclassified[int(i)]
        rule = example.rule
        antecedent = _sample_subset(rule.antecedent.sorted_literals(), rng)
        consequent_literals = rule.consequent.sorted_literals()
        consequent = _sample_subset(consequent_literals, rng)
        if len(consequent) == 0:
            consequent = _sample_subset(consequent_literals, rng)
        if len(consequent) == 0:
            consequent = [consequent_literals[
                int(rng.integers(len(consequent_literals)))]]
        if not example.is_positive:
            consequent = [-lit for lit in consequent]

        clause = Clause([-lit for lit in antecedent] + consequent)
        if clause.is_tautology:
            continue
        if theory is not None and theory.contains(clause):
            continue
        candidates.add(clause)
    return frozenset(candidates)


def find_best_placement(theory: PossTheory, candidates: Iterable[Clause],
                        data) -> Placement:
    """Scores every (candidate, position) pair and returns the best one by
    (errors, strata, clause length, clause text, position)."""
    scorer = _as_scorer(data)
    pairs = []
    for clause in sorted(set(candidates), key=str):
        for position in iter_positions(theory):
            placed = theory.add_clause(clause, position.index,
                                       position.new_stratum)
            pairs.append((placed, clause, position))
    if len(pairs) == 0:
        raise ValueError('No candidate clause to place.')

    errors = scorer.errors_many([p[0] for p in pairs])
    placements = [Placement(t, c, pos, e)
                  for (t, c, pos), e in zip(pairs, errors)]
    return min(placements, key=lambda p: p.sort_key)


def place_best(theory: PossTheory, candidates: Iterable[Clause],
               data) -> PossTheory:
    return find_best_placement(theory, candidates, data).theory


def minimize_clause(theory: PossTheory, clause: Clause, data) -> PossTheory:
    """Removes literals of `clause` one at a time, in literal order, as
    long as the training error does not increase."""
    scorer = _as_scorer(data)
    if theory.stratum_of(clause) is None:
        raise ValueError('Clause {} is not in a stratum of the theory.'
                         .format(clause))
    current = scorer.errors(theory)
    shrunk = True
    while shrunk and len(clause) > 1:
        shrunk = False
        for lit in clause.sorted_literals():
            smaller = Clause(clause.literals - {lit})
            if theory.contains(smaller):
                continue
            candidate = theory.replace_clause(clause, smaller)
            errors = scorer.errors(candidate)
            if errors <= current:
                logger.debug('Minimized {} into {}'.format(clause, smaller))
                theory, clause, current = candidate, smaller, errors
                shrunk = True
                break
    return theory


def prune_clauses(theory: PossTheory, data) -> PossTheory:
    """One pass, lowest stratum first: delete each clause whose removal
    does not increase the training error. Hard clauses are kept."""
    scorer = _as_scorer(data)
    current = scorer.errors(theory)
    for _, clause in theory.sorted_clauses():
        candidate = theory.remove_clause(clause)
        errors = scorer.errors(candidate)
        if errors <= current:
            logger.debug('Pruned {}'.format(clause))
            theory, current = candidate, errors
    return theory


def reoptimize_weights(theory: PossTheory, data) -> PossTheory:
    """Takes each clause out in turn and puts it back at its best
    position."""
    scorer = _as_scorer(data)
    for _, clause in theory.sorted_clauses():
        if theory.stratum_of(clause) is None:
            continue
        without = theory.remove_clause(clause)
        theory = find_best_placement(without, [clause], scorer).theory
    return theory


@contextlib2.contextmanager
def _logging_through_tqdm(log: logging.Logger):
    """Routes the logger's output through tqdm.write while progress bars
    are shown."""
    previous = list(log.handlers)
    for h in previous:
        log.removeHandler(h)
    handler = TqdmLoggingHandler()
    if len(previous) > 0:
        handler.setFormatter(previous[0].formatter)
    log.addHandler(handler)
    try:
        yield
    finally:
        log.removeHandler(handler)
        for h in previous:
            log.addHandler(h)


class HeuristicLearner(object):
    """
    Example of usage:
        learner = HeuristicLearner(data, LearnConfig(iterations=20))
        theory = learner.learn()
        learner.error_monitor.history  # training error per iteration
    """
    def __init__(self, data: Sequence[LabeledExample], cfg: LearnConfig,
                 engine: Optional[QueryEngine] = None, tsv_stream=None,
                 show_progress=False):
        """
        Parameters
        ----------
        data: list of LabeledExample
        cfg: LearnConfig
        engine: QueryEngine, optional
            Built from the data and hard constraint variables if None.
        tsv_stream: file-like, optional
            Receives one TSV line per iteration (e.g. sys.stderr).
        show_progress: bool
            Show a tqdm progress bar over the iterations.
        """
        self.data = list(data)
        if len(self.data) == 0:
            raise EmptyDatasetError('Cannot learn from an empty dataset.')
        self.cfg = cfg
        self.engine = engine
        self.tsv_stream = tsv_stream
        self.show_progress = show_progress

        self.rng = np.random.default_rng(cfg.rng_seed)
        self.theory = PossTheory(hard=cfg.hard_constraints)
        self.error_monitor = ValueHistoryMonitor('train_error')
        self.best_monitoring = BestIterationMonitoring(cfg.patience)
        self.nb_iterations_done = 0
        self.stop_reason = None

    @property
    def params(self):
        params = self.cfg.params
        params.update({'nb_examples': len(self.data)})
        return params

    def _write_tsv(self, values):
        if self.tsv_stream is not None:
            self.tsv_stream.write('\t'.join(str(v) for v in values) + '\n')
            self.tsv_stream.flush()

    def _record(self, iteration, errors):
        error = errors / len(self.data)
        self.error_monitor.update(error)
        self._write_tsv([iteration, '{:.6g}'.format(error),
                         self.theory.n_strata, self.theory.n_clauses])

    def _iterate(self, scorer, current):
        misclassified = scorer.misclassified(self.theory)
        if len(misclassified) == 0:
            self.stop_reason = 'no misclassified example'
            return current, False

        candidates = sample_candidates(misclassified, self.rng,
                                       self.cfg.sample_size, self.theory)
        if len(candidates) > 0:
            best = find_best_placement(self.theory, candidates, scorer)
            if best.errors <= current:
                logger.debug('Installing {} at {}'.format(best.clause,
                                                          best.position))
                self.theory = best.theory
                self.theory = minimize_clause(self.theory, best.clause,
                                              scorer)
            else:
                logger.debug('Best candidate {} would raise the error to {}.'
                             .format(best.clause, best.errors))
        self.theory = prune_clauses(self.theory, scorer)
        self.theory = reoptimize_weights(self.theory, scorer)
        return scorer.errors(self.theory), True

    def learn(self) -> PossTheory:
        logger.info('Heuristic learner parameters: {}'
                    .format(format_dict_to_str(self.params)))
        deadline = Deadline(self.cfg.timeout)
        scorer = TheoryScorer(self.data, self.engine, self.cfg.worker_count,
                              deadline,
                              extra_variables={v for c in
                                               self.cfg.hard_constraints
                                               for v in c.variables},
                              backend=self.cfg.backend)
        self._write_tsv(TSV_COLUMNS)

        iter_timer = IterTimer(history_len=20)
        iterations = range(1, self.cfg.iterations + 1)
        if self.show_progress:
            iterations = tqdm(iterations, file=sys.stderr,
                              desc='Learning', leave=False)
            log_context = _logging_through_tqdm(logger)
        else:
            # Context doing nothing instead
            log_context = contextlib2.nullcontext()
        try:
            with log_context:
                current = scorer.errors(self.theory)
                self._record(0, current)
                for iteration in iter_timer(iterations):
                    before, snapshot = current, self.theory
                    current, is_running = self._iterate(scorer, current)
                    if not is_running:
                        break
                    if current > before:
                        logger.warning('Iteration {} raised the training '
                                       'error; reverting.'.format(iteration))
                        self.theory, current = snapshot, before
                    self.nb_iterations_done = iteration
                    self._record(iteration, current)

                    self.best_monitoring.update(current, iteration)
                    if self.best_monitoring.is_patience_reached:
                        self.stop_reason = 'patience reached'
                        break
                else:
                    self.stop_reason = 'iterations done'
        except TimeoutReachedError as e:
            self.stop_reason = e.message
        finally:
            scorer.close()

        logger.info('Learning stopped after {} iteration(s) ({}). Mean '
                    'iteration time: {:.2f} s.'
                    .format(self.nb_iterations_done, self.stop_reason,
                            iter_timer.mean))
        return self.theory

    def save_logs(self, log_dir):
        """Saves train_error.npy and params.json into log_dir."""
        if not os.path.isdir(log_dir):
            logger.info('Creating directory {}'.format(log_dir))
            os.makedirs(log_dir)
        np.save(os.path.join(log_dir, 'train_error.npy'),
                self.error_monitor.as_array())
        params = self.params
        params.update({'nb_iterations_done': self.nb_iterations_done,
                       'stop_reason': self.stop_reason})
        with open(os.path.join(log_dir, 'params.json'), 'w') as json_file:
            json_file.write(json.dumps(params, indent=4,
                                       separators=(',', ': ')))


def learn(data: Sequence[LabeledExample], cfg: LearnConfig) -> PossTheory:
    return HeuristicLearner(data, cfg).learn()
