# -*- coding: utf-8 -*-
"""
Exact search for separating stratifications.

Given a pool T of clauses and positive / negative defaults, a separating
stratification orders all of T into levels so that every positive default
is covered and no negative one is. The search refines the top levels
recursively: the lowest level is T minus T', and T' must be stratified to
cover the positives whose antecedent is inconsistent with T. Subsets that
failed are memoized, so each subset of T is expanded at most once.

Brute-force oracles enumerate every ordered partition and are meant for
cross-checking on small pools only.
"""
from dataclasses import dataclass, field
import itertools
import logging
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from poss_ml.errors import GuardViolationError
from poss_ml.logic.literals import (Clause, CnfFormula, Literal,
                                    LiteralConjunction, check_variable_name)
from poss_ml.logic.sat import entails, is_satisfiable
from poss_ml.possibilistic.defaults import (DefaultRule, LabeledExample,
                                            NEGATIVE, POSITIVE)
from poss_ml.possibilistic.inference import make_query_engine
from poss_ml.possibilistic.theory import (PossTheory, iter_ordered_partitions)

logger = logging.getLogger('exact_learning')

BRUTE_FORCE_MAX_CLAUSES = 6


@dataclass(frozen=True)
class SeparationProblem:
    theory: FrozenSet[Clause]
    positives: Tuple[DefaultRule, ...] = ()
    negatives: Tuple[DefaultRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'theory', frozenset(self.theory))
        object.__setattr__(self, 'positives', tuple(self.positives))
        object.__setattr__(self, 'negatives', tuple(self.negatives))

    @classmethod
    def from_examples(cls, pool, examples: Sequence[LabeledExample]):
        return cls(frozenset(pool),
                   tuple(e.rule for e in examples if e.is_positive),
                   tuple(e.rule for e in examples if not e.is_positive))

    def examples(self) -> List[LabeledExample]:
        return [LabeledExample(r, POSITIVE) for r in self.positives] + \
            [LabeledExample(r, NEGATIVE) for r in self.negatives]

    @property
    def variables(self):
        variables = set()
        for c in self.theory:
            variables |= c.variables
        for r in self.positives + self.negatives:
            variables |= r.variables
        return frozenset(variables)


@dataclass
class ExactSearchStats:
    nb_impl_calls: int = 0
    nb_closed: int = 0
    nb_sat_queries: int = 0
    nb_cached_queries: int = 0
    first_arguments: set = field(default_factory=set)

    @property
    def nb_distinct_first_arguments(self):
        return len(self.first_arguments)

    @property
    def params(self):
        return {'impl_calls': self.nb_impl_calls,
                'distinct_first_arguments':
                    self.nb_distinct_first_arguments,
                'closed': self.nb_closed,
                'sat_queries': self.nb_sat_queries,
                'cached_queries': self.nb_cached_queries}


def _subset_key(clauses):
    return tuple(sorted(str(c) for c in clauses))


class SeparatingStratificationSearch(object):
    """
    Example of usage:
        search = SeparatingStratificationSearch(problem)
        theory = search.run()   # None if no separating stratification
        search.stats.params
    """
    def __init__(self, problem: SeparationProblem):
        self.problem = problem
        self.stats = ExactSearchStats()
        self.closed = set()
        self._queries = {}

    def _query(self, kind, clauses, rule):
        key = (kind, _subset_key(clauses), rule)
        result = self._queries.get(key)
        if result is not None:
            self.stats.nb_cached_queries += 1
            return result
        self.stats.nb_sat_queries += 1
        formula = CnfFormula(list(clauses) +
                             rule.antecedent.unit_clauses())
        if kind == 'consistent':
            result = is_satisfiable(formula)
        else:
            result = entails(formula, rule.consequent)
        self._queries[key] = result
        return result

    def _is_consistent(self, clauses, rule):
        return self._query('consistent', clauses, rule)

    def _entails(self, clauses, rule):
        return self._query('entails', clauses, rule)

    def _covered_by_top(self, clauses, rule):
        """clauses + antecedent is consistent and entails the consequent."""
        return self._is_consistent(clauses, rule) and \
            self._entails(clauses, rule)

    def _covered_by_every_stratification(self, rule):
        if rule.consequent.is_tautology:
            return True
        return self._covered_by_top(self.problem.theory, rule)

    def run(self) -> Optional[PossTheory]:
        theory = frozenset(self.problem.theory)
        for rule in self.problem.negatives:
            if self._covered_by_every_stratification(rule):
                logger.info('Negative default "{}" is covered by every '
                            'stratification.'.format(rule))
                return None

        positives = [r for r in self.problem.positives
                     if not self._covered_by_every_stratification(r)]
        levels = self._stratify(theory, positives)
        logger.info('Exact search: {}'.format(self.stats.params))
        if levels is None:
            return None
        return PossTheory(tuple(levels))

    def _stratify(self, theory: FrozenSet[Clause],
                  positives: List[DefaultRule]):
        """Returns the list of levels (lowest first) of a stratification of
        `theory` covering `positives` and no negative, or None."""
        self.stats.nb_impl_calls += 1
        key = _subset_key(theory)
        self.stats.first_arguments.add(key)
        if key in self.closed:
            return None
        if len(theory) == 0:
            # Only defaults with an inconsistent antecedent remain; nothing
            # but a tautology follows from an empty cut.
            if all(r.consequent.is_tautology for r in positives):
                return []
            self.closed.add(key)
            self.stats.nb_closed += 1
            return None

        ordered = sorted(theory, key=str)
        for size in range(len(ordered) - 1, -1, -1):
            for subset in itertools.combinations(ordered, size):
                upper = frozenset(subset)
                if not all(self._entails(upper, r) for r in positives):
                    continue
                if any(self._covered_by_top(upper, r)
                       for r in self.problem.negatives):
                    continue
                remaining = [r for r in positives
                             if not self._covered_by_top(upper, r)]
                levels = self._stratify(upper, remaining)
                if levels is not None:
                    return [theory - upper] + levels

        self.closed.add(key)
        self.stats.nb_closed += 1
        return None


def stratify_separable(problem: SeparationProblem) -> Optional[PossTheory]:
    """
    Returns a stratification of all of problem.theory covering every
    positive and no negative default, or None if none exists.
    """
    return SeparatingStratificationSearch(problem).run()


def _check_brute_force_guard(problem):
    if len(problem.theory) > BRUTE_FORCE_MAX_CLAUSES:
        raise GuardViolationError(
            'Brute force is limited to {} clauses, got {}.'
            .format(BRUTE_FORCE_MAX_CLAUSES, len(problem.theory)))


def _iter_candidate_theories(problem, use_subsets):
    ordered = sorted(problem.theory, key=str)
    if not use_subsets:
        for blocks in iter_ordered_partitions(ordered):
            yield PossTheory(blocks)
        return
    for size in range(len(ordered) + 1):
        for subset in itertools.combinations(ordered, size):
            for blocks in iter_ordered_partitions(subset):
                yield PossTheory(blocks)


def _iter_scored_theories(problem, use_subsets):
    examples = problem.examples()
    engine = make_query_engine(problem.variables)
    queries = engine.compile([e.rule for e in examples])
    labels = np.array([e.label for e in examples], dtype=np.int8)
    for theory in _iter_candidate_theories(problem, use_subsets):
        predicted = np.where(engine.predict(theory, queries),
                             POSITIVE, NEGATIVE)
        yield theory, int((predicted != labels).sum())


def brute_force_separating(problem: SeparationProblem,
                           use_subsets=False) -> Optional[PossTheory]:
    """
    Enumerates ordered partitions of the pool and returns the first one
    that separates the examples.

    Parameters
    ----------
    problem: SeparationProblem
        At most BRUTE_FORCE_MAX_CLAUSES clauses.
    use_subsets: bool
        Also enumerate partitions of every subset of the pool, i.e. allow
        dropping clauses. This can succeed where full partitions fail.
    """
    _check_brute_force_guard(problem)
    for theory, errors in _iter_scored_theories(problem, use_subsets):
        if errors == 0:
            return theory
    return None


def min_error_stratification(problem: SeparationProblem, use_subsets=False
                             ) -> Tuple[PossTheory, int]:
    """The first stratification with the fewest misclassified examples,
    with its error count."""
    _check_brute_force_guard(problem)
    best = None
    for theory, errors in _iter_scored_theories(problem, use_subsets):
        if best is None or errors < best[1]:
            best = (theory, errors)
            if errors == 0:
                break
    return best


def qbf_fixture(phi: CnfFormula, exists_variables, aux='aux'
                ) -> SeparationProblem:
    """
    Separation instance which is separable iff there is an assignment of
    `exists_variables` under which phi holds for every assignment of the
    other variables.

    The pool holds x and !x for each existential x, plus the clauses of
    phi -> aux. Non-unit clauses of phi get one definition variable
    '<aux>_d<i>' each; unit clauses are negated in place.
    """
    check_variable_name(aux)
    vocabulary = set(phi.variables) | set(exists_variables)
    if aux in vocabulary:
        raise ValueError("Auxiliary variable '{}' already appears in the "
                         "formula.".format(aux))

    implication = [Literal(aux)]
    definitions = []
    for i, clause in enumerate(phi.clauses):
        if len(clause) == 1:
            implication.append(-next(iter(clause.literals)))
            continue
        d = Literal('{}_d{}'.format(aux, i))
        if d.variable in vocabulary:
            raise ValueError("Definition variable '{}' already appears in "
                             "the formula.".format(d.variable))
        implication.append(d)
        # d -> not clause
        definitions.extend(Clause([-d, -lit]) for lit in clause.literals)

    pool = set()
    for x in sorted(exists_variables):
        pool.add(Clause([Literal(x)]))
        pool.add(Clause([Literal(x, False)]))
    pool.add(Clause(implication))
    pool.update(definitions)
    goal = DefaultRule(LiteralConjunction(), Clause([Literal(aux)]))
    return SeparationProblem(frozenset(pool), (goal,), ())