# -*- coding: utf-8 -*-
"""
Possibilistic inference over stratified theories.

The evidence of a query forms an extra stratum placed above every stratum
of the theory and below the hard clauses. A query is answered by
computing the inconsistency level of that augmented theory, keeping the
strict cut above it, and checking classical entailment from the cut.

Two engines answer batches of queries:
    - SatQueryEngine: satisfiability calls, with a shared query cache,
      evidence propagation and relevance filtering.
    - WorldQueryEngine: numpy world enumeration, vectorized over the
      examples. Only for small vocabularies.
Both agree with the naive definition on every query.
"""
import itertools
import logging
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from poss_ml.cache.cache_manager import ThreadSafeCacheManager
from poss_ml.logic.literals import Clause, CnfFormula, LiteralConjunction
from poss_ml.logic.sat import SatCallCounter, entails, is_satisfiable
from poss_ml.logic.worlds import WorldSpace
from poss_ml.possibilistic.defaults import (NEGATIVE, POSITIVE, DefaultRule)
from poss_ml.possibilistic.theory import PossTheory, strict_cut_clauses

logger = logging.getLogger('poss_engine')

WORLD_BACKEND_MAX_VARIABLES = 12
BACKEND_CHOICES = ['auto', 'sat', 'worlds']


class InconsistencyLevel(NamedTuple):
    level: int
    nb_sat_calls: int
    is_hard_inconsistent: bool


def _lowest_consistent_index(top: int, is_consistent: Callable[[int], bool]):
    """Binary search of the smallest j in [0, top] with a consistent cut,
    assuming cuts grow more consistent with j. Returns top + 1 if even
    cut `top` is inconsistent. At most ceil(log2(top + 1)) + 1 calls."""
    lo, hi = 0, top
    hi_is_consistent = False
    while lo < hi:
        mid = (lo + hi) // 2
        if is_consistent(mid):
            hi = mid
            hi_is_consistent = True
        else:
            lo = mid + 1
    if hi_is_consistent or is_consistent(lo):
        return lo
    return top + 1


def _search_inconsistency(strata, hard, counter=None) -> InconsistencyLevel:
    local = SatCallCounter()

    def is_consistent(j):
        if counter is not None:
            counter.increment()
        return is_satisfiable(strict_cut_clauses(strata, hard, j), local)

    k = len(strata)
    level = _lowest_consistent_index(k, is_consistent)
    if level > k:
        return InconsistencyLevel(k, local.count, True)
    return InconsistencyLevel(level, local.count, False)


def compute_inconsistency(theory: PossTheory,
                          counter: Optional[SatCallCounter] = None
                          ) -> InconsistencyLevel:
    """
    Parameters
    ----------
    theory: PossTheory
    counter: SatCallCounter, optional
        Shared counter, also incremented.

    Returns
    -------
    InconsistencyLevel. level is the smallest j in [0, k] such that
    strict_cut(theory, j) is satisfiable. If the hard clauses alone are
    unsatisfiable, level is k and is_hard_inconsistent is set.
    """
    result = _search_inconsistency(theory.strata, theory.hard, counter)
    if result.is_hard_inconsistent:
        logger.warning('The hard clauses of this theory are inconsistent.')
    return result


def inconsistency_level(theory: PossTheory,
                        counter: Optional[SatCallCounter] = None) -> int:
    return compute_inconsistency(theory, counter).level


def query_inconsistency(theory: PossTheory, evidence: CnfFormula,
                        counter: Optional[SatCallCounter] = None
                        ) -> InconsistencyLevel:
    """Inconsistency level of the theory once the evidence is added as a
    top query stratum (below the hard clauses). level lies in [0, k + 1]
    for k strata."""
    return _search_inconsistency(list(theory.strata) + [evidence.clauses],
                                 theory.hard, counter)


def poss_entails_cnf(theory: PossTheory, evidence: CnfFormula,
                     goal_negation: CnfFormula,
                     counter: Optional[SatCallCounter] = None) -> bool:
    """
    Generalized query: the evidence is any CNF (it forms the query
    stratum) and the goal is given through a CNF of its negation, so that
    goals with auxiliary variables keep their meaning.

    Returns True iff the consistent cut of theory + evidence, together
    with goal_negation, is unsatisfiable.
    """
    strata = list(theory.strata) + [evidence.clauses]
    level = query_inconsistency(theory, evidence, counter).level
    cut = strict_cut_clauses(strata, theory.hard, level)
    return not is_satisfiable(cut + goal_negation, counter)


def poss_entails_naive(theory: PossTheory, evidence: LiteralConjunction,
                       goal: Clause,
                       counter: Optional[SatCallCounter] = None) -> bool:
    """Direct definition: evidence literals as a new top stratum below the
    hard clauses, inconsistency level, strict cut, classical entailment.
    Hard-inconsistent theories entail every goal."""
    return poss_entails_cnf(theory, CnfFormula(evidence.unit_clauses()),
                            CnfFormula(goal.negation().unit_clauses()),
                            counter)


def _simplify(clause: Clause, values):
    """Clause under a partial assignment: None if satisfied, else the
    clause without its falsified literals."""
    remaining = []
    for lit in clause.literals:
        v = values.get(lit.variable)
        if v is None:
            remaining.append(lit)
        elif v == lit.polarity:
            return None
    return Clause(remaining)


def _relevant_clauses(clauses: Sequence[Clause], variables):
    """Clauses connected to `variables` through shared variables."""
    reached = set(variables)
    pending = list(clauses)
    relevant = []
    changed = True
    while changed:
        changed = False
        others = []
        for c in pending:
            if c.variables & reached:
                relevant.append(c)
                reached |= c.variables
                changed = True
            else:
                others.append(c)
        pending = others
    return relevant


def poss_entails_optimized(theory: PossTheory, evidence: LiteralConjunction,
                           goal: Clause,
                           counter: Optional[SatCallCounter] = None) -> bool:
    """Same answer as poss_entails_naive. The evidence literals are
    propagated into the theory, and the final entailment only keeps the
    clauses connected to the goal. Irrelevant clauses still take part in
    the inconsistency level, since they can drown relevant ones."""
    hard_cnf = CnfFormula(theory.hard)
    if goal.is_tautology:
        return True
    if not evidence.is_consistent:
        return entails(hard_cnf, goal, counter)

    values = {lit.variable: lit.polarity for lit in evidence.literals}
    hard = [s for s in (_simplify(c, values) for c in theory.hard)
            if s is not None]
    if any(c.is_empty for c in hard):
        return entails(hard_cnf, goal, counter)
    strata = [[s for s in (_simplify(c, values) for c in stratum)
               if s is not None] for stratum in theory.strata]

    result = _search_inconsistency(strata, hard, counter)
    if result.is_hard_inconsistent:
        return entails(hard_cnf, goal, counter)
    level = result.level

    reduced_goal = _simplify(goal, values)
    if reduced_goal is None:
        return True
    cut = strict_cut_clauses(strata, hard, level).clauses
    if reduced_goal.is_empty:
        # The cut is consistent with the evidence, which falsifies the goal.
        return False
    relevant = _relevant_clauses(cut, reduced_goal.variables)
    return entails(CnfFormula(relevant), reduced_goal, counter)


def poss_entails(theory: PossTheory, evidence: LiteralConjunction,
                 goal: Clause, optimized=True,
                 counter: Optional[SatCallCounter] = None) -> bool:
    if optimized:
        return poss_entails_optimized(theory, evidence, goal, counter)
    return poss_entails_naive(theory, evidence, goal, counter)


def covers(theory: PossTheory, rule: DefaultRule, engine=None) -> int:
    """+1 if the theory concludes the rule's consequent from its
    antecedent, else -1."""
    if engine is not None:
        is_covered = engine.poss_entails(theory, rule.antecedent,
                                         rule.consequent)
    else:
        is_covered = poss_entails(theory, rule.antecedent, rule.consequent)
    return POSITIVE if is_covered else NEGATIVE


def covers_cnf(theory: PossTheory, evidence: CnfFormula,
               goal_negation: CnfFormula) -> int:
    return POSITIVE if poss_entails_cnf(theory, evidence, goal_negation) \
        else NEGATIVE


class CompiledQueries(object):
    """A fixed batch of queries, prepared once for an engine."""
    _tokens = itertools.count()

    def __init__(self, rules: Sequence[DefaultRule], evidence=None,
                 goal=None):
        self.rules = list(rules)
        self.evidence = evidence
        self.goal = goal
        self.token = next(CompiledQueries._tokens)

    def __len__(self):
        return len(self.rules)


class QueryEngine(object):
    """Answers batches of possibilistic queries. Predictions are cached
    per (theory, batch)."""
    def __init__(self, cache_size=10000):
        self.cache_size = cache_size
        self.prediction_cache = ThreadSafeCacheManager(cache_size)

    @property
    def params(self):
        return {'type': type(self).__name__,
                'cache_size': self.cache_size}

    def compile(self, rules: Sequence[DefaultRule]) -> CompiledQueries:
        return CompiledQueries(rules)

    def poss_entails(self, theory: PossTheory,
                     evidence: LiteralConjunction, goal: Clause) -> bool:
        raise NotImplementedError

    def _predict(self, theory: PossTheory,
                 queries: CompiledQueries) -> np.ndarray:
        raise NotImplementedError

    def predict(self, theory: PossTheory,
                queries: CompiledQueries) -> np.ndarray:
        """Boolean array: is query i entailed by the theory."""
        key = (theory.canonical_key, queries.token)
        result = self.prediction_cache.get(key)
        if result is None:
            result = self._predict(theory, queries)
            self.prediction_cache[key] = result
        return result


class SatQueryEngine(QueryEngine):
    """
    Queries through satisfiability calls. Single answers are cached under
    (canonical theory, evidence, goal); the cache is shared by threads.
    """
    def __init__(self, cache_size=100000, optimized=True):
        super().__init__(cache_size)
        self.optimized = optimized
        self.query_cache = ThreadSafeCacheManager(cache_size)
        self.counter = SatCallCounter()

    @property
    def params(self):
        params = super().params
        params.update({'optimized': self.optimized})
        return params

    @property
    def stats(self):
        stats = self.query_cache.stats
        stats['sat_calls'] = self.counter.count
        return stats

    def poss_entails(self, theory, evidence, goal):
        key = (theory.canonical_key, evidence, goal)
        result = self.query_cache.get(key)
        if result is None:
            result = poss_entails(theory, evidence, goal,
                                  optimized=self.optimized,
                                  counter=self.counter)
            self.query_cache[key] = result
        return result

    def _predict(self, theory, queries):
        return np.array([self.poss_entails(theory, r.antecedent,
                                           r.consequent)
                         for r in queries.rules], dtype=bool)


class WorldQueryEngine(QueryEngine):
    """
    Queries by explicit world enumeration. Every cut of a theory becomes
    a mask over the worlds, so a whole batch is answered with a few array
    operations.
    """
    def __init__(self, variables, cache_size=10000,
                 max_variables=WORLD_BACKEND_MAX_VARIABLES):
        super().__init__(cache_size)
        self.space = WorldSpace(variables, max_variables=max_variables)

    @property
    def params(self):
        params = super().params
        params.update({'variables': list(self.space.variables)})
        return params

    def compile(self, rules):
        rules = list(rules)
        w = self.space.nb_worlds
        evidence = np.empty((len(rules), w), dtype=bool)
        goal = np.empty((len(rules), w), dtype=bool)
        for i, r in enumerate(rules):
            evidence[i] = self.space.conjunction_mask(r.antecedent)
            goal[i] = self.space.clause_mask(r.consequent)
        return CompiledQueries(rules, evidence, goal)

    def _predict(self, theory, queries):
        m = len(queries)
        if m == 0:
            return np.zeros(0, dtype=bool)
        k = theory.n_strata
        hard = self.space.clauses_mask(theory.hard)

        # cuts[j]: worlds of the strata above j and of the hard clauses.
        cuts = np.empty((k + 1, self.space.nb_worlds), dtype=bool)
        cuts[k] = hard
        for j in reversed(range(k)):
            cuts[j] = cuts[j + 1] & self.space.clauses_mask(theory.strata[j])

        overlap = queries.evidence.astype(np.float32) @ \
            cuts.T.astype(np.float32)
        consistent = overlap > 0.5
        has_level = consistent.any(axis=1)
        level = consistent.argmax(axis=1)

        result = np.empty(m, dtype=bool)
        rows = np.flatnonzero(has_level)
        if len(rows) > 0:
            cut = cuts[level[rows]] & queries.evidence[rows]
            result[rows] = ~(cut & ~queries.goal[rows]).any(axis=1)
        rows = np.flatnonzero(~has_level)
        if len(rows) > 0:
            result[rows] = ~(hard[None, :] & ~queries.goal[rows]).any(axis=1)
        return result

    def poss_entails(self, theory, evidence, goal):
        queries = self.compile([DefaultRule(evidence, goal)])
        return bool(self._predict(theory, queries)[0])


def make_query_engine(variables, backend='auto', cache_size=10000):
    """
    Parameters
    ----------
    variables: iterable of str
        Every variable the queried theories and rules may use.
    backend: str
        'sat', 'worlds', or 'auto' (worlds for small vocabularies).
    """
    variables = sorted(set(variables))
    if backend not in BACKEND_CHOICES:
        raise ValueError('Unknown backend {}. Choose from {}.'
                         .format(backend, BACKEND_CHOICES))
    if backend == 'auto':
        backend = 'worlds' if \
            len(variables) <= WORLD_BACKEND_MAX_VARIABLES else 'sat'
    logger.debug('Query engine: {} backend over {} variables.'
                 .format(backend, len(variables)))
    if backend == 'worlds':
        return WorldQueryEngine(variables, cache_size)
    return SatQueryEngine(cache_size)


def predict_labels(theory: PossTheory, rules: List[DefaultRule],
                   engine: QueryEngine) -> np.ndarray:
    """+1 / -1 for each rule."""
    covered = engine.predict(theory, engine.compile(rules))
    return np.where(covered, POSITIVE, NEGATIVE).astype(np.int8)
