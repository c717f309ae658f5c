# -*- coding: utf-8 -*-
"""
Exhaustive MAP inference over weighted clause theories, and generation of
labeled defaults from MAP entailment.

A world scores the sum of the weights of the clauses it satisfies. Given
evidence, the MAP models are the evidence models of maximal score; a
literal is MAP-entailed when every MAP model satisfies it.
"""
from dataclasses import dataclass
import logging
from typing import FrozenSet, List, Tuple

import numpy as np
from tqdm import tqdm

from poss_ml.errors import GuardViolationError
from poss_ml.logic.literals import (Assignment, Clause, Literal,
                                    LiteralConjunction)
from poss_ml.logic.worlds import WorldSpace
from poss_ml.possibilistic.defaults import (DefaultRule, LabeledExample,
                                            NEGATIVE, POSITIVE)

logger = logging.getLogger('map_oracle')

TIE_TOLERANCE = 1e-9
MAP_MAX_VARIABLES = 20


@dataclass(frozen=True)
class WeightedClauseTheory:
    items: Tuple[Tuple[Clause, float], ...] = ()
    vocabulary: FrozenSet[str] = frozenset()

    def __post_init__(self):
        items = tuple((c, float(w)) for c, w in self.items)
        vocabulary = frozenset(self.vocabulary) | \
            frozenset(v for c, _ in items for v in c.variables)
        object.__setattr__(self, 'items', items)
        object.__setattr__(self, 'vocabulary', vocabulary)
        if not all(np.isfinite(w) for _, w in items):
            raise ValueError('Weights must be finite.')
        if len(vocabulary) > MAP_MAX_VARIABLES:
            raise GuardViolationError(
                'MAP enumeration is limited to {} variables, got {}.'
                .format(MAP_MAX_VARIABLES, len(vocabulary)))

    def scaled(self, factor: float):
        return WeightedClauseTheory(
            tuple((c, w * factor) for c, w in self.items), self.vocabulary)


@dataclass(frozen=True)
class MapQuery:
    evidence: LiteralConjunction
    conclusion: Literal

    def __post_init__(self):
        if len(self.evidence.variables) != len(self.evidence.literals):
            raise ValueError('Evidence {} mentions a variable twice.'
                             .format(self.evidence))


class MapOracle(object):
    """
    Scores every world of the theory once; each query is then a masked
    maximum.

    Example of usage:
        oracle = MapOracle(m)
        oracle.map_entails(MapQuery(evidence, conclusion))
    """
    def __init__(self, m: WeightedClauseTheory):
        self.m = m
        self.space = WorldSpace(m.vocabulary, max_variables=MAP_MAX_VARIABLES)
        weights = np.array([w for _, w in m.items], dtype=np.float64)
        if len(m.items) == 0:
            self.scores = np.zeros(self.space.nb_worlds)
        else:
            satisfied = np.stack([self.space.clause_mask(c)
                                  for c, _ in m.items], axis=1)
            self.scores = satisfied.astype(np.float64) @ weights

    def _map_mask(self, evidence: LiteralConjunction):
        evidence_mask = self.space.conjunction_mask(evidence)
        if not evidence_mask.any():
            raise ValueError('Evidence {} has no model.'.format(evidence))
        best = self.scores[evidence_mask].max()
        tolerance = TIE_TOLERANCE * max(1.0, abs(best))
        return evidence_mask & (self.scores >= best - tolerance)

    def map_models(self, evidence: LiteralConjunction):
        return frozenset(self.space.models(self._map_mask(evidence)))

    def map_entails(self, q: MapQuery) -> bool:
        unknown = (q.evidence.variables | {q.conclusion.variable}) - \
            set(self.space.variables)
        if len(unknown) > 0:
            raise ValueError('Variable(s) {} not in the vocabulary.'
                             .format(', '.join(sorted(unknown))))
        mask = self._map_mask(q.evidence)
        return bool(self.space.literal_mask(q.conclusion)[mask].all())


def score(m: WeightedClauseTheory, w: Assignment) -> float:
    return float(sum(weight for c, weight in m.items if w.satisfies(c)))


def map_models(m: WeightedClauseTheory, evidence: LiteralConjunction):
    return MapOracle(m).map_models(evidence)


def map_entails(m: WeightedClauseTheory, q: MapQuery) -> bool:
    return MapOracle(m).map_entails(q)


def random_query(vocabulary, k: int, rng) -> MapQuery:
    """Evidence of 1..k literals (uniform length) on distinct variables and
    a conclusion literal on another variable."""
    variables = sorted(vocabulary)
    if k < 1:
        raise ValueError('k must be >= 1, got {}'.format(k))
    if k >= len(variables):
        raise ValueError('k={} leaves no conclusion variable among {} '
                         'variables.'.format(k, len(variables)))
    length = int(rng.integers(1, k + 1))
    chosen = rng.choice(len(variables), size=length + 1, replace=False)
    polarities = rng.integers(0, 2, size=length + 1).astype(bool)
    evidence = LiteralConjunction(
        Literal(variables[int(i)], bool(p))
        for i, p in zip(chosen[:length], polarities[:length]))
    conclusion = Literal(variables[int(chosen[length])],
                         bool(polarities[length]))
    return MapQuery(evidence, conclusion)


def generate_dataset(m: WeightedClauseTheory, k: int, n: int, rng,
                     show_progress=False) -> List[LabeledExample]:
    """
    Parameters
    ----------
    m: WeightedClauseTheory
    k: int
        Maximal evidence length, 1 <= k < |vocabulary|.
    n: int
        Number of examples.
    rng: np.random.Generator

    Returns
    -------
    n labeled defaults 'evidence ~> conclusion', +1 iff MAP-entailed.
    """
    if n < 1:
        raise ValueError('n must be >= 1, got {}'.format(n))
    oracle = MapOracle(m)
    examples = []
    for _ in tqdm(range(n), disable=not show_progress, leave=False,
                  desc='MAP queries'):
        q = random_query(m.vocabulary, k, rng)
        label = POSITIVE if oracle.map_entails(q) else NEGATIVE
        rule = DefaultRule(q.evidence, Clause([q.conclusion]))
        examples.append(LabeledExample(rule, label))
    logger.info('Generated {} examples, {} positive.'
                .format(n, sum(e.is_positive for e in examples)))
    return examples


def random_weighted_theory(n_vars: int, n_clauses: int, rng,
                           weight_range=(-2.0, 2.0), max_len=3,
                           prefix='a') -> WeightedClauseTheory:
    """Random clauses of 1..max_len literals on distinct variables
    <prefix>1..<prefix><n_vars>, with uniform weights."""
    variables = ['{}{}'.format(prefix, i + 1) for i in range(n_vars)]
    max_len = min(max_len, n_vars)
    items = []
    for _ in range(n_clauses):
        length = int(rng.integers(1, max_len + 1))
        chosen = rng.choice(n_vars, size=length, replace=False)
        polarities = rng.integers(0, 2, size=length).astype(bool)
        clause = Clause(Literal(variables[int(i)], bool(p))
                        for i, p in zip(chosen, polarities))
        weight = float(rng.uniform(*weight_range))
        items.append((clause, weight))
    return WeightedClauseTheory(tuple(items), frozenset(variables))
