# -*- coding: utf-8 -*-
"""
Datasets of labeled defaults, annotator-aware splitting and synthesis of
negative examples.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import logging
import math
from typing import Dict, FrozenSet, List, Sequence, Tuple

from poss_ml.errors import EmptyDatasetError
from poss_ml.logic.literals import Clause, Literal
from poss_ml.possibilistic.defaults import (DefaultRule, LabeledExample,
                                            NEGATIVE)

logger = logging.getLogger('harness')


@dataclass
class Dataset:
    """
    A multiset of labeled defaults. The vocabulary always contains the
    variables of every example; it may declare more.

    Parameters
    ----------
    examples: list of LabeledExample
        Duplicates are kept.
    vocabulary: frozenset of str
    metadata: dict
        Free-form key/value strings, kept through file round-trips.
    """
    examples: List[LabeledExample] = field(default_factory=list)
    vocabulary: FrozenSet[str] = frozenset()
    metadata: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.examples = list(self.examples)
        self.vocabulary = frozenset(self.vocabulary).union(
            *(e.rule.variables for e in self.examples))
        self.metadata = dict(self.metadata)

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    @property
    def positives(self) -> List[LabeledExample]:
        return [e for e in self.examples if e.is_positive]

    @property
    def negatives(self) -> List[LabeledExample]:
        return [e for e in self.examples if not e.is_positive]

    @property
    def groups(self) -> List[str]:
        return sorted({e.group for e in self.examples
                       if e.group is not None})

    def consequent_pool(self) -> FrozenSet[Clause]:
        return frozenset(e.rule.consequent for e in self.examples)

    def subset(self, examples: Sequence[LabeledExample]) -> 'Dataset':
        return Dataset(examples, self.vocabulary, self.metadata)


def _smallest_covering_groups(sizes: Sequence[int], target: int):
    """Subset-sum over group sizes: indices of a group set whose total is
    the smallest reachable value in [target, sum(sizes) - 1], or None.
    Among sets with that total, the first one found in `sizes` order."""
    total = sum(sizes)
    reachable = {0: ()}  # type: Dict[int, Tuple[int, ...]]
    for i, size in enumerate(sizes):
        for s, chosen in list(reachable.items()):
            if s + size < total and s + size not in reachable:
                reachable[s + size] = chosen + (i,)
    candidates = [s for s in reachable if s >= target]
    if len(candidates) == 0:
        return None
    return reachable[min(candidates)]


def split_by_group(d: Dataset, test_fraction: float, rng
                   ) -> Tuple[Dataset, Dataset]:
    """
    Splits by group (annotator) so that no group appears on both sides.

    Parameters
    ----------
    d: Dataset
        Every example must carry a group.
    test_fraction: float
        In (0, 1). The test side gets the group set of smallest example
        count that reaches test_fraction * len(d).
    rng: np.random.Generator
        Breaks ties between group sets of equal count.

    Returns
    -------
    (train, test)
    """
    if not 0 < test_fraction < 1:
        raise ValueError('test_fraction must be in (0, 1), got {}'
                         .format(test_fraction))
    if len(d) == 0:
        raise EmptyDatasetError('Cannot split an empty dataset.')
    missing = sum(e.group is None for e in d.examples)
    if missing > 0:
        raise ValueError('{} example(s) have no group; cannot split by '
                         'group.'.format(missing))
    groups = d.groups
    if len(groups) < 2:
        raise ValueError('Need at least 2 groups to split, got {}.'
                         .format(len(groups)))

    order = [groups[int(i)] for i in rng.permutation(len(groups))]
    sizes = [sum(e.group == g for e in d.examples) for g in order]
    target = math.ceil(round(test_fraction * len(d), 9))
    chosen = _smallest_covering_groups(sizes, target)
    if chosen is None:
        raise ValueError('No proper set of groups holds {} of the {} '
                         'examples.'.format(target, len(d)))
    test_groups = {order[i] for i in chosen}
    logger.info('Test groups: {} ({} examples).'
                .format(sorted(test_groups), sum(sizes[i] for i in chosen)))

    train = [e for e in d.examples if e.group not in test_groups]
    test = [e for e in d.examples if e.group in test_groups]
    return d.subset(train), d.subset(test)


def synthesize_negatives(positives: Dataset, consequent_pool, rng
                         ) -> Dataset:
    """
    For every positive default 'a ~> b', a negative 'a ~> b2' where b2 is
    drawn uniformly from the pool without b. Negative examples of the
    input are ignored.
    """
    pool = sorted(set(consequent_pool), key=str)
    if len(pool) < 2:
        raise ValueError('The consequent pool needs at least 2 clauses, '
                         'got {}.'.format(len(pool)))
    negatives = []
    for e in positives.positives:
        others = [c for c in pool if c != e.rule.consequent]
        consequent = others[int(rng.integers(len(others)))]
        rule = DefaultRule(e.rule.antecedent, consequent)
        negatives.append(LabeledExample(rule, NEGATIVE, e.group))
    if len(negatives) < len(positives):
        logger.warning('Ignored {} negative example(s).'
                       .format(len(positives) - len(negatives)))
    return positives.subset(negatives)


def mutual_exclusion_clauses(variables) -> List[Clause]:
    """Pairwise clauses !a | !b: at most one of the variables holds. Used
    as hard constraints when one variable encodes each action of a
    multi-class task."""
    return [Clause([Literal(a, False), Literal(b, False)])
            for a, b in combinations(sorted(set(variables)), 2)]


def majority_baseline_accuracy(data: Sequence[LabeledExample]) -> Fraction:
    """Accuracy of always predicting the most frequent label."""
    if len(data) == 0:
        raise EmptyDatasetError('No examples.')
    nb_positives = sum(e.is_positive for e in data)
    return Fraction(max(nb_positives, len(data) - nb_positives), len(data))
