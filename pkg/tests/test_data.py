#!/usr/bin/env python
"""
Included tests are:
    test_parse_example()
        - labels, groups, syntax errors
    test_dataset_files()
        - metadata and vocabulary kept through save / load
    test_split_by_group()
        - smallest covering group set, disjoint groups, errors
    test_synthesize_negatives()
    test_mutual_exclusion_clauses()
    test_majority_baseline()
"""
from fractions import Fraction
import os

import numpy as np
import pytest

from poss_ml.data.dataset import (Dataset, majority_baseline_accuracy,
                                  mutual_exclusion_clauses, split_by_group,
                                  synthesize_negatives)
from poss_ml.data.io import (format_dataset, load_dataset, parse_dataset,
                             parse_example, save_dataset)
from poss_ml.errors import DatasetSyntaxError, EmptyDatasetError
from poss_ml.logic.literals import parse_clause
from poss_ml.possibilistic.defaults import (LabeledExample, NEGATIVE,
                                            POSITIVE, parse_default)

CROWD_TEXT = """\
# meta: source=crowd
# vocabulary: call fold raise weak
# Poker actions
weak ~> fold ; + ; group=ann1
weak ~> raise ; - ; group=ann1
true ~> call ; + ; group=ann2
"""


def grouped(sizes):
    examples = []
    for g, size in enumerate(sizes):
        for i in range(size):
            rule = parse_default('v{} ~> w'.format(i))
            examples.append(LabeledExample(rule, POSITIVE,
                                           'g{}'.format(g)))
    return Dataset(examples)


def test_parse_example():
    e = parse_example('bird & antarctic ~> !flies ; +')
    assert e.rule == parse_default('antarctic & bird ~> !flies')
    assert e.label == POSITIVE
    assert e.group is None

    e = parse_example('true ~> bird ; - ; group=ann3')
    assert e.label == NEGATIVE
    assert e.group == 'ann3'

    print("  - Syntax errors")
    for line in ['true ~> bird', 'true ~> bird ; ?',
                 'true ~> bird ; + ; ann3', 'true ~> bird ; + ; group=',
                 'true ~> ; +', 'a ~> b ~> c ; +']:
        with pytest.raises(DatasetSyntaxError):
            parse_example(line)


def test_dataset_files(tmp_path):
    d = parse_dataset(CROWD_TEXT)
    assert len(d) == 3
    assert d.metadata == {'source': 'crowd'}
    assert d.vocabulary == frozenset(['call', 'fold', 'raise', 'weak'])
    assert d.groups == ['ann1', 'ann2']
    assert len(d.positives) == 2 and len(d.negatives) == 1
    assert d.consequent_pool() == frozenset(
        parse_clause(c) for c in ['fold', 'raise', 'call'])

    text = format_dataset(d)
    assert text.splitlines()[:3] == [
        '# meta: source=crowd', '# vocabulary: call fold raise weak',
        'weak ~> fold ; + ; group=ann1']

    filename = os.path.join(str(tmp_path), 'crowd.txt')
    save_dataset(d, filename)
    loaded = load_dataset(filename)
    assert loaded == d

    print("  - The vocabulary grows with the examples")
    d = Dataset([LabeledExample(parse_default('a ~> b'), POSITIVE)],
                frozenset(['c']))
    assert d.vocabulary == frozenset(['a', 'b', 'c'])

    print("  - Unknown line")
    with pytest.raises(DatasetSyntaxError):
        parse_dataset('# meta: nokey\n')


def test_split_by_group():
    d = grouped([8, 2])
    train, test = split_by_group(d, 0.2, np.random.default_rng(0))
    assert len(test) == 2 and len(train) == 8
    assert test.groups == ['g1']

    print("  - Groups never appear on both sides")
    rng = np.random.default_rng(7)
    for _ in range(20):
        sizes = rng.integers(1, 6, size=int(rng.integers(2, 7)))
        d = grouped(sizes)
        train, test = split_by_group(d, 0.3, rng)
        assert not set(train.groups) & set(test.groups)
        assert len(train) + len(test) == len(d)
        assert len(test) >= 0.3 * len(d) - 1e-9
        assert len(train) > 0

    print("  - Errors")
    with pytest.raises(ValueError):
        split_by_group(grouped([5]), 0.2, rng)
    with pytest.raises(ValueError):
        split_by_group(grouped([3, 3]), 1.5, rng)
    no_group = Dataset([LabeledExample(parse_default('a ~> b'), POSITIVE)])
    with pytest.raises(ValueError):
        split_by_group(no_group, 0.2, rng)
    with pytest.raises(EmptyDatasetError):
        split_by_group(Dataset(), 0.2, rng)


def test_synthesize_negatives():
    d = parse_dataset(CROWD_TEXT)
    pool = d.consequent_pool()
    negatives = synthesize_negatives(d, pool, np.random.default_rng(3))
    assert len(negatives) == len(d.positives)
    for positive, negative in zip(d.positives, negatives):
        assert negative.label == NEGATIVE
        assert negative.group == positive.group
        assert negative.rule.antecedent == positive.rule.antecedent
        assert negative.rule.consequent != positive.rule.consequent
        assert negative.rule.consequent in pool

    with pytest.raises(ValueError):
        synthesize_negatives(d, [parse_clause('fold')],
                             np.random.default_rng(3))


def test_mutual_exclusion_clauses():
    clauses = mutual_exclusion_clauses(['raise', 'call', 'fold'])
    assert [str(c) for c in clauses] == ['!call | !fold', '!call | !raise',
                                         '!fold | !raise']
    assert mutual_exclusion_clauses(['fold']) == []


def test_majority_baseline():
    d = parse_dataset(CROWD_TEXT)
    assert majority_baseline_accuracy(d.examples) == Fraction(2, 3)
    with pytest.raises(EmptyDatasetError):
        majority_baseline_accuracy([])


def main():
    test_parse_example()
    test_split_by_group()
    test_synthesize_negatives()
    test_mutual_exclusion_clauses()
    test_majority_baseline()


if __name__ == '__main__':
    main()
