#!/usr/bin/env python
"""
Included tests are:
    test_xy_separation()
        - separating stratification found, z-ranking differs on x & y ~> a
    test_penguin_not_separable()
        - no separator; minimal error 1/5
    test_trivial_instances()
    test_qbf_fixtures()
        - separable iff the quantified formula holds, checked by brute force
    test_agreement_with_brute_force()
        - 50 seeded random instances, soundness of every returned theory
    test_guards()
"""
from fractions import Fraction

import numpy as np
import pytest

from poss_ml.errors import GuardViolationError
from poss_ml.logic.literals import (Clause, CnfFormula, Literal,
                                    LiteralConjunction, parse_clause)
from poss_ml.learning.exact import (SeparatingStratificationSearch,
                                    SeparationProblem,
                                    brute_force_separating,
                                    min_error_stratification, qbf_fixture,
                                    stratify_separable)
from poss_ml.possibilistic.defaults import (DefaultRule, LabeledExample,
                                            NEGATIVE, POSITIVE, parse_default)
from poss_ml.possibilistic.evaluation import evaluate
from poss_ml.possibilistic.inference import covers
from poss_ml.possibilistic.rational_closure import to_poss_theory, z_ordering
from poss_ml.possibilistic.theory import PossTheory

VARIABLES = ['a', 'b', 'c', 'd']


def pool(*texts):
    return frozenset(parse_clause(t) for t in texts)


def examples(*pairs):
    return [LabeledExample(parse_default(text), label)
            for text, label in pairs]


XY_EXAMPLES = examples(('true ~> !x', POSITIVE), ('true ~> !y', POSITIVE),
                       ('x ~> a', POSITIVE), ('y ~> b', POSITIVE),
                       ('x & y ~> a', NEGATIVE))
XY_POOL = pool('!x', '!y', '!x | a', '!y | b')

PENGUIN_EXAMPLES = examples(('penguin ~> bird', POSITIVE),
                            ('bird ~> flies', POSITIVE),
                            ('penguin ~> !flies', POSITIVE),
                            ('true ~> bird', NEGATIVE),
                            ('bird ~> penguin', NEGATIVE))
PENGUIN_POOL = pool('bird', 'flies', 'penguin', '!penguin | !flies')


def test_xy_separation():
    problem = SeparationProblem.from_examples(XY_POOL, XY_EXAMPLES)
    search = SeparatingStratificationSearch(problem)
    theory = search.run()
    assert theory is not None
    assert theory.clauses == XY_POOL
    assert evaluate(theory, XY_EXAMPLES).errors == 0

    print("  - Memoization bound")
    assert search.stats.nb_distinct_first_arguments <= 2 ** len(XY_POOL)

    print("  - Brute force agrees")
    assert brute_force_separating(problem) is not None

    print("  - The z-ranking of the positives covers the negative")
    h_z = to_poss_theory(z_ordering([e.rule for e in XY_EXAMPLES
                                     if e.is_positive]))
    negative = parse_default('x & y ~> a')
    assert covers(h_z, negative) == POSITIVE
    assert covers(theory, negative) == NEGATIVE

    print("  - The known separator")
    h = PossTheory.from_lists([[parse_clause('!x')], [parse_clause('!x | a')],
                               [parse_clause('!y')], [parse_clause('!y | b')]])
    assert evaluate(h, XY_EXAMPLES).errors == 0


def test_penguin_not_separable():
    problem = SeparationProblem.from_examples(PENGUIN_POOL, PENGUIN_EXAMPLES)
    assert stratify_separable(problem) is None
    assert brute_force_separating(problem) is None

    theory, errors = min_error_stratification(problem)
    assert Fraction(errors, len(PENGUIN_EXAMPLES)) == Fraction(1, 5)
    assert evaluate(theory, PENGUIN_EXAMPLES).errors == 1

    print("  - Drowning bird and penguin gives the expected pattern")
    t_star = PossTheory.from_lists(
        [[parse_clause('bird'), parse_clause('penguin')],
         [parse_clause('flies')], [parse_clause('!penguin | !flies')]])
    predicted = [covers(t_star, e.rule) for e in PENGUIN_EXAMPLES]
    assert predicted == [NEGATIVE, POSITIVE, POSITIVE, NEGATIVE, NEGATIVE]


def test_trivial_instances():
    print("  - {x} cannot conclude !x")
    problem = SeparationProblem(pool('x'),
                                [parse_default('true ~> !x')], [])
    assert stratify_separable(problem) is None
    assert brute_force_separating(problem) is None

    print("  - Empty pool and no example")
    assert stratify_separable(SeparationProblem(frozenset())) == PossTheory()
    assert brute_force_separating(SeparationProblem(frozenset())) == \
        PossTheory()

    print("  - A negative covered by every stratification")
    problem = SeparationProblem(pool('x', 'y'), [],
                                [parse_default('y ~> x')])
    assert stratify_separable(problem) is None
    assert brute_force_separating(problem) is None

    print("  - Dropping clauses can help where full stratifications fail")
    problem = SeparationProblem(pool('x'), [], [parse_default('true ~> x')])
    assert brute_force_separating(problem) is None
    assert brute_force_separating(problem, use_subsets=True) == PossTheory()


def test_qbf_fixtures():
    x, y = Literal('x'), Literal('y')
    cases = [
        # phi, existential variables, expected
        (CnfFormula([Clause([x])]), ['x'], True),
        (CnfFormula([Clause([y]), Clause([-y])]), [], False),
        (CnfFormula([Clause([x, -x])]), ['x'], True),
        (CnfFormula([Clause([x, y])]), ['x'], True),
        (CnfFormula([Clause([y])]), ['x'], False),
    ]
    for phi, exists, expected in cases:
        problem = qbf_fixture(phi, exists)
        assert len(problem.theory) <= 6
        found = stratify_separable(problem)
        assert (found is not None) == expected
        assert (brute_force_separating(problem) is not None) == expected
        if found is not None:
            assert evaluate(found, problem.examples()).errors == 0

    print("  - Name clashes")
    with pytest.raises(ValueError):
        qbf_fixture(CnfFormula([Clause([Literal('aux')])]), [])


def _random_clause(rng, nb_variables, max_len=2):
    length = int(rng.integers(1, max_len + 1))
    chosen = rng.choice(nb_variables, size=length, replace=False)
    return Clause(Literal(VARIABLES[int(i)], bool(rng.integers(2)))
                  for i in chosen)


def _random_instance(rng):
    nb_variables = int(rng.integers(2, 5))
    clauses = set()
    for _ in range(int(rng.integers(1, 6))):
        clauses.add(_random_clause(rng, nb_variables))
    positives, negatives = [], []
    for _ in range(int(rng.integers(1, 7))):
        size = int(rng.integers(0, 3))
        chosen = rng.choice(nb_variables, size=min(size, nb_variables),
                            replace=False)
        antecedent = LiteralConjunction(
            Literal(VARIABLES[int(i)], bool(rng.integers(2))) for i in chosen)
        rule = DefaultRule(antecedent, _random_clause(rng, nb_variables))
        if rng.random() < 0.5:
            positives.append(rule)
        else:
            negatives.append(rule)
    return SeparationProblem(frozenset(clauses), positives, negatives)


def test_agreement_with_brute_force():
    rng = np.random.default_rng(2024)
    nb_found = 0
    for _ in range(50):
        problem = _random_instance(rng)
        search = SeparatingStratificationSearch(problem)
        found = search.run()
        expected = brute_force_separating(problem)
        assert (found is None) == (expected is None)
        assert search.stats.nb_distinct_first_arguments <= \
            2 ** len(problem.theory)
        if found is not None:
            nb_found += 1
            assert found.clauses == problem.theory
            assert evaluate(found, problem.examples()).errors == 0
    print("  - {} of 50 instances separable".format(nb_found))


def test_guards():
    big = frozenset(Clause([Literal('v{}'.format(i))]) for i in range(7))
    with pytest.raises(GuardViolationError):
        brute_force_separating(SeparationProblem(big))
    with pytest.raises(GuardViolationError):
        min_error_stratification(SeparationProblem(big))


def main():
    test_xy_separation()
    test_penguin_not_separable()
    test_trivial_instances()
    test_qbf_fixtures()
    test_agreement_with_brute_force()
    test_guards()


if __name__ == '__main__':
    main()
