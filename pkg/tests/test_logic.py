#!/usr/bin/env python
"""
Included tests are:
    test_parse_and_format()
        - canonical strings, tautology / consistency flags
    test_dpll_agrees_with_enumeration()
        - random CNFs, hypothesis-generated
    test_entails()
        - tautologies, unsatisfiable premises
    test_at_least()
        - projection onto inputs == binomial count, small thresholds
"""
from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy.special import comb

from poss_ml.errors import DatasetSyntaxError
from poss_ml.logic.cardinality import AtLeast, at_least
from poss_ml.logic.literals import (Clause, CnfFormula, Literal,
                                    parse_clause, parse_conjunction,
                                    parse_literal)
from poss_ml.logic.sat import (SatCallCounter, entails, find_model,
                               is_satisfiable)
from poss_ml.logic.worlds import enumerate_satisfiable, project_models

VARIABLES = ['a', 'b', 'c', 'd', 'e']

literal_strategy = st.builds(Literal, st.sampled_from(VARIABLES),
                             st.booleans())
clause_strategy = st.builds(Clause, st.lists(literal_strategy, min_size=0,
                                             max_size=3))
cnf_strategy = st.builds(CnfFormula, st.lists(clause_strategy, max_size=8))


def test_parse_and_format():
    print("  - Canonical strings")
    assert str(parse_clause('!b | a')) == 'a | !b'
    assert str(parse_clause('false')) == 'false'
    assert str(parse_conjunction('true')) == 'true'
    assert str(parse_conjunction(' c & !a ')) == '!a & c'
    assert str(parse_clause('x | !x')) == 'x | !x'

    print("  - Flags")
    assert parse_clause('x | !x').is_tautology
    assert not parse_clause('x | y').is_tautology
    assert not parse_conjunction('x & !x').is_consistent
    assert parse_conjunction('true').is_consistent

    print("  - Negations")
    assert parse_clause('a | !b').negation() == parse_conjunction('!a & b')
    assert parse_conjunction('a & b').negation() == parse_clause('!a | !b')

    print("  - Errors")
    with pytest.raises(DatasetSyntaxError):
        parse_literal('1x')
    with pytest.raises(DatasetSyntaxError):
        parse_clause('a | ')
    with pytest.raises(DatasetSyntaxError):
        parse_literal('true')


@settings(max_examples=200, deadline=None)
@given(cnf_strategy)
def test_dpll_agrees_with_enumeration(formula):
    assert is_satisfiable(formula) == enumerate_satisfiable(formula)
    model = find_model(formula)
    if model is not None:
        assert model.satisfies_all(formula.clauses)


def test_entails():
    x_or_y = parse_clause('x | y')
    f = CnfFormula([parse_clause('!x'), x_or_y])

    print("  - Simple entailments")
    assert entails(f, parse_clause('y'))
    assert not entails(f, parse_clause('x'))

    print("  - Tautologies are always entailed")
    assert entails(CnfFormula(), parse_clause('z | !z'))

    print("  - Unsatisfiable premises entail everything")
    bad = CnfFormula([parse_clause('x'), parse_clause('!x')])
    assert entails(bad, parse_clause('false'))

    print("  - Empty formula / empty clause")
    assert is_satisfiable(CnfFormula())
    assert not is_satisfiable(CnfFormula([Clause()]))

    print("  - Counter")
    counter = SatCallCounter()
    entails(f, parse_clause('y'), counter=counter)
    is_satisfiable(f, counter=counter)
    assert counter.count == 2


@pytest.mark.parametrize('n', [1, 2, 3, 4, 5])
def test_at_least(n):
    lits = [Literal('x{}'.format(i)) for i in range(n)]
    names = [lit.variable for lit in lits]
    for k in range(n + 1):
        projected = project_models(at_least(k, lits), names)
        expected = sum(comb(n, j, exact=True) for j in range(k, n + 1))
        assert len(projected) == expected
        assert all(sum(row) >= k for row in projected)

    print("  - at_least(1) is the plain clause")
    assert at_least(1, lits[:2]) == CnfFormula([Clause(lits[:2])])


def test_at_least_negation():
    lits = tuple(Literal(v) for v in ['p', 'q', 'r', 's'])
    for k in range(1, 5):
        constraint = AtLeast(k, lits)
        both = constraint.to_cnf() + constraint.negation().to_cnf()
        assert not is_satisfiable(both)
        either = project_models(constraint.to_cnf(), ['p', 'q', 'r', 's']) \
            | project_models(constraint.negation().to_cnf(),
                             ['p', 'q', 'r', 's'])
        assert len(either) == 16

    print("  - Mixed polarities")
    mixed = (Literal('p'), Literal('q', False), Literal('r'))
    rows = project_models(at_least(2, mixed), ['p', 'q', 'r'])
    np.testing.assert_equal(
        sorted(rows),
        sorted(r for r in {(a, b, c) for a in (False, True)
                           for b in (False, True) for c in (False, True)}
               if a + (not b) + c >= 2))

    with pytest.raises(ValueError):
        at_least(5, lits)


def main():
    test_parse_and_format()
    test_dpll_agrees_with_enumeration()
    test_entails()
    for n in range(1, 6):
        test_at_least(n)
    test_at_least_negation()


if __name__ == '__main__':
    main()
