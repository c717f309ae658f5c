#!/usr/bin/env python
"""
Included tests are:
    test_strict_cut()
        - examples, range errors, antitonicity
    test_inconsistency_level()
        - small theories, hard inconsistency, linear scan agreement
    test_sat_call_count()
        - 1000 random theories of up to 32 strata, then 1000 queries
          whose evidence stratum brings them to 32
    test_poss_entails_examples()
        - bird / penguin theory, stratifications of the x / y example
    test_engines_agree()
        - naive, optimized, SAT engine and world engine, hypothesis-generated
    test_drowning_irrelevance()
        - strata at or below the query level can be deleted
    test_covers_and_evaluate()
        - misclassification pattern, exact sample error, per-example
          predictions
    test_weight_ordinality()
        - remapped weights in theory files
    test_theory_io()
        - round-trips, hard clauses, syntax errors
    test_query_engine_cache()
        - cached predictions
"""
from fractions import Fraction
import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from poss_ml.errors import DatasetSyntaxError, EmptyDatasetError
from poss_ml.logic.literals import (Clause, CnfFormula, Literal,
                                    parse_clause, parse_conjunction)
from poss_ml.logic.sat import SatCallCounter, is_satisfiable
from poss_ml.possibilistic.defaults import (LabeledExample, NEGATIVE,
                                            POSITIVE, parse_default)
from poss_ml.possibilistic.evaluation import evaluate, format_report_tsv
from poss_ml.possibilistic.inference import (SatQueryEngine,
                                             WorldQueryEngine,
                                             compute_inconsistency, covers,
                                             inconsistency_level,
                                             make_query_engine,
                                             poss_entails_cnf,
                                             poss_entails_naive,
                                             poss_entails_optimized,
                                             query_inconsistency)
from poss_ml.possibilistic.theory import (PossTheory, format_theory,
                                          iter_ordered_partitions,
                                          parse_theory, strict_cut)

VARIABLES = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h']


def make_theory(*strata, hard=()):
    return PossTheory.from_lists(
        [[parse_clause(c) for c in s] for s in strata],
        [parse_clause(c) for c in hard])


def make_examples(lines):
    examples = []
    for text, label in lines:
        examples.append(LabeledExample(parse_default(text), label))
    return examples


# Bird / penguin examples and the stratification misclassifying only the
# first one.
PENGUIN_EXAMPLES = make_examples([('penguin ~> bird', POSITIVE),
                                  ('bird ~> flies', POSITIVE),
                                  ('penguin ~> !flies', POSITIVE),
                                  ('true ~> bird', NEGATIVE),
                                  ('bird ~> penguin', NEGATIVE)])
T_DOUBLE_STAR = make_theory(['flies'], ['!penguin | !flies'])

XY_EXAMPLES = make_examples([('true ~> !x', POSITIVE),
                             ('true ~> !y', POSITIVE),
                             ('x ~> a', POSITIVE),
                             ('y ~> b', POSITIVE),
                             ('x & y ~> a', NEGATIVE)])
XY_SEPARATOR = make_theory(['!x'], ['!x | a'], ['!y'], ['!y | b'])
XY_Z_RANKED = make_theory(['!x', '!y'], ['!x | a', '!y | b'])

literal_strategy = st.builds(Literal, st.sampled_from(VARIABLES),
                             st.booleans())
clause_strategy = st.builds(Clause, st.lists(literal_strategy, min_size=1,
                                             max_size=3))
conjunction_strategy = st.lists(literal_strategy, max_size=3)


@st.composite
def theory_strategy(draw, max_clauses=10, max_strata=4):
    clauses = draw(st.lists(clause_strategy, max_size=max_clauses,
                            unique=True))
    ranks = draw(st.lists(st.integers(0, max_strata - 1),
                          min_size=len(clauses), max_size=len(clauses)))
    strata = [[c for c, r in zip(clauses, ranks) if r == i]
              for i in range(max_strata)]
    return PossTheory.from_lists(strata)


def _random_theory(rng, nb_strata, nb_variables=6):
    strata = []
    seen = set()
    while len(strata) < nb_strata:
        length = int(rng.integers(1, 4))
        chosen = rng.choice(nb_variables, size=length, replace=False)
        clause = Clause(Literal(VARIABLES[int(i)], bool(rng.integers(2)))
                        for i in chosen)
        if clause not in seen:
            seen.add(clause)
            strata.append([clause])
    return PossTheory.from_lists(strata)


def test_strict_cut():
    print("  - Examples")
    assert set(strict_cut(T_DOUBLE_STAR, 1)) == {parse_clause('!penguin | '
                                                              '!flies')}
    assert set(strict_cut(XY_SEPARATOR, 1)) == \
        {parse_clause('!x | a'), parse_clause('!y'), parse_clause('!y | b')}
    assert len(strict_cut(XY_SEPARATOR, 0)) == 4

    print("  - Cut at k holds the hard clauses only")
    t = make_theory(['x'], ['y'], hard=['!a | !b'])
    assert set(strict_cut(t, 2)) == {parse_clause('!a | !b')}
    assert len(strict_cut(T_DOUBLE_STAR, 2)) == 0

    print("  - Range")
    with pytest.raises(ValueError):
        strict_cut(t, 3)
    with pytest.raises(ValueError):
        strict_cut(t, -1)

    print("  - Antitonicity")
    for j1 in range(5):
        for j2 in range(j1 + 1, 5):
            assert set(strict_cut(XY_SEPARATOR, j2)) <= \
                set(strict_cut(XY_SEPARATOR, j1))


def test_inconsistency_level():
    print("  - Small theories")
    assert inconsistency_level(make_theory(['x', 'y'])) == 0
    assert inconsistency_level(make_theory(['x'], ['!x'])) == 1
    assert inconsistency_level(make_theory(['x', '!y'], ['y'], ['z'])) == 1
    assert inconsistency_level(PossTheory()) == 0

    print("  - Hard clauses alone inconsistent")
    result = compute_inconsistency(make_theory(['y'], hard=['x', '!x']))
    assert result.is_hard_inconsistent
    assert result.level == 1

    print("  - Agreement with a linear scan")
    rng = np.random.default_rng(0)
    for _ in range(100):
        t = _random_theory(rng, int(rng.integers(1, 7)), nb_variables=4)
        linear = next(j for j in range(t.n_strata + 1)
                      if is_satisfiable(strict_cut(t, j)))
        assert inconsistency_level(t) == linear


def test_sat_call_count():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        k = int(rng.integers(1, 33))
        t = _random_theory(rng, k)
        counter = SatCallCounter()
        result = compute_inconsistency(t, counter)
        assert counter.count == result.nb_sat_calls
        assert counter.count <= math.ceil(math.log2(k + 1)) + 1

    print("  - Queries: the evidence adds a top stratum")
    for _ in range(1000):
        k = int(rng.integers(1, 32))
        t = _random_theory(rng, k)
        chosen = rng.choice(len(VARIABLES), size=int(rng.integers(0, 4)),
                            replace=False)
        evidence = CnfFormula(Clause([Literal(VARIABLES[int(i)],
                                              bool(rng.integers(2)))])
                              for i in chosen)
        counter = SatCallCounter()
        result = query_inconsistency(t, evidence, counter)
        assert counter.count == result.nb_sat_calls
        assert counter.count <= math.ceil(math.log2(k + 2)) + 1

        nb_search_calls = counter.count
        counter = SatCallCounter()
        poss_entails_cnf(t, evidence, CnfFormula([parse_clause('a')]),
                         counter)
        assert counter.count == nb_search_calls + 1


def test_poss_entails_examples():
    penguin = parse_conjunction('penguin')
    for entails in (poss_entails_naive, poss_entails_optimized):
        print("  - {}".format(entails.__name__))
        assert entails(T_DOUBLE_STAR, penguin, parse_clause('!flies'))
        assert not entails(T_DOUBLE_STAR, penguin, parse_clause('bird'))
        x_and_y = parse_conjunction('x & y')
        assert not entails(XY_SEPARATOR, x_and_y, parse_clause('a'))
        assert entails(XY_Z_RANKED, x_and_y, parse_clause('a'))
        assert entails(PossTheory(), parse_conjunction('true'),
                       parse_clause('x | !x'))
        assert not entails(PossTheory(), parse_conjunction('true'),
                           parse_clause('x'))

        print("    - Inconsistent evidence only gives tautologies")
        bad = parse_conjunction('x & !x')
        assert not entails(make_theory(['y']), bad, parse_clause('y'))

        print("    - Hard clauses are never drowned by the evidence")
        t = make_theory(['a'], hard=['!a | !b'])
        assert entails(t, parse_conjunction('b'), parse_clause('!a'))


@settings(max_examples=150, deadline=None)
@given(theory_strategy(), conjunction_strategy, clause_strategy)
def test_engines_agree(theory, evidence_literals, goal):
    evidence = parse_conjunction('true')
    if evidence_literals:
        evidence = parse_conjunction(' & '.join(
            str(lit) for lit in evidence_literals))
    expected = poss_entails_naive(theory, evidence, goal)
    assert poss_entails_optimized(theory, evidence, goal) == expected

    rule = parse_default('{} ~> {}'.format(evidence, goal))
    sat_engine = SatQueryEngine()
    world_engine = WorldQueryEngine(VARIABLES)
    for engine in (sat_engine, world_engine):
        predicted = engine.predict(theory, engine.compile([rule]))
        assert bool(predicted[0]) == expected


def test_drowning_irrelevance():
    rng = np.random.default_rng(42)
    for _ in range(200):
        t = _random_theory(rng, int(rng.integers(1, 7)), nb_variables=4)
        chosen = rng.choice(4, size=int(rng.integers(1, 3)), replace=False)
        evidence = parse_conjunction(' & '.join(
            ('' if rng.integers(2) else '!') + VARIABLES[int(i)]
            for i in chosen))
        goal = Clause([Literal(VARIABLES[int(rng.integers(4))],
                               bool(rng.integers(2)))])
        units = CnfFormula(evidence.unit_clauses())
        level = next(j for j in range(t.n_strata + 1)
                     if is_satisfiable(strict_cut(t, j) + units))
        kept = PossTheory(t.strata[level:])
        assert poss_entails_naive(kept, evidence, goal) == \
            poss_entails_naive(t, evidence, goal)


def test_covers_and_evaluate():
    print("  - Covering")
    assert covers(T_DOUBLE_STAR, parse_default('penguin ~> !flies')) == \
        POSITIVE
    assert covers(T_DOUBLE_STAR, parse_default('penguin ~> bird')) == \
        NEGATIVE
    assert covers(XY_Z_RANKED, parse_default('x & y ~> a')) == POSITIVE
    assert covers(XY_SEPARATOR, parse_default('x & y ~> a')) == NEGATIVE

    print("  - Exact sample error")
    report = evaluate(T_DOUBLE_STAR, PENGUIN_EXAMPLES)
    assert report.sample_error == Fraction(1, 5)
    assert report.accuracy == Fraction(4, 5)
    assert report.false_negatives == 1
    assert report.errors == 1
    assert evaluate(XY_SEPARATOR, XY_EXAMPLES).errors == 0

    print("  - Predicted label of each example")
    assert [e for e, _ in report.per_example] == PENGUIN_EXAMPLES
    assert [p for _, p in report.per_example] == \
        [NEGATIVE, POSITIVE, POSITIVE, NEGATIVE, NEGATIVE]
    wrong = [e for e, p in report.per_example if p != e.label]
    assert wrong == PENGUIN_EXAMPLES[:1]

    print("  - Empty theory")
    negative = make_examples([('true ~> x', NEGATIVE)])
    assert evaluate(PossTheory(), negative).sample_error == 0
    with pytest.raises(EmptyDatasetError):
        evaluate(PossTheory(), [])

    print("  - TSV")
    lines = format_report_tsv(report).splitlines()
    assert lines[0].split('\t')[:4] == ['n', 'errors', 'sample_error',
                                        'accuracy']
    assert lines[1].split('\t')[:4] == ['5', '1', '0.2', '0.8']


def test_weight_ordinality():
    text = '0.25\tflies\n1\t!penguin | !flies\n'
    remapped = '0.0001\tflies\n0.9\t!penguin | !flies\n'
    t1, t2 = parse_theory(text), parse_theory(remapped)
    assert t1 == t2
    for e in PENGUIN_EXAMPLES:
        assert covers(t1, e.rule) == covers(t2, e.rule)


def test_theory_io():
    print("  - Round trip")
    t = make_theory(['b | !a', 'c'], ['d'], hard=['!c | !d'])
    text = format_theory(t)
    assert parse_theory(text) == t
    assert text.splitlines() == ['0.5\t!a | b', '0.5\tc', '1\td',
                                 'HARD\t!c | !d']

    print("  - Weights are i / k")
    assert t.weights == [Fraction(1, 2), Fraction(1)]

    print("  - Errors")
    with pytest.raises(DatasetSyntaxError):
        parse_theory('0.5 a\n')
    with pytest.raises(DatasetSyntaxError):
        parse_theory('1.5\ta\n')
    with pytest.raises(DatasetSyntaxError):
        parse_theory('0.5\ta\n1\ta\n')

    print("  - Invariants")
    with pytest.raises(ValueError):
        PossTheory((frozenset(),))
    with pytest.raises(ValueError):
        PossTheory((frozenset([parse_clause('a')]),),
                   frozenset([parse_clause('a')]))

    print("  - Ordered partitions (Fubini numbers)")
    assert len(list(iter_ordered_partitions('abc'))) == 13
    assert len(list(iter_ordered_partitions('abcd'))) == 75


def test_query_engine_cache():
    variables = {'bird', 'flies', 'penguin'}
    rules = [e.rule for e in PENGUIN_EXAMPLES]
    for backend in ('sat', 'worlds'):
        engine = make_query_engine(variables, backend)
        queries = engine.compile(rules)
        first = engine.predict(T_DOUBLE_STAR, queries)
        second = engine.predict(T_DOUBLE_STAR, queries)
        assert first is second
        np.testing.assert_array_equal(
            first, [False, True, True, False, False])
    assert isinstance(make_query_engine(variables), WorldQueryEngine)
    assert isinstance(make_query_engine(['v{}'.format(i)
                                         for i in range(20)]),
                      SatQueryEngine)


def main():
    test_strict_cut()
    test_inconsistency_level()
    test_sat_call_count()
    test_poss_entails_examples()
    test_engines_agree()
    test_drowning_irrelevance()
    test_covers_and_evaluate()
    test_weight_ordinality()
    test_theory_io()
    test_query_engine_cache()


if __name__ == '__main__':
    main()
