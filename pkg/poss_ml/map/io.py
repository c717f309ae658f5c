# -*- coding: utf-8 -*-
"""
Weighted theory files::

    # comment
    VOCABULARY<TAB>a1 a2 a3
    1.5<TAB>a1 | !a2
    -0.25<TAB>a3

The VOCABULARY line is optional; it declares variables that no clause
mentions.
"""
from poss_ml.errors import DatasetSyntaxError
from poss_ml.logic.literals import check_variable_name, parse_clause
from poss_ml.map.map_oracle import WeightedClauseTheory

VOCABULARY_TOKEN = 'VOCABULARY'


def parse_weighted_theory(text: str) -> WeightedClauseTheory:
    items = []
    vocabulary = set()
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line == '' or line.startswith('#') or line == VOCABULARY_TOKEN:
            continue
        if '\t' not in line:
            raise DatasetSyntaxError(
                "Expected '<weight>\\t<clause>'.", line_number)
        head, rest = line.split('\t', 1)
        if head.strip() == VOCABULARY_TOKEN:
            for v in rest.split():
                check_variable_name(v, line_number)
                vocabulary.add(v)
            continue
        try:
            weight = float(head)
        except ValueError:
            raise DatasetSyntaxError("Invalid weight '{}'.".format(head),
                                     line_number)
        items.append((parse_clause(rest, line_number), weight))
    return WeightedClauseTheory(tuple(items), frozenset(vocabulary))


def format_weighted_theory(m: WeightedClauseTheory) -> str:
    lines = ['{}\t{}'.format(VOCABULARY_TOKEN,
                             ' '.join(sorted(m.vocabulary)))]
    lines += ['{!r}\t{}'.format(w, c) for c, w in m.items]
    return ''.join(line + '\n' for line in lines)


def load_weighted_theory(filename: str) -> WeightedClauseTheory:
    with open(filename, 'r') as f:
        return parse_weighted_theory(f.read())


def save_weighted_theory(m: WeightedClauseTheory, filename: str):
    with open(filename, 'w') as f:
        f.write(format_weighted_theory(m))
