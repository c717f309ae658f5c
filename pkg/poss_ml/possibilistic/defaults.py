# -*- coding: utf-8 -*-
"""
Default rules 'antecedent ~> consequent' and labeled examples.

A default states that, given exactly the antecedent as evidence, the
consequent is plausibly concluded. A labeled example is a default with
a +1 / -1 label: should the learned theory conclude it or not.
"""
from dataclasses import dataclass
from typing import Optional

from poss_ml.errors import DatasetSyntaxError
from poss_ml.logic.literals import (Clause, LiteralConjunction, parse_clause,
                                    parse_conjunction)

DEFAULT_ARROW = '~>'
POSITIVE = 1
NEGATIVE = -1


@dataclass(frozen=True)
class DefaultRule:
    antecedent: LiteralConjunction
    consequent: Clause

    @property
    def variables(self):
        return self.antecedent.variables | self.consequent.variables

    def material_clause(self) -> Clause:
        """The classical counterpart: !antecedent | consequent."""
        return Clause(self.antecedent.negation().literals |
                      self.consequent.literals)

    def __str__(self):
        return '{} {} {}'.format(self.antecedent, DEFAULT_ARROW,
                                 self.consequent)


@dataclass(frozen=True)
class LabeledExample:
    rule: DefaultRule
    label: int
    group: Optional[str] = None

    def __post_init__(self):
        if self.label not in (POSITIVE, NEGATIVE):
            raise ValueError('Labels are +1 or -1, got {}'.format(self.label))

    @property
    def is_positive(self):
        return self.label == POSITIVE


def parse_default(text: str, line_number=None) -> DefaultRule:
    """Parses 'a & !b ~> c | d'. The consequent cannot be empty."""
    if text.count(DEFAULT_ARROW) != 1:
        raise DatasetSyntaxError(
            "A default needs exactly one '{}'.".format(DEFAULT_ARROW),
            line_number)
    left, right = text.split(DEFAULT_ARROW)
    consequent = parse_clause(right, line_number)
    if consequent.is_empty:
        raise DatasetSyntaxError('Empty consequent.', line_number)
    return DefaultRule(parse_conjunction(left, line_number), consequent)
