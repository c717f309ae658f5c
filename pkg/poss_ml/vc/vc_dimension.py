# -*- coding: utf-8 -*-
"""
VC-dimension bounds for stratifications, and shattering instances.

A shattering instance is a theory of singleton clauses x_1..x_n with a set
of defaults such that every subset of the defaults is exactly the set
covered by some stratification. The defaults compare, for two blocks Y
and Z of equal size l, the k-th most certain elements of each block:

    at_least(l - k + 1; !y_1..!y_l)  ~>  at_least(k; z_1..z_l)

is covered iff the k-th most certain element of Z is strictly more
certain than that of Y. Blocks are paired recursively (pairs, quadruples,
halves), which gives (n/2) log2(n) defaults.
"""
from dataclasses import dataclass
import logging
from typing import List, Tuple

import numpy as np
from tqdm import tqdm

from poss_ml.errors import DatasetSyntaxError, GuardViolationError
from poss_ml.logic.cardinality import AtLeast
from poss_ml.logic.literals import (Clause, CnfFormula, Literal,
                                    TRUE_TOKEN, parse_literal)
from poss_ml.possibilistic.defaults import (DEFAULT_ARROW, POSITIVE,
                                            DefaultRule)
from poss_ml.possibilistic.inference import covers_cnf
from poss_ml.possibilistic.theory import PossTheory, iter_ordered_partitions

logger = logging.getLogger('vc')

SUPPORTED_SIZES = (2, 4, 8)
SHATTER_MAX_CLAUSES = 4


def vc_upper_bound(n: int, k: int) -> float:
    """Stratifications of n formulas into at most k levels."""
    if n < 1 or k < 1:
        raise ValueError('n and k must be >= 1, got n={}, k={}'.format(n, k))
    return float(n * np.log2(k))


def vc_lower_bound(n: int, k: int) -> float:
    if k > n or k < 1:
        raise ValueError('Need 1 <= k <= n, got n={}, k={}'.format(n, k))
    return float(n * (np.log2(k) - 1) / 4)


def vc_subset_bound(n: int, m: int, k: int) -> float:
    """Stratifications of at most m of n formulas, with at most k levels."""
    if m < 0 or m >= n:
        raise ValueError('Need 0 <= m < n, got n={}, m={}'.format(n, m))
    return float(m * (np.log2(n) + np.log2(k)))


@dataclass(frozen=True)
class CardinalityDefault:
    """A default whose antecedent is a conjunction of cardinality
    constraints and whose consequent is one cardinality constraint."""
    antecedent: Tuple[AtLeast, ...]
    consequent: AtLeast

    @classmethod
    def from_rule(cls, rule: DefaultRule):
        antecedent = tuple(AtLeast(1, (lit,)) for lit in rule.antecedent)
        return cls(antecedent, AtLeast(1, tuple(rule.consequent)))

    def evidence_cnf(self) -> CnfFormula:
        formula = CnfFormula()
        for constraint in self.antecedent:
            formula = formula + constraint.to_cnf()
        return formula

    def goal_negation_cnf(self) -> CnfFormula:
        if self.consequent.k == 0:
            return CnfFormula([Clause()])
        return self.consequent.negation().to_cnf()

    def __str__(self):
        left = ' & '.join(str(c) for c in self.antecedent) or TRUE_TOKEN
        return '{} {} {}'.format(left, DEFAULT_ARROW, self.consequent)


def _parse_at_least(text, line_number=None):
    text = text.strip()
    if not (text.startswith('atleast(') and text.endswith(')')):
        raise DatasetSyntaxError("Expected 'atleast(k; lits)', got '{}'."
                                 .format(text), line_number)
    inner = text[len('atleast('):-1]
    if ';' not in inner:
        raise DatasetSyntaxError("Missing ';' in '{}'.".format(text),
                                 line_number)
    k_text, lits_text = inner.split(';', 1)
    try:
        k = int(k_text)
    except ValueError:
        raise DatasetSyntaxError("Invalid threshold '{}'.".format(k_text),
                                 line_number)
    lits = tuple(parse_literal(t, line_number)
                 for t in lits_text.split(',') if t.strip() != '')
    try:
        return AtLeast(k, lits)
    except ValueError as e:
        raise DatasetSyntaxError(str(e), line_number)


def parse_cardinality_default(text: str, line_number=None
                              ) -> CardinalityDefault:
    """Parses 'atleast(2; !x1, !x2) ~> atleast(1; x3, x4)'. The antecedent
    may be 'true' or several constraints joined by '&'."""
    if text.count(DEFAULT_ARROW) != 1:
        raise DatasetSyntaxError(
            "A default needs exactly one '{}'.".format(DEFAULT_ARROW),
            line_number)
    left, right = text.split(DEFAULT_ARROW)
    left = left.strip()
    antecedent = () if left == TRUE_TOKEN else \
        tuple(_parse_at_least(t, line_number) for t in left.split('&'))
    return CardinalityDefault(antecedent, _parse_at_least(right, line_number))


@dataclass(frozen=True)
class ShatterInstance:
    theory: Tuple[Clause, ...]
    defaults: Tuple[CardinalityDefault, ...]


def _block_defaults(variables: List[str]):
    n = len(variables)
    defaults = []
    size = 1
    while size < n:
        for start in range(0, n, 2 * size):
            lower = variables[start:start + size]
            upper = variables[start + size:start + 2 * size]
            for k in range(1, size + 1):
                antecedent = AtLeast(size - k + 1,
                                     tuple(Literal(v, False) for v in lower))
                consequent = AtLeast(k, tuple(Literal(v) for v in upper))
                defaults.append(CardinalityDefault((antecedent,),
                                                   consequent))
        size *= 2
    return defaults


def build_shatter_instance(n: int) -> ShatterInstance:
    """
    Parameters
    ----------
    n: int
        Number of variables, one of 2, 4, 8.

    Returns
    -------
    ShatterInstance with theory x_1..x_n (unit clauses) and (n/2) log2(n)
    defaults.
    """
    if n not in SUPPORTED_SIZES:
        raise ValueError('Shattering instances exist for n in {}, got {}.'
                         .format(SUPPORTED_SIZES, n))
    variables = ['x{}'.format(i + 1) for i in range(n)]
    theory = tuple(Clause([Literal(v)]) for v in variables)
    return ShatterInstance(theory, tuple(_block_defaults(variables)))


def covered_labeling(theory: PossTheory, defaults) -> Tuple[bool, ...]:
    return tuple(covers_cnf(theory, d.evidence_cnf(),
                            d.goal_negation_cnf()) == POSITIVE
                 for d in defaults)


def realized_labelings(inst: ShatterInstance, show_progress=False):
    """Every subset of the defaults (as a boolean tuple) that is exactly
    covered by some ordered partition of the theory."""
    if len(inst.theory) > SHATTER_MAX_CLAUSES:
        raise GuardViolationError(
            'Shattering checks are limited to {} clauses, got {}.'
            .format(SHATTER_MAX_CLAUSES, len(inst.theory)))
    labelings = set()
    partitions = list(iter_ordered_partitions(sorted(inst.theory, key=str)))
    for blocks in tqdm(partitions, disable=not show_progress, leave=False,
                       desc='Stratifications'):
        labelings.add(covered_labeling(PossTheory(blocks), inst.defaults))
    return labelings


def is_shattered(inst: ShatterInstance, show_progress=False) -> bool:
    labelings = realized_labelings(inst, show_progress)
    logger.info('{} of {} labelings realized.'
                .format(len(labelings), 2 ** len(inst.defaults)))
    return len(labelings) == 2 ** len(inst.defaults)
