# -*- coding: utf-8 -*-
"""
Rational closure of a set of defaults through tolerance partitioning.

A default a ~> b is tolerated by a set D when a & b & (all material
counterparts of D) is satisfiable. Repeatedly peeling off the tolerated
defaults gives the ranking Z = [D_0, D_1, ...], most normal first. Mapped
to a possibilistic theory (D_0 lowest), queries answered by the theory
are exactly the rational closure conclusions.
"""
import logging
from typing import FrozenSet, Iterable, List

from poss_ml.errors import InconsistentDefaultsError
from poss_ml.logic.literals import CnfFormula
from poss_ml.logic.sat import is_satisfiable
from poss_ml.possibilistic.defaults import DefaultRule, POSITIVE
from poss_ml.possibilistic.inference import covers
from poss_ml.possibilistic.theory import PossTheory

logger = logging.getLogger('rational_closure')


def is_tolerated(default: DefaultRule, defaults: Iterable[DefaultRule]):
    clauses = default.antecedent.unit_clauses() + [default.consequent]
    clauses += [d.material_clause() for d in defaults]
    return is_satisfiable(CnfFormula(clauses))


def z_ordering(defaults: Iterable[DefaultRule]
               ) -> List[FrozenSet[DefaultRule]]:
    """
    Parameters
    ----------
    defaults: iterable of DefaultRule
        Treated as a set.

    Returns
    -------
    The partition [D_0, ..., D_m] of the defaults, D_0 holding the defaults
    tolerated by the whole set.

    Raises
    ------
    InconsistentDefaultsError if at some point no remaining default is
    tolerated by the remaining ones.
    """
    remaining = sorted(set(defaults), key=str)
    levels = []
    while remaining:
        tolerated = [d for d in remaining if is_tolerated(d, remaining)]
        if len(tolerated) == 0:
            raise InconsistentDefaultsError(
                'None of the {} remaining defaults is tolerated, e.g. "{}".'
                .format(len(remaining), remaining[0]))
        logger.debug('Level {}: {} default(s).'
                     .format(len(levels), len(tolerated)))
        levels.append(frozenset(tolerated))
        remaining = [d for d in remaining if d not in levels[-1]]
    return levels


def check_z_ordering(levels: List[FrozenSet[DefaultRule]], defaults=None):
    """True iff every default of level i is tolerated by the union of the
    levels i and above. If `defaults` is given, also checks that the
    levels are non-empty and partition it."""
    if defaults is not None:
        union = [d for level in levels for d in level]
        if len(union) != len(set(union)) or set(union) != set(defaults):
            return False
        if any(len(level) == 0 for level in levels):
            return False
    for i, level in enumerate(levels):
        upper = [d for lv in levels[i:] for d in lv]
        if not all(is_tolerated(d, upper) for d in level):
            return False
    return True


def to_poss_theory(levels: List[FrozenSet[DefaultRule]]) -> PossTheory:
    """Level i becomes stratum i + 1 (material clauses). A clause shared by
    defaults of several levels is kept in the highest one."""
    highest = {}
    for i, level in enumerate(levels):
        for d in level:
            highest[d.material_clause()] = i
    strata = [set() for _ in levels]
    for clause, i in highest.items():
        strata[i].add(clause)
    return PossTheory.from_lists(strata)


def rational_closure_entails(defaults: Iterable[DefaultRule],
                             query: DefaultRule) -> bool:
    theory = to_poss_theory(z_ordering(defaults))
    return covers(theory, query) == POSITIVE
