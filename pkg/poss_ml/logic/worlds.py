# -*- coding: utf-8 -*-
"""
Explicit enumeration of the possible worlds of a small vocabulary.

Formulas are compiled to boolean masks over the 2^n worlds with numpy, so
that consistency and entailment become array operations. Used by the MAP
oracle and by the vectorized query engine; also the reference oracle of
the tests.
"""
import threading

import numpy as np

from poss_ml.errors import GuardViolationError
from poss_ml.logic.literals import (Assignment, Clause, CnfFormula, Literal,
                                    LiteralConjunction)

MAX_WORLD_VARIABLES = 20


class WorldSpace(object):
    """
    Example of usage:
        space = WorldSpace(['a', 'b'])
        mask = space.clause_mask(parse_clause('a | !b'))
        mask.sum()  # 3 worlds
    """
    def __init__(self, variables, max_variables=MAX_WORLD_VARIABLES):
        self.variables = tuple(sorted(set(variables)))
        if len(self.variables) > max_variables:
            raise GuardViolationError(
                'Cannot enumerate the worlds of {} variables (max {}).'
                .format(len(self.variables), max_variables))
        self.index = {v: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        worlds = np.arange(2 ** n, dtype=np.int64)[:, None]
        # bits[w, i] is the value of variable i in world w.
        self.bits = ((worlds >> np.arange(n, dtype=np.int64)) & 1
                     ).astype(bool)
        self._clause_masks = {}
        self._lock = threading.Lock()

    @property
    def nb_worlds(self):
        return self.bits.shape[0]

    def full_mask(self):
        return np.ones(self.nb_worlds, dtype=bool)

    def literal_mask(self, literal: Literal):
        try:
            column = self.bits[:, self.index[literal.variable]]
        except KeyError:
            raise ValueError("Variable '{}' is not in this world space."
                             .format(literal.variable))
        return column if literal.polarity else ~column

    def clause_mask(self, clause: Clause):
        """Worlds satisfying the clause. Masks are memoized."""
        mask = self._clause_masks.get(clause)
        if mask is None:
            mask = np.zeros(self.nb_worlds, dtype=bool)
            for lit in clause.literals:
                mask |= self.literal_mask(lit)
            with self._lock:
                self._clause_masks[clause] = mask
        return mask

    def clauses_mask(self, clauses):
        mask = self.full_mask()
        for c in clauses:
            mask &= self.clause_mask(c)
        return mask

    def cnf_mask(self, formula: CnfFormula):
        return self.clauses_mask(formula.clauses)

    def conjunction_mask(self, conjunction: LiteralConjunction):
        mask = self.full_mask()
        for lit in conjunction.literals:
            mask &= self.literal_mask(lit)
        return mask

    def assignment(self, world: int) -> Assignment:
        return Assignment.from_dict(
            {v: bool(self.bits[world, i])
             for i, v in enumerate(self.variables)})

    def models(self, mask):
        return [self.assignment(int(w)) for w in np.flatnonzero(mask)]


def enumerate_satisfiable(formula: CnfFormula):
    """Reference satisfiability by exhaustive enumeration."""
    space = WorldSpace(formula.variables)
    return bool(space.cnf_mask(formula).any())


def project_models(formula: CnfFormula, variables):
    """Set of assignments of `variables` that extend to a model of the
    formula. Used to check encodings with auxiliary variables."""
    space = WorldSpace(set(formula.variables) | set(variables))
    mask = space.cnf_mask(formula)
    cols = [space.index[v] for v in sorted(set(variables))]
    rows = space.bits[mask][:, cols]
    return {tuple(bool(x) for x in row) for row in rows}
