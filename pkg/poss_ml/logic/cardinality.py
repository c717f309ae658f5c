# -*- coding: utf-8 -*-
"""
Clausal encoding of "at least k of these literals are true".

The encoding is a totalizer: a balanced tree of unary counters whose
outputs are defined in both directions, so auxiliary variables are
functionally determined by the inputs. Projected onto the input
literals, the models of `at_least(k, lits)` are exactly the assignments
with at least k true inputs.

Auxiliary variable names start with '$' and embed k and the input
literals, so two gadgets only share auxiliaries when they encode the
same constraint.
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from poss_ml.logic.literals import AUX_PREFIX, Clause, CnfFormula, Literal


def _gadget_prefix(k, lits):
    return '{}atleast{}[{}]'.format(AUX_PREFIX, k,
                                    ','.join(str(lit) for lit in lits))


def _totalizer(lits, cap, prefix, path, clauses):
    """Returns the output literals o_1..o_m (m = min(len(lits), cap)) of
    the subtree, with o_j true iff at least j of `lits` are true."""
    if len(lits) == 1:
        return [lits[0]]

    half = len(lits) // 2
    left = _totalizer(lits[:half], cap, prefix, path + 'l', clauses)
    right = _totalizer(lits[half:], cap, prefix, path + 'r', clauses)
    p, q = len(left), len(right)
    m = min(p + q, cap)
    out = [Literal('{}{}_{}'.format(prefix, path, j + 1)) for j in range(m)]

    # left[i - 1] stands for "left count >= i"; index 0 means "always".
    for i in range(p + 1):
        for j in range(q + 1):
            # Counting up: left >= i and right >= j  ->  out >= i + j
            s = min(i + j, m)
            if s >= 1:
                lits_up = []
                if i > 0:
                    lits_up.append(-left[i - 1])
                if j > 0:
                    lits_up.append(-right[j - 1])
                lits_up.append(out[s - 1])
                clauses.append(Clause(lits_up))
            # Counting down: out >= i + j + 1  ->  left > i or right > j
            s = i + j + 1
            if s <= m:
                lits_down = [-out[s - 1]]
                if i < p:
                    lits_down.append(left[i])
                if j < q:
                    lits_down.append(right[j])
                clauses.append(Clause(lits_down))
    return out


def at_least(k: int, lits: Sequence[Literal]) -> CnfFormula:
    """
    Parameters
    ----------
    k: int
        Threshold, 0 <= k <= len(lits).
    lits: sequence of Literal
        Counted literals. Repetitions count as many times as they appear.

    Returns
    -------
    CnfFormula, equisatisfiable with the constraint. at_least(0, _) is the
    empty formula, at_least(1, lits) the plain clause and at_least(n, lits)
    the n unit clauses; other thresholds use auxiliary variables.
    """
    lits = list(lits)
    if k < 0 or k > len(lits):
        raise ValueError('at_least needs 0 <= k <= {}, got k={}'
                         .format(len(lits), k))
    if k == 0:
        return CnfFormula()
    if k == 1:
        return CnfFormula([Clause(lits)])
    if k == len(lits):
        return CnfFormula(Clause([lit]) for lit in lits)

    clauses = []  # type: List[Clause]
    out = _totalizer(lits, k, _gadget_prefix(k, lits), '', clauses)
    clauses.append(Clause([out[k - 1]]))
    return CnfFormula(clauses)


@dataclass(frozen=True)
class AtLeast:
    """The cardinality constraint 'at least k of lits', kept symbolic so it
    can be negated exactly."""
    k: int
    lits: Tuple[Literal, ...]

    def __post_init__(self):
        object.__setattr__(self, 'lits', tuple(self.lits))
        if self.k < 0 or self.k > len(self.lits):
            raise ValueError('Invalid threshold {} for {} literals.'
                             .format(self.k, len(self.lits)))

    def to_cnf(self) -> CnfFormula:
        return at_least(self.k, self.lits)

    def negation(self) -> 'AtLeast':
        """not(at least k of l) == at least n - k + 1 of the negated l."""
        n = len(self.lits)
        if self.k == 0:
            raise ValueError('at_least(0) is a tautology; its negation is '
                             'not a cardinality constraint.')
        return AtLeast(n - self.k + 1, tuple(-lit for lit in self.lits))

    @property
    def variables(self):
        return frozenset(lit.variable for lit in self.lits)

    def __str__(self):
        return 'atleast({}; {})'.format(
            self.k, ', '.join(str(lit) for lit in self.lits))
