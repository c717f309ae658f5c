# -*- coding: utf-8 -*-
"""
Complete satisfiability checking for small CNF formulas.

The solver is a chronological-backtracking DPLL with two-watched-literal
unit propagation. Variables are interned to dense integers per call, so a
formula is self-contained and the solver keeps no global state.
"""
import logging
import threading
from typing import Dict, Iterable, List, Optional

from poss_ml.logic.literals import Assignment, Clause, CnfFormula

logger = logging.getLogger('sat')

_UNASSIGNED = 0
_TRUE = 1
_FALSE = -1


class SatCallCounter(object):
    """Counts consistency checks. Shared counters are safe across threads.

    Example of usage:
        counter = SatCallCounter()
        inconsistency_level(theory, counter=counter)
        counter.count  # number of satisfiability checks made
    """
    def __init__(self):
        self.count = 0
        self._lock = threading.Lock()

    def increment(self):
        with self._lock:
            self.count += 1

    def reset(self):
        with self._lock:
            self.count = 0


class VariableTable(object):
    """Interns variable names to integers 1..n."""
    def __init__(self):
        self.index = {}  # type: Dict[str, int]
        self.names = [None]

    def intern(self, name: str):
        i = self.index.get(name)
        if i is None:
            i = len(self.names)
            self.index[name] = i
            self.names.append(name)
        return i

    @property
    def nb_variables(self):
        return len(self.names) - 1

    def encode_clause(self, clause: Clause):
        return [self.intern(lit.variable) if lit.polarity
                else -self.intern(lit.variable)
                for lit in clause.literals]


class DpllSolver(object):
    """DPLL over integer clauses (DIMACS convention: -v is the negation).

    Parameters
    ----------
    clauses: list of list of int
        The formula. Tautologies and duplicate literals are tolerated.
    nb_variables: int
        Largest variable index in use.
    """
    def __init__(self, clauses: Iterable[List[int]], nb_variables: int):
        self.nb_variables = nb_variables
        self.values = [_UNASSIGNED] * (nb_variables + 1)
        self.trail = []
        self.watches = {}
        self.clauses = []
        self._units = []
        self._has_empty_clause = False
        self._qhead = 0

        occurrences = [0] * (nb_variables + 1)
        for raw in clauses:
            lits = sorted(set(raw), key=lambda x: (abs(x), x))
            if any(-x in lits for x in lits):
                continue
            if len(lits) == 0:
                self._has_empty_clause = True
                continue
            for x in lits:
                occurrences[abs(x)] += 1
            if len(lits) == 1:
                self._units.append(lits[0])
                continue
            idx = len(self.clauses)
            self.clauses.append(lits)
            self.watches.setdefault(lits[0], []).append(idx)
            self.watches.setdefault(lits[1], []).append(idx)

        # Most frequent variables are branched on first.
        self._order = sorted(range(1, nb_variables + 1),
                             key=lambda v: (-occurrences[v], v))

    def _value(self, lit):
        v = self.values[abs(lit)]
        return v if lit > 0 else -v

    def _assign(self, lit):
        """Returns False if lit is already false."""
        current = self._value(lit)
        if current == _FALSE:
            return False
        if current == _UNASSIGNED:
            self.values[abs(lit)] = _TRUE if lit > 0 else _FALSE
            self.trail.append(lit)
        return True

    def _propagate(self):
        """Returns True on conflict."""
        while self._qhead < len(self.trail):
            false_lit = -self.trail[self._qhead]
            self._qhead += 1
            watchers = self.watches.get(false_lit)
            if not watchers:
                continue
            i = 0
            while i < len(watchers):
                clause = self.clauses[watchers[i]]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._value(first) == _TRUE:
                    i += 1
                    continue

                moved = False
                for k in range(2, len(clause)):
                    if self._value(clause[k]) != _FALSE:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches.setdefault(clause[1], []).append(
                            watchers[i])
                        watchers[i] = watchers[-1]
                        watchers.pop()
                        moved = True
                        break
                if moved:
                    continue

                if self._value(first) == _FALSE:
                    return True
                self._assign(first)
                i += 1
        return False

    def _undo_to(self, trail_len):
        for lit in self.trail[trail_len:]:
            self.values[abs(lit)] = _UNASSIGNED
        del self.trail[trail_len:]
        self._qhead = trail_len

    def _pick_branch_variable(self):
        for v in self._order:
            if self.values[v] == _UNASSIGNED:
                return v
        return None

    def solve(self):
        """Returns True iff the formula is satisfiable. On success,
        `self.values` holds a model (unassigned variables are free)."""
        if self._has_empty_clause:
            return False
        for lit in self._units:
            if not self._assign(lit):
                return False

        # Decisions: [trail length before the decision, literal, flipped]
        decisions = []
        while True:
            if self._propagate():
                while decisions and decisions[-1][2]:
                    self._undo_to(decisions.pop()[0])
                if not decisions:
                    return False
                trail_len, lit, _ = decisions[-1]
                self._undo_to(trail_len)
                decisions[-1] = [trail_len, -lit, True]
                self._assign(-lit)
                continue

            v = self._pick_branch_variable()
            if v is None:
                return True
            decisions.append([len(self.trail), v, False])
            self._assign(v)


def _solve(formula: CnfFormula, counter: Optional[SatCallCounter]):
    if counter is not None:
        counter.increment()
    table = VariableTable()
    int_clauses = [table.encode_clause(c) for c in formula.clauses]
    solver = DpllSolver(int_clauses, table.nb_variables)
    return solver.solve(), solver, table


def is_satisfiable(formula: CnfFormula,
                   counter: Optional[SatCallCounter] = None) -> bool:
    """
    Parameters
    ----------
    formula: CnfFormula
    counter: SatCallCounter, optional
        Incremented once per call.

    Returns
    -------
    True iff some assignment satisfies every clause. The empty formula is
    satisfiable; a formula holding the empty clause is not.
    """
    is_sat, _, _ = _solve(formula, counter)
    return is_sat


def find_model(formula: CnfFormula,
               counter: Optional[SatCallCounter] = None
               ) -> Optional[Assignment]:
    """Returns a satisfying assignment of the formula's variables, or None.
    Variables left free by the search are set to False."""
    is_sat, solver, table = _solve(formula, counter)
    if not is_sat:
        return None
    return Assignment.from_dict(
        {table.names[i]: solver.values[i] == _TRUE
         for i in range(1, table.nb_variables + 1)})


def entails(formula: CnfFormula, clause: Clause,
            counter: Optional[SatCallCounter] = None) -> bool:
    """formula |= clause, i.e. formula plus the negated clause literals is
    unsatisfiable. An unsatisfiable formula entails every clause."""
    negated = clause.negation().unit_clauses()
    return not is_satisfiable(formula + negated, counter)
