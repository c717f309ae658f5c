# -*- coding: utf-8 -*-
"""
Propositional building blocks: literals, clauses, literal conjunctions,
assignments and CNF formulas, together with their textual syntax.

Syntax
------
    literal      x, !x
    clause       a | !b        (the empty clause is written 'false')
    conjunction  a & !b        (the empty conjunction is written 'true')

Every object has a canonical string (literals sorted by variable name,
positive before negative) which is also used as the deterministic
lexicographic order between clauses.
"""
from dataclasses import dataclass, field
import re
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from poss_ml.errors import DatasetSyntaxError

# Names written by users. Auxiliary variables created by encodings start
# with '$' so they can never collide with a user variable.
VARIABLE_PATTERN = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
AUX_PREFIX = '$'

TRUE_TOKEN = 'true'
FALSE_TOKEN = 'false'


@dataclass(frozen=True, order=True)
class Literal:
    variable: str
    polarity: bool = True

    def __neg__(self):
        return Literal(self.variable, not self.polarity)

    @property
    def sort_key(self):
        return self.variable, not self.polarity

    def __str__(self):
        return self.variable if self.polarity else '!' + self.variable


def _sorted_literals(literals):
    return sorted(literals, key=lambda lit: lit.sort_key)


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals."""
    literals: FrozenSet[Literal] = frozenset()

    def __init__(self, literals: Iterable[Literal] = ()):
        object.__setattr__(self, 'literals', frozenset(literals))

    @property
    def is_tautology(self):
        return any(-lit in self.literals for lit in self.literals)

    @property
    def is_empty(self):
        return len(self.literals) == 0

    @property
    def variables(self):
        return frozenset(lit.variable for lit in self.literals)

    def negation(self):
        """Returns the conjunction of the negated literals."""
        return LiteralConjunction(-lit for lit in self.literals)

    def sorted_literals(self):
        return _sorted_literals(self.literals)

    @property
    def sort_key(self):
        return str(self)

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.sorted_literals())

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __str__(self):
        if self.is_empty:
            return FALSE_TOKEN
        return ' | '.join(str(lit) for lit in self.sorted_literals())


@dataclass(frozen=True)
class LiteralConjunction:
    """A conjunction of literals. The empty conjunction is 'true'."""
    literals: FrozenSet[Literal] = frozenset()

    def __init__(self, literals: Iterable[Literal] = ()):
        object.__setattr__(self, 'literals', frozenset(literals))

    @property
    def is_consistent(self):
        return not any(-lit in self.literals for lit in self.literals)

    @property
    def variables(self):
        return frozenset(lit.variable for lit in self.literals)

    def negation(self):
        """Returns the clause made of the negated literals."""
        return Clause(-lit for lit in self.literals)

    def unit_clauses(self):
        return [Clause([lit]) for lit in self.sorted_literals()]

    def sorted_literals(self):
        return _sorted_literals(self.literals)

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.sorted_literals())

    def __str__(self):
        if len(self.literals) == 0:
            return TRUE_TOKEN
        return ' & '.join(str(lit) for lit in self.sorted_literals())


@dataclass(frozen=True)
class Assignment:
    """A total or partial truth assignment, stored as sorted items."""
    items: Tuple[Tuple[str, bool], ...] = ()

    @classmethod
    def from_dict(cls, values: Mapping[str, bool]):
        return cls(tuple(sorted((k, bool(v)) for k, v in values.items())))

    def as_dict(self) -> Dict[str, bool]:
        return dict(self.items)

    def value(self, literal: Literal):
        """True/False if the literal's variable is assigned, else None."""
        v = self.as_dict().get(literal.variable)
        if v is None:
            return None
        return v == literal.polarity

    def satisfies(self, clause: Clause):
        values = self.as_dict()
        return any(values.get(lit.variable) == lit.polarity
                   for lit in clause.literals)

    def satisfies_all(self, clauses: Iterable[Clause]):
        return all(self.satisfies(c) for c in clauses)

    def __str__(self):
        return ' '.join('{}={}'.format(k, int(v)) for k, v in self.items)


@dataclass(frozen=True)
class CnfFormula:
    """A conjunction of clauses. Order is kept; duplicates are harmless."""
    clauses: Tuple[Clause, ...] = field(default=())

    def __init__(self, clauses: Iterable[Clause] = ()):
        object.__setattr__(self, 'clauses', tuple(clauses))

    @property
    def variables(self):
        return frozenset(v for c in self.clauses for v in c.variables)

    def __add__(self, other):
        if isinstance(other, CnfFormula):
            return CnfFormula(self.clauses + other.clauses)
        return CnfFormula(self.clauses + tuple(other))

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __str__(self):
        return ' & '.join('({})'.format(c) for c in self.clauses) or \
            TRUE_TOKEN


def check_variable_name(name: str, line_number=None):
    if not VARIABLE_PATTERN.match(name):
        raise DatasetSyntaxError(
            "Invalid variable name '{}'.".format(name), line_number)
    if name in (TRUE_TOKEN, FALSE_TOKEN):
        raise DatasetSyntaxError(
            "'{}' is reserved and cannot name a variable.".format(name),
            line_number)


def parse_literal(text: str, line_number=None) -> Literal:
    text = text.strip()
    polarity = True
    if text.startswith('!'):
        polarity = False
        text = text[1:].strip()
    check_variable_name(text, line_number)
    return Literal(text, polarity)


def parse_clause(text: str, line_number=None) -> Clause:
    """Parses 'a | !b'. 'false' is the empty clause."""
    text = text.strip()
    if text == '':
        raise DatasetSyntaxError('Empty clause text.', line_number)
    if text == FALSE_TOKEN:
        return Clause()
    return Clause(parse_literal(t, line_number) for t in text.split('|'))


def parse_conjunction(text: str, line_number=None) -> LiteralConjunction:
    """Parses 'a & !b'. 'true' (or nothing) is the empty conjunction."""
    text = text.strip()
    if text in ('', TRUE_TOKEN):
        return LiteralConjunction()
    return LiteralConjunction(parse_literal(t, line_number)
                              for t in text.split('&'))
