# -*- coding: utf-8 -*-
"""
Stratified possibilistic theories.

A theory is an ordered list of strata of clauses, lowest certainty first,
plus a set of hard clauses ranked above every stratum. With k strata,
stratum i (1-based) carries the certainty weight i/k; hard clauses carry
weight 1 and are never dropped.

Text format, one clause per line::

    # comment
    0.5<TAB>bird | !penguin
    1<TAB>!penguin | !flies
    HARD<TAB>!a | !b

Equal weights form one stratum; only the order of the weights matters.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
import itertools
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from poss_ml.errors import DatasetSyntaxError
from poss_ml.logic.literals import Clause, CnfFormula, parse_clause

HARD_TOKEN = 'HARD'


@dataclass(frozen=True)
class PossTheory:
    strata: Tuple[FrozenSet[Clause], ...] = ()
    hard: FrozenSet[Clause] = frozenset()

    def __post_init__(self):
        strata = tuple(frozenset(s) for s in self.strata)
        hard = frozenset(self.hard)
        object.__setattr__(self, 'strata', strata)
        object.__setattr__(self, 'hard', hard)

        seen = set(hard)
        for i, stratum in enumerate(strata):
            if len(stratum) == 0:
                raise ValueError('Stratum {} is empty.'.format(i + 1))
            repeated = seen & stratum
            if repeated:
                raise ValueError('Clause {} appears in more than one stratum.'
                                 .format(sorted(repeated)[0]))
            seen |= stratum

    @classmethod
    def from_lists(cls, strata: Iterable[Iterable[Clause]],
                   hard: Iterable[Clause] = ()):
        """Builds a theory, silently dropping empty strata."""
        strata = [frozenset(s) for s in strata]
        return cls(tuple(s for s in strata if len(s) > 0), frozenset(hard))

    @property
    def n_strata(self):
        return len(self.strata)

    @property
    def n_clauses(self):
        return sum(len(s) for s in self.strata)

    @property
    def clauses(self) -> FrozenSet[Clause]:
        """Clauses of the strata (hard clauses excluded)."""
        return frozenset(c for s in self.strata for c in s)

    @property
    def variables(self):
        return frozenset(v for c in self.clauses | self.hard
                         for v in c.variables)

    @property
    def weights(self) -> List[Fraction]:
        k = self.n_strata
        return [Fraction(i + 1, k) for i in range(k)]

    @cached_property
    def canonical_key(self):
        return (tuple(tuple(sorted(str(c) for c in s)) for s in self.strata),
                tuple(sorted(str(c) for c in self.hard)))

    def stratum_of(self, clause: Clause):
        """0-based index of the stratum holding `clause`, or None."""
        for i, s in enumerate(self.strata):
            if clause in s:
                return i
        return None

    def contains(self, clause: Clause):
        return clause in self.hard or self.stratum_of(clause) is not None

    def add_clause(self, clause: Clause, index: int, new_stratum: bool):
        """
        Parameters
        ----------
        clause: Clause
        index: int
            If new_stratum, the clause forms a new stratum inserted at
            `index` (0 = lowest, n_strata = highest). Otherwise it joins
            the existing stratum `index`.
        new_stratum: bool
        """
        strata = [set(s) for s in self.strata]
        if new_stratum:
            strata.insert(index, {clause})
        else:
            strata[index].add(clause)
        return PossTheory.from_lists(strata, self.hard)

    def remove_clause(self, clause: Clause):
        """Removes a stratum clause; an emptied stratum disappears."""
        return PossTheory.from_lists([s - {clause} for s in self.strata],
                                     self.hard)

    def replace_clause(self, old: Clause, new: Clause):
        return PossTheory.from_lists(
            [(s - {old}) | {new} if old in s else s for s in self.strata],
            self.hard)

    def sorted_clauses(self):
        """(stratum index, clause), lowest stratum first, clauses in
        lexicographic order within a stratum."""
        return [(i, c) for i, s in enumerate(self.strata)
                for c in sorted(s, key=str)]

    def __str__(self):
        return format_theory(self).rstrip('\n')


def strict_cut_clauses(strata: Sequence[Iterable[Clause]],
                       hard: Iterable[Clause], j: int) -> CnfFormula:
    """Clauses of the strata strictly above j (1-based), plus hard ones."""
    clauses = list(hard)
    for s in strata[j:]:
        clauses.extend(s)
    return CnfFormula(clauses)


def strict_cut(theory: PossTheory, j: int) -> CnfFormula:
    """
    Parameters
    ----------
    theory: PossTheory
    j: int
        0 <= j <= theory.n_strata.

    Returns
    -------
    The clauses whose certainty is strictly greater than j/k, hard clauses
    included. strict_cut(t, 0) is the whole theory.
    """
    if j < 0 or j > theory.n_strata:
        raise ValueError('Cut level {} outside [0, {}].'
                         .format(j, theory.n_strata))
    return strict_cut_clauses(theory.strata, theory.hard, j)


def iter_ordered_partitions(items: Sequence):
    """Yields every ordered partition of `items` into non-empty blocks,
    as tuples of frozensets, lowest block first. There are Fubini(n) of
    them; the order of enumeration is deterministic."""
    items = list(items)
    if len(items) == 0:
        yield ()
        return
    n = len(items)
    # Every ordered partition is a surjection from items onto 1..m.
    for m in range(1, n + 1):
        for ranks in itertools.product(range(m), repeat=n):
            if len(set(ranks)) != m:
                continue
            yield tuple(frozenset(items[i] for i in range(n) if ranks[i] == b)
                        for b in range(m))


def format_weight(fraction: Fraction):
    return '{:.6g}'.format(float(fraction))


def format_theory(theory: PossTheory) -> str:
    """Deterministic text: strata in ascending weight, lexicographic
    clauses, hard clauses last."""
    lines = []
    for w, stratum in zip(theory.weights, theory.strata):
        for c in sorted(stratum, key=str):
            lines.append('{}\t{}'.format(format_weight(w), c))
    for c in sorted(theory.hard, key=str):
        lines.append('{}\t{}'.format(HARD_TOKEN, c))
    return ''.join(line + '\n' for line in lines)


def parse_theory(text: str) -> PossTheory:
    weighted = {}
    hard = set()
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line == '' or line.startswith('#'):
            continue
        if '\t' not in line:
            raise DatasetSyntaxError(
                "Expected '<weight>\\t<clause>'.", line_number)
        weight_text, clause_text = line.split('\t', 1)
        clause = parse_clause(clause_text, line_number)
        weight_text = weight_text.strip()
        if weight_text == HARD_TOKEN:
            hard.add(clause)
            continue
        try:
            weight = float(weight_text)
        except ValueError:
            raise DatasetSyntaxError(
                "Invalid weight '{}'.".format(weight_text), line_number)
        if not 0 < weight <= 1:
            raise DatasetSyntaxError(
                'Weights must be in (0, 1], got {}.'.format(weight),
                line_number)
        weighted.setdefault(weight, set()).add(clause)
    strata = [weighted[w] for w in sorted(weighted)]
    try:
        return PossTheory.from_lists(strata, hard)
    except ValueError as e:
        raise DatasetSyntaxError(str(e))


def load_theory(filename: str) -> PossTheory:
    with open(filename, 'r') as f:
        return parse_theory(f.read())


def save_theory(theory: PossTheory, filename: str):
    with open(filename, 'w') as f:
        f.write(format_theory(theory))


def parse_clause_pool(text: str) -> List[Clause]:
    """A pool file holds one clause per line. Theory-formatted lines are
    accepted too: their weights are ignored."""
    pool = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line == '' or line.startswith('#'):
            continue
        if '\t' in line:
            line = line.split('\t', 1)[1]
        clause = parse_clause(line, line_number)
        if clause not in pool:
            pool.append(clause)
    return pool
