# -*- coding: utf-8 -*-
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from poss_ml.errors import EmptyDatasetError
from poss_ml.possibilistic.defaults import LabeledExample, POSITIVE
from poss_ml.possibilistic.inference import (QueryEngine, make_query_engine,
                                             predict_labels)
from poss_ml.possibilistic.theory import PossTheory

REPORT_COLUMNS = ['n', 'errors', 'sample_error', 'accuracy',
                  'true_positives', 'false_positives', 'true_negatives',
                  'false_negatives']


@dataclass(frozen=True)
class EvalReport:
    n: int
    errors: int
    true_positives: int = 0
    false_positives: int = 0
    true_negatives: int = 0
    false_negatives: int = 0
    # (example, predicted label) in dataset order
    per_example: Tuple[Tuple[LabeledExample, int], ...] = field(
        default=(), repr=False)

    @property
    def sample_error(self) -> Fraction:
        if self.n == 0:
            raise EmptyDatasetError('No example was evaluated.')
        return Fraction(self.errors, self.n)

    @property
    def accuracy(self) -> Fraction:
        return 1 - self.sample_error

    def as_dict(self):
        return {'n': self.n, 'errors': self.errors,
                'sample_error': float(self.sample_error),
                'accuracy': float(self.accuracy),
                'true_positives': self.true_positives,
                'false_positives': self.false_positives,
                'true_negatives': self.true_negatives,
                'false_negatives': self.false_negatives}


def report_from_predictions(predicted: np.ndarray, labels: np.ndarray,
                            examples: Sequence[LabeledExample] = ()):
    predicted = np.asarray(predicted)
    labels = np.asarray(labels)
    if len(examples) not in (0, len(labels)):
        raise ValueError("Got {} examples for {} labels."
                         .format(len(examples), len(labels)))
    pos = labels == POSITIVE
    hit = predicted == labels
    return EvalReport(n=len(labels), errors=int((~hit).sum()),
                      true_positives=int((hit & pos).sum()),
                      false_positives=int((~hit & ~pos).sum()),
                      true_negatives=int((hit & ~pos).sum()),
                      false_negatives=int((~hit & pos).sum()),
                      per_example=tuple((e, int(p)) for e, p in
                                        zip(examples, predicted)))


def evaluate(theory: PossTheory, data: Sequence[LabeledExample],
             engine: Optional[QueryEngine] = None) -> EvalReport:
    """
    Parameters
    ----------
    theory: PossTheory
    data: sequence of LabeledExample
        Must not be empty.
    engine: QueryEngine, optional
        Defaults to an engine built for the theory and data variables.

    Returns
    -------
    EvalReport, with exact (Fraction) sample error and accuracy, and the
    predicted label of every example in `per_example`.
    """
    data = list(data)
    if len(data) == 0:
        raise EmptyDatasetError('Cannot evaluate on an empty dataset.')
    if engine is None:
        variables = set(theory.variables)
        for e in data:
            variables |= e.rule.variables
        engine = make_query_engine(variables)
    predicted = predict_labels(theory, [e.rule for e in data], engine)
    labels = np.array([e.label for e in data], dtype=np.int8)
    return report_from_predictions(predicted, labels, data)


def format_report_tsv(report: EvalReport, header=True) -> str:
    values = report.as_dict()
    lines = []
    if header:
        lines.append('\t'.join(REPORT_COLUMNS))
    lines.append('\t'.join(str(values[c]) for c in REPORT_COLUMNS))
    return '\n'.join(lines) + '\n'
