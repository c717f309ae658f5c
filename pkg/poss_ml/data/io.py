# -*- coding: utf-8 -*-
"""
Dataset files, one labeled default per line::

    # meta: source=crowd
    # vocabulary: antarctic bird flies penguin
    bird & antarctic ~> !flies ; +
    true ~> bird ; - ; group=ann3

The antecedent is 'true' or literals joined by '&', the consequent
literals joined by '|', the label '+' or '-'. Other '#' lines are
comments.
"""
from poss_ml.data.dataset import Dataset
from poss_ml.errors import DatasetSyntaxError
from poss_ml.logic.literals import check_variable_name
from poss_ml.possibilistic.defaults import (LabeledExample, NEGATIVE,
                                            POSITIVE, parse_default)

LABEL_TOKENS = {'+': POSITIVE, '-': NEGATIVE}
GROUP_PREFIX = 'group='
META_PREFIX = '# meta:'
VOCABULARY_PREFIX = '# vocabulary:'


def parse_example(line: str, line_number=None) -> LabeledExample:
    fields = [f.strip() for f in line.split(';')]
    if len(fields) not in (2, 3):
        raise DatasetSyntaxError(
            "Expected '<default> ; <label> [; group=<id>]'.", line_number)
    rule = parse_default(fields[0], line_number)
    if fields[1] not in LABEL_TOKENS:
        raise DatasetSyntaxError("Unknown label '{}', expected '+' or '-'."
                                 .format(fields[1]), line_number)
    group = None
    if len(fields) == 3:
        if not fields[2].startswith(GROUP_PREFIX) or \
                fields[2] == GROUP_PREFIX:
            raise DatasetSyntaxError("Expected 'group=<id>', got '{}'."
                                     .format(fields[2]), line_number)
        group = fields[2][len(GROUP_PREFIX):].strip()
    return LabeledExample(rule, LABEL_TOKENS[fields[1]], group)


def parse_dataset(text: str) -> Dataset:
    examples = []
    vocabulary = set()
    metadata = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line.startswith(META_PREFIX):
            entry = line[len(META_PREFIX):].strip()
            if '=' not in entry:
                raise DatasetSyntaxError("Expected '# meta: key=value'.",
                                         line_number)
            key, value = entry.split('=', 1)
            metadata[key.strip()] = value.strip()
        elif line.startswith(VOCABULARY_PREFIX):
            for v in line[len(VOCABULARY_PREFIX):].split():
                check_variable_name(v, line_number)
                vocabulary.add(v)
        elif line == '' or line.startswith('#'):
            continue
        else:
            examples.append(parse_example(line, line_number))
    return Dataset(examples, frozenset(vocabulary), metadata)


def format_example(e: LabeledExample) -> str:
    label = '+' if e.is_positive else '-'
    line = '{} ; {}'.format(e.rule, label)
    if e.group is not None:
        line += ' ; {}{}'.format(GROUP_PREFIX, e.group)
    return line


def format_dataset(d: Dataset) -> str:
    lines = ['{} {}={}'.format(META_PREFIX, k, v)
             for k, v in sorted(d.metadata.items())]
    lines.append('{} {}'.format(VOCABULARY_PREFIX,
                                ' '.join(sorted(d.vocabulary))))
    lines += [format_example(e) for e in d.examples]
    return ''.join(line + '\n' for line in lines)


def load_dataset(filename: str) -> Dataset:
    with open(filename, 'r', encoding='utf-8') as f:
        return parse_dataset(f.read())


def save_dataset(d: Dataset, filename: str):
    with open(filename, 'w', encoding='utf-8', newline='\n') as f:
        f.write(format_dataset(d))
