# -*- coding: utf-8 -*-
import json
import logging

from poss_ml.learning.heuristic import LearnConfig
from poss_ml.possibilistic.inference import BACKEND_CHOICES
from poss_ml.possibilistic.theory import parse_clause_pool

CONFIG_KEYS = ['iterations', 'timeout', 'sample_size', 'rng_seed',
               'worker_count', 'patience', 'backend']

# Command-line dest -> LearnConfig field
_ARG_TO_FIELD = {'iters': 'iterations',
                 'timeout_secs': 'timeout',
                 'sample_size': 'sample_size',
                 'seed': 'rng_seed',
                 'workers': 'worker_count',
                 'patience': 'patience',
                 'backend': 'backend'}


def add_learning_args(p):
    g = p.add_argument_group("Heuristic learner options")
    g.add_argument(
        '--config', metavar='JSON',
        help="JSON file of LearnConfig values: {}.\nExplicit options "
             "below override it.".format(', '.join(CONFIG_KEYS)))
    g.add_argument(
        '--iters', type=int, metavar='N',
        help="Number of iterations. Default: 100.")
    g.add_argument(
        '--timeout-secs', dest='timeout_secs', type=float, metavar='T',
        help="Wall-clock budget in seconds. The current theory is "
             "returned \nwhen it expires. Default: none.")
    g.add_argument(
        '--sample-size', dest='sample_size', type=int, metavar='M',
        help="Misclassified examples sampled per iteration. Default: 10.")
    g.add_argument(
        '--seed', type=int, metavar='S',
        help="Random seed. Default: 1234.")
    g.add_argument(
        '--hard', metavar='FILE',
        help="File of hard clauses, one per line. They are never dropped.")
    g.add_argument(
        '--workers', type=int, metavar='W',
        help="Threads scoring candidate placements. Default: 1.")
    g.add_argument(
        '--patience', type=int, metavar='P',
        help="Stop after P iterations without improvement. Default: "
             "never.")
    g.add_argument(
        '--backend', choices=BACKEND_CHOICES,
        help="Query engine. 'auto' enumerates worlds for small "
             "vocabularies. \nDefault: auto.")
    g.add_argument(
        '--log_dir', metavar='DIR',
        help="If set, saves train_error.npy and params.json there.")


def load_config_file(filename):
    with open(filename, 'r') as f:
        values = json.load(f)
    unknown = set(values) - set(CONFIG_KEYS) - {'hard_constraints'}
    if unknown:
        raise ValueError('Unknown configuration keys: {}'
                         .format(sorted(unknown)))
    return values


def prepare_learn_config(args) -> LearnConfig:
    """JSON values first, then every option given on the command line."""
    values = {}
    if args.config:
        values.update(load_config_file(args.config))
        logging.debug('Loaded configuration file {}'.format(args.config))

    hard = set()
    if 'hard_constraints' in values:
        hard |= set(parse_clause_pool('\n'.join(values['hard_constraints'])))
    if args.hard:
        with open(args.hard, 'r') as f:
            hard = set(parse_clause_pool(f.read()))
    values['hard_constraints'] = frozenset(hard)

    for arg_name, field_name in _ARG_TO_FIELD.items():
        value = getattr(args, arg_name, None)
        if value is not None:
            values[field_name] = value
    return LearnConfig(**values)
