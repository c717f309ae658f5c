# -*- coding: utf-8 -*-
"""
Learning stratified theories from labeled defaults.

Subcommands:
    learn-heur   Greedy learner on a (possibly noisy) dataset.
    learn-exact  Exact search for a separating stratification of a pool.
    zrank        Rational closure theory of the positive defaults.
    query        Does a theory cover a default? Prints + or -.
    eval         Evaluation report of a theory on a dataset (TSV).
    gen-map      Dataset labeled by MAP inference on a weighted theory.
    vc           VC-dimension bounds and shattering checks.
    split        Annotator-aware train/test split.
    negatives    Negative examples from swapped consequents.

Results go to stdout (or to the given output files); logs and progress go
to stderr. Exit codes: 0 success, 1 invalid input, 2 usage error,
3 no separating stratification.
"""
import argparse
import logging
import sys

import numpy as np

from poss_ml.data.dataset import (Dataset, majority_baseline_accuracy,
                                  split_by_group, synthesize_negatives)
from poss_ml.data.io import load_dataset, save_dataset, format_dataset
from poss_ml.errors import PossMLError
from poss_ml.experiment_utils.prints import (LOGGING_CHOICES,
                                             format_dict_to_str,
                                             set_logging_level)
from poss_ml.experiment_utils.timer import Timer
from poss_ml.learning.exact import (SeparatingStratificationSearch,
                                    SeparationProblem, brute_force_separating)
from poss_ml.learning.heuristic import HeuristicLearner
from poss_ml.learning.utils import add_learning_args, prepare_learn_config
from poss_ml.map.io import load_weighted_theory, save_weighted_theory
from poss_ml.map.map_oracle import generate_dataset, random_weighted_theory
from poss_ml.possibilistic.defaults import parse_default
from poss_ml.possibilistic.evaluation import evaluate, format_report_tsv
from poss_ml.possibilistic.inference import (BACKEND_CHOICES, covers,
                                             make_query_engine)
from poss_ml.possibilistic.rational_closure import (check_z_ordering,
                                                    to_poss_theory,
                                                    z_ordering)
from poss_ml.possibilistic.theory import (format_theory, load_theory,
                                          parse_clause_pool)
from poss_ml.vc.vc_dimension import (build_shatter_instance, is_shattered,
                                     vc_lower_bound, vc_subset_bound,
                                     vc_upper_bound)

logger = logging.getLogger('harness')

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_NONE = 3


def _write_output(text, filename=None):
    if filename is None:
        sys.stdout.write(text)
    else:
        with open(filename, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)


def _load_pool(filename):
    with open(filename, 'r', encoding='utf-8') as f:
        return parse_clause_pool(f.read())


def _add_common_args(p):
    p.add_argument(
        '--logging', choices=LOGGING_CHOICES, default='warning',
        help="Logging level. Default: warning.")


def _add_learn_heur_parser(subparsers, parent):
    p = subparsers.add_parser(
        'learn-heur', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Learn a theory with the greedy learner.",
        description="Learns a stratified theory from a dataset. One TSV line "
                    "per iteration \nis written to stderr; the theory goes "
                    "to stdout or --out.")
    p.add_argument('--data', '--train', dest='data', required=True,
                   metavar='FILE', help="Training dataset.")
    p.add_argument('--out', metavar='FILE',
                   help="Output theory file. Default: stdout.")
    p.add_argument('--progress', action='store_true',
                   help="Show a progress bar on stderr.")
    add_learning_args(p)


def _add_learn_exact_parser(subparsers, parent):
    p = subparsers.add_parser(
        'learn-exact', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Search for a separating stratification.",
        description="Prints FOUND and the theory (exit 0), or NONE (exit 3).")
    p.add_argument('--pool', '--theory', dest='pool', required=True,
                   metavar='FILE',
                   help="Clauses to stratify, one per line.")
    p.add_argument('--data', '--train', dest='data', required=True,
                   metavar='FILE', help="Labeled defaults to separate.")
    p.add_argument('--out', metavar='FILE',
                   help="Output theory file. Default: stdout, after FOUND.")
    p.add_argument('--brute-force', dest='brute_force', action='store_true',
                   help="Enumerate every ordered partition instead (small "
                        "pools only).")


def _add_zrank_parser(subparsers, parent):
    p = subparsers.add_parser(
        'zrank', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Rational closure theory of the positive defaults.")
    p.add_argument('--data', '--defaults', dest='data', required=True,
                   metavar='FILE',
                   help="Dataset. Negative examples are ignored.")
    p.add_argument('--out', metavar='FILE',
                   help="Output theory file. Default: stdout.")


def _add_query_parser(subparsers, parent):
    p = subparsers.add_parser(
        'query', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Prints + if the theory covers the default, - otherwise.")
    p.add_argument('--theory', required=True, metavar='FILE')
    p.add_argument('--default', required=True, action='append',
                   metavar='RULE',
                   help="Default such as 'bird & penguin ~> !flies'. May be "
                        "repeated; \none answer per line.")
    p.add_argument('--backend', choices=BACKEND_CHOICES, default='auto',
                   help="Query engine. Default: auto.")


def _add_eval_parser(subparsers, parent):
    p = subparsers.add_parser(
        'eval', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="TSV evaluation report of a theory on a dataset.")
    p.add_argument('--theory', required=True, metavar='FILE')
    p.add_argument('--data', required=True, metavar='FILE')
    p.add_argument('--baseline', action='store_true',
                   help="Also log the majority-class accuracy.")


def _add_gen_map_parser(subparsers, parent):
    p = subparsers.add_parser(
        'gen-map', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Generate train/test defaults labeled by MAP inference.",
        description="Labels random defaults with MAP entailment on a "
                    "weighted theory, \neither read from --theory or drawn "
                    "at random.")
    g = p.add_argument_group("Weighted theory")
    g.add_argument('--theory', '--weighted', dest='theory', metavar='FILE',
                   help="Weighted theory file. If not set, a random one is "
                        "drawn.")
    g.add_argument('--n-vars', dest='n_vars', type=int, default=10,
                   metavar='N', help="Random theory variables. Default: 10.")
    g.add_argument('--n-clauses', dest='n_clauses', type=int, default=15,
                   metavar='M', help="Random theory clauses. Default: 15.")
    g.add_argument('--out-theory', dest='out_theory', metavar='FILE',
                   help="Where to save the weighted theory.")
    g = p.add_argument_group("Examples")
    g.add_argument('--k', type=int, default=5, metavar='K',
                   help="Maximal evidence length. Default: 5.")
    g.add_argument('--n-train', dest='n_train', type=int, default=1000,
                   metavar='N', help="Default: 1000.")
    g.add_argument('--n-test', dest='n_test', type=int, default=500,
                   metavar='N', help="Default: 500.")
    g.add_argument('--seed', type=int, default=1234, metavar='S',
                   help="Default: 1234.")
    g.add_argument('--out-train', dest='out_train', required=True,
                   metavar='FILE')
    g.add_argument('--out-test', dest='out_test', required=True,
                   metavar='FILE')


def _add_vc_parser(subparsers, parent):
    p = subparsers.add_parser(
        'vc', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="VC-dimension bounds, or a shattering check.")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument('--bounds', nargs='+', type=int, metavar='N',
                   help="N K [M]: print the lower and upper bounds for N "
                        "formulas and K \nlevels, and with M the bound for "
                        "theories using at most M of \nthe N formulas.")
    g.add_argument('--shatter', type=int, metavar='N',
                   help="Check the shattering instance on N variables (2 "
                        "or 4). \nPrints PASS or FAIL.")


def _add_split_parser(subparsers, parent):
    p = subparsers.add_parser(
        'split', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Split a dataset by group (annotator).")
    p.add_argument('--data', required=True, metavar='FILE')
    p.add_argument('--test-fraction', dest='test_fraction', type=float,
                   default=0.2, metavar='F', help="Default: 0.2.")
    p.add_argument('--seed', type=int, default=1234, metavar='S',
                   help="Default: 1234.")
    p.add_argument('--out-train', dest='out_train', required=True,
                   metavar='FILE')
    p.add_argument('--out-test', dest='out_test', required=True,
                   metavar='FILE')


def _add_negatives_parser(subparsers, parent):
    p = subparsers.add_parser(
        'negatives', parents=[parent],
        formatter_class=argparse.RawTextHelpFormatter,
        help="Negative examples from the positives of a dataset.")
    p.add_argument('--data', required=True, metavar='FILE')
    p.add_argument('--pool', metavar='FILE',
                   help="Consequent pool, one clause per line. Default: the "
                        "dataset's \nconsequents.")
    p.add_argument('--seed', type=int, default=1234, metavar='S',
                   help="Default: 1234.")
    p.add_argument('--out', metavar='FILE',
                   help="Output dataset. Default: stdout.")


def build_arg_parser():
    p = argparse.ArgumentParser(prog='possml', description=__doc__,
                                formatter_class=argparse.RawTextHelpFormatter)
    parent = argparse.ArgumentParser(add_help=False)
    _add_common_args(parent)
    subparsers = p.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    _add_learn_heur_parser(subparsers, parent)
    _add_learn_exact_parser(subparsers, parent)
    _add_zrank_parser(subparsers, parent)
    _add_query_parser(subparsers, parent)
    _add_eval_parser(subparsers, parent)
    _add_gen_map_parser(subparsers, parent)
    _add_vc_parser(subparsers, parent)
    _add_split_parser(subparsers, parent)
    _add_negatives_parser(subparsers, parent)
    return p


def run_learn_heur(args):
    cfg = prepare_learn_config(args)
    data = load_dataset(args.data)
    learner = HeuristicLearner(data.examples, cfg, tsv_stream=sys.stderr,
                               show_progress=args.progress)
    with Timer("Heuristic learning", logger):
        theory = learner.learn()
    if args.log_dir:
        learner.save_logs(args.log_dir)
    _write_output(format_theory(theory), args.out)
    return EXIT_OK


def run_learn_exact(args):
    problem = SeparationProblem.from_examples(_load_pool(args.pool),
                                              load_dataset(args.data))
    with Timer("Exact search", logger):
        if args.brute_force:
            theory = brute_force_separating(problem)
        else:
            search = SeparatingStratificationSearch(problem)
            theory = search.run()
            logger.info('Search statistics: {}'
                        .format(format_dict_to_str(search.stats.params)))
    if theory is None:
        sys.stdout.write('NONE\n')
        return EXIT_NONE
    sys.stdout.write('FOUND\n')
    _write_output(format_theory(theory), args.out)
    return EXIT_OK


def run_zrank(args):
    data = load_dataset(args.data)
    if len(data.negatives) > 0:
        logger.warning('Ignoring {} negative example(s).'
                       .format(len(data.negatives)))
    positives = [e.rule for e in data.positives]
    with Timer("Tolerance partitioning", logger):
        levels = z_ordering(positives)
    if not check_z_ordering(levels, positives):
        raise PossMLError('The computed ranking failed its tolerance check.')
    for i, level in enumerate(levels):
        logger.info('Rank {}: {}'.format(
            i, ', '.join(sorted(str(d) for d in level))))
    _write_output(format_theory(to_poss_theory(levels)), args.out)
    return EXIT_OK


def run_query(args):
    theory = load_theory(args.theory)
    rules = [parse_default(text) for text in args.default]
    variables = set(theory.variables)
    for r in rules:
        variables |= r.variables
    engine = make_query_engine(variables, args.backend)
    for r in rules:
        sys.stdout.write('{}\n'.format(
            '+' if covers(theory, r, engine) > 0 else '-'))
    return EXIT_OK


def run_eval(args):
    theory = load_theory(args.theory)
    data = load_dataset(args.data)
    report = evaluate(theory, data.examples)
    if args.baseline:
        logger.warning('Majority-class accuracy: {}'.format(
            float(majority_baseline_accuracy(data.examples))))
    sys.stdout.write(format_report_tsv(report))
    return EXIT_OK


def run_gen_map(args):
    seeds = np.random.SeedSequence(args.seed).spawn(3)
    theory_seq, train_seq, test_seq = seeds
    if args.theory:
        m = load_weighted_theory(args.theory)
    else:
        m = random_weighted_theory(args.n_vars, args.n_clauses,
                                   np.random.default_rng(theory_seq))
    if args.out_theory:
        save_weighted_theory(m, args.out_theory)

    with Timer("MAP labeling", logger):
        train = generate_dataset(m, args.k, args.n_train,
                                 np.random.default_rng(train_seq))
        test = generate_dataset(m, args.k, args.n_test,
                                np.random.default_rng(test_seq))
    metadata = {'source': 'map', 'seed': str(args.seed), 'k': str(args.k)}
    save_dataset(Dataset(train, m.vocabulary, metadata), args.out_train)
    save_dataset(Dataset(test, m.vocabulary, metadata), args.out_test)
    return EXIT_OK


def run_vc(args):
    if args.bounds is not None:
        if len(args.bounds) not in (2, 3):
            raise ValueError('--bounds takes N K [M], got {} value(s).'
                             .format(len(args.bounds)))
        n, k = args.bounds[:2]
        lines = ['bound\tvalue',
                 'lower\t{}'.format(vc_lower_bound(n, k)),
                 'upper\t{}'.format(vc_upper_bound(n, k))]
        if len(args.bounds) == 3:
            lines.append('subset\t{}'.format(
                vc_subset_bound(n, args.bounds[2], k)))
        sys.stdout.write('\n'.join(lines) + '\n')
        return EXIT_OK

    inst = build_shatter_instance(args.shatter)
    with Timer("Shattering check", logger):
        shattered = is_shattered(inst)
    sys.stdout.write('{}\n'.format('PASS' if shattered else 'FAIL'))
    return EXIT_OK


def run_split(args):
    data = load_dataset(args.data)
    train, test = split_by_group(data, args.test_fraction,
                                 np.random.default_rng(args.seed))
    save_dataset(train, args.out_train)
    save_dataset(test, args.out_test)
    logger.info('Train: {} examples, test: {} examples.'
                .format(len(train), len(test)))
    return EXIT_OK


def run_negatives(args):
    data = load_dataset(args.data)
    pool = _load_pool(args.pool) if args.pool else data.consequent_pool()
    negatives = synthesize_negatives(data, pool,
                                     np.random.default_rng(args.seed))
    _write_output(format_dataset(negatives), args.out)
    return EXIT_OK


COMMANDS = {'learn-heur': run_learn_heur,
            'learn-exact': run_learn_exact,
            'zrank': run_zrank,
            'query': run_query,
            'eval': run_eval,
            'gen-map': run_gen_map,
            'vc': run_vc,
            'split': run_split,
            'negatives': run_negatives}


def run_cli(argv=None) -> int:
    """
    Parameters
    ----------
    argv: list of str
        Arguments without the program name. Defaults to sys.argv[1:].

    Returns
    -------
    The exit code.
    """
    p = build_arg_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    set_logging_level(args.logging)
    try:
        return COMMANDS[args.command](args)
    except (PossMLError, ValueError, OSError) as e:
        sys.stderr.write('Error: {}\n'.format(e))
        return EXIT_INVALID


def main():
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
