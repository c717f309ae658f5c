#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Plots the logs saved by `possml learn-heur --log_dir DIR`: one panel per
.npy file (e.g. the training error per iteration).
"""
import argparse
import json
import logging
import pathlib
from argparse import RawTextHelpFormatter
from typing import Dict

import matplotlib.pyplot as plt
import numpy as np

from poss_ml.experiment_utils.prints import (LOGGING_CHOICES,
                                             format_dict_to_str)


def visualize_logs(logs: Dict[str, np.ndarray], title=None, out=None):
    fig, ax = plt.subplots(nrows=len(logs), squeeze=False)
    for i, (log_name, data) in enumerate(sorted(logs.items())):
        ax[i, 0].set_title(log_name)
        ax[i, 0].step(np.arange(len(data)), data, where='post')
        ax[i, 0].set_xlabel('iteration')
    if title is not None:
        fig.suptitle(title)

    plt.tight_layout()
    if out is None:
        plt.show()
    else:
        plt.savefig(out)


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=RawTextHelpFormatter)
    parser.add_argument("path", type=str,
                        help="Log directory given to learn-heur.")
    parser.add_argument("--out", metavar='FILE',
                        help="Save the figure instead of showing it.")
    parser.add_argument("--logging", choices=LOGGING_CHOICES,
                        default='info', help="Default: info.")
    args = parser.parse_args()
    return args


def main():
    args = parse_args()
    logging.basicConfig(level=args.logging.upper())

    logs_path = pathlib.Path(args.path)
    if not logs_path.exists():
        raise ValueError("Log folder does not exist: {}".format(args.path))

    log_files = sorted(logs_path.glob('*.npy'))
    if len(log_files) == 0:
        raise ValueError("No .npy log in {}".format(args.path))
    logging.info("Found files: {}".format(log_files))
    logs = {log_file.stem: np.load(log_file) for log_file in log_files}

    title = None
    params_file = pathlib.Path(logs_path, 'params.json')
    if params_file.exists():
        with open(params_file, 'r') as f:
            params = json.load(f)
        logging.info("Learner parameters: {}"
                     .format(format_dict_to_str(params)))
        title = 'stopped: {}'.format(params.get('stop_reason'))

    visualize_logs(logs, title, args.out)


if __name__ == '__main__':
    main()
