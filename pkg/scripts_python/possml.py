#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Command-line entry point of poss_ml. Same as the installed `possml`
command; see `possml.py --help` and `possml.py COMMAND --help`.
"""
import sys

from poss_ml.cli import run_cli


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == '__main__':
    main()
