#!/usr/bin/env python
"""setuptools helpers: read package metadata without importing poss_ml,
whose dependencies may not be installed yet.
"""
from types import SimpleNamespace


def read_vars_from(info_file):
    """Read the public variables of a Python text file.

    Parameters
    ----------
    info_file : str
        Filename of file to read, e.g. poss_ml/info.py.

    Returns
    -------
    info_vars : SimpleNamespace
        Variables of `info_file` not starting with '__', as attributes.
    """
    ns = {}
    with open(info_file, 'rt') as fobj:
        exec(fobj.read(), ns)

    return SimpleNamespace(**{k: v for k, v in ns.items()
                              if not k.startswith('__')})
