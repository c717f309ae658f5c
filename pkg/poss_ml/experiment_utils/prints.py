# -*- coding: utf-8 -*-
import collections.abc
import logging

from tqdm import tqdm

LOGGING_CHOICES = ['error', 'warning', 'info', 'debug']
LOGGER_NAMES = ['learning', 'exact_learning', 'map_oracle', 'poss_engine',
                'rational_closure', 'harness', 'sat', 'vc']


class TqdmLoggingHandler(logging.StreamHandler):
    """Avoid tqdm progress bar interruption by logger's output to console"""
    # see logging.StreamHandler.eval method:
    # https://github.com/python/cpython/blob/d2e2534751fd675c4d5d3adc208bf4fc984da7bf/Lib/logging/__init__.py#L1082-L1091
    # and tqdm.write method:
    # https://github.com/tqdm/tqdm/blob/f86104a1f30c38e6f80bfd8fb16d5fcde1e7749f/tqdm/std.py#L614-L620

    def emit(self, record):
        try:
            msg = self.format(record)
            tqdm.write(msg, end=self.terminator)
        except RecursionError:
            raise
        except Exception:
            self.handleError(record)


def set_logging_level(level_name: str):
    """Sets the root level and the level of every poss_ml logger. Loggers
    that do not propagate get a stderr handler if they have none."""
    level = level_name.upper()
    logging.basicConfig(level=level)
    logging.root.setLevel(level)
    for name in LOGGER_NAMES:
        logger = logging.getLogger(name)
        logger.setLevel(level)
        if not logger.propagate and not logger.handlers:
            logger.addHandler(logging.StreamHandler())


def format_dict_to_str(d, indent=1):
    indentation = indent * "    "
    return ("\n" + indentation) + ("\n" + indentation).join(
        "{!r}: {},".format(k, _format_val_to_str(v, indent+1))
        for k, v in d.items())


def _format_val_to_str(v, indent):
    if isinstance(v, collections.abc.Mapping):
        return format_dict_to_str(v, indent)
    else:
        return v
