# -*- coding: utf-8 -*-
import logging
from time import time


class Timer:
    """
    Example of usage:
    with Timer("Exact search", logger=logging.getLogger('exact_learning')):
        ... # do something

    Messages go to the given logger at INFO level, never to stdout, which
    is kept for results.
    """
    def __init__(self, txt: str, logger: logging.Logger = None,
                 level=logging.INFO):
        """
        Parameters
        ----------
        txt: str
            Name of this timer.
        logger: logging.Logger
            Where to report. Defaults to the root logger.
        level: int
            Logging level of the reports.
        """
        self.txt = txt
        self.logger = logger or logging.getLogger()
        self.level = level
        self.start = None
        self.elapsed = None

    def __enter__(self):
        """
        Used at the beginning of the section inside "With Timer()".
        Logs txt and starts time.
        """
        self.start = time()
        self.logger.log(self.level, self.txt + "... ")
        return self

    def __exit__(self, type, value, tb):
        """
        Used at the end of the section inside "With Timer()".
        Logs 'done' and the final time.
        """
        self.elapsed = time() - self.start
        self.logger.log(self.level, "{} done in {:.2f} sec."
                        .format(self.txt, self.elapsed))
