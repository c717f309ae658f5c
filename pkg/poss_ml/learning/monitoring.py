# -*- coding: utf-8 -*-
from collections import deque
import timeit

import numpy as np


class ValueHistoryMonitor(object):
    """ History of some value for each iteration of the learner.

    Example of usage: History of the training error.
        error_monitor = ValueHistoryMonitor('train_error')
        ...
        # Call update at each iteration
        error_monitor.update(0.2)
        ...
        error_monitor.last  # returns the last recorded value
        error_monitor.history  # the curve, as a list
    """

    def __init__(self, name):
        self.name = name
        self.history = []

    @property
    def nb_updates(self):
        return len(self.history)

    @property
    def last(self):
        return self.history[-1] if self.history else None

    def update(self, value):
        """
        Note. Does not save the update if value is inf.

        Parameters
        ----------
        value: The value to record.
        """
        if np.isinf(value):
            return
        self.history.append(value)

    def as_array(self):
        return np.asarray(self.history, dtype=np.float64)


class BestIterationMonitoring(object):
    """
    Object to stop learning early if the training error doesn't improve
    after a given number of iterations ("patience").
    """

    def __init__(self, patience: int, min_eps: float = 1e-9):
        """
        Parameters
        -----------
        patience: int
            Maximal number of bad iterations we allow.
        min_eps: float, optional
            Precision term to define what we consider as "improving": when the
            error is at least min_eps smaller than the previous best error.
        """
        self.patience = patience
        self.min_eps = min_eps

        self.best_value = None
        self.best_iteration = None
        self.n_bad_iterations = 0

    def update(self, error, iteration):
        if self.best_value is None or error < self.best_value - self.min_eps:
            self.best_value = error
            self.best_iteration = iteration
            self.n_bad_iterations = 0
        else:
            self.n_bad_iterations += 1

    @property
    def is_patience_reached(self):
        return self.patience is not None and \
            self.n_bad_iterations >= self.patience


class EarlyStoppingError(Exception):
    """Exception raised when learning is stopped by early-stopping

    Attributes
        message -- explanation of why early stopping occured"""

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class TimeoutReachedError(EarlyStoppingError):
    """Raised between two evaluations once the time budget is spent. The
    learner catches it and keeps its current working theory."""


class IterTimer(object):
    """
    Hint: After each iteration, you can check that the maximum allowed time has
    not been reached by using:

    # Ex: To check that time remaining is less than one iter + 30 seconds
    time.time() + iter_timer.mean + 30 > max_time
    """
    def __init__(self, history_len=5):
        self.history = deque(maxlen=history_len)
        self.iterable = None
        self.start_time = None

    def __call__(self, iterable):
        self.iterable = iter(iterable)
        return self

    def __iter__(self):
        return self

    def __next__(self):
        if self.start_time is not None:
            elapsed = timeit.default_timer() - self.start_time
            self.history.append(elapsed)
        self.start_time = timeit.default_timer()
        return next(self.iterable)

    @property
    def mean(self):
        return np.mean(self.history) if len(self.history) > 0 else 0


class Deadline(object):
    """Wall-clock budget. A None timeout never expires."""
    def __init__(self, timeout_seconds=None):
        self.timeout_seconds = timeout_seconds
        self.start_time = timeit.default_timer()

    @property
    def elapsed(self):
        return timeit.default_timer() - self.start_time

    @property
    def is_expired(self):
        return self.timeout_seconds is not None and \
            self.elapsed >= self.timeout_seconds

    def check(self):
        if self.is_expired:
            raise TimeoutReachedError(
                'Timeout of {} s reached.'.format(self.timeout_seconds))
