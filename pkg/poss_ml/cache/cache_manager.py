# -*- coding: utf-8 -*-
from collections import deque
import threading


class CacheManager(object):
    """Basic CacheManager interface"""

    def __init__(self, cache_size: int):
        self._cache_size = cache_size
        self._cache = None
        self._queue = None
        self.nb_hits = 0
        self.nb_misses = 0

    def __contains__(self, item):
        return item in self._cache

    def __getitem__(self, item):
        return self._cache[item]

    def __setitem__(self, key, value):
        raise NotImplementedError

    def get(self, key, default=None):
        raise NotImplementedError

    def __len__(self):
        return len(self._cache)

    @property
    def stats(self):
        return {'size': len(self), 'hits': self.nb_hits,
                'misses': self.nb_misses}


class SingleThreadCacheManager(CacheManager):
    """A single-thread FIFO dictionary cache"""

    def __init__(self, cache_size: int):
        super(SingleThreadCacheManager, self).__init__(cache_size)
        self._cache = dict()
        self._queue = deque()

    def get(self, key, default=None):
        if key in self._cache:
            self.nb_hits += 1
            return self._cache[key]
        self.nb_misses += 1
        return default

    def __setitem__(self, key, value):
        if key in self._cache:
            self._cache[key] = value
            return
        if len(self._queue) >= self._cache_size:
            to_delete = self._queue.popleft()
            del self._cache[to_delete]
        self._queue.append(key)
        self._cache[key] = value


class ThreadSafeCacheManager(SingleThreadCacheManager):
    """The FIFO cache, guarded by a lock so that worker threads can share
    query results."""

    def __init__(self, cache_size: int):
        super(ThreadSafeCacheManager, self).__init__(cache_size)
        self._lock = threading.Lock()

    def get(self, key, default=None):
        with self._lock:
            return super(ThreadSafeCacheManager, self).get(key, default)

    def __setitem__(self, key, value):
        with self._lock:
            super(ThreadSafeCacheManager, self).__setitem__(key, value)

    def __contains__(self, item):
        with self._lock:
            return item in self._cache
