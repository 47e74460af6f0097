# gate_cache.py
import threading
from collections import OrderedDict
from typing import Any, Callable, Hashable, Optional

import numpy as np

from logger import get_logger

# Get module logger
logger = get_logger('cache')


class GateCache:
    def __init__(self, max_entries: int = 64):
        """Initialize the gate cache with a bounded number of entries."""
        self.cache: "OrderedDict[Hashable, np.ndarray]" = OrderedDict()
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()
        logger.info(f"Initialized gate cache with {max_entries} entries")

    def get(self, key: Hashable) -> Optional[np.ndarray]:
        """Retrieve a gate from the cache if present."""
        with self._lock:
            gate = self.cache.get(key)
            if gate is None:
                self.misses += 1
                return None
            self.hits += 1
        logger.debug(f"Cache hit: {key}")
        return gate

    def set(self, key: Hashable, gate: np.ndarray) -> np.ndarray:
        """Store a gate read-only and return the stored array."""
        stored = np.array(gate, copy=True)
        stored.setflags(write=False)

        if self.max_entries <= 0:
            return stored

        with self._lock:
            self.cache[key] = stored
            while len(self.cache) > self.max_entries:
                evicted, _ = self.cache.popitem(last=False)
                logger.debug(f"Cache evicted: {evicted}")
        logger.debug(f"Cache set: {key}")
        return stored

    def get_or_build(self, key: Hashable, builder: Callable[[], Any]) -> np.ndarray:
        """Return the cached gate for key, building and storing it on a miss."""
        gate = self.get(key)
        if gate is not None:
            return gate
        return self.set(key, builder())

    def invalidate(self, key: Hashable) -> bool:
        """Remove a gate from the cache."""
        with self._lock:
            if key in self.cache:
                del self.cache[key]
                logger.debug(f"Cache invalidated: {key}")
                return True
        return False

    def clear(self) -> None:
        """Clear all cache entries."""
        with self._lock:
            count = len(self.cache)
            self.cache.clear()
        logger.debug(f"Cache cleared ({count} entries)")


# Singleton cache instance
_gate_cache = None
_cache_lock = threading.Lock()


def get_cache(max_entries: Optional[int] = None) -> GateCache:
    """Get or initialize the singleton cache instance."""
    global _gate_cache

    with _cache_lock:
        if _gate_cache is None:
            from sim_config import get_config
            size = max_entries if max_entries is not None else get_config().gate_cache_size
            _gate_cache = GateCache(size)

    return _gate_cache


def reset_cache() -> None:
    """Drop the singleton so the next get_cache() is sized from fresh configuration."""
    global _gate_cache

    with _cache_lock:
        _gate_cache = None
