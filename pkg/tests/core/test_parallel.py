"""Tests for the ordered worker pool."""

import threading
import time
from unittest.mock import patch

from src.core.parallel import ordered_map, resolve_thread_count


class TestResolveThreadCount:
    """Tests for worker count resolution."""

    def test_explicit_count_wins(self):
        """A positive request is returned unchanged."""
        assert resolve_thread_count(3) == 3

    def test_auto_uses_physical_cores(self):
        """0 resolves to the physical core count."""
        with patch("src.core.parallel.psutil.cpu_count", return_value=6):
            assert resolve_thread_count(0) == 6

    def test_auto_falls_back_to_one(self):
        """Unknown core counts resolve to a single worker."""
        with patch("src.core.parallel.psutil.cpu_count", return_value=None):
            assert resolve_thread_count(0) == 1


class TestOrderedMap:
    """Tests for ordered_map."""

    def test_serial_preserves_order(self):
        """With one worker results follow input order."""
        assert ordered_map(lambda x: x * x, range(5), threads=1) == [0, 1, 4, 9, 16]

    def test_parallel_preserves_order(self):
        """Results follow input order even when later items finish first."""

        def slow_first(x):
            time.sleep(0.02 if x == 0 else 0.0)
            return x

        assert ordered_map(slow_first, range(20), threads=4) == list(range(20))

    def test_chunked_parallel_matches_serial(self):
        """Chunking does not change the result."""
        items = list(range(103))
        expected = [x + 1 for x in items]

        assert ordered_map(lambda x: x + 1, items, threads=3, chunk_size=10) == expected

    def test_uses_several_threads(self):
        """More than one worker thread participates when requested."""
        seen = set()
        lock = threading.Lock()

        def record(x):
            with lock:
                seen.add(threading.get_ident())
            time.sleep(0.01)
            return x

        ordered_map(record, range(16), threads=4)
        assert len(seen) > 1

    def test_empty_input(self):
        """No items give no results."""
        assert ordered_map(lambda x: x, [], threads=4) == []
