"""
Tests for bounded parallel execution.
"""
import threading
import time

import pytest

from toric_periods.parallel import ExecutionState, ParallelRunner, run_parallel


class TestParallelRunner:
    """Concurrency bound, ordering and statistics."""

    @pytest.mark.asyncio
    async def test_results_keep_input_order(self):
        """Slow early jobs do not reorder the results."""
        runner = ParallelRunner(max_parallel=3)

        def job(n):
            time.sleep(0.01 * (5 - n))
            return n * n

        results = await runner.map(job, [1, 2, 3, 4])
        assert results == [1, 4, 9, 16]
        assert runner.state == ExecutionState.COMPLETED
        assert runner.stats["total_executed"] == 4
        assert runner.stats["total_failed"] == 0

    @pytest.mark.asyncio
    async def test_concurrency_bound(self):
        """No more than max_parallel jobs run at once."""
        runner = ParallelRunner(max_parallel=2)
        lock = threading.Lock()
        active = {"now": 0, "peak": 0}

        def job(_):
            with lock:
                active["now"] += 1
                active["peak"] = max(active["peak"], active["now"])
            time.sleep(0.02)
            with lock:
                active["now"] -= 1

        await runner.map(job, range(6))
        assert active["peak"] <= 2

    @pytest.mark.asyncio
    async def test_failure_is_reraised(self):
        """A failing job marks the runner failed and propagates."""
        runner = ParallelRunner(max_parallel=2)

        def job(n):
            if n == 2:
                raise ValueError("bad input")
            return n

        with pytest.raises(ValueError):
            await runner.map(job, [1, 2, 3])
        assert runner.state == ExecutionState.FAILED
        assert runner.stats["total_failed"] == 1

    def test_minimum_parallelism(self):
        """max_parallel is at least one."""
        assert ParallelRunner(0).max_parallel == 1


class TestRunParallel:
    """Synchronous entry point."""

    def test_sequential_fallback(self):
        """max_parallel 1 evaluates in place."""
        assert run_parallel(lambda n: n + 1, [1, 2, 3]) == [2, 3, 4]

    def test_thread_pool(self):
        """Without a running loop the jobs go through a runner."""
        runner = ParallelRunner(2)
        assert run_parallel(str, [3, 1, 2], max_parallel=2, runner=runner) == ["3", "1", "2"]
        assert runner.stats["total_executed"] == 3

    @pytest.mark.asyncio
    async def test_inside_event_loop(self):
        """Inside a running loop the jobs run sequentially."""
        runner = ParallelRunner(2)
        assert run_parallel(abs, [-1, -2], max_parallel=2, runner=runner) == [1, 2]
        assert runner.stats["total_executed"] == 0
