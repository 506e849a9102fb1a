"""
Bounded parallel execution of independent pipeline jobs.
Results are always returned in input order so that output stays deterministic.
"""
import asyncio
import logging
import time
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)


class ExecutionState(Enum):
    IDLE = "idle"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class ParallelRunner:
    """
    Runs blocking jobs in worker threads behind an asyncio semaphore.

    Features:
    - Concurrency bound by max_parallel
    - Input-order results
    - Execution statistics
    """

    def __init__(self, max_parallel: int = 4):
        self.max_parallel = max(1, max_parallel)
        self.state = ExecutionState.IDLE
        self.stats: Dict[str, Any] = {"total_executed": 0, "total_failed": 0, "total_time": 0.0}

    async def _run_one(self, semaphore: asyncio.Semaphore, fn: Callable, item: Any) -> Any:
        async with semaphore:
            started = time.monotonic()
            try:
                return await asyncio.to_thread(fn, item)
            except Exception:
                self.stats["total_failed"] += 1
                raise
            finally:
                self.stats["total_executed"] += 1
                self.stats["total_time"] += time.monotonic() - started

    async def map(self, fn: Callable, items: Sequence[Any]) -> List[Any]:
        """
        Apply fn to every item concurrently.

        Args:
            fn: Blocking callable taking one item
            items: Inputs

        Returns:
            Results in the order of items; the first failure is re-raised
        """
        semaphore = asyncio.Semaphore(self.max_parallel)
        self.state = ExecutionState.RUNNING
        try:
            results = await asyncio.gather(*(self._run_one(semaphore, fn, item) for item in items))
        except Exception:
            self.state = ExecutionState.FAILED
            raise
        self.state = ExecutionState.COMPLETED
        return list(results)


def run_parallel(fn: Callable, items: Sequence[Any], max_parallel: int = 1,
                 runner: Optional[ParallelRunner] = None) -> List[Any]:
    """
    Synchronous entry point: runs in parallel when no event loop is active,
    sequentially otherwise or when max_parallel is 1.
    """
    if max_parallel <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        runner = runner or ParallelRunner(max_parallel)
        return asyncio.run(runner.map(fn, items))
    logger.debug("event loop already running; evaluating %d jobs sequentially", len(items))
    return [fn(item) for item in items]
