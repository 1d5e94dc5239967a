"""Work-item dispenser for parameter sweeps."""
import threading
import time

import unruh_pair.console as con
import unruh_pair.thread_manager as tm


class SweepManager:
    """Hands out grid indices to worker threads and stores results by index."""

    def __init__(self, tasks, evaluate):
        self._tasks = list(tasks)
        self._evaluate = evaluate
        self._task_count = len(self._tasks)
        self._results = [None] * self._task_count
        self._failures = {}
        self._lock = threading.Lock()
        self._current_index = 0
        self._done = 0

    def next_index(self):
        """Next index, or -1 when exhausted."""
        if self._current_index >= self._task_count:
            return -1
        with self._lock:
            if self._current_index < self._task_count:
                idx = self._current_index
                self._current_index += 1
            else:
                idx = -1

        return idx

    def __getitem__(self, index):
        return self._tasks[index]

    def __len__(self):
        return self._task_count

    def get_current_index(self):
        """Get current index."""
        return self._current_index

    def get_done(self):
        """Number of finished work items."""
        return self._done

    def results(self):
        """Results in task order; re-raises the failure of the lowest failing index."""
        if self._failures:
            raise self._failures[min(self._failures)]
        return list(self._results)

    def job(self):
        """Worker loop."""
        index = self.next_index()
        while index >= 0:
            try:
                self._results[index] = self._evaluate(self[index])
            except Exception as e:  # pylint: disable=broad-exception-caught
                con.trace(f'Grid point {index} failed: {e}')
                self._failures[index] = e
            with self._lock:
                self._done += 1
            index = self.next_index()


def _print_progress(sweep_manager, thread_manager, sleep_interval):
    total = len(sweep_manager)
    while thread_manager.any_alive():
        con.progress(sweep_manager.get_done(), total)
        time.sleep(sleep_interval)
    con.progress(sweep_manager.get_done(), total)


def run_tasks(tasks, evaluate, workers: int = 1, show_progress: bool = False) -> list:
    """Evaluate every task, fanning out over threads; results come back in task order."""
    sweep_mgr = SweepManager(tasks, evaluate)
    if len(sweep_mgr) == 0:
        return []
    workers = max(1, min(workers, len(sweep_mgr)))
    if workers == 1:
        sweep_mgr.job()
        return sweep_mgr.results()

    thread_mgr = tm.ThreadManager()
    for _ in range(workers):
        thread_mgr.add_thread(threading.Thread(target=SweepManager.job, args=(sweep_mgr,)))

    thread_mgr.start_all_threads()
    if show_progress:
        _print_progress(sweep_mgr, thread_mgr, 0.05)
    thread_mgr.join_all_threads()
    thread_mgr.remove_all_threads()

    return sweep_mgr.results()
