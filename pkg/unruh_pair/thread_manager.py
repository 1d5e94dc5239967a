"""Thread manager for executing sweep jobs."""

import os
import threading
import unruh_pair.console as con

THREADS_ENV = 'UNRUH_PAIR_THREADS'


def worker_count(cap: int = 0) -> int:
    """Workers from UNRUH_PAIR_THREADS (0/unset = CPU count), limited by cap when cap > 0."""
    value = os.environ.get(THREADS_ENV, '').strip()
    try:
        count = int(value) if value != '' else 0
    except ValueError:
        con.trace(f'{THREADS_ENV}={value!r} is not an integer; using the CPU count.')
        count = 0
    if count <= 0:
        count = os.cpu_count() or 1
    if cap > 0:
        count = min(count, cap)
    return count


class ThreadManager:
    """Thread manager instance."""

    def __init__(self):
        self.threads = []

    def add_thread(self, thread):
        """Add a thread to manager."""
        if not isinstance(thread, threading.Thread):
            con.trace('Cannot add thread.')
            con.error('Thread must be an instance of threading.Thread')
            return
        self.threads.append(thread)

    def remove_all_threads(self):
        """Remove all registered threads."""
        self.threads.clear()

    def join_all_threads(self):
        """Join all registered threads."""
        for thread in self.threads:
            thread.join()

    def start_all_threads(self):
        """Start all registered threads."""
        for thread in self.threads:
            thread.start()

    def any_alive(self):
        """True while a registered thread is running."""
        return any(thread.is_alive() for thread in self.threads)
