"""Console log handler."""
from enum import Enum
import sys


class Verbosity(Enum):
    """Verbosity levels."""

    QUIET = 0
    INFO = 1
    DEBUG = 2


class ConsoleFlags:
    """Console flags."""
    _verbosity = Verbosity.INFO

    def set_verbosity(self, verbosity: Verbosity):
        """Set verbosity."""
        ConsoleFlags._verbosity = verbosity

    def get_verbosity(self):
        """Get verbosity."""
        return ConsoleFlags._verbosity


def set_verbosity(verbosity: Verbosity):
    """Set verbosity."""
    ConsoleFlags().set_verbosity(verbosity)


def verbosity_from_level(level: int) -> Verbosity:
    """Map -v level to verbosity; unknown levels fall back to INFO."""
    if level <= 0:
        return Verbosity.QUIET
    if level >= 2:
        return Verbosity.DEBUG
    return Verbosity.INFO


def trace(*args, **kwargs):
    """Debug trace."""
    if ConsoleFlags().get_verbosity() in (Verbosity.QUIET, Verbosity.INFO):
        return
    print(*args, file=sys.stderr, **kwargs)


def error(*args, **kwargs):
    """Error message."""
    if ConsoleFlags().get_verbosity() == Verbosity.QUIET:
        return
    print(*args, file=sys.stderr, **kwargs)


def out(*args, **kwargs):
    """Output to stdout."""
    print(*args, file=sys.stdout, **kwargs)


def hint(*lines):
    """Comment lines on stdout, e.g. plotting suggestions."""
    for line in lines:
        print(f'# {line}', file=sys.stdout)


def progress(done: int, total: int):
    """Carriage-return progress line on stderr."""
    if ConsoleFlags().get_verbosity() == Verbosity.QUIET or total <= 0:
        return
    rate = done / total * 100
    end = '\n' if done >= total else '\r'
    print(f'Processing grid points: {rate:.1f}%', file=sys.stderr, end=end)


def fatal(*args, **kwargs):
    """Final error line on stderr, printed at every verbosity."""
    print(*args, file=sys.stderr, **kwargs)
