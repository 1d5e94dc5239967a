"""Default initializer."""
import unruh_pair.main as up_main

__version__ = '0.1.0'


def run():
    """Run main function."""
    up_main.execute()
