#!/usr/bin/env python3
"""
Test runner for samble.
"""

import logging
import os
import sys
import unittest


def run_tests(pattern="test_*.py"):
    """Run all tests in the tests directory."""
    # Add the repository root to the path so we can import the package
    root = os.path.abspath(os.path.dirname(__file__))
    sys.path.insert(0, root)

    logging.basicConfig(
        level=getattr(logging, os.getenv("SAMBLE_LOG_LEVEL", "WARNING").upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    # Discover and run tests
    test_loader = unittest.TestLoader()
    test_suite = test_loader.discover(os.path.join(root, "tests"), pattern=pattern)

    # Run the tests
    test_runner = unittest.TextTestRunner(verbosity=2)
    result = test_runner.run(test_suite)

    # Return the number of failures and errors
    return len(result.failures) + len(result.errors)


if __name__ == "__main__":
    # Optional single argument narrows discovery, e.g. `test_allocation.py`
    exit_code = run_tests(*sys.argv[1:2])

    # Exit with the number of failures and errors
    sys.exit(exit_code)
