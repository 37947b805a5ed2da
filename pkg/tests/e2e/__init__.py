# This file makes 'tests/e2e' a Python package.
