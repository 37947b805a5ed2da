# This file makes 'tests' a Python package.
# It can be empty or can contain package-level test setup/teardown if needed in the future.
