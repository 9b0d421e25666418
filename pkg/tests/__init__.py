"""
heisqg test suite

Test Structure:
    - test_groups, test_lie: exact and group-level identities
    - test_functions, test_hopf_maps, test_limits: grid function algebra
    - test_operators, test_rmatrix: operator engine and Gaussian slices
    - test_suites, test_config, test_cli: suites, reports, configuration, command line

Testing Philosophy:
    - Slow identities run at reduced trial counts with the shipped tolerances
    - Every random draw is seeded (see conftest.py)
"""
