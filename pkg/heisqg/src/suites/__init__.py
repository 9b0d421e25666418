"""
Verification Suites

    - report: SuiteReport records and the JSON/CSV writers
    - kernels: comultiplication kernel, antipode axiom, Haar suites
    - registry: suite names → runner functions used by the CLI
"""
