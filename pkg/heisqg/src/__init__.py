"""
heisqg - Numerical verifier for the Heisenberg quantum group

Subsystems:
    - groups: parameters, group laws, η_λ and β
    - lie: exact Lie bialgebra tensors, classical r-matrix, Poisson bracket
    - functions: grids, closed-form test functions, deformed product, Hopf maps
    - operators: substitution/phase operator calculus and the Gaussian engine
    - suites: verification suites and their reports
    - cli: verify / sweep / report front end

Modules import each other through the `src` directory on sys.path
(see tests/conftest.py and cli/main.py).
"""
