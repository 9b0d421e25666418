"""
Lie Bialgebra Subsystem

Exact tensor algebra over 𝔥, 𝔥̃, 𝔤, 𝔤̃ with sympy rationals and a symbolic λ:
    - algebras: LieAlgebraSpec and the four concrete algebras
    - tensors: LieTensor, r-matrix, CYBE, δ, θ, the group cocycle F
    - poisson: the Poisson bracket on G and its sanity checks
"""
