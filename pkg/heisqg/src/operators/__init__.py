"""
Operator Engine Subsystem

    - expr: CoordExpr vocabulary (sympy) and leg coordinate naming
    - affine: AffinePhaseOp, composition, embedding, randomized equality
    - builders: every named operator (L, U, V, W, T, ΔL, Ũ, Φ, ...)
    - gaussian: GaussianSliceVector and QuadraticFourierOp
    - rmatrix: R = ΦΦ' on Gaussian slices, QYBE and quasitriangularity
    - checks: operator-level identities (pentagon, Δ, ε, κ, R)
"""
