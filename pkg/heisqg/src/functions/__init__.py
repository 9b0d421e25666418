"""
Function Algebra Subsystem

Numerical realization of the deformed function algebra on G:
    - grid: Grid and SampledFunction
    - closed_form: ClosedFormFunction test family
    - transforms: Fourier and partial Fourier transforms with oracles
    - product: twisted convolution, deformed product, involution
    - hopf: Haar functional, counit, dagger and antipode
    - limits: semiclassical and classical-limit defects
    - io: binary container for SampledFunction

Pipeline:
    φ(p,q,r) → vee → f(x,y,r) → twisted convolution → wedge → φ×ψ
"""
