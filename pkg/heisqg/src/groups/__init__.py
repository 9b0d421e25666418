"""
Groups Subsystem

    - params: ModelParams (n, λ, ℏ)
    - laws: β, η_λ, and the laws of H, G, H̃, G̃
"""
