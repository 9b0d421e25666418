"""
Utilities Subsystem

    - numerics: phase characters, bump functions, defect measures, seeded RNGs
    - errors: exception hierarchy
"""
