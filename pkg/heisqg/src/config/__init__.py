"""
Configuration Subsystem

    - default_params.yaml: every default, printable with --print-defaults
    - loader: RunConfig and YAML loading/validation
"""
