"""
Pytest configuration and shared fixtures for heisqg tests.

This file contains:
    - sys.path setup so tests import the packages under heisqg/src
    - Common parameter sets and test functions
    - Seed control
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project source to Python path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))


# ═══════════════════════════════════════════════════════════════
# FIXTURES: Parameters
# ═══════════════════════════════════════════════════════════════

@pytest.fixture
def params():
    """n=1, λ=1, ℏ=1."""
    from groups.params import ModelParams
    return ModelParams(n=1, lam=1.0, hbar=1.0)


@pytest.fixture
def rng():
    """Fresh seeded numpy generator for each test."""
    return np.random.default_rng(20240601)


@pytest.fixture
def grid():
    """Default desk-scale grid: N=64, L=4 in (p,q), N_r=16, L_r=0.5."""
    from functions.grid import Grid
    return Grid(N=64, L=4.0, N_r=16, L_r=0.5)


# ═══════════════════════════════════════════════════════════════
# FIXTURES: Test functions
# ═══════════════════════════════════════════════════════════════

@pytest.fixture
def gaussian_pair():
    """Two shifted complex Gaussians with r-bumps, the standard algebra test pair."""
    from functions.closed_form import gaussian_test_function
    phi = gaussian_test_function(width=1.0, center=(0.2, -0.1), wave=(0.1, 0.0), bump_center=0.0, bump_radius=0.4)
    psi = gaussian_test_function(width=1.3, center=(-0.15, 0.25), wave=(0.0, -0.2), bump_center=0.0, bump_radius=0.4)
    return phi, psi


# ═══════════════════════════════════════════════════════════════
# FIXTURES: Random Number Control
# ═══════════════════════════════════════════════════════════════

@pytest.fixture(autouse=True)
def reset_random_seed():
    """Reset random seeds before each test for reproducibility."""
    np.random.seed(42)
    yield

