"""Shared fixtures.

The reference cube and its eigendecomposition are the two expensive
objects almost every integration test needs, so they are session-scoped;
tests must treat them as read-only.
"""

import numpy as np
import pytest

from stca.config import aligned_config, default_config
from stca.covariance import eig_descending, sample_covariance
from stca.experiment import presumed_target_steering
from stca.params import RadarParams
from stca.scene import synthesize_cube


@pytest.fixture(scope="session")
def params():
    return RadarParams()


@pytest.fixture(scope="session")
def ref_config():
    """Reference scenario: stated round ranges, pinned range bins."""
    return default_config()


@pytest.fixture(scope="session")
def centered_config():
    """Reference scenario with ranges moved to their bin centers."""
    return aligned_config()


@pytest.fixture(scope="session")
def ref_cube(ref_config):
    return synthesize_cube(ref_config.params, ref_config.target,
                           ref_config.jammers, seed=0, dtype=np.complex64)


@pytest.fixture(scope="session")
def ref_eigen_full(ref_cube):
    flat = ref_cube.snapshots.reshape(-1, ref_cube.params.virtual_size)
    return eig_descending(sample_covariance(flat))


@pytest.fixture(scope="session")
def ref_steering(ref_config):
    return presumed_target_steering(ref_config)[0]
