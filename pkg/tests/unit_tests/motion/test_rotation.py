"""
test_rotation.py
Tests for the 6-D rotation representation.
"""

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from keydance.motion import (
    axis_angle_to_rotmat, pose_to_rotmats, random_rotation, rotmat_to_6d, rotmats_to_pose, sixd_to_rotmat
)
from keydance.utils.exceptions import ValidationError

def test_random_rotations_survive_6d_round_trip():
    matrices = Rotation.random(1000, 4).as_matrix()
    decoded = np.stack([sixd_to_rotmat(rotmat_to_6d(matrix)) for matrix in matrices])
    np.testing.assert_allclose(decoded, matrices, rtol=0, atol=1e-9)
    gram = np.einsum('nji,njk->nik', decoded, decoded)
    np.testing.assert_allclose(gram, np.broadcast_to(np.eye(3), gram.shape), rtol=0, atol=1e-9)
    np.testing.assert_allclose(np.linalg.det(decoded), 1.0, rtol=0, atol=1e-9)

def test_6d_is_first_two_columns():
    matrix = Rotation.from_euler('xyz', [0.3, -0.2, 1.1]).as_matrix()
    sixd = rotmat_to_6d(matrix)
    np.testing.assert_allclose(sixd[:3], matrix[:, 0])
    np.testing.assert_allclose(sixd[3:], matrix[:, 1])

def test_decoding_orthonormalizes_noisy_input():
    rng = np.random.default_rng(0)
    decoded = sixd_to_rotmat(rng.normal(size=6))
    np.testing.assert_allclose(decoded.T @ decoded, np.eye(3), atol=1e-10)
    assert np.linalg.det(decoded) == pytest.approx(1.0)

def test_rejects_reflections_and_non_rotations():
    with pytest.raises(ValidationError):
        rotmat_to_6d(np.diag([1.0, 1.0, -1.0]))
    with pytest.raises(ValidationError):
        rotmat_to_6d(2.0 * np.eye(3))

def test_rejects_degenerate_6d():
    with pytest.raises(ValidationError):
        sixd_to_rotmat(np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]))
    with pytest.raises(ValidationError):
        sixd_to_rotmat(np.array([1.0, 2.0, 3.0, 2.0, 4.0, 6.0]))

def test_axis_angle_matches_scipy():
    axis = np.array([1.0, 2.0, -0.5])
    expected = Rotation.from_rotvec(0.7 * axis / np.linalg.norm(axis)).as_matrix()
    np.testing.assert_allclose(axis_angle_to_rotmat(axis, 0.7), expected, atol=1e-12)

def test_axis_angle_needs_axis():
    with pytest.raises(ValidationError):
        axis_angle_to_rotmat(np.zeros(3), 1.0)

def test_random_rotation_is_proper():
    rng = np.random.default_rng(5)
    for _ in range(10):
        matrix = random_rotation(rng)
        np.testing.assert_allclose(matrix.T @ matrix, np.eye(3), atol=1e-10)
        assert np.linalg.det(matrix) == pytest.approx(1.0)

def test_pose_round_trip_over_24_joints():
    matrices = Rotation.random(24, 9).as_matrix()
    pose = rotmats_to_pose(matrices)
    assert pose.shape == (144,)
    np.testing.assert_allclose(pose_to_rotmats(pose), matrices, atol=1e-10)
