"""
motion/rotation.py
6-D rotation representation: the first two columns of a rotation matrix,
decoded back with Gram-Schmidt.
"""

import numpy as np

from ..utils.exceptions import ValidationError

ORTHONORMAL_TOL = 1e-6
MIN_NORM = 1e-8
MAX_ABS_COS = 1.0 - 1e-8

def rotmat_to_6d(rotation: np.ndarray) -> np.ndarray:
    """First two columns of R, column-major: [R[:,0], R[:,1]].

    Raises:
        ValidationError: R is not orthonormal with det +1
    """
    matrix = np.asarray(rotation, dtype=np.float64)
    if matrix.shape != (3, 3):
        raise ValidationError(f"expected a 3×3 matrix, got shape {matrix.shape}")
    if (np.max(np.abs(matrix.T @ matrix - np.eye(3))) > ORTHONORMAL_TOL
            or abs(np.linalg.det(matrix) - 1.0) > ORTHONORMAL_TOL):
        raise ValidationError("matrix is not a rotation (needs RᵀR = I and det R = +1)")
    return np.concatenate([matrix[:, 0], matrix[:, 1]])

def sixd_to_rotmat(sixd: np.ndarray) -> np.ndarray:
    """Gram-Schmidt on the two 3-vectors; third column is their cross product.

    Raises:
        ValidationError: a vector is near zero or the two are collinear
    """
    values = np.asarray(sixd, dtype=np.float64)
    if values.shape != (6,):
        raise ValidationError(f"expected 6 values, got shape {values.shape}")
    a1, a2 = values[:3], values[3:]
    n1, n2 = np.linalg.norm(a1), np.linalg.norm(a2)
    if n1 <= MIN_NORM or n2 <= MIN_NORM:
        raise ValidationError("6-D rotation has a near-zero column")
    if abs(a1 @ a2) / (n1 * n2) >= MAX_ABS_COS:
        raise ValidationError("6-D rotation columns are collinear")
    b1 = a1 / n1
    b2 = a2 - (b1 @ a2) * b1
    b2 /= np.linalg.norm(b2)
    b3 = np.cross(b1, b2)
    return np.stack([b1, b2, b3], axis=1)

def pose_to_rotmats(pose: np.ndarray) -> np.ndarray:
    """144-D pose → 24×3×3 joint rotations."""
    values = np.asarray(pose, dtype=np.float64).reshape(-1, 6)
    return np.stack([sixd_to_rotmat(v) for v in values])

def rotmats_to_pose(rotations: np.ndarray) -> np.ndarray:
    """J×3×3 joint rotations → 6·J pose vector."""
    return np.concatenate([rotmat_to_6d(r) for r in np.asarray(rotations)])

def axis_angle_to_rotmat(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues' formula for a rotation of `angle` radians about `axis`."""
    axis = np.asarray(axis, dtype=np.float64)
    norm = np.linalg.norm(axis)
    if norm <= MIN_NORM:
        raise ValidationError("rotation axis must be non-zero")
    x, y, z = axis / norm
    skew = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + np.sin(angle) * skew + (1.0 - np.cos(angle)) * (skew @ skew)

def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniformly distributed rotation (QR of a Gaussian matrix, sign-fixed)."""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return q
