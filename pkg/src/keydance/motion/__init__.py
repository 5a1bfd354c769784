from .rotation import (
    rotmat_to_6d, sixd_to_rotmat, pose_to_rotmats, rotmats_to_pose,
    axis_angle_to_rotmat, random_rotation
)
from .keyposes import KeySamplingStrategy, extract_key_poses, sample_key_positions
from .kinematics import kinetic_velocity
