"""
motion/kinematics.py
Kinetic velocity of a motion clip.

The velocity is the per-frame L2 change of the 144-D rotation part. Root
translation is excluded, so global translation edits never move it.
"""

import numpy as np

from ..models.motion import MotionSequence
from ..utils.exceptions import ValidationError

def kinetic_velocity(motion: MotionSequence) -> np.ndarray:
    """v_t = ‖pose_{t+1} − pose_t‖₂, length T−1."""
    if motion.num_frames < 2:
        raise ValidationError("kinetic velocity needs at least two frames")
    return np.linalg.norm(np.diff(motion.poses, axis=0), axis=1)
