import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from skelmimic import SkeletonFrame, SkeletonSequence

# The frozen golden pose: plausible in-range upper-body configuration,
# shared by the extraction golden test and the rotation property tests.
GOLDEN_POSE = {
    1: (0.30, -0.16, 0.25),   # right wrist
    2: (0.22, -0.26, 0.05),   # right elbow
    3: (0.02, -0.18, -0.01),  # right shoulder
    4: (0.00, 0.00, 0.00),    # collar
    5: (-0.10, 0.01, 0.02),   # neck
    6: (-0.21, 0.03, 0.06),   # head
    7: (0.01, 0.19, 0.00),    # left shoulder
    8: (0.15, 0.34, 0.12),    # left elbow
    9: (0.06, 0.40, 0.32),    # left wrist
}


def frame_from_index_map(positions, timestamp=0.0):
    arr = np.zeros((9, 3))
    for idx, xyz in positions.items():
        arr[idx - 1] = xyz
    return SkeletonFrame(timestamp=timestamp, positions=arr)


def random_frame(rng, timestamp=0.0, spread=0.4):
    """A random (almost surely non-degenerate) frame."""
    return SkeletonFrame(timestamp=timestamp, positions=rng.normal(0.0, spread, size=(9, 3)))


def constant_sequence(frame, n, dt=1.0 / 30.0, label="pose"):
    frames = tuple(SkeletonFrame(i * dt, frame.positions) for i in range(n))
    return SkeletonSequence(action_label=label, frames=frames, sample_rate_hint=1.0 / dt)


@pytest.fixture
def golden_frame():
    return frame_from_index_map(GOLDEN_POSE)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
