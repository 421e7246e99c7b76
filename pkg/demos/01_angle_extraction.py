"""Extract the seven upper-body joint angles from a single skeleton frame.

Walks through the geometry: links between tracked joints, the dot-product
angle, the projected (signed) shoulder pitch, and clamping into the human
joint ranges.
"""

import numpy as np

from skelmimic import (
    ANGLE_NAMES,
    AngleJointId,
    HUMAN_LIMITS,
    JointId,
    SkeletonFrame,
    angle_between,
    extract_angles,
    link,
)

# A hand-built pose, meters, x pointing down, y lateral, z forward.
frame = SkeletonFrame(
    timestamp=0.0,
    positions={
        "right_wrist": (0.30, -0.16, 0.25),
        "right_elbow": (0.22, -0.26, 0.05),
        "right_shoulder": (0.02, -0.18, -0.01),
        "collar": (0.00, 0.00, 0.00),
        "neck": (-0.10, 0.01, 0.02),
        "head": (-0.21, 0.03, 0.06),
        "left_shoulder": (0.01, 0.19, 0.00),
        "left_elbow": (0.15, 0.34, 0.12),
        "left_wrist": (0.06, 0.40, 0.32),
    },
)

print("Links are vectors between tracked joints, e.g. elbow -> shoulder:")
upper_arm = link(frame, JointId.RIGHT_ELBOW, JointId.RIGHT_SHOULDER)
forearm = link(frame, JointId.RIGHT_WRIST, JointId.RIGHT_ELBOW)
print(f"  right upper arm link: {np.round(upper_arm, 3)}")
print(f"  right forearm link:   {np.round(forearm, 3)}")

print("\nThe elbow angle is the dot-product angle between those links:")
print(f"  angle_between -> {angle_between(forearm, upper_arm):.2f} deg")

print("\nextract_angles computes all seven at once (clamped to human ranges):")
angles = extract_angles(frame)
for j in AngleJointId:
    lo, hi = HUMAN_LIMITS.bounds[j]
    print(f"  {ANGLE_NAMES[j]:>4}: {angles[j]:8.2f} deg   (human range {lo} .. {hi})")

print("\nAngles only depend on link directions, so translating or scaling")
print("the whole skeleton changes nothing:")
moved = frame.translated((1.0, -2.0, 0.5)).scaled(3.0)
print(f"  max difference after translate+scale: {np.abs(extract_angles(moved) - angles).max():.2e} deg")
