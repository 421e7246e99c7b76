"""Map human joint angles onto the robot's joint ranges.

The retargeting is a per-joint affine map between the human and robot
limit tables. Several robot joints have inverted ranges (lower limit
numerically above the upper limit, a motor sign convention); the map
handles them with a negative scale, no special-casing.
"""

import numpy as np

from skelmimic import (
    ANGLE_NAMES,
    AngleJointId,
    HUMAN_LIMITS,
    QTROBOT_LIMITS,
    extract_trajectory,
    generate_move,
    map_angle,
    map_trajectory,
)

print("Shipped limit tables (degrees):")
print(f"  {'joint':>5} {'human lo':>9} {'human hi':>9} {'robot lo':>9} {'robot hi':>9}")
for j in AngleJointId:
    lo_h, hi_h = HUMAN_LIMITS.bounds[j]
    lo_r, hi_r = QTROBOT_LIMITS.bounds[j]
    marker = "  (inverted)" if lo_r > hi_r else ""
    print(f"  {ANGLE_NAMES[j]:>5} {lo_h:9.1f} {hi_h:9.1f} {lo_r:9.1f} {hi_r:9.1f}{marker}")

print("\nEndpoints map to endpoints, midpoints to midpoints:")
print(f"  head pitch -70  -> {map_angle(-70.0, AngleJointId.HP):7.2f}")
print(f"  head pitch  85  -> {map_angle(85.0, AngleJointId.HP):7.2f}")
print(f"  head pitch 7.5  -> {map_angle(7.5, AngleJointId.HP):7.2f}  (both midpoints)")
print(f"  left elbow 4.3  -> {map_angle(4.3, AngleJointId.LE):7.2f}  (inverted range)")
print(f"  left elbow 142.6-> {map_angle(142.6, AngleJointId.LE):7.2f}")

print("\nWhole demonstrations map column-wise:")
seq = generate_move("salt_shaker", n_frames=60, seed=0)
human = extract_trajectory(seq)
robot = map_trajectory(human)
print(f"  human matrix {human.angles.shape} -> robot matrix {robot.angles.shape}")
for j in (AngleJointId.RE, AngleJointId.LSP):
    print(
        f"  {ANGLE_NAMES[j]:>4}: human [{human.angles[j].min():7.2f}, {human.angles[j].max():7.2f}]"
        f" -> robot [{robot.angles[j].min():7.2f}, {robot.angles[j].max():7.2f}]"
    )
