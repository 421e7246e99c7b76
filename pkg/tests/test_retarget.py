import numpy as np
import pytest

from skelmimic import (
    AngleJointId,
    AngleTrajectory,
    HUMAN_LIMITS,
    JointLimitTable,
    LimitTableMismatchError,
    QTROBOT_LIMITS,
    QTROBOT_MODEL,
    RobotModel,
    UnresolvableCollisionError,
    forward_kinematics,
    map_angle,
    map_trajectory,
    self_collision_guard,
)
from skelmimic.retarget import _strictly_inside_box, closest_box_surface_point

from oracles import interpolate_oracle

A = AngleJointId

# Wide-limit model used for collision scenarios: the shipped robot's real
# ranges physically cannot reach the torso box, which is the point of the
# default-model guard tests below.
GUARD_MODEL = RobotModel(
    name="test-bot",
    limits=JointLimitTable("robot", {j: (-150.0, 150.0) for j in A}),
    upper_arm_m=0.20,
    forearm_m=0.20,
    shoulder_offset_m=0.10,
    body_half_extents=(0.15, 0.15, 0.15),
)

# Elbow -150 with the arm rolled inward parks the right wrist essentially
# at the box center (found by scanning; frozen here).
COLLIDING_POSE = np.array([-150.0, 90.0, -75.0, 0.0, 0.0, 0.0, 0.0])


class TestMapAngle:
    def test_head_pitch_endpoints(self):
        assert map_angle(-70.0, A.HP) == pytest.approx(-15.3, abs=1e-9)
        assert map_angle(85.0, A.HP) == pytest.approx(21.1, abs=1e-9)

    def test_head_pitch_midpoint(self):
        # affine maps preserve midpoints: human mid 7.5 -> robot mid 2.9
        assert map_angle(7.5, A.HP) == pytest.approx(2.9, abs=1e-9)

    def test_left_elbow_inverted_range(self):
        assert map_angle(4.3, A.LE) == pytest.approx(-8.0, abs=1e-9)
        assert map_angle(142.6, A.LE) == pytest.approx(-80.0, abs=1e-9)

    def test_all_joint_endpoints_exact(self):
        for joint in A:
            lo_h, hi_h = HUMAN_LIMITS.bounds[joint]
            lo_r, hi_r = QTROBOT_LIMITS.bounds[joint]
            assert map_angle(lo_h, joint) == pytest.approx(lo_r, abs=1e-9)
            assert map_angle(hi_h, joint) == pytest.approx(hi_r, abs=1e-9)

    def test_matches_interpolation_oracle(self, rng):
        for _ in range(2000):
            lo_h = rng.uniform(-180, 170)
            hi_h = lo_h + rng.uniform(1, 180)
            lo_r = rng.uniform(-180, 180)
            hi_r = lo_r + rng.choice([-1, 1]) * rng.uniform(1, 180)
            human = JointLimitTable("human", {A.RE: (lo_h, hi_h)})
            robot = JointLimitTable("robot", {A.RE: (lo_r, hi_r)})
            theta = rng.uniform(lo_h, hi_h)
            expected = interpolate_oracle(theta, lo_h, hi_h, lo_r, hi_r)
            assert map_angle(theta, A.RE, human, robot) == pytest.approx(expected, abs=1e-9)

    def test_exactly_affine(self, rng):
        for _ in range(200):
            joint = A(rng.integers(0, 7))
            lo, hi = HUMAN_LIMITS.interval(joint)
            a, b = rng.uniform(lo, hi, size=2)
            alpha = rng.uniform(0, 1)
            lhs = map_angle(alpha * a + (1 - alpha) * b, joint)
            rhs = alpha * map_angle(a, joint) + (1 - alpha) * map_angle(b, joint)
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_output_within_robot_interval(self, rng):
        for _ in range(500):
            joint = A(rng.integers(0, 7))
            lo, hi = HUMAN_LIMITS.interval(joint)
            out = map_angle(rng.uniform(lo, hi), joint)
            lo_r, hi_r = QTROBOT_LIMITS.interval(joint)
            assert lo_r - 1e-9 <= out <= hi_r + 1e-9

    def test_missing_joint_raises(self):
        human = JointLimitTable("human", {A.RE: (0.0, 10.0)})
        robot = JointLimitTable("robot", {A.RE: (0.0, 10.0)})
        with pytest.raises(LimitTableMismatchError):
            map_angle(1.0, A.HP, human, robot)
        with pytest.raises(LimitTableMismatchError):
            map_angle(1.0, A.RE, human, JointLimitTable("robot", {A.HP: (0.0, 1.0)}))


class TestMapTrajectory:
    def _human_traj(self, columns):
        fractions = np.asarray(columns)
        angles = np.empty((7, fractions.shape[0]))
        for joint in A:
            lo, hi = HUMAN_LIMITS.bounds[joint]
            angles[joint] = lo + fractions * (hi - lo)
        return AngleTrajectory(side="human", angles=angles, action_label="golden")

    def test_lower_limit_column_maps_to_robot_lower_limits(self):
        traj = self._human_traj([0.0])
        out = map_trajectory(traj)
        expected = [QTROBOT_LIMITS.bounds[j][0] for j in A]
        np.testing.assert_allclose(out.angles[:, 0], expected, atol=1e-9)
        assert out.side == "robot"

    def test_identity_tables(self):
        traj = self._human_traj([0.0, 0.3, 0.9])
        same = JointLimitTable("robot", dict(HUMAN_LIMITS.bounds))
        out = map_trajectory(traj, HUMAN_LIMITS, same)
        np.testing.assert_allclose(out.angles, traj.angles, atol=1e-12)

    def test_golden_7x5_matches_per_entry_oracle(self):
        traj = self._human_traj([0.0, 0.25, 0.5, 0.75, 1.0])
        out = map_trajectory(traj)
        expected = np.empty_like(traj.angles)
        for joint in A:
            lo_h, hi_h = HUMAN_LIMITS.bounds[joint]
            lo_r, hi_r = QTROBOT_LIMITS.bounds[joint]
            for t in range(5):
                expected[joint, t] = interpolate_oracle(
                    traj.angles[joint, t], lo_h, hi_h, lo_r, hi_r
                )
        np.testing.assert_allclose(out.angles, expected, atol=1e-9)
        assert out.angles.shape == traj.angles.shape
        assert out.action_label == "golden"

    def test_requires_human_side(self):
        robot_traj = AngleTrajectory(side="robot", angles=np.zeros((7, 2)))
        with pytest.raises(ValueError):
            map_trajectory(robot_traj)

    def test_metadata_preserved(self, golden_frame):
        traj = self._human_traj([0.1, 0.2])
        out = map_trajectory(traj)
        np.testing.assert_array_equal(out.frame_times, traj.frame_times)
        assert out.dropped_frames == traj.dropped_frames


class TestForwardKinematics:
    def test_zero_pose(self):
        fk = forward_kinematics(np.zeros(7), QTROBOT_MODEL)
        reach = QTROBOT_MODEL.upper_arm_m + QTROBOT_MODEL.forearm_m
        off = QTROBOT_MODEL.shoulder_offset_m
        np.testing.assert_allclose(fk["right_wrist"], [reach, -off, 0.0], atol=1e-12)
        np.testing.assert_allclose(fk["left_wrist"], [reach, off, 0.0], atol=1e-12)

    def test_elbow_only_bend_90(self):
        theta = np.zeros(7)
        theta[A.RE] = 90.0
        fk = forward_kinematics(theta, QTROBOT_MODEL)
        lu, lf = QTROBOT_MODEL.upper_arm_m, QTROBOT_MODEL.forearm_m
        off = QTROBOT_MODEL.shoulder_offset_m
        # forearm rotates out of the upper-arm axis by exactly 90 degrees
        np.testing.assert_allclose(fk["right_wrist"], [lu, -off, -lf], atol=1e-12)
        shoulder = np.array([0.0, -off, 0.0])
        elbow = np.array([lu, -off, 0.0])
        upper = elbow - shoulder
        fore = fk["right_wrist"] - elbow
        assert abs(float(upper @ fore)) < 1e-12
        assert np.linalg.norm(fore) == pytest.approx(lf)
        # left arm untouched
        np.testing.assert_allclose(fk["left_wrist"], [lu + lf, off, 0.0], atol=1e-12)

    def test_negative_roll_lifts_outward(self):
        theta = np.zeros(7)
        theta[A.RSR] = -80.0
        theta[A.LSR] = -80.0
        fk = forward_kinematics(theta, QTROBOT_MODEL)
        assert fk["right_wrist"][1] < -QTROBOT_MODEL.shoulder_offset_m
        assert fk["left_wrist"][1] > QTROBOT_MODEL.shoulder_offset_m

    def test_wrist_within_reach(self, rng):
        reach = QTROBOT_MODEL.upper_arm_m + QTROBOT_MODEL.forearm_m
        for _ in range(300):
            theta = np.array(
                [rng.uniform(*QTROBOT_LIMITS.interval(j)) for j in A]
            )
            fk = forward_kinematics(theta, QTROBOT_MODEL)
            for side, sign in (("right_wrist", -1), ("left_wrist", 1)):
                shoulder = np.array([0.0, sign * QTROBOT_MODEL.shoulder_offset_m, 0.0])
                assert np.linalg.norm(fk[side] - shoulder) <= reach + 1e-9


class TestSelfCollisionGuard:
    def test_arms_extended_sideways_untouched(self):
        theta = np.zeros(7)
        theta[A.RSR] = -80.0
        theta[A.LSR] = -80.0
        result = self_collision_guard(theta, QTROBOT_MODEL)
        assert result.adjusted is False
        np.testing.assert_array_equal(result.safe, theta)

    def test_default_robot_zero_pose_is_safe(self):
        result = self_collision_guard(np.zeros(7), QTROBOT_MODEL)
        assert result.adjusted is False

    def test_colliding_wrist_gets_adjusted_outside(self):
        wrist = forward_kinematics(COLLIDING_POSE, GUARD_MODEL)["right_wrist"]
        assert _strictly_inside_box(wrist, GUARD_MODEL)
        result = self_collision_guard(COLLIDING_POSE, GUARD_MODEL)
        assert result.adjusted is True
        fixed = forward_kinematics(result.safe, GUARD_MODEL)["right_wrist"]
        assert not _strictly_inside_box(fixed, GUARD_MODEL)
        # only the elbow of the offending arm may move
        untouched = [j for j in A if j != A.RE]
        np.testing.assert_array_equal(result.safe[untouched], COLLIDING_POSE[untouched])
        assert result.safe[A.RE] != COLLIDING_POSE[A.RE]

    def test_idempotent(self):
        first = self_collision_guard(COLLIDING_POSE, GUARD_MODEL)
        second = self_collision_guard(first.safe, GUARD_MODEL)
        assert second.adjusted is False
        np.testing.assert_array_equal(second.safe, first.safe)

    def test_never_returns_wrist_strictly_inside(self, rng):
        lo, hi = GUARD_MODEL.limits.interval(A.RE)
        for _ in range(100):
            theta = rng.uniform(lo, hi, size=7)
            try:
                result = self_collision_guard(theta, GUARD_MODEL)
            except UnresolvableCollisionError:
                continue
            fk = forward_kinematics(result.safe, GUARD_MODEL)
            assert not _strictly_inside_box(fk["right_wrist"], GUARD_MODEL)
            assert not _strictly_inside_box(fk["left_wrist"], GUARD_MODEL)

    def test_unresolvable_raises(self):
        # a box swallowing the whole reachable workspace cannot be escaped
        swallowing = RobotModel(
            name="boxed-in",
            limits=GUARD_MODEL.limits,
            upper_arm_m=GUARD_MODEL.upper_arm_m,
            forearm_m=GUARD_MODEL.forearm_m,
            shoulder_offset_m=GUARD_MODEL.shoulder_offset_m,
            body_half_extents=(2.0, 2.0, 2.0),
        )
        with pytest.raises(UnresolvableCollisionError):
            self_collision_guard(np.zeros(7), swallowing)

    def test_closest_surface_point(self):
        point = closest_box_surface_point([0.0, 0.0, 0.0], GUARD_MODEL)
        assert np.abs(point).max() == pytest.approx(0.15)
        outside = closest_box_surface_point([1.0, 0.0, 0.0], GUARD_MODEL)
        np.testing.assert_allclose(outside, [0.15, 0.0, 0.0])


class TestTables:
    def test_human_table_requires_ordered_bounds(self):
        with pytest.raises(ValueError):
            JointLimitTable("human", {A.RE: (10.0, 10.0)})
        with pytest.raises(ValueError):
            JointLimitTable("human", {A.RE: (20.0, 10.0)})

    def test_robot_table_allows_inverted_not_equal(self):
        table = JointLimitTable("robot", {A.RE: (20.0, 10.0)})
        assert table.interval(A.RE) == (10.0, 20.0)
        with pytest.raises(ValueError):
            JointLimitTable("robot", {A.RE: (5.0, 5.0)})

    def test_round_trip_dict(self):
        data = QTROBOT_LIMITS.to_dict()
        back = JointLimitTable.from_dict("robot", data)
        assert back.bounds == QTROBOT_LIMITS.bounds

    def test_robot_model_round_trip(self):
        back = RobotModel.from_dict(QTROBOT_MODEL.to_dict())
        assert back == QTROBOT_MODEL
