import numpy as np
import pytest

from skelmimic import (
    AngleJointId,
    AngleTrajectory,
    ControllerConfig,
    ExecutionTrace,
    JointLimitTable,
    JointPlant,
    PlantSettings,
    SetpointOutOfRangeError,
    average_abs_error,
    average_error,
    error_std,
    make_plants,
    open_loop_track,
    pid_step,
    reproduce_motion,
)

A = AngleJointId

WIDE = JointLimitTable("robot", {j: (-90.0, 90.0) for j in A})


def robot_traj(columns, times=None):
    angles = np.asarray(columns, dtype=float).T
    if angles.ndim == 1:
        angles = angles.reshape(7, 1)
    return AngleTrajectory(side="robot", angles=angles, frame_times=times)


def fabricated_trace(setpoints, achieved):
    setpoints = np.asarray(setpoints, dtype=float)
    achieved = np.asarray(achieved, dtype=float)
    shape = setpoints.shape
    return ExecutionTrace(
        setpoints=setpoints,
        achieved=achieved,
        control=np.zeros(shape),
        iterations=np.ones(shape, dtype=int),
        timed_out=np.zeros(shape, dtype=bool),
        integral_peak=np.zeros(shape),
        frame_times=np.arange(shape[0], dtype=float),
    )


class TestPidStep:
    def test_p_only_algebra(self):
        cfg = ControllerConfig(kp=1.0, ki=0.0, kd=0.0)
        out, integ = pid_step(error=5.0, prev_error=5.0, integral=0.0, cfg=cfg, measured=10.0)
        assert out == pytest.approx(15.0)

    def test_zero_error_returns_measured(self):
        cfg = ControllerConfig()
        out, integ = pid_step(0.0, 0.0, 0.0, cfg, measured=42.0)
        assert out == pytest.approx(42.0)
        assert integ == 0.0

    def test_golden_hand_arithmetic(self):
        # 0.5*2 + 0.1*(0 + 2*0.1) + 0.05*(2-1)/0.1 = 1 + 0.02 + 0.5
        cfg = ControllerConfig(kp=0.5, ki=0.1, kd=0.05, dt=0.1)
        out, integ = pid_step(error=2.0, prev_error=1.0, integral=0.0, cfg=cfg, measured=0.0)
        assert out == pytest.approx(1.52, abs=1e-12)
        assert integ == pytest.approx(0.2, abs=1e-12)

    def test_reduces_to_p_controller(self, rng):
        cfg = ControllerConfig(kp=0.7, ki=0.0, kd=0.0)
        for _ in range(100):
            e, prev, integ, measured = rng.normal(size=4) * 20
            out, _ = pid_step(e, prev, integ, cfg, measured)
            assert out == pytest.approx(measured + 0.7 * e, abs=1e-12)

    def test_integral_clamped(self):
        cfg = ControllerConfig(ki=1.0, integral_limit=1.0, dt=0.5)
        _, integ = pid_step(error=100.0, prev_error=100.0, integral=0.9, cfg=cfg, measured=0.0)
        assert integ == 1.0
        _, integ = pid_step(error=-100.0, prev_error=-100.0, integral=-0.9, cfg=cfg, measured=0.0)
        assert integ == -1.0


class TestOpenLoop:
    def test_dead_beat_any_trajectory(self, rng):
        cfg = ControllerConfig(kp=1.0, ki=0.0, kd=0.0)
        for _ in range(10):
            T = int(rng.integers(1, 30))
            angles = rng.uniform(-80, 80, size=(7, T))
            traj = AngleTrajectory(side="robot", angles=angles)
            trace = open_loop_track(traj, start=rng.uniform(-80, 80, size=7), cfg=cfg)
            np.testing.assert_allclose(trace.e_t, 0.0, atol=1e-9)
            assert (trace.iterations == 1).all()
            assert not trace.timed_out.any()

    def test_geometric_decay_iteration_count(self):
        # kp=0.5 halves the error per iteration; from 10 deg to eps=0.1
        # takes ceil(log2(100)) = 7 iterations
        cfg = ControllerConfig(kp=0.5, ki=0.0, kd=0.0, epsilon=0.1)
        traj = robot_traj([[10.0] * 7])
        trace = open_loop_track(traj, start=np.zeros(7), cfg=cfg)
        assert (trace.iterations == 7).all()
        assert np.abs(trace.errors).max() < 0.1

    def test_sinusoid_default_gains_tracks_accurately(self):
        t = np.arange(100) * 0.033
        angles = np.vstack([20.0 * np.sin(2 * np.pi * 0.5 * t + 0.3 * j) for j in range(7)])
        traj = AngleTrajectory(side="robot", angles=angles, frame_times=t)
        trace = open_loop_track(traj, start=np.zeros(7), cfg=ControllerConfig())
        assert trace.e_t_abs[10:].mean() < 2.0


class TestReproduceMotion:
    def test_already_at_target(self):
        traj = robot_traj([[5.0] * 7, [5.0] * 7])
        plants = make_plants(WIDE, initial=np.full(7, 5.0))
        trace = reproduce_motion(traj, plants)
        np.testing.assert_array_equal(trace.e_t, 0.0)
        assert (trace.iterations == 1).all()

    def test_step_response_converges(self):
        traj = robot_traj([[30.0] * 7])
        plants = make_plants(WIDE, initial=np.zeros(7))
        trace = reproduce_motion(traj, plants)
        cfg = ControllerConfig()
        assert np.abs(trace.errors).max() < cfg.epsilon
        assert (trace.iterations > 1).all()
        # frozen from simulation with the shipped defaults
        assert (trace.iterations == 13).all()
        assert not trace.timed_out.any()

    def test_setpoint_out_of_range_rejected_before_running(self):
        traj = robot_traj([[120.0] * 7])
        plants = make_plants(WIDE, initial=np.zeros(7))
        with pytest.raises(SetpointOutOfRangeError):
            reproduce_motion(traj, plants)

    def test_achieved_within_plant_limits(self, rng):
        T = 20
        angles = rng.uniform(-85, 85, size=(7, T))
        traj = AngleTrajectory(side="robot", angles=angles)
        plants = make_plants(WIDE, initial=np.zeros(7))
        trace = reproduce_motion(traj, plants, ControllerConfig(max_iters_per_setpoint=4))
        assert trace.achieved.min() >= -90.0 and trace.achieved.max() <= 90.0

    def test_deterministic_bit_identical(self):
        t = np.arange(15) * 0.033
        angles = np.vstack([30.0 * np.sin(t + j) for j in range(7)])
        traj = AngleTrajectory(side="robot", angles=angles, frame_times=t)
        noisy = PlantSettings(measurement_noise_std=0.2)
        traces = []
        for _ in range(2):
            plants = make_plants(WIDE, initial=np.zeros(7), settings=noisy, seed=11)
            traces.append(reproduce_motion(traj, plants))
        np.testing.assert_array_equal(traces[0].achieved, traces[1].achieved)
        np.testing.assert_array_equal(traces[0].control, traces[1].control)
        np.testing.assert_array_equal(traces[0].iterations, traces[1].iterations)

    def test_integral_bounded_by_limit(self):
        cfg = ControllerConfig(ki=2.0, integral_limit=3.0, max_iters_per_setpoint=60)
        traj = robot_traj([[80.0] * 7])
        plants = make_plants(WIDE, initial=np.full(7, -80.0), settings=PlantSettings(rate_limit=5.0))
        trace = reproduce_motion(traj, plants, cfg)
        assert trace.integral_peak.max() <= 3.0 + 1e-12

    def test_unreachable_setpoint_times_out(self):
        cfg = ControllerConfig(max_iters_per_setpoint=50)
        traj = robot_traj([[30.0] * 7])
        slow = PlantSettings(rate_limit=1.0)  # 0.033 deg per iteration at most
        plants = make_plants(WIDE, initial=np.zeros(7), settings=slow)
        trace = reproduce_motion(traj, plants, cfg)
        assert trace.timed_out.all()
        assert (trace.iterations == 50).all()
        assert trace.timeout_count == 7

    def test_literal_and_interleaved_agree_on_independent_plants(self):
        t = np.arange(10) * 0.033
        angles = np.vstack([25.0 * np.sin(t + 0.5 * j) for j in range(7)])
        traj = AngleTrajectory(side="robot", angles=angles, frame_times=t)
        results = {}
        for servicing in ("interleaved", "literal"):
            plants = make_plants(WIDE, initial=np.zeros(7))
            cfg = ControllerConfig(servicing=servicing, max_iters_per_setpoint=5)
            results[servicing] = reproduce_motion(traj, plants, cfg)
        np.testing.assert_array_equal(
            results["interleaved"].achieved, results["literal"].achieved
        )
        np.testing.assert_array_equal(
            results["interleaved"].iterations, results["literal"].iterations
        )

    def test_carry_integral_changes_behavior(self):
        traj = robot_traj([[20.0] * 7, [20.0] * 7, [20.0] * 7])
        slow = PlantSettings(rate_limit=30.0)
        base = ControllerConfig(ki=0.5, max_iters_per_setpoint=3)
        carry = ControllerConfig(ki=0.5, max_iters_per_setpoint=3, carry_integral=True)
        trace_reset = reproduce_motion(traj, make_plants(WIDE, initial=np.zeros(7), settings=slow), base)
        trace_carry = reproduce_motion(traj, make_plants(WIDE, initial=np.zeros(7), settings=slow), carry)
        assert not np.array_equal(trace_reset.control, trace_carry.control)

    def test_wrong_side_rejected(self):
        human = AngleTrajectory(side="human", angles=np.full((7, 1), 10.0))
        with pytest.raises(ValueError):
            reproduce_motion(human, make_plants(WIDE))


class TestJointPlant:
    def test_rate_limit_bounds_each_step(self):
        plant = JointPlant(0.0, (-90, 90), rate_limit=10.0, response_alpha=1.0)
        plant.command(90.0, dt=0.1)
        assert plant.current_angle == pytest.approx(1.0)  # 10 deg/s * 0.1 s
        plant.command(-90.0, dt=0.1)
        assert plant.current_angle == pytest.approx(0.0)

    def test_hard_limits_clamped(self):
        plant = JointPlant(89.0, (-90, 90), rate_limit=1000.0, response_alpha=1.0)
        plant.command(200.0, dt=1.0)
        assert plant.current_angle == 90.0

    def test_first_order_lag(self):
        plant = JointPlant(0.0, (-90, 90), rate_limit=1e6, response_alpha=0.5)
        plant.command(10.0, dt=1.0)
        assert plant.current_angle == pytest.approx(5.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            JointPlant(100.0, (-90, 90))
        with pytest.raises(ValueError):
            JointPlant(0.0, (-90, 90), rate_limit=0.0)
        with pytest.raises(ValueError):
            JointPlant(0.0, (-90, 90), response_alpha=1.5)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ControllerConfig(dt=0.0)
        with pytest.raises(ValueError):
            ControllerConfig(epsilon=-1.0)
        with pytest.raises(ValueError):
            ControllerConfig(max_iters_per_setpoint=0)
        with pytest.raises(ValueError):
            ControllerConfig(servicing="bogus")


class TestAverageError:
    def test_exact_tracking_gives_zero(self):
        trace = fabricated_trace([[3.0] * 7], [[3.0] * 7])
        assert average_error(trace, 0) == 0.0

    def test_signed_vs_absolute(self):
        setpoints = np.zeros((1, 7))
        achieved = np.array([[-1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]])
        trace = fabricated_trace(setpoints, achieved)
        assert average_error(trace, 0) == pytest.approx(0.0)
        assert average_abs_error(trace, 0) == pytest.approx(2.0 / 7.0)

    def test_matches_summation_oracle(self, rng):
        setpoints = rng.normal(size=(12, 7)) * 30
        achieved = rng.normal(size=(12, 7)) * 30
        trace = fabricated_trace(setpoints, achieved)
        for t in range(12):
            expected = sum(float(setpoints[t, j] - achieved[t, j]) for j in range(7)) / 7.0
            assert average_error(trace, t) == pytest.approx(expected, abs=1e-12)
            exp_std = float(np.std([setpoints[t, j] - achieved[t, j] for j in range(7)]))
            assert error_std(trace, t) == pytest.approx(exp_std, abs=1e-12)

    def test_linearity_in_error_scale(self, rng):
        setpoints = rng.normal(size=(5, 7)) * 10
        errors = rng.normal(size=(5, 7))
        for c in (0.5, 2.0, -3.0):
            base = fabricated_trace(setpoints, setpoints - errors)
            scaled = fabricated_trace(setpoints, setpoints - c * errors)
            for t in range(5):
                assert average_error(scaled, t) == pytest.approx(
                    c * average_error(base, t), abs=1e-12
                )

    def test_trace_summaries_match_definitions(self, rng):
        setpoints = rng.normal(size=(6, 7))
        achieved = rng.normal(size=(6, 7))
        trace = fabricated_trace(setpoints, achieved)
        np.testing.assert_allclose(trace.e_t, (setpoints - achieved).mean(axis=1))
        np.testing.assert_allclose(trace.e_t_abs, np.abs(setpoints - achieved).mean(axis=1))
        np.testing.assert_allclose(trace.e_t_std, (setpoints - achieved).std(axis=1))

    def test_out_of_range_index(self):
        trace = fabricated_trace(np.zeros((2, 7)), np.zeros((2, 7)))
        with pytest.raises(IndexError):
            average_error(trace, 2)
