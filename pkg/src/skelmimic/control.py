"""PID position tracking of robot-side angle trajectories on a simulated plant.

The control law per joint is

    u = theta_measured + Kp*e + Ki*e_int + Kd*e_dot

with e = setpoint - measured, e_int accumulated as e*dt (clamped to an
anti-windup bound) and e_dot = (e - e_prev)/dt. The integral resets at
every trajectory index by default (``carry_integral`` switches that off)
and the first iteration of a setpoint uses e_prev = e, so there is no
derivative kick.

For each setpoint the loop runs at least one control iteration --
measure, PID, command -- and stops as soon as the post-command error
magnitude drops below ``epsilon``, or after ``max_iters_per_setpoint``
iterations (recorded as a timeout; an unbounded loop could spin forever
on an unreachable target). A small iteration budget emulates real-time
tracking, where the trajectory moves on before the joint settles; the
default budget of 200 lets every reachable setpoint converge.

Closed-loop mode drives :class:`JointPlant` instances (first-order lag
with rate limiting and hard position limits, standing in for the physical
motors). Open-loop mode never measures: each control output is taken as
the next measurement, which isolates the controller for tuning.

Joints can be serviced in two orders: ``"interleaved"`` (round-robin, all
joints progress together, like a robot moving every joint at once) or
``"literal"`` (each joint runs to convergence before the next one
starts). With independent plants both orders produce identical numbers;
they differ only on hardware with coupled dynamics.

A tracking run owns its plants for its duration; the returned
:class:`ExecutionTrace` is immutable. Distinct runs may execute in
parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .joints import ANGLE_NAMES, N_ANGLES, AngleJointId
from .limits import JointLimitTable
from .skeleton import AngleTrajectory

__all__ = [
    "ControllerConfig",
    "PlantSettings",
    "JointPlant",
    "ExecutionTrace",
    "SetpointOutOfRangeError",
    "pid_step",
    "reproduce_motion",
    "open_loop_track",
    "average_error",
    "average_abs_error",
    "error_std",
    "make_plants",
]


class SetpointOutOfRangeError(ValueError):
    """A trajectory setpoint lies outside a plant's position limits."""


@dataclass(frozen=True)
class ControllerConfig:
    """PID gains and loop parameters.

    ``epsilon`` is the per-step error tolerance in degrees, ``dt`` the
    control time step in seconds, ``integral_limit`` the anti-windup bound
    on the integral term (degree-seconds).
    """

    kp: float = 0.8
    ki: float = 0.05
    kd: float = 0.01
    epsilon: float = 0.5
    dt: float = 0.033
    max_iters_per_setpoint: int = 200
    integral_limit: float = 50.0
    carry_integral: bool = False
    servicing: str = "interleaved"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iters_per_setpoint < 1:
            raise ValueError("max_iters_per_setpoint must be >= 1")
        if not self.integral_limit > 0:
            raise ValueError(f"integral_limit must be > 0, got {self.integral_limit}")
        for name in ("kp", "ki", "kd"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.servicing not in ("interleaved", "literal"):
            raise ValueError(f"servicing must be 'interleaved' or 'literal', got {self.servicing!r}")

    def to_dict(self) -> dict:
        return {
            "kp": self.kp,
            "ki": self.ki,
            "kd": self.kd,
            "epsilon": self.epsilon,
            "dt": self.dt,
            "max_iters_per_setpoint": self.max_iters_per_setpoint,
            "integral_limit": self.integral_limit,
            "carry_integral": self.carry_integral,
            "servicing": self.servicing,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ControllerConfig":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


@dataclass(frozen=True)
class PlantSettings:
    """Shared plant parameters used when building a set of joint plants."""

    response_alpha: float = 0.6
    rate_limit: float = 90.0
    measurement_noise_std: float = 0.0

    def to_dict(self) -> dict:
        return {
            "response_alpha": self.response_alpha,
            "rate_limit": self.rate_limit,
            "measurement_noise_std": self.measurement_noise_std,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlantSettings":
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


class JointPlant:
    """First-order-lag joint motor simulation with rate and position limits.

    Each commanded step moves the angle by ``response_alpha * (u - angle)``,
    clipped to ``rate_limit * dt`` per iteration and clamped into
    ``limits``. Measurements optionally carry Gaussian noise drawn from a
    per-plant seeded generator, so runs are reproducible.
    """

    def __init__(
        self,
        current_angle: float,
        limits: tuple[float, float],
        rate_limit: float = 90.0,
        response_alpha: float = 0.6,
        measurement_noise_std: float = 0.0,
        seed: int = 0,
    ):
        lo, hi = float(limits[0]), float(limits[1])
        if lo > hi:
            raise ValueError(f"plant limits must be ordered, got ({lo}, {hi})")
        if not rate_limit > 0:
            raise ValueError(f"rate_limit must be > 0, got {rate_limit}")
        if not 0 < response_alpha <= 1:
            raise ValueError(f"response_alpha must be in (0, 1], got {response_alpha}")
        if not lo <= current_angle <= hi:
            raise ValueError(f"current_angle {current_angle} outside limits ({lo}, {hi})")
        if measurement_noise_std < 0:
            raise ValueError("measurement_noise_std must be >= 0")
        self.current_angle = float(current_angle)
        self.limits = (lo, hi)
        self.rate_limit = float(rate_limit)
        self.response_alpha = float(response_alpha)
        self.measurement_noise_std = float(measurement_noise_std)
        self._rng = np.random.default_rng(seed) if measurement_noise_std > 0 else None

    def measure(self) -> float:
        if self._rng is None:
            return self.current_angle
        return self.current_angle + self.measurement_noise_std * self._rng.standard_normal()

    def command(self, u: float, dt: float) -> None:
        step = self.response_alpha * (float(u) - self.current_angle)
        max_step = self.rate_limit * dt
        step = min(max(step, -max_step), max_step)
        lo, hi = self.limits
        self.current_angle = min(max(self.current_angle + step, lo), hi)


class _OpenLoopJoint:
    """Stand-in 'plant' for open-loop runs: the last output is the measurement."""

    def __init__(self, start: float):
        self.current_angle = float(start)

    def measure(self) -> float:
        return self.current_angle

    def command(self, u: float, dt: float) -> None:
        self.current_angle = float(u)


def make_plants(
    limits: JointLimitTable,
    initial: Sequence[float] | None = None,
    settings: PlantSettings = PlantSettings(),
    seed: int = 0,
) -> list[JointPlant]:
    """Build one plant per derived joint from a robot limit table.

    ``initial=None`` starts every joint at the midpoint of its range.
    """
    plants = []
    for joint in AngleJointId:
        lo, hi = limits.interval(joint)
        start = 0.5 * (lo + hi) if initial is None else float(initial[joint])
        plants.append(
            JointPlant(
                current_angle=start,
                limits=(lo, hi),
                rate_limit=settings.rate_limit,
                response_alpha=settings.response_alpha,
                measurement_noise_std=settings.measurement_noise_std,
                seed=int(np.random.SeedSequence([seed, int(joint)]).generate_state(1)[0]),
            )
        )
    return plants


@dataclass(frozen=True)
class ExecutionTrace:
    """Everything recorded while tracking one trajectory.

    Arrays are (T, 7): ``setpoints``, ``achieved`` (post-command
    measurement when the loop left each setpoint), final ``control``
    outputs, ``iterations`` used, ``timed_out`` flags and the peak
    absolute integral term per setpoint. Per-index error summaries are
    exposed as properties.
    """

    setpoints: np.ndarray = field(repr=False)
    achieved: np.ndarray = field(repr=False)
    control: np.ndarray = field(repr=False)
    iterations: np.ndarray = field(repr=False)
    timed_out: np.ndarray = field(repr=False)
    integral_peak: np.ndarray = field(repr=False)
    frame_times: np.ndarray = field(repr=False)
    mode: str = "closed_loop"
    action_label: str = ""
    config: ControllerConfig = field(default_factory=ControllerConfig)

    def __post_init__(self):
        for name in ("setpoints", "achieved", "control", "iterations", "timed_out", "integral_peak"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        times = np.asarray(self.frame_times, dtype=float)
        times.setflags(write=False)
        object.__setattr__(self, "frame_times", times)

    @property
    def n_frames(self) -> int:
        return self.setpoints.shape[0]

    @property
    def errors(self) -> np.ndarray:
        """(T, 7) signed setpoint-minus-achieved errors."""
        return self.setpoints - self.achieved

    @property
    def e_t(self) -> np.ndarray:
        """Signed mean error over joints at each index."""
        return self.errors.mean(axis=1)

    @property
    def e_t_abs(self) -> np.ndarray:
        return np.abs(self.errors).mean(axis=1)

    @property
    def e_t_std(self) -> np.ndarray:
        """Population standard deviation of the joint errors at each index."""
        return self.errors.std(axis=1)

    @property
    def timeout_count(self) -> int:
        return int(self.timed_out.sum())

    def per_joint_rms(self) -> np.ndarray:
        return np.sqrt(np.mean(self.errors**2, axis=0))

    def rows(self):
        """Yield per-(t, joint) dict rows followed by a per-t summary row."""
        for t in range(self.n_frames):
            for j, name in enumerate(ANGLE_NAMES):
                yield {
                    "t": t,
                    "time": float(self.frame_times[t]),
                    "joint": name,
                    "setpoint": float(self.setpoints[t, j]),
                    "achieved": float(self.achieved[t, j]),
                    "error": float(self.setpoints[t, j] - self.achieved[t, j]),
                    "iterations": int(self.iterations[t, j]),
                    "control": float(self.control[t, j]),
                    "timed_out": bool(self.timed_out[t, j]),
                }
            yield {
                "t": t,
                "time": float(self.frame_times[t]),
                "joint": "all",
                "e_t": float(self.e_t[t]),
                "e_t_abs": float(self.e_t_abs[t]),
                "e_t_std": float(self.e_t_std[t]),
            }


def pid_step(
    error: float,
    prev_error: float,
    integral: float,
    cfg: ControllerConfig,
    measured: float,
) -> tuple[float, float]:
    """One PID update; returns (control output, new integral).

    The output is the measured angle plus the PID correction; the new
    integral accumulates error*dt and is clamped to +-integral_limit.
    """
    e_dot = (error - prev_error) / cfg.dt
    new_integral = integral + error * cfg.dt
    new_integral = min(max(new_integral, -cfg.integral_limit), cfg.integral_limit)
    output = measured + cfg.kp * error + cfg.ki * new_integral + cfg.kd * e_dot
    return output, new_integral


def _track(traj: AngleTrajectory, joints, cfg: ControllerConfig, mode: str) -> ExecutionTrace:
    T = traj.n_frames
    setpoints = traj.angles.T.copy()  # (T, 7)
    achieved = np.empty_like(setpoints)
    control = np.empty_like(setpoints)
    iterations = np.zeros((T, N_ANGLES), dtype=int)
    timed_out = np.zeros((T, N_ANGLES), dtype=bool)
    integral_peak = np.zeros((T, N_ANGLES))
    integral = np.zeros(N_ANGLES)

    def run_joint(t: int, j: int, theta_hat: float) -> float:
        """Drive joint j toward setpoints[t, j]; returns the final measurement."""
        target = setpoints[t, j]
        err = target - theta_hat
        prev = err  # zero derivative kick on the first iteration
        while True:
            u, integral[j] = pid_step(err, prev, integral[j], cfg, theta_hat)
            joints[j].command(u, cfg.dt)
            prev = err
            theta_hat = joints[j].measure()
            err = target - theta_hat
            iterations[t, j] += 1
            control[t, j] = u
            integral_peak[t, j] = max(integral_peak[t, j], abs(integral[j]))
            if abs(err) < cfg.epsilon:
                break
            if iterations[t, j] >= cfg.max_iters_per_setpoint:
                timed_out[t, j] = True
                break
        return theta_hat

    for t in range(T):
        if not cfg.carry_integral:
            integral[:] = 0.0
        if cfg.servicing == "literal":
            for j in range(N_ANGLES):
                achieved[t, j] = run_joint(t, j, joints[j].measure())
        else:
            theta_hat = np.array([joints[j].measure() for j in range(N_ANGLES)])
            err = setpoints[t] - theta_hat
            prev = err.copy()
            done = np.zeros(N_ANGLES, dtype=bool)
            while not done.all():
                for j in np.flatnonzero(~done):
                    u, integral[j] = pid_step(err[j], prev[j], integral[j], cfg, theta_hat[j])
                    joints[j].command(u, cfg.dt)
                    prev[j] = err[j]
                    theta_hat[j] = joints[j].measure()
                    err[j] = setpoints[t, j] - theta_hat[j]
                    iterations[t, j] += 1
                    control[t, j] = u
                    integral_peak[t, j] = max(integral_peak[t, j], abs(integral[j]))
                    if abs(err[j]) < cfg.epsilon:
                        done[j] = True
                    elif iterations[t, j] >= cfg.max_iters_per_setpoint:
                        timed_out[t, j] = True
                        done[j] = True
            achieved[t] = theta_hat
    return ExecutionTrace(
        setpoints=setpoints,
        achieved=achieved,
        control=control,
        iterations=iterations,
        timed_out=timed_out,
        integral_peak=integral_peak,
        frame_times=traj.frame_times,
        mode=mode,
        action_label=traj.action_label,
        config=cfg,
    )


def reproduce_motion(
    traj: AngleTrajectory,
    plants: Sequence[JointPlant],
    cfg: ControllerConfig = ControllerConfig(),
) -> ExecutionTrace:
    """Track a robot-side trajectory in closed loop against joint plants.

    Plant state carries across trajectory indices (the run continues from
    wherever each joint ended). Raises :class:`SetpointOutOfRangeError`
    before touching the plants if any setpoint violates a plant's limits.
    """
    if traj.side != "robot":
        raise ValueError(f"reproduce_motion needs a robot-side trajectory, got {traj.side!r}")
    if len(plants) != N_ANGLES:
        raise ValueError(f"expected {N_ANGLES} plants, got {len(plants)}")
    for j, plant in enumerate(plants):
        lo, hi = plant.limits
        row = traj.angles[j]
        if row.min() < lo or row.max() > hi:
            t_bad = int(np.argmax((row < lo) | (row > hi)))
            raise SetpointOutOfRangeError(
                f"setpoint {row[t_bad]:.3f} deg for {ANGLE_NAMES[j]} at index {t_bad} "
                f"outside plant limits ({lo}, {hi})"
            )
    return _track(traj, list(plants), cfg, mode="closed_loop")


def open_loop_track(
    traj: AngleTrajectory,
    start: Sequence[float],
    cfg: ControllerConfig = ControllerConfig(),
) -> ExecutionTrace:
    """Track a robot-side trajectory without a plant (outputs feed back as measurements).

    ``start`` is the assumed initial 7-vector of joint angles; after that,
    each joint's previous control output serves as its measurement.
    """
    if traj.side != "robot":
        raise ValueError(f"open_loop_track needs a robot-side trajectory, got {traj.side!r}")
    start = np.asarray(start, dtype=float)
    if start.shape != (N_ANGLES,):
        raise ValueError(f"start must have shape ({N_ANGLES},), got {start.shape}")
    joints = [_OpenLoopJoint(s) for s in start]
    return _track(traj, joints, cfg, mode="open_loop")


def average_error(trace: ExecutionTrace, t: int) -> float:
    """Signed mean over joints of (setpoint - achieved) at index t."""
    if not 0 <= t < trace.n_frames:
        raise IndexError(f"t={t} outside trace of length {trace.n_frames}")
    return float(np.mean(trace.setpoints[t] - trace.achieved[t]))


def average_abs_error(trace: ExecutionTrace, t: int) -> float:
    if not 0 <= t < trace.n_frames:
        raise IndexError(f"t={t} outside trace of length {trace.n_frames}")
    return float(np.mean(np.abs(trace.setpoints[t] - trace.achieved[t])))


def error_std(trace: ExecutionTrace, t: int) -> float:
    if not 0 <= t < trace.n_frames:
        raise IndexError(f"t={t} outside trace of length {trace.n_frames}")
    return float(np.std(trace.setpoints[t] - trace.achieved[t]))
