"""Runtime configuration: robot model, limit tables, controller and plant settings.

Everything ships with working defaults; a JSON config file overrides any
subset of them:

    {
      "human_limits": {"RE": [4.3, 142.6], ...},
      "robot": {"name": "...", "limits": {...}, "link_lengths": {...},
                "body_volume": {"center": [...], "half_extents": [...]}},
      "controller": {"kp": 0.8, "ki": 0.05, "kd": 0.01, "epsilon": 0.5,
                     "dt": 0.033, "max_iters_per_setpoint": 200,
                     "integral_limit": 50.0, "carry_integral": false,
                     "servicing": "interleaved"},
      "plant": {"response_alpha": 0.6, "rate_limit": 90.0,
                "measurement_noise_std": 0.0},
      "detector": {"jump_threshold": 0.5, "per_joint": true, "window": 1},
      "guard": false
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .annotations import NoiseDetectorConfig
from .control import ControllerConfig, PlantSettings
from .limits import HUMAN_LIMITS, JointLimitTable
from .retarget import QTROBOT_MODEL, RobotModel

__all__ = ["ToolkitConfig", "load_config"]


@dataclass(frozen=True)
class ToolkitConfig:
    human_limits: JointLimitTable = HUMAN_LIMITS
    robot: RobotModel = QTROBOT_MODEL
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    plant: PlantSettings = field(default_factory=PlantSettings)
    detector: NoiseDetectorConfig = field(default_factory=NoiseDetectorConfig)
    guard: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ToolkitConfig":
        kwargs = {}
        if "human_limits" in data:
            kwargs["human_limits"] = JointLimitTable.from_dict("human", data["human_limits"])
        if "robot" in data:
            kwargs["robot"] = RobotModel.from_dict(data["robot"])
        if "controller" in data:
            kwargs["controller"] = ControllerConfig.from_dict(data["controller"])
        if "plant" in data:
            kwargs["plant"] = PlantSettings.from_dict(data["plant"])
        if "detector" in data:
            kwargs["detector"] = NoiseDetectorConfig.from_dict(data["detector"])
        if "guard" in data:
            kwargs["guard"] = bool(data["guard"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "human_limits": self.human_limits.to_dict(),
            "robot": self.robot.to_dict(),
            "controller": self.controller.to_dict(),
            "plant": self.plant.to_dict(),
            "detector": self.detector.to_dict(),
            "guard": self.guard,
        }


def load_config(path=None) -> ToolkitConfig:
    """Load a JSON config file, or the defaults when ``path`` is None."""
    if path is None:
        return ToolkitConfig()
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return ToolkitConfig.from_dict(data)
