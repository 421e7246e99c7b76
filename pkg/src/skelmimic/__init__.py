"""skelmimic: human skeleton demonstrations to robot joint-angle trajectories.

The toolkit covers the whole chain: parsing recorded skeleton sequences,
extracting the seven upper-body joint angles, mapping them into a robot's
joint ranges, executing the result with a simulated PID position
controller, and reporting reproduction error -- plus noisy-frame
detection and annotation handling for cleaning demonstrations.
"""

from .annotations import (
    AnnotationSet,
    AnnotationValidationError,
    EmptySegmentError,
    NoiseDetectorConfig,
    Segment,
    apply_annotations,
    detect_noisy_frames,
)
from .config import ToolkitConfig, load_config
from .control import (
    ControllerConfig,
    ExecutionTrace,
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
from .fixtures import MOVES, generate_fixtures, generate_move, inject_jump
from .joints import ANGLE_NAMES, AngleJointId, JointId, SKELETON_LINKS
from .limits import HUMAN_LIMITS, JointLimitTable, LimitTableMismatchError, QTROBOT_LIMITS
from .pipeline import ActionFailure, ActionRun, PipelineReport, export_report, run_pipeline
from .recordings import (
    OrderError,
    ParseError,
    SchemaError,
    load_angle_csv,
    load_recording,
    save_angle_csv,
    save_recording,
)
from .retarget import (
    GuardResult,
    QTROBOT_MODEL,
    RobotModel,
    UnresolvableCollisionError,
    forward_kinematics,
    map_angle,
    map_trajectory,
    self_collision_guard,
)
from .skeleton import (
    AngleTrajectory,
    DegenerateLinkError,
    EmptyAfterFilteringError,
    SkeletonFrame,
    SkeletonSequence,
    angle_between,
    extract_angles,
    extract_trajectory,
    link,
)

__version__ = "0.1.0"
