"""headbox: pedestrian head/face anonymization post-processing toolkit.

Infers head boxes from body-pose skeletons, fuses them with face-detector
boxes, tracks them over time, anonymizes the image regions, and evaluates
detection quality with a dual face/head criterion. Everything operates on
serialized detections; no neural network is embedded.
"""

__version__ = "0.1.0"

from .anonymize import AnonymizeConfig, AnonymizeMethod, anonymize_frame
from .assignment import FORBIDDEN, solve_assignment
from .evaluation import (
    EvalConfig,
    EvalReport,
    LabeledFrame,
    LabelValidationError,
    associate_labels,
    evaluate_frame,
    evaluate_sequence,
    face_criterion,
    head_criterion,
    missing_rate_curve,
    threshold_sweep,
)
from .formats import (
    SchemaError,
    load_detections,
    load_labels,
    load_poses,
    save_detections,
    save_labels,
    save_poses,
)
from .fusion import FusionConfig, FusionStrategy, face_within_head, fuse
from .geometry import (
    BBox,
    Detection,
    Keypoint,
    Pose,
    Source,
    center_distance,
    containment_ratio,
    intersect_area,
    iou,
)
from .headinfer import HeadInferenceParams, infer_head, infer_heads, torso_length
from .pipeline import ConfigError, PipelineConfig, ToolkitConfig, run_pipeline
from .synthetic import FaceDetectorModel, PoseModel, ScenarioConfig, generate, write_scene
from .tracking import Tracker, TrackerConfig, associate, track_frames

__all__ = [name for name in dir() if not name.startswith("_")]
