"""Python bindings for the ringbot simulator, vision pipeline and link codec."""

from ._core import (
    CameraIntrinsics,
    CameraMount,
    ConfigError,
    MalformedPacket,
    NoPathError,
    SimConfig,
    astar,
    camera_to_robot,
    decode_brain,
    decode_jetson,
    detect_rings,
    encode_brain,
    encode_jetson,
    greedy_policy,
    initial_observation,
    localize,
    pixel_to_camera,
    rgb_to_hsv,
    run_episode,
)

__all__ = [
    "CameraIntrinsics",
    "CameraMount",
    "ConfigError",
    "MalformedPacket",
    "NoPathError",
    "SimConfig",
    "astar",
    "camera_to_robot",
    "decode_brain",
    "decode_jetson",
    "detect_rings",
    "encode_brain",
    "encode_jetson",
    "greedy_policy",
    "initial_observation",
    "localize",
    "pixel_to_camera",
    "rgb_to_hsv",
    "run_episode",
]
