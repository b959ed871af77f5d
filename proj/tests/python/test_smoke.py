import math

import numpy as np
import pytest

import ringbot


def test_worked_projection():
    k = ringbot.CameraIntrinsics(fx=1.0, fy=1.0, cx=0.0, cy=0.0)
    assert ringbot.pixel_to_camera(220, 380, 1.2, k) == pytest.approx((264.0, 456.0, 1.2))


def test_localize_level_camera():
    k = ringbot.CameraIntrinsics(600, 600, 320, 240)
    mount = ringbot.CameraMount(tilt=0.0, height=0.3, forward_offset=0.1)
    x, z = ringbot.localize(320, 240, 2.0, k, mount)
    assert x == pytest.approx(0.0)
    assert z == pytest.approx(2.1)


def test_hsv_and_detection():
    assert ringbot.rgb_to_hsv(150, 70, 200) == (138, 166, 200)
    img = np.zeros((120, 160, 3), dtype=np.uint8)
    yy, xx = np.mgrid[0:120, 0:160]
    r = np.hypot(xx - 80, yy - 60)
    img[(r <= 20) & (r >= 10)] = (150, 70, 200)
    depth = np.full((120, 160), 1.5, dtype=np.float32)
    out = ringbot.detect_rings(img, depth)
    assert out["accepted"] == 1
    (u, v, d), = out["detections"]
    assert math.hypot(u - 80, v - 60) < 2
    assert d == pytest.approx(1.5)


def test_episode_timing_and_config():
    cfg = ringbot.SimConfig()
    assert cfg.game_length == pytest.approx(105.0)
    summary = ringbot.run_episode(cfg, "zero", "zero")
    assert summary["steps"] == 1260
    assert summary["red"]["ring"] == 0
    again = ringbot.SimConfig.from_json(cfg.to_json())
    assert again.episode_steps == 1260
    with pytest.raises(ringbot.ConfigError):
        ringbot.SimConfig.from_json('{"dt": 0}')


def test_greedy_saturates():
    summary = ringbot.run_episode(ringbot.SimConfig(), "greedy", "zero")
    assert summary["red"]["ring"] == 50


def test_observation_and_greedy():
    obs = ringbot.initial_observation(ringbot.SimConfig(), "red")
    assert len(obs) == 27
    assert all(-1 <= v <= 1 for v in obs)
    assert ringbot.greedy_policy([0.0] * 27) == (0.0, 0.5)


def test_astar():
    grid = np.zeros((10, 10), dtype=bool)
    cells, cost = ringbot.astar(grid, (0, 0), (9, 9))
    assert len(cells) == 10
    assert cost == pytest.approx(9 * math.sqrt(2) * 0.1)
    grid[5, 5] = True
    with pytest.raises(ringbot.NoPathError):
        ringbot.astar(grid, (0, 0), (5, 5))


def test_codec():
    line = ringbot.encode_brain(1.5, -0.25, 3.14159, 42.5, 17)
    assert line == "B 1.5 -0.25 3.14159 42.5 17\n"
    assert ringbot.decode_brain(line) == (1.5, -0.25, 3.14159, 42.5, 17)
    assert ringbot.decode_jetson(ringbot.encode_jetson(0.5, -1.0, 3)) == (0.5, -1.0, 3)
    with pytest.raises(ringbot.MalformedPacket):
        ringbot.decode_brain("B 1 2 3\n")
    with pytest.raises(ValueError):
        ringbot.encode_jetson(2.0, 0.0, 0)
