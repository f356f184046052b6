"""Compile, check and simulate multimodal robot tour choreographies.

Thin wrapper over the C++ core. Documents go in and come out as dicts;
errors raise ChoreoError with args (code, message).
"""

import json

from . import _choreo
from ._choreo import ChoreoError, PlacementInfeasible

__all__ = [
    "ChoreoError",
    "PlacementInfeasible",
    "load_library",
    "compile_tour",
    "default_config",
    "validate_timeline",
    "apply_nudge",
    "emit",
    "load_timeline",
    "simulate",
    "solve_placement",
    "gimbal_angles",
]


def _dump(doc):
    if doc is None:
        return ""
    return doc if isinstance(doc, str) else json.dumps(doc)


def load_library(library_dir):
    return json.loads(_choreo.load_library(str(library_dir)))


def compile_tour(library_dir, tour_file, config=None, variant=None):
    """Returns {"summary": ..., "timeline": ...}."""
    out = _choreo.compile_tour(str(library_dir), str(tour_file), _dump(config), variant or "")
    return json.loads(out)


def default_config():
    return json.loads(_choreo.default_config())


def validate_timeline(timeline):
    return json.loads(_choreo.validate_timeline(_dump(timeline)))


def apply_nudge(timeline, event_id, delta_ms):
    return json.loads(_choreo.apply_nudge(_dump(timeline), event_id, int(delta_ms)))


def emit(timeline, out_dir):
    return _choreo.emit(_dump(timeline), str(out_dir))


def load_timeline(timeline_dir):
    return json.loads(_choreo.load_timeline(str(timeline_dir)))


def simulate(timeline, seed=0, jitter_ms=0, epsilon_ms=1.0):
    """jitter_ms is one bound for every channel or a dict keyed by channel."""
    if isinstance(jitter_ms, dict):
        bounds = [int(jitter_ms.get(k, 0)) for k in ("speech", "visual", "gesture")]
    else:
        bounds = [int(jitter_ms)] * 3
    return json.loads(_choreo.simulate(_dump(timeline), seed, *bounds, epsilon_ms))


def solve_placement(scene, config=None):
    return json.loads(_choreo.solve_placement(_dump(scene), _dump(config)))


def gimbal_angles(projector, height, heading, target):
    """(pan, tilt) in radians."""
    return _choreo.gimbal_angles(tuple(projector), height, heading, tuple(target))
