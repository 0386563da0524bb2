"""Exact and floating-point convex geometry for zonotopes, polygons and ellipsoids,
with a registry of named inequality checks and seeded falsification campaigns."""

from .checks import REGISTRY, check_json, list_checks, run_check
from .ellipsoid import EllipsoidL2, oplus2
from .numerics import CapExceeded, DegenerateError, Mode, ModeError
from .polygon2d import ConvexPolygon, area, minkowski_sum, mixed_area
from .result import CheckResult
from .search import Campaign, repro, run_campaign
from .steiner import SteinerPoly, all_roots_real, flat_disk_steiner
from .zonotope import (
    Parallelotope,
    Zonotope,
    mixed_volume,
    projection_volume,
    steiner3,
    surface_area,
    volume,
)

__all__ = [
    "REGISTRY",
    "CapExceeded",
    "Campaign",
    "CheckResult",
    "ConvexPolygon",
    "DegenerateError",
    "EllipsoidL2",
    "Mode",
    "ModeError",
    "Parallelotope",
    "SteinerPoly",
    "Zonotope",
    "all_roots_real",
    "area",
    "check_json",
    "flat_disk_steiner",
    "list_checks",
    "minkowski_sum",
    "mixed_area",
    "mixed_volume",
    "oplus2",
    "projection_volume",
    "repro",
    "run_campaign",
    "run_check",
    "steiner3",
    "surface_area",
    "volume",
]
