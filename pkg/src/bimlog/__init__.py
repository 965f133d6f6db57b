"""Enhanced BIM event logs: geometry text codec, model store, replay and diff."""

from .codec import (
    Command,
    LogEvent,
    LogFormatError,
    dumps_log,
    loads_log,
    parse_event,
    parse_geometry,
    read_log,
    serialize_geometry,
    write_log,
)
from .diff import DiffReport, diff_models
from .elements import Category, ElementRef, Subtype
from .errors import BimLogError
from .geometry import (
    Arc,
    CurveLoop,
    CylindricalHelix,
    Ellipse,
    HermiteSpline,
    Line,
    LocationPoint,
    NurbsSpline,
    Point3,
    Profile,
    curve_length,
    evaluate_curve,
)
from .loops import loop_area, loop_centroid
from .model import ModelState
from .replay import ReplayReport, replay_log
from .sim import AddStep, DeleteStep, ModifyStep, random_scenario, run_scenario

__version__ = "0.1.0"
