"""Metric/imperial conversion of logged events."""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable

from .codec import LogEvent, format_params, parse_geometry, parse_params, serialize_geometry
from .elements import LENGTH_PARAMS, ParamValue
from .geometry import FEET_TO_METERS, scale_geometry

METERS_TO_FEET = 1.0 / FEET_TO_METERS


def scale_params(params: Iterable[tuple[str, ParamValue]], factor: float) -> tuple[tuple[str, ParamValue], ...]:
    """Scale length-valued canonical parameters; leave everything else alone."""
    out = []
    for name, v in params:
        if name in LENGTH_PARAMS and isinstance(v, (int, float)) and not isinstance(v, bool):
            v = float(v) * factor
        out.append((name, v))
    return tuple(out)


def scale_event(e: LogEvent, factor: float) -> LogEvent:
    geometry = scale_geometry(e.geometry, factor) if e.geometry is not None else None
    return replace(e, geometry=geometry, params=scale_params(e.params, factor))


def unit_roundtrip_event(e: LogEvent) -> LogEvent:
    """Convert to feet, write and read back at 9 significant digits, convert to meters."""
    ft = scale_event(e, METERS_TO_FEET)
    # closure is checked after converting back; feet coordinates are coarser than the meter tolerance
    g = parse_geometry(serialize_geometry(ft.geometry), validate=False) if ft.geometry is not None else None
    params = parse_params(format_params(ft.params))
    return scale_event(replace(ft, geometry=g, params=params), FEET_TO_METERS)


def unit_roundtrip_events(events: Iterable[LogEvent]) -> list[LogEvent]:
    return [unit_roundtrip_event(e) for e in events]

