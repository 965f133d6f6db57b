"""Simulated authoring sessions.

A scenario is a list of add/modify/delete steps over scenario-local tags.
``run_scenario`` executes it against a ground-truth model and emits the log a
logger would have recorded; ``random_scenario`` produces seeded scenarios of a
requested final size with extra modification and add/delete traffic.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .codec import Command, LogEvent, parse_geometry, quantize_geometry, quantize_real, serialize_geometry
from .elements import (
    CATEGORIES,
    COMMENTS,
    HOSTED_CATEGORIES,
    REAL_PARAMS,
    Category,
    ElementRef,
    ParamValue,
    Subtype,
    category_of,
    subtype_of,
)
from .errors import BimLogError, ScenarioError
from .geometry import (
    Arc,
    Curve,
    CurveLoop,
    CylindricalHelix,
    Ellipse,
    GeometricBase,
    HermiteSpline,
    Line,
    LocationPoint,
    NurbsSpline,
    Point3,
    Profile,
    TWO_PI,
    Z_AXIS,
    evaluate_curve,
)
from .loops import polygon_loop
from .model import ModelState

DEFAULT_FIRST_ID = 1001
VILLA_COUNTS = (97, 8, 8, 19, 27)
VILLA_EVENTS = 2836
# fraction of noise events that brings 159 net elements to about 2,836 events
VILLA_CHURN = 1.0 - sum(VILLA_COUNTS) / VILLA_EVENTS

SITE = 80.0  # placement box edge; element extents stay inside 100 m
LEVELS = (0.0, 3.2, 6.4)


@dataclass(frozen=True)
class AddStep:
    tag: str
    category: Category
    subtype: Subtype
    geometry: GeometricBase
    params: Mapping[str, ParamValue] = field(default_factory=dict)
    host_tag: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "category", category_of(self.category))
        object.__setattr__(self, "subtype", subtype_of(self.subtype))


@dataclass(frozen=True)
class ModifyStep:
    tag: str
    geometry: GeometricBase | None = None
    params: Mapping[str, ParamValue] = field(default_factory=dict)


@dataclass(frozen=True)
class DeleteStep:
    tag: str


ScenarioStep = Union[AddStep, ModifyStep, DeleteStep]


def run_scenario(
    steps: Sequence[ScenarioStep], first_id: int = DEFAULT_FIRST_ID
) -> tuple[list[LogEvent], ModelState]:
    """Execute ``steps`` on a fresh ground-truth model, logging one event per step.

    Logged element ids are the ground-truth ids, which start at ``first_id``.
    """
    model = ModelState(first_id)
    bound: dict[str, int] = {}
    tags: dict[int, str] = {}
    events: list[LogEvent] = []
    for idx, step in enumerate(steps):
        seq = len(events) + 1
        if COMMENTS in getattr(step, "params", {}):
            raise ScenarioError(f"step {idx}: {COMMENTS} is reserved for replay")
        try:
            if isinstance(step, AddStep):
                if step.tag in bound:
                    raise ScenarioError(f"step {idx}: tag {step.tag!r} is already bound")
                host = None
                if step.host_tag is not None:
                    if step.host_tag not in bound:
                        raise ScenarioError(f"step {idx}: host tag {step.host_tag!r} is not bound")
                    host = bound[step.host_tag]
                eid = model.add_element(step.category, step.subtype, step.geometry, step.params, host)
                bound[step.tag], tags[eid] = eid, step.tag
                rec = model.elements[eid]
                params = tuple((k, v) for k, v in rec.params.items() if k != COMMENTS)
                events.append(LogEvent(seq, Command.ADDED, eid, rec.category, rec.subtype, rec.geometry, params, host))
            elif isinstance(step, ModifyStep):
                if step.tag not in bound:
                    raise ScenarioError(f"step {idx}: tag {step.tag!r} is not bound to a live element")
                if step.geometry is None and not step.params:
                    raise ScenarioError(f"step {idx}: modify step changes nothing")
                eid = bound[step.tag]
                model.patch_element(eid, step.geometry, step.params)
                rec = model.elements[eid]
                events.append(
                    LogEvent(seq, Command.MODIFIED, eid, rec.category, rec.subtype, step.geometry, dict(step.params))
                )
            elif isinstance(step, DeleteStep):
                if step.tag not in bound:
                    raise ScenarioError(f"step {idx}: tag {step.tag!r} is not bound to a live element")
                eid = bound[step.tag]
                rec = model.elements[eid]
                for rid in model.remove_element(eid):
                    del bound[tags.pop(rid)]
                events.append(LogEvent(seq, Command.DELETED, eid, rec.category, rec.subtype))
            else:
                raise ScenarioError(f"step {idx}: unknown step {step!r}")
        except ScenarioError:
            raise
        except BimLogError as exc:
            raise ScenarioError(f"step {idx}: {exc}") from exc
    return events, model


# -- random scenarios ---------------------------------------------------------------


def _q(x: float) -> float:
    return quantize_real(x)


class _Shapes:
    """Seeded generators for building-scale geometry and parameters."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def u(self, a: float, b: float) -> float:
        return _q(self.rng.uniform(a, b))

    def site_point(self, z: float | None = None) -> Point3:
        z = self.rng.choice(LEVELS) if z is None else z
        return Point3(self.u(10.0, SITE), self.u(10.0, SITE), z)

    def heading(self) -> tuple[Point3, Point3]:
        phi = self.rng.uniform(0.0, TWO_PI)
        return Point3(math.cos(phi), math.sin(phi), 0.0), Point3(-math.sin(phi), math.cos(phi), 0.0)

    def wall_curve(self) -> Curve:
        r = self.rng.random()
        s = self.site_point()
        d, n = self.heading()
        length = self.rng.uniform(1.0, 10.0)
        if r < 0.5:
            return Line(s, s + d * length)
        if r < 0.65:
            a0 = self.rng.uniform(0.0, TWO_PI)
            return Arc(s, self.u(1.0, 10.0), a0, a0 + self.rng.uniform(0.3, math.pi))
        if r < 0.75:
            rx = self.rng.uniform(1.0, 10.0)
            t0 = self.rng.uniform(0.0, math.pi)
            return Ellipse(s, rx, self.rng.uniform(0.5, rx), d, n, t0, t0 + self.rng.uniform(0.3, math.pi))
        if r < 0.85:
            degree = self.rng.choice((2, 3))
            count = degree + 1 + self.rng.randrange(3)
            pts = [s + d * (length * i / (count - 1)) + n * self.rng.uniform(-1.0, 1.0) for i in range(count)]
            inner = count - degree - 1
            knots = [0.0] * (degree + 1) + [(i + 1) / (inner + 1) for i in range(inner)] + [1.0] * (degree + 1)
            weights = [self.rng.uniform(0.5, 2.0) for _ in range(count)]
            return NurbsSpline(degree, tuple(knots), tuple(pts), tuple(weights))
        if r < 0.95:
            count = 3 + self.rng.randrange(3)
            pts = [s + d * (length * i / (count - 1)) + n * self.rng.uniform(-1.0, 1.0) for i in range(count)]
            tangents = None
            if self.rng.random() < 0.3:
                tangents = tuple(d * self.rng.uniform(0.5, 3.0) for _ in range(count))
            return HermiteSpline(tuple(pts), False, tangents)
        a0 = self.rng.uniform(0.0, math.pi)
        return CylindricalHelix(s, self.u(1.0, 5.0), d, Z_AXIS, self.u(0.5, 3.0), a0, a0 + self.rng.uniform(0.5, TWO_PI))

    def wall_profile(self) -> Profile:
        s = self.site_point(0.0)
        d, _ = self.heading()
        length, height = self.rng.uniform(2.0, 10.0), self.rng.uniform(2.5, 8.0)
        at = lambda u, v: s + d * u + Z_AXIS * v
        outer = [at(0, 0), at(length, 0), at(length, height)]
        if self.rng.random() < 0.5:
            outer.append(at(length / 2, height + self.rng.uniform(0.5, 2.0)))
        outer.append(at(0, height))
        u0, v0 = self.rng.uniform(0.2, 0.5) * length, self.rng.uniform(0.15, 0.4) * height
        w, h = self.rng.uniform(0.1, 0.3) * length, self.rng.uniform(0.1, 0.4) * height
        hole = [at(u0, v0), at(u0 + w, v0), at(u0 + w, v0 + h), at(u0, v0 + h)]
        return Profile((polygon_loop(outer), polygon_loop(hole)))

    def floor_loop(self) -> CurveLoop:
        z = self.rng.choice(LEVELS)
        x0, y0 = self.u(10.0, SITE), self.u(10.0, SITE)
        w, h = self.u(2.0, 10.0), self.u(2.0, 10.0)
        p = lambda x, y: Point3(x, y, z)
        a, b, c, e = p(x0, y0), p(x0 + w, y0), p(x0 + w, y0 + h), p(x0, y0 + h)
        r = self.rng.random()
        if r < 0.4:
            return polygon_loop([a, b, c, e])
        if r < 0.55:
            cx, cy = x0 + self.rng.uniform(0.3, 0.7) * w, y0 + self.rng.uniform(0.3, 0.7) * h
            return polygon_loop([a, b, p(x0 + w, cy), p(cx, cy), p(cx, y0 + h), e])
        if r < 0.8:
            bulge = Arc(p(x0 + w / 2, y0 + h), w / 2, 0.0, math.pi)
            return CurveLoop((Line(a, b), Line(b, c), bulge, Line(e, a)))
        wiggle = [p(x0 + w * i / 3, y0 + self.rng.uniform(-0.2, 0.2) * h * (0 < i < 3)) for i in range(4)]
        wiggle[0], wiggle[-1] = a, b
        if r < 0.9:
            edge = HermiteSpline(tuple(wiggle))
        else:
            edge = NurbsSpline(2, (0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0), tuple(wiggle), (1.0, 0.8, 1.2, 1.0))
        return CurveLoop((edge, Line(b, c), Line(c, e), Line(e, a)))

    def geometry(self, subtype: Subtype, host: GeometricBase | None = None) -> GeometricBase:
        if subtype is Subtype.RECT_WALL:
            g = self.wall_curve()
        elif subtype is Subtype.PROFILE_WALL:
            g = self.wall_profile()
        elif subtype in (Subtype.FLAT_FLOOR, Subtype.SLOPED_FLOOR):
            g = self.floor_loop()
        elif subtype is Subtype.HOSTED_INSTANCE:
            g = LocationPoint(self.on_host(host))
        elif subtype is Subtype.FREE_COLUMN:
            g = LocationPoint(self.site_point())
        else:
            base = self.site_point()
            top = base + Point3(self.rng.uniform(-0.5, 0.5), self.rng.uniform(-0.5, 0.5), self.rng.uniform(2.5, 4.0))
            g = Line(base, top)
        return quantize_geometry(g)

    def on_host(self, host: GeometricBase | None) -> Point3:
        if isinstance(host, Curve):
            return evaluate_curve(host, self.rng.uniform(0.2, 0.8))
        if isinstance(host, Profile):
            edge = host.outer.curves[0]
            return evaluate_curve(edge, self.rng.uniform(0.2, 0.8))
        return self.site_point()

    def params(self, category: Category, subtype: Subtype, partial: bool = False) -> dict[str, float]:
        u = self.u
        if category is Category.WALL:
            full = {"Height": u(2.4, 6.0), "Width": u(0.1, 0.5), "BaseOffset": u(0.0, 0.5)}
        elif category is Category.FLOOR:
            full = {"Thickness": u(0.1, 0.5)}
            full["SlopeAngle"] = u(0.05, 0.3) if subtype is Subtype.SLOPED_FLOOR else 0.0
        elif category is Category.WINDOW:
            full = {"Width": u(0.5, 2.5), "Height": u(0.5, 2.0), "SillHeight": u(0.3, 1.2)}
        elif category is Category.DOOR:
            full = {"Width": u(0.7, 1.5), "Height": u(2.0, 2.6), "SillHeight": 0.0}
        else:
            full = {"b": u(0.2, 0.8), "h": u(0.2, 0.8), "Height": u(2.5, 4.5)}
        if not partial:
            return full
        names = [k for k in full if not (k == "SlopeAngle" and subtype is not Subtype.SLOPED_FLOOR)]
        picked = self.rng.sample(names, self.rng.randint(1, min(2, len(names))))
        return {k: full[k] for k in names if k in picked}

    def subtype(self, category: Category) -> Subtype:
        r = self.rng.random()
        if category is Category.WALL:
            return Subtype.RECT_WALL if r < 0.8 else Subtype.PROFILE_WALL
        if category is Category.FLOOR:
            return Subtype.FLAT_FLOOR if r < 0.7 else Subtype.SLOPED_FLOOR
        if category is Category.COLUMN:
            return Subtype.FREE_COLUMN if r < 0.7 else Subtype.SLANTED_COLUMN
        return Subtype.HOSTED_INSTANCE


@dataclass
class _Slot:
    category: Category
    subtype: Subtype
    geometry: GeometricBase
    host_tag: str | None
    permanent: bool


_TAG_PREFIX = {Category.WALL: "w", Category.FLOOR: "f", Category.WINDOW: "win", Category.DOOR: "d", Category.COLUMN: "c"}


def normalize_counts(net_counts) -> dict[Category, int]:
    """Accept a mapping keyed by category (or name) or a 5-sequence in Wall, Floor, Window, Door, Column order."""
    if isinstance(net_counts, Mapping):
        counts = {c: 0 for c in CATEGORIES}
        for k, v in net_counts.items():
            counts[category_of(k)] = v
    else:
        seq = list(net_counts)
        if len(seq) != len(CATEGORIES):
            raise ScenarioError(f"expected {len(CATEGORIES)} counts (walls, floors, windows, doors, columns), got {len(seq)}")
        counts = dict(zip(CATEGORIES, seq))
    for c, n in counts.items():
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise ScenarioError(f"count for {c} must be a non-negative integer, got {n!r}")
    return counts


def random_scenario(seed: int, net_counts, churn: float = 0.0) -> list[ScenarioStep]:
    """Seeded scenario whose final model holds exactly ``net_counts`` elements per category.

    ``churn`` in [0, 1) is the fraction of events that are noise: the scenario
    has ``round(net / (1 - churn))`` events, the extra ones being parameter and
    geometry modifications plus elements that are added and later deleted.
    Hosted windows and doors of the final model sit on walls that survive.
    """
    counts = normalize_counts(net_counts)
    churn = float(churn)
    if not 0.0 <= churn < 1.0:
        raise ScenarioError(f"churn must be in [0, 1), got {churn}")
    hosted = sum(counts[c] for c in HOSTED_CATEGORIES)
    if hosted and counts[Category.WALL] == 0:
        raise ScenarioError("windows and doors need at least one wall")

    rng = random.Random(seed)
    gen = _Shapes(rng)
    net = sum(counts.values())
    budget = round(net / (1.0 - churn)) - net if net else 0
    queue = [c for c in CATEGORIES for _ in range(counts[c])]
    rng.shuffle(queue)
    if hosted:
        queue.insert(0, queue.pop(queue.index(Category.WALL)))

    steps: list[ScenarioStep] = []
    live: dict[str, _Slot] = {}
    transient: set[str] = set()
    serial = {c: 0 for c in CATEGORIES}

    def add(category: Category, permanent: bool) -> None:
        subtype = gen.subtype(category)
        host_tag = None
        if category in HOSTED_CATEGORIES:
            walls = sorted(t for t, s in live.items() if s.category is Category.WALL and (s.permanent or not permanent))
            host_tag = rng.choice(walls)
        geometry = gen.geometry(subtype, live[host_tag].geometry if host_tag else None)
        serial[category] += 1
        tag = f"{_TAG_PREFIX[category]}{serial[category]}"
        live[tag] = _Slot(category, subtype, geometry, host_tag, permanent)
        if not permanent:
            transient.add(tag)
        steps.append(AddStep(tag, category, subtype, geometry, gen.params(category, subtype), host_tag))

    def delete(tag: str) -> None:
        gone = [tag] + [t for t, s in live.items() if s.host_tag == tag]
        for t in gone:
            del live[t]
            transient.discard(t)
        steps.append(DeleteStep(tag))

    def modify() -> None:
        tag = rng.choice(sorted(live))
        slot = live[tag]
        if rng.random() < 0.6:
            steps.append(ModifyStep(tag, params=gen.params(slot.category, slot.subtype, partial=True)))
        else:
            host = live[slot.host_tag].geometry if slot.host_tag else None
            slot.geometry = gen.geometry(slot.subtype, host)
            steps.append(ModifyStep(tag, geometry=slot.geometry))

    while queue or budget > 0:
        free = budget - len(transient)
        if queue and (free <= 0 or not live or rng.random() < len(queue) / (len(queue) + free)):
            add(queue.pop(0), permanent=True)
            continue
        if free <= 0:
            if not transient:
                break
            delete(rng.choice(sorted(transient)))
            budget -= 1
            continue
        r = rng.random()
        if free >= 2 and r < 0.15:
            has_wall = any(s.category is Category.WALL for s in live.values())
            choices = [c for c in CATEGORIES if has_wall or c not in HOSTED_CATEGORIES]
            add(rng.choice(choices), permanent=False)
            budget -= 1
        elif transient and r < 0.3:
            delete(rng.choice(sorted(transient)))
            budget -= 1
        elif live:
            modify()
            budget -= 1
        elif free >= 2:
            add(rng.choice([c for c in CATEGORIES if c not in HOSTED_CATEGORIES]), permanent=False)
            budget -= 1
        else:
            break
    return steps


# -- scenario files -----------------------------------------------------------------


def _param_to_json(v: ParamValue):
    return {"ref": v.id} if isinstance(v, ElementRef) else v


def _param_from_json(name: str, v) -> ParamValue:
    if isinstance(v, dict) and set(v) == {"ref"}:
        return ElementRef(v["ref"])
    if isinstance(v, (bool, str)):
        return v
    if isinstance(v, (int, float)):
        return float(v) if name in REAL_PARAMS else v
    raise ScenarioError(f"unsupported parameter value for {name}: {v!r}")


def scenario_to_json(steps: Sequence[ScenarioStep]) -> list[dict]:
    out = []
    for s in steps:
        if isinstance(s, AddStep):
            out.append(
                {
                    "kind": "add",
                    "tag": s.tag,
                    "category": s.category.value,
                    "subtype": s.subtype.value,
                    "geometry": serialize_geometry(s.geometry),
                    "params": {k: _param_to_json(v) for k, v in s.params.items()},
                    "hostTag": s.host_tag,
                }
            )
        elif isinstance(s, ModifyStep):
            out.append(
                {
                    "kind": "modify",
                    "tag": s.tag,
                    "geometry": serialize_geometry(s.geometry) if s.geometry is not None else None,
                    "params": {k: _param_to_json(v) for k, v in s.params.items()},
                }
            )
        else:
            out.append({"kind": "delete", "tag": s.tag})
    return out


def dumps_scenario(steps: Sequence[ScenarioStep]) -> str:
    return json.dumps(scenario_to_json(steps), indent=2) + "\n"


def scenario_from_json(doc) -> list[ScenarioStep]:
    if not isinstance(doc, list):
        raise ScenarioError("a scenario file holds a JSON list of steps")
    steps: list[ScenarioStep] = []
    for idx, item in enumerate(doc):
        try:
            kind = item["kind"]
            params = {k: _param_from_json(k, v) for k, v in (item.get("params") or {}).items()}
            geometry = parse_geometry(item["geometry"]) if item.get("geometry") else None
            if kind == "add":
                steps.append(
                    AddStep(item["tag"], item["category"], item["subtype"], geometry, params, item.get("hostTag"))
                )
            elif kind == "modify":
                steps.append(ModifyStep(item["tag"], geometry, params))
            elif kind == "delete":
                steps.append(DeleteStep(item["tag"]))
            else:
                raise ScenarioError(f"unknown step kind {kind!r}")
        except ScenarioError as exc:
            raise ScenarioError(f"step {idx}: {exc}") from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"step {idx}: malformed step: {exc}") from exc
    return steps


def loads_scenario(text: str) -> list[ScenarioStep]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file is not JSON: {exc}") from exc
    return scenario_from_json(doc)
