"""In-memory parametric building model.

Elements are stored by id in a ``ModelState``. Every element carries the
canonical parameter set of its category; the ``Comments`` parameter doubles as
the link from a replayed element back to the id it had when it was logged, and
the model keeps an index over it.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from typing import Mapping

from .codec import format_params, parse_geometry, parse_params, serialize_geometry
from .elements import (
    CANONICAL_PARAMS,
    CATEGORIES,
    COMMENTS,
    REAL_PARAMS,
    SUBTYPES_BY_CATEGORY,
    Category,
    ElementRef,
    ParamValue,
    Subtype,
    category_of,
    subtype_of,
)
from .errors import ElementReferenceError, FormatError, SchemaError, ValidationError
from .geometry import (
    Curve,
    CurveLoop,
    GeometricBase,
    Line,
    LocationPoint,
    Point3,
    Profile,
    curve_length,
    evaluate_curve,
)
from .loops import loop_area, loop_centroid, profile_area, validate_geometry

DUMP_SCHEMA = "bimlog.model"
DUMP_VERSION = 1

_DECIMAL_ID = re.compile(r"[0-9]+\Z")


@dataclass(frozen=True)
class ElementRecord:
    """A live building element. Treat ``params`` as read-only; the model replaces records on change."""

    id: int
    category: Category
    subtype: Subtype
    geometry: GeometricBase
    params: dict[str, ParamValue] = field(default_factory=dict)
    host: int | None = None

    @property
    def comments(self) -> str:
        value = self.params.get(COMMENTS, "")
        return value if isinstance(value, str) else ""


def _indexable(comment: str) -> bool:
    return bool(_DECIMAL_ID.match(comment))


def check_pairing(category: Category, subtype: Subtype, geometry: GeometricBase) -> None:
    """Raise ``ValidationError`` unless the subtype suits the category and the geometry suits the subtype."""
    if subtype not in SUBTYPES_BY_CATEGORY[category]:
        raise ValidationError("subtype-category", f"{subtype} is not a {category} subtype")
    ok = {
        Subtype.RECT_WALL: isinstance(geometry, Curve),
        Subtype.PROFILE_WALL: isinstance(geometry, Profile),
        Subtype.FLAT_FLOOR: isinstance(geometry, CurveLoop),
        Subtype.SLOPED_FLOOR: isinstance(geometry, CurveLoop),
        Subtype.HOSTED_INSTANCE: isinstance(geometry, LocationPoint),
        Subtype.FREE_COLUMN: isinstance(geometry, LocationPoint),
        Subtype.SLANTED_COLUMN: isinstance(geometry, Line),
    }[subtype]
    if not ok:
        raise ValidationError("subtype-geometry", f"{subtype} cannot take {type(geometry).__name__} geometry")


def _check_param(name: str, value: ParamValue) -> ParamValue:
    if name == COMMENTS:
        if not isinstance(value, str):
            raise ValidationError("param-type", f"{COMMENTS} must be text, got {value!r}")
        return value
    if name in REAL_PARAMS:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ValidationError("param-type", f"{name} must be a finite real, got {value!r}")
        return float(value)
    if not isinstance(value, (bool, int, float, str, ElementRef)):
        raise ValidationError("param-type", f"{name} has unsupported value {value!r}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ValidationError("param-type", f"{name} must be finite")
    return value


def representative_point(e: ElementRecord) -> Point3:
    """Location used by the distance metric: the point, the curve midpoint, or the outer-loop centroid."""
    g = e.geometry
    if isinstance(g, LocationPoint):
        return g.point
    if isinstance(g, Curve):
        return evaluate_curve(g, 0.5)
    if isinstance(g, CurveLoop):
        return loop_centroid(g)
    return loop_centroid(g.outer)


class ModelState:
    """Element registry, id allocator and Comments index.

    Single writer: mutate from one task at a time.
    """

    def __init__(self, first_id: int = 1):
        self.elements: dict[int, ElementRecord] = {}
        self.next_id = first_id
        self.comment_index: dict[str, int] = {}

    # -- queries

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, element_id: int) -> bool:
        return element_id in self.elements

    def get(self, element_id: int) -> ElementRecord:
        try:
            return self.elements[element_id]
        except KeyError:
            raise ElementReferenceError(f"no live element with id {element_id}") from None

    def lookup_by_comment(self, original_id) -> int | None:
        return self.comment_index.get(str(original_id))

    def hosted_by(self, wall_id: int) -> list[int]:
        return sorted(e.id for e in self.elements.values() if e.host == wall_id)

    def counts(self) -> dict[Category, int]:
        out = {c: 0 for c in CATEGORIES}
        for e in self.elements.values():
            out[e.category] += 1
        return out

    def rebuild_comment_index(self) -> dict[str, int]:
        """Index recomputed from scratch (for consistency checks)."""
        idx: dict[str, int] = {}
        for e in self.elements.values():
            c = e.comments
            if _indexable(c):
                if c in idx:
                    raise ValidationError("comments-unique", f"Comments {c!r} on elements {idx[c]} and {e.id}")
                idx[c] = e.id
        return idx

    def copy(self) -> ModelState:
        m = ModelState(self.next_id)
        m.elements = dict(self.elements)
        m.comment_index = dict(self.comment_index)
        return m

    # -- mutations

    def _check_host(self, category: Category, subtype: Subtype, host: int | None) -> None:
        if subtype is Subtype.HOSTED_INSTANCE:
            if host is None:
                raise ElementReferenceError(f"{category} needs a host wall")
            h = self.elements.get(host)
            if h is None:
                raise ElementReferenceError(f"host {host} is not a live element")
            if h.category is not Category.WALL:
                raise ValidationError("host-category", f"host {host} is a {h.category}, not a Wall")
        elif host is not None:
            raise ValidationError("host-unexpected", f"{subtype} elements are not hosted")

    def _claim_comment(self, comment: str, element_id: int) -> None:
        if _indexable(comment):
            owner = self.comment_index.get(comment)
            if owner is not None and owner != element_id:
                raise ValidationError("comments-unique", f"Comments {comment!r} already used by element {owner}")

    def add_element(
        self,
        category,
        subtype,
        geometry: GeometricBase,
        params: Mapping[str, ParamValue] | None = None,
        host: int | None = None,
    ) -> int:
        """Store a new element under the next free id and return that id.

        Canonical parameters missing from ``params`` take category defaults.
        """
        category, subtype = category_of(category), subtype_of(subtype)
        check_pairing(category, subtype, geometry)
        validate_geometry(geometry)
        self._check_host(category, subtype, host)
        merged = dict(CANONICAL_PARAMS[category])
        for name, value in (params or {}).items():
            merged[name] = _check_param(name, value)
        comment = merged[COMMENTS]
        new_id = self.next_id
        self._claim_comment(comment, new_id)
        self.elements[new_id] = ElementRecord(new_id, category, subtype, geometry, merged, host)
        self.next_id += 1
        if _indexable(comment):
            self.comment_index[comment] = new_id
        return new_id

    def patch_element(
        self,
        element_id: int,
        geometry: GeometricBase | None = None,
        params: Mapping[str, ParamValue] | None = None,
    ) -> None:
        """Replace geometry (if given) and upsert the listed parameters."""
        rec = self.get(element_id)
        if geometry is not None:
            check_pairing(rec.category, rec.subtype, geometry)
            validate_geometry(geometry)
        merged = dict(rec.params)
        for name, value in (params or {}).items():
            merged[name] = _check_param(name, value)
        old_c, new_c = rec.comments, merged[COMMENTS]
        if new_c != old_c:
            self._claim_comment(new_c, element_id)
        self.elements[element_id] = replace(
            rec, geometry=geometry if geometry is not None else rec.geometry, params=merged
        )
        if new_c != old_c:
            if _indexable(old_c):
                del self.comment_index[old_c]
            if _indexable(new_c):
                self.comment_index[new_c] = element_id

    def remove_element(self, element_id: int) -> list[int]:
        """Delete an element and anything it hosts; returns the removed ids, host first."""
        rec = self.get(element_id)
        removed = [element_id]
        if rec.category is Category.WALL:
            removed += self.hosted_by(element_id)
        for rid in removed:
            r = self.elements.pop(rid)
            if _indexable(r.comments):
                del self.comment_index[r.comments]
        return removed

    # -- volumes

    def _dim(self, rec: ElementRecord, name: str) -> float:
        v = rec.params.get(name)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0.0:
            raise ValidationError("dimension-positive", f"element {rec.id}: {name}={v!r} must be a positive number")
        return float(v)

    def element_volume(self, element_id: int) -> float:
        """Nominal extrusion volume of an element (cubic meters)."""
        rec = self.get(element_id)
        st = rec.subtype
        g = rec.geometry
        if st is Subtype.RECT_WALL:
            return curve_length(g) * self._dim(rec, "Height") * self._dim(rec, "Width")
        if st is Subtype.PROFILE_WALL:
            return profile_area(g) * self._dim(rec, "Width")
        if st is Subtype.FLAT_FLOOR:
            return loop_area(g) * self._dim(rec, "Thickness")
        if st is Subtype.SLOPED_FLOOR:
            slope = rec.params.get("SlopeAngle", 0.0)
            if isinstance(slope, bool) or not isinstance(slope, (int, float)) or not 0.0 <= slope < math.pi / 2:
                raise ValidationError("slope-range", f"element {rec.id}: SlopeAngle={slope!r} outside [0, pi/2)")
            return loop_area(g) * self._dim(rec, "Thickness") / math.cos(slope)
        if st is Subtype.HOSTED_INSTANCE:
            host = self.get(rec.host)
            return self._dim(rec, "Width") * self._dim(rec, "Height") * self._dim(host, "Width")
        section = self._dim(rec, "b") * self._dim(rec, "h")
        if st is Subtype.FREE_COLUMN:
            return section * self._dim(rec, "Height")
        return section * curve_length(g)

    # -- canonical dump

    def to_json(self) -> dict:
        return {
            "schema": DUMP_SCHEMA,
            "schemaVersion": DUMP_VERSION,
            "nextId": self.next_id,
            "elements": [
                {
                    "id": e.id,
                    "category": e.category.value,
                    "subtype": e.subtype.value,
                    "geometry": serialize_geometry(e.geometry),
                    "params": format_params(e.params),
                    "host": e.host,
                }
                for e in sorted(self.elements.values(), key=lambda r: r.id)
            ],
        }

    def dumps(self) -> str:
        """Canonical text dump: identical models give byte-identical output."""
        return json.dumps(self.to_json(), indent=2, ensure_ascii=True) + "\n"

    @classmethod
    def from_json(cls, doc: dict) -> ModelState:
        if not isinstance(doc, dict) or doc.get("schema") != DUMP_SCHEMA:
            raise SchemaError(f"not a {DUMP_SCHEMA} document")
        if doc.get("schemaVersion") != DUMP_VERSION:
            raise SchemaError(f"unsupported schemaVersion {doc.get('schemaVersion')!r}; expected {DUMP_VERSION}")
        try:
            m = cls(int(doc["nextId"]))
            for item in doc["elements"]:
                category = Category(item["category"])
                subtype = Subtype(item["subtype"])
                geometry = parse_geometry(item["geometry"])
                check_pairing(category, subtype, geometry)
                params = dict(CANONICAL_PARAMS[category])
                params.update((k, _check_param(k, v)) for k, v in parse_params(item["params"]))
                rec = ElementRecord(int(item["id"]), category, subtype, geometry, params, item.get("host"))
                if rec.id in m.elements or rec.id >= m.next_id:
                    raise SchemaError(f"element id {rec.id} duplicated or not below nextId")
                m.elements[rec.id] = rec
        except (KeyError, TypeError, ValueError, FormatError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"malformed model dump: {exc}") from exc
        for rec in m.elements.values():
            try:
                m._check_host(rec.category, rec.subtype, rec.host)
            except (ElementReferenceError, ValidationError) as exc:
                raise SchemaError(f"element {rec.id}: {exc}") from exc
        try:
            m.comment_index = m.rebuild_comment_index()
        except ValidationError as exc:
            raise SchemaError(str(exc)) from exc
        return m

    @classmethod
    def loads(cls, text: str) -> ModelState:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"model dump is not JSON: {exc}") from exc
        return cls.from_json(doc)
