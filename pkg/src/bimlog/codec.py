"""Reader and writer for the enhanced BIM log.

Geometry text grammar (whitespace is free between tokens)::

    point    := "(" real "," real "," real ")"
    curve    := "[" Kind "," field ("," field)* "]"
    loop     := "{CurveLoop" ("," curve)* "}"
    profile  := "Profile" ("," loop)+
    list     := "<" [item (";" item)*] ">"

Reals are written with 9 significant digits in their shortest form. Each log
row is an RFC-4180 record with the columns in ``COLUMNS``.
"""

from __future__ import annotations

import csv
import io
import math
import re
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from os import PathLike
from typing import IO, Iterable, Mapping, Sequence

from .diagnostics import Diagnostic
from .elements import (
    HOSTED_CATEGORIES,
    REAL_PARAMS,
    SUBTYPES_BY_CATEGORY,
    Category,
    ElementRef,
    ParamValue,
    Subtype,
)
from .errors import BimLogError, FormatError, ValidationError
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
    Plane,
    Point3,
    Profile,
    X_AXIS,
    Y_AXIS,
)
from .loops import validate_geometry

COLUMNS = ("seq", "command", "element_id", "category", "subtype", "geometry", "params", "host_ref")
HEADER = ",".join(COLUMNS)

_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_INTEGER = re.compile(r"[-+]?\d+")
_WORD = re.compile(r"[A-Za-z]+")
_WS = re.compile(r"\s*")
_NUMBER_SPLIT = re.compile(f"({_NUMBER.pattern})")
_HOLE = "#"
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class LossyArcWarning(UserWarning):
    """An arc outside the world XY plane was written; its plane is not recorded."""


def format_real(x: float) -> str:
    """9 significant digits, shortest form, never ``-0``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("finite-real", f"cannot write non-finite value {x}")
    s = format(x, ".9g")
    return "0" if s == "-0" else s


def quantize_real(x: float) -> float:
    """The value a real takes after one write/read cycle."""
    return float(format_real(x))


# -- geometry -----------------------------------------------------------------


def _pt(p: Point3) -> str:
    return f"({format_real(p.x)}, {format_real(p.y)}, {format_real(p.z)})"


def _reals(vals: Iterable[float]) -> str:
    return "<" + "; ".join(format_real(v) for v in vals) + ">"


def _pts(vals: Iterable[Point3]) -> str:
    return "<" + "; ".join(_pt(p) for p in vals) + ">"


def _curve_text(c: Curve) -> str:
    if isinstance(c, Line):
        body = [_pt(c.end1), _pt(c.end2)]
    elif isinstance(c, Arc):
        pl = c.plane
        if pl.x_axis != X_AXIS or pl.y_axis != Y_AXIS:
            warnings.warn("arc plane is not world XY and will be lost", LossyArcWarning, stacklevel=3)
        body = [_pt(c.center), format_real(c.radius), format_real(c.start_angle), format_real(c.end_angle)]
    elif isinstance(c, CylindricalHelix):
        body = [
            _pt(c.base),
            format_real(c.radius),
            _pt(c.x_vector),
            _pt(c.z_vector),
            format_real(c.pitch),
            format_real(c.start_angle),
            format_real(c.end_angle),
        ]
    elif isinstance(c, Ellipse):
        body = [
            _pt(c.center),
            format_real(c.x_radius),
            format_real(c.y_radius),
            _pt(c.x_axis),
            _pt(c.y_axis),
            format_real(c.start_param),
            format_real(c.end_param),
        ]
    elif isinstance(c, NurbsSpline):
        body = [str(c.degree), _reals(c.knots), _pts(c.control_points), _reals(c.weights)]
    elif isinstance(c, HermiteSpline):
        body = [_pts(c.control_points), "true" if c.periodic else "false", _pts(c.tangents or ())]
    else:
        raise TypeError(f"not a curve: {type(c).__name__}")
    return "[" + ", ".join([KIND_TAGS[type(c)], *body]) + "]"


def _loop_text(lp: CurveLoop) -> str:
    return "{" + ", ".join(["CurveLoop", *(_curve_text(c) for c in lp.curves)]) + "}"


def serialize_geometry(base: GeometricBase) -> str:
    if isinstance(base, LocationPoint):
        return _pt(base.point)
    if isinstance(base, Curve):
        return _curve_text(base)
    if isinstance(base, CurveLoop):
        return _loop_text(base)
    if isinstance(base, Profile):
        return ", ".join(["Profile", *(_loop_text(lp) for lp in base.loops)])
    raise TypeError(f"not a geometric base: {type(base).__name__}")


KIND_TAGS = {
    Line: "Line",
    Arc: "Arc",
    CylindricalHelix: "CylindricalHelix",
    Ellipse: "Ellipse",
    NurbsSpline: "NurbsSpline",
    HermiteSpline: "HermiteSpline",
}

_FIELDS = {
    "Line": ("point", "point"),
    "Arc": ("point", "real", "real", "real"),
    "CylindricalHelix": ("point", "real", "point", "point", "real", "real", "real"),
    "Ellipse": ("point", "real", "real", "point", "point", "real", "real"),
    "NurbsSpline": ("int", "reals", "points", "reals"),
    "HermiteSpline": ("points", "flag", "points"),
}


def _build_curve(kind: str, f: list) -> Curve:
    if kind == "Line":
        return Line(*f)
    if kind == "Arc":
        return Arc(f[0], f[1], f[2], f[3], Plane.world_xy(f[0]))
    if kind == "CylindricalHelix":
        return CylindricalHelix(*f)
    if kind == "Ellipse":
        return Ellipse(*f)
    if kind == "NurbsSpline":
        return NurbsSpline(f[0], tuple(f[1]), tuple(f[2]), tuple(f[3]))
    return HermiteSpline(tuple(f[0]), f[1], tuple(f[2]) or None)


class _Source:
    """Number texts of one geometry string, with offset mapping back to it."""

    __slots__ = ("texts", "skeleton")

    def __init__(self, texts: list[str], skeleton: str):
        self.texts = texts
        self.skeleton = skeleton

    def offset(self, pos: int | None) -> int | None:
        """Map an offset in the skeleton to the same place in the original text."""
        if pos is None:
            return None
        extra, hole = 0, -1
        for t in self.texts:
            hole = self.skeleton.find(_HOLE, hole + 1)
            if hole < 0 or hole >= pos:
                break
            extra += len(t) - 1
        return pos + extra

    def integer(self, k: int, pos: int) -> int:
        text = self.texts[k]
        if not _INTEGER.fullmatch(text):
            raise FormatError("expected an integer", self.offset(pos))
        return int(text)


class _Compiler:
    """Recursive-descent reader over a skeleton in which every number is ``#``.

    Instead of values it returns builders ``f(vals, src)``; a skeleton is
    compiled once and reused for every string of the same shape.
    """

    def __init__(self, text: str):
        self.s = text
        self.i = 0
        self.k = 0

    def ws(self) -> None:
        self.i = _WS.match(self.s, self.i).end()

    def peek(self) -> str:
        self.ws()
        return self.s[self.i:self.i + 1]

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.s[self.i:self.i + 1]
            found = "a number" if found == _HOLE else repr(found) if found else "end of text"
            raise FormatError(f"expected {ch!r}, found {found}", self.i)
        self.i += 1

    def _word(self, what: str) -> str:
        self.ws()
        m = _WORD.match(self.s, self.i)
        if not m:
            raise FormatError(f"expected {what}", self.i)
        self.i = m.end()
        return m.group()

    def hole(self, what: str) -> int:
        if self.peek() != _HOLE:
            raise FormatError(f"expected {what}", self.i)
        self.i += 1
        self.k += 1
        return self.k - 1

    def real(self):
        k = self.hole("a number")
        return lambda v, src: v[k]

    def integer(self):
        pos = self.i
        k = self.hole("an integer")
        return lambda v, src: src.integer(k, pos)

    def flag(self):
        start = self.i
        word = self._word("true or false")
        if word.lower() not in ("true", "false"):
            raise FormatError(f"expected true or false, found {word!r}", start)
        value = word.lower() == "true"
        return lambda v, src: value

    def point(self):
        self.expect("(")
        a = self.hole("a number")
        self.expect(",")
        b = self.hole("a number")
        self.expect(",")
        c = self.hole("a number")
        self.expect(")")
        return lambda v, src: Point3(v[a], v[b], v[c])

    def listof(self, item):
        self.expect("<")
        items = []
        if self.peek() == ">":
            self.i += 1
        else:
            items.append(item())
            while self.peek() == ";":
                self.i += 1
                items.append(item())
            self.expect(">")
        return lambda v, src: [f(v, src) for f in items]

    def field(self, kind: str):
        if kind == "point":
            return self.point()
        if kind == "real":
            return self.real()
        if kind == "int":
            return self.integer()
        if kind == "flag":
            return self.flag()
        if kind == "reals":
            return self.listof(self.real)
        return self.listof(self.point)

    def curve(self):
        start = self.i
        self.expect("[")
        self.ws()
        tag_at = self.i
        m = _WORD.match(self.s, self.i)
        tag = m.group() if m else ""
        if tag not in _FIELDS:
            raise FormatError(f"unknown kind tag {tag!r}", tag_at)
        self.i = m.end()
        spec = _FIELDS[tag]
        fields = []
        for n, kind in enumerate(spec):
            if self.peek() == "]":
                raise FormatError(f"arity: {tag} takes {len(spec)} fields, got {n}", self.i)
            self.expect(",")
            fields.append(self.field(kind))
        if self.peek() == ",":
            raise FormatError(f"arity: {tag} takes {len(spec)} fields, got more", self.i)
        self.expect("]")

        def build(v, src):
            values = [f(v, src) for f in fields]
            try:
                return _build_curve(tag, values)
            except (ValidationError, FormatError):
                raise
            except (TypeError, ValueError) as exc:  # pragma: no cover - constructor guards
                raise FormatError(str(exc), src.offset(start)) from exc

        return build

    def loop(self):
        self.expect("{")
        start = self.i
        if self._word("CurveLoop") != "CurveLoop":
            raise FormatError("expected 'CurveLoop'", start)
        curves = []
        while self.peek() == ",":
            self.i += 1
            curves.append(self.curve())
        self.expect("}")
        return lambda v, src: CurveLoop(tuple(f(v, src) for f in curves))

    def geometry(self):
        c = self.peek()
        if c == "(":
            pt = self.point()
            build = lambda v, src: LocationPoint(pt(v, src))
        elif c == "[":
            build = self.curve()
        elif c == "{":
            build = self.loop()
        else:
            start = self.i
            m = _WORD.match(self.s, self.i)
            if not m or m.group() != "Profile":
                found = m.group() if m else ("a number" if c == _HOLE else c)
                raise FormatError(f"unknown kind tag {found!r}", start)
            self.i = m.end()
            loops = []
            while self.peek() == ",":
                self.i += 1
                loops.append(self.loop())
            if not loops:
                raise FormatError("arity: Profile needs at least one CurveLoop", self.i)
            build = lambda v, src: Profile(tuple(f(v, src) for f in loops))
        self.ws()
        if self.i != len(self.s):
            raise FormatError("unexpected trailing text", self.i)
        return build


@lru_cache(maxsize=1024)
def _compile(skeleton: str):
    return _Compiler(skeleton).geometry()


def parse_geometry(s: str, validate: bool = True) -> GeometricBase:
    """Parse geometry text; the inverse of ``serialize_geometry``.

    Raises ``FormatError`` (with a character offset) on grammar and arity
    problems and ``ValidationError`` when the parsed value breaks a structural
    rule. ``validate=False`` skips the cross-curve checks (closure, holes).
    """
    if _HOLE in s:
        raise FormatError(f"unexpected {_HOLE!r}", s.index(_HOLE))
    parts = _NUMBER_SPLIT.split(s)
    src = _Source(parts[1::2], _HOLE.join(parts[0::2]))
    try:
        build = _compile(src.skeleton)
    except FormatError as exc:
        raise FormatError(exc.message, src.offset(exc.offset)) from None
    g = build(list(map(float, src.texts)), src)
    if validate:
        validate_geometry(g)
    return g


def quantize_geometry(base: GeometricBase) -> GeometricBase:
    """Geometry as it reads back after one write/read cycle."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LossyArcWarning)
        return parse_geometry(serialize_geometry(base), validate=False)


# -- parameters -----------------------------------------------------------------


def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in "\\;='":
            out.append("\\")
        out.append(ch)
    return "'" + "".join(out) + "'"


def format_param_value(name: str, value: ParamValue) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, ElementRef):
        return f"#{value.id}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        s = format_real(value)
        if name not in REAL_PARAMS and not any(ch in s for ch in ".eE"):
            s += ".0"  # keep the literal distinguishable from an integer
        return s
    if isinstance(value, str):
        if "\x00" in value:
            # the csv reader refuses NUL, so a log carrying one could never be read back
            raise ValidationError("param-value", f"text for {name} contains a NUL character")
        return _escape(value)
    raise ValidationError("param-value", f"unsupported value for {name}: {value!r}")


def format_params(params: Iterable[tuple[str, ParamValue]] | Mapping[str, ParamValue]) -> str:
    items = params.items() if isinstance(params, Mapping) else params
    return ";".join(f"{name}={format_param_value(name, v)}" for name, v in items)


def _split_unescaped(text: str, sep: str, limit: int = -1) -> list[str]:
    if "\\" not in text:
        return text.split(sep, limit)
    parts, cur, i = [], [], 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            cur.append(text[i:i + 2])
            i += 2
            continue
        if ch == sep and limit != 0:
            parts.append("".join(cur))
            cur = []
            limit -= 1
        else:
            cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def _unquote(raw: str) -> str:
    out, i = [], 1
    while i < len(raw):
        ch = raw[i]
        if ch == "\\":
            if i + 1 == len(raw):
                break
            out.append(raw[i + 1])
            i += 2
            continue
        if ch == "'":
            if i != len(raw) - 1:
                raise FormatError(f"text after closing quote in {raw!r}")
            return "".join(out)
        out.append(ch)
        i += 1
    raise FormatError(f"unterminated text literal {raw!r}")


def parse_param_value(name: str, raw: str) -> ParamValue:
    if raw.startswith("'"):
        return _unquote(raw)
    if raw in ("true", "false"):
        return raw == "true"
    if raw.startswith("#") and raw[1:].isdigit():
        return ElementRef(int(raw[1:]))
    if _INTEGER.fullmatch(raw):
        return float(raw) if name in REAL_PARAMS else int(raw)
    if _NUMBER.fullmatch(raw):
        v = float(raw)
        if not math.isfinite(v):
            raise FormatError(f"non-finite value for {name}: {raw!r}")
        return v
    raise FormatError(f"unparsable value for {name}: {raw!r}")


def parse_params(text: str) -> tuple[tuple[str, ParamValue], ...]:
    """Parse ``name=value;name=value``; an empty string means no parameters."""
    if text == "":
        return ()
    out, seen = [], set()
    for item in _split_unescaped(text, ";"):
        parts = _split_unescaped(item, "=", limit=1)
        if len(parts) != 2:
            raise FormatError(f"parameter {item!r} lacks '='")
        name, raw = parts[0].strip(), parts[1].strip()
        if not _NAME.match(name):
            raise FormatError(f"bad parameter name {name!r}")
        if name in seen:
            raise FormatError(f"duplicate parameter {name!r}")
        seen.add(name)
        out.append((name, parse_param_value(name, raw)))
    return tuple(out)


# -- events -----------------------------------------------------------------------


class Command(str, Enum):
    ADDED = "ADDED"
    MODIFIED = "MODIFIED"
    DELETED = "DELETED"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LogEvent:
    """One log row: a single authoring command applied to one element."""

    seq: int
    command: Command
    element_id: int
    category: Category
    subtype: Subtype
    geometry: GeometricBase | None = None
    params: tuple[tuple[str, ParamValue], ...] = ()
    host_ref: int | None = None

    def __post_init__(self):
        for name, enum in (("command", Command), ("category", Category), ("subtype", Subtype)):
            value = getattr(self, name)
            if type(value) is not enum:
                object.__setattr__(self, name, enum(value))
        if isinstance(self.params, Mapping) or type(self.params) is not tuple:
            params = self.params.items() if isinstance(self.params, Mapping) else self.params
            object.__setattr__(self, "params", tuple((str(k), v) for k, v in params))
        self._check()

    def _check(self) -> None:
        if isinstance(self.seq, bool) or not isinstance(self.seq, int) or self.seq < 1:
            raise ValidationError("event-seq", f"seq must be an integer >= 1, got {self.seq!r}")
        if isinstance(self.element_id, bool) or not isinstance(self.element_id, int) or self.element_id <= 0:
            raise ValidationError("event-element-id", f"element id must be a positive integer, got {self.element_id!r}")
        if self.subtype not in SUBTYPES_BY_CATEGORY[self.category]:
            raise ValidationError("event-subtype", f"{self.subtype} is not a {self.category} subtype")
        names = [n for n, _ in self.params]
        if len(set(names)) != len(names):
            raise ValidationError("event-params", "duplicate parameter names")
        for n in names:
            if not _NAME.match(n):
                raise ValidationError("event-params", f"bad parameter name {n!r}")
        if self.host_ref is not None and (
            isinstance(self.host_ref, bool) or not isinstance(self.host_ref, int) or self.host_ref <= 0
        ):
            raise ValidationError("event-host", f"host reference must be a positive integer, got {self.host_ref!r}")
        cmd = self.command
        if cmd is Command.ADDED:
            if self.geometry is None:
                raise ValidationError("event-geometry", "ADDED events carry geometry")
            if self.category in HOSTED_CATEGORIES and self.host_ref is None:
                raise ValidationError("event-host", f"{self.category} needs a host element")
        elif cmd is Command.MODIFIED:
            if self.geometry is None and not self.params:
                raise ValidationError("event-payload", "MODIFIED events change geometry or parameters")
            if self.host_ref is not None:
                raise ValidationError("event-host", "MODIFIED events cannot re-host an element")
        else:
            if self.geometry is not None:
                raise ValidationError("event-geometry", "DELETED events carry no geometry")
            if self.params:
                raise ValidationError("event-params", "DELETED events carry no parameters")
            if self.host_ref is not None:
                raise ValidationError("event-host", "DELETED events carry no host reference")

    @property
    def param_dict(self) -> dict[str, ParamValue]:
        return dict(self.params)


_RULE_COLUMNS = {
    "event-seq": "seq",
    "event-element-id": "element_id",
    "event-subtype": "subtype",
    "event-params": "params",
    "event-payload": "params",
    "event-geometry": "geometry",
    "event-host": "host_ref",
}


class LogFormatError(BimLogError, ValueError):
    """A log row could not be turned into an event."""

    def __init__(self, message: str, column: str | None = None, seq: int | None = None, row: int | None = None):
        self.message = message
        self.column = column
        self.seq = seq
        self.row = row
        super().__init__(str(self.diagnostic()))

    def diagnostic(self) -> Diagnostic:
        return Diagnostic("format", self.message, row=self.row, seq=self.seq, column=self.column)


class LogReadError(BimLogError, OSError):
    """The log source could not be read or decoded."""


def _quote(field: str) -> str:
    return '"' + field.replace('"', '""') + '"'


def format_event(e: LogEvent) -> str:
    """One CSV record (no line terminator)."""
    geometry = _quote(serialize_geometry(e.geometry)) if e.geometry is not None else ""
    params = _quote(format_params(e.params)) if e.params else ""
    host = str(e.host_ref) if e.host_ref is not None else ""
    return ",".join(
        [str(e.seq), e.command.value, str(e.element_id), e.category.value, e.subtype.value, geometry, params, host]
    )


def _positive_int(text: str, column: str, seq: int) -> int:
    if not _INTEGER.fullmatch(text.strip()) or int(text) <= 0:
        raise LogFormatError(f"expected a positive integer, found {text!r}", column, seq)
    return int(text)


def event_from_fields(fields: Sequence[str], seq: int) -> LogEvent:
    """Build an event from the eight split CSV fields of one record."""
    if len(fields) < len(COLUMNS):
        missing = COLUMNS[len(fields)]
        raise LogFormatError(f"record has {len(fields)} columns, expected {len(COLUMNS)}", missing, seq)
    if len(fields) > len(COLUMNS):
        raise LogFormatError(f"record has {len(fields)} columns, expected {len(COLUMNS)}", None, seq)
    f = dict(zip(COLUMNS, fields))
    if _positive_int(f["seq"], "seq", seq) != seq:
        raise LogFormatError(f"seq {f['seq']} does not match row order {seq}", "seq", seq)
    try:
        command = Command(f["command"])
    except ValueError:
        raise LogFormatError(f"unknown command {f['command']!r}", "command", seq) from None
    element_id = _positive_int(f["element_id"], "element_id", seq)
    try:
        category = Category(f["category"])
    except ValueError:
        raise LogFormatError(f"unknown category {f['category']!r}", "category", seq) from None
    try:
        subtype = Subtype(f["subtype"])
    except ValueError:
        raise LogFormatError(f"unknown subtype {f['subtype']!r}", "subtype", seq) from None
    geometry = None
    if f["geometry"] != "":
        try:
            geometry = parse_geometry(f["geometry"])
        except (FormatError, ValidationError) as exc:
            raise LogFormatError(str(exc), "geometry", seq) from None
    try:
        params = parse_params(f["params"])
    except FormatError as exc:
        raise LogFormatError(str(exc), "params", seq) from None
    host = _positive_int(f["host_ref"], "host_ref", seq) if f["host_ref"] != "" else None
    try:
        return LogEvent(seq, command, element_id, category, subtype, geometry, params, host)
    except ValidationError as exc:
        raise LogFormatError(exc.message, _RULE_COLUMNS.get(exc.rule), seq) from None


def _split_record(record: str) -> list[str]:
    rows = list(csv.reader(io.StringIO(record, newline="")))
    if len(rows) != 1:
        raise LogFormatError(f"expected exactly one record, found {len(rows)}")
    return rows[0]


def parse_event(record: str, seq: int = 1) -> LogEvent:
    """Inverse of ``format_event``; raises ``LogFormatError`` naming the bad column."""
    fields = _split_record(record)
    try:
        return event_from_fields(fields, seq)
    except LogFormatError as exc:
        exc.seq = seq
        raise


def _read_text(source) -> str:
    try:
        if isinstance(source, (str, PathLike)):
            with open(source, "rb") as fh:
                data = fh.read()
        else:
            data = source.read()
    except OSError as exc:
        raise LogReadError(f"cannot read log: {exc}") from exc
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise LogReadError(f"log is not valid UTF-8: {exc}") from exc


def read_log(source, strict: bool = False) -> tuple[list[LogEvent], list[Diagnostic]]:
    """Read a whole log from a path or a (byte or text) stream.

    An optional header row is skipped. ``seq`` counts data rows, malformed ones
    included. Lenient mode turns malformed rows into diagnostics; strict mode
    raises ``LogFormatError`` at the first one.
    """
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text, newline=""))
    events: list[LogEvent] = []
    diags: list[Diagnostic] = []
    seq = 0
    first = True
    try:
        for fields in reader:
            row = reader.line_num
            if not fields:
                continue
            if first and fields[0].strip() == COLUMNS[0]:
                first = False
                continue
            first = False
            seq += 1
            try:
                events.append(event_from_fields(fields, seq))
            except LogFormatError as exc:
                exc.row, exc.seq = row, seq
                if strict:
                    raise LogFormatError(exc.message, exc.column, seq, row) from None
                diags.append(exc.diagnostic())
    except csv.Error as exc:
        d = Diagnostic("format", f"CSV syntax: {exc}", row=reader.line_num)
        if strict:
            raise LogFormatError(d.message, None, None, reader.line_num) from None
        diags.append(d)
    return events, diags


def write_log(events: Iterable[LogEvent], stream: IO[str]) -> None:
    """Header row, then one record per event, LF line endings."""
    stream.write(HEADER + "\n")
    for e in events:
        stream.write(format_event(e) + "\n")


def dumps_log(events: Iterable[LogEvent]) -> str:
    buf = io.StringIO()
    write_log(events, buf)
    return buf.getvalue()


def loads_log(text: str, strict: bool = False) -> tuple[list[LogEvent], list[Diagnostic]]:
    return read_log(io.StringIO(text), strict=strict)
