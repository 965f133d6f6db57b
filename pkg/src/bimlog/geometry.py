"""Geometric bases carried by log events.

Every element's defining geometry is one of: a location point, one of six curve
kinds, a closed loop of curves, or a profile made of loops. All values are
immutable; lengths are in meters.

Curves share a normalized parameter ``t`` in ``[0, 1]`` that maps linearly onto
each curve's native range (angles for arcs, helices and ellipses, the knot
domain for NURBS, the segment chain for Hermite splines).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, GeometryKindError, ValidationError
from .hermite import default_hermite_tangents, hermite_basis, hermite_basis_derivative
from .nurbs import de_boor, derivative_control, find_span

TWO_PI = 2.0 * math.pi
FEET_TO_METERS = 0.3048
PLANE_AXIS_TOL = 1e-9
# direction vectors read back from 9-significant-digit text are only unit to ~1e-9
DIRECTION_TOL = 1e-6
LENGTH_RTOL = 1e-10


@dataclass(frozen=True, slots=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        x, y, z = float(self.x), float(self.y), float(self.z)
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise ValidationError("finite-coordinates", f"({x}, {y}, {z}) is not finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def from_array(cls, a) -> Point3:
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def to_array(self) -> np.ndarray:
        return np.array((self.x, self.y, self.z))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __add__(self, other: Point3) -> Point3:
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: Point3) -> Point3:
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __mul__(self, k: float) -> Point3:
        return Point3(self.x * k, self.y * k, self.z * k)

    __rmul__ = __mul__

    def __neg__(self) -> Point3:
        return Point3(-self.x, -self.y, -self.z)

    def dot(self, other: Point3) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: Point3) -> Point3:
        return Point3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def distance_to(self, other: Point3) -> float:
        return (self - other).norm()


ORIGIN = Point3(0.0, 0.0, 0.0)
X_AXIS = Point3(1.0, 0.0, 0.0)
Y_AXIS = Point3(0.0, 1.0, 0.0)
Z_AXIS = Point3(0.0, 0.0, 1.0)


def _check_direction(rule: str, v: Point3, tol: float = DIRECTION_TOL) -> None:
    if abs(v.norm() - 1.0) > tol:
        raise ValidationError(rule, f"direction {tuple(v)} is not unit length")


def _check_orthogonal(rule: str, a: Point3, b: Point3, tol: float = DIRECTION_TOL) -> None:
    if abs(a.dot(b)) > tol:
        raise ValidationError(rule, f"axes {tuple(a)} and {tuple(b)} are not orthogonal")


def _real(rule: str, v, positive: bool = False) -> float:
    if isinstance(v, bool):
        raise ValidationError(rule, f"expected a real number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ValidationError(rule, f"{v} is not finite")
    if positive and v <= 0.0:
        raise ValidationError(rule, f"{v} must be positive")
    return v


@dataclass(frozen=True, slots=True)
class Plane:
    origin: Point3
    x_axis: Point3
    y_axis: Point3

    def __post_init__(self):
        _check_direction("plane-axes", self.x_axis, PLANE_AXIS_TOL)
        _check_direction("plane-axes", self.y_axis, PLANE_AXIS_TOL)
        _check_orthogonal("plane-axes", self.x_axis, self.y_axis, PLANE_AXIS_TOL)

    @classmethod
    def world_xy(cls, origin: Point3 = ORIGIN) -> Plane:
        return cls(origin, X_AXIS, Y_AXIS)

    @property
    def normal(self) -> Point3:
        return self.x_axis.cross(self.y_axis)


class GeometricBase:
    """Common base of every geometry variant."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class LocationPoint(GeometricBase):
    point: Point3


class Curve(GeometricBase):
    """A parametric curve. Subclasses implement the native-parameter hooks."""

    __slots__ = ()

    def native_range(self) -> tuple[float, float]:
        raise NotImplementedError

    def _at(self, u: float) -> np.ndarray:
        raise NotImplementedError

    def _deriv(self, u: float) -> np.ndarray:
        raise NotImplementedError

    def _sample(self, us: np.ndarray) -> np.ndarray:
        return np.array([self._at(u) for u in us])

    def _breaks(self) -> tuple[float, ...]:
        """Native parameters where the derivative may be discontinuous."""
        return ()

    def _length(self, u0: float, u1: float) -> float:
        cuts = [u0] + [b for b in self._breaks() if u0 < b < u1] + [u1]
        speed = lambda u: float(np.linalg.norm(self._deriv(u)))
        total = 0.0
        with warnings.catch_warnings():
            # roundoff-limited means the result is already at machine precision
            warnings.filterwarnings("ignore", message=".*roundoff", category=integrate.IntegrationWarning)
            for a, b in zip(cuts, cuts[1:]):
                val, _ = integrate.quad(speed, a, b, epsabs=0.0, epsrel=LENGTH_RTOL, limit=200)
                total += val
        return total

    def to_native(self, t: float) -> float:
        a, b = self.native_range()
        return a + t * (b - a)

    @property
    def start(self) -> Point3:
        return Point3.from_array(self._at(self.native_range()[0]))

    @property
    def end(self) -> Point3:
        return Point3.from_array(self._at(self.native_range()[1]))


@dataclass(frozen=True, slots=True)
class Line(Curve):
    end1: Point3
    end2: Point3

    def __post_init__(self):
        if self.end1 == self.end2:
            raise ValidationError("line-length", "line endpoints coincide")

    def native_range(self):
        return (0.0, 1.0)

    @property
    def start(self) -> Point3:
        return self.end1

    @property
    def end(self) -> Point3:
        return self.end2

    def _at(self, u):
        a = self.end1.to_array()
        return a + u * (self.end2.to_array() - a)

    def _deriv(self, u):
        return self.end2.to_array() - self.end1.to_array()

    def _sample(self, us):
        a = self.end1.to_array()
        return a + us[:, None] * (self.end2.to_array() - a)

    def _length(self, u0, u1):
        return (u1 - u0) * self.end1.distance_to(self.end2)


@dataclass(frozen=True, slots=True)
class Arc(Curve):
    """Circular arc ``center + r cos(a) X + r sin(a) Y`` for ``a`` from start to end angle.

    ``plane`` supplies the X/Y orientation; when omitted it is the world XY plane
    through the center.
    """

    center: Point3
    radius: float
    start_angle: float
    end_angle: float
    plane: Plane | None = None

    def __post_init__(self):
        object.__setattr__(self, "radius", _real("arc-radius", self.radius, positive=True))
        object.__setattr__(self, "start_angle", _real("arc-angles", self.start_angle))
        object.__setattr__(self, "end_angle", _real("arc-angles", self.end_angle))
        if self.start_angle == self.end_angle:
            raise ValidationError("arc-angles", "arc sweep is zero")
        if self.plane is None:
            object.__setattr__(self, "plane", Plane.world_xy(self.center))

    def native_range(self):
        return (self.start_angle, self.end_angle)

    def _frame(self):
        return self.center.to_array(), self.plane.x_axis.to_array(), self.plane.y_axis.to_array()

    def _at(self, u):
        c, x, y = self._frame()
        return c + self.radius * (math.cos(u) * x + math.sin(u) * y)

    def _deriv(self, u):
        _, x, y = self._frame()
        return self.radius * (-math.sin(u) * x + math.cos(u) * y)

    def _sample(self, us):
        c, x, y = self._frame()
        return c + self.radius * (np.cos(us)[:, None] * x + np.sin(us)[:, None] * y)

    def _length(self, u0, u1):
        return self.radius * abs(u1 - u0)


@dataclass(frozen=True, slots=True)
class CylindricalHelix(Curve):
    """Helix around ``z_vector`` through ``base``; rises ``pitch`` per full turn.

    The point at angle ``a`` is
    ``base + r cos(a) x + r sin(a) (z cross x) + pitch * a / 2pi * z``.
    """

    base: Point3
    radius: float
    x_vector: Point3
    z_vector: Point3
    pitch: float
    start_angle: float
    end_angle: float

    def __post_init__(self):
        object.__setattr__(self, "radius", _real("helix-radius", self.radius, positive=True))
        object.__setattr__(self, "pitch", _real("helix-pitch", self.pitch))
        object.__setattr__(self, "start_angle", _real("helix-angles", self.start_angle))
        object.__setattr__(self, "end_angle", _real("helix-angles", self.end_angle))
        _check_direction("helix-axes", self.x_vector)
        _check_direction("helix-axes", self.z_vector)
        _check_orthogonal("helix-axes", self.x_vector, self.z_vector)
        if self.start_angle == self.end_angle:
            raise ValidationError("helix-angles", "helix sweep is zero")

    def native_range(self):
        return (self.start_angle, self.end_angle)

    def _frame(self):
        x = self.x_vector.to_array()
        z = self.z_vector.to_array()
        return self.base.to_array(), x, np.cross(z, x), z

    def _at(self, u):
        b, x, y, z = self._frame()
        return b + self.radius * (math.cos(u) * x + math.sin(u) * y) + (self.pitch * u / TWO_PI) * z

    def _deriv(self, u):
        _, x, y, z = self._frame()
        return self.radius * (-math.sin(u) * x + math.cos(u) * y) + (self.pitch / TWO_PI) * z

    def _sample(self, us):
        b, x, y, z = self._frame()
        ring = np.cos(us)[:, None] * x + np.sin(us)[:, None] * y
        return b + self.radius * ring + (self.pitch * us / TWO_PI)[:, None] * z

    def _length(self, u0, u1):
        return abs(u1 - u0) * math.hypot(self.radius, self.pitch / TWO_PI)


@dataclass(frozen=True, slots=True)
class Ellipse(Curve):
    """Elliptical arc ``center + a cos(s) X + b sin(s) Y``; ``s`` in radians."""

    center: Point3
    x_radius: float
    y_radius: float
    x_axis: Point3
    y_axis: Point3
    start_param: float
    end_param: float

    def __post_init__(self):
        object.__setattr__(self, "x_radius", _real("ellipse-radii", self.x_radius, positive=True))
        object.__setattr__(self, "y_radius", _real("ellipse-radii", self.y_radius, positive=True))
        object.__setattr__(self, "start_param", _real("ellipse-params", self.start_param))
        object.__setattr__(self, "end_param", _real("ellipse-params", self.end_param))
        _check_direction("ellipse-axes", self.x_axis)
        _check_direction("ellipse-axes", self.y_axis)
        _check_orthogonal("ellipse-axes", self.x_axis, self.y_axis)
        if self.start_param == self.end_param:
            raise ValidationError("ellipse-params", "ellipse sweep is zero")

    def native_range(self):
        return (self.start_param, self.end_param)

    def _frame(self):
        return (
            self.center.to_array(),
            self.x_radius * self.x_axis.to_array(),
            self.y_radius * self.y_axis.to_array(),
        )

    def _at(self, u):
        c, a, b = self._frame()
        return c + math.cos(u) * a + math.sin(u) * b

    def _deriv(self, u):
        _, a, b = self._frame()
        return -math.sin(u) * a + math.cos(u) * b

    def _sample(self, us):
        c, a, b = self._frame()
        return c + np.cos(us)[:, None] * a + np.sin(us)[:, None] * b


@dataclass(frozen=True, slots=True)
class NurbsSpline(Curve):
    degree: int
    knots: tuple[float, ...]
    control_points: tuple[Point3, ...]
    weights: tuple[float, ...]
    _hom: np.ndarray = field(init=False, repr=False, compare=False)
    _dhom: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.degree, bool) or int(self.degree) != self.degree or self.degree < 1:
            raise ValidationError("nurbs-degree", f"degree must be an integer >= 1, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))
        knots = tuple(_real("nurbs-knots", k) for k in self.knots)
        cps = tuple(self.control_points)
        weights = tuple(_real("nurbs-weights", w, positive=True) for w in self.weights)
        p, n = self.degree, len(cps)
        if n < p + 1:
            raise ValidationError("nurbs-control-count", f"degree {p} needs at least {p + 1} control points, got {n}")
        if len(knots) != n + p + 1:
            raise ValidationError(
                "nurbs-knot-count", f"expected {n + p + 1} knots for {n} control points of degree {p}, got {len(knots)}"
            )
        if len(weights) != n:
            raise ValidationError("nurbs-weight-count", f"expected {n} weights, got {len(weights)}")
        if any(b < a for a, b in zip(knots, knots[1:])):
            raise ValidationError("nurbs-knots", "knot vector must be nondecreasing")
        if not knots[p] < knots[n]:
            raise ValidationError("nurbs-knots", "curve domain is empty")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "control_points", cps)
        object.__setattr__(self, "weights", weights)
        w = np.array(weights)
        hom = np.column_stack([np.array([tuple(c) for c in cps]) * w[:, None], w])
        object.__setattr__(self, "_hom", hom)
        object.__setattr__(self, "_dhom", derivative_control(p, knots, hom))

    def native_range(self):
        return (self.knots[self.degree], self.knots[len(self.control_points)])

    def _at(self, u):
        h = de_boor(self.degree, self.knots, self._hom, u)
        return h[:3] / h[3]

    def _deriv(self, u):
        h = de_boor(self.degree, self.knots, self._hom, u)
        drows, dknots = self._dhom
        dh = de_boor(self.degree - 1, dknots, drows, u)
        return (dh[:3] - dh[3] * h[:3] / h[3]) / h[3]

    def _breaks(self):
        a, b = self.native_range()
        return tuple(sorted({k for k in self.knots if a < k < b}))

    def span_of(self, u: float) -> int:
        return find_span(self.knots, self.degree, len(self.control_points), u)


@dataclass(frozen=True, slots=True)
class HermiteSpline(Curve):
    """Piecewise cubic Hermite curve through ``control_points``.

    ``tangents`` may be omitted (Catmull-Rom defaults), hold one tangent per
    point, or, for open splines, hold just the two end tangents. Each segment
    uses its own unit parameter; tangents are derivatives with respect to it.
    """

    control_points: tuple[Point3, ...]
    periodic: bool = False
    tangents: tuple[Point3, ...] | None = None
    _pts: np.ndarray = field(init=False, repr=False, compare=False)
    _tan: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(self.control_points)
        n = len(pts)
        if n < 2:
            raise ValidationError("hermite-control-count", f"need at least 2 control points, got {n}")
        object.__setattr__(self, "control_points", pts)
        object.__setattr__(self, "periodic", bool(self.periodic))
        resolved = default_hermite_tangents(pts, self.periodic)
        if self.tangents is not None:
            tans = tuple(self.tangents)
            if len(tans) == n:
                resolved = list(tans)
            elif len(tans) == 2 and not self.periodic:
                resolved[0], resolved[-1] = tans
            else:
                raise ValidationError(
                    "hermite-tangent-count",
                    f"expected {n} tangents" + ("" if self.periodic else " or 2 end tangents") + f", got {len(tans)}",
                )
            object.__setattr__(self, "tangents", tans)
        object.__setattr__(self, "_pts", np.array([tuple(p) for p in pts]))
        object.__setattr__(self, "_tan", np.array([tuple(t) for t in resolved]))

    @property
    def segment_count(self) -> int:
        n = len(self.control_points)
        return n if self.periodic else n - 1

    def native_range(self):
        return (0.0, float(self.segment_count))

    def _segment(self, s):
        i = min(int(math.floor(s)), self.segment_count - 1)
        j = (i + 1) % len(self.control_points)
        return i, j, s - i

    def _at(self, s):
        i, j, u = self._segment(s)
        h00, h10, h01, h11 = hermite_basis(u)
        return h00 * self._pts[i] + h10 * self._tan[i] + h01 * self._pts[j] + h11 * self._tan[j]

    def _deriv(self, s):
        i, j, u = self._segment(s)
        d00, d10, d01, d11 = hermite_basis_derivative(u)
        return d00 * self._pts[i] + d10 * self._tan[i] + d01 * self._pts[j] + d11 * self._tan[j]

    def _sample(self, us):
        nseg = self.segment_count
        idx = np.minimum(np.floor(us).astype(int), nseg - 1)
        jdx = (idx + 1) % len(self.control_points)
        u = (us - idx)[:, None]
        h00, h10, h01, h11 = hermite_basis(u)
        return h00 * self._pts[idx] + h10 * self._tan[idx] + h01 * self._pts[jdx] + h11 * self._tan[jdx]

    def _breaks(self):
        return tuple(float(k) for k in range(1, self.segment_count))


@dataclass(frozen=True, slots=True)
class CurveLoop(GeometricBase):
    """Ordered curves meant to connect end-to-start and close.

    Closure is not enforced on construction; see ``loops.validate_geometry``.
    """

    curves: tuple[Curve, ...]

    def __post_init__(self):
        curves = tuple(self.curves)
        for c in curves:
            if not isinstance(c, Curve):
                raise ValidationError("loop-members", f"curve loops hold curves only, got {type(c).__name__}")
        object.__setattr__(self, "curves", curves)


@dataclass(frozen=True, slots=True)
class Profile(GeometricBase):
    """Planar region: ``loops[0]`` is the outer boundary, the rest are holes."""

    loops: tuple[CurveLoop, ...]

    def __post_init__(self):
        loops = tuple(self.loops)
        if not loops:
            raise ValidationError("profile-loops", "profile needs at least one loop")
        for lp in loops:
            if not isinstance(lp, CurveLoop):
                raise ValidationError("profile-loops", f"profiles hold curve loops only, got {type(lp).__name__}")
        object.__setattr__(self, "loops", loops)

    @property
    def outer(self) -> CurveLoop:
        return self.loops[0]

    @property
    def holes(self) -> tuple[CurveLoop, ...]:
        return self.loops[1:]


CURVE_TYPES = (Line, Arc, CylindricalHelix, Ellipse, NurbsSpline, HermiteSpline)


def _require_curve(curve) -> Curve:
    if not isinstance(curve, Curve):
        raise GeometryKindError(f"expected a curve, got {type(curve).__name__}")
    return curve


def _check_t(t: float, name: str = "t") -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"{name}={t} outside [0, 1]")
    return t


def evaluate_curve(curve: Curve, t: float) -> Point3:
    """Point on ``curve`` at normalized parameter ``t`` in [0, 1]."""
    _require_curve(curve)
    return Point3.from_array(curve._at(curve.to_native(_check_t(t))))


def curve_derivative(curve: Curve, t: float) -> Point3:
    """Derivative with respect to the normalized parameter."""
    _require_curve(curve)
    a, b = curve.native_range()
    return Point3.from_array(curve._deriv(curve.to_native(_check_t(t))) * (b - a))


def sample_curve(curve: Curve, ts) -> np.ndarray:
    """Points at an array of normalized parameters, shape ``(len(ts), 3)``."""
    _require_curve(curve)
    ts = np.asarray(ts, dtype=float)
    a, b = curve.native_range()
    return curve._sample(a + ts * (b - a))


def curve_length(curve: Curve, t0: float = 0.0, t1: float = 1.0) -> float:
    """Arc length between normalized parameters ``t0 <= t1``.

    Lines, arcs and helices use closed forms; ellipses, NURBS and Hermite
    splines use adaptive Gauss-Kronrod quadrature per smooth piece.
    """
    _require_curve(curve)
    t0, t1 = _check_t(t0, "t0"), _check_t(t1, "t1")
    if t1 < t0:
        raise DomainError(f"t0={t0} > t1={t1}")
    u0, u1 = curve.to_native(t0), curve.to_native(t1)
    if u1 < u0:
        u0, u1 = u1, u0
    return curve._length(u0, u1)


# -- whole-geometry maps ----------------------------------------------------


def _remap(
    base: GeometricBase,
    point: Callable[[Point3], Point3],
    direction: Callable[[Point3], Point3],
    k: float,
) -> GeometricBase:
    """Rebuild ``base`` mapping positions, unit directions and lengths (factor ``k``)."""
    if isinstance(base, LocationPoint):
        return LocationPoint(point(base.point))
    if isinstance(base, Line):
        return Line(point(base.end1), point(base.end2))
    if isinstance(base, Arc):
        pl = base.plane
        return Arc(
            point(base.center),
            base.radius * k,
            base.start_angle,
            base.end_angle,
            Plane(point(pl.origin), direction(pl.x_axis), direction(pl.y_axis)),
        )
    if isinstance(base, CylindricalHelix):
        return CylindricalHelix(
            point(base.base),
            base.radius * k,
            direction(base.x_vector),
            direction(base.z_vector),
            base.pitch * k,
            base.start_angle,
            base.end_angle,
        )
    if isinstance(base, Ellipse):
        return Ellipse(
            point(base.center),
            base.x_radius * k,
            base.y_radius * k,
            direction(base.x_axis),
            direction(base.y_axis),
            base.start_param,
            base.end_param,
        )
    if isinstance(base, NurbsSpline):
        return NurbsSpline(base.degree, base.knots, tuple(point(p) for p in base.control_points), base.weights)
    if isinstance(base, HermiteSpline):
        tans = None if base.tangents is None else tuple(direction(v) * k for v in base.tangents)
        return HermiteSpline(tuple(point(p) for p in base.control_points), base.periodic, tans)
    if isinstance(base, CurveLoop):
        return CurveLoop(tuple(_remap(c, point, direction, k) for c in base.curves))
    if isinstance(base, Profile):
        return Profile(tuple(_remap(lp, point, direction, k) for lp in base.loops))
    raise GeometryKindError(f"not a geometric base: {type(base).__name__}")


def scale_geometry(base: GeometricBase, factor: float) -> GeometricBase:
    """Multiply every length (coordinates, radii, pitch, tangent vectors) by ``factor``.

    Angles, parameters, knots, weights, degrees and directions are unchanged.
    """
    factor = float(factor)
    if not (math.isfinite(factor) and factor > 0.0):
        raise DomainError(f"scale factor must be finite and positive, got {factor}")
    return _remap(base, lambda p: p * factor, lambda d: d, factor)


def transform_geometry(base: GeometricBase, rotation, translation: Point3 = ORIGIN) -> GeometricBase:
    """Apply the rigid motion ``p -> R p + translation`` (``R`` orthonormal 3x3)."""
    R = np.asarray(rotation, dtype=float)
    if R.shape != (3, 3) or not np.allclose(R @ R.T, np.eye(3), atol=1e-12):
        raise DomainError("rotation must be an orthonormal 3x3 matrix")
    rot = lambda v: Point3.from_array(R @ v.to_array())
    return _remap(base, lambda p: rot(p) + translation, rot, 1.0)


def translate_geometry(base: GeometricBase, offset: Point3) -> GeometricBase:
    return _remap(base, lambda p: p + offset, lambda d: d, 1.0)


def is_curve(base: GeometricBase) -> bool:
    return isinstance(base, Curve)


def points_of(seq: Sequence) -> tuple[Point3, ...]:
    """Coerce a sequence of 3-sequences into points."""
    return tuple(p if isinstance(p, Point3) else Point3(*p) for p in seq)
