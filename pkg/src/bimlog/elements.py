"""Element categories, subtypes and the canonical parameter schema."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class Category(str, Enum):
    WALL = "Wall"
    FLOOR = "Floor"
    WINDOW = "Window"
    DOOR = "Door"
    COLUMN = "Column"

    def __str__(self) -> str:
        return self.value


class Subtype(str, Enum):
    RECT_WALL = "RectWall"
    PROFILE_WALL = "ProfileWall"
    FLAT_FLOOR = "FlatFloor"
    SLOPED_FLOOR = "SlopedFloor"
    HOSTED_INSTANCE = "HostedInstance"
    FREE_COLUMN = "FreeColumn"
    SLANTED_COLUMN = "SlantedColumn"

    def __str__(self) -> str:
        return self.value


CATEGORIES = tuple(Category)

SUBTYPES_BY_CATEGORY: dict[Category, tuple[Subtype, ...]] = {
    Category.WALL: (Subtype.RECT_WALL, Subtype.PROFILE_WALL),
    Category.FLOOR: (Subtype.FLAT_FLOOR, Subtype.SLOPED_FLOOR),
    Category.WINDOW: (Subtype.HOSTED_INSTANCE,),
    Category.DOOR: (Subtype.HOSTED_INSTANCE,),
    Category.COLUMN: (Subtype.FREE_COLUMN, Subtype.SLANTED_COLUMN),
}

HOSTED_CATEGORIES = (Category.WINDOW, Category.DOOR)

COMMENTS = "Comments"

# Canonical parameters per category, in order, with defaults (meters / radians).
CANONICAL_PARAMS: dict[Category, dict[str, object]] = {
    Category.WALL: {"Height": 3.0, "Width": 0.3, "BaseOffset": 0.0, COMMENTS: ""},
    Category.FLOOR: {"Thickness": 0.2, "SlopeAngle": 0.0, COMMENTS: ""},
    Category.WINDOW: {"Width": 1.2, "Height": 1.5, "SillHeight": 0.9, COMMENTS: ""},
    Category.DOOR: {"Width": 0.9, "Height": 2.1, "SillHeight": 0.0, COMMENTS: ""},
    Category.COLUMN: {"b": 0.4, "h": 0.4, "Height": 3.0, COMMENTS: ""},
}

# real-valued canonical names; lengths scale with unit conversion, angles do not
LENGTH_PARAMS = frozenset({"Height", "Width", "BaseOffset", "Thickness", "SillHeight", "b", "h"})
ANGLE_PARAMS = frozenset({"SlopeAngle"})
REAL_PARAMS = LENGTH_PARAMS | ANGLE_PARAMS


@dataclass(frozen=True, slots=True)
class ElementRef:
    """A parameter value that points at another element by id."""

    id: int

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id <= 0:
            raise ValueError(f"element reference must be a positive integer, got {self.id!r}")


ParamValue = Union[float, int, str, bool, ElementRef]


def category_of(value) -> Category:
    return value if isinstance(value, Category) else Category(value)


def subtype_of(value) -> Subtype:
    return value if isinstance(value, Subtype) else Subtype(value)
