import json
import math
import random

import pytest

import gen
from bimlog.elements import Category, Subtype
from bimlog.errors import ElementReferenceError, SchemaError, ValidationError
from bimlog.geometry import Line, LocationPoint, Point3, scale_geometry
from bimlog.loops import profile_area
from bimlog.model import ModelState, representative_point
from bimlog.sim import random_scenario, run_scenario
from bimlog.units import scale_params

W, F, WIN, D, C = Category.WALL, Category.FLOOR, Category.WINDOW, Category.DOOR, Category.COLUMN


def line(x0, x1):
    return Line(Point3(x0, 0, 0), Point3(x1, 0, 0))


def pt(x, y=0.0, z=0.0):
    return LocationPoint(Point3(x, y, z))


@pytest.fixture
def model():
    m = ModelState()
    m.add_element(W, Subtype.RECT_WALL, line(0, 10), {"Height": 3.0, "Width": 0.3})
    return m


def test_add_wall(model):
    assert list(model.elements) == [1]
    assert model.element_volume(1) == pytest.approx(9.0, rel=1e-15)
    assert model.get(1).params["BaseOffset"] == 0.0  # default filled in


def test_add_hosted_window(model):
    wid = model.add_element(WIN, Subtype.HOSTED_INSTANCE, pt(2), {}, host=1)
    assert wid == 2 and model.get(2).host == 1


def test_hosted_without_host(model):
    with pytest.raises(ElementReferenceError):
        model.add_element(WIN, Subtype.HOSTED_INSTANCE, pt(2))
    with pytest.raises(ElementReferenceError):
        model.add_element(WIN, Subtype.HOSTED_INSTANCE, pt(2), host=77)


def test_host_must_be_a_wall(model):
    cid = model.add_element(C, Subtype.FREE_COLUMN, pt(5, 5))
    with pytest.raises(ValidationError, match="host-category"):
        model.add_element(D, Subtype.HOSTED_INSTANCE, pt(2), host=cid)
    with pytest.raises(ValidationError, match="host-unexpected"):
        model.add_element(C, Subtype.FREE_COLUMN, pt(1), host=1)


def test_pairing_rules(model):
    with pytest.raises(ValidationError, match="subtype-geometry"):
        model.add_element(W, Subtype.RECT_WALL, pt(1))
    with pytest.raises(ValidationError, match="subtype-category"):
        model.add_element(W, Subtype.FLAT_FLOOR, gen.rect(0, 0, 1, 1, 0))


def test_param_types(model):
    with pytest.raises(ValidationError, match="param-type"):
        model.add_element(W, Subtype.RECT_WALL, line(0, 1), {"Height": "tall"})
    with pytest.raises(ValidationError, match="param-type"):
        model.add_element(W, Subtype.RECT_WALL, line(0, 1), {"Comments": 5})


def test_patch_params_and_geometry(model):
    g = model.get(1).geometry
    model.patch_element(1, params={"Height": 4.0})
    assert model.get(1).params["Height"] == 4.0 and model.get(1).geometry == g
    model.patch_element(1, geometry=line(0, 20))
    assert model.get(1).geometry == line(0, 20) and model.get(1).params["Height"] == 4.0
    with pytest.raises(ElementReferenceError):
        model.patch_element(999, params={"Height": 1.0})


def test_remove_and_cascade(model):
    model.add_element(D, Subtype.HOSTED_INSTANCE, pt(1), host=1)
    model.add_element(C, Subtype.FREE_COLUMN, pt(5, 5))
    assert model.remove_element(1) == [1, 2]
    assert list(model.elements) == [3]
    with pytest.raises(ElementReferenceError):
        model.remove_element(1)


def test_remove_lone_wall(model):
    model.remove_element(1)
    assert len(model) == 0


def test_comment_index(model):
    wid = model.add_element(W, Subtype.RECT_WALL, line(0, 1), {"Comments": "1001"})
    assert model.lookup_by_comment("1001") == wid and model.lookup_by_comment(1001) == wid
    assert model.lookup_by_comment("42") is None
    with pytest.raises(ValidationError, match="comments-unique"):
        model.add_element(W, Subtype.RECT_WALL, line(0, 1), {"Comments": "1001"})
    model.add_element(W, Subtype.RECT_WALL, line(0, 1), {"Comments": "free text"})
    model.add_element(W, Subtype.RECT_WALL, line(0, 1), {"Comments": "free text"})  # non-ids are not indexed
    model.patch_element(wid, params={"Comments": "2002"})
    assert model.lookup_by_comment("1001") is None and model.lookup_by_comment("2002") == wid
    model.remove_element(wid)
    assert model.comment_index == model.rebuild_comment_index() == {}


def test_representative_points(model):
    assert representative_point(model.get(1)) == Point3(5, 0, 0)
    wid = model.add_element(WIN, Subtype.HOSTED_INSTANCE, pt(1, 2), host=1)
    assert representative_point(model.get(wid)) == Point3(1, 2, 0)
    fid = model.add_element(F, Subtype.FLAT_FLOOR, gen.rect(0, 0, 1, 1, 0))
    c = representative_point(model.get(fid))
    assert max(abs(c.x - 0.5), abs(c.y - 0.5), abs(c.z)) <= 1e-12


def test_volumes(model):
    fid = model.add_element(F, Subtype.FLAT_FLOOR, gen.rect(0, 0, 4, 4, 0), {"Thickness": 0.2})
    assert model.element_volume(fid) == pytest.approx(3.2, rel=1e-12)
    did = model.add_element(D, Subtype.HOSTED_INSTANCE, pt(1), {"Width": 0.9, "Height": 2.1}, host=1)
    assert model.element_volume(did) == pytest.approx(0.567, rel=1e-12)
    sid = model.add_element(F, Subtype.SLOPED_FLOOR, gen.rect(0, 0, 2, 2, 0), {"Thickness": 0.5, "SlopeAngle": math.pi / 3})
    assert model.element_volume(sid) == pytest.approx(4.0, rel=1e-12)
    cid = model.add_element(C, Subtype.FREE_COLUMN, pt(3, 3), {"b": 0.5, "h": 0.4, "Height": 3.0})
    assert model.element_volume(cid) == pytest.approx(0.6, rel=1e-12)
    sc = model.add_element(C, Subtype.SLANTED_COLUMN, Line(Point3(0, 0, 0), Point3(3, 0, 4)), {"b": 0.5, "h": 0.4})
    assert model.element_volume(sc) == pytest.approx(1.0, rel=1e-12)


def test_profile_wall_volume(model):
    prof = gen.profile(random.Random(3))
    pid = model.add_element(W, Subtype.PROFILE_WALL, prof, {"Width": 0.25})
    assert model.element_volume(pid) == pytest.approx(profile_area(prof) * 0.25, rel=1e-12)


def test_volume_needs_positive_dimensions(model):
    model.patch_element(1, params={"Height": 0.0})
    with pytest.raises(ValidationError, match="dimension-positive"):
        model.element_volume(1)


def test_volume_scales_cubically():
    events, truth = run_scenario(random_scenario(4, (6, 2, 2, 2, 4), 0.0))
    k = 1.7
    scaled = ModelState(truth.next_id)
    for e in sorted(truth.elements.values(), key=lambda r: r.id):
        params = dict(scale_params(e.params.items(), k))
        host = e.host
        scaled.elements[e.id] = type(e)(e.id, e.category, e.subtype, scale_geometry(e.geometry, k), params, host)
    for i in truth.elements:
        v = truth.element_volume(i)
        assert v > 0
        assert scaled.element_volume(i) == pytest.approx(k**3 * v, rel=1e-9)


def test_add_remove_inverse(model):
    before = dict(model.elements)
    nid = model.add_element(C, Subtype.FREE_COLUMN, pt(1, 1))
    model.remove_element(nid)
    assert model.elements == before


def test_dump_round_trip_is_byte_stable():
    _, truth = run_scenario(random_scenario(9, (5, 2, 2, 2, 3), 0.3))
    text = truth.dumps()
    back = ModelState.loads(text)
    assert back.dumps() == text
    assert back.comment_index == truth.comment_index and back.next_id == truth.next_id


def test_dump_layout(model):
    doc = json.loads(model.dumps())
    assert doc["schema"] == "bimlog.model" and doc["schemaVersion"] == 1 and doc["nextId"] == 2
    assert doc["elements"][0] == {
        "id": 1,
        "category": "Wall",
        "subtype": "RectWall",
        "geometry": "[Line, (0, 0, 0), (10, 0, 0)]",
        "params": "Height=3;Width=0.3;BaseOffset=0;Comments=''",
        "host": None,
    }


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.update(schemaVersion=2),
        lambda d: d.update(schema="other"),
        lambda d: d["elements"][0].update(geometry="[Line, (0, 0, 0)]"),
        lambda d: d["elements"][0].update(category="Roof"),
        lambda d: d["elements"][0].update(id=5),
        lambda d: d["elements"][0].pop("params"),
        lambda d: d["elements"].append(dict(d["elements"][0])),
    ],
)
def test_bad_dumps(model, mutate):
    doc = json.loads(model.dumps())
    mutate(doc)
    with pytest.raises(SchemaError):
        ModelState.from_json(doc)


def test_not_json():
    with pytest.raises(SchemaError):
        ModelState.loads("{")


def test_copy_is_independent(model):
    c = model.copy()
    c.remove_element(1)
    assert 1 in model and 1 not in c
