"""Hypothesis properties over the codec, geometry, model, replay and diff."""

import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import gen
import oracles
from bimlog.codec import (
    Command,
    LogEvent,
    dumps_log,
    format_event,
    format_params,
    loads_log,
    parse_event,
    parse_geometry,
    parse_params,
    quantize_geometry,
    quantize_real,
    serialize_geometry,
)
from bimlog.diff import diff_models, match_by_comment
from bimlog.elements import CATEGORIES, REAL_PARAMS, Category, ElementRef, Subtype
from bimlog.geometry import LocationPoint, Point3, curve_length, transform_geometry
from bimlog.loops import loop_area
from bimlog.model import ModelState
from bimlog.replay import STRICT, replay_log
from bimlog.sim import random_scenario, run_scenario

# drawn Random objects make examples large by nature
_QUIET = [HealthCheck.too_slow, HealthCheck.large_base_example, HealthCheck.data_too_large]
FAST = settings(max_examples=60, deadline=None, suppress_health_check=_QUIET)
SLOW = settings(max_examples=15, deadline=None, suppress_health_check=_QUIET)

variants = st.sampled_from(sorted(gen.VARIANTS))
rngs = st.randoms(use_true_random=False)


def rotation(r):
    x, y = gen.frame(r)
    return np.array([tuple(x), tuple(y), tuple(x.cross(y))])


# -- codec ------------------------------------------------------------------------------


@FAST
@given(variants, rngs)
def test_geometry_round_trip(name, r):
    g = gen.VARIANTS[name](r)
    back = parse_geometry(serialize_geometry(g))
    assert gen.shape_of(back) == gen.shape_of(g)
    assert gen.reals_of(back) == [oracles.sig9(v) for v in gen.reals_of(g)]


@FAST
@given(variants, rngs)
def test_serialize_parse_is_idempotent(name, r):
    text = serialize_geometry(gen.VARIANTS[name](r))
    once = serialize_geometry(parse_geometry(text))
    assert once == text
    assert quantize_geometry(parse_geometry(text)) == parse_geometry(text)


@FAST
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_real_quantization_is_stable(x):
    q = quantize_real(x)
    assert quantize_real(q) == q
    if x != 0.0:
        assert abs(q - x) <= 5e-9 * abs(x)


names = st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,8}", fullmatch=True)
values = st.one_of(
    st.text().filter(lambda t: "\x00" not in t),
    st.booleans(),
    st.integers(-10**12, 10**12),
    st.floats(allow_nan=False, allow_infinity=False).map(quantize_real),
    st.integers(1, 10**9).map(ElementRef),
)


def _as_read(name, v):
    # real-valued canonical names always read back as floats
    if name in REAL_PARAMS and isinstance(v, int) and not isinstance(v, (bool, ElementRef)):
        return float(v)
    return v


@FAST
@given(st.dictionaries(names, values, max_size=6))
def test_params_round_trip(params):
    items = tuple(params.items())
    back = parse_params(format_params(items))
    assert back == tuple((n, _as_read(n, v)) for n, v in items)
    for (_, a), (_, b) in zip(back, items):
        assert type(a) is type(_as_read("", b)) or isinstance(b, int)


_SUBTYPE_GEOMETRY = {
    Subtype.RECT_WALL: lambda r: gen.VARIANTS[r.choice(["Line", "Arc", "Ellipse", "NurbsSpline", "HermiteSpline", "CylindricalHelix"])](r),
    Subtype.PROFILE_WALL: gen.profile,
    Subtype.FLAT_FLOOR: gen.curve_loop,
    Subtype.SLOPED_FLOOR: gen.curve_loop,
    Subtype.HOSTED_INSTANCE: gen.location_point,
    Subtype.FREE_COLUMN: gen.location_point,
    Subtype.SLANTED_COLUMN: gen.line,
}
_CATEGORY_OF = {
    Subtype.RECT_WALL: Category.WALL,
    Subtype.PROFILE_WALL: Category.WALL,
    Subtype.FLAT_FLOOR: Category.FLOOR,
    Subtype.SLOPED_FLOOR: Category.FLOOR,
    Subtype.FREE_COLUMN: Category.COLUMN,
    Subtype.SLANTED_COLUMN: Category.COLUMN,
}


@st.composite
def events(draw):
    r = draw(rngs)
    seq = draw(st.integers(1, 10**6))
    command = draw(st.sampled_from(list(Command)))
    subtype = draw(st.sampled_from(list(Subtype)))
    category = _CATEGORY_OF.get(subtype) or draw(st.sampled_from([Category.WINDOW, Category.DOOR]))
    eid = draw(st.integers(1, 10**9))
    params = tuple(draw(st.dictionaries(names, values, max_size=4)).items())
    params = tuple((n, _as_read(n, v)) for n, v in params)
    geometry = host = None
    if command is Command.DELETED:
        params = ()
    else:
        if command is Command.ADDED or not params or r.random() < 0.5:
            geometry = quantize_geometry(_SUBTYPE_GEOMETRY[subtype](r))
        if command is Command.ADDED and subtype is Subtype.HOSTED_INSTANCE:
            host = draw(st.integers(1, 10**9))
    return LogEvent(seq, command, eid, category, subtype, geometry, params, host)


@FAST
@given(events())
def test_event_round_trip(e):
    assert parse_event(format_event(e), e.seq) == e


@SLOW
@given(st.lists(events(), max_size=8))
def test_log_round_trip(evs):
    evs = [LogEvent(k, e.command, e.element_id, e.category, e.subtype, e.geometry, e.params, e.host_ref) for k, e in enumerate(evs, 1)]
    back, diags = loads_log(dumps_log(evs), strict=True)
    assert back == evs and diags == []


# -- geometry ----------------------------------------------------------------------------------


@FAST
@given(st.sampled_from(["Line", "Arc", "CylindricalHelix", "Ellipse", "NurbsSpline", "HermiteSpline"]), rngs)
def test_length_invariant_under_rigid_motion(name, r):
    c = gen.VARIANTS[name](r)
    moved = transform_geometry(c, rotation(r), gen.point(r, 100))
    assert math.isclose(curve_length(moved), curve_length(c), rel_tol=1e-9)


@FAST
@given(rngs)
def test_area_invariant_under_rigid_motion(r):
    lp = gen.curve_loop(r)
    moved = transform_geometry(lp, rotation(r), gen.point(r, 100))
    assert math.isclose(loop_area(moved), loop_area(lp), rel_tol=1e-9)


# -- model -----------------------------------------------------------------------------------------


@FAST
@given(rngs, st.lists(st.integers(0, 3), min_size=1, max_size=40))
def test_comment_index_stays_consistent(r, ops):
    m = ModelState()
    for op in ops:
        live = sorted(m.elements)
        walls = [i for i in live if m.get(i).category is Category.WALL]
        comment = str(r.randint(1, 30)) if r.random() < 0.8 else "note"
        try:
            if op == 0 or not live:
                m.add_element(Category.WALL, Subtype.RECT_WALL, gen.line(r), {"Comments": comment})
            elif op == 1 and walls:
                m.add_element(Category.DOOR, Subtype.HOSTED_INSTANCE, gen.location_point(r), {"Comments": comment}, r.choice(walls))
            elif op == 2:
                m.patch_element(r.choice(live), params={"Comments": comment})
            else:
                m.remove_element(r.choice(live))
        except Exception as exc:  # only uniqueness clashes are expected
            assert "comments-unique" in str(exc)
        assert m.comment_index == m.rebuild_comment_index()
        assert all(i in m.elements for i in m.comment_index.values())
        assert all(e.host is None or e.host in m.elements for e in m.elements.values())


# -- replay and diff -----------------------------------------------------------------------------------

scenarios = st.tuples(
    st.integers(1, 10**6),
    st.tuples(st.integers(1, 6), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 4)),
    st.sampled_from([0.0, 0.25, 0.5, 0.75]),
)


@SLOW
@given(scenarios)
def test_replay_is_deterministic_and_lossless(sc):
    seed, counts, churn = sc
    events, truth = run_scenario(random_scenario(seed, counts, churn))
    parsed, _ = loads_log(dumps_log(events), strict=True)
    a, rep = replay_log(parsed, STRICT)
    b, _ = replay_log(parsed, STRICT)
    assert a.dumps() == b.dumps() and not rep.warnings
    report = diff_models(truth, a)
    assert report.total.matched == len(truth)
    for c in CATEGORIES:
        assert report.categories[c].avg_distance == 0.0 and report.categories[c].avg_volume_diff_pct == 0.0
    # net-count law
    assert a.counts() == truth.counts()


@SLOW
@given(scenarios, rngs)
def test_matching_symmetric_under_damage(sc, r):
    seed, counts, churn = sc
    events, truth = run_scenario(random_scenario(seed, counts, churn))
    replayed, _ = replay_log(events, STRICT)
    gone = []
    for i in r.sample(sorted(replayed.elements), k=min(2, len(replayed))):
        if i in replayed:
            doomed = [i] + replayed.hosted_by(i)
            gone += [replayed.get(j).comments for j in doomed]
            replayed.remove_element(i)
    # a stray element claiming a removed original id, plus one pointing at a truth id by number
    replayed.add_element(Category.COLUMN, Subtype.FREE_COLUMN, LocationPoint(Point3(1, 1, 0)), {"Comments": r.choice(gone)})
    replayed.add_element(Category.COLUMN, Subtype.FREE_COLUMN, LocationPoint(Point3(2, 1, 0)))
    ab, ba = match_by_comment(truth, replayed), match_by_comment(replayed, truth)
    assert sorted((y, x) for x, y in ab.pairs) == ba.pairs
    assert ab.unmatched_original == ba.unmatched_reproduced and ab.unmatched_reproduced == ba.unmatched_original
