import json

import pytest

from bimlog.codec import Command, dumps_log
from bimlog.elements import CATEGORIES, HOSTED_CATEGORIES, Category, ElementRef, Subtype
from bimlog.errors import ScenarioError
from bimlog.geometry import Line, LocationPoint, Point3
from bimlog.model import representative_point
from bimlog.replay import STRICT, replay_log
from bimlog.sim import (
    DEFAULT_FIRST_ID,
    AddStep,
    DeleteStep,
    ModifyStep,
    dumps_scenario,
    loads_scenario,
    normalize_counts,
    random_scenario,
    run_scenario,
)

WALL = Line(Point3(0, 0, 0), Point3(10, 0, 0))


def test_single_add():
    events, m = run_scenario([AddStep("w1", "Wall", "RectWall", WALL)])
    assert [e.command for e in events] == [Command.ADDED]
    assert events[0].element_id == DEFAULT_FIRST_ID and len(m) == 1


def test_add_modify_delete():
    steps = [AddStep("w1", Category.WALL, Subtype.RECT_WALL, WALL), ModifyStep("w1", params={"Height": 4.0}), DeleteStep("w1")]
    events, m = run_scenario(steps)
    assert [e.command for e in events] == [Command.ADDED, Command.MODIFIED, Command.DELETED]
    assert events[1].params == (("Height", 4.0),)
    assert len(m) == 0


def test_added_event_carries_full_params_without_comments():
    events, _ = run_scenario([AddStep("w1", "Wall", "RectWall", WALL, {"Height": 2.5})])
    assert [n for n, _ in events[0].params] == ["Height", "Width", "BaseOffset"]


def test_hosted_add_logs_host_id():
    steps = [
        AddStep("w1", "Wall", "RectWall", WALL),
        AddStep("d1", "Door", "HostedInstance", LocationPoint(Point3(2, 0, 0)), host_tag="w1"),
    ]
    events, _ = run_scenario(steps, first_id=50)
    assert events[1].host_ref == 50 and events[1].element_id == 51


def test_cascade_unbinds_hosted_tags():
    steps = [
        AddStep("w1", "Wall", "RectWall", WALL),
        AddStep("d1", "Door", "HostedInstance", LocationPoint(Point3(2, 0, 0)), host_tag="w1"),
        DeleteStep("w1"),
        DeleteStep("d1"),
    ]
    with pytest.raises(ScenarioError, match="step 3"):
        run_scenario(steps)


@pytest.mark.parametrize(
    "steps, fragment",
    [
        ([ModifyStep("w1", params={"Height": 1.0})], "not bound"),
        ([AddStep("w1", "Wall", "RectWall", WALL), AddStep("w1", "Wall", "RectWall", WALL)], "already bound"),
        ([AddStep("w1", "Wall", "RectWall", WALL), ModifyStep("w1")], "changes nothing"),
        ([AddStep("w1", "Wall", "RectWall", WALL, {"Comments": "x"})], "reserved"),
        ([AddStep("d", "Door", "HostedInstance", LocationPoint(Point3(0, 0, 0)), host_tag="w9")], "host tag"),
        ([AddStep("w1", "Wall", "RectWall", LocationPoint(Point3(0, 0, 0)))], "step 0"),
        ([DeleteStep("x")], "not bound"),
    ],
)
def test_scenario_errors(steps, fragment):
    with pytest.raises(ScenarioError, match=fragment):
        run_scenario(steps)


def test_one_wall_no_churn():
    steps = random_scenario(1, (1, 0, 0, 0, 0), 0.0)
    assert len(steps) == 1 and isinstance(steps[0], AddStep) and steps[0].category is Category.WALL


def test_seed_determinism():
    a = random_scenario(7, (10, 2, 3, 4, 5), 0.6)
    b = random_scenario(7, (10, 2, 3, 4, 5), 0.6)
    assert dumps_scenario(a) == dumps_scenario(b)
    assert dumps_log(run_scenario(a)[0]) == dumps_log(run_scenario(b)[0])
    assert dumps_scenario(random_scenario(8, (10, 2, 3, 4, 5), 0.6)) != dumps_scenario(a)


@pytest.mark.parametrize("seed", range(1, 16))
def test_net_counts_and_event_total(seed):
    counts = (seed % 7 + 1, seed % 3, seed % 4, seed % 5, seed % 6)
    churn = (seed % 10) / 10
    events, truth = run_scenario(random_scenario(seed, counts, churn))
    assert [truth.counts()[c] for c in CATEGORIES] == list(counts)
    assert len(events) == round(sum(counts) / (1 - churn))
    model, rep = replay_log(events, STRICT)
    assert not rep.warnings and model.counts() == truth.counts()
    for e in truth.elements.values():
        if e.category in HOSTED_CATEGORIES:
            assert truth.get(e.host).category is Category.WALL


def test_generated_geometry_stays_on_site():
    _, truth = run_scenario(random_scenario(3, (20, 4, 4, 4, 8), 0.5))
    for e in truth.elements.values():
        p = representative_point(e)
        assert 0.0 <= p.x <= 100 and 0.0 <= p.y <= 100 and 0.0 <= p.z <= 20


@pytest.mark.parametrize(
    "counts, churn",
    [((1, 2, 3), 0.0), ((1, 0, 0, 0, -1), 0.0), ((0, 0, 1, 0, 0), 0.0), ((1, 0, 0, 0, 0), 1.0), ((1, 0, 0, 0, 0), -0.1)],
)
def test_infeasible_requests(counts, churn):
    with pytest.raises(ScenarioError):
        random_scenario(1, counts, churn)


def test_counts_mapping():
    assert normalize_counts({"Wall": 2, Category.DOOR: 1}) == {
        Category.WALL: 2, Category.FLOOR: 0, Category.WINDOW: 0, Category.DOOR: 1, Category.COLUMN: 0,
    }


def test_empty_scenario():
    assert random_scenario(1, (0, 0, 0, 0, 0), 0.5) == []


def test_scenario_json_round_trip():
    steps = random_scenario(2, (5, 2, 2, 2, 3), 0.5)
    text = dumps_scenario(steps)
    back = loads_scenario(text)
    assert dumps_scenario(back) == text
    assert dumps_log(run_scenario(back)[0]) == dumps_log(run_scenario(steps)[0])


def test_scenario_json_layout():
    steps = [
        AddStep("w1", "Wall", "RectWall", WALL, {"Height": 3.0, "Mark": "A", "Link": ElementRef(3)}),
        ModifyStep("w1", params={"Height": 4.0}),
        DeleteStep("w1"),
    ]
    doc = json.loads(dumps_scenario(steps))
    assert doc[0] == {
        "kind": "add", "tag": "w1", "category": "Wall", "subtype": "RectWall",
        "geometry": "[Line, (0, 0, 0), (10, 0, 0)]", "params": {"Height": 3.0, "Mark": "A", "Link": {"ref": 3}},
        "hostTag": None,
    }
    assert doc[1] == {"kind": "modify", "tag": "w1", "geometry": None, "params": {"Height": 4.0}}
    assert doc[2] == {"kind": "delete", "tag": "w1"}
    assert loads_scenario(json.dumps(doc))[0].params["Link"] == ElementRef(3)


@pytest.mark.parametrize(
    "text",
    ["{}", "[", '[{"kind": "jump", "tag": "a"}]', '[{"kind": "add", "tag": "a"}]', '[{"kind": "add", "tag": "a", "category": "Wall", "subtype": "RectWall", "geometry": "[Line"}]'],
)
def test_bad_scenario_files(text):
    with pytest.raises(ScenarioError):
        loads_scenario(text)
