"""Reproducibility metrics between an original model and its replay.

Per category, over matched element pairs:

* average distance between representative points, and
* average of ``100 * |V_reproduced - V_original| / V_original``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .codec import quantize_real
from .elements import CATEGORIES, Category
from .errors import BimLogError
from .model import ModelState, representative_point

MATCH_COMMENT = "comment"
MATCH_ID = "id"


@dataclass(frozen=True)
class Matching:
    pairs: list[tuple[int, int]]
    unmatched_original: list[int]
    unmatched_reproduced: list[int]


def match_by_comment(original: ModelState, reproduced: ModelState) -> Matching:
    """Pair elements whose ``Comments`` carries the other element's id.

    A link in either direction counts, and both elements must share a category.
    Elements with more than one candidate partner stay unmatched, which keeps
    the result symmetric in its arguments.
    """
    edges: set[tuple[int, int]] = set()
    orig_ids = {str(i): i for i in original.elements}
    repro_ids = {str(i): i for i in reproduced.elements}
    for r in reproduced.elements.values():
        o = orig_ids.get(r.comments)
        if o is not None:
            edges.add((o, r.id))
    for o in original.elements.values():
        r = repro_ids.get(o.comments)
        if r is not None:
            edges.add((o.id, r))
    edges = {(o, r) for o, r in edges if original.elements[o].category is reproduced.elements[r].category}
    deg_o = Counter(o for o, _ in edges)
    deg_r = Counter(r for _, r in edges)
    pairs = sorted((o, r) for o, r in edges if deg_o[o] == 1 and deg_r[r] == 1)
    return _matching(original, reproduced, pairs)


def match_by_id(original: ModelState, reproduced: ModelState) -> Matching:
    """Pair elements that share an id and a category."""
    pairs = sorted(
        (i, i)
        for i, o in original.elements.items()
        if i in reproduced.elements and reproduced.elements[i].category is o.category
    )
    return _matching(original, reproduced, pairs)


def _matching(original: ModelState, reproduced: ModelState, pairs: list[tuple[int, int]]) -> Matching:
    po = {o for o, _ in pairs}
    pr = {r for _, r in pairs}
    return Matching(
        pairs,
        sorted(i for i in original.elements if i not in po),
        sorted(i for i in reproduced.elements if i not in pr),
    )


@dataclass
class CategoryStats:
    category: Category | None
    matched: int = 0
    unmatched_original: int = 0
    unmatched_reproduced: int = 0
    avg_distance: float = 0.0
    avg_volume_diff_pct: float = 0.0
    volume_excluded: int = 0

    @property
    def empty(self) -> bool:
        return self.matched == 0

    def to_json(self) -> dict:
        doc = {
            "matched": self.matched,
            "unmatchedOriginal": self.unmatched_original,
            "unmatchedReproduced": self.unmatched_reproduced,
            "avgDistance": quantize_real(self.avg_distance),
            "avgVolumeDiffPct": quantize_real(self.avg_volume_diff_pct),
            "volumeExcluded": self.volume_excluded,
            "empty": self.empty,
        }
        if self.category is not None:
            doc = {"category": self.category.value, **doc}
        return doc


@dataclass
class DiffReport:
    categories: dict[Category, CategoryStats]
    total: CategoryStats
    match_method: str
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "matchMethod": self.match_method,
            "categories": [self.categories[c].to_json() for c in CATEGORIES],
            "total": self.total.to_json(),
            "diagnostics": list(self.diagnostics),
        }

    def to_table(self) -> str:
        head = ("category", "matched", "unm.orig", "unm.repr", "avg distance", "avg vol diff %")
        rows = [
            (
                s.category.value if s.category is not None else "total",
                str(s.matched),
                str(s.unmatched_original),
                str(s.unmatched_reproduced),
                f"{s.avg_distance:.4E}",
                f"{s.avg_volume_diff_pct:.4f}" + (" (empty)" if s.empty else ""),
            )
            for s in [*(self.categories[c] for c in CATEGORIES), self.total]
        ]
        widths = [max(len(r[i]) for r in [head, *rows]) for i in range(len(head))]
        fmt = lambda r: "  ".join(v.ljust(w) if i == 0 else v.rjust(w) for i, (v, w) in enumerate(zip(r, widths)))
        lines = [fmt(head), "  ".join("-" * w for w in widths), *map(fmt, rows)]
        lines.append(f"match method: {self.match_method}")
        lines += [f"note: {d}" for d in self.diagnostics]
        return "\n".join(lines)


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs) if xs else 0.0


def diff_models(original: ModelState, reproduced: ModelState, method: str = MATCH_COMMENT) -> DiffReport:
    """Compare two models element by element.

    Pairs whose original volume is zero (or cannot be computed) are left out
    of the volume average and reported in ``diagnostics``.
    """
    if method == MATCH_COMMENT:
        m = match_by_comment(original, reproduced)
    elif method == MATCH_ID:
        m = match_by_id(original, reproduced)
    else:
        raise ValueError(f"unknown match method {method!r}")

    dists: dict[Category, list[float]] = {c: [] for c in CATEGORIES}
    vols: dict[Category, list[float]] = {c: [] for c in CATEGORIES}
    excluded: Counter = Counter()
    notes: list[str] = []
    for o, r in m.pairs:
        rec_o, rec_r = original.elements[o], reproduced.elements[r]
        cat = rec_o.category
        dists[cat].append(representative_point(rec_o).distance_to(representative_point(rec_r)))
        try:
            v_o = original.element_volume(o)
            v_r = reproduced.element_volume(r)
        except BimLogError as exc:
            excluded[cat] += 1
            notes.append(f"pair ({o}, {r}) left out of volume average: {exc}")
            continue
        if v_o == 0.0:
            excluded[cat] += 1
            notes.append(f"pair ({o}, {r}) left out of volume average: original volume is zero")
            continue
        vols[cat].append(100.0 * abs(v_r - v_o) / v_o)

    unm_o = Counter(original.elements[i].category for i in m.unmatched_original)
    unm_r = Counter(reproduced.elements[i].category for i in m.unmatched_reproduced)
    stats = {
        c: CategoryStats(
            c,
            matched=len(dists[c]),
            unmatched_original=unm_o[c],
            unmatched_reproduced=unm_r[c],
            avg_distance=_mean(dists[c]),
            avg_volume_diff_pct=_mean(vols[c]),
            volume_excluded=excluded[c],
        )
        for c in CATEGORIES
    }
    all_d = [d for c in CATEGORIES for d in dists[c]]
    all_v = [v for c in CATEGORIES for v in vols[c]]
    total = CategoryStats(
        None,
        matched=len(m.pairs),
        unmatched_original=len(m.unmatched_original),
        unmatched_reproduced=len(m.unmatched_reproduced),
        avg_distance=_mean(all_d),
        avg_volume_diff_pct=_mean(all_v),
        volume_excluded=sum(excluded.values()),
    )
    return DiffReport(stats, total, method, notes)
