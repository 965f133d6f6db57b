"""Rebuild a model by replaying logged events in order.

ADDED events create the element and stamp the logged element id into its
``Comments`` parameter. MODIFIED and DELETED events find their target through
that stamp, so ids in the log never need to match ids in the rebuilt model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .codec import Command, LogEvent
from .diagnostics import Diagnostic
from .elements import CATEGORIES, COMMENTS, Category
from .errors import BimLogError, ElementReferenceError, ValidationError
from .model import ModelState

STRICT = "strict"
LENIENT = "lenient"


class ReplayError(BimLogError):
    """Strict replay stopped at an event it could not apply."""

    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass
class ReplayReport:
    events_applied: int = 0
    events_skipped: int = 0
    per_command: dict[Command, int] = field(default_factory=lambda: {c: 0 for c in Command})
    warnings: list[Diagnostic] = field(default_factory=list)
    final_counts: dict[Category, int] = field(default_factory=lambda: {c: 0 for c in CATEGORIES})

    def summary(self) -> str:
        cmds = ", ".join(f"{c.value}={n}" for c, n in self.per_command.items())
        counts = ", ".join(f"{c.value}={n}" for c, n in self.final_counts.items())
        return (
            f"applied {self.events_applied} events ({cmds}); skipped {self.events_skipped}; "
            f"{len(self.warnings)} diagnostics\nfinal elements: {counts}"
        )

    def to_json(self) -> dict:
        return {
            "eventsApplied": self.events_applied,
            "eventsSkipped": self.events_skipped,
            "perCommand": {c.value: n for c, n in self.per_command.items()},
            "finalCounts": {c.value: n for c, n in self.final_counts.items()},
            "diagnostics": [d.to_json() for d in self.warnings],
        }


def _diag(e: LogEvent, code: str, message: str) -> Diagnostic:
    return Diagnostic(code, message, seq=e.seq)


def apply_event(model: ModelState, e: LogEvent) -> Diagnostic | None:
    """Apply one event; return a diagnostic instead of raising when it cannot be applied.

    A returned diagnostic means the model was left untouched.
    """
    original = str(e.element_id)
    try:
        if e.command is Command.ADDED:
            if model.lookup_by_comment(original) is not None:
                return _diag(e, "duplicate-original-id", f"element {original} was already added")
            host = None
            if e.host_ref is not None:
                host = model.lookup_by_comment(e.host_ref)
                if host is None:
                    return _diag(e, "dangling-reference", f"host {e.host_ref} has no replayed element")
            params = dict(e.params)
            params[COMMENTS] = original
            model.add_element(e.category, e.subtype, e.geometry, params, host)
            return None

        target = model.lookup_by_comment(original)
        if target is None:
            return _diag(e, "dangling-reference", f"{e.command.value} of element {original}, which is not live")
        rec = model.get(target)
        if rec.category is not e.category:
            return _diag(e, "category-mismatch", f"element {original} is a {rec.category}, event says {e.category}")
        if e.command is Command.MODIFIED:
            if COMMENTS in e.param_dict:
                return _diag(e, "forbidden-comments", f"{COMMENTS} carries the original id and cannot be modified")
            model.patch_element(target, e.geometry, e.param_dict)
        else:
            model.remove_element(target)
        return None
    except (ValidationError, ElementReferenceError) as exc:
        return _diag(e, "invalid-event", str(exc))


def replay_log(
    events: Iterable[LogEvent],
    mode: str = LENIENT,
    on_event: Callable[[LogEvent, ModelState], None] | None = None,
    model: ModelState | None = None,
) -> tuple[ModelState, ReplayReport]:
    """Replay ``events`` in order into a fresh model (or ``model`` if given).

    Lenient mode skips events that cannot be applied and records a diagnostic;
    strict mode raises ``ReplayError`` at the first one. ``on_event`` is called
    after each event with the model as it stands.
    """
    if mode not in (STRICT, LENIENT):
        raise ValueError(f"mode must be {STRICT!r} or {LENIENT!r}, got {mode!r}")
    model = ModelState() if model is None else model
    report = ReplayReport()
    for e in events:
        diag = apply_event(model, e)
        if diag is None:
            report.events_applied += 1
            report.per_command[e.command] += 1
        else:
            if mode == STRICT:
                raise ReplayError(diag)
            report.events_skipped += 1
            report.warnings.append(diag)
        if on_event is not None:
            on_event(e, model)
    report.final_counts = model.counts()
    return model, report
