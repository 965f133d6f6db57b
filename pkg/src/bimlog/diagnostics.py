"""Row- and event-level diagnostics reported by the reader and the replay engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    row: int | None = None
    seq: int | None = None
    column: str | None = None

    def __str__(self) -> str:
        where = []
        if self.row is not None:
            where.append(f"row {self.row}")
        if self.seq is not None:
            where.append(f"seq {self.seq}")
        if self.column:
            where.append(f"column {self.column}")
        prefix = ", ".join(where)
        return f"{prefix}: [{self.code}] {self.message}" if prefix else f"[{self.code}] {self.message}"

    def to_json(self) -> dict:
        return {"code": self.code, "message": self.message, "row": self.row, "seq": self.seq, "column": self.column}
