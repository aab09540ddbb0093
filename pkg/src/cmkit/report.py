"""Deterministic result reports for the command line.

Text and JSON renderings of the same ordered payload.  All numbers are exact:
integers stay integers, rationals become "p/q" strings.  Timing is attached
only when requested so default output is byte-identical across runs.
"""
from __future__ import annotations

import json
from fractions import Fraction

from . import __version__


def _exact(v):
    """Normalize a value to JSON-safe exact form."""
    if isinstance(v, bool) or isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        raise TypeError("refusing to put a float in a report")
    if isinstance(v, (list, tuple)):
        return [_exact(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _exact(x) for k, x in v.items()}
    return str(v)


def _text_value(v, indent="  "):
    v = _exact(v)
    if isinstance(v, dict):
        inner = ", ".join(f"{k}: {_inline(x)}" for k, x in v.items())
        return "{" + inner + "}"
    if isinstance(v, list):
        return _inline(v)
    return str(v)


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    return str(v)


class Report:
    def __init__(self, command: str, field_desc: str, order_desc: str):
        self.command = command
        self.meta = [
            ("engine", f"cmkit {__version__}"),
            ("field", field_desc),
            ("order", order_desc),
        ]
        self.sections: list[tuple[str, list]] = []
        self.timing_ms: int | None = None

    def section(self, title: str) -> "Section":
        entries: list = []
        self.sections.append((title, entries))
        return Section(entries)

    # -- rendering ---------------------------------------------------------

    def render_text(self) -> str:
        out = [f"command: {self.command}"]
        for k, v in self.meta:
            out.append(f"{k}: {v}")
        for title, entries in self.sections:
            out.append("")
            out.append(f"[{title}]")
            for key, value in entries:
                if isinstance(value, Block):
                    out.append(f"{key}:")
                    out.extend("  " + ln for ln in value.lines)
                else:
                    out.append(f"{key} = {_text_value(value)}")
        if self.timing_ms is not None:
            out.append("")
            out.append(f"timing-ms: {self.timing_ms}")
        return "\n".join(out) + "\n"

    def render_json(self) -> str:
        doc = {
            "command": self.command,
            **{k: v for k, v in self.meta},
            "sections": [
                {
                    "title": title,
                    "entries": {
                        key: (value.lines if isinstance(value, Block) else _exact(value))
                        for key, value in entries
                    },
                }
                for title, entries in self.sections
            ],
        }
        if self.timing_ms is not None:
            doc["timing-ms"] = self.timing_ms
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"


class Section:
    def __init__(self, entries: list):
        self._entries = entries

    def add(self, key: str, value) -> "Section":
        self._entries.append((key, value))
        return self

    def block(self, key: str, lines) -> "Section":
        self._entries.append((key, Block([str(ln) for ln in lines])))
        return self


class Block:
    """A multi-line text payload (table renderings and similar)."""

    def __init__(self, lines):
        self.lines = list(lines)
