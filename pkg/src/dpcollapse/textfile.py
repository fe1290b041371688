"""Line-oriented ``key = value unit`` records shared by material and config files.

Format::

    # comment
    [section]          # optional; starts a new record
    key = 20 V         # trailing comments are allowed
    dotted.key = 0.2 mm

Keys are returned with their 1-based line numbers so that validation errors
can point back into the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DimensionError
from .quantities import Quantity, parse_quantity

_SECTION = re.compile(r"^\[\s*([^\]]+?)\s*\]$")
_ENTRY = re.compile(r"^([A-Za-z_][\w.\-]*)\s*=\s*(.*)$")


@dataclass(frozen=True)
class Entry:
    key: str
    text: str
    line: int
    section: str | None = None

    def quantity(self, dimension: str, source=None) -> Quantity:
        try:
            return parse_quantity(self.text, dimension)
        except DimensionError as exc:
            raise ConfigError(str(exc), key=self.key, line=self.line, source=source) from None

    def si(self, dimension: str, source=None) -> float:
        return self.quantity(dimension, source).si

    def boolean(self, source=None) -> bool:
        t = self.text.lower()
        if t in ("true", "yes", "on", "1"):
            return True
        if t in ("false", "no", "off", "0"):
            return False
        raise ConfigError(f"expected a boolean, got '{self.text}'", key=self.key, line=self.line, source=source)


def parse_records(text: str, source=None) -> list[Entry]:
    entries: list[Entry] = []
    seen: set[tuple[str | None, str]] = set()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            section = m.group(1)
            continue
        m = _ENTRY.match(line)
        if not m:
            raise ConfigError(f"cannot parse '{raw.strip()}'", line=lineno, source=source)
        key, value = m.group(1), m.group(2).strip()
        if not value:
            raise ConfigError("empty value", key=key, line=lineno, source=source)
        if (section, key) in seen:
            raise ConfigError("duplicate key", key=key, line=lineno, source=source)
        seen.add((section, key))
        entries.append(Entry(key, value, lineno, section))
    return entries


def read_records(path, source=None) -> list[Entry]:
    path = Path(path)
    return parse_records(path.read_text(encoding="utf-8"), source or path.name)
