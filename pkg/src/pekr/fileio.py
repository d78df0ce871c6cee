"""Family files: text and JSON serialization with parse diagnostics.

Text format: a header line `n=<N>` (optionally `n=<N> t=<T>`), then one
partition per line in block form (`1,5|2|3|4`).  `#` starts a comment, full
line or trailing; blank lines are ignored.  Members are emitted in ascending
rank order, so emit-then-parse is the identity.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import DuplicateMember, HeaderMismatch, ParseError, PekrError
from .families import PartitionFamily
from .partition import SetPartition, rank

_HEADER = re.compile(r"^n=(\d+)(?:\s+t=(\d+))?$")


def parse_family_text(text: str) -> tuple[PartitionFamily, int | None]:
    """Parse the text format; returns (family, t-from-header-or-None)."""
    n = None
    t = None
    ranks: list[int] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError(f"expected header like 'n=5 t=1', got {line!r}", line=lineno)
            n = int(m.group(1))
            t = int(m.group(2)) if m.group(2) else None
            if n < 1:
                raise ParseError("header n must be >= 1", line=lineno)
            continue
        try:
            p = SetPartition.from_text(line, n=None)
        except ParseError as exc:
            raise ParseError(str(exc), line=lineno) from None
        except PekrError as exc:
            raise type(exc)(f"{exc} (line {lineno})") from None
        if p.n != n:
            # elements beyond n, or a partition that does not reach n
            raise HeaderMismatch(
                f"member covers 1..{p.n} but header says n={n}", line=lineno
            )
        r = rank(p)
        if r in seen:
            raise DuplicateMember(
                f"partition {p.to_text()!r} already given at line {seen[r]}", line=lineno
            )
        seen[r] = lineno
        ranks.append(r)
    if n is None:
        raise ParseError("missing header line 'n=<N>'", line=1)
    return PartitionFamily(n, tuple(ranks)), t


def _parse_json_obj(obj) -> tuple[PartitionFamily, int | None]:
    try:
        n = int(obj["n"])
        members = obj["members"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad family JSON: {exc}") from None
    t = int(obj["t"]) if obj.get("t") is not None else None
    parts = [SetPartition.from_text(m, n=None) for m in members]
    for p in parts:
        if p.n != n:
            raise HeaderMismatch(f"member covers 1..{p.n} but JSON says n={n}")
    fam = PartitionFamily.from_partitions(n, parts)
    if len(fam) != len(parts):
        raise DuplicateMember("duplicate members in JSON family")
    return fam, t


def parse_family_file(path: str | Path) -> tuple[PartitionFamily, int | None]:
    """Read a family from a text or JSON file (sniffed by first character)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return _parse_json_obj(json.loads(text))
    return parse_family_text(text)


def family_to_text(family: PartitionFamily, t: int | None = None) -> str:
    header = f"n={family.n}" + (f" t={t}" if t is not None else "")
    lines = [header] + [p.to_text() for p in family]
    return "\n".join(lines) + "\n"


def family_to_json(family: PartitionFamily, t: int | None = None) -> str:
    obj = {
        "n": family.n,
        "t": t,
        "members": [p.to_text() for p in family],
    }
    return json.dumps(obj, indent=2) + "\n"


def emit_family(
    family: PartitionFamily,
    path: str | Path,
    fmt: str = "text",
    t: int | None = None,
) -> None:
    if fmt == "text":
        Path(path).write_text(family_to_text(family, t))
    elif fmt == "json":
        Path(path).write_text(family_to_json(family, t))
    else:
        raise ParseError(f"unknown family format {fmt!r}")
