"""Reading and writing the line-oriented ``.rot`` surface format.

::

    surface NAME
    darts 2E
    vertex VID: d0 d1 ...        # clockwise
    hole HID role=ROLE verts=a,b,c
    fund EDGE_ID = (dart)

Twins are implicit (``d ^ 1``).  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path

from .surface import RotationSystem, SurfaceError, validate

__all__ = ["RotFormatError", "parse_rot", "dump_rot", "load_rot", "save_rot"]


class RotFormatError(SurfaceError):
    pass


_HOLE_RE = re.compile(r"^(\S+)((?:\s+\S+=\S+)*)$")
_FUND_RE = re.compile(r"^(\S+)\s*=\s*\(\s*(\d+)\s*\)$")


def parse_rot(text: str) -> RotationSystem:
    name = None
    ndarts = None
    rotation: dict[str, list[int]] = {}
    holes = []
    funds = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        where = f"line {lineno}"
        if key == "surface":
            if name is not None:
                raise RotFormatError(f"{where}: second surface line")
            if not rest or len(rest.split()) != 1:
                raise RotFormatError(f"{where}: surface needs one name")
            name = rest
        elif key == "darts":
            if ndarts is not None:
                raise RotFormatError(f"{where}: second darts line")
            if not rest.isdigit():
                raise RotFormatError(f"{where}: darts needs a count")
            ndarts = int(rest)
            if ndarts % 2:
                raise RotFormatError(f"{where}: odd dart count {ndarts}")
        elif key == "vertex":
            vid, colon, darts = rest.partition(":")
            vid = vid.strip()
            if not colon or not vid:
                raise RotFormatError(f"{where}: expected 'vertex VID: darts'")
            if vid in rotation:
                raise RotFormatError(f"{where}: vertex {vid} listed twice")
            try:
                rotation[vid] = [int(x) for x in darts.split()]
            except ValueError:
                raise RotFormatError(f"{where}: non-integer dart") from None
        elif key == "hole":
            m = _HOLE_RE.match(rest)
            if not m:
                raise RotFormatError(f"{where}: malformed hole")
            attrs = {}
            for item in m.group(2).split():
                k, _, v = item.partition("=")
                if k not in ("role", "verts") or k in attrs:
                    raise RotFormatError(f"{where}: unexpected hole attribute {k!r}")
                attrs[k] = v
            if set(attrs) != {"role", "verts"}:
                raise RotFormatError(f"{where}: hole needs role= and verts=")
            holes.append((m.group(1), attrs["role"], tuple(attrs["verts"].split(","))))
        elif key == "fund":
            m = _FUND_RE.match(rest)
            if not m:
                raise RotFormatError(f"{where}: expected 'fund NAME = (dart)'")
            funds.append((m.group(1), int(m.group(2))))
        else:
            raise RotFormatError(f"{where}: unknown key {key!r}")
    if name is None:
        raise RotFormatError("missing surface line")
    if ndarts is None:
        raise RotFormatError("missing darts line")
    return validate(rotation, name=name, holes=holes, funds=funds, dart_count=ndarts)


def dump_rot(T: RotationSystem) -> str:
    lines = [f"surface {T.name}", f"darts {T.dart_count}"]
    for v, darts in T.rotation.items():
        lines.append(f"vertex {v}: " + " ".join(map(str, darts)))
    for h in T.holes:
        lines.append(f"hole {h.name} role={h.role} verts={','.join(T.hole_cycle(h.name))}")
    for f in T.funds:
        lines.append(f"fund {f.name} = ({f.dart})")
    return "\n".join(lines) + "\n"


def load_rot(path: str | Path) -> RotationSystem:
    return parse_rot(Path(path).read_text())


def save_rot(T: RotationSystem, path: str | Path) -> None:
    Path(path).write_text(dump_rot(T))
