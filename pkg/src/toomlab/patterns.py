"""Text formats: pattern files (``.toom``), cut specs, failure lists, ASCII render.

A pattern file::

    # optional comments
    space: plane            (or: space: torus 5)
    origin: 2 3             (plane only, default 0 0)
    o.
    .o

'o' marks an occupied site.  The top grid row is the largest y.
"""

from __future__ import annotations

from .cuts import Cut
from .lattice import PLANE, Site, SiteSet, Space, torus
from .rules import FailureEvent


class PatternError(ValueError):
    pass


def _content_lines(text: str):
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line


def _parse_space(value: str) -> Space:
    parts = value.split()
    if parts == ["plane"]:
        return PLANE
    if len(parts) == 2 and parts[0] == "torus":
        try:
            return torus(int(parts[1]))
        except ValueError as exc:
            raise PatternError(f"bad torus declaration {value!r}: {exc}") from None
    raise PatternError(f"malformed space declaration {value!r}")


def parse_pattern(text: str) -> SiteSet:
    lines = list(_content_lines(text))
    if not lines or not lines[0].startswith("space:"):
        raise PatternError("pattern must start with a 'space:' header")
    space = _parse_space(lines[0][len("space:"):].strip())
    origin = (0, 0)
    rows = lines[1:]
    if rows and rows[0].startswith("origin:"):
        if space.is_torus:
            raise PatternError("torus patterns have a fixed origin")
        try:
            ox, oy = (int(v) for v in rows[0][len("origin:"):].split())
        except ValueError:
            raise PatternError(f"malformed origin line {rows[0]!r}") from None
        origin = (ox, oy)
        rows = rows[1:]
    grid = ["".join(r.split()) for r in rows]
    for r in grid:
        bad = set(r) - {"o", "."}
        if bad:
            raise PatternError(f"unexpected characters {sorted(bad)} in grid row {r!r}")
    if grid and len({len(r) for r in grid}) != 1:
        raise PatternError("ragged grid rows")
    if space.is_torus and (len(grid) != space.n or any(len(r) != space.n for r in grid)):
        raise PatternError(f"torus {space.n} pattern needs an {space.n}x{space.n} grid")
    H = len(grid)
    sites = []
    for r, row in enumerate(grid):
        y = origin[1] + (H - 1 - r)
        for c, ch in enumerate(row):
            if ch == "o":
                sites.append((origin[0] + c, y))
    return SiteSet(sites, space)


def _grid_rows(S: SiteSet, x0: int, y0: int, width: int, height: int) -> list[str]:
    rows = []
    for y in range(y0 + height - 1, y0 - 1, -1):
        rows.append("".join("o" if (x, y) in S.members else "." for x in range(x0, x0 + width)))
    return rows


def serialize_pattern(S: SiteSet) -> str:
    if S.space.is_torus:
        n = S.space.n
        rows = _grid_rows(S, 0, 0, n, n)
        return "\n".join([f"space: torus {n}", *rows]) + "\n"
    if not S:
        return "space: plane\norigin: 0 0\n"
    xs = [p[0] for p in S.members]
    ys = [p[1] for p in S.members]
    x0, y0 = min(xs), min(ys)
    rows = _grid_rows(S, x0, y0, max(xs) - x0 + 1, max(ys) - y0 + 1)
    return "\n".join(["space: plane", f"origin: {x0} {y0}", *rows]) + "\n"


def render_ascii(S: SiteSet, window: tuple[int, int, int, int] | None = None, pad: int = 1) -> str:
    """Picture of S; ``window`` is (x0, y0, width, height)."""
    if window is None:
        if S.space.is_torus:
            window = (0, 0, S.space.n, S.space.n)
        elif S:
            xs = [p[0] for p in S.members]
            ys = [p[1] for p in S.members]
            window = (min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 1 + 2 * pad, max(ys) - min(ys) + 1 + 2 * pad)
        else:
            window = (0, 0, 1, 1)
    return "\n".join(_grid_rows(S, *window)) + "\n"


def _parse_sites(chunk: str) -> list[Site]:
    out = []
    for tok in chunk.split():
        try:
            x, y = tok.split(",")
            out.append((int(x), int(y)))
        except ValueError:
            raise PatternError(f"bad site {tok!r}; expected x,y") from None
    return out


def parse_cutspec(text: str, space: Space = PLANE) -> Cut:
    """Lines ``C: x,y x,y``, ``A1: ...``, ``A2: ...`` (missing lines mean empty)."""
    parts = {"C": [], "A1": [], "A2": []}
    for line in _content_lines(text):
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in parts:
            raise PatternError(f"bad cutspec line {line!r}")
        parts[key].extend(_parse_sites(rest))
    return Cut(SiteSet(parts["C"], space), SiteSet(parts["A1"], space), SiteSet(parts["A2"], space))


def format_cutspec(cut: Cut) -> str:
    def fmt(S):
        return " ".join(f"{x},{y}" for x, y in S)

    return f"C: {fmt(cut.C)}\nA1: {fmt(cut.A1)}\nA2: {fmt(cut.A2)}\n"


def parse_failures(text: str) -> list[FailureEvent]:
    """One failure per line: ``step x y value``."""
    events = []
    for line in _content_lines(text):
        try:
            step, x, y, value = (int(v) for v in line.split())
        except ValueError:
            raise PatternError(f"bad failure line {line!r}; expected 'step x y value'") from None
        events.append(FailureEvent(step, (x, y), value))
    return events
