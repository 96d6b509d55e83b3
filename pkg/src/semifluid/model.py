"""Problem data model: items, container, holders, placements, solutions.

Geometry convention: the container has depth D along x (the rigid axis of
the semifluids), width W along y, and height H along z.  A packed semifluid
always spans the full width W, so everything is determined by rectangles in
the x-z cross section.  A *holder* is an open sub-box of the container that
can still receive items; placing an item closes its holder and may open a
new holder beside the placed stack and another on top of it.

The feasibility validator checks the packing rules directly on absolute
coordinates: containment, no overlap, single support with no protrusion,
per-item volume conservation, and exact objective recomputation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .rational import FractionSyntaxError, format_fraction, parse_fraction

# Layer key for holders resting directly on the container floor.  Holders
# created on top of a placement use that placement's index as layer key.
FLOOR = -1


class InstanceError(ValueError):
    """Invalid instance data (non-positive sizes, item longer than container)."""


class InstanceFormatError(ValueError):
    """Malformed instance or solution file."""


@dataclass(frozen=True)
class Item:
    """One semifluid: rigid length, available volume, value of the full volume."""

    index: int                       # canonical index after sorting
    length: Fraction
    volume: Fraction
    value: Fraction
    unit_value: Fraction = field(compare=False)   # value / volume, cached
    input_index: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Instance:
    """A container plus items in canonical order.

    Canonical order: decreasing length, ties by decreasing unit value, ties
    by input order.  Tree search symmetry rules and the length-first
    heuristics rely on this ordering.  `uv_order` caches the item indices
    sorted by decreasing unit value (ties by canonical index), the order
    the fractional upper bound fills volume in.
    """

    depth: Fraction
    width: Fraction
    height: Fraction
    items: tuple[Item, ...]
    uv_order: tuple[int, ...] = field(compare=False, default=())

    @property
    def volume(self) -> Fraction:
        return self.depth * self.width * self.height

    def unit_value_order(self) -> tuple[int, ...]:
        """Item indices sorted by decreasing unit value (ties: canonical index)."""
        return self.uv_order


@dataclass(frozen=True)
class Holder:
    """An open sub-box of the container, able to receive items.

    `layer` identifies the horizontal surface the holder rests on: FLOOR or
    the index of the placement whose top face supports it.  Width is always
    the full container width.  Closed holders are not kept; their geometry
    lives on in the placement that closed them.
    """

    id: int                          # creation order
    depth: Fraction
    width: Fraction
    height: Fraction
    origin_x: Fraction
    origin_z: Fraction
    layer: int
    volume: Fraction = field(compare=False, default=Fraction(0))

    def __post_init__(self):
        object.__setattr__(self, "volume", self.depth * self.width * self.height)


@dataclass(frozen=True)
class Placement:
    """A stack of one item inside one holder, in absolute coordinates."""

    index: int                       # creation order; doubles as layer key
    item_index: int
    holder_id: int
    origin_x: Fraction
    origin_z: Fraction
    depth: Fraction                  # item length
    height: Fraction                 # stack height
    packed_volume: Fraction          # depth * width * height


@dataclass(frozen=True)
class Solution:
    """Placements in construction order plus the exact objective value."""

    placements: tuple[Placement, ...]
    value: Fraction


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    placements: tuple[int, ...] = ()

    def __str__(self) -> str:
        return f"{self.rule}: {self.message}"


def canonicalize(depth: Fraction, width: Fraction, height: Fraction,
                 raw_items: Sequence[tuple[Fraction, Fraction, Fraction]]) -> Instance:
    """Build an Instance from raw (length, volume, value) triples.

    Validates positivity and that no item is longer than the container,
    then sorts into canonical order.  Raises InstanceError listing every
    offending datum at once.
    """
    problems = []
    for name, dim in (("depth", depth), ("width", width), ("height", height)):
        if dim <= 0:
            problems.append(f"container {name} {format_fraction(dim)} is not positive")
    for pos, (length, volume, value) in enumerate(raw_items):
        if length <= 0:
            problems.append(f"item {pos}: length {format_fraction(length)} is not positive")
        elif depth > 0 and length > depth:
            problems.append(f"item {pos}: length {format_fraction(length)} exceeds "
                            f"container depth {format_fraction(depth)}")
        if volume <= 0:
            problems.append(f"item {pos}: volume {format_fraction(volume)} is not positive")
        if value < 0:
            problems.append(f"item {pos}: value {format_fraction(value)} is negative")
    if problems:
        raise InstanceError("; ".join(problems))

    order = sorted(range(len(raw_items)),
                   key=lambda j: (-raw_items[j][0],
                                  -(raw_items[j][2] / raw_items[j][1]),
                                  j))
    items = tuple(
        Item(index=i,
             length=raw_items[j][0],
             volume=raw_items[j][1],
             value=raw_items[j][2],
             unit_value=raw_items[j][2] / raw_items[j][1],
             input_index=j)
        for i, j in enumerate(order))
    uv_order = tuple(sorted(range(len(items)),
                            key=lambda i: (-items[i].unit_value, i)))
    return Instance(depth=depth, width=width, height=height, items=items,
                    uv_order=uv_order)


def stack_height(item: Item, holder: Holder, volume: Fraction | None = None) -> Fraction:
    """Height a volume of `item` takes inside `holder`: v / (length * width).

    Defaults to the item's full available volume; pass the remaining volume
    for partially packed items.  The holder must be deep enough.
    """
    if holder.depth < item.length:
        raise ValueError(
            f"holder {holder.id} depth {format_fraction(holder.depth)} is too "
            f"shallow for item {item.index} length {format_fraction(item.length)}")
    v = item.volume if volume is None else volume
    return v / (item.length * holder.width)


def _overlap(a: Placement, b: Placement) -> bool:
    return (a.origin_x < b.origin_x + b.depth and b.origin_x < a.origin_x + a.depth
            and a.origin_z < b.origin_z + b.height and b.origin_z < a.origin_z + a.height)


def validate(instance: Instance, solution: Solution) -> list[Violation]:
    """Check a solution against the packing rules; empty list means feasible.

    Rules checked: containment in the container, positive dimensions,
    stack-volume consistency, pairwise non-overlap, single support with no
    protrusion for every placement above the floor, per-item volume
    conservation, and exact objective recomputation.
    """
    violations = []
    items = instance.items
    placements = solution.placements

    for p in placements:
        if not 0 <= p.item_index < len(items):
            violations.append(Violation("item-index", f"placement {p.index} references "
                                        f"unknown item {p.item_index}", (p.index,)))
            continue
        item = items[p.item_index]
        if p.depth != item.length:
            violations.append(Violation("depth", f"placement {p.index} depth "
                                        f"{format_fraction(p.depth)} differs from item length "
                                        f"{format_fraction(item.length)}", (p.index,)))
        if p.height <= 0 or p.depth <= 0:
            violations.append(Violation("dimension", f"placement {p.index} has a "
                                        "non-positive dimension", (p.index,)))
        if p.packed_volume != p.depth * instance.width * p.height:
            violations.append(Violation("volume-consistency",
                                        f"placement {p.index} volume "
                                        f"{format_fraction(p.packed_volume)} is not depth*W*height",
                                        (p.index,)))
        if (p.origin_x < 0 or p.origin_z < 0
                or p.origin_x + p.depth > instance.depth
                or p.origin_z + p.height > instance.height):
            violations.append(Violation("containment", f"placement {p.index} leaves "
                                        "the container", (p.index,)))

    for i, a in enumerate(placements):
        for b in placements[i + 1:]:
            if _overlap(a, b):
                violations.append(Violation("overlap", f"placements {a.index} and "
                                            f"{b.index} overlap", (a.index, b.index)))

    for p in placements:
        if p.origin_z == 0:
            continue
        supports = [q for q in placements
                    if q.origin_z + q.height == p.origin_z
                    and q.origin_x < p.origin_x + p.depth
                    and p.origin_x < q.origin_x + q.depth]
        if not supports:
            violations.append(Violation("support", f"placement {p.index} rests on "
                                        "nothing", (p.index,)))
        elif len(supports) > 1:
            violations.append(Violation("protrusion", f"placement {p.index} spans "
                                        f"{len(supports)} supporting placements",
                                        (p.index,) + tuple(q.index for q in supports)))
        else:
            q = supports[0]
            if p.origin_x < q.origin_x or p.origin_x + p.depth > q.origin_x + q.depth:
                violations.append(Violation("protrusion", f"placement {p.index} protrudes "
                                            f"beyond its support {q.index}",
                                            (p.index, q.index)))

    packed = {i: Fraction(0) for i in range(len(items))}
    for p in placements:
        if 0 <= p.item_index < len(items):
            packed[p.item_index] += p.packed_volume
    for i, total in packed.items():
        if total > items[i].volume:
            violations.append(Violation("conservation", f"item {i} packs "
                                        f"{format_fraction(total)} of available "
                                        f"{format_fraction(items[i].volume)}",
                                        tuple(p.index for p in placements if p.item_index == i)))

    objective = sum((items[i].value * total / items[i].volume
                     for i, total in packed.items()), Fraction(0))
    if objective != solution.value:
        violations.append(Violation("objective", f"stored value {format_fraction(solution.value)} "
                                    f"differs from recomputed {format_fraction(objective)}"))
    return violations


# ---------------------------------------------------------------------------
# Instance files.
#
# Line 1: "D W H" as fractions.  Line 2: item count N.  Then N lines
# "length volume value".  A '#' starts a comment anywhere on a line.
# ---------------------------------------------------------------------------

def _content_lines(path: Path) -> list[tuple[int, str]]:
    lines = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if text:
            lines.append((lineno, text))
    return lines


def _parse_tokens(lineno: int, text: str, expected: int, what: str) -> list[Fraction]:
    tokens = text.split()
    if len(tokens) != expected:
        raise InstanceFormatError(f"line {lineno}: expected {expected} fields for "
                                  f"{what}, found {len(tokens)}")
    values = []
    for token in tokens:
        try:
            values.append(parse_fraction(token))
        except FractionSyntaxError as exc:
            raise InstanceFormatError(f"line {lineno}: {exc}") from exc
    return values


def read_instance(path: str | Path) -> Instance:
    """Read an instance file; raises InstanceFormatError with line numbers."""
    path = Path(path)
    lines = _content_lines(path)
    if len(lines) < 2:
        raise InstanceFormatError(f"{path}: expected container dimensions and item count")
    dims = _parse_tokens(*lines[0], expected=3, what="container dimensions")
    lineno, text = lines[1]
    try:
        count = int(text)
    except ValueError as exc:
        raise InstanceFormatError(f"line {lineno}: item count {text!r} is not an integer") from exc
    rows = lines[2:]
    if len(rows) != count:
        raise InstanceFormatError(f"{path}: header announces {count} items, file has {len(rows)}")
    raw_items = [tuple(_parse_tokens(lineno, text, expected=3, what="an item row"))
                 for lineno, text in rows]
    try:
        return canonicalize(dims[0], dims[1], dims[2], raw_items)
    except InstanceError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc


def write_instance(instance: Instance, path: str | Path,
                   header: Iterable[str] = ()) -> None:
    """Write an instance file (items in canonical order); bit-exact round-trip."""
    lines = [f"# {text}" for text in header]
    lines.append(" ".join(format_fraction(v) for v in
                          (instance.depth, instance.width, instance.height)))
    lines.append(str(len(instance.items)))
    for item in instance.items:
        lines.append(" ".join(format_fraction(v) for v in
                              (item.length, item.volume, item.value)))
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Solution files: one line per placement
#   "item_id holder_id origin_x origin_z depth height packed_volume"
# in construction order, then a trailing "objective <fraction>" line.
# ---------------------------------------------------------------------------

def write_solution(solution: Solution, path: str | Path,
                   header: Iterable[str] = ()) -> None:
    lines = [f"# {text}" for text in header]
    for p in solution.placements:
        lines.append(" ".join([str(p.item_index), str(p.holder_id)]
                              + [format_fraction(v) for v in
                                 (p.origin_x, p.origin_z, p.depth, p.height, p.packed_volume)]))
    lines.append(f"objective {format_fraction(solution.value)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_solution(path: str | Path) -> Solution:
    path = Path(path)
    lines = _content_lines(path)
    if not lines or not lines[-1][1].startswith("objective"):
        raise InstanceFormatError(f"{path}: missing trailing objective line")
    lineno, text = lines[-1]
    tokens = text.split()
    if len(tokens) != 2:
        raise InstanceFormatError(f"line {lineno}: malformed objective line")
    try:
        objective = parse_fraction(tokens[1])
    except FractionSyntaxError as exc:
        raise InstanceFormatError(f"line {lineno}: {exc}") from exc

    placements = []
    for index, (lineno, text) in enumerate(lines[:-1]):
        tokens = text.split()
        if len(tokens) != 7:
            raise InstanceFormatError(f"line {lineno}: expected 7 fields for a placement, "
                                      f"found {len(tokens)}")
        try:
            item_index, holder_id = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise InstanceFormatError(f"line {lineno}: bad item or holder id") from exc
        values = _parse_tokens(lineno, " ".join(tokens[2:]), expected=5, what="a placement")
        placements.append(Placement(index=index, item_index=item_index, holder_id=holder_id,
                                    origin_x=values[0], origin_z=values[1], depth=values[2],
                                    height=values[3], packed_volume=values[4]))
    return Solution(placements=tuple(placements), value=objective)
