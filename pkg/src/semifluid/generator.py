"""Reproducible random instance generation.

Two families, both in a normalized 1 x 1 x 1 container:

* hard: lengths drawn uniformly on the 1/10^d grid (d = 2 or 3), raw
  volumes on the 1/1000 grid, then all volumes rescaled exactly so their
  sum equals the requested factor of the container volume; no optimum is
  known in advance.
* easy: the container is divided recursively into as many boxes as items,
  each box becoming one item, so the boxes are a known optimal packing
  worth the sum of all values.  A box with nothing resting on it may be
  divided vertically (along depth); otherwise it is divided horizontally
  (along height), the upper part resting on the lower one.  Split
  coordinates are drawn uniformly from the 1/10^d grid points strictly
  inside the box.

Generation is a pure function of the spec: the same seed yields the same
instance, byte for byte (PRNG: Mersenne Twister via `random.Random`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .heuristics import PackState
from .model import Instance, Solution, canonicalize
from .rational import format_fraction

EASY = "easy"
HARD = "hard"

_PRNG_NOTE = "prng=mersenne-twister (python random.Random)"


class GeneratorError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    family: str
    n_items: int
    length_digits: int = 2
    volume_factor: Fraction = Fraction(1)    # hard only: 1 or 3/2
    value_digits: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.family not in (EASY, HARD):
            raise ValueError(f"unknown family {self.family!r}")
        if self.n_items < 1:
            raise ValueError("n_items must be at least 1")
        if self.length_digits not in (2, 3):
            raise ValueError("length_digits must be 2 or 3")
        if self.volume_factor <= 0:
            raise ValueError("volume_factor must be positive")
        if self.value_digits < 1:
            raise ValueError("value_digits must be at least 1")


@dataclass(frozen=True)
class GenResult:
    instance: Instance
    header: tuple[str, ...]
    layout: Solution | None       # easy only: the known-optimal full packing


def _base_header(spec: GenSpec) -> list[str]:
    params = (f"family={spec.family} n={spec.n_items} "
              f"length_digits={spec.length_digits} value_digits={spec.value_digits}")
    if spec.family == HARD:
        params += f" volume_factor={format_fraction(spec.volume_factor)}"
    params += f" seed={spec.seed}"
    return ["semifluid instance", params, _PRNG_NOTE]


def _rand_grid(rng: random.Random, digits: int) -> Fraction:
    return Fraction(rng.randint(1, 10**digits), 10**digits)


def generate_hard(spec: GenSpec) -> GenResult:
    if spec.family != HARD:
        raise ValueError("spec.family must be 'hard'")
    rng = random.Random(spec.seed)
    lengths, raw_volumes, values = [], [], []
    for _ in range(spec.n_items):
        lengths.append(_rand_grid(rng, spec.length_digits))
        raw_volumes.append(_rand_grid(rng, 3))
        values.append(_rand_grid(rng, spec.value_digits))
    scale = spec.volume_factor / sum(raw_volumes)
    raw_items = [(lengths[i], raw_volumes[i] * scale, values[i])
                 for i in range(spec.n_items)]
    instance = canonicalize(Fraction(1), Fraction(1), Fraction(1), raw_items)
    return GenResult(instance=instance, header=tuple(_base_header(spec)), layout=None)


@dataclass
class _Box:
    x0: Fraction
    x1: Fraction
    z0: Fraction
    z1: Fraction


def _has_box_on_top(box: _Box, boxes: list[_Box]) -> bool:
    return any(other is not box and other.z0 == box.z1
               and other.x0 < box.x1 and box.x0 < other.x1
               for other in boxes)


def _interior_grid_span(lo: Fraction, hi: Fraction, grid: int) -> tuple[int, int]:
    """Integer k with lo < k/grid < hi; bounds are grid-aligned."""
    lo_scaled, hi_scaled = lo * grid, hi * grid
    assert lo_scaled.denominator == 1 and hi_scaled.denominator == 1
    return lo_scaled.numerator + 1, hi_scaled.numerator


def _split_horizontally(rng: random.Random, boxes: list[_Box], pos: int,
                        grid: int) -> bool:
    box = boxes[pos]
    lo, hi = _interior_grid_span(box.z0, box.z1, grid)
    if lo >= hi:
        return False
    z = Fraction(rng.randrange(lo, hi), grid)
    lower = _Box(box.x0, box.x1, box.z0, z)
    upper = _Box(box.x0, box.x1, z, box.z1)
    boxes[pos:pos + 1] = [lower, upper]
    return True


def _split_vertically(rng: random.Random, boxes: list[_Box], pos: int,
                      grid: int) -> bool:
    box = boxes[pos]
    lo, hi = _interior_grid_span(box.x0, box.x1, grid)
    if lo >= hi:
        return False
    x = Fraction(rng.randrange(lo, hi), grid)
    left = _Box(box.x0, x, box.z0, box.z1)
    right = _Box(x, box.x1, box.z0, box.z1)
    boxes[pos:pos + 1] = [left, right]
    return True


def _build_layout(instance: Instance, boxes: list[_Box]) -> Solution:
    """Replay the generated boxes bottom-up through the packing semantics.

    Boxes are placed in (z0, x0) order; each finds an open holder whose
    origin matches exactly, so the resulting placements carry genuine
    holder ids and the full container ends up packed.
    """
    by_input = {item.input_index: item.index for item in instance.items}
    order = sorted(range(len(boxes)), key=lambda j: (boxes[j].z0, boxes[j].x0))
    state = PackState(instance)
    for j in order:
        box = boxes[j]
        holder_id = next((hid for hid, h in state.open_holders.items()
                          if h.origin_x == box.x0 and h.origin_z == box.z0), None)
        if holder_id is None:
            raise GeneratorError("no open holder matches a generated box")
        placement = state.place(by_input[j], holder_id)
        if placement.height != box.z1 - box.z0 or placement.depth != box.x1 - box.x0:
            raise GeneratorError("generated box does not replay to its own shape")
    if any(v != 0 for v in state.remaining):
        raise GeneratorError("easy layout left volume unpacked")
    return state.solution()


def generate_easy(spec: GenSpec) -> GenResult:
    if spec.family != EASY:
        raise ValueError("spec.family must be 'easy'")
    rng = random.Random(spec.seed)
    grid = 10**spec.length_digits
    one = Fraction(1)
    boxes = [_Box(Fraction(0), one, Fraction(0), one)]
    trials = 0
    while len(boxes) < spec.n_items:
        trials += 1
        if trials > 100000:
            raise GeneratorError("giving up after too many division trials")
        pos = rng.randrange(len(boxes))
        if rng.random() < 0.5:
            if _has_box_on_top(boxes[pos], boxes):
                continue
            if not _split_vertically(rng, boxes, pos, grid):
                _split_horizontally(rng, boxes, pos, grid)
        else:
            _split_horizontally(rng, boxes, pos, grid)

    raw_items = [((box.x1 - box.x0),
                  (box.x1 - box.x0) * (box.z1 - box.z0),
                  _rand_grid(rng, spec.value_digits))
                 for box in boxes]
    instance = canonicalize(one, one, one, raw_items)
    layout = _build_layout(instance, boxes)

    header = _base_header(spec)
    header.append(f"optimum={format_fraction(layout.value)}")
    return GenResult(instance=instance, header=tuple(header), layout=layout)


def generate(spec: GenSpec) -> GenResult:
    return generate_easy(spec) if spec.family == EASY else generate_hard(spec)


def read_header(path: str | Path) -> dict[str, str]:
    """key=value pairs from a file's leading comment lines."""
    meta: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line.startswith("#"):
            break
        for token in line[1:].split():
            if "=" in token:
                key, value = token.split("=", 1)
                meta[key] = value
    return meta
