"""Construction heuristics and first-improve local ascent.

The packing loop repeatedly picks an (item, holder) pair by one of five
rules and places the item's remaining volume into the holder:

* if the whole remaining volume fits vertically, the holder closes at the
  stack height and a holder opens beside the stack (leftover depth) and on
  top of it (leftover height), when those are positive;
* otherwise the stack takes the holder's full height (a *ceiling split*),
  the item keeps its leftover volume for later, and only the beside holder
  opens.

Rules: BF minimizes the depth gap over all pairs; LFF/LBF take the longest
placeable item, into the most recently created / the shallowest fitting
holder; WFF/WBF take the item with the best value per unit volume instead.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .model import FLOOR, Holder, Instance, Placement, Solution


class Rule(Enum):
    BF = "bf"
    LFF = "lff"
    LBF = "lbf"
    WFF = "wff"
    WBF = "wbf"


class PackState:
    """Mutable packing state: open holders, per-item remaining volume,
    placements so far, and the accumulated objective value.

    Single-threaded; `copy()` gives an independent snapshot (tree search
    branches on copies).  Holder ids grow in creation order and
    `open_holders` iterates in that order.
    """

    __slots__ = ("instance", "open_holders", "remaining", "placements",
                 "value", "next_holder_id")

    def __init__(self, instance: Instance):
        self.instance = instance
        root = Holder(id=0, depth=instance.depth, width=instance.width,
                      height=instance.height, origin_x=Fraction(0),
                      origin_z=Fraction(0), layer=FLOOR)
        self.open_holders: dict[int, Holder] = {0: root}
        self.remaining: list[Fraction] = [item.volume for item in instance.items]
        self.placements: list[Placement] = []
        self.value = Fraction(0)
        self.next_holder_id = 1

    def copy(self) -> "PackState":
        clone = object.__new__(PackState)
        clone.instance = self.instance
        clone.open_holders = dict(self.open_holders)
        clone.remaining = list(self.remaining)
        clone.placements = list(self.placements)
        clone.value = self.value
        clone.next_holder_id = self.next_holder_id
        return clone

    def live_items(self) -> list[int]:
        return [i for i, volume in enumerate(self.remaining) if volume > 0]

    def place(self, item_index: int, holder_id: int) -> Placement:
        """Pack item `item_index` into open holder `holder_id`.

        Packs the full remaining volume if it fits the holder's height,
        otherwise fills the holder to its ceiling.  Closes the holder and
        opens the beside/top holders per the leftover geometry.
        """
        holder = self.open_holders.pop(holder_id)
        item = self.instance.items[item_index]
        if holder.depth < item.length:
            raise ValueError(f"item {item_index} does not fit holder {holder_id}")
        remaining = self.remaining[item_index]
        if remaining <= 0:
            raise ValueError(f"item {item_index} has no volume left")

        z = remaining / (item.length * holder.width)
        if z <= holder.height:
            height, volume = z, remaining
        else:
            height, volume = holder.height, item.length * holder.width * holder.height
        self.remaining[item_index] = remaining - volume

        placement = Placement(index=len(self.placements), item_index=item_index,
                              holder_id=holder_id, origin_x=holder.origin_x,
                              origin_z=holder.origin_z, depth=item.length,
                              height=height, packed_volume=volume)
        self.placements.append(placement)
        self.value += item.value * volume / item.volume

        if holder.depth > item.length:
            self.open_holders[self.next_holder_id] = Holder(
                id=self.next_holder_id, depth=holder.depth - item.length,
                width=holder.width, height=holder.height,
                origin_x=holder.origin_x + item.length, origin_z=holder.origin_z,
                layer=holder.layer)
            self.next_holder_id += 1
        if holder.height > z:
            self.open_holders[self.next_holder_id] = Holder(
                id=self.next_holder_id, depth=item.length, width=holder.width,
                height=holder.height - z, origin_x=holder.origin_x,
                origin_z=holder.origin_z + z, layer=placement.index)
            self.next_holder_id += 1
        return placement

    def solution(self) -> Solution:
        return Solution(placements=tuple(self.placements), value=self.value)


def choose(rule: Rule, state: PackState) -> tuple[int, int] | None:
    """Pick a feasible (item_index, holder_id) pair by `rule`, or None.

    Feasible means the item has volume left and the holder is at least as
    deep as the item.  Ties are broken deterministically: items by
    canonical index, holders by (depth, height, newest id) for best-fit
    choices and by newest id for first-fit choices.
    """
    holders = list(state.open_holders.values())
    if not holders:
        return None
    items = state.instance.items

    if rule is Rule.BF:
        best = None
        for i in state.live_items():
            length = items[i].length
            for holder in holders:
                if holder.depth < length:
                    continue
                key = (holder.depth - length, i, holder.height, -holder.id)
                if best is None or key < best[0]:
                    best = (key, i, holder.id)
        return None if best is None else (best[1], best[2])

    max_depth = max(holder.depth for holder in holders)
    if rule in (Rule.LFF, Rule.LBF):
        candidates = state.live_items()                      # canonical order
    else:
        candidates = sorted(state.live_items(),
                            key=lambda i: (-items[i].unit_value, i))
    chosen = next((i for i in candidates if items[i].length <= max_depth), None)
    if chosen is None:
        return None

    length = items[chosen].length
    fitting = [holder for holder in holders if holder.depth >= length]
    if rule in (Rule.LFF, Rule.WFF):
        holder = fitting[-1]                                 # most recently created
    else:
        holder = min(fitting, key=lambda h: (h.depth, h.height, -h.id))
    return chosen, holder.id


def _iteration_bound(instance: Instance) -> int:
    # Every placement either exhausts an item or consumes at least the
    # shortest item length of some layer's open depth; layers number at
    # most N+1.
    n = len(instance.items)
    if n == 0:
        return 0
    min_length = min(item.length for item in instance.items)
    return n + (n + 1) * (int(instance.depth / min_length) + 1)


def pack(instance: Instance, rule: Rule,
         forbidden: frozenset[int] = frozenset()) -> Solution:
    """Run the construction heuristic under `rule`; always feasible.

    `forbidden` item indices are treated as unavailable (used by ascent).
    """
    state = PackState(instance)
    for i in forbidden:
        state.remaining[i] = Fraction(0)
    bound = _iteration_bound(instance)
    steps = 0
    while (move := choose(rule, state)) is not None:
        state.place(*move)
        steps += 1
        assert steps <= bound, "packing loop failed to terminate"
    return state.solution()


def ascent(instance: Instance, rule: Rule = Rule.LBF) -> Solution:
    """First-improve local ascent over single-item exclusions.

    Starting from the rule's construction, repeatedly rebuilds the packing
    with one currently packed, not yet tried item forbidden; the first
    strict improvement is adopted and the scan restarts on the new packed
    set.  The tried set persists, so the ascent terminates; the result is
    never worse than the plain construction.
    """
    best = pack(instance, rule)
    packed = {p.item_index for p in best.placements}
    tried: set[int] = set()
    improved = True
    while improved:
        improved = False
        for i in sorted(packed - tried):
            tried.add(i)
            trial = pack(instance, rule, forbidden=frozenset({i}))
            if trial.value > best.value:
                best = trial
                packed = {p.item_index for p in trial.placements}
                improved = True
                break
    return best
