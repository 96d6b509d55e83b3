"""Complete tree search over the ceiling-split-only solution space.

Three methods share one node model, one upper bound, and the symmetry
rules: best-first branch-and-bound, breadth-first search with diving, and
limited discrepancy search.  A node is a partial packing; each child
applies one feasible (item, holder) placement with the construction
semantics of `heuristics.PackState.place`.

Nodes are normalized on creation: open holders no remaining item fits are
closed, so their volume never counts toward the bound and a node with no
open holders is a finished leaf.  The upper bound adds to the node's value
a fractional knapsack of the remaining item volumes into the free holder
volume, taking items by decreasing unit value with no shape constraints.

Note the solution space itself is restricted: an item's volume is split
only when a stack reaches a holder's ceiling.  The true (continuous)
optimum may lie outside this space, so "optimal" flags certify optimality
within it.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .heuristics import PackState, Rule, choose
from .model import FLOOR, Instance, Solution


@dataclass(frozen=True)
class Limits:
    """Optional resource limits for a search run.

    `time_limit` is wall-clock seconds, checked once per dequeued node.
    `max_queue` chops lowest-upper-bound nodes when the frontier grows past
    it.  `max_discrepancy` suppresses LDS children beyond the given
    discrepancy.  `max_nodes` stops after that many node expansions.
    Hitting any of these forfeits the optimality flag.
    """

    time_limit: float | None = None
    max_queue: int | None = None
    max_discrepancy: int | None = None
    max_nodes: int | None = None

    def __post_init__(self):
        for name in ("time_limit", "max_queue", "max_discrepancy", "max_nodes"):
            value = getattr(self, name)
            if value is not None and value <= 0 and not (name == "max_discrepancy" and value == 0):
                raise ValueError(f"{name} must be positive")


NO_LIMITS = Limits()


class SearchNode:
    """A partial packing: state snapshot, bound, and symmetry bookkeeping.

    `layer_last` maps a layer key to the highest canonical item index
    already placed on that layer.  `discrepancy` counts deviations from the
    heuristic-preferred child along the path (LDS).  `dive` marks nodes
    created on a BFD diving path.
    """

    __slots__ = ("state", "upper_bound", "depth", "discrepancy", "layer_last", "dive")

    def __init__(self, state: PackState, upper_bound: Fraction, depth: int,
                 discrepancy: int, layer_last: dict[int, int], dive: bool = False):
        self.state = state
        self.upper_bound = upper_bound
        self.depth = depth
        self.discrepancy = discrepancy
        self.layer_last = layer_last
        self.dive = dive

    @property
    def value(self) -> Fraction:
        return self.state.value

    def is_leaf(self) -> bool:
        # States are normalized on creation: dead holders are closed, so no
        # open holders means nothing placeable remains.
        return not self.state.open_holders


@dataclass
class SearchStats:
    nodes_explored: int = 0
    nodes_created: int = 0
    nodes_in_queue_at_end: int = 0
    nodes_pruned_or_chopped: int = 0
    wall_time: float = 0.0
    first_leaf_value: Fraction | None = None


@dataclass
class SearchOutcome:
    """Best solution found, an optimality certificate, and run statistics.

    `optimal` is True only when the search exhausted its frontier without
    chopping, node/time budgets, or discrepancy suppression.  `trace` lists
    (elapsed seconds, incumbent value) pairs, one per improvement.
    """

    solution: Solution
    optimal: bool
    stats: SearchStats
    trace: list[tuple[float, Fraction]] = field(default_factory=list)


def _normalize(state: PackState) -> None:
    """Close open holders in which no remaining item fits (dead holders)."""
    items = state.instance.items
    min_length = None
    for i, rem in enumerate(state.remaining):
        if rem > 0 and (min_length is None or items[i].length < min_length):
            min_length = items[i].length
    if min_length is None:
        state.open_holders.clear()
        return
    dead = [hid for hid, holder in state.open_holders.items() if holder.depth < min_length]
    for hid in dead:
        del state.open_holders[hid]


def _knapsack_bound(state: PackState, uv_order: tuple[int, ...]) -> Fraction:
    """Fractional knapsack of remaining volumes into the free holder volume."""
    free = sum((holder.volume for holder in state.open_holders.values()), Fraction(0))
    bound = Fraction(0)
    if free == 0:
        return bound
    items = state.instance.items
    for i in uv_order:
        rem = state.remaining[i]
        if rem == 0:
            continue
        take = rem if rem <= free else free
        bound += items[i].value * take / items[i].volume
        free -= take
        if free == 0:
            break
    return bound


def upper_bound(node: SearchNode, instance: Instance) -> Fraction:
    """Recompute the node's upper bound (value + fractional knapsack)."""
    return node.value + _knapsack_bound(node.state, instance.unit_value_order())


def make_root(instance: Instance) -> SearchNode:
    state = PackState(instance)
    _normalize(state)
    ub = state.value + _knapsack_bound(state, instance.unit_value_order())
    return SearchNode(state=state, upper_bound=ub, depth=0, discrepancy=0, layer_last={})


def _moves(node: SearchNode) -> list[tuple[int, int]]:
    """Feasible (item, holder id) pairs in LFF preference order:
    canonical item index ascending, then newest holder first."""
    state = node.state
    items = state.instance.items
    holders = list(state.open_holders.values())
    holders.reverse()
    pairs = []
    for i, rem in enumerate(state.remaining):
        if rem <= 0:
            continue
        length = items[i].length
        pairs.extend((i, holder.id) for holder in holders if holder.depth >= length)
    return pairs


def _symmetry_ok(node: SearchNode, item_index: int, holder_id: int) -> bool:
    """Symmetry rules: per layer, canonical indices must not decrease
    (equal is allowed, so a ceiling-split item may continue on its layer);
    an item of equal length placed on top of another must not have a
    larger unit value."""
    state = node.state
    holder = state.open_holders[holder_id]
    if item_index < node.layer_last.get(holder.layer, -1):
        return False
    if holder.layer != FLOOR:
        items = state.instance.items
        support = items[state.placements[holder.layer].item_index]
        item = items[item_index]
        if item.length == support.length and item.unit_value > support.unit_value:
            return False
    return True


def _make_child(node: SearchNode, item_index: int, holder_id: int,
                uv_order: tuple[int, ...], discrepancy: int = 0,
                dive: bool = False) -> SearchNode:
    state = node.state.copy()
    layer = state.open_holders[holder_id].layer
    state.place(item_index, holder_id)
    _normalize(state)
    layer_last = dict(node.layer_last)
    layer_last[layer] = max(layer_last.get(layer, -1), item_index)
    ub = state.value + _knapsack_bound(state, uv_order)
    return SearchNode(state=state, upper_bound=ub, depth=node.depth + 1,
                      discrepancy=discrepancy, layer_last=layer_last, dive=dive)


def expand(node: SearchNode, instance: Instance,
           enforce_symmetry: bool = True) -> list[SearchNode]:
    """All children of a node, in LFF preference order."""
    uv_order = instance.unit_value_order()
    moves = _moves(node)
    if enforce_symmetry:
        moves = [m for m in moves if _symmetry_ok(node, *m)]
    return [_make_child(node, i, hid, uv_order) for i, hid in moves]


class _Frontier:
    """Heap frontier with lazy deletion and worst-upper-bound chopping."""

    def __init__(self):
        self._heap: list = []
        self._chop_heap: list = []
        self._alive: dict[int, SearchNode] = {}
        self._counter = itertools.count()

    def push(self, key, node: SearchNode) -> None:
        seq = next(self._counter)
        self._alive[seq] = node
        heapq.heappush(self._heap, (key, seq))
        heapq.heappush(self._chop_heap, (node.upper_bound, seq))

    def pop(self) -> SearchNode | None:
        while self._heap:
            _, seq = heapq.heappop(self._heap)
            node = self._alive.pop(seq, None)
            if node is not None:
                return node
        return None

    def chop_worst(self) -> SearchNode | None:
        while self._chop_heap:
            _, seq = heapq.heappop(self._chop_heap)
            node = self._alive.pop(seq, None)
            if node is not None:
                return node
        return None

    def __len__(self) -> int:
        return len(self._alive)


class _Run:
    """Shared search driver: incumbent, stats, trace, limits, chopping."""

    def __init__(self, instance: Instance, limits: Limits, enforce_symmetry: bool):
        self.instance = instance
        self.limits = limits
        self.enforce_symmetry = enforce_symmetry
        self.uv_order = instance.unit_value_order()
        self.start = time.perf_counter()
        self.root = make_root(instance)
        self.best = self.root.state.solution()
        self.lb = self.best.value
        self.trace = [(0.0, self.lb)]
        self.stats = SearchStats(nodes_created=1)
        self.optimal = True

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def offer(self, node: SearchNode) -> None:
        self.stats.nodes_created += 1
        if node.value > self.lb:
            self.lb = node.value
            self.best = node.state.solution()
            self.trace.append((self.elapsed(), self.lb))

    def note_leaf(self, node: SearchNode) -> None:
        if self.stats.first_leaf_value is None:
            self.stats.first_leaf_value = node.value

    def out_of_time(self) -> bool:
        return (self.limits.time_limit is not None
                and self.elapsed() >= self.limits.time_limit)

    def out_of_nodes(self) -> bool:
        return (self.limits.max_nodes is not None
                and self.stats.nodes_explored >= self.limits.max_nodes)

    def finish(self, remaining: int) -> SearchOutcome:
        self.stats.nodes_in_queue_at_end = remaining
        self.stats.wall_time = self.elapsed()
        return SearchOutcome(solution=self.best, optimal=self.optimal,
                             stats=self.stats, trace=self.trace)


def branch_and_bound(instance: Instance, limits: Limits = NO_LIMITS,
                     enforce_symmetry: bool = True) -> SearchOutcome:
    """Best-first search on the upper bound.

    Nodes whose bound cannot beat the incumbent are discarded; every
    created node's own value updates the incumbent (a partial packing is
    itself feasible).  Ties on the bound prefer deeper nodes, then FIFO.
    """
    run = _Run(instance, limits, enforce_symmetry)
    frontier = _Frontier()
    frontier.push((-run.root.upper_bound, -run.root.depth), run.root)
    while True:
        if len(frontier) and (run.out_of_time() or run.out_of_nodes()):
            run.optimal = False
            break
        node = frontier.pop()
        if node is None:
            break
        if node.is_leaf():
            run.note_leaf(node)
            run.stats.nodes_pruned_or_chopped += 1
            continue
        if node.upper_bound <= run.lb:
            run.stats.nodes_pruned_or_chopped += 1
            continue
        run.stats.nodes_explored += 1
        for child in expand(node, instance, run.enforce_symmetry):
            run.offer(child)
            frontier.push((-child.upper_bound, -child.depth), child)
        while limits.max_queue is not None and len(frontier) > limits.max_queue:
            if frontier.chop_worst() is not None:
                run.stats.nodes_pruned_or_chopped += 1
                run.optimal = False
    return run.finish(len(frontier))


def bfd(instance: Instance, limits: Limits = NO_LIMITS,
        enforce_symmetry: bool = True,
        stop_after_first_leaf: bool = False) -> SearchOutcome:
    """Breadth-first search with diving.

    Two queues: each expansion sends the child matching the LBF rule to the
    diving queue (explored LIFO, before anything else) and the remaining
    children, in decreasing item length order, to the main FIFO queue.
    Symmetry rules are not enforced on diving children, and the first dive
    is never pruned by the bound, so the first leaf reached is exactly the
    LBF construction.  `stop_after_first_leaf` returns at that point (the
    outcome is then the best value seen so far, not a completed search).
    """
    run = _Run(instance, limits, enforce_symmetry)
    run.root.dive = True                      # the first dive starts at the root
    dive_stack: list[SearchNode] = [run.root] if not run.root.is_leaf() else []
    main = _Frontier()
    if run.root.is_leaf():
        run.note_leaf(run.root)
    seq = itertools.count()
    while True:
        remaining = len(dive_stack) + len(main)
        if remaining and (run.out_of_time() or run.out_of_nodes()):
            run.optimal = False
            break
        node = dive_stack.pop() if dive_stack else main.pop()
        if node is None:
            break
        if node.is_leaf():
            run.note_leaf(node)
            run.stats.nodes_pruned_or_chopped += 1
            if stop_after_first_leaf:
                run.optimal = False
                break
            continue
        first_dive = node.dive and run.stats.first_leaf_value is None
        if node.upper_bound <= run.lb and not first_dive:
            run.stats.nodes_pruned_or_chopped += 1
            continue
        run.stats.nodes_explored += 1
        dive_move = choose(Rule.LBF, node.state)
        for i, hid in _moves(node):
            if (i, hid) == dive_move:
                child = _make_child(node, i, hid, run.uv_order, dive=True)
                run.offer(child)
                dive_stack.append(child)
            else:
                if run.enforce_symmetry and not _symmetry_ok(node, i, hid):
                    continue
                child = _make_child(node, i, hid, run.uv_order)
                run.offer(child)
                main.push(next(seq), child)
        while limits.max_queue is not None and len(main) > limits.max_queue:
            if main.chop_worst() is not None:
                run.stats.nodes_pruned_or_chopped += 1
                run.optimal = False
    return run.finish(len(dive_stack) + len(main))


def lds(instance: Instance, limits: Limits = NO_LIMITS,
        enforce_symmetry: bool = True) -> SearchOutcome:
    """Limited discrepancy search based on the LFF preference order.

    The k-th generated child of a node (0-based) carries its parent's
    discrepancy plus k; the frontier is explored by increasing discrepancy,
    deeper nodes first.  Children beyond `max_discrepancy` are never
    created, which forfeits the optimality flag.  The zero-discrepancy path
    is exactly the LFF construction.
    """
    run = _Run(instance, limits, enforce_symmetry)
    frontier = _Frontier()
    frontier.push((run.root.discrepancy, -run.root.depth), run.root)
    truncated = False
    while True:
        if len(frontier) and (run.out_of_time() or run.out_of_nodes()):
            run.optimal = False
            break
        node = frontier.pop()
        if node is None:
            break
        if node.is_leaf():
            run.note_leaf(node)
            run.stats.nodes_pruned_or_chopped += 1
            continue
        if node.upper_bound <= run.lb:
            run.stats.nodes_pruned_or_chopped += 1
            continue
        run.stats.nodes_explored += 1
        moves = _moves(node)
        if run.enforce_symmetry:
            moves = [m for m in moves if _symmetry_ok(node, *m)]
        for k, (i, hid) in enumerate(moves):
            discrepancy = node.discrepancy + k
            if (limits.max_discrepancy is not None
                    and discrepancy > limits.max_discrepancy):
                truncated = True
                break
            child = _make_child(node, i, hid, run.uv_order, discrepancy=discrepancy)
            run.offer(child)
            frontier.push((discrepancy, -child.depth), child)
        while limits.max_queue is not None and len(frontier) > limits.max_queue:
            if frontier.chop_worst() is not None:
                run.stats.nodes_pruned_or_chopped += 1
                run.optimal = False
    if truncated:
        run.optimal = False
    return run.finish(len(frontier))
