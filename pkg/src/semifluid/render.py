"""Cross-section SVG rendering of packings.

Draws the container's x-z section (depth across, height up): one white
labeled rectangle per placement and one shaded rectangle per holder still
open after the construction.  Open holders are recovered by replaying the
placements, in order, through the packing semantics using their recorded
holder ids, so only solutions produced by this package (or following the
same discipline) can be rendered.  Output is deterministic byte for byte.
"""

from __future__ import annotations

from .heuristics import PackState
from .model import Instance, Solution


class ReplayError(ValueError):
    """The solution's placements do not replay through the packing rules."""


def replay(instance: Instance, solution: Solution) -> PackState:
    """Rebuild the final packing state (including open holders)."""
    state = PackState(instance)
    for p in solution.placements:
        if p.holder_id not in state.open_holders:
            raise ReplayError(f"placement {p.index}: holder {p.holder_id} is not open")
        got = state.place(p.item_index, p.holder_id)
        if (got.origin_x, got.origin_z, got.depth, got.height, got.packed_volume) != \
                (p.origin_x, p.origin_z, p.depth, p.height, p.packed_volume):
            raise ReplayError(f"placement {p.index} does not match the replayed geometry")
    return state


def render_svg(instance: Instance, solution: Solution, canvas: float = 480.0) -> str:
    state = replay(instance, solution)
    depth, height = float(instance.depth), float(instance.height)
    scale = canvas / max(depth, height)
    margin = 10.0
    width_px = depth * scale + 2 * margin
    height_px = height * scale + 2 * margin

    def x(v) -> float:
        return margin + float(v) * scale

    def y(v, extent=0) -> float:
        # SVG y grows downward; the container floor sits at the bottom.
        return margin + (height - float(v) - float(extent)) * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px:.1f}" '
             f'height="{height_px:.1f}" viewBox="0 0 {width_px:.1f} {height_px:.1f}">']
    parts.append(f'  <rect x="{margin:.1f}" y="{margin:.1f}" '
                 f'width="{depth * scale:.1f}" height="{height * scale:.1f}" '
                 'fill="white" stroke="black" stroke-width="3"/>')
    for holder in state.open_holders.values():
        parts.append(f'  <rect x="{x(holder.origin_x):.1f}" '
                     f'y="{y(holder.origin_z, holder.height):.1f}" '
                     f'width="{float(holder.depth) * scale:.1f}" '
                     f'height="{float(holder.height) * scale:.1f}" '
                     'fill="#cccccc" stroke="black" stroke-width="0.5"/>')
    for p in solution.placements:
        px, py = x(p.origin_x), y(p.origin_z, p.height)
        pw, ph = float(p.depth) * scale, float(p.height) * scale
        parts.append(f'  <rect x="{px:.1f}" y="{py:.1f}" width="{pw:.1f}" '
                     f'height="{ph:.1f}" fill="white" stroke="black" stroke-width="1"/>')
        font = max(8.0, min(18.0, pw / 2, ph / 2))
        parts.append(f'  <text x="{px + pw / 2:.1f}" y="{py + ph / 2:.1f}" '
                     f'font-size="{font:.1f}" text-anchor="middle" '
                     f'dominant-baseline="middle">{p.item_index}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
