"""Assumption modes excluding blow-ups at smooth points of one end component."""

from __future__ import annotations

import enum

from .graphs import AdeType, ResolutionGraph


class AssumptionMode(enum.Enum):
    NONE = "none"
    AVOID_E7 = "avoid-e7"
    AVOID_E2 = "avoid-e2"
    AVOID_E8 = "avoid-e8"
    AVOID_E6 = "avoid-e6"

    @classmethod
    def parse(cls, text) -> "AssumptionMode":
        if text is None or isinstance(text, cls):
            return text or cls.NONE
        return cls(text.strip().lower().replace("_", "-"))

    @property
    def excluded_vertex(self):
        return {"avoid-e7": "7", "avoid-e2": "2", "avoid-e8": "8", "avoid-e6": "6"}.get(self.value)


LEGAL = {
    (7,): (AssumptionMode.AVOID_E7, AssumptionMode.AVOID_E2),
    (8,): (AssumptionMode.AVOID_E8, AssumptionMode.AVOID_E6),
}


def legal_modes(t: AdeType) -> tuple:
    """Modes under which the uniqueness statements are claimed."""
    if t.family == "E" and t.rank in (7, 8):
        return LEGAL[(t.rank,)]
    return (AssumptionMode.NONE,)


def check_mode(t: AdeType, mode: AssumptionMode):
    mode = AssumptionMode.parse(mode)
    if mode is AssumptionMode.NONE:
        return mode
    if mode not in legal_modes(t):
        raise ValueError(f"mode {mode.value} is not legal for {t}")
    return mode


def violates(g: ResolutionGraph, mode: AssumptionMode) -> bool:
    """True if some valuation passes through a smooth point (of the exceptional
    divisor of the minimal resolution) of the excluded component.

    Such a point shows up either as an arrow or mark on the component itself or
    as a subtree hanging off it that contains no component of the minimal
    resolution (it was started by a blow-up at a free point of the component).
    """
    x = AssumptionMode.parse(mode).excluded_vertex
    if x is None:
        return False
    if x in g.arrows_at and g.arrows_at[x]:
        return True
    if x in g.divisorial:
        return True
    base = {str(i) for i in range(1, g.ade.rank + 1)}
    for start in g.neighbours[x]:
        seen, stack, hit = {x, start}, [start], start in base
        while stack and not hit:
            for w in g.neighbours[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
                    hit = hit or w in base
        if not hit:
            return True
    return False
