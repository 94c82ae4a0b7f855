"""Colliding and focused pairs of interior states.

A pair {p, q} of interior states is colliding in a semigroup T when
some t in T sends 0 to one of the pair and some interior state to the
other.  It is focused when some u in T sends both members to one
interior state r.  A transition semigroup of a minimal suffix-free DFA
never lets the same pair be both: a collider plus a focuser would
yield two words, one a proper suffix of the other, both accepted.

Mapping both members to the empty state n-1 is never a focus; the
target must be interior.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .semigroup import TransitionSemigroup, in_wsf, wsf_bound, word_string
from .transform import Transformation, format_transformation


class StructureError(ValueError):
    """The semigroup violates a structural precondition."""


@dataclass(frozen=True)
class PairStatus:
    pair: tuple[int, int]  # p < q, both interior
    colliding_by: Transformation | None
    focused_by: tuple[tuple[Transformation, int], ...]

    @property
    def colliding(self) -> bool:
        return self.colliding_by is not None

    @property
    def focused(self) -> bool:
        return bool(self.focused_by)


def colliding_pairs_of(t: Transformation) -> frozenset[tuple[int, int]]:
    """Pairs this single transformation makes colliding: {0t, rt} for
    every interior r with both images interior and distinct."""
    n = t.n
    p = t[0]
    if not 1 <= p <= n - 2:
        return frozenset()
    out = set()
    for r in range(1, n - 1):
        q = t[r]
        if 1 <= q <= n - 2 and q != p:
            out.add((min(p, q), max(p, q)))
    return frozenset(out)


def focused_pairs_of(t: Transformation) -> frozenset[tuple[int, int, int]]:
    """Triples (p, q, r) with p < q interior, both mapped by t to the
    interior state r."""
    n = t.n
    by_image: dict[int, list[int]] = {}
    for q in range(1, n - 1):
        img = t[q]
        if 1 <= img <= n - 2:
            by_image.setdefault(img, []).append(q)
    out = set()
    for r, states in by_image.items():
        for p, q in combinations(states, 2):
            out.add((p, q, r))
    return frozenset(out)


def pair_statuses(sg: TransitionSemigroup) -> tuple[PairStatus, ...]:
    """Status of every unordered interior pair, in lexicographic order.

    Witnesses are deterministic: the first element in discovery order
    that makes the pair colliding, and focus entries in discovery order.
    """
    n = sg.n
    if n < 4:
        raise ValueError("pair analysis needs n >= 4")
    for t in sg.elements:
        if t[n - 1] != n - 1:
            raise StructureError(
                f"element {format_transformation(t)} does not fix state {n - 1}"
            )
    colliders: dict[tuple[int, int], Transformation] = {}
    focusers: dict[tuple[int, int], list[tuple[Transformation, int]]] = {}
    for t in sg.elements:
        for pair in colliding_pairs_of(t):
            colliders.setdefault(pair, t)
        for p, q, r in sorted(focused_pairs_of(t)):
            focusers.setdefault((p, q), []).append((t, r))
    return tuple(
        PairStatus(
            pair=(p, q),
            colliding_by=colliders.get((p, q)),
            focused_by=tuple(focusers.get((p, q), ())),
        )
        for p, q in combinations(range(1, n - 1), 2)
    )


def verify_suffix_free_consistency(sg: TransitionSemigroup) -> bool:
    """True iff no interior pair is both colliding and focused."""
    return all(not (s.colliding and s.focused) for s in pair_statuses(sg))


@dataclass(frozen=True)
class CollisionFreeBoundReport:
    """When a semigroup has no colliding pair at all, it must fit inside
    the collapsing family: size at most (n-1)^(n-2) + n - 2 and every
    element in w_sf(n)."""

    applicable: bool
    size: int
    bound: int
    size_within_bound: bool
    all_elements_wsf: bool

    @property
    def passed(self) -> bool:
        return self.applicable and self.size_within_bound and self.all_elements_wsf


def check_collision_free_bound(sg: TransitionSemigroup) -> CollisionFreeBoundReport:
    statuses = pair_statuses(sg)
    applicable = all(not s.colliding for s in statuses)
    bound = wsf_bound(sg.n)
    if not applicable:
        return CollisionFreeBoundReport(
            applicable=False,
            size=sg.size,
            bound=bound,
            size_within_bound=sg.size <= bound,
            all_elements_wsf=False,
        )
    return CollisionFreeBoundReport(
        applicable=True,
        size=sg.size,
        bound=bound,
        size_within_bound=sg.size <= bound,
        all_elements_wsf=all(in_wsf(t) for t in sg.elements),
    )


def _witness_text(sg: TransitionSemigroup, t: Transformation, names: Sequence[str] | None) -> str:
    if sg.witness_words is not None:
        return word_string(sg.witness_words[t], names)
    return format_transformation(t)


def pair_statuses_json(sg: TransitionSemigroup, names: Sequence[str] | None = None) -> list[dict]:
    """JSON-friendly pair report: colliding flag with witness word and
    focus targets with witness words.  Falls back to image tuples when
    the semigroup was enumerated directly and has no words."""
    out = []
    for s in pair_statuses(sg):
        entry: dict = {"pair": list(s.pair), "colliding": s.colliding}
        if s.colliding_by is not None:
            entry["colliding_by"] = _witness_text(sg, s.colliding_by, names)
        entry["focused"] = s.focused
        entry["focus_targets"] = [
            {"target": r, "by": _witness_text(sg, u, names)} for u, r in s.focused_by
        ]
        out.append(entry)
    return out
