"""Transformations of a finite state set Q = {0, ..., n-1}.

A transformation is a total map t: Q -> Q stored as a dense tuple of
images, so ``t[q]`` is the image of state q.  Composition is read left
to right: ``q (s * t) = (q s) t``, matching the way a word uv acts on a
DFA state (first u, then v).

Throughout the package state 0 is reserved for the initial state of a
DFA and state n-1 for its empty (sink) state; several predicates in
other modules depend on that convention, but nothing here does.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Transformation:
    """A total map on {0, ..., n-1}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n == 0:
            raise ValueError("transformation needs at least one state")
        for q, img in enumerate(self.images):
            if not isinstance(img, int) or not 0 <= img < n:
                raise ValueError(f"image of state {q} is {img!r}, not a state in 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __getitem__(self, q: int) -> int:
        return self.images[q]

    def __repr__(self) -> str:
        return f"Transformation({' '.join(str(i) for i in self.images)})"


def identity(n: int) -> Transformation:
    return Transformation(tuple(range(n)))


def compose(s: Transformation, t: Transformation) -> Transformation:
    """Left-to-right composition: state q goes to t[s[q]]."""
    if s.n != t.n:
        raise ValueError(f"cannot compose maps on {s.n} and {t.n} states")
    return Transformation(tuple(t.images[x] for x in s.images))


def power(t: Transformation, k: int) -> Transformation:
    if k < 0:
        raise ValueError("negative powers are not defined for transformations")
    acc = identity(t.n)
    for _ in range(k):
        acc = compose(acc, t)
    return acc


def parse_transformation(text: str) -> Transformation:
    """Parse the whitespace-separated image list, e.g. "4 2 3 1 4"."""
    parts = text.split()
    if not parts:
        raise ValueError("empty transformation text")
    try:
        images = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"bad transformation text {text!r}") from exc
    return Transformation(images)


def format_transformation(t: Transformation) -> str:
    return " ".join(str(i) for i in t.images)


def fixed_points(t: Transformation) -> tuple[int, ...]:
    return tuple(q for q in range(t.n) if t.images[q] == q)


def in_degree(t: Transformation, q: int) -> int:
    """Number of states mapped onto q by t."""
    if not 0 <= q < t.n:
        raise ValueError(f"state {q} out of range for n={t.n}")
    return sum(1 for img in t.images if img == q)


def cycles(t: Transformation) -> tuple[tuple[int, ...], ...]:
    """All cycles of length >= 2, rotated to start at their least state.

    Fixed points are deliberately not returned here; use fixed_points.
    The cycles are ordered by their least state.
    """
    cyc_states = _cyclic_states(t)
    seen: set[int] = set()
    out: list[tuple[int, ...]] = []
    for q in sorted(cyc_states):
        if q in seen:
            continue
        cyc = [q]
        cur = t.images[q]
        while cur != q:
            cyc.append(cur)
            cur = t.images[cur]
        seen.update(cyc)
        if len(cyc) >= 2:
            out.append(tuple(cyc))
    return tuple(out)


def _cyclic_states(t: Transformation) -> set[int]:
    # A state is cyclic iff repeated application of t returns to it.
    # Walk each tail once, marking the states on the terminal loop.
    n = t.n
    color = [0] * n  # 0 unvisited, 1 in progress, 2 done
    cyclic: set[int] = set()
    for start in range(n):
        if color[start]:
            continue
        path = []
        cur = start
        while color[cur] == 0:
            color[cur] = 1
            path.append(cur)
            cur = t.images[cur]
        if color[cur] == 1:
            # found a new loop; everything from cur onwards in path is cyclic
            idx = path.index(cur)
            cyclic.update(path[idx:])
        for q in path:
            color[q] = 2
    return cyclic


@dataclass(frozen=True, slots=True)
class OrbitClass:
    """One weakly-connected component of the functional graph of t.

    Exactly one of the two holds: the class contains a single cycle of
    length >= 2, or a single fixed point (a cycle of length 1).
    """

    states: frozenset[int]
    cycle: tuple[int, ...]

    @property
    def is_fixed_point(self) -> bool:
        return len(self.cycle) == 1


@dataclass(frozen=True, slots=True)
class OrbitPartition:
    classes: tuple[OrbitClass, ...]

    def class_of(self, q: int) -> OrbitClass:
        for cls in self.classes:
            if q in cls.states:
                return cls
        raise ValueError(f"state {q} not covered by the partition")


def orbits(t: Transformation) -> OrbitPartition:
    """Partition Q into orbits: p and q share an orbit iff their forward
    images under powers of t eventually meet."""
    n = t.n
    # union-find over the edges q -> t[q]
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for q in range(n):
        a, b = find(q), find(t.images[q])
        if a != b:
            parent[a] = b

    groups: dict[int, list[int]] = {}
    for q in range(n):
        groups.setdefault(find(q), []).append(q)

    cyc_states = _cyclic_states(t)
    classes = []
    for members in sorted(groups.values(), key=min):
        in_cycle = sorted(set(members) & cyc_states)
        head = in_cycle[0]
        cyc = [head]
        cur = t.images[head]
        while cur != head:
            cyc.append(cur)
            cur = t.images[cur]
        classes.append(OrbitClass(states=frozenset(members), cycle=tuple(cyc)))
    return OrbitPartition(classes=tuple(classes))


@dataclass(frozen=True, slots=True)
class ZeroPath:
    """The walk 0, 0t, 0t^2, ... up to its first repeated state.

    ``states`` lists the distinct prefix of the walk; ``period`` is the
    length of the loop the walk then enters.  Period 1 means the walk
    ends in a fixed point, in which case states[-1] is that fixed point.
    """

    states: tuple[int, ...]
    period: int

    @property
    def is_aperiodic(self) -> bool:
        return self.period == 1


def zero_path(t: Transformation) -> ZeroPath:
    seen: dict[int, int] = {}
    cur = 0
    path: list[int] = []
    while cur not in seen:
        seen[cur] = len(path)
        path.append(cur)
        cur = t.images[cur]
    return ZeroPath(states=tuple(path), period=len(path) - seen[cur])


def is_initially_aperiodic(t: Transformation) -> bool:
    """True iff the walk of state 0 under t never enters a cycle of
    length >= 2, i.e. it stabilises on a fixed point."""
    return zero_path(t).period == 1


@dataclass(frozen=True, slots=True)
class Shape:
    """Coarse structural label for a transformation.

    kind is one of identity, constant, unitary, semiconstant, other.
    ``moved`` lists the states whose image differs from themselves and
    ``target`` is their common image where the kind implies one.
    """

    kind: str
    moved: tuple[int, ...] = ()
    target: int | None = None


def classify_shape(t: Transformation) -> Shape:
    """Label t as identity, constant, unitary (one state moved),
    semiconstant (all moved states share one image, rest fixed), or other.

    The labels are mutually exclusive: identity and constant win over
    the degenerate semiconstant readings, unitary over semiconstant.
    """
    moved = tuple(q for q in range(t.n) if t.images[q] != q)
    if not moved:
        return Shape(kind="identity")
    targets = {t.images[q] for q in moved}
    if len(set(t.images)) == 1:
        return Shape(kind="constant", moved=moved, target=t.images[0])
    if len(moved) == 1:
        return Shape(kind="unitary", moved=moved, target=t.images[moved[0]])
    if len(targets) == 1:
        return Shape(kind="semiconstant", moved=moved, target=next(iter(targets)))
    return Shape(kind="other", moved=moved)
