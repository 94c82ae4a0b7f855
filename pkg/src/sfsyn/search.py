"""Exhaustive small-alphabet search for the largest transition
semigroups of suffix-free DFAs.

Semiautomata are enumerated level by level, one letter at a time, up
to isomorphism.  For each semiautomaton every (initial, empty) state
selection is relabeled to (0, n-1) and judged: the letters and the
closure they generate must stay inside the admissible sink family,
the full semiconstant family is folded into the generated semigroup X,
and a branch survives only while |X| + |Y| - |M| can still reach the
target, where Y collects the transformations that may still be added
and M is a greedy matching in their conflict graph.

Branches are closed off by a per-pair case analysis.  A consistent
semigroup must, for every interior pair, avoid all of the pair's
colliders or all of its focusers, so each way of choosing sides caps
any extension of the branch by the candidates surviving that choice.
A choice whose survivors sit, together with the branch, inside the
injective-off-sink family or the collapsing family can only produce
that family itself, which is confirmed directly from its known
generators; a choice whose survivor count cannot reach the target is
dead.  When every choice falls to one of the two, the branch ends.
The family cutoff applies only while the target is at least the
containing family's size, so a search for smaller semigroups still
walks those branches.  Surviving branches are further bounded through
a greedy matching of mutually exclusive candidate pairs: pairs whose
accumulated masks clash outright, and pairs whose products escape the
admissible family.

The hot paths work on transformations encoded as length-n byte
strings: composition is one bytes.translate call, and admissibility
and pair masks are table lookups precomputed per n.

Everything here is deterministic: pools, selections, and level merges
are ordered, so two runs (any thread count) produce the same result.
"""
from __future__ import annotations

import logging
import os
import string
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .collisions import colliding_pairs_of, focused_pairs_of, verify_suffix_free_consistency
from .dfa import Dfa, Semiautomaton, is_suffix_free
from .semigroup import (
    TransitionSemigroup,
    closure,
    enumerate_bsf,
    enumerate_wsf,
    semiconstant_family,
    vsf_generators,
    witness_letters,
    wsf_bound,
)
from .transform import Transformation

logger = logging.getLogger(__name__)

# raw transformations travel as length-n byte strings so composition
# can run through bytes.translate
RawMap = bytes

DEFAULT_MAX_LETTERS = 10


# ------------------------------------------------------------ canonical form


@dataclass(frozen=True)
class CanonicalSemiautomaton:
    """A semiautomaton in canonical form: the letter list that is
    lexicographically least over every state permutation combined with
    every letter reordering.  Two semiautomata are isomorphic iff their
    fingerprints are equal."""

    n: int
    letters: tuple[Transformation, ...]
    fingerprint: bytes

    @property
    def semiautomaton(self) -> Semiautomaton:
        names = tuple(string.ascii_lowercase[i] for i in range(len(self.letters)))
        return Semiautomaton(n=self.n, letters=names, delta=self.letters)


def _conjugate(t: RawMap, perm: Sequence[int]) -> RawMap:
    out = bytearray(len(t))
    for q, img in enumerate(t):
        out[perm[q]] = perm[img]
    return bytes(out)


@lru_cache(maxsize=8)
def _all_perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(permutations(range(n)))


def _canonical_letters(letters: Sequence[RawMap], n: int) -> tuple[RawMap, ...]:
    # n <= 6 keeps n! small enough to scan outright; the incumbent
    # comparison prunes most permutations after a few letters
    best: list[RawMap] | None = None
    for perm in _all_perms(n):
        cand = sorted(_conjugate(t, perm) for t in letters)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return tuple(best)


def _fingerprint(letters: Sequence[RawMap], n: int) -> bytes:
    return bytes([n, len(letters)]) + b"".join(letters)


def canonicalize(sa: Semiautomaton | Sequence[Transformation]) -> CanonicalSemiautomaton:
    """Canonical form under state permutation and letter reordering.

    Accepts a Semiautomaton or a plain sequence of letter
    transformations.  Idempotent, and invariant under relabeling.
    """
    delta = sa.delta if isinstance(sa, Semiautomaton) else tuple(sa)
    if not delta:
        raise ValueError("canonicalization needs at least one letter")
    n = delta[0].n
    for t in delta:
        if t.n != n:
            raise ValueError(f"mixed state counts: {t.n} vs {n}")
    canon = _canonical_letters([bytes(t.images) for t in delta], n)
    return CanonicalSemiautomaton(
        n=n,
        letters=tuple(Transformation(tuple(t)) for t in canon),
        fingerprint=_fingerprint(canon, n),
    )


def _decode_fp(fp: bytes) -> tuple[int, tuple[RawMap, ...]]:
    if len(fp) < 2:
        raise ValueError("fingerprint too short")
    n, count = fp[0], fp[1]
    body = fp[2:]
    if len(body) != n * count or count == 0:
        raise ValueError(f"fingerprint length {len(fp)} does not match n={n}, letters={count}")
    letters = tuple(body[i * n : (i + 1) * n] for i in range(count))
    for t in letters:
        if any(v >= n for v in t):
            raise ValueError("fingerprint contains an out-of-range state")
    return n, letters


def parse_fingerprint(fp: bytes) -> CanonicalSemiautomaton:
    """Rebuild a canonical semiautomaton from its fingerprint bytes.

    The encoding is [n, letter count] followed by the concatenated
    image tables, so the fingerprint alone carries the whole object.
    Rejects bytes that do not decode to a canonical form.
    """
    n, letters = _decode_fp(fp)
    if _canonical_letters(letters, n) != letters:
        raise ValueError("fingerprint is not in canonical form")
    return CanonicalSemiautomaton(
        n=n,
        letters=tuple(Transformation(tuple(t)) for t in letters),
        fingerprint=bytes(fp),
    )


# ------------------------------------------------------------ pair machinery


def _pair_bits(n: int) -> dict[tuple[int, int], int]:
    return {pair: 1 << i for i, pair in enumerate(combinations(range(1, n - 1), 2))}


def _masks_of(t: Sequence[int], n: int, pair_bit: dict[tuple[int, int], int]) -> tuple[int, int]:
    # colliding pairs {t[0], t[r]} and focused pairs {p, q} with
    # t[p] == t[q] interior, as bitmasks over the interior pairs
    coll = 0
    p0 = t[0]
    if 1 <= p0 <= n - 2:
        for r in range(1, n - 1):
            q = t[r]
            if 1 <= q <= n - 2 and q != p0:
                coll |= pair_bit[(min(p0, q), max(p0, q))]
    foc = 0
    by_image: dict[int, int] = {}
    for q in range(1, n - 1):
        img = t[q]
        if 1 <= img <= n - 2:
            prev = by_image.get(img)
            if prev is None:
                by_image[img] = q
            else:
                foc |= pair_bit[(prev, q)]
                # more than two sources per image: pair each with the first
                for other in range(prev + 1, q):
                    if t[other] == img:
                        foc |= pair_bit[(other, q)]
    return coll, foc


def _table(g: RawMap) -> bytes:
    # 256-entry translation table; the padding bytes are unreachable
    # because every composed value stays below n
    return g + bytes(range(len(g), 256))


# ------------------------------------------------------------ shared context


@dataclass(frozen=True)
class _Context:
    n: int
    pair_bit: dict[tuple[int, int], int]
    all_pairs: int
    pool: tuple[RawMap, ...]
    semiconstants: tuple[RawMap, ...]
    bsf_set: frozenset[RawMap]
    masks: dict[RawMap, tuple[int, int]]
    tables: dict[RawMap, bytes]
    vsf_elements: frozenset[RawMap]
    wsf_elements: frozenset[RawMap]


@lru_cache(maxsize=4)
def _context(n: int) -> _Context:
    pair_bit = _pair_bits(n)
    bsf = frozenset(bytes(t.images) for t in enumerate_bsf(n))
    semi = frozenset(bytes(t.images) for t in semiconstant_family(n))
    pool = tuple(sorted(bsf - semi))
    vsf = frozenset(bytes(e.images) for e in closure(list(vsf_generators(n))).elements)
    wsf = frozenset(bytes(e.images) for e in enumerate_wsf(n).elements)
    return _Context(
        n=n,
        pair_bit=pair_bit,
        all_pairs=(1 << len(pair_bit)) - 1,
        pool=pool,
        semiconstants=tuple(sorted(semi)),
        bsf_set=bsf,
        masks={t: _masks_of(t, n, pair_bit) for t in bsf},
        tables={t: _table(t) for t in bsf},
        vsf_elements=vsf,
        wsf_elements=wsf,
    )


# ------------------------------------------------------------ closures


def _close_all_admissible(
    gens: Sequence[RawMap], ctx: _Context
) -> tuple[frozenset[RawMap], int, int] | None:
    """Close the generators, refusing the moment an element leaves the
    admissible sink family.  Returns the elements plus the union
    colliding and focused pair masks, or None on refusal."""
    bsf = ctx.bsf_set
    masks = ctx.masks
    elems: set[RawMap] = set()
    order: list[RawMap] = []
    coll = foc = 0
    for g in gens:
        if g not in elems:
            if g not in bsf:
                return None
            elems.add(g)
            order.append(g)
            c, f = masks[g]
            coll |= c
            foc |= f
    tables = [ctx.tables[g] for g in dict.fromkeys(gens)]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for tb in tables:
            y = x.translate(tb)
            if y not in elems:
                if y not in bsf:
                    return None
                elems.add(y)
                order.append(y)
                c, f = masks[y]
                coll |= c
                foc |= f
    return frozenset(elems), coll, foc


def _extend_closure(
    base: frozenset[RawMap],
    coll: int,
    foc: int,
    t: RawMap,
    gen_tables: Sequence[bytes],
    ctx: _Context,
) -> tuple[frozenset[RawMap], int, int] | None:
    """Closure of base plus t, where base is already closed under the
    generators behind gen_tables.  Only products involving t are
    walked: t itself, x then t for every x in base, and onward
    compositions with every generator and t.  Refuses like
    _close_all_admissible."""
    bsf = ctx.bsf_set
    if t not in bsf:
        return None
    masks = ctx.masks
    t_table = ctx.tables[t]
    elems = set(base)
    fresh: list[RawMap] = []

    if t not in elems:
        elems.add(t)
        fresh.append(t)
    for x in base:
        y = x.translate(t_table)
        if y not in elems:
            if y not in bsf:
                return None
            elems.add(y)
            fresh.append(y)
    tables = list(gen_tables) + [t_table]
    i = 0
    while i < len(fresh):
        x = fresh[i]
        i += 1
        for tb in tables:
            y = x.translate(tb)
            if y not in elems:
                if y not in bsf:
                    return None
                elems.add(y)
                fresh.append(y)
    for y in fresh:
        c, f = masks[y]
        coll |= c
        foc |= f
    return frozenset(elems), coll, foc


# ------------------------------------------------------------ conflict test


def conflict(t: Transformation, u: Transformation) -> bool:
    """Sufficient test that t and u cannot share a suffix-free DFA.

    Closes {t, u} and answers true when some pair is both colliding in
    the closure and focused by a closure element, or when every
    interior pair is colliding, or every one is focused.  The closure
    embeds in any semigroup containing both and all three conditions
    persist under adding elements, so a true answer is final; a false
    answer is only "no conflict visible from these two alone".
    """
    if t.n != u.n:
        raise ValueError(f"mixed state counts: {t.n} vs {u.n}")
    n = t.n
    sg = closure([t, u])
    colliding: set[tuple[int, int]] = set()
    focused: set[tuple[int, int]] = set()
    for e in sg.elements:
        colliding |= colliding_pairs_of(e)
        focused |= {(p, q) for p, q, _ in focused_pairs_of(e)}
    every = set(combinations(range(1, n - 1), 2))
    if colliding & focused:
        return True
    return colliding == every or focused == every


@dataclass(frozen=True)
class ConflictGraph:
    """Conflict graph over a transformation set: vertices in ascending
    image order, edges as index pairs i < j.  Built by
    build_conflict_graph, which checks each edge."""

    vertices: tuple[Transformation, ...]
    edges: frozenset[tuple[int, int]]


def build_conflict_graph(
    transformations: Iterable[Transformation], test=conflict
) -> ConflictGraph:
    vertices = tuple(sorted(set(transformations), key=lambda t: t.images))
    edges = set()
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            if test(vertices[i], vertices[j]):
                edges.add((i, j))
    return ConflictGraph(vertices=vertices, edges=frozenset(edges))


def greedy_matching(graph: ConflictGraph) -> int:
    """Size of the maximal matching grown greedily: vertices in
    ascending image order, each matched to its least unmatched
    conflicting neighbour."""
    adjacency: dict[int, set[int]] = {i: set() for i in range(len(graph.vertices))}
    for i, j in graph.edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    matched: set[int] = set()
    size = 0
    for i in range(len(graph.vertices)):
        if i in matched:
            continue
        for j in sorted(adjacency[i]):
            if j not in matched:
                matched.add(i)
                matched.add(j)
                size += 1
                break
    return size


def _conflict_matching(
    cands: Sequence[RawMap], cmasks: Sequence[int], fmasks: Sequence[int], ctx: _Context
) -> int:
    """Greedy matching over candidate pairs that cannot coexist in any
    consistent extension: pairs whose accumulated masks clash, and
    pairs with a product outside the admissible family.  Every edge is
    a genuine mutual exclusion, so the matching size soundly lowers
    how many candidates a single extension can absorb."""
    k = len(cands)
    matched = bytearray(k)
    bsf = ctx.bsf_set
    tables = ctx.tables
    size = 0
    for i in range(k):
        if matched[i]:
            continue
        ci, fi, ti = cmasks[i], fmasks[i], cands[i]
        ti_table = tables[ti]
        for j in range(i + 1, k):
            if matched[j]:
                continue
            if not ((ci & fmasks[j]) or (fi & cmasks[j])):
                tj = cands[j]
                if ti.translate(tables[tj]) in bsf and tj.translate(ti_table) in bsf:
                    continue
            matched[i] = matched[j] = 1
            size += 1
            break
    return size


def _leaf_verdict(
    x_size: int,
    x_in_vsf: bool,
    x_in_wsf: bool,
    sigs: Counter,
    n_bits: int,
    target: int,
    vsf_closed: bool,
    wsf_closed: bool,
    use_count: bool,
) -> str | None:
    """Case analysis over the interior pairs: a consistent semigroup
    omits, for each pair, all of its colliders or all of its focusers,
    so every branch outcome lives inside one of the side-choices.
    sigs counts candidates by (colliding mask, focused mask, in the
    injective-off-sink family, in the collapsing family).  Returns
    "terminal" when every choice is confined to a directly confirmed
    family or (with use_count) cannot reach the target, "pruned" when
    the count alone closes every choice, and None when some choice
    stays open."""
    has_c = 0
    has_f = 0
    for c, f, _, _ in sigs:
        has_c |= c
        has_f |= f
    free = [1 << b for b in range(n_bits) if (has_c >> b) & 1 and (has_f >> b) & 1]
    saw_family = False
    for choice in range(1 << len(free)):
        omit_c = 0
        omit_f = 0
        for k, bit in enumerate(free):
            if (choice >> k) & 1:
                omit_c |= bit
            else:
                omit_f |= bit
        count = 0
        all_v = x_in_vsf
        all_w = x_in_wsf
        for (c, f, in_v, in_w), mult in sigs.items():
            if c & omit_c or f & omit_f:
                continue
            count += mult
            all_v = all_v and in_v
            all_w = all_w and in_w
        if (vsf_closed and all_v) or (wsf_closed and all_w):
            saw_family = True
            continue
        if use_count and x_size + count < target:
            continue
        return None
    return "terminal" if saw_family else "pruned"


def prune_bound(x, y, matching_size: int) -> int:
    """The branch bound |X| + |Y| - |M|: a conflict-free superset of X
    inside X union Y loses at least one member per matched edge."""
    if matching_size < 0 or matching_size * 2 > len(y):
        raise ValueError(f"matching of size {matching_size} cannot live on {len(y)} vertices")
    return len(x) + len(y) - matching_size


def allowed_additions(sg: TransitionSemigroup) -> frozenset[Transformation]:
    """The transformations outside sg whose addition keeps the closure
    inside the admissible sink family with no pair both colliding and
    focused, and keeps at least one interior pair free of collisions
    and at least one free of focusing.  The two excluded extremes pin
    the semigroup inside a known maximal family, so branches through
    them need no further additions."""
    n = sg.n
    if n < 4:
        raise ValueError("the addition pool needs n >= 4")
    ctx = _context(n)
    members = frozenset(bytes(e.images) for e in sg.elements)
    coll = foc = 0
    for e in members:
        c, f = _masks_of(e, n, ctx.pair_bit)
        coll |= c
        foc |= f
    gen_tables = [_table(bytes(g.images)) for g in sg.generators]
    out = []
    for raw in sorted(ctx.bsf_set):
        if raw in members:
            continue
        tc, tf = ctx.masks[raw]
        if (coll | tc) & (foc | tf):
            continue
        grown = _extend_closure(members, coll, foc, raw, gen_tables, ctx)
        if grown is None:
            continue
        _, c2, f2 = grown
        if c2 & f2 or c2 == ctx.all_pairs or f2 == ctx.all_pairs:
            continue
        out.append(Transformation(tuple(raw)))
    return frozenset(out)


# ------------------------------------------------------------ level expansion


def initial_level(n: int) -> tuple[CanonicalSemiautomaton, ...]:
    """A1: the single-letter semiautomata, one per conjugacy class of
    the non-semiconstant admissible transformations."""
    ctx = _context(n)
    seen: dict[bytes, tuple[RawMap, ...]] = {}
    for g in ctx.pool:
        canon = _canonical_letters([g], n)
        seen.setdefault(_fingerprint(canon, n), canon)
    return tuple(
        CanonicalSemiautomaton(
            n=n,
            letters=tuple(Transformation(tuple(t)) for t in seen[fp]),
            fingerprint=fp,
        )
        for fp in sorted(seen)
    )


def _alignment(i: int, e: int, n: int) -> tuple[int, ...]:
    # relabel so the chosen initial state becomes 0 and the chosen
    # empty state becomes n-1, keeping the rest in ascending order
    perm = [0] * n
    perm[i] = 0
    perm[e] = n - 1
    k = 1
    for q in range(n):
        if q != i and q != e:
            perm[q] = k
            k += 1
    return tuple(perm)


def _irreducible_raw(letters: Sequence[RawMap]) -> bool:
    # same notion as is_irreducibly_generated, on raw byte maps, with
    # an early exit the moment the left-out letter shows up
    for i, g in enumerate(letters):
        rest = [h for j, h in enumerate(letters) if j != i]
        if not rest:
            continue
        seen = set(rest)
        if g in seen:
            return False
        tables = [_table(h) for h in rest]
        queue = list(seen)
        found = False
        while queue and not found:
            nxt = []
            for x in queue:
                for tb in tables:
                    y = x.translate(tb)
                    if y not in seen:
                        if y == g:
                            found = True
                            break
                        seen.add(y)
                        nxt.append(y)
                if found:
                    break
            queue = nxt
        if found:
            return False
    return True


def extend(level: Iterable[CanonicalSemiautomaton]) -> tuple[CanonicalSemiautomaton, ...]:
    """Every canonical one-letter extension of the level.

    For each alignment of each semiautomaton that keeps all letters in
    the admissible family, each non-semiconstant admissible letter is
    appended; results are canonicalized, deduplicated, and kept only
    when every letter is needed to generate the joint semigroup.
    """
    grown: dict[bytes, tuple[RawMap, ...]] = {}
    n = None
    for sa in level:
        n = sa.n
        ctx = _context(n)
        raw = tuple(bytes(t.images) for t in sa.letters)
        seen_aligned: set[tuple[RawMap, ...]] = set()
        for i in range(n):
            for e in range(n):
                if e == i:
                    continue
                perm = _alignment(i, e, n)
                aligned = tuple(sorted(_conjugate(t, perm) for t in raw))
                if aligned in seen_aligned:
                    continue
                seen_aligned.add(aligned)
                if not all(t in ctx.bsf_set for t in aligned):
                    continue
                for g in ctx.pool:
                    if g in aligned:
                        continue
                    canon = _canonical_letters(sorted(aligned + (g,)), n)
                    grown.setdefault(_fingerprint(canon, n), canon)
    out = []
    for fp in sorted(grown):
        if _irreducible_raw(grown[fp]):
            letters = tuple(Transformation(tuple(t)) for t in grown[fp])
            out.append(CanonicalSemiautomaton(n=n, letters=letters, fingerprint=fp))
    return tuple(out)


# ------------------------------------------------------------ search proper


@dataclass(frozen=True)
class SemigroupRecord:
    """One semigroup reported by the search: its identity class, size,
    and a generating letter list whose DFA realizes it."""

    kind: str  # "vsf", "wsf", or "other"
    size: int
    letters: tuple[Transformation, ...]
    level: int | None = None  # None when confirmed directly, not found by descent


@dataclass(frozen=True)
class SearchStats:
    visited: int
    pruned: int
    selections: int
    rejected_selections: int
    terminal_selections: int
    pruned_selections: int
    extensions: int
    level_sizes: tuple[int, ...]
    capped: bool
    wall_time_s: float


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one bounded search run.

    others lists every semigroup of size >= target that is neither the
    injective-off-sink family nor the collapsing family; uniqueness of
    the known maximum holds exactly when that list is empty and the
    exploration was not cut off by the letter cap.
    """

    n: int
    target: int
    max_size_found: int
    others: tuple[SemigroupRecord, ...]
    confirmations: tuple[SemigroupRecord, ...]
    stats: SearchStats

    @property
    def maximal_semigroups(self) -> tuple[SemigroupRecord, ...]:
        pool = self.confirmations + self.others
        return tuple(r for r in pool if r.size == self.max_size_found)

    @property
    def uniqueness_confirmed(self) -> bool:
        return bool(self.confirmations) and not self.others and not self.stats.capped

    def to_json(self, include_timing: bool = True) -> dict:
        def record(r: SemigroupRecord) -> dict:
            return {
                "kind": r.kind,
                "size": r.size,
                "letters": [list(t.images) for t in r.letters],
                "level": r.level,
            }

        stats = {
            "visited": self.stats.visited,
            "pruned": self.stats.pruned,
            "selections": self.stats.selections,
            "rejected_selections": self.stats.rejected_selections,
            "terminal_selections": self.stats.terminal_selections,
            "pruned_selections": self.stats.pruned_selections,
            "extensions": self.stats.extensions,
            "level_sizes": list(self.stats.level_sizes),
            "capped": self.stats.capped,
        }
        if include_timing:
            stats["wall_time_s"] = self.stats.wall_time_s
        return {
            "n": self.n,
            "target": self.target,
            "max_size_found": self.max_size_found,
            "uniqueness_confirmed": self.uniqueness_confirmed,
            "others": [record(r) for r in self.others],
            "confirmations": [record(r) for r in self.confirmations],
            "statistics": stats,
        }


def _expand_one(args: tuple[bytes, int, int, bool]) -> dict:
    """Judge one canonical semiautomaton: every (initial, empty)
    selection, aligned to (0, n-1), yields either a rejection, a
    terminal branch, a prune, or a viable branch with its admissible
    additions turned into canonical extensions.  Runs in worker
    processes, so takes and returns plain picklable data."""
    fp, n, target, prune = args
    ctx = _context(n)
    _, raw = _decode_fp(fp)
    counters = {"selections": 0, "rejected": 0, "terminal": 0, "pruned": 0}
    extensions: dict[bytes, None] = {}
    others: list[dict] = []
    viable = False
    seen_aligned: set[tuple[RawMap, ...]] = set()
    bsf = ctx.bsf_set
    masks = ctx.masks
    vsf = ctx.vsf_elements
    wsf = ctx.wsf_elements
    n_bits = len(ctx.pair_bit)
    # a branch confined to one of the two families is only allowed to
    # end there when no proper subset of the family could still matter
    vsf_closed = target >= len(vsf)
    wsf_closed = target >= len(wsf)
    for i in range(n):
        for e in range(n):
            if e == i:
                continue
            perm = _alignment(i, e, n)
            aligned = tuple(sorted(_conjugate(t, perm) for t in raw))
            if aligned in seen_aligned:
                continue
            seen_aligned.add(aligned)
            counters["selections"] += 1
            if not all(t in bsf for t in aligned):
                counters["rejected"] += 1
                continue
            gen_raws: tuple[RawMap, ...] = aligned + ctx.semiconstants
            closed = _close_all_admissible(gen_raws, ctx)
            if closed is None:
                if _close_all_admissible(aligned, ctx) is None:
                    counters["rejected"] += 1
                    continue
                closed, gen_raws = _absorb_semiconstants(aligned, ctx)
            members, coll, foc = closed
            assert not coll & foc, "pair both colliding and focused survived the closure"
            if len(members) >= target:
                others.append(
                    {"size": len(members), "letters": list(aligned), "members": sorted(members)}
                )
            x_in_v = members <= vsf
            x_in_w = members <= wsf
            # stage one: mask-compatible candidates over-approximate the
            # admissible additions with no closure work at all
            candidates: list[RawMap] = []
            for t in ctx.pool:
                if t in members:
                    continue
                tc, tf = masks[t]
                if (coll | tc) & (foc | tf):
                    continue
                candidates.append(t)
            if prune and len(members) + len(candidates) < target:
                counters["pruned"] += 1
                continue
            sigs = Counter(
                (masks[t][0], masks[t][1], t in vsf, t in wsf) for t in candidates
            )
            verdict = _leaf_verdict(
                len(members), x_in_v, x_in_w, sigs, n_bits, target, vsf_closed, wsf_closed, prune
            )
            if verdict:
                counters[verdict] += 1
                continue
            if prune:
                m = _conflict_matching(
                    candidates,
                    [masks[t][0] for t in candidates],
                    [masks[t][1] for t in candidates],
                    ctx,
                )
                if len(members) + len(candidates) - m < target:
                    counters["pruned"] += 1
                    continue
            # stage two: drop candidates whose one-step products against
            # the branch already escape, and enrich the masks of the
            # rest with those products; still a superset of the true
            # additions, with far sharper conflict edges
            mem_list = sorted(members)
            mem_tables = [ctx.tables[x] for x in mem_list]
            near: list[RawMap] = []
            near_c: list[int] = []
            near_f: list[int] = []
            for t in candidates:
                t_table = ctx.tables[t]
                c, f = masks[t]
                y = t.translate(t_table)
                ok = y in bsf
                if ok:
                    yc, yf = masks[y]
                    c |= yc
                    f |= yf
                    for x, xt in zip(mem_list, mem_tables):
                        y = x.translate(t_table)
                        if y not in bsf:
                            ok = False
                            break
                        yc, yf = masks[y]
                        c |= yc
                        f |= yf
                        y = t.translate(xt)
                        if y not in bsf:
                            ok = False
                            break
                        yc, yf = masks[y]
                        c |= yc
                        f |= yf
                if not ok or (coll | c) & (foc | f):
                    continue
                near.append(t)
                near_c.append(c)
                near_f.append(f)
            if prune and len(members) + len(near) < target:
                counters["pruned"] += 1
                continue
            sigs = Counter(
                (c, f, t in vsf, t in wsf) for t, c, f in zip(near, near_c, near_f)
            )
            verdict = _leaf_verdict(
                len(members), x_in_v, x_in_w, sigs, n_bits, target, vsf_closed, wsf_closed, prune
            )
            if verdict:
                counters[verdict] += 1
                continue
            if prune:
                m = _conflict_matching(near, near_c, near_f, ctx)
                if len(members) + len(near) - m < target:
                    counters["pruned"] += 1
                    continue
            # stage three: the exact additions, each checked by closure,
            # carrying the closure's full pair masks
            gen_tables = [ctx.tables[g] for g in gen_raws]
            additions: list[RawMap] = []
            add_c: list[int] = []
            add_f: list[int] = []
            cut_short = False
            for idx, t in enumerate(near):
                if prune and len(members) + len(additions) + (len(near) - idx) < target:
                    # even admitting every remaining candidate cannot
                    # reach the target
                    cut_short = True
                    break
                grown = _extend_closure(members, coll, foc, t, gen_tables, ctx)
                if grown is None:
                    continue
                _, c2, f2 = grown
                if c2 & f2:
                    continue
                additions.append(t)
                add_c.append(c2)
                add_f.append(f2)
            if cut_short:
                counters["pruned"] += 1
                continue
            if prune and len(members) + len(additions) < target:
                counters["pruned"] += 1
                continue
            sigs = Counter(
                (c, f, t in vsf, t in wsf) for t, c, f in zip(additions, add_c, add_f)
            )
            verdict = _leaf_verdict(
                len(members), x_in_v, x_in_w, sigs, n_bits, target, vsf_closed, wsf_closed, prune
            )
            if verdict:
                counters[verdict] += 1
                continue
            if prune:
                m = _conflict_matching(additions, add_c, add_f, ctx)
                if len(members) + len(additions) - m < target:
                    counters["pruned"] += 1
                    continue
            viable = True
            for g in additions:
                canon = _canonical_letters(sorted(aligned + (g,)), n)
                extensions.setdefault(_fingerprint(canon, n), None)
    return {
        "fp": fp,
        "counters": counters,
        "extensions": list(extensions),
        "others": others,
        "dead": not viable and not others,
    }


def _absorb_semiconstants(
    aligned: tuple[RawMap, ...], ctx: _Context
) -> tuple[tuple[frozenset[RawMap], int, int], tuple[RawMap, ...]]:
    # fallback when folding the whole semiconstant family in at once
    # fails: absorb them one at a time, in image order, keeping each
    # only if the closure stays admissible.  Requires that the aligned
    # letters alone already close admissibly.
    logger.debug("semiconstant family not absorbed wholesale for %s", aligned)
    state = _close_all_admissible(aligned, ctx)
    assert state is not None
    gens = list(aligned)
    gen_tables = [ctx.tables[g] for g in aligned]
    for s in ctx.semiconstants:
        members, coll, foc = state
        if s in members:
            continue
        grown = _extend_closure(members, coll, foc, s, gen_tables, ctx)
        if grown is not None:
            gens.append(s)
            gen_tables.append(ctx.tables[s])
            state = grown
    return state, tuple(gens)


def _confirmed_extremes(n: int, target: int) -> tuple[SemigroupRecord, ...]:
    # the two known maximal families, realized by explicit DFAs; only
    # the ones actually reaching the target belong in the report
    out = []
    vsf_gens = vsf_generators(n)
    vsf = closure(list(vsf_gens))
    names, wit = witness_letters(n)
    wsf = enumerate_wsf(n)
    for kind, size, letters, letter_names in (
        ("vsf", vsf.size, vsf_gens, tuple(f"g{i}" for i in range(len(vsf_gens)))),
        ("wsf", wsf.size, wit, names),
    ):
        if size < target:
            continue
        dfa = Dfa(n=n, letters=letter_names, delta=letters, initial=0, finals=frozenset({1}))
        if not is_suffix_free(dfa):
            raise RuntimeError(f"confirmation DFA for {kind} is not suffix-free")
        if not verify_suffix_free_consistency(closure(list(letters))):
            raise RuntimeError(f"confirmation semigroup for {kind} is inconsistent")
        out.append(SemigroupRecord(kind=kind, size=size, letters=tuple(letters), level=None))
    return tuple(out)


def _classify_other(members: frozenset[RawMap], ctx: _Context) -> str:
    if members == ctx.vsf_elements:
        return "vsf"
    if members == ctx.wsf_elements:
        return "wsf"
    return "other"


def save_checkpoint(path: str, level_index: int, n: int, level: Iterable[CanonicalSemiautomaton]) -> None:
    """One fingerprint per line under a level header, written atomically."""
    lines = [f"# sfsyn-search level={level_index} n={n}"]
    lines.extend(sa.fingerprint.hex() for sa in sorted(level, key=lambda s: s.fingerprint))
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def load_checkpoint(path: str) -> tuple[int, int, tuple[CanonicalSemiautomaton, ...]]:
    """Read a checkpoint back: (n, level index, semiautomata)."""
    with open(path, encoding="ascii") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or not lines[0].startswith("# sfsyn-search "):
        raise ValueError(f"{path} is not a search checkpoint")
    fields = dict(part.split("=", 1) for part in lines[0][2:].split()[1:])
    n = int(fields["n"])
    level_index = int(fields["level"])
    sas = tuple(parse_fingerprint(bytes.fromhex(line)) for line in lines[1:])
    for sa in sas:
        if sa.n != n:
            raise ValueError(f"checkpoint mixes state counts: {sa.n} vs {n}")
    return n, level_index, sas


def search_max(
    n: int,
    target: int | None = None,
    *,
    max_letters: int = DEFAULT_MAX_LETTERS,
    checkpoint_dir: str | None = None,
    resume_from: str | None = None,
    threads: int = 1,
    prune: bool = True,
) -> SearchResult:
    """Search every suffix-free DFA shape on n states for transition
    semigroups of at least the target size.

    Levels of canonical semiautomata grow one letter at a time.  Each
    semiautomaton is judged under every (initial, empty) selection;
    surviving selections contribute their admissible additions as the
    next level.  The two known maximal families are confirmed from
    their generators and the search reports any semigroup at or above
    the target that is neither of them.  With prune=False the bound is
    ignored and the admissible space is walked in full, which is only
    tractable for n=4.

    A resumed run re-explores from the checkpointed level on; records
    from earlier levels are not replayed, which is harmless for the
    uniqueness question since confirmations are recomputed.
    """
    if not 4 <= n <= 6:
        raise ValueError(f"the exhaustive search supports 4 <= n <= 6, got {n}")
    if max_letters < 1:
        raise ValueError("max_letters must be positive")
    if threads < 1:
        raise ValueError("threads must be positive")
    ctx = _context(n)
    if target is None:
        target = max(len(ctx.vsf_elements), wsf_bound(n))
    started = time.perf_counter()
    if resume_from is not None:
        file_n, level_index, level = load_checkpoint(resume_from)
        if file_n != n:
            raise ValueError(f"checkpoint is for n={file_n}, search asked for n={n}")
        logger.info("resuming at level %d with %d semiautomata", level_index, len(level))
    else:
        level_index = 1
        level = initial_level(n)

    visited = 0
    pruned = 0
    selections = 0
    rejected = 0
    terminal = 0
    pruned_sel = 0
    extensions_total = 0
    level_sizes: list[int] = []
    others: dict[bytes, SemigroupRecord] = {}
    capped = False

    while level:
        if level_index > max_letters:
            capped = True
            logger.warning(
                "letter cap %d reached with %d semiautomata unexplored; "
                "the uniqueness conclusion is not established",
                max_letters,
                len(level),
            )
            break
        if checkpoint_dir is not None:
            os.makedirs(checkpoint_dir, exist_ok=True)
            save_checkpoint(
                os.path.join(checkpoint_dir, f"level_{level_index:02d}.txt"), level_index, n, level
            )
        level = tuple(sorted(level, key=lambda sa: sa.fingerprint))
        level_sizes.append(len(level))
        work = [(sa.fingerprint, n, target, prune) for sa in level]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(_expand_one, work, chunksize=max(1, len(work) // (threads * 4))))
        else:
            results = [_expand_one(item) for item in work]

        next_fps: dict[bytes, None] = {}
        for res in results:
            visited += 1
            c = res["counters"]
            selections += c["selections"]
            rejected += c["rejected"]
            terminal += c["terminal"]
            pruned_sel += c["pruned"]
            if res["dead"]:
                pruned += 1
            for fp in res["extensions"]:
                next_fps.setdefault(fp, None)
            for record in res["others"]:
                members = frozenset(record["members"])
                kind = _classify_other(members, ctx)
                if kind != "other":
                    continue  # the known families are confirmed separately
                key = _fingerprint(_canonical_letters(sorted(members), n), n)
                if key not in others:
                    letters = tuple(Transformation(tuple(t)) for t in record["letters"])
                    sg = closure(
                        list(letters)
                        + [Transformation(tuple(s)) for s in ctx.semiconstants]
                    )
                    if not verify_suffix_free_consistency(sg):
                        raise RuntimeError("search admitted an inconsistent semigroup")
                    others[key] = SemigroupRecord(
                        kind="other", size=record["size"], letters=letters, level=level_index
                    )
        logger.info(
            "level %d: %d semiautomata, %d extension candidates", level_index, len(level), len(next_fps)
        )
        next_level = []
        for fp in sorted(next_fps):
            _, letters = _decode_fp(fp)
            if _irreducible_raw(letters):
                next_level.append(
                    CanonicalSemiautomaton(
                        n=n,
                        letters=tuple(Transformation(tuple(t)) for t in letters),
                        fingerprint=fp,
                    )
                )
        extensions_total += len(next_level)
        level = tuple(next_level)
        level_index += 1

    confirmations = _confirmed_extremes(n, target)
    other_records = tuple(others[k] for k in sorted(others))
    sizes = [r.size for r in confirmations] + [r.size for r in other_records]
    return SearchResult(
        n=n,
        target=target,
        max_size_found=max(sizes, default=0),
        others=other_records,
        confirmations=confirmations,
        stats=SearchStats(
            visited=visited,
            pruned=pruned,
            selections=selections,
            rejected_selections=rejected,
            terminal_selections=terminal,
            pruned_selections=pruned_sel,
            extensions=extensions_total,
            level_sizes=tuple(level_sizes),
            capped=capped,
            wall_time_s=time.perf_counter() - started,
        ),
    )
