"""An injective embedding of the transition semigroup of a minimal
suffix-free DFA into the collapsing family w_sf(n), for n >= 7.

Every transformation t falls into exactly one of twelve structural
cases, tried in order; each case rewires a handful of states around
the walk of 0 (always sending 0 to n-1) and keeps every other image,
so the result lands in w_sf(n) and remembers enough structure to be
inverted.  The inverse reads the focused colliding pairs of the image
against the collision data of the whole semigroup and undoes the
rewiring case by case.

The embedding is what bounds the semigroup size by
(n-1)^(n-2) + n - 2; a strict-inequality witness exists whenever the
semigroup has a colliding pair at all.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .collisions import colliding_pairs_of, focused_pairs_of, pair_statuses
from .semigroup import TransitionSemigroup, in_bsf, in_wsf, wsf_bound
from .transform import (
    Transformation,
    cycles,
    format_transformation,
    in_degree,
    zero_path,
)


class PreconditionError(ValueError):
    """The transformation cannot belong to the transition semigroup of
    a minimal suffix-free DFA."""


class NotInImageError(ValueError):
    """The transformation matches no case's image signature."""


class CaseExhaustionError(RuntimeError):
    """A structural situation the case analysis claims impossible."""


@dataclass(frozen=True)
class PhiContext:
    """Collision data of the ambient semigroup: the embedding of an
    element depends on which interior pairs collide somewhere in T."""

    n: int
    colliding: frozenset[tuple[int, int]]

    @classmethod
    def from_semigroup(cls, sg: TransitionSemigroup) -> "PhiContext":
        pairs: set[tuple[int, int]] = set()
        for t in sg.elements:
            pairs |= colliding_pairs_of(t)
        return cls(n=sg.n, colliding=frozenset(pairs))


@dataclass(frozen=True)
class PhiCase:
    case_number: int
    sub_case: str | None = None

    @property
    def label(self) -> str:
        if self.sub_case is None:
            return str(self.case_number)
        return f"{self.case_number}({self.sub_case})"


@dataclass(frozen=True)
class PhiOutcome:
    t: Transformation
    case: PhiCase
    image: Transformation
    reconstruction: Transformation


# ---------------------------------------------------------------- helpers


def _interior(n: int) -> range:
    return range(1, n - 1)


def _guard(t: Transformation, ctx: PhiContext) -> None:
    if ctx.n < 7:
        raise ValueError("the embedding needs n >= 7")
    if t.n != ctx.n:
        raise ValueError(f"transformation on {t.n} states, context has {ctx.n}")
    if not in_bsf(t):
        n = t.n
        zp = zero_path(t)
        if not zp.is_aperiodic:
            detail = "the walk of 0 enters a cycle"
        elif zp.states[-1] != n - 1:
            detail = f"the walk of 0 ends at {zp.states[-1]}, not at {n - 1}"
        elif t[n - 1] != n - 1:
            detail = f"state {n - 1} is not fixed"
        elif 0 in t.images:
            detail = "some state maps to 0"
        else:
            detail = "the walk of 0 merges with the walk of an interior state"
        raise PreconditionError(
            f"{format_transformation(t)} cannot occur in a suffix-free "
            f"transition semigroup: {detail}"
        )


def _eligible_movers(t: Transformation) -> list[int]:
    # interior states that are not fixed and whose image is not n-1
    n = t.n
    return [q for q in _interior(n) if t[q] != q and t[q] != n - 1]


def _interior_fixed(t: Transformation) -> list[int]:
    return [q for q in _interior(t.n) if t[q] == q]


def classify(t: Transformation, ctx: PhiContext) -> PhiCase:
    """First matching case in order; the final case is the fall-through
    and anything outside it is a hard structural error."""
    _guard(t, ctx)
    n = t.n
    if in_wsf(t):
        return PhiCase(1)
    p = t[0]
    if cycles(t):
        return PhiCase(2)
    if t[p] != n - 1:
        return PhiCase(3)
    if any(in_degree(t, r) >= 2 for r in _interior_fixed(t)):
        return PhiCase(4)
    if any(
        in_degree(t, r) >= 1 and t[r] != r and t[r] != n - 1
        for r in _interior(n)
    ):
        return PhiCase(5)
    heavy = [r for r in _interior(n) if in_degree(t, r) >= 2]
    if heavy:
        r = heavy[0]
        if r == p:
            raise CaseExhaustionError(
                f"{format_transformation(t)}: state {p} reached from 0 has "
                "in-degree >= 2, impossible under suffix-freeness"
            )
        return PhiCase(6, "p<r" if p < r else "p>r")
    movers = _eligible_movers(t)
    if len(movers) >= 2:
        r1 = t[movers[0]]
        return PhiCase(7, "i" if p < r1 else "ii")
    isolated = [r for r in _interior_fixed(t) if in_degree(t, r) == 1]
    if len(isolated) >= 2:
        return PhiCase(8)
    if len(movers) == 1:
        q = movers[0]
        r = t[q]
        if r == p:
            raise CaseExhaustionError(
                f"{format_transformation(t)}: the moving state {q} maps to "
                f"{p}, which only 0 may reach under suffix-freeness"
            )
        if _interior_fixed(t):
            return PhiCase(9) if p < r else PhiCase(10)
        return PhiCase(11, "i" if p < r else "ii")
    # fall-through: exactly one isolated fixed point, all else collapsed
    fixed = _interior_fixed(t)
    collapsed = all(
        t[q] == n - 1 for q in _interior(n) if q not in fixed and q != p
    )
    if len(fixed) != 1 or not collapsed or t[p] != n - 1:
        raise CaseExhaustionError(
            f"{format_transformation(t)} matches no structural case; "
            f"fixed interior states {fixed}, walk target {t[p]}"
        )
    return PhiCase(12)


# ----------------------------------------------------------- the forward map


def _zero_chain(t: Transformation) -> list[int]:
    # p, pt, ..., pt^k: the interior stretch of the walk of 0
    return list(zero_path(t).states[1:-1])


def _build(t: Transformation, case: PhiCase) -> Transformation:
    n = t.n
    p = t[0]
    imgs = list(t.images)
    num = case.case_number
    if num == 1:
        return t
    imgs[0] = n - 1
    if num == 2:
        chain = _zero_chain(t)
        r = min(q for c in cycles(t) for q in c)
        imgs[p] = r
        for i in range(1, len(chain)):
            imgs[chain[i]] = chain[i - 1]
    elif num == 3:
        chain = _zero_chain(t)
        imgs[p] = p
        for i in range(1, len(chain)):
            imgs[chain[i]] = chain[i - 1]
    elif num == 4:
        r = min(q for q in _interior_fixed(t) if in_degree(t, q) >= 2)
        imgs[p] = r
    elif num == 5:
        r = min(
            q
            for q in _interior(n)
            if in_degree(t, q) >= 1
            and t[q] != q
            and t[q] != n - 1
            and t[t[q]] == n - 1
        )
        imgs[p] = t[r]
    elif num == 6:
        r = min(q for q in _interior(n) if in_degree(t, q) >= 2)
        pre = sorted(q for q in range(n) if t[q] == r)
        if case.sub_case == "p<r":
            q1, q2 = pre[0], pre[1]
        else:
            q1, q2 = pre[1], pre[0]
        imgs[p] = q1
        imgs[r] = q1
        imgs[q1] = q2
        imgs[q2] = n - 1
    elif num == 7:
        q1, q2 = _eligible_movers(t)[:2]
        r1 = t[q1]
        imgs[p] = q1
        imgs[r1] = q1
        imgs[q1] = n - 1 if case.sub_case == "i" else q2
    elif num == 8:
        isolated = [r for r in _interior_fixed(t) if in_degree(t, r) == 1]
        r1, r2 = isolated[0], isolated[1]
        imgs[p] = r2
        imgs[r1] = r2
        imgs[r2] = r1
    elif num == 9:
        q = _eligible_movers(t)[0]
        r = t[q]
        f = _interior_fixed(t)[0]
        imgs[p] = r
        imgs[r] = q
        imgs[q] = p
        imgs[f] = r
    elif num == 10:
        q = _eligible_movers(t)[0]
        r = t[q]
        imgs[p] = q
        imgs[r] = q
        imgs[q] = n - 1
    elif num == 11:
        q = _eligible_movers(t)[0]
        r = t[q]
        imgs[p] = q
        imgs[r] = q
        imgs[q] = n - 1
        if case.sub_case == "ii":
            r1, r2 = sorted(set(_interior(n)) - {p, q, r})[:2]
            imgs[r1] = r2
            imgs[r2] = r1
    else:  # case 12
        f = _interior_fixed(t)[0]
        imgs[p] = f
        r1, r2 = sorted(set(_interior(n)) - {p, f})[:2]
        imgs[r1] = r2
        imgs[r2] = r1
    return Transformation(tuple(imgs))


def phi(t: Transformation, ctx: PhiContext) -> PhiOutcome:
    """Embed t and immediately undo the embedding as a self-check."""
    case = classify(t, ctx)
    image = _build(t, case)
    back = phi_inverse(image, ctx)
    if back != t:
        raise CaseExhaustionError(
            f"round trip failed for {format_transformation(t)} "
            f"(case {case.label}): reconstructed {format_transformation(back)}"
        )
    return PhiOutcome(t=t, case=case, image=image, reconstruction=back)


# ----------------------------------------------------------- the inverse map


def _focused_colliding(s: Transformation, ctx: PhiContext) -> list[tuple[tuple[int, int], int]]:
    out = [
        ((x, y), z)
        for x, y, z in sorted(focused_pairs_of(s))
        if (x, y) in ctx.colliding
    ]
    return out


def _rebuild_chain(s: Transformation, p: int, ctx: PhiContext) -> Transformation:
    """Shared reconstruction of the walk of 0 for the two chain cases.

    The first chain state is the unique other preimage of p; each next
    one is the unique preimage of the current state that collides with
    the state two steps back.
    """
    n = s.n
    chain = [p]
    pre = [w for w in range(n) if w != p and s[w] == p]
    if len(pre) > 1:
        raise NotInImageError("several states walk into the start of the chain")
    if pre:
        chain.append(pre[0])
        while len(chain) <= n:
            cur, back = chain[-1], chain[-2]
            cands = [
                w
                for w in range(n)
                if s[w] == cur
                and w != cur
                and (min(w, back), max(w, back)) in ctx.colliding
            ]
            if len(cands) > 1:
                raise NotInImageError("chain step is not unique")
            if not cands:
                break
            chain.append(cands[0])
        else:
            raise NotInImageError("chain does not terminate")
    imgs = list(s.images)
    imgs[0] = p
    for i in range(len(chain) - 1):
        imgs[chain[i]] = chain[i + 1]
    imgs[chain[-1]] = n - 1
    return Transformation(tuple(imgs))


def phi_inverse(s: Transformation, ctx: PhiContext) -> Transformation:
    """The unique t with phi(t) = s, recovered from the image signature.

    Raises NotInImageError when s cannot be the image of any t, which
    is exactly what proves the bound strict for colliding semigroups.
    """
    if ctx.n < 7:
        raise ValueError("the embedding needs n >= 7")
    n = s.n
    if n != ctx.n:
        raise ValueError(f"transformation on {n} states, context has {ctx.n}")
    fc = _focused_colliding(s, ctx)
    if not fc:
        return s  # case 1
    cycs = cycles(s)
    if cycs:
        return _invert_with_cycles(s, ctx, fc, cycs)
    return _invert_acyclic(s, ctx, fc)


def _invert_with_cycles(s, ctx, fc, cycs) -> Transformation:
    # the reversed walk of 0 may focus extra colliding pairs, because
    # its attachment state can take ordinary traffic too; the reliable
    # marker is the pair split by a cycle, one member on it and one
    # off.  Pairs the preimage already focused are never colliding, so
    # a consistent semigroup keeps that marker unique.
    n = s.n
    cyc_states = {q for c in cycs for q in c}
    split = [
        ((x, y), z)
        for (x, y), z in fc
        if z in cyc_states and (x in cyc_states) != (y in cyc_states)
    ]
    if split:
        if len(split) != 1:
            raise NotInImageError("several focused colliding pairs split cycles")
        (x, y), z = split[0]
        on = x if x in cyc_states else y
        if z == min(cyc_states):
            # case 2: the pair joins the chain start to the cycle
            return _rebuild_chain(s, x + y - on, ctx)
        if len(cycs) == 1 and len(cycs[0]) == 2:
            # case 8: two former fixed points swapped
            r1, r2 = cycs[0]
            if z != r2 or r1 != on:
                raise NotInImageError("2-cycle pair does not fit the swap shape")
            p = x + y - r1
            imgs = list(s.images)
            imgs[0], imgs[p] = p, n - 1
            imgs[r1], imgs[r2] = r1, r2
            return Transformation(tuple(imgs))
        if len(cycs) == 1 and len(cycs[0]) == 3:
            # case 9: 3-cycle through the walk start
            p = on
            f = x + y - p
            r = z
            q = s[r]
            if s[p] != r or s[q] != p:
                raise NotInImageError("3-cycle does not run start-target-carrier")
            imgs = list(s.images)
            imgs[0], imgs[p] = p, n - 1
            imgs[q], imgs[r] = r, n - 1
            imgs[f] = f
            return Transformation(tuple(imgs))
        raise NotInImageError("focused pair targets an unexpected cycle")
    if any(z in cyc_states for _, z in fc):
        raise NotInImageError("cycle focus without a split pair")
    # cycles exist but no focus lands on them: cases 11(ii) and 12
    if len(fc) != 1 or len(cycs) != 1 or len(cycs[0]) != 2:
        raise NotInImageError("cycle shape fits no case")
    (x, y), z = fc[0]
    r1, r2 = cycs[0]
    imgs = list(s.images)
    if z in (x, y) and s[z] == z:
        # case 12: target is the surviving fixed point
        p = x + y - z
        imgs[0], imgs[p] = p, n - 1
        imgs[r1], imgs[r2] = n - 1, n - 1
        return Transformation(tuple(imgs))
    if s[z] == n - 1:
        # case 11(ii): the swap marks the larger walk start
        p, r = max(x, y), min(x, y)
        imgs[0], imgs[p] = p, n - 1
        imgs[r], imgs[z] = n - 1, r
        imgs[r1], imgs[r2] = n - 1, n - 1
        return Transformation(tuple(imgs))
    raise NotInImageError("focused pair beside a cycle fits no case")


def _invert_acyclic(s, ctx, fc) -> Transformation:
    n = s.n
    on_fixed = [(pair, z) for pair, z in fc if z in pair and s[z] == z]
    if on_fixed:
        # fixed target inside the pair: cases 3 and 4
        if len(on_fixed) != 1:
            raise NotInImageError("several focused colliding pairs hit fixed points")
        (x, y), z = on_fixed[0]
        deg = in_degree(s, z)
        if deg == 2:
            return _rebuild_chain(s, z, ctx)  # case 3
        if deg >= 3:
            p = x + y - z  # case 4
            imgs = list(s.images)
            imgs[0], imgs[p] = p, n - 1
            return Transformation(tuple(imgs))
        raise NotInImageError("fixed focus target with in-degree 1")
    if len(fc) > 1:
        # case 5 with several pairs: the walk start is their intersection
        common = set(fc[0][0])
        for pair, _ in fc[1:]:
            common &= set(pair)
        if len(common) != 1:
            raise NotInImageError("focused pairs share no single state")
        p = common.pop()
        imgs = list(s.images)
        imgs[0], imgs[p] = p, n - 1
        return Transformation(tuple(imgs))
    # a single focused pair whose target is not a fixed point of the pair
    (x, y), z = fc[0]
    hops, w = 0, z
    while w != n - 1 and hops <= n:
        w = s[w]
        hops += 1
    if hops == 2:
        # case 6: two-step descent through the former shared preimages
        q1, q2 = z, s[z]
        p, r = (min(x, y), max(x, y)) if q1 < q2 else (max(x, y), min(x, y))
        imgs = list(s.images)
        imgs[0], imgs[p] = p, n - 1
        imgs[q1], imgs[q2] = r, r
        imgs[r] = n - 1
        return Transformation(tuple(imgs))
    if hops == 3:
        # case 7(ii)
        p, r1 = max(x, y), min(x, y)
        imgs = list(s.images)
        imgs[0], imgs[p] = p, n - 1
        imgs[r1], imgs[z] = n - 1, r1
        return Transformation(tuple(imgs))
    if hops != 1:
        raise NotInImageError("focus target walks too far")
    dx, dy = in_degree(s, x), in_degree(s, y)
    if (dx == 0) != (dy == 0):
        # case 5 with one pair: the walk start took no traffic
        p = x if dx == 0 else y
        imgs = list(s.images)
        imgs[0], imgs[p] = p, n - 1
        return Transformation(tuple(imgs))
    if dx != 0:
        raise NotInImageError("both pair states receive traffic")
    movers = [
        w for w in _interior(n) if w not in (x, y) and s[w] != w and s[w] != n - 1
    ]
    imgs = list(s.images)
    if movers:
        # case 7(i)
        p, r1 = min(x, y), max(x, y)
        imgs[0], imgs[p] = p, n - 1
        imgs[r1], imgs[z] = n - 1, r1
        return Transformation(tuple(imgs))
    if _interior_fixed(s):
        # case 10
        p, r = max(x, y), min(x, y)
    else:
        # case 11(i)
        p, r = min(x, y), max(x, y)
    imgs[0], imgs[p] = p, n - 1
    imgs[r], imgs[z] = n - 1, r
    return Transformation(tuple(imgs))


# ------------------------------------------------------------- verification


@dataclass(frozen=True)
class InjectivityReport:
    n: int
    size: int
    bound: int
    case_counts: dict[str, int]
    all_images_collapsing: bool
    images_distinct: bool
    round_trips: bool
    within_bound: bool
    counterexample: str | None

    @property
    def passed(self) -> bool:
        return (
            self.all_images_collapsing
            and self.images_distinct
            and self.round_trips
            and self.within_bound
            and self.counterexample is None
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "bound": self.bound,
            "case_counts": dict(sorted(self.case_counts.items())),
            "all_images_collapsing": self.all_images_collapsing,
            "images_distinct": self.images_distinct,
            "round_trips": self.round_trips,
            "within_bound": self.within_bound,
            "counterexample": self.counterexample,
            "passed": self.passed,
        }


def verify_injective(sg: TransitionSemigroup) -> InjectivityReport:
    """Run the embedding over a whole semigroup and check all of its
    promises: images collapse, no duplicates, round-trips, size bound."""
    ctx = PhiContext.from_semigroup(sg)
    counts: dict[str, int] = {}
    images: list[Transformation] = []
    all_wsf = True
    round_trips = True
    counterexample = None
    for t in sg.elements:
        try:
            outcome = phi(t, ctx)
        except (PreconditionError, CaseExhaustionError, NotInImageError) as e:
            counterexample = f"{format_transformation(t)}: {e}"
            round_trips = False
            break
        counts[outcome.case.label] = counts.get(outcome.case.label, 0) + 1
        images.append(outcome.image)
        if not in_wsf(outcome.image):
            all_wsf = False
            counterexample = (
                f"{format_transformation(t)} maps to "
                f"{format_transformation(outcome.image)}, which does not collapse"
            )
    distinct = len(set(images)) == len(images)
    if not distinct and counterexample is None:
        seen: dict[Transformation, Transformation] = {}
        for t, img in zip(sg.elements, images):
            if img in seen:
                counterexample = (
                    f"{format_transformation(seen[img])} and "
                    f"{format_transformation(t)} share the image "
                    f"{format_transformation(img)}"
                )
                break
            seen[img] = t
    return InjectivityReport(
        n=sg.n,
        size=sg.size,
        bound=wsf_bound(sg.n),
        case_counts=counts,
        all_images_collapsing=all_wsf,
        images_distinct=distinct,
        round_trips=round_trips,
        within_bound=sg.size <= wsf_bound(sg.n),
        counterexample=counterexample,
    )


def strict_bound_witness(sg: TransitionSemigroup) -> Transformation | None:
    """A transformation in w_sf(n) that no element embeds to, built on
    the first colliding pair: the pair is focused onto its larger state
    and three spare states form a 3-cycle, a shape no case produces.
    Returns None when the semigroup has no colliding pair."""
    if sg.n < 7:
        raise ValueError("the strict-bound witness needs n >= 7")
    n = sg.n
    for status in pair_statuses(sg):
        if status.colliding:
            p, r = status.pair
            spares = sorted(set(_interior(n)) - {p, r})[:3]
            imgs = [n - 1] * n
            imgs[p] = r
            imgs[r] = r
            r1, r2, r3 = spares
            imgs[r1], imgs[r2], imgs[r3] = r2, r3, r1
            s = Transformation(tuple(imgs))
            assert in_wsf(s)
            return s
    return None
