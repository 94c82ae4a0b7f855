"""Complete DFAs over named letters, with the decision procedures the
rest of the package leans on: minimization, suffix-freeness, empty
state location, and the structural zero-path report.

State 0 is the initial state by convention and, in the suffix-free
setting, the empty state sits at n-1 after renumber_initial_empty.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .semigroup import TransitionSemigroup, closure, witness_letters
from .transform import Transformation, format_transformation, zero_path


@dataclass(frozen=True)
class Dfa:
    """A complete DFA.  delta is letter-major: delta[i] is the full
    transformation of letter letters[i]."""

    n: int
    letters: tuple[str, ...]
    delta: tuple[Transformation, ...]
    initial: int
    finals: frozenset[int]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a DFA needs at least one state")
        if not self.letters:
            raise ValueError("a DFA needs at least one letter")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate letter names")
        if len(self.delta) != len(self.letters):
            raise ValueError("each letter needs exactly one transformation")
        for name, t in zip(self.letters, self.delta):
            if t.n != self.n:
                raise ValueError(f"letter {name!r} acts on {t.n} states, DFA has {self.n}")
        if not 0 <= self.initial < self.n:
            raise ValueError(f"initial state {self.initial} out of range")
        for f in self.finals:
            if not 0 <= f < self.n:
                raise ValueError(f"final state {f} out of range")

    def letter_index(self, name: str) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise ValueError(f"unknown letter {name!r}") from None

    def transformation(self, name: str) -> Transformation:
        return self.delta[self.letter_index(name)]

    def step(self, q: int, name: str) -> int:
        return self.transformation(name)[q]

    def run(self, word: Iterable[str], start: int | None = None) -> int:
        q = self.initial if start is None else start
        for name in word:
            q = self.step(q, name)
        return q

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) in self.finals


@dataclass(frozen=True)
class Semiautomaton:
    """A Dfa stripped of its initial and final designations: just the
    state count and the letter actions."""

    n: int
    letters: tuple[str, ...]
    delta: tuple[Transformation, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a semiautomaton needs at least one state")
        if not self.letters:
            raise ValueError("a semiautomaton needs at least one letter")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate letter names")
        if len(self.delta) != len(self.letters):
            raise ValueError("each letter needs exactly one transformation")
        for name, t in zip(self.letters, self.delta):
            if t.n != self.n:
                raise ValueError(f"letter {name!r} acts on {t.n} states, semiautomaton has {self.n}")

    @classmethod
    def from_dfa(cls, dfa: Dfa) -> "Semiautomaton":
        return cls(n=dfa.n, letters=dfa.letters, delta=dfa.delta)


def witness(n: int) -> Dfa:
    """The n-state witness DFA: initial 0, single final state 1, and
    the letter set from witness_letters.  Its transition semigroup is
    exactly w_sf(n), so its size meets (n-1)^(n-2) + n - 2."""
    names, letters = witness_letters(n)
    return Dfa(n=n, letters=names, delta=letters, initial=0, finals=frozenset({1}))


def transition_semigroup(dfa: Dfa) -> TransitionSemigroup:
    return closure(list(dfa.delta))


# ------------------------------------------------------------ reachability


def reachable_states(dfa: Dfa) -> tuple[int, ...]:
    """States reachable from the initial state, in breadth-first order
    with letters tried in alphabet order."""
    seen = {dfa.initial}
    order = [dfa.initial]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for t in dfa.delta:
            r = t[q]
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    return tuple(order)


def _renumber_by(dfa: Dfa, order: Sequence[int]) -> Dfa:
    # keep only the listed states, renamed to their position in order
    index = {q: i for i, q in enumerate(order)}
    delta = tuple(
        Transformation(tuple(index[t[q]] for q in order)) for t in dfa.delta
    )
    return Dfa(
        n=len(order),
        letters=dfa.letters,
        delta=delta,
        initial=index[dfa.initial],
        finals=frozenset(index[f] for f in dfa.finals if f in index),
    )


def trim(dfa: Dfa) -> Dfa:
    """Drop unreachable states, renumbering in breadth-first order."""
    return _renumber_by(dfa, reachable_states(dfa))


# ------------------------------------------------------------ minimization


def _moore_blocks(dfa: Dfa) -> list[int]:
    # block id per state; refine {F, Q-F} by transition signatures
    block = [1 if q in dfa.finals else 0 for q in range(dfa.n)]
    while True:
        sig = {}
        new = [0] * dfa.n
        for q in range(dfa.n):
            key = (block[q],) + tuple(block[t[q]] for t in dfa.delta)
            if key not in sig:
                sig[key] = len(sig)
            new[q] = sig[key]
        if new == block:
            return block
        block = new


def minimize(dfa: Dfa) -> Dfa:
    """The quotient of the reachable part, states renumbered by
    breadth-first order from the initial state (letter order breaks
    ties)."""
    d = trim(dfa)
    block = _moore_blocks(d)
    pos: dict[int, int] = {}
    reps: list[int] = []
    for q in range(d.n):
        if block[q] not in pos:
            pos[block[q]] = len(reps)
            reps.append(q)
    quotient = Dfa(
        n=len(reps),
        letters=d.letters,
        delta=tuple(
            Transformation(tuple(pos[block[t[r]]] for r in reps)) for t in d.delta
        ),
        initial=pos[block[d.initial]],
        finals=frozenset(pos[block[f]] for f in d.finals),
    )
    return trim(quotient)  # breadth-first renumbering


def is_minimal(dfa: Dfa) -> bool:
    if len(reachable_states(dfa)) != dfa.n:
        return False
    return len(set(_moore_blocks(dfa))) == dfa.n


# --------------------------------------------------------- suffix-freeness


def suffix_free_violation(dfa: Dfa) -> tuple[str, str] | None:
    """A pair (w, v) with w non-empty and both wv and v accepted, if one
    exists; None when the language is suffix-free.

    Runs the synchronized product of the DFA with itself: one track
    reads wv from the initial state, the other reads the suffix v.  The
    second track must start at the initial state, so the seed pairs are
    (r, initial) for every state r reachable by a non-empty word.
    Both searches are breadth-first, so the witness words are shortest.
    """
    d = trim(dfa)
    ini = d.initial
    # shortest non-empty word to each state
    word_to: dict[int, str] = {}
    frontier = deque()
    for name, t in zip(d.letters, d.delta):
        r = t[ini]
        if r not in word_to:
            word_to[r] = name
            frontier.append(r)
    while frontier:
        q = frontier.popleft()
        for name, t in zip(d.letters, d.delta):
            r = t[q]
            if r not in word_to:
                word_to[r] = word_to[q] + name
                frontier.append(r)
    # synchronized pair search
    parent: dict[tuple[int, int], tuple[tuple[int, int], str] | None] = {}
    pairs = deque()
    for r in word_to:
        pair = (r, ini)
        if pair not in parent:
            parent[pair] = None
            pairs.append(pair)
    while pairs:
        pair = pairs.popleft()
        p, q = pair
        if p in d.finals and q in d.finals:
            v = ""
            node: tuple[int, int] = pair
            while parent[node] is not None:
                node, name = parent[node]
                v = name + v
            return word_to[node[0]], v
        for name, t in zip(d.letters, d.delta):
            nxt = (t[p], t[q])
            if nxt not in parent:
                parent[nxt] = (pair, name)
                pairs.append(nxt)
    return None


def is_suffix_free(dfa: Dfa) -> bool:
    """True iff no accepted word is a proper suffix of another accepted
    word; equivalently the language L satisfies L with any non-empty
    prefix stripped never meets L."""
    return suffix_free_violation(dfa) is None


# ------------------------------------------------------------ empty state


def empty_state(dfa: Dfa) -> int | None:
    """The least non-final state that every letter maps to itself.  In
    a minimal DFA this sink is unique when it exists; rejecting is
    automatic since the sink is not final."""
    for q in range(dfa.n):
        if q in dfa.finals:
            continue
        if all(t[q] == q for t in dfa.delta):
            return q
    return None


# ------------------------------------------------- structural zero paths


@dataclass(frozen=True)
class ZeroPathReport:
    """Structural facts of a minimal suffix-free DFA: it has an empty
    state, and every transition-semigroup element walks the initial
    state down an aperiodic path that ends in the empty state."""

    applicable: bool
    minimized_input: bool
    suffix_free: bool
    empty_state: int | None
    all_paths_aperiodic: bool
    all_paths_end_at_empty: bool
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return (
            self.applicable
            and self.empty_state is not None
            and self.all_paths_aperiodic
            and self.all_paths_end_at_empty
        )


def check_zero_path_structure(dfa: Dfa) -> ZeroPathReport:
    """Verify the zero-path structure on the minimal quotient.

    Non-minimal input is minimized first and the report says so; a DFA
    that is not suffix-free makes the report inapplicable.
    """
    minimized_input = not is_minimal(dfa)
    d = minimize(dfa) if minimized_input else dfa
    if not is_suffix_free(d):
        return ZeroPathReport(
            applicable=False,
            minimized_input=minimized_input,
            suffix_free=False,
            empty_state=empty_state(d),
            all_paths_aperiodic=False,
            all_paths_end_at_empty=False,
            failures=("not suffix-free",),
        )
    sink = empty_state(d)
    failures = []
    aperiodic = True
    ends_at_sink = True
    if sink is None:
        failures.append("no empty state")
    else:
        for t in transition_semigroup(d).elements:
            zp = zero_path(t)
            if not zp.is_aperiodic:
                aperiodic = False
                failures.append(f"{format_transformation(t)}: zero path loops")
            elif zp.states[-1] != sink:
                ends_at_sink = False
                failures.append(
                    f"{format_transformation(t)}: zero path ends at {zp.states[-1]}"
                )
    return ZeroPathReport(
        applicable=True,
        minimized_input=minimized_input,
        suffix_free=True,
        empty_state=sink,
        all_paths_aperiodic=aperiodic,
        all_paths_end_at_empty=ends_at_sink and sink is not None,
        failures=tuple(failures),
    )


# -------------------------------------------------------------- relabeling


def relabel(dfa: Dfa, permutation: Sequence[int]) -> Dfa:
    """Conjugate every transition by a bijection on states."""
    perm = tuple(permutation)
    if sorted(perm) != list(range(dfa.n)):
        raise ValueError("relabeling needs a bijection on the states")
    delta = []
    for t in dfa.delta:
        imgs = [0] * dfa.n
        for q in range(dfa.n):
            imgs[perm[q]] = perm[t[q]]
        delta.append(Transformation(tuple(imgs)))
    return Dfa(
        n=dfa.n,
        letters=dfa.letters,
        delta=tuple(delta),
        initial=perm[dfa.initial],
        finals=frozenset(perm[f] for f in dfa.finals),
    )


def renumber_initial_empty(dfa: Dfa) -> Dfa:
    """Relabel so the initial state is 0 and the empty state is n-1,
    with the remaining states keeping their relative order."""
    sink = empty_state(dfa)
    if sink is None:
        raise ValueError("no empty state to renumber")
    if sink == dfa.initial:
        raise ValueError("initial state is the empty state")
    middle = [q for q in range(dfa.n) if q not in (dfa.initial, sink)]
    order = [dfa.initial] + middle + [sink]
    perm = [0] * dfa.n
    for i, q in enumerate(order):
        perm[q] = i
    return relabel(dfa, perm)


# -------------------------------------------------------------- text forms


def format_dfa(dfa: Dfa) -> str:
    finals = ",".join(str(f) for f in sorted(dfa.finals))
    head = f"n={dfa.n} letters={','.join(dfa.letters)} initial={dfa.initial} finals={finals}"
    rows = [
        f"{name}: {' '.join(str(i) for i in t.images)}"
        for name, t in zip(dfa.letters, dfa.delta)
    ]
    return "\n".join([head] + rows) + "\n"


def parse_dfa(text: str) -> Dfa:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty DFA text")
    head = lines[0].split()
    fields = {}
    for part in head:
        if "=" not in part:
            raise ValueError(f"bad header field {part!r}")
        key, _, value = part.partition("=")
        fields[key] = value
    for key in ("n", "letters", "initial", "finals"):
        if key not in fields:
            raise ValueError(f"header is missing {key}")
    try:
        n = int(fields["n"])
        initial = int(fields["initial"])
    except ValueError:
        raise ValueError("header counts must be integers") from None
    letters = tuple(fields["letters"].split(",")) if fields["letters"] else ()
    finals = (
        frozenset(int(f) for f in fields["finals"].split(","))
        if fields["finals"]
        else frozenset()
    )
    if len(lines) != 1 + len(letters):
        raise ValueError(
            f"expected {len(letters)} transition rows, found {len(lines) - 1}"
        )
    delta = []
    for name, line in zip(letters, lines[1:]):
        row_name, _, images = line.partition(":")
        if row_name.strip() != name:
            raise ValueError(
                f"transition rows must follow header order; expected {name!r}, "
                f"found {row_name.strip()!r}"
            )
        try:
            imgs = tuple(int(x) for x in images.split())
        except ValueError:
            raise ValueError(f"bad transition row for letter {name!r}") from None
        if len(imgs) != n:
            raise ValueError(
                f"letter {name!r} has {len(imgs)} images, expected {n}"
            )
        delta.append(Transformation(imgs))
    return Dfa(n=n, letters=letters, delta=tuple(delta), initial=initial, finals=finals)


def to_dot(dfa: Dfa) -> str:
    """Graphviz rendering; the empty state is drawn dashed, final
    states double-circled, and the initial state marked by an arrow
    from a phantom node."""
    sink = empty_state(dfa)
    out = ["digraph dfa {", "  rankdir=LR;", '  start [shape=none, label=""];']
    for q in range(dfa.n):
        attrs = ["shape=doublecircle" if q in dfa.finals else "shape=circle"]
        if q == sink:
            attrs.append("style=dashed")
        out.append(f"  {q} [{', '.join(attrs)}];")
    out.append(f"  start -> {dfa.initial};")
    edges: dict[tuple[int, int], list[str]] = {}
    for name, t in zip(dfa.letters, dfa.delta):
        for q in range(dfa.n):
            edges.setdefault((q, t[q]), []).append(name)
    for (q, r), names in sorted(edges.items()):
        out.append(f'  {q} -> {r} [label="{",".join(names)}"];')
    out.append("}")
    return "\n".join(out) + "\n"
