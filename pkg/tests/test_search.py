"""Canonical semiautomata, the conflict machinery, and the maximality search."""
import itertools
import json
import os

import pytest
from hypothesis import given, settings, strategies as st

from sfsyn.transform import Transformation
from sfsyn.semigroup import (
    closure,
    enumerate_bsf,
    enumerate_wsf,
    in_bsf,
    is_irreducibly_generated,
    semiconstant_family,
    vsf_generators,
    wsf_bound,
)
from sfsyn.collisions import (
    colliding_pairs_of,
    focused_pairs_of,
    verify_suffix_free_consistency,
)
from sfsyn.dfa import Semiautomaton, witness
from sfsyn.search import (
    CanonicalSemiautomaton,
    ConflictGraph,
    _canonical_letters,
    _context,
    _fingerprint,
    allowed_additions,
    build_conflict_graph,
    canonicalize,
    conflict,
    extend,
    greedy_matching,
    initial_level,
    load_checkpoint,
    parse_fingerprint,
    prune_bound,
    save_checkpoint,
    search_max,
)


def conjugated(t: Transformation, perm) -> Transformation:
    out = [0] * t.n
    for q in range(t.n):
        out[perm[q]] = perm[t.images[q]]
    return Transformation(out)


maps4 = st.builds(Transformation, st.tuples(*[st.integers(0, 3)] * 4))


# --------------------------------------------------------- canonical form


def test_canonicalize_idempotent():
    sa = canonicalize([Transformation((1, 3, 3, 3)), Transformation((3, 1, 2, 3))])
    again = canonicalize(sa.letters)
    assert again == sa
    assert again.fingerprint == sa.fingerprint


def test_canonicalize_accepts_semiautomaton():
    letters = tuple(witness(5).delta)
    plain = canonicalize(letters)
    wrapped = canonicalize(Semiautomaton(5, ("a", "b", "c", "d", "e"), letters))
    assert wrapped == plain


def test_canonical_letters_are_sorted():
    sa = canonicalize([Transformation((3, 1, 2, 3)), Transformation((1, 3, 3, 3))])
    images = [t.images for t in sa.letters]
    assert images == sorted(images)


@settings(deadline=None, max_examples=60)
@given(
    letters=st.lists(maps4, min_size=1, max_size=3),
    perm=st.permutations(range(4)),
)
def test_canonicalize_invariant_under_relabeling(letters, perm):
    direct = canonicalize(letters)
    relabeled = canonicalize([conjugated(t, perm) for t in reversed(letters)])
    assert relabeled.fingerprint == direct.fingerprint


def test_single_letter_classes_on_three_states():
    # all 27 maps on three states fall into 7 classes
    fps = {
        canonicalize([Transformation((a, b, c))]).fingerprint
        for a in range(3)
        for b in range(3)
        for c in range(3)
    }
    assert len(fps) == 7


def test_canonicalize_rejects_empty_and_mixed():
    with pytest.raises(ValueError):
        canonicalize([])
    with pytest.raises(ValueError):
        canonicalize([Transformation((1, 3, 3, 3)), Transformation((1, 4, 4, 4, 4))])


def test_fingerprint_roundtrip():
    sa = canonicalize(witness(5).delta)
    back = parse_fingerprint(sa.fingerprint)
    assert back == sa


def test_parse_fingerprint_rejects_bad_bytes():
    with pytest.raises(ValueError):
        parse_fingerprint(b"\x05")
    with pytest.raises(ValueError):
        parse_fingerprint(bytes([4, 2, 1, 3, 3, 3]))  # body shorter than 2 letters
    with pytest.raises(ValueError):
        parse_fingerprint(bytes([4, 1, 1, 3, 9, 3]))  # state out of range
    sa = canonicalize([Transformation((1, 3, 3, 3)), Transformation((3, 1, 2, 3))])
    a, b = sa.letters
    swapped = bytes([4, 2]) + bytes(b.images) + bytes(a.images)
    with pytest.raises(ValueError):
        parse_fingerprint(swapped)  # letters out of order: not canonical


# --------------------------------------------------------------- conflict


def test_conflict_requires_matching_state_counts():
    with pytest.raises(ValueError):
        conflict(Transformation((1, 3, 3, 3)), Transformation((1, 4, 4, 4, 4)))


def test_conflict_is_symmetric():
    t = Transformation((1, 2, 5, 5, 5, 5))
    u = Transformation((5, 2, 2, 5, 5, 5))
    assert conflict(t, u)
    assert conflict(u, t)


def test_sink_letter_fixing_interior_conflicts_nothing():
    # 0 to the sink, identity elsewhere: collides and focuses no pair
    benign = Transformation((4, 1, 2, 3, 4))
    assert not conflict(benign, benign)


def test_letter_focusing_every_pair_conflicts_even_with_itself():
    # every interior state to 1: all three pairs focused at once
    allfoc = Transformation((4, 1, 1, 1, 4))
    assert conflict(allfoc, allfoc)


def test_witness_letters_do_not_conflict():
    d = witness(5)
    assert not conflict(d.delta[0], d.delta[1])


# --------------------------------------------------- graph and matching


def edge_test_from(pairs):
    keyed = {frozenset(p) for p in pairs}
    return lambda t, u: frozenset((t.images, u.images)) in keyed


def tiny(*imgs):
    return Transformation(imgs)


def test_build_conflict_graph_orders_and_dedupes_vertices():
    a, b = tiny(0, 0), tiny(1, 1)
    g = build_conflict_graph([b, a, b], test=lambda t, u: False)
    assert g.vertices == (a, b)
    assert g.edges == frozenset()


def test_greedy_matching_sizes():
    a, b, c, d = tiny(0, 0), tiny(0, 1), tiny(1, 0), tiny(1, 1)
    none = build_conflict_graph([a, b, c, d], test=lambda t, u: False)
    assert greedy_matching(none) == 0
    one = build_conflict_graph([a, b], test=edge_test_from([(a.images, b.images)]))
    assert greedy_matching(one) == 1
    path = build_conflict_graph(
        [a, b, c], test=edge_test_from([(a.images, b.images), (b.images, c.images)])
    )
    assert greedy_matching(path) == 1
    triangle = build_conflict_graph(
        [a, b, c],
        test=edge_test_from(
            [(a.images, b.images), (b.images, c.images), (a.images, c.images)]
        ),
    )
    assert greedy_matching(triangle) == 1
    disjoint = build_conflict_graph(
        [a, b, c, d], test=edge_test_from([(a.images, b.images), (c.images, d.images)])
    )
    assert greedy_matching(disjoint) == 2


def test_prune_bound_values_and_guards():
    x = list(range(10))
    assert prune_bound(x, [], 0) == 10
    assert prune_bound(x, list(range(6)), 2) == 14
    with pytest.raises(ValueError):
        prune_bound(x, [], -1)
    with pytest.raises(ValueError):
        prune_bound(x, [1, 2, 3], 2)  # a 2-matching needs 4 vertices


# ------------------------------------------------------ allowed additions


def test_both_known_families_are_saturated():
    assert allowed_additions(closure(list(vsf_generators(4)))) == frozenset()
    assert allowed_additions(enumerate_wsf(4)) == frozenset()
    assert allowed_additions(closure(list(vsf_generators(5)))) == frozenset()


def test_small_semigroup_leaves_plenty_of_room():
    sg = closure([Transformation((1, 4, 4, 4, 4))])
    assert sg.size == 2
    additions = allowed_additions(sg)
    assert len(additions) == 92
    assert all(in_bsf(t) for t in additions)


def oracle_additions(sg):
    # brute force: keep t when the grown closure stays in the admissible
    # family, stays consistent, and pins down neither extreme
    n = sg.n
    every = {
        (p, q) for p in range(1, n - 1) for q in range(p + 1, n - 1)
    }
    out = set()
    for t in enumerate_bsf(n):
        if t in sg:
            continue
        grown = closure(list(sg.generators) + [t])
        if not all(in_bsf(e) for e in grown.elements):
            continue
        if not verify_suffix_free_consistency(grown):
            continue
        colliding, focused = set(), set()
        for e in grown.elements:
            colliding |= colliding_pairs_of(e)
            focused |= {(p, q) for p, q, _ in focused_pairs_of(e)}
        if colliding == every or focused == every:
            continue
        out.add(t)
    return frozenset(out)


def test_allowed_additions_against_brute_force():
    for gens in ([(1, 2, 3, 3)], [(2, 1, 3, 3)], [(1, 3, 2, 3), (3, 1, 2, 3)]):
        sg = closure([Transformation(g) for g in gens])
        assert allowed_additions(sg) == oracle_additions(sg)


# ------------------------------------------------------- level operations


def test_initial_level_counts():
    assert len(initial_level(4)) == 5
    assert len(initial_level(5)) == 17


def test_initial_level_covers_exactly_the_pool_classes():
    # every non-semiconstant admissible letter canonicalizes into the
    # level, and each level entry is hit by at least one of them
    semi = set(semiconstant_family(4))
    pool = [t for t in enumerate_bsf(4) if t not in semi]
    level_fps = {sa.fingerprint for sa in initial_level(4)}
    pool_fps = {canonicalize([t]).fingerprint for t in pool}
    assert pool_fps == level_fps


def test_extend_grows_canonically_and_irreducibly():
    level2 = extend(initial_level(4))
    assert len(level2) == 29
    fps = [sa.fingerprint for sa in level2]
    assert fps == sorted(fps)
    for sa in level2:
        assert len(sa.letters) == 2
        assert parse_fingerprint(sa.fingerprint) == sa
        assert is_irreducibly_generated(sa.letters)


# ------------------------------------------------------------ the search


def test_search_rejects_out_of_range_sizes():
    with pytest.raises(ValueError):
        search_max(3)
    with pytest.raises(ValueError):
        search_max(7)


def test_search_four_state_maximum_is_the_injective_family():
    r = search_max(4)
    assert r.target == 13
    assert r.max_size_found == 13
    assert r.others == ()
    assert r.uniqueness_confirmed
    assert r.stats.level_sizes == (5,)
    assert r.stats.visited == 5
    kinds = {c.kind: c.size for c in r.confirmations}
    assert kinds == {"vsf": 13}
    (rec,) = r.maximal_semigroups
    assert closure(list(rec.letters)).size == 13


def test_search_four_state_unpruned_agrees():
    pruned = search_max(4)
    full = search_max(4, prune=False)
    assert full.max_size_found == pruned.max_size_found == 13
    assert full.others == pruned.others == ()
    # the family-containment rule, not the counting bound, closes every
    # branch here: with pruning off nothing is cut by the bound yet the
    # tree still ends at the first level
    assert full.stats.level_sizes == (5,)
    assert full.stats.pruned_selections == 0
    assert full.stats.terminal_selections == 6
    assert full.uniqueness_confirmed


def test_search_five_state_maximum_is_the_injective_family():
    r = search_max(5)
    assert r.target == 73
    assert r.max_size_found == 73
    assert r.others == ()
    assert r.uniqueness_confirmed
    assert r.stats.level_sizes == (17,)
    kinds = {c.kind: c.size for c in r.confirmations}
    assert kinds == {"vsf": 73}


def test_search_result_json_shape():
    r = search_max(4)
    doc = r.to_json(include_timing=False)
    text = json.dumps(doc)  # must be serializable as-is
    assert "wall_time" not in text
    assert doc["n"] == 4
    assert doc["target"] == 13
    assert doc["uniqueness_confirmed"] is True
    timed = r.to_json()
    assert "wall_time_s" in json.dumps(timed)


def test_search_threads_match_single_thread():
    solo = search_max(5, threads=1).to_json(include_timing=False)
    duo = search_max(5, threads=2).to_json(include_timing=False)
    assert solo == duo


def test_letter_cap_disables_the_uniqueness_claim():
    # a target below both family sizes keeps every branch open, so the
    # cap actually bites after the first level
    r = search_max(4, target=3, prune=False, max_letters=1)
    assert r.stats.capped
    assert r.stats.visited == 5
    assert not r.uniqueness_confirmed
    # the known families are still confirmed directly
    assert r.max_size_found == 13
    with pytest.raises(ValueError):
        search_max(4, max_letters=0)


def test_checkpoint_roundtrip(tmp_path):
    level = initial_level(4)
    path = os.path.join(tmp_path, "level_03.txt")
    save_checkpoint(path, 3, 4, level)
    n, idx, sas = load_checkpoint(path)
    assert (n, idx) == (4, 3)
    assert tuple(sorted(sas, key=lambda s: s.fingerprint)) == tuple(
        sorted(level, key=lambda s: s.fingerprint)
    )


def test_checkpoint_rejects_foreign_files(tmp_path):
    path = os.path.join(tmp_path, "stray.txt")
    with open(path, "w") as fh:
        fh.write("not a checkpoint\n")
    with pytest.raises(ValueError):
        load_checkpoint(path)


def test_search_writes_and_resumes_checkpoints(tmp_path):
    fresh = search_max(5, checkpoint_dir=str(tmp_path))
    written = sorted(os.listdir(tmp_path))
    assert written == ["level_01.txt"]
    resumed = search_max(5, resume_from=os.path.join(tmp_path, "level_01.txt"))
    assert resumed.to_json(include_timing=False) == fresh.to_json(include_timing=False)


def test_search_six_state_maximum_is_the_collapsing_family():
    r = search_max(6)
    assert r.target == wsf_bound(6) == 629
    assert r.max_size_found == 629
    assert r.others == ()
    assert r.uniqueness_confirmed
    # every branch closes on the first level: the case analysis either
    # confines it to a confirmed family or counts it out
    assert r.stats.level_sizes == (53,)
    assert r.stats.visited == 53
    kinds = {c.kind: c.size for c in r.confirmations}
    assert kinds == {"wsf": 629}


def test_search_enumeration_matches_brute_force():
    # independent oracle for the whole pipeline: close every subset of
    # the four-state pool directly and compare, up to relabeling, with
    # what a low-target unpruned search reports
    n = 4
    ctx = _context(n)
    pool = [Transformation(tuple(t)) for t in ctx.pool]
    semis = [Transformation(tuple(t)) for t in ctx.semiconstants]
    admissible = {Transformation(tuple(t)) for t in ctx.bsf_set}

    def canon_key(sg):
        members = sorted(bytes(e.images) for e in sg.elements)
        return _fingerprint(_canonical_letters(members, n), n)

    expected = {}
    for k in range(1, len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            sg = closure(list(combo) + semis)
            if not set(sg.elements) <= admissible:
                continue
            if not verify_suffix_free_consistency(sg):
                continue
            if sg.size >= 3:
                expected.setdefault(canon_key(sg), sg.size)
    assert len(expected) == 38

    r = search_max(4, target=3, prune=False)
    got = {}
    for rec in r.others + r.confirmations:
        sg = closure(list(rec.letters) + semis)
        got.setdefault(canon_key(sg), sg.size)
    assert got == expected
