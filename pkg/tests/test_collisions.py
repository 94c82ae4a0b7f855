"""Colliding/focused pair analysis and the collision-free size bound."""
import pytest
from hypothesis import given, settings, strategies as st

from sfsyn.transform import Transformation, identity
from sfsyn.semigroup import closure, enumerate_wsf, vsf_generators
from sfsyn.dfa import witness, transition_semigroup
from sfsyn.collisions import (
    CollisionFreeBoundReport,
    StructureError,
    check_collision_free_bound,
    colliding_pairs_of,
    focused_pairs_of,
    pair_statuses,
    pair_statuses_json,
    verify_suffix_free_consistency,
)


def fixing_last(n: int):
    # transformations fixing n-1, the structural precondition
    return st.lists(st.integers(0, n - 1), min_size=n - 1, max_size=n - 1).map(
        lambda xs: Transformation(tuple(xs) + (n - 1,))
    )


# ----------------------------------------------------- per-element facts


def test_colliding_pairs_of_examples():
    # 0 -> 1, 1 -> 2 and 3 -> 3: makes {1,2} and {1,3} colliding
    assert colliding_pairs_of(Transformation((1, 2, 2, 3, 4))) == {(1, 2), (1, 3)}
    # 0 -> 4 is the empty state: nothing collides
    assert colliding_pairs_of(Transformation((4, 2, 3, 1, 4))) == frozenset()
    # images of interior states at 0t itself do not pair with themselves
    assert colliding_pairs_of(Transformation((2, 2, 2, 2, 4))) == frozenset()


def test_focused_pairs_of_examples():
    # 1 and 2 both land on 2: focused triple (1, 2, 2)
    assert focused_pairs_of(Transformation((1, 2, 2, 3, 4))) == {(1, 2, 2)}
    # landing together on n-1 is not a focus
    assert focused_pairs_of(Transformation((1, 4, 4, 4, 4))) == frozenset()


# ----------------------------------------------------------- pair status


def test_collapsing_family_has_no_colliding_pairs():
    for n in (4, 5, 6):
        statuses = pair_statuses(enumerate_wsf(n))
        assert all(not s.colliding for s in statuses)


def test_injective_family_all_pairs_colliding_never_focused():
    for n in (4, 5):
        sg = closure(list(vsf_generators(n)))
        statuses = pair_statuses(sg)
        assert len(statuses) == (n - 2) * (n - 3) // 2
        assert all(s.colliding for s in statuses)
        assert all(not s.focused for s in statuses)


def test_vsf5_pairs_enumerated():
    sg = closure(list(vsf_generators(5)))
    assert [s.pair for s in pair_statuses(sg)] == [(1, 2), (1, 3), (2, 3)]


def test_identity_semigroup_all_quiet():
    sg = closure([identity(5)])
    for s in pair_statuses(sg):
        assert not s.colliding and not s.focused


def test_colliding_witness_is_first_in_discovery_order():
    sg = closure(list(vsf_generators(4)))
    (status,) = pair_statuses(sg)
    assert status.pair == (1, 2)
    # generators a and b coincide at n=4 and collide nothing; the first
    # collider discovered is the 0->1 generator
    assert status.colliding_by.images == (1, 3, 2, 3)


def test_structure_error_when_last_state_moves():
    sg = closure([Transformation((1, 2, 3, 4, 0))])
    with pytest.raises(StructureError):
        pair_statuses(sg)
    with pytest.raises(ValueError):
        pair_statuses(closure([identity(3)]))


# ------------------------------------------------------------ consistency


def test_witness_semigroups_consistent():
    for n in (4, 5, 6):
        assert verify_suffix_free_consistency(transition_semigroup(witness(n)))


def test_injective_family_consistent():
    for n in (4, 5):
        assert verify_suffix_free_consistency(closure(list(vsf_generators(n))))


def test_collider_plus_focuser_is_inconsistent():
    e = Transformation((1, 4, 4, 4, 4))
    u = Transformation((1, 2, 2, 3, 4))  # focuses {1,2} to 2, collides it too
    assert not verify_suffix_free_consistency(closure([e, u]))


@settings(max_examples=60)
@given(st.lists(fixing_last(5), min_size=1, max_size=2), fixing_last(5))
def test_colliding_is_monotone_under_generator_growth(gens, extra):
    small = {s.pair for s in pair_statuses(closure(gens)) if s.colliding}
    big = {s.pair for s in pair_statuses(closure(gens + [extra])) if s.colliding}
    assert small <= big


# --------------------------------------------------------- the size bound


def test_bound_report_collapsing_family():
    rep = check_collision_free_bound(enumerate_wsf(5))
    assert rep.passed
    assert rep.applicable
    assert rep.size == 67 and rep.bound == 67


def test_bound_report_letter_subsemigroup():
    w = witness(5)
    sub = closure([w.transformation(x) for x in "ade"])
    rep = check_collision_free_bound(sub)
    assert rep.passed
    assert rep.size == 25
    assert rep.size < rep.bound


def test_bound_report_inapplicable_with_collisions():
    rep = check_collision_free_bound(closure(list(vsf_generators(4))))
    assert not rep.applicable
    assert not rep.passed


# ------------------------------------------------------------ JSON report


def test_pair_report_json_with_words():
    e = Transformation((1, 4, 4, 4, 4))
    u = Transformation((1, 2, 2, 3, 4))
    data = pair_statuses_json(closure([e, u]), names=("e", "u"))
    entry = next(d for d in data if d["pair"] == [1, 2])
    assert entry["colliding"] and entry["focused"]
    assert entry["colliding_by"] == "u"
    assert {"target": 2, "by": "u"} in entry["focus_targets"]


def test_pair_report_json_falls_back_to_images():
    data = pair_statuses_json(enumerate_wsf(4))
    assert all(not d["colliding"] for d in data)
    focused = [d for d in data if d["focus_targets"]]
    assert focused
    assert all(" " in t["by"] for d in focused for t in d["focus_targets"])
