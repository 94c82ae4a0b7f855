"""Closure engine and the three transformation families.

Counts that matter downstream are frozen here after being derived from
independent oracles: a set-fixpoint closure, a brute-force scan of all
n^n maps for family membership, and exhaustive short-word search for
witness minimality.
"""
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sfsyn.transform import Transformation, compose, identity
from sfsyn.semigroup import (
    closure,
    enumerate_bsf,
    enumerate_wsf,
    format_semigroup,
    in_bsf,
    in_vsf,
    in_wsf,
    is_irreducibly_generated,
    semiconstant_family,
    semigroup_to_json,
    vsf_generators,
    wsf_bound,
    witness_letters,
    word_string,
)


def naive_closure(gens):
    # set fixpoint, no ordering or words: S := S union S.G until stable
    out = set(gens)
    while True:
        new = {compose(x, g) for x in out for g in gens} - out
        if not new:
            return out
        out |= new


def naive_in_bsf(t: Transformation) -> bool:
    # textbook restatement with a generous power range
    n = t.n
    if t[n - 1] != n - 1 or 0 in t.images:
        return False
    for j in range(1, 2 * n + 1):
        p = 0
        for _ in range(j):
            p = t[p]
        if p == n - 1:
            continue
        for q in range(1, n - 1):
            r = q
            for _ in range(j):
                r = t[r]
            if r == p:
                return False
    return True


# ------------------------------------------------------------- closure


def test_closure_matches_set_fixpoint():
    gens = [
        Transformation((4, 2, 3, 1, 4)),
        Transformation((1, 4, 4, 4, 4)),
        Transformation((4, 4, 2, 3, 4)),
    ]
    sg = closure(gens)
    assert sg.element_set == frozenset(naive_closure(gens))
    assert sg.size == len(sg.elements) == len(sg.element_set)


def test_closure_input_validation():
    with pytest.raises(ValueError):
        closure([])
    with pytest.raises(ValueError):
        closure([identity(3), identity(4)])


def test_witness_words_evaluate_and_are_shortest():
    gens = list(vsf_generators(4))
    sg = closure(gens)
    # exhaustive short-word table as the minimality oracle
    best: dict[Transformation, int] = {}
    for length in range(1, 6):
        for word in itertools.product(range(len(gens)), repeat=length):
            t = gens[word[0]]
            for i in word[1:]:
                t = compose(t, gens[i])
            best.setdefault(t, length)
    for t in sg.elements:
        word = sg.witness_words[t]
        value = gens[word[0]]
        for i in word[1:]:
            value = compose(value, gens[i])
        assert value == t
        assert len(word) == best[t]


def test_witness_word_tie_breaks_by_generator_order():
    a = Transformation((1, 2, 0))
    b = Transformation((2, 0, 1))  # a squared
    sg = closure([a, b])
    # identity arises as both ab and ba; a's expansion runs first
    assert sg.witness_words[identity(3)] == (0, 1)


def test_duplicate_generator_keeps_first_word():
    a = Transformation((1, 2, 0))
    sg = closure([a, a])
    assert sg.witness_words[a] == (0,)


# ------------------------------------------------------------ families


def test_in_bsf_matches_brute_force_small():
    for n in (2, 3, 4):
        for imgs in itertools.product(range(n), repeat=n):
            t = Transformation(imgs)
            assert in_bsf(t) == naive_in_bsf(t), imgs


@settings(max_examples=300)
@given(st.lists(st.integers(1, 5), min_size=5, max_size=5))
def test_in_bsf_power_cutoff_suffices(prefix):
    t = Transformation(tuple(prefix) + (5,))
    assert in_bsf(t) == naive_in_bsf(t)


def test_bsf_counts_frozen():
    assert [len(enumerate_bsf(n)) for n in (2, 3, 4, 5, 6)] == [1, 3, 15, 115, 1169]


def test_bsf_members_and_non_members():
    assert in_bsf(Transformation((1, 4, 4, 4, 4)))
    assert not in_bsf(identity(5))  # 0 has a preimage
    assert not in_bsf(Transformation((1, 1, 4, 4, 4)))  # 0 and 1 merge interior
    for t in semiconstant_family(6):
        assert in_bsf(t)


def test_family_guards():
    t = Transformation((2, 2, 2))
    with pytest.raises(ValueError):
        in_vsf(t)
    with pytest.raises(ValueError):
        in_wsf(t)
    with pytest.raises(ValueError):
        vsf_generators(3)
    with pytest.raises(ValueError):
        enumerate_wsf(3)
    with pytest.raises(ValueError):
        wsf_bound(1)


def test_vsf_generator_images_frozen_n5():
    gens = vsf_generators(5)
    assert len(gens) == 5
    assert [g.images for g in gens] == [
        (4, 2, 3, 1, 4),
        (4, 2, 1, 3, 4),
        (1, 4, 2, 3, 4),
        (2, 1, 4, 3, 4),
        (3, 1, 2, 4, 4),
    ]
    assert all(in_vsf(g) for g in gens)


def test_vsf_generator_count_is_n():
    for n in (4, 5, 6, 7):
        assert len(vsf_generators(n)) == n


def test_vsf_closure_sizes_frozen():
    assert closure(list(vsf_generators(4))).size == 13
    assert closure(list(vsf_generators(5))).size == 73
    assert closure(list(vsf_generators(6))).size == 501


def test_vsf_closure_members_all_vsf():
    sg = closure(list(vsf_generators(5)))
    assert all(in_vsf(t) for t in sg.elements)


def test_wsf_enumeration_matches_bound_and_letter_closure():
    for n in (4, 5, 6):
        wsf = enumerate_wsf(n)
        assert wsf.size == wsf_bound(n)
        assert all(in_wsf(t) for t in wsf.elements)
        _, letters = witness_letters(n)
        assert closure(list(letters)).element_set == wsf.element_set


def test_wsf_bound_values_frozen():
    assert [wsf_bound(n) for n in (4, 5, 6, 7, 8)] == [11, 67, 629, 7781, 117655]


def test_wsf_bound_is_exact_python_int():
    # no overflow at sizes where fixed-width arithmetic would wrap
    assert wsf_bound(20) == 19**18 + 18


def test_witness_letters_n5_frozen():
    names, letters = witness_letters(5)
    assert names == ("a", "b", "c", "d", "e")
    assert [t.images for t in letters] == [
        (4, 2, 3, 1, 4),
        (4, 2, 1, 3, 4),
        (4, 1, 2, 1, 4),
        (4, 4, 2, 3, 4),
        (1, 4, 4, 4, 4),
    ]


def test_witness_letters_n4_drop_duplicate():
    names, letters = witness_letters(4)
    assert names == ("b", "c", "d", "e")
    assert len({t.images for t in letters}) == 4


def test_semiconstant_family_size_and_membership():
    for n in (4, 5, 6):
        fam = semiconstant_family(n)
        assert len(fam) == 2 ** (n - 2)
        assert len(set(fam)) == len(fam)
        for t in fam:
            assert in_wsf(t)
            moved = {q for q in range(n) if t[q] != q}
            assert 0 in moved
            assert all(t[q] == n - 1 for q in moved)


# ------------------------------------------------------- irreducibility


def test_vsf_generators_are_irreducible():
    assert is_irreducibly_generated(list(vsf_generators(5)))


def test_redundant_generator_detected():
    gens = list(vsf_generators(4))
    extra = compose(gens[0], gens[1])
    assert not is_irreducibly_generated(gens + [extra])


def test_duplicate_generator_not_irreducible():
    a = Transformation((1, 2, 0))
    assert not is_irreducibly_generated([a, a])


def test_single_generator_is_irreducible():
    assert is_irreducibly_generated([identity(3)])
    with pytest.raises(ValueError):
        is_irreducibly_generated([])


# ------------------------------------------------------------- exports


def test_format_semigroup_layout():
    sg = closure([Transformation((1, 2, 0))])
    text = format_semigroup(sg)
    lines = text.splitlines()
    assert lines[0] == "n=3 size=3"
    assert lines[1] == "1 2 0"
    assert len(lines) == 4
    assert text.endswith("\n")


def test_semigroup_json_shape():
    _, letters = witness_letters(4)
    sg = closure(list(letters))
    data = semigroup_to_json(sg, names=("b", "c", "d", "e"))
    assert data["n"] == 4 and data["size"] == 11
    assert len(data["generators"]) == 4
    assert all(set(e) == {"images", "word"} for e in data["elements"])
    first = data["elements"][0]
    assert first["images"] == "3 2 1 3" and first["word"] == "b"


def test_word_string_fallback_names():
    assert word_string((0, 2, 1)) == "g0.g2.g1"
    assert word_string((0, 2), names=("a", "b", "c")) == "ac"
