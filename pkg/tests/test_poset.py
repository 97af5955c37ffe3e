from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from grchi import exact
from grchi.poset import (Element, IntersectionPoset, build_cycle_arrangement, build_truncated_boolean,
                         check_general_position, cycle_closed_form, euler_complement, load_poset, moebius,
                         moebius_interval, poset_from_dict, poset_to_dict, save_poset, six_pluecker_poset,
                         six_plus_one_poset)


def zeta_inverse_moebius(P: IntersectionPoset):
    """Reference: mu is the inverse of the zeta matrix of the incidence algebra."""
    ids = [e.id for e in P.elements]
    Z = [[int(P.leq(a, b)) for b in ids] for a in ids]
    M = exact.inverse(Z)
    return ids, M


@st.composite
def random_posets(draw):
    ranks = draw(st.lists(st.integers(1, 4), min_size=0, max_size=9))
    els = [Element("b", 0, 1)] + [Element(f"e{i}", r, 1) for i, r in enumerate(ranks)]
    rels = [("b", e.id) for e in els[1:]]
    for a in els[1:]:
        for b in els[1:]:
            if a.rank < b.rank and draw(st.booleans()):
                rels.append((a.id, b.id))
    return IntersectionPoset.from_relations(els, rels)


@given(random_posets())
@settings(max_examples=50, deadline=None)
def test_moebius_matches_zeta_inverse(P):
    ids, M = zeta_inverse_moebius(P)
    mu = moebius(P)
    b = ids.index("b")
    for j, y in enumerate(ids):
        assert mu[y] == M[b][j]
    for i, x in enumerate(ids):
        for j, y in enumerate(ids):
            assert moebius_interval(P, x, y) == M[i][j]


def test_moebius_small_examples():
    single = IntersectionPoset.from_relations([Element("0", 0, 1)], [])
    assert moebius(single) == {"0": 1}
    chain = IntersectionPoset.from_relations(
        [Element("0", 0), Element("a", 1), Element("b", 2)], [("0", "a"), ("a", "b")])
    assert moebius(chain) == {"0": 1, "a": -1, "b": 0}


def test_boolean_lattice_moebius():
    P = build_truncated_boolean(5, 3, [1, 1, 1, 1])
    mu = moebius(P)
    for e in P.elements:
        assert mu[e.id] == (-1) ** e.rank


def test_truncated_boolean_counts():
    assert euler_complement(build_truncated_boolean(4, 4, [6, 5, 4, 2, 2])) == 4
    c0, c1 = 7, 3
    assert euler_complement(build_truncated_boolean(2, 1, [c0, c1])) == c0 - 2 * c1
    assert euler_complement(build_truncated_boolean(11, 4, [6, 4, 4, 2, 2])) == 512


def test_truncated_boolean_equals_binomial_sum():
    chis = [10, 9, 8, 7]
    for d in range(3, 8):
        P = build_truncated_boolean(d, 3, chis)
        assert euler_complement(P) == sum((-1) ** i * c * comb(d, i) for i, c in enumerate(chis))


def test_six_pluecker_poset():
    assert euler_complement(six_pluecker_poset()) == 0


def test_six_plus_one_poset_value():
    # the fixture's labelled poset evaluates to 5; the solver on the concrete
    # arrangement also finds 5 critical points (see the mldeg tests)
    assert euler_complement(six_plus_one_poset()) == 5


def test_empty_arrangement():
    P = IntersectionPoset.from_relations([Element("{}", 0, 6)], [])
    assert euler_complement(P) == 6


@pytest.mark.parametrize("d,want", [(4, 0), (5, 1), (6, 8), (7, 27), (8, 66), (9, 135), (10, 246), (11, 413)])
def test_cycle_table(d, want):
    P = build_cycle_arrangement(d)
    assert euler_complement(P) == want
    assert cycle_closed_form(d) == want


def test_cycle_requires_d_at_least_4():
    with pytest.raises(ValueError):
        build_cycle_arrangement(3)


def test_cycle_fixture_matches_builder():
    from grchi.poset import fixture_path
    P = load_poset(fixture_path("cycle7.json"))
    assert euler_complement(P) == euler_complement(build_cycle_arrangement(7))


def test_poset_json_round_trip(tmp_path):
    P = six_pluecker_poset()
    path = tmp_path / "p.json"
    save_poset(P, path)
    Q = load_poset(path)
    assert euler_complement(Q) == euler_complement(P)
    assert poset_to_dict(poset_from_dict(poset_to_dict(P))) == poset_to_dict(P)


def test_invalid_posets_rejected():
    with pytest.raises(ValueError):
        IntersectionPoset.from_relations([Element("a", 0), Element("a", 1)], [])
    with pytest.raises(ValueError):
        IntersectionPoset.from_relations([Element("a", 0), Element("b", 1)], [("a", "z")])
    with pytest.raises(ValueError):
        IntersectionPoset.from_relations([Element("a", 1), Element("b", 1)], [("a", "b")])
    two_min = IntersectionPoset.from_relations([Element("a", 0), Element("b", 0)], [])
    with pytest.raises(ValueError):
        moebius(two_min)
    missing = IntersectionPoset.from_relations([Element("a", 0)], [])
    with pytest.raises(ValueError):
        euler_complement(missing)


def test_general_position():
    e = lambda i: [int(j == i) for j in range(4)]
    assert check_general_position([[e(0), e(1)], [e(2), e(3)]]) == (True, None)
    assert check_general_position([[e(0), e(1)], [e(0), e(1)]]) == (False, (1, 2))
    import numpy as np
    rng = np.random.default_rng(0)
    planes = [rng.integers(-9, 10, size=(2, 4)).tolist() for _ in range(4)]
    ok, _ = check_general_position(planes)
    assert ok
    with pytest.raises(ValueError):
        check_general_position([[e(0), e(0)]])
