from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenseq.errors import InvalidQuiver, NoNonzeroHom
from greenseq.hereditary import projective_dims
from greenseq.mgs import path_length_spectrum
from greenseq.type_a import (
    IntervalModule,
    TypeAQuiver,
    coxeter_tau_oracle,
    enumerate_support_tilting,
    euler_form,
    ext_dim,
    ext_mutually_vanishes,
    format_set,
    hasse_quiver,
    hom_basis,
    hom_component_profile,
    hom_dim,
    interval_from_dim,
    intervals,
    mgs_spectrum_from_hasse,
    parse_set,
    projective_interval,
    stilt_leq,
    support_of,
    tau_interval,
    tau_interval_formula,
    tau_inverse_interval,
)

L = IntervalModule


def orientations(max_n: int):
    return [Q for n in range(1, max_n + 1) for Q in TypeAQuiver.all_orientations(n)]


def test_orientation_parsing():
    Q = TypeAQuiver.parse("+-+")
    assert Q.n == 4 and str(Q) == "+-+"
    assert Q.arrows() == [(1, 2), (3, 2), (3, 4)]
    assert Q.is_sink(2) and Q.is_source(1) and Q.is_source(3) and Q.is_sink(4)
    assert Q.opposite() == TypeAQuiver.parse("-+-")
    with pytest.raises(InvalidQuiver):
        TypeAQuiver.parse("+x")


def test_interval_basics():
    x = L(1, 3)
    assert list(x.support) == [2, 3]
    assert x.dim(4).tolist() == [0, 1, 1, 0]
    assert str(x) == "L(1,3)" and x.token() == "[1,3]"
    assert interval_from_dim([0, 1, 1, 0]) == x
    assert interval_from_dim([1, 0, 1]) is None
    assert interval_from_dim([0, 0]) is None
    assert len(intervals(5)) == 15
    with pytest.raises(ValueError):
        L(2, 2)
    with pytest.raises(ValueError):
        L(0, 3).dim(2)


@pytest.mark.parametrize(
    "signs, a, b, expected",
    [
        ("++", L(0, 1), L(2, 3), True),
        ("++", L(0, 2), L(0, 3), True),
        ("++", L(0, 2), L(1, 3), False),
    ],
)
def test_ext_criterion_examples(signs, a, b, expected):
    Q = TypeAQuiver.parse(signs)
    assert ext_mutually_vanishes(Q, a, b) is expected
    assert (ext_dim(Q, a, b) == 0 and ext_dim(Q, b, a) == 0) is expected


def test_ext_criterion_symmetric():
    for Q in orientations(5):
        ivs = intervals(Q.n)
        for a, b in itertools.product(ivs, ivs):
            assert ext_mutually_vanishes(Q, a, b) == ext_mutually_vanishes(Q, b, a)


def test_hom_examples():
    Q = TypeAQuiver.parse("+")
    assert hom_dim(Q, L(0, 2), L(0, 1)) == 1
    assert hom_dim(Q, L(0, 1), L(0, 2)) == 0
    assert hom_dim(Q, L(0, 1), L(1, 2)) == 0
    for P in orientations(5):
        for x in intervals(P.n):
            assert hom_dim(P, x, x) == 1


def test_hom_rank_matches_rational_nullspace():
    for Q in orientations(5):
        for x, y in itertools.product(intervals(Q.n), repeat=2):
            assert hom_dim(Q, x, y) == len(hom_basis(Q, x, y))
            assert hom_dim(Q, x, y) <= 1


def test_euler_form_examples():
    Q = TypeAQuiver.parse("+")
    assert euler_form(Q, [1, 0], [0, 1]) == -1
    assert euler_form(Q, [0, 1], [1, 0]) == 0
    for v in range(2):
        e = np.eye(2, dtype=np.int64)[v]
        assert euler_form(Q, e, e) == 1


def test_ext_examples():
    Q = TypeAQuiver.parse("+")
    assert ext_dim(Q, L(0, 1), L(1, 2)) == 1
    assert ext_dim(Q, L(1, 2), L(0, 1)) == 0
    for P in orientations(6):
        for x in intervals(P.n):
            assert ext_dim(P, x, x) == 0


def test_ext_matches_auslander_reiten_formula():
    # hereditary: Ext^1(x, y) = D Hom(y, tau x), and 0 when x is projective
    for Q in orientations(5):
        for x in intervals(Q.n):
            tx = tau_interval(Q, x)
            for y in intervals(Q.n):
                expected = 0 if tx is None else hom_dim(Q, y, tx)
                assert ext_dim(Q, x, y) == expected


def test_opposite_duality():
    # the vector space dual swaps the arguments and reverses the arrows
    for Q in orientations(5):
        Qop = Q.opposite()
        for x, y in itertools.product(intervals(Q.n), repeat=2):
            assert hom_dim(Q, x, y) == hom_dim(Qop, y, x)
            assert ext_dim(Q, x, y) == ext_dim(Qop, y, x)


def test_hom_profile_examples():
    Q = TypeAQuiver.parse("+")
    prof = hom_component_profile(Q, L(0, 2), L(0, 1))
    assert prof.shared_support == (1,) and prof.nonzero == (1,)
    x = L(1, 4)
    P = TypeAQuiver.parse("+-+")
    assert hom_component_profile(P, x, x).nonzero == (2, 3, 4)
    with pytest.raises(NoNonzeroHom):
        hom_component_profile(P, L(0, 1), L(2, 3))


def test_hom_profile_contract():
    # a nonzero morphism between intervals is nonzero on the whole shared support
    checked = 0
    for Q in orientations(5):
        for x, y in itertools.product(intervals(Q.n), repeat=2):
            if hom_dim(Q, x, y) == 0:
                continue
            prof = hom_component_profile(Q, x, y)
            assert prof.nonzero == prof.shared_support
            checked += 1
    assert checked > 0


def test_tau_examples():
    Q = TypeAQuiver.parse("+")
    assert tau_interval(Q, L(0, 1)) == L(1, 2)
    assert coxeter_tau_oracle(Q, [1, 0]).tolist() == [0, 1]
    assert tau_interval(Q, L(1, 2)) is None  # simple projective
    assert coxeter_tau_oracle(Q, [0, 1]) is None
    assert tau_inverse_interval(Q, L(1, 2)) == L(0, 1)


def test_tau_of_projectives_absent():
    for Q in orientations(6):
        for v in range(1, Q.n + 1):
            assert tau_interval(Q, projective_interval(Q, v)) is None


def test_coxeter_output_stays_interval():
    for Q in orientations(6):
        for x in intervals(Q.n):
            d = coxeter_tau_oracle(Q, x.dim(Q.n))
            assert d is None or interval_from_dim(d) is not None


def test_tau_count_matches_projectives():
    # exactly n indecomposables are projective
    for Q in orientations(6):
        assert sum(tau_interval(Q, x) is None for x in intervals(Q.n)) == Q.n


def test_tau_inverse_round_trip():
    for Q in orientations(5):
        for x in intervals(Q.n):
            tx = tau_interval(Q, x)
            if tx is not None:
                assert tau_inverse_interval(Q, tx) == x


def test_tau_formula_interior_example():
    # linear A4: tau S2 = S3 and the rule is defined there
    Q = TypeAQuiver.parse("+++")
    assert tau_interval_formula(Q, L(1, 2)) == (2, 3)
    assert tau_interval(Q, L(1, 2)) == L(2, 3)


def _brute_force_support_tilting(Q: TypeAQuiver):
    ivs = intervals(Q.n)
    out = []
    for r in range(len(ivs) + 1):
        for S in itertools.combinations(ivs, r):
            if len(support_of(S)) != len(S):
                continue
            if all(ext_dim(Q, a, b) == 0 for a in S for b in S):
                out.append(frozenset(S))
    return out


@pytest.mark.parametrize("Q", orientations(4), ids=lambda q: f"A{q.n}[{q}]")
def test_support_tilting_matches_brute_force(Q):
    got = enumerate_support_tilting(Q)
    assert len(got) == len(set(got))
    assert set(got) == set(_brute_force_support_tilting(Q))
    assert len(got) == {1: 2, 2: 5, 3: 14, 4: 42}[Q.n]


def test_stilt_order_extremes():
    for Q in orientations(4):
        sets = enumerate_support_tilting(Q)
        proj = frozenset(projective_interval(Q, v) for v in range(1, Q.n + 1))
        assert proj in sets
        for M in sets:
            assert stilt_leq(Q, M, proj)
            assert stilt_leq(Q, frozenset(), M)
            assert stilt_leq(Q, M, M)


def test_stilt_order_antisymmetric():
    Q = TypeAQuiver.parse("+-")
    sets = enumerate_support_tilting(Q)
    for M, N in itertools.product(sets, repeat=2):
        if M != N:
            assert not (stilt_leq(Q, M, N) and stilt_leq(Q, N, M))


def test_hasse_small():
    H1 = hasse_quiver(TypeAQuiver.parse(""))
    assert len(H1.nodes) == 2 and len(H1.edges) == 1
    for signs in ("+", "-"):
        H = hasse_quiver(TypeAQuiver.parse(signs))
        assert len(H.nodes) == 5 and len(H.edges) == 5
    assert mgs_spectrum_from_hasse(TypeAQuiver.parse("")) == {1}
    assert mgs_spectrum_from_hasse(TypeAQuiver.parse("+")) == {2, 3}


@pytest.mark.parametrize("Q", TypeAQuiver.all_orientations(4), ids=str)
def test_hasse_spectrum_a4(Q):
    assert mgs_spectrum_from_hasse(Q) == set(range(4, 11))


@pytest.mark.parametrize("Q", orientations(4), ids=lambda q: f"A{q.n}[{q}]")
def test_opposite_poset(Q):
    H, Hop = hasse_quiver(Q), hasse_quiver(Q.opposite())
    assert len(H.nodes) == len(Hop.nodes)
    assert len(H.edges) == len(Hop.edges)
    assert mgs_spectrum_from_hasse(Q) == mgs_spectrum_from_hasse(Q.opposite())
    # reversing every arrow gives the same path lengths from bottom to top
    rev = {i: [] for i in range(len(H.nodes))}
    for s, t in H.edges:
        rev[t].append(s)
    assert path_length_spectrum(rev, H.bottom) == mgs_spectrum_from_hasse(Q)


def test_hasse_dot_and_set_tokens():
    H = hasse_quiver(TypeAQuiver.parse("+"))
    dot = H.to_dot()
    assert dot == hasse_quiver(TypeAQuiver.parse("+")).to_dot()
    assert dot.startswith("digraph hasse {") and dot.count("->") == 5
    S = frozenset({L(0, 2), L(1, 2)})
    assert format_set(S) == ["[0,2]", "[1,2]"]
    assert parse_set(format_set(S)) == S


@st.composite
def orientation_and_vertex(draw):
    n = draw(st.integers(1, 6))
    signs = draw(st.lists(st.sampled_from("+-"), min_size=n - 1, max_size=n - 1))
    return TypeAQuiver(tuple(signs)), draw(st.integers(1, n))


@settings(max_examples=200, deadline=None)
@given(orientation_and_vertex())
def test_projective_interval_is_path_closure(qv):
    Q, v = qv
    # column v of (I - A)^-T counts paths out of v
    expected = projective_dims(Q.arrow_matrix())[:, v - 1]
    assert projective_interval(Q, v).dim(Q.n).tolist() == expected.tolist()
