from __future__ import annotations

import itertools
import warnings
from collections import Counter

import pytest

from greenseq.errors import UnknownQuiverShape
from greenseq.harness import build_affine, build_type_a
from greenseq.mgs import (
    SpectrumReport,
    TruncatedSpectrumWarning,
    build_exchange_graph,
    default_depth_bound,
    enumerate_mgs,
    graph_spectrum,
    key_digest,
    length_spectrum,
    quiver_shape,
    replay,
)
from greenseq.quiver import ClusterQuiver, canonical_key, green_vertices, mutate, framed
from greenseq.type_a import TypeAQuiver, hasse_quiver


def brute_force_counts(C: ClusterQuiver, bound: int) -> Counter:
    """Try every word in the vertex labels; keep those that stay green and end
    with no green vertex. Shares nothing with the search code but mutate."""
    out = Counter()
    for L in range(1, bound + 1):
        for word in itertools.product(C.labels, repeat=L):
            R = framed(C)
            ok = True
            for k in word:
                if k not in green_vertices(R):
                    ok = False
                    break
                R = mutate(R, k)
            if ok and not green_vertices(R):
                out[L] += 1
    return out


def hasse_path_counts(Q: TypeAQuiver) -> Counter:
    H = hasse_quiver(Q)
    succ = H.successors()
    memo = {}

    def go(v):
        if v not in memo:
            memo[v] = Counter({0: 1}) if not succ[v] else sum(
                (Counter({l + 1: c for l, c in go(w).items()}) for w in succ[v]), Counter()
            )
        return memo[v]

    return go(H.top)


# A2 by hand: mu1 mu2 and mu2 mu1 mu2.
# Ã2,1 from brute_force_counts below; A3 and A4 from Hasse path counts.
FROZEN_COUNTS = {
    "A2[+]": {2: 1, 3: 1},
    "A3[++]": {3: 1, 4: 4, 5: 2, 6: 2},
    "aff2": {3: 1, 4: 2, 5: 2},
}


def test_a2_sequences_by_hand():
    seen = []
    rep = enumerate_mgs(build_type_a("+"), 3, visitor=seen.append)
    assert sorted(seen) == [(1, 2), (2, 1, 2)]
    assert rep.counts == FROZEN_COUNTS["A2[+]"]


@pytest.mark.parametrize(
    "C, key",
    [(build_type_a("+"), "A2[+]"), (build_type_a("++"), "A3[++]"), (build_affine(2), "aff2")],
)
def test_frozen_counts(C, key):
    assert enumerate_mgs(C, default_depth_bound(C)).counts == FROZEN_COUNTS[key]


@pytest.mark.parametrize("C", [build_type_a("+"), build_type_a("-+"), build_affine(2)], ids=["A2", "A3", "aff2"])
def test_counts_match_brute_force(C):
    bound = default_depth_bound(C)
    assert Counter(enumerate_mgs(C, bound).counts) == brute_force_counts(C, bound)


@pytest.mark.parametrize("Q", TypeAQuiver.all_orientations(3) + TypeAQuiver.all_orientations(4), ids=str)
def test_counts_match_hasse_paths(Q):
    C = Q.to_cluster_quiver()
    assert Counter(enumerate_mgs(C, default_depth_bound(C)).counts) == hasse_path_counts(Q)


@pytest.mark.parametrize(
    "C, bound",
    [(build_type_a("+-+"), 10), (build_type_a("++++"), 15), (build_affine(2), 5), (build_affine(3), 9), (build_affine(2), 4)],
)
def test_memo_plain_stream_and_threads_agree(C, bound):
    memo = enumerate_mgs(C, bound)
    plain = enumerate_mgs(C, bound, memoize=False)
    seqs = []
    stream = enumerate_mgs(C, bound, visitor=seqs.append)
    threaded = enumerate_mgs(C, bound, threads=3)
    plain_threaded = enumerate_mgs(C, bound, memoize=False, threads=2)
    for rep in (plain, stream, threaded, plain_threaded):
        assert rep.counts == memo.counts
        assert rep.truncated == memo.truncated
    assert Counter(len(s) for s in seqs) == Counter(memo.counts)
    assert len(set(seqs)) == len(seqs)
    assert memo.states_visited <= plain.states_visited


def test_visitor_sequences_replay():
    C = build_affine(2)
    seqs = []
    enumerate_mgs(C, 5, visitor=seqs.append)
    for s in seqs:
        assert green_vertices(replay(C, s)) == []
    with pytest.raises(ValueError):
        replay(C, (0, 0))


def test_truncation_and_warning():
    C = build_type_a("++")
    rep = enumerate_mgs(C, 4)
    assert rep.truncated and rep.pruned > 0
    assert rep.lengths == (3, 4)
    with pytest.warns(TruncatedSpectrumWarning):
        assert length_spectrum(C, 4) == {3, 4}
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert length_spectrum(C, 6) == {3, 4, 5, 6}


def test_affine_certified_bound():
    C = build_affine(3)
    rep = enumerate_mgs(C, 9)
    assert rep.bound_certified and not rep.truncated and rep.pruned > 0
    low = enumerate_mgs(C, 8)
    assert low.truncated and not low.bound_certified
    # searching deeper finds nothing new
    assert enumerate_mgs(C, 12).lengths == rep.lengths


def test_kronecker_not_certified():
    C = ClusterQuiver.from_arrows(2, [(1, 2), (1, 2)])
    with pytest.raises(UnknownQuiverShape):
        quiver_shape(C)
    rep = enumerate_mgs(C, 8)
    assert rep.lengths == (2,)
    assert rep.truncated and not rep.bound_certified


def test_depth_bound_validation():
    with pytest.raises(ValueError):
        enumerate_mgs(build_type_a("+"), 0)


@pytest.mark.parametrize(
    "C, shape, bound",
    [
        (build_type_a(""), ("A", 1), 1),
        (build_type_a("+-"), ("A", 3), 6),
        (build_affine(2), ("affine", 2), 5),
        (build_affine(4), ("affine", 4), 14),
    ],
)
def test_shapes(C, shape, bound):
    assert quiver_shape(C) == shape
    assert default_depth_bound(C) == bound


def test_other_shapes_rejected():
    star = ClusterQuiver.from_arrows(4, [(1, 2), (1, 3), (1, 4)])
    cyc = ClusterQuiver.from_arrows(4, [(1, 2), (2, 3), (3, 4), (1, 4)])  # Ã3,1 relabelled
    two_sinks = ClusterQuiver.from_arrows(4, [(1, 2), (3, 2), (3, 4), (1, 4)])
    for C in (star, two_sinks):
        with pytest.raises(UnknownQuiverShape):
            quiver_shape(C)
    assert quiver_shape(cyc) == ("affine", 3)


def test_report_json_round_trip():
    rep = enumerate_mgs(build_affine(2), 5)
    back = SpectrumReport.from_json(rep.to_json())
    assert back == rep
    d = rep.to_dict()
    assert list(d)[:4] == ["lengths", "counts", "states_visited", "truncated"]
    assert d["counts"] == {"3": 1, "4": 2, "5": 2}
    with pytest.raises(ValueError):
        SpectrumReport.from_dict({**d, "lengths": [3]})


@pytest.mark.parametrize("Q", TypeAQuiver.all_orientations(3), ids=str)
def test_exchange_graph_structure(Q):
    C = Q.to_cluster_quiver()
    G = build_exchange_graph(C, 6)
    assert len(G.nodes) == 14 and len(G.edges) == 21
    assert not G.truncated
    assert graph_spectrum(G) == {3, 4, 5, 6}
    for s, k, t in G.edges:
        R = G.nodes[s]
        assert k in green_vertices(R)
        assert canonical_key(mutate(R, k)) == t
    # every node sees exactly n green or red mutations
    out = Counter(s for s, _, _ in G.edges)
    inc = Counter(t for _, _, t in G.edges)
    assert all(out[k] + inc[k] == 3 for k in G.nodes)


def test_exchange_graph_truncated():
    G = build_exchange_graph(build_type_a("++"), 2)
    assert G.truncated


def test_dot_is_deterministic():
    C = build_type_a("+")
    a = build_exchange_graph(C, 3).to_dot()
    b = build_exchange_graph(C, 3).to_dot()
    assert a == b
    assert a.startswith("digraph exchange {")
    assert a.count("->") == 5
    assert "μ1" in a and "μ2" in a
    root = key_digest(canonical_key(framed(C)))
    assert f'n{root} [label="{root}", shape=doublecircle]' in a


def test_single_vertex():
    C = build_type_a("")
    rep = enumerate_mgs(C, 1)
    assert rep.lengths == (1,) and not rep.truncated
    G = build_exchange_graph(C, 1)
    assert len(G.nodes) == 2 and len(G.edges) == 1


def test_length_spectrum_examples():
    assert length_spectrum(build_type_a("++"), 6) == {3, 4, 5, 6}
    assert length_spectrum(build_affine(3), 9) == {4, 5, 6, 7, 8, 9}
    with pytest.warns(TruncatedSpectrumWarning):
        assert length_spectrum(build_type_a("+"), 2) == {2}
    assert default_depth_bound(build_type_a("+++")) == 10
