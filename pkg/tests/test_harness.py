"""Brute-force extension enumeration, kind reports, random generators."""

from __future__ import annotations

import math

import pytest

import brute
from taulike import (
    Kind,
    TooLarge,
    all_linear_extensions,
    antichain_poset,
    chain_poset,
    check_tau_like,
    extension_tree_contains,
    fence_poset,
    is_linear_extension,
    random_poset,
    szpilrajn_extend,
)
from taulike.streams import OracleBundle, StreamPoset, omega_stream


# -- exhaustive extension enumeration ----------------------------------------


def test_two_antichain_has_two_extensions():
    assert len(all_linear_extensions(antichain_poset(2))) == 2


def test_three_chain_has_one_extension():
    assert len(all_linear_extensions(chain_poset(3))) == 1


def test_three_antichain_has_six_extensions():
    assert len(all_linear_extensions(antichain_poset(3))) == 6


@pytest.mark.parametrize("n", range(7))
def test_antichain_extension_count_is_factorial(n):
    assert len(all_linear_extensions(antichain_poset(n))) == math.factorial(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_chain_extension_count_is_one(n):
    assert len(all_linear_extensions(chain_poset(n))) == 1


def test_fuf_example_count_frozen():
    # 20 interleavings of a 2-chain with a 3-element vee, counted once by
    # the permutation filter and frozen here as a regression value
    from taulike import make_fuf_gadget

    g = make_fuf_gadget([1, 2])
    assert len(all_linear_extensions(g.base)) == 20


def test_extension_set_members_are_extensions_and_distinct():
    p = fence_poset(5)
    exts = all_linear_extensions(p)
    assert len(set(exts.orders)) == len(exts)
    for order in exts:
        assert is_linear_extension(order, p).ok


@pytest.mark.parametrize("seed", range(8))
def test_extensions_match_permutation_filter(seed):
    p = random_poset(6, 0.4, seed=seed)
    ours = set(all_linear_extensions(p).orders)
    assert ours == brute.extensions_by_permutation(p.elements, p.le)


def test_exhaustive_guard_fires():
    with pytest.raises(TooLarge):
        all_linear_extensions(antichain_poset(11))
    # explicit override admits larger inputs
    assert len(all_linear_extensions(chain_poset(11), max_size=12)) == 1


# -- membership without materializing -----------------------------------------


@pytest.mark.parametrize("seed", range(6))
def test_tree_membership_agrees_with_materialized_set(seed):
    p = random_poset(5, 0.5, seed=seed)
    materialized = set(all_linear_extensions(p).orders)
    from itertools import permutations

    for cand in permutations(p.elements):
        assert extension_tree_contains(p, cand) == (cand in materialized)


def test_tree_membership_rejects_wrong_element_set():
    p = chain_poset(3)
    assert not extension_tree_contains(p, [0, 1])
    assert not extension_tree_contains(p, [0, 1, 2, 3])


def test_tree_membership_on_large_chain():
    p = chain_poset(40)
    assert extension_tree_contains(p, list(range(40)))
    assert not extension_tree_contains(p, list(range(39, -1, -1)))


# -- kind reports --------------------------------------------------------------


def test_report_three_chain_zeta():
    report = check_tau_like(chain_poset(3), Kind.ZETA)
    assert report.ok and report.scope == "finite"
    assert report.max_interval == 3


def test_report_finite_counts_are_strict():
    report = check_tau_like(chain_poset(4), Kind.OMEGA)
    assert report.counts == {0: 0, 1: 1, 2: 2, 3: 3}
    dual = check_tau_like(chain_poset(4), Kind.OMEGA_STAR)
    assert dual.counts == {0: 3, 1: 2, 2: 1, 3: 0}


def test_report_omega_stream_counts():
    report = check_tau_like(omega_stream(), Kind.OMEGA, prefix_size=50)
    assert report.ok and report.scope == "prefix"
    assert report.counts == {n: n for n in range(50)}


def test_report_names_unsound_oracle():
    bundle = OracleBundle(predecessors=lambda x: [x, x + 1])  # x+1 is above x
    s = StreamPoset(lambda st: st, lambda x, y: x <= y, oracles=bundle, name="bad")
    report = check_tau_like(s, Kind.OMEGA, prefix_size=10)
    assert not report.ok
    assert any("unsound" in note for note in report.notes)


def test_report_missing_oracle_not_ok():
    s = StreamPoset(lambda st: st, lambda x, y: x <= y, name="bare")
    report = check_tau_like(s, Kind.OMEGA, prefix_size=5)
    assert not report.ok


def test_report_json_shape():
    doc = check_tau_like(chain_poset(2), Kind.OMEGA).to_json_dict()
    assert doc["kind"] == "omega" and doc["ok"] is True and doc["scope"] == "finite"


# -- random generation -----------------------------------------------------------


def test_random_poset_deterministic_under_seed():
    a = random_poset(10, 0.3, seed=42)
    b = random_poset(10, 0.3, seed=42)
    assert a.elements == b.elements and a.leq == b.leq
    c = random_poset(10, 0.3, seed=43)
    assert a.leq != c.leq  # overwhelmingly likely; fixed seeds make it stable


def test_random_poset_density_edges():
    assert random_poset(6, 0.0, seed=1).leq == antichain_poset(6).leq
    chain_like = random_poset(6, 1.0, seed=1)
    # density one totally orders the permutation: one maximal chain
    assert len(all_linear_extensions(chain_like)) == 1


def test_random_poset_guards():
    with pytest.raises(TooLarge):
        random_poset(65, 0.5, seed=0)
    from taulike import UnknownIdError

    with pytest.raises(UnknownIdError):
        random_poset(-1, 0.5, seed=0)
    with pytest.raises(UnknownIdError):
        random_poset(5, 1.5, seed=0)


def test_fence_shape():
    p = fence_poset(4)  # 0 < 1 > 2 < 3
    assert p.le(0, 1) and p.le(2, 1) and p.le(2, 3)
    assert not p.le(0, 2) and not p.le(0, 3)


# -- deterministic extension on random inputs -------------------------------------


@pytest.mark.parametrize("seed", range(25))
def test_szpilrajn_lands_in_extension_set(seed):
    p = random_poset(7, 0.35, seed=seed)
    order = szpilrajn_extend(p)
    assert extension_tree_contains(p, tuple(order))
    assert is_linear_extension(order, p).ok
