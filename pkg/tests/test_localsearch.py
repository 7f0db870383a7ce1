import numpy as np
import pytest

from tspcross import (
    Instance,
    RandomStream,
    build_neighbor_lists,
    cyclic_equal,
    load_fixture,
    three_opt_ls,
    tour_length,
    two_opt_ls,
    validate_tour,
)

from helpers import (
    improving_2opt_move_exists,
    improving_3opt_move_exists,
    random_euc_instance,
    random_tour,
)


@pytest.fixture(scope="module")
def paper8():
    return load_fixture("paper8")


# -- neighbor lists -----------------------------------------------------------

def test_neighbor_list_k1_city7(paper8):
    nl = build_neighbor_lists(paper8, 1)
    assert list(nl.lists[6]) == [7]  # city 8 at distance 14 is row minimum


def test_neighbor_list_tie_broken_by_index(paper8):
    nl = build_neighbor_lists(paper8, 2)
    assert list(nl.lists[0]) == [1, 7]  # cities 2 and 8, both at distance 12


def test_neighbor_list_saturates_at_full_order(paper8):
    nl = build_neighbor_lists(paper8, 50)
    assert nl.lists.shape == (8, 7)
    d = paper8.dist_matrix()
    for i in range(8):
        row = list(nl.lists[i])
        assert sorted(row) == [c for c in range(8) if c != i]
        dists = [d[i, c] for c in row]
        assert dists == sorted(dists)


def test_neighbor_list_rejects_bad_k(paper8):
    with pytest.raises(ValueError):
        build_neighbor_lists(paper8, 0)


# -- 2-opt --------------------------------------------------------------------

def test_two_opt_fixed_point(paper8):
    nl = build_neighbor_lists(paper8, 7)
    once = two_opt_ls(tuple(range(8)), paper8, nl)
    assert two_opt_ls(once, paper8, nl) == once


def test_two_opt_uncrosses_unit_square():
    inst = Instance(
        name="square",
        dimension=4,
        edge_weight_type="EUC_2D",
        coords=((0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (10.0, 10.0)),
    )
    nl = build_neighbor_lists(inst, 3)
    out = two_opt_ls((0, 1, 2, 3), inst, nl)
    assert tour_length(out, inst) == 40
    assert cyclic_equal(out, (0, 1, 3, 2))


def test_two_opt_paper8_identity_tour(paper8):
    nl = build_neighbor_lists(paper8, 7)
    out = two_opt_ls(tuple(range(8)), paper8, nl)
    assert tour_length(out, paper8) <= 164
    assert not improving_2opt_move_exists(out, paper8.dist_matrix())


# -- 3-opt --------------------------------------------------------------------

def test_three_opt_fixed_point(paper8):
    nl = build_neighbor_lists(paper8, 7)
    once = three_opt_ls(tuple(range(8)), paper8, nl)
    assert three_opt_ls(once, paper8, nl) == once


def test_three_opt_beats_two_opt_witness():
    # Pinned witness where the 2-opt local optimum is not 3-optimal.
    inst = random_euc_instance(7, seed=1)
    nl = build_neighbor_lists(inst, 6)
    t = random_tour(7, seed=10)
    two = two_opt_ls(t, inst, nl)
    three = three_opt_ls(two, inst, nl)
    assert tour_length(two, inst) == 1440
    assert tour_length(three, inst) == 1412
    assert not improving_3opt_move_exists(three, inst.dist_matrix())


def test_local_searches_on_random_eil51_tours():
    inst = load_fixture("eil51")
    nl = build_neighbor_lists(inst, 8)
    for seed in range(1000):
        t = random_tour(51, seed=seed)
        before = tour_length(t, inst)
        out = three_opt_ls(t, inst, nl)
        assert validate_tour(out, 51) is None
        assert tour_length(out, inst) <= before


def test_exactness_against_exhaustive_oracles_small():
    for case in range(40):
        n = 5 + case % 6
        inst = random_euc_instance(n, seed=31000 + case)
        nl = build_neighbor_lists(inst, n - 1)
        d = inst.dist_matrix()
        t = random_tour(n, seed=case)
        out2 = two_opt_ls(t, inst, nl)
        out3 = three_opt_ls(t, inst, nl)
        assert not improving_2opt_move_exists(out2, d)
        assert not improving_3opt_move_exists(out3, d)


def test_monotone_idempotent_and_deterministic_at_k8():
    for case in range(25):
        n = 40 + case
        inst = random_euc_instance(n, seed=52000 + case)
        nl = build_neighbor_lists(inst, 8)
        t = random_tour(n, seed=case)
        out2 = two_opt_ls(t, inst, nl)
        out3 = three_opt_ls(out2, inst, nl)
        assert validate_tour(out3, n) is None
        assert tour_length(out2, inst) <= tour_length(t, inst)
        assert tour_length(out3, inst) <= tour_length(out2, inst)
        assert tour_length(two_opt_ls(out2, inst, nl), inst) == tour_length(out2, inst)
        assert tour_length(three_opt_ls(out3, inst, nl), inst) == tour_length(out3, inst)
        assert two_opt_ls(t, inst, nl) == out2
        assert three_opt_ls(out2, inst, nl) == out3


def test_neighbor_lists_are_plain_arrays(paper8):
    nl = build_neighbor_lists(paper8, 3)
    assert isinstance(nl.lists, np.ndarray)
    assert nl.lists.dtype == np.int64
