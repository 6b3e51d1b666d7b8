from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from src.designs import Block, Sequencing, TripleSystem
from src.exhaustive import random_restart_sequencer
from src.generators import bose, fano, skolem
from src.greedy import greedy_3good
from src.semiseq import PartitionQuery, check_theorem_2u1, is_w_semi, window_partitionable
from src.verifier import is_ell_good

BOSE1 = bose(1)


def _brute_force_partition(system: TripleSystem, window: tuple[int, ...]) -> bool:
    points = set(window)
    inside = [block for block in system.blocks if points.issuperset(block)]
    for chosen in combinations(inside, len(window) // 3):
        covered = set().union(*chosen)
        if covered == points:
            return True
    return False


def test_block_window_partitions(fano_system: TripleSystem) -> None:
    assert window_partitionable(fano_system, PartitionQuery((0, 1, 3))) == [Block(0, 1, 3)]
    assert window_partitionable(fano_system, PartitionQuery((0, 1, 2))) is None


def test_partition_query_validates_window() -> None:
    with pytest.raises(ValueError, match="window_length_not_multiple_of_3"):
        PartitionQuery((0, 1, 2, 3))
    with pytest.raises(ValueError, match="window_points_not_distinct"):
        PartitionQuery((0, 0, 1))


@pytest.mark.parametrize("system", [fano(), BOSE1, skolem(2)], ids=["fano", "bose1", "skolem2"])
def test_six_point_windows_match_brute_force(system: TripleSystem) -> None:
    for window in combinations(range(min(system.v, 10)), 6):
        witness = window_partitionable(system, PartitionQuery(window))
        assert (witness is not None) == _brute_force_partition(system, window)
        if witness is not None:
            assert sorted(p for block in witness for p in block) == sorted(window)
            assert all(block in system.block_set for block in witness)


def test_sts9_splits_into_a_parallel_class() -> None:
    witness = window_partitionable(BOSE1, PartitionQuery(tuple(range(9))))
    assert witness is not None
    assert len(witness) == 3


def test_fano_identity_is_3_semi(fano_system: TripleSystem) -> None:
    assert is_w_semi(fano_system, Sequencing.of(range(7)), 3) is None


def test_block_at_positions_2_to_4_is_reported(fano_system: TripleSystem) -> None:
    violation = is_w_semi(fano_system, Sequencing.of([0, 1, 2, 4, 3, 5, 6]), 3)
    assert violation is not None
    assert violation.kind == "window_partition"
    assert violation.window_start == 2
    assert violation.window_len == 3
    assert violation.witness == (Block(1, 2, 4),)


def test_w_semi_range_is_checked(fano_system: TripleSystem) -> None:
    seq = Sequencing.of(range(7))
    with pytest.raises(ValueError, match="w_out_of_range"):
        is_w_semi(fano_system, seq, 7)
    with pytest.raises(ValueError, match="w_out_of_range"):
        is_w_semi(fano_system, seq, 2)


@settings(max_examples=200, deadline=None)
@given(order=st.permutations(list(range(9))))
def test_3_semi_coincides_with_3_good(order: list[int]) -> None:
    seq = Sequencing.of(order)
    assert (is_w_semi(BOSE1, seq, 3) is None) == is_ell_good(BOSE1, seq, 3)


@settings(max_examples=100, deadline=None)
@given(order=st.permutations(list(range(9))))
def test_6_semi_implies_3_good(order: list[int]) -> None:
    seq = Sequencing.of(order)
    if is_w_semi(BOSE1, seq, 6) is None:
        assert is_ell_good(BOSE1, seq, 3)


def test_theorem_holds_for_3good_fano(fano_system: TripleSystem) -> None:
    check = check_theorem_2u1(fano_system, greedy_3good(fano_system), 1)
    assert check.passed
    assert check.w == 3
    assert check.counterexample is None


def test_theorem_precondition_is_enforced(fano_system: TripleSystem) -> None:
    with pytest.raises(ValueError, match="precondition_failed"):
        check_theorem_2u1(fano_system, Sequencing.of(range(7)), 2)
    with pytest.raises(ValueError, match="u_must_be_positive"):
        check_theorem_2u1(fano_system, Sequencing.of(range(7)), 0)


def test_theorem_holds_for_5good_sts15() -> None:
    system = bose(2)
    result = random_restart_sequencer(system, 5, restarts=5, budget_per_restart=200_000, seed=1)
    assert result.status == "found"
    check = check_theorem_2u1(system, result.sequencing, 2)
    assert check.passed
    assert check.w == 6
