from itertools import permutations

import pytest

from src.designs import Sequencing, TripleSystem
from src.exhaustive import exhaustive_sequencer, random_restart_sequencer
from src.generators import bose, random_psts, skolem
from src.verifier import is_ell_good


def _first_good_by_brute_force(system: TripleSystem, ell: int) -> tuple[int, ...] | None:
    for order in permutations(range(system.v)):
        if is_ell_good(system, Sequencing.of(order), ell):
            return order
    return None


def test_fano_3good_is_lexicographically_first(fano_system: TripleSystem) -> None:
    result = exhaustive_sequencer(fano_system, 3)
    assert result.status == "found"
    assert is_ell_good(fano_system, result.sequencing, 3)
    assert result.sequencing.order == _first_good_by_brute_force(fano_system, 3)
    assert result.sequencing.meta.method == "exhaustive"


def test_single_block_has_no_sequencing() -> None:
    system = TripleSystem.from_triples(3, [(0, 1, 2)], kind="sts")
    result = exhaustive_sequencer(system, 3)
    assert result.status == "no_sequencing_exists"
    assert result.sequencing is None


def test_fano_has_no_4good_sequencing(fano_system: TripleSystem) -> None:
    result = exhaustive_sequencer(fano_system, 4)
    assert result.status == "no_sequencing_exists"
    assert _first_good_by_brute_force(fano_system, 4) is None


def test_sts9_has_no_4good_sequencing() -> None:
    result = exhaustive_sequencer(bose(1), 4)
    assert result.status == "no_sequencing_exists"
    assert result.nodes > 0


def test_sts15_has_a_4good_sequencing() -> None:
    system = bose(2)
    result = exhaustive_sequencer(system, 4)
    assert result.status == "found"
    assert is_ell_good(system, result.sequencing, 4)


def test_sts13_has_no_5good_sequencing() -> None:
    result = exhaustive_sequencer(skolem(2), 5)
    assert result.status == "no_sequencing_exists"
    assert result.sequencing is None


@pytest.mark.parametrize("seed", range(5))
def test_partial_systems_agree_with_brute_force(seed: int) -> None:
    system = random_psts(7, 5, seed)
    for ell in (3, 4, 5):
        result = exhaustive_sequencer(system, ell)
        expected = _first_good_by_brute_force(system, ell)
        if expected is None:
            assert result.status == "no_sequencing_exists"
        else:
            assert result.status == "found"
            assert result.sequencing.order == expected


def test_budget_exhaustion() -> None:
    result = exhaustive_sequencer(bose(1), 4, budget=1)
    assert result.status == "budget_exhausted"
    assert result.nodes <= 1


def test_exhaustive_rejects_bad_ell(fano_system: TripleSystem) -> None:
    with pytest.raises(ValueError, match="ell_out_of_range"):
        exhaustive_sequencer(fano_system, 8)


def test_random_restart_finds_and_records_seed(fano_system: TripleSystem) -> None:
    result = random_restart_sequencer(fano_system, 3, restarts=5, budget_per_restart=10_000, seed=3)
    assert result.status == "found"
    assert is_ell_good(fano_system, result.sequencing, 3)
    assert result.sequencing.meta.seed == 3
    assert result.sequencing.meta.method == "random_restart"
    again = random_restart_sequencer(fano_system, 3, restarts=5, budget_per_restart=10_000, seed=3)
    assert again.sequencing == result.sequencing


def test_random_restart_proves_nonexistence_when_a_tree_completes(fano_system: TripleSystem) -> None:
    result = random_restart_sequencer(fano_system, 4, restarts=3, budget_per_restart=1_000_000, seed=0)
    assert result.status == "no_sequencing_exists"
    assert result.restarts == 1


def test_random_restart_validates_arguments(fano_system: TripleSystem) -> None:
    with pytest.raises(ValueError, match="restarts_and_budget_must_be_positive"):
        random_restart_sequencer(fano_system, 3, restarts=0, budget_per_restart=10, seed=0)
