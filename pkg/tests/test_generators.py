import pytest

from src.designs import ThirdTable, sts_block_count, validate
from src.generators import bose, build, fano, random_psts, skolem


def test_fano_is_an_sts() -> None:
    system = fano()
    assert validate(system) == []
    assert len(system.blocks) == 7
    assert ThirdTable.build(system).none_count() == 0


@pytest.mark.parametrize("n", range(1, 17))
def test_bose_builds_sts_of_order_6n_plus_3(n: int) -> None:
    system = bose(n)
    assert system.v == 6 * n + 3
    assert len(system.blocks) == sts_block_count(system.v)
    assert validate(system) == []


@pytest.mark.parametrize("n", range(1, 17))
def test_skolem_builds_sts_of_order_6n_plus_1(n: int) -> None:
    system = skolem(n)
    assert system.v == 6 * n + 1
    assert len(system.blocks) == sts_block_count(system.v)
    assert validate(system) == []


def test_orders_above_71() -> None:
    assert bose(12).v == 75
    assert skolem(12).v == 73


def test_constructions_reject_non_positive_n() -> None:
    with pytest.raises(ValueError):
        bose(0)
    with pytest.raises(ValueError):
        skolem(0)


def test_random_psts_without_blocks() -> None:
    system = random_psts(4, 0, 3)
    assert system.v == 4
    assert system.blocks == ()
    assert system.kind == "psts"


@pytest.mark.parametrize("seed", range(100))
def test_random_psts_is_always_a_valid_packing(seed: int) -> None:
    system = random_psts(7, 7, seed)
    assert validate(system) == []
    assert len(system.blocks) <= 7


def test_random_psts_respects_pair_ceiling() -> None:
    for seed in range(10):
        assert len(random_psts(9, 100, seed).blocks) <= 12


def test_random_psts_is_reproducible() -> None:
    assert random_psts(15, 20, 42) == random_psts(15, 20, 42)


def test_build_dispatches_by_name() -> None:
    assert build("fano") == fano()
    assert build("bose", 2) == bose(2)
    assert build("skolem", 1) == skolem(1)
    assert build("random-psts", 10, 5, 1) == random_psts(10, 5, 1)
    with pytest.raises(ValueError, match="unknown_generator"):
        build("bose")
