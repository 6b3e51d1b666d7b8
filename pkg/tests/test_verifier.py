import numpy as np
import pytest

from src.designs import Block, Sequencing, TripleSystem, Violation
from src.generators import bose, random_psts
from src.verifier import endgame_blocks, endgame_triples, is_ell_good, verify_ell_good

IDENTITY7 = Sequencing.of(range(7))


def _naive_verify(system: TripleSystem, order: list[int], ell: int) -> Violation | None:
    blocks = sorted(system.blocks)
    for start in range(len(order) - ell + 1):
        window = set(order[start : start + ell])
        inside = [block for block in blocks if window.issuperset(block)]
        if inside:
            return Violation(kind="window_block", window_start=start + 1, window_len=ell, witness=(inside[0],))
    return None


def test_fano_identity_is_3_good(fano_system: TripleSystem) -> None:
    assert verify_ell_good(fano_system, IDENTITY7, 3) is None


def test_fano_identity_is_not_4_good(fano_system: TripleSystem) -> None:
    violation = verify_ell_good(fano_system, IDENTITY7, 4)
    assert violation is not None
    assert violation.window_start == 1
    assert violation.window_len == 4
    assert violation.witness == (Block(0, 1, 3),)
    assert "{0,1,3}" in violation.describe()


def test_single_block_fills_the_only_window() -> None:
    system = TripleSystem.from_triples(3, [(0, 1, 2)], kind="sts")
    violation = verify_ell_good(system, Sequencing.of([2, 0, 1]), 3)
    assert violation is not None
    assert violation.window_start == 1


def test_verifier_rejects_bad_input(fano_system: TripleSystem) -> None:
    with pytest.raises(ValueError, match="ell_out_of_range"):
        verify_ell_good(fano_system, IDENTITY7, 2)
    with pytest.raises(ValueError, match="ell_out_of_range"):
        verify_ell_good(fano_system, IDENTITY7, 8)
    with pytest.raises(ValueError, match="not_a_permutation"):
        verify_ell_good(fano_system, Sequencing.of([0, 1, 2, 3, 4, 5, 5]), 3)


def test_blockless_system_is_always_good() -> None:
    system = TripleSystem(v=6, blocks=())
    assert is_ell_good(system, Sequencing.of(range(6)), 6)


def test_verifier_matches_window_scan_on_random_instances() -> None:
    rng = np.random.default_rng(2024)
    for case in range(1000):
        v = int(rng.integers(3, 16))
        system = random_psts(v, int(rng.integers(0, v * (v - 1) // 6 + 1)), case)
        order = rng.permutation(v).tolist()
        ell = int(rng.integers(3, v + 1))
        assert verify_ell_good(system, Sequencing.of(order), ell) == _naive_verify(system, order, ell)


def test_goodness_is_monotone_in_ell() -> None:
    system = bose(1)
    rng = np.random.default_rng(5)
    for _ in range(50):
        seq = Sequencing.of(rng.permutation(9).tolist())
        results = [is_ell_good(system, seq, ell) for ell in range(3, 10)]
        # once bad, stays bad for longer windows
        assert results == sorted(results, reverse=True)


def test_endgame_triples_cover_last_six_positions() -> None:
    order = list(range(10))
    triples = endgame_triples(order)
    assert len(triples) == 10
    assert Block(4, 5, 6) in triples
    assert Block(6, 8, 9) in triples
    assert Block(4, 5, 8) not in triples
    with pytest.raises(ValueError):
        endgame_triples([0, 1, 2, 3, 4])


def test_endgame_blocks_finds_closing_block(fano_system: TripleSystem) -> None:
    # last six positions of the identity hold 1..6
    assert endgame_blocks(fano_system, list(range(7))) == [Block(1, 2, 4), Block(2, 3, 5), Block(3, 4, 6)]
