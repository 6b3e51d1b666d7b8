import logging
from itertools import combinations
from typing import Sequence

import numpy as np

from .designs import Block, Sequencing, TripleSystem, Violation, ensure_permutation, make_block

logger = logging.getLogger(__name__)


def _check_ell(ell: int, v: int) -> None:
    if not 3 <= ell <= v:
        raise ValueError(f"ell_out_of_range: need 3 <= ell <= v={v}, got {ell}")


def verify_ell_good(system: TripleSystem, seq: Sequencing, ell: int) -> Violation | None:
    """None when no block lies inside ell consecutive positions, else the earliest violation.

    A block fits in an ell-window exactly when its positional span (max - min) is at most ell - 1.
    Ties on window start go to the lexicographically smallest block.
    """
    v = system.v
    ensure_permutation(seq.order, v)
    _check_ell(ell, v)
    if not system.blocks:
        return None

    pos = np.empty(v, dtype=np.int64)
    pos[np.asarray(seq.order, dtype=np.int64)] = np.arange(v)
    blocks = np.asarray(system.blocks, dtype=np.int64)
    block_pos = pos[blocks]
    lo = block_pos.min(axis=1)
    hi = block_pos.max(axis=1)
    inside = np.flatnonzero(hi - lo <= ell - 1)
    if inside.size == 0:
        return None

    # 1-based earliest window holding the block.
    starts = np.maximum(hi[inside] - ell + 1, 0) + 1
    best = min(zip(starts.tolist(), (system.blocks[i] for i in inside.tolist())))
    return Violation(kind="window_block", window_start=best[0], window_len=ell, witness=(best[1],))


def is_ell_good(system: TripleSystem, seq: Sequencing, ell: int) -> bool:
    return verify_ell_good(system, seq, ell) is None


def endgame_triples(order: Sequence[int]) -> list[Block]:
    """The ten triples lying inside some 4-window of the final six positions."""
    if len(order) < 6:
        raise ValueError("sequencing_shorter_than_six")
    tail = list(order[-6:])
    triples: set[tuple[int, int, int]] = set()
    for start in range(3):
        window = range(start, start + 4)
        triples.update(combinations(window, 3))
    return [make_block(tail[i], tail[j], tail[k]) for i, j, k in sorted(triples)]


def endgame_blocks(system: TripleSystem, order: Sequence[int]) -> list[Block]:
    """Endgame triples that are blocks; empty for a correct 4-good construction."""
    blocks = system.block_set
    return [triple for triple in endgame_triples(order) if triple in blocks]
