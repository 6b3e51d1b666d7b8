import logging
from dataclasses import dataclass, field
from typing import Sequence

from .designs import Block, Sequencing, TripleSystem, Violation, blocks_by_point, ensure_permutation
from .verifier import verify_ell_good

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionQuery:
    window: tuple[int, ...]

    def __post_init__(self) -> None:
        t = len(self.window)
        if t < 3 or t % 3 != 0:
            raise ValueError(f"window_length_not_multiple_of_3: t={t}")
        if len(set(self.window)) != t:
            raise ValueError("window_points_not_distinct")

    @property
    def t(self) -> int:
        return len(self.window)


class WindowPartitioner:
    """Exact decision whether a window of points splits into disjoint blocks of the system."""

    def __init__(self, system: TripleSystem):
        self.system = system
        self.index = blocks_by_point(system)

    def partition(self, points: Sequence[int]) -> list[Block] | None:
        return self._solve(frozenset(points), [])

    def _solve(self, remaining: frozenset[int], chosen: list[Block]) -> list[Block] | None:
        if not remaining:
            return sorted(chosen)
        pivot = min(remaining)
        for block in self.index[pivot]:
            if remaining.issuperset(block):
                found = self._solve(remaining.difference(block), chosen + [block])
                if found is not None:
                    return found
        return None


def window_partitionable(system: TripleSystem, query: PartitionQuery) -> list[Block] | None:
    """Witness list of t/3 disjoint blocks covering the window exactly, or None."""
    return WindowPartitioner(system).partition(query.window)


def is_w_semi(system: TripleSystem, seq: Sequencing, w: int) -> Violation | None:
    """None when no t consecutive points (t = 3, 6, ..., <= w) split into t/3 blocks."""
    v = system.v
    ensure_permutation(seq.order, v)
    if not 3 <= w < v:
        raise ValueError(f"w_out_of_range: need 3 <= w < v={v}, got {w}")

    partitioner = WindowPartitioner(system)
    order = seq.order
    for t in range(3, w + 1, 3):
        for start in range(v - t + 1):
            witness = partitioner.partition(order[start : start + t])
            if witness is not None:
                return Violation(kind="window_partition", window_start=start + 1, window_len=t, witness=tuple(witness))
    return None


@dataclass
class TheoremCheck:
    """Outcome of checking that a (2u+1)-good sequencing is 3u-semi-sequenceable."""

    u: int
    w: int
    passed: bool
    counterexample: Violation | None = None
    order: tuple[int, ...] = field(default_factory=tuple)


def check_theorem_2u1(system: TripleSystem, seq: Sequencing, u: int) -> TheoremCheck:
    if u < 1:
        raise ValueError("u_must_be_positive")
    ell = 2 * u + 1
    if ell > system.v:
        raise ValueError(f"ell_out_of_range: 2u+1={ell} exceeds v={system.v}")
    if verify_ell_good(system, seq, ell) is not None:
        raise ValueError(f"precondition_failed: sequencing is not {ell}-good")

    # Windows of all v points are outside the w < v range of the semi check.
    w = min(3 * u, system.v - 1)
    violation = is_w_semi(system, seq, w)
    if violation is not None:
        logger.error(
            "Counterexample: %d-good sequencing %s is not %d-semi: %s", ell, list(seq.order), w, violation.describe()
        )
    return TheoremCheck(u=u, w=w, passed=violation is None, counterexample=violation, order=seq.order)
