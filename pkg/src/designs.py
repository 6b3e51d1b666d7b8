import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Literal, NamedTuple, Sequence

import numpy as np

logger = logging.getLogger(__name__)

Point = int
DesignKind = Literal["sts", "psts"]
FaultKind = Literal[
    "point_out_of_range",
    "malformed_block",
    "duplicate_block",
    "pair_repeated",
    "pair_uncovered",
    "block_count",
    "order_inadmissible",
]
ViolationKind = Literal["window_block", "window_partition"]

NONE = -1
DESIGN_KINDS: tuple[str, ...] = ("sts", "psts")


class Block(NamedTuple):
    """A 3-subset of points stored as a < b < c."""

    a: Point
    b: Point
    c: Point

    def __str__(self) -> str:
        return f"{{{self.a},{self.b},{self.c}}}"


def make_block(x: Point, y: Point, z: Point) -> Block:
    a, b, c = sorted((int(x), int(y), int(z)))
    return Block(a, b, c)


@dataclass(frozen=True)
class TripleSystem:
    v: int
    blocks: tuple[Block, ...]
    kind: DesignKind = "psts"

    @classmethod
    def from_triples(cls, v: int, triples: Iterable[Sequence[int]], kind: DesignKind = "psts") -> "TripleSystem":
        blocks = tuple(sorted(make_block(*triple) for triple in triples))
        return cls(v=int(v), blocks=blocks, kind=kind)

    @property
    def points(self) -> range:
        return range(self.v)

    @property
    def block_set(self) -> frozenset[Block]:
        return frozenset(self.blocks)

    def with_kind(self, kind: DesignKind) -> "TripleSystem":
        return TripleSystem(v=self.v, blocks=self.blocks, kind=kind)

    def without_block(self, block: Block) -> "TripleSystem":
        remaining = list(self.blocks)
        remaining.remove(block)
        return TripleSystem(v=self.v, blocks=tuple(remaining), kind=self.kind)


@dataclass(frozen=True)
class Fault:
    kind: FaultKind
    detail: str
    pair: tuple[Point, Point] | None = None
    block: Block | None = None


@dataclass(frozen=True)
class SequencingMeta:
    method: str = "manual"
    ell: int | None = None
    seed: int | None = None
    policy: str | None = None
    notes: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "notes", tuple(sorted((str(k), str(v)) for k, v in self.notes)))


@dataclass(frozen=True)
class Sequencing:
    order: tuple[Point, ...]
    meta: SequencingMeta = field(default_factory=SequencingMeta)

    @classmethod
    def of(cls, order: Iterable[int], meta: SequencingMeta | None = None) -> "Sequencing":
        return cls(order=tuple(int(x) for x in order), meta=meta or SequencingMeta())

    def __len__(self) -> int:
        return len(self.order)

    def positions(self) -> list[int]:
        """0-based position of each point."""
        pos = [NONE] * len(self.order)
        for index, point in enumerate(self.order):
            pos[point] = index
        return pos


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    window_start: int  # 1-based
    window_len: int
    witness: tuple[Block, ...]

    def describe(self) -> str:
        blocks = " ".join(str(block) for block in self.witness)
        end = self.window_start + self.window_len - 1
        return f"{self.kind}: window {self.window_start}..{end} (len {self.window_len}) witness {blocks}"


def sts_block_count(v: int) -> int:
    return v * (v - 1) // 6


def is_admissible_sts_order(v: int) -> bool:
    return v % 6 in (1, 3)


def validate(system: TripleSystem) -> list[Fault]:
    """Return every structural fault of the system for its declared kind; empty means OK."""
    faults: list[Fault] = []
    v = system.v
    pair_blocks: dict[tuple[int, int], list[Block]] = {}

    for block, count in sorted(Counter(system.blocks).items()):
        if count > 1:
            faults.append(Fault("duplicate_block", f"block {block} listed {count} times", block=block))

    for block in system.blocks:
        if not all(0 <= p < v for p in block):
            faults.append(Fault("point_out_of_range", f"block {block} has a point outside [0, {v})", block=block))
            continue
        if not block.a < block.b < block.c:
            faults.append(Fault("malformed_block", f"block {block} is not strictly increasing", block=block))
            continue
        for pair in combinations(block, 2):
            pair_blocks.setdefault(pair, []).append(block)

    for pair, owners in sorted(pair_blocks.items()):
        if len(owners) > 1:
            listed = ", ".join(str(b) for b in owners)
            faults.append(Fault("pair_repeated", f"pair {{{pair[0]},{pair[1]}}} occurs in {listed}", pair=pair))

    if system.kind == "sts":
        if not is_admissible_sts_order(v):
            faults.append(Fault("order_inadmissible", f"v={v} is not 1 or 3 mod 6"))
        expected = sts_block_count(v)
        if len(system.blocks) != expected:
            faults.append(Fault("block_count", f"{len(system.blocks)} blocks, STS({v}) needs {expected}"))
        for pair in combinations(range(v), 2):
            if pair not in pair_blocks:
                faults.append(Fault("pair_uncovered", f"pair {{{pair[0]},{pair[1]}}} is in no block", pair=pair))
    return faults


def require_valid(system: TripleSystem) -> None:
    faults = validate(system)
    if faults:
        logger.debug("Rejected system with %d fault(s): %s", len(faults), faults[0].detail)
        raise ValueError(f"invalid_system: {faults[0].detail}")


class ThirdTable:
    """Dense v x v lookup: third(x, y) = z iff {x, y, z} is a block, NONE otherwise."""

    def __init__(self, v: int, table: np.ndarray):
        self.v = v
        self.table = table
        self.table.setflags(write=False)
        # Nested lists index faster than numpy scalars in pure-Python search loops.
        self.rows: list[list[int]] = table.tolist()

    @classmethod
    def build(cls, system: TripleSystem) -> "ThirdTable":
        v = system.v
        table = np.full((v, v), NONE, dtype=np.int32)
        for block in system.blocks:
            for x, y, z in ((block.a, block.b, block.c), (block.a, block.c, block.b), (block.b, block.c, block.a)):
                if not (0 <= x < v and 0 <= y < v and 0 <= z < v):
                    raise ValueError(f"point_out_of_range: {block}")
                if table[x, y] != NONE:
                    raise ValueError(f"pair_repeated: {{{x},{y}}} in {block} and another block")
                table[x, y] = z
                table[y, x] = z
        return cls(v, table)

    def third(self, x: Point, y: Point) -> Point | None:
        z = self.rows[x][y]
        return None if z == NONE else z

    def is_block(self, x: Point, y: Point, z: Point) -> bool:
        return x != y and self.rows[x][y] == z

    def none_count(self) -> int:
        """Off-diagonal ordered pairs with no block."""
        return int(np.count_nonzero(self.table == NONE)) - self.v


def build_third_table(system: TripleSystem) -> ThirdTable:
    return ThirdTable.build(system)


def blocks_by_point(system: TripleSystem) -> list[list[Block]]:
    index: list[list[Block]] = [[] for _ in range(system.v)]
    for block in system.blocks:
        for point in block:
            index[point].append(block)
    return index


def ensure_permutation(order: Sequence[int], v: int) -> None:
    if len(order) != v or sorted(order) != list(range(v)):
        raise ValueError(f"not_a_permutation: expected the points 0..{v - 1} exactly once")
