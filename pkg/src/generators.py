import logging
from itertools import combinations

import numpy as np

from .designs import TripleSystem, make_block, sts_block_count

logger = logging.getLogger(__name__)


def fano() -> TripleSystem:
    """Cyclic STS(7): the orbit of {0,1,3} under x -> x+1 mod 7."""
    return TripleSystem.from_triples(7, ((i, (i + 1) % 7, (i + 3) % 7) for i in range(7)), kind="sts")


def bose(n: int) -> TripleSystem:
    """STS(6n+3) from the idempotent commutative quasigroup (x+y)/2 over Z_{2n+1}."""
    if n < 1:
        raise ValueError("bose_needs_n_at_least_1")
    q = 2 * n + 1
    half = n + 1  # inverse of 2 mod q

    def point(x: int, level: int) -> int:
        return x + q * level

    triples = [(point(x, 0), point(x, 1), point(x, 2)) for x in range(q)]
    for x, y in combinations(range(q), 2):
        product = ((x + y) * half) % q
        for level in range(3):
            triples.append((point(x, level), point(y, level), point(product, (level + 1) % 3)))
    return TripleSystem.from_triples(3 * q, triples, kind="sts")


def skolem(n: int) -> TripleSystem:
    """STS(6n+1) from a half-idempotent commutative quasigroup of order 2n plus a point at infinity."""
    if n < 1:
        raise ValueError("skolem_needs_n_at_least_1")
    order = 2 * n
    infinity = 3 * order

    def product(x: int, y: int) -> int:
        s = (x + y) % order
        return s // 2 if s % 2 == 0 else n + s // 2

    def point(x: int, level: int) -> int:
        return x + order * (level % 3)

    triples = [(point(x, 0), point(x, 1), point(x, 2)) for x in range(n)]
    for x in range(n):
        for level in range(3):
            triples.append((infinity, point(x + n, level), point(x, level + 1)))
    for x, y in combinations(range(order), 2):
        for level in range(3):
            triples.append((point(x, level), point(y, level), point(product(x, y), level + 1)))
    return TripleSystem.from_triples(infinity + 1, triples, kind="sts")


def random_psts(v: int, target_blocks: int, seed: int | None) -> TripleSystem:
    """Seeded shuffle-then-greedy packing of triples; stops at target_blocks or when no triple fits."""
    if v < 1:
        raise ValueError("v_must_be_positive")
    target = max(0, int(target_blocks))
    rng = np.random.default_rng(seed)
    candidates = list(combinations(range(v), 3))
    covered = np.zeros((v, v), dtype=bool)
    accepted = []
    for index in rng.permutation(len(candidates)):
        if len(accepted) >= target:
            break
        a, b, c = candidates[int(index)]
        if covered[a, b] or covered[a, c] or covered[b, c]:
            continue
        covered[a, b] = covered[b, a] = True
        covered[a, c] = covered[c, a] = True
        covered[b, c] = covered[c, b] = True
        accepted.append(make_block(a, b, c))

    if len(accepted) < target:
        logger.info(
            "random_psts(v=%d, seed=%s): packed %d of %d requested blocks (pair ceiling %d)",
            v,
            seed,
            len(accepted),
            target,
            sts_block_count(v),
        )
    return TripleSystem.from_triples(v, accepted, kind="psts")


def build(name: str, *params: int) -> TripleSystem:
    """Dispatch by generator name, as used by the command line: fano | bose n | skolem n | random-psts v b seed."""
    key = name.lower().replace("_", "-")
    if key == "fano" and not params:
        return fano()
    if key == "bose" and len(params) == 1:
        return bose(params[0])
    if key == "skolem" and len(params) == 1:
        return skolem(params[0])
    if key == "random-psts" and len(params) == 3:
        return random_psts(params[0], params[1], params[2])
    raise ValueError(f"unknown_generator: {name} {' '.join(str(p) for p in params)}".strip())
