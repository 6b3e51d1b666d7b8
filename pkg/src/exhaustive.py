import logging
import time
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .designs import Sequencing, SequencingMeta, ThirdTable, TripleSystem, require_valid
from .verifier import verify_ell_good

logger = logging.getLogger(__name__)

SearchStatus = Literal["found", "no_sequencing_exists", "budget_exhausted"]


@dataclass
class SearchResult:
    status: SearchStatus
    sequencing: Sequencing | None = None
    nodes: int = 0
    elapsed_ms: int = 0
    restarts: int = 1


class _BudgetExhausted(Exception):
    pass


class _PrunedSearch:
    """Left-to-right placement; a branch dies as soon as a block fits in the last ell positions.

    With use_reversal only sequencings with x_1 < x_v are explored. A sequencing is ell-good iff its
    reversal is, and the lexicographically first good one always has x_1 < x_v, so the answer and
    the nonexistence proof are unchanged while the search space halves.
    """

    def __init__(self, rows: list[list[int]], v: int, ell: int, scan: list[int], budget: int | None, use_reversal: bool):
        self.rows = rows
        self.v = v
        self.ell = ell
        self.scan = scan
        self.budget = budget
        self.use_reversal = use_reversal
        self.order: list[int] = []
        self.pos = [-1] * v
        self.nodes = 0

    def _closes_block(self, x: int) -> bool:
        p = len(self.order)
        lo = max(0, p - self.ell + 1)
        row = self.rows[x]
        for q in range(lo, p):
            z = row[self.order[q]]
            if z >= 0 and self.pos[z] >= lo:
                return True
        return False

    def _reversal_dead(self, x: int) -> bool:
        # Some unplaced point must remain above x_1 to serve as x_v.
        p = len(self.order)
        if p == 0:
            return False
        first = self.order[0]
        if p == self.v - 1:
            return x < first
        return not any(self.pos[y] < 0 and y != x for y in range(first + 1, self.v))

    def run(self) -> bool:
        if len(self.order) == self.v:
            return True
        for x in self.scan:
            if self.pos[x] >= 0 or self._closes_block(x):
                continue
            if self.use_reversal and self._reversal_dead(x):
                continue
            self.nodes += 1
            if self.budget is not None and self.nodes > self.budget:
                raise _BudgetExhausted()
            self.pos[x] = len(self.order)
            self.order.append(x)
            if self.run():
                return True
            self.order.pop()
            self.pos[x] = -1
        return False


def _search(
    system: TripleSystem,
    ell: int,
    budget: int | None,
    scan: list[int],
    use_reversal: bool,
    table: ThirdTable | None,
) -> tuple[list[int] | None, int, bool]:
    rows = (table or ThirdTable.build(system)).rows
    search = _PrunedSearch(rows, system.v, ell, scan, budget, use_reversal)
    try:
        found = search.run()
    except _BudgetExhausted:
        return None, search.nodes - 1, False
    return (list(search.order) if found else None), search.nodes, True


def exhaustive_sequencer(
    system: TripleSystem,
    ell: int,
    budget: int | None = None,
    table: ThirdTable | None = None,
) -> SearchResult:
    """Lexicographically first ell-good sequencing, a proof that none exists, or budget exhaustion."""
    require_valid(system)
    v = system.v
    if not 3 <= ell <= v:
        raise ValueError(f"ell_out_of_range: need 3 <= ell <= v={v}, got {ell}")

    started = time.perf_counter()
    order, nodes, complete = _search(system, ell, budget, list(range(v)), use_reversal=True, table=table)
    elapsed_ms = int((time.perf_counter() - started) * 1000)

    if order is not None:
        meta = SequencingMeta(method="exhaustive", ell=ell, notes=(("nodes", str(nodes)),))
        seq = Sequencing.of(order, meta)
        if verify_ell_good(system, seq, ell) is not None:
            raise RuntimeError("exhaustive_search_returned_bad_sequencing")
        logger.info("exhaustive v=%d ell=%d: found after %d nodes (%d ms)", v, ell, nodes, elapsed_ms)
        return SearchResult("found", seq, nodes=nodes, elapsed_ms=elapsed_ms)
    if complete:
        logger.info("exhaustive v=%d ell=%d: no sequencing exists (%d nodes)", v, ell, nodes)
        return SearchResult("no_sequencing_exists", nodes=nodes, elapsed_ms=elapsed_ms)
    logger.warning("exhaustive v=%d ell=%d: budget of %s nodes exhausted", v, ell, budget)
    return SearchResult("budget_exhausted", nodes=nodes, elapsed_ms=elapsed_ms)


def random_restart_sequencer(
    system: TripleSystem,
    ell: int,
    restarts: int,
    budget_per_restart: int,
    seed: int,
    table: ThirdTable | None = None,
) -> SearchResult:
    """Pruned search under a fresh seeded value order per restart; stops at the first hit.

    A restart that finishes its whole tree without a hit proves nonexistence like the plain search.
    """
    require_valid(system)
    v = system.v
    if not 3 <= ell <= v:
        raise ValueError(f"ell_out_of_range: need 3 <= ell <= v={v}, got {ell}")
    if restarts < 1 or budget_per_restart < 1:
        raise ValueError("restarts_and_budget_must_be_positive")

    table = table or ThirdTable.build(system)
    started = time.perf_counter()
    total_nodes = 0
    streams = np.random.SeedSequence(seed).spawn(restarts)
    for attempt, stream in enumerate(streams, start=1):
        scan = np.random.default_rng(stream).permutation(v).tolist()
        order, nodes, complete = _search(system, ell, budget_per_restart, scan, use_reversal=False, table=table)
        total_nodes += nodes
        elapsed_ms = int((time.perf_counter() - started) * 1000)
        if order is not None:
            notes = (("nodes", str(total_nodes)), ("restart", str(attempt)))
            seq = Sequencing.of(order, SequencingMeta(method="random_restart", ell=ell, seed=seed, notes=notes))
            if verify_ell_good(system, seq, ell) is not None:
                raise RuntimeError("random_restart_search_returned_bad_sequencing")
            return SearchResult("found", seq, nodes=total_nodes, elapsed_ms=elapsed_ms, restarts=attempt)
        if complete:
            return SearchResult("no_sequencing_exists", nodes=total_nodes, elapsed_ms=elapsed_ms, restarts=attempt)

    logger.warning("random restarts v=%d ell=%d: %d restarts exhausted", v, ell, restarts)
    return SearchResult(
        "budget_exhausted",
        nodes=total_nodes,
        elapsed_ms=int((time.perf_counter() - started) * 1000),
        restarts=restarts,
    )
