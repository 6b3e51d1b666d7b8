import logging
import time
from dataclasses import dataclass
from itertools import permutations
from typing import Literal

import numpy as np

from .designs import NONE, Sequencing, SequencingMeta, ThirdTable, TripleSystem, require_valid
from .verifier import endgame_blocks, verify_ell_good

logger = logging.getLogger(__name__)

PolicyMode = Literal["lex", "random"]
FourGoodStatus = Literal["found", "insufficient_order"]

WINDOW = 4
PREFIX_LEN = 11  # x_1..x_11 are fixed before the look-ahead set is formed
SWAP_CANDIDATES = 8  # chi is drawn from x_1..x_8
MAX_LOOKAHEAD = 27  # 10 + 9 + 8 prefix pairs at distance 1, 2, 3
MIN_FOUR_GOOD_ORDER = 18  # 2m + 18 with m = 0


@dataclass(frozen=True)
class GreedyPolicy:
    """Candidate scan order for every greedy step: increasing index, or a seeded shuffle."""

    mode: PolicyMode = "lex"
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("lex", "random"):
            raise ValueError(f"unknown_policy_mode: {self.mode}")
        if self.mode == "random" and self.seed is None:
            raise ValueError("random_policy_needs_seed")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def scan_order(self, v: int, rng: np.random.Generator | None = None) -> list[int]:
        if self.mode == "lex":
            return list(range(v))
        return (rng or self.rng()).permutation(v).tolist()

    def meta(self, method: str, ell: int, notes: tuple[tuple[str, str], ...] = ()) -> SequencingMeta:
        seed = self.seed if self.mode == "random" else None
        return SequencingMeta(method=method, ell=ell, seed=seed, policy=self.mode, notes=notes)


def _rows(system: TripleSystem, table: ThirdTable | None) -> list[list[int]]:
    return (table or ThirdTable.build(system)).rows


def greedy_3good(
    system: TripleSystem,
    policy: GreedyPolicy | None = None,
    table: ThirdTable | None = None,
) -> Sequencing:
    """Greedy 3-good sequencing for an STS or partial STS with v > 5.

    x_2, x_3, x_5 form a block, so if the last three points close a block, swapping x_1 and x_v
    repairs the tail without breaking the head.
    """
    policy = policy or GreedyPolicy()
    v = system.v
    if v <= 5:
        raise ValueError(f"greedy_3good_needs_v_above_5: v={v}")
    require_valid(system)

    rng = policy.rng()
    scan = policy.scan_order(v, rng)
    if not system.blocks:
        return Sequencing.of(scan, policy.meta("greedy_3good", 3, notes=(("blockless", "true"),)))

    rows = _rows(system, table)
    if policy.mode == "lex":
        block = system.blocks[0]
    else:
        block = system.blocks[int(rng.integers(len(system.blocks)))]
    b, c, e = block
    a = next(x for x in scan if x not in block)
    d = next(x for x in scan if x not in block and x != a)

    order = [a, b, c, d, e]
    used = [False] * v
    for x in order:
        used[x] = True
    for _ in range(6, v):
        banned = rows[order[-2]][order[-1]]
        x = next((y for y in scan if not used[y] and y != banned), None)
        if x is None:
            raise RuntimeError(f"greedy_3good_stuck at position {len(order) + 1}")
        order.append(x)
        used[x] = True
    order.append(next(y for y in range(v) if not used[y]))

    swapped = rows[order[-3]][order[-2]] == order[-1]
    if swapped:
        order[0], order[-1] = order[-1], order[0]

    seq = Sequencing.of(order, policy.meta("greedy_3good", 3, notes=(("swapped", str(swapped).lower()),)))
    violation = verify_ell_good(system, seq, 3)
    if violation is not None:
        logger.error("greedy_3good produced a bad sequencing %s: %s", list(order), violation.describe())
        raise RuntimeError("greedy_3good_verification_failed")
    return seq


@dataclass(frozen=True)
class PreplacementPlan:
    """Look-ahead points y_1..y_m pinned at 1-based positions 14, 16, ..., 2m + 12."""

    y: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.y)

    @staticmethod
    def position(j: int) -> int:
        return 2 * j + 12

    def positions(self) -> tuple[int, ...]:
        return tuple(self.position(j) for j in range(1, self.m + 1))

    @property
    def end(self) -> int:
        """Last 1-based position of the look-ahead region."""
        return self.position(self.m) if self.y else PREFIX_LEN


@dataclass(frozen=True)
class EndgameState:
    alpha1: int
    alpha2: int
    alpha3: int
    beta1: int
    beta2: int
    beta3: int
    gamma: int
    delta: int
    epsilon: int
    eta: int
    chi: int
    kappa: int


@dataclass
class FourGoodResult:
    status: FourGoodStatus
    sequencing: Sequencing | None = None
    m: int | None = None
    kappa: int | None = None
    plan: PreplacementPlan | None = None
    endgame: EndgameState | None = None
    reason: str = ""
    elapsed_ms: int = 0


def lookahead_plan(prefix: list[int], rows: list[list[int]]) -> PreplacementPlan:
    inside = set(prefix)
    found: set[int] = set()
    for i in range(len(prefix)):
        for j in range(i + 1, min(len(prefix), i + WINDOW)):
            z = rows[prefix[i]][prefix[j]]
            if z != NONE and z not in inside:
                found.add(z)
    return PreplacementPlan(tuple(sorted(found)))


class _Stuck(Exception):
    def __init__(self, position: int, banned: set[int]):
        super().__init__(position)
        self.position = position
        self.banned = banned


class _SlotFiller:
    """Positions filled in any order; a value must break every triple it would close in a 4-window
    with points already fixed on either side."""

    def __init__(self, v: int, rows: list[list[int]], scan: list[int]):
        self.v = v
        self.rows = rows
        self.scan = scan
        self.slots: list[int | None] = [None] * v
        self.used = [False] * v

    def value(self, p: int) -> int:
        x = self.slots[p - 1]
        assert x is not None, f"position {p} is empty"
        return x

    def fix(self, p: int, x: int) -> None:
        self.slots[p - 1] = x
        self.used[x] = True

    def banned(self, p: int) -> set[int]:
        i = p - 1
        lo = max(0, i - WINDOW + 1)
        hi = min(self.v - 1, i + WINDOW - 1)
        known = [q for q in range(lo, hi + 1) if q != i and self.slots[q] is not None]
        out: set[int] = set()
        for index, q in enumerate(known):
            for r in known[index + 1 :]:
                if max(i, q, r) - min(i, q, r) <= WINDOW - 1:
                    z = self.rows[self.slots[q]][self.slots[r]]  # type: ignore[index]
                    if z != NONE:
                        out.add(z)
        return out

    def fill(self, p: int) -> int:
        banned = self.banned(p)
        for x in self.scan:
            if not self.used[x] and x not in banned:
                self.fix(p, x)
                return x
        raise _Stuck(p, banned)

    def unused(self) -> list[int]:
        return [x for x in range(self.v) if not self.used[x]]


def _close_endgame(filler: _SlotFiller) -> EndgameState:
    rows = filler.rows
    v = filler.v
    xa, xb, xc = filler.value(v - 5), filler.value(v - 4), filler.value(v - 3)
    alphas = filler.unused()
    if len(alphas) != 3:
        raise RuntimeError(f"endgame_expected_three_unplaced_points: {alphas}")

    beta1, beta2, beta3 = rows[xa][xb], rows[xa][xc], rows[xb][xc]
    if len({beta1, beta2, beta3}) != 3 or NONE in (beta1, beta2, beta3):
        raise RuntimeError(f"endgame_betas_not_distinct: {beta1} {beta2} {beta3}")

    for alpha1, alpha2, alpha3 in permutations(alphas):
        if alpha2 != beta3 and rows[alpha2][alpha3] != xc:
            break
    else:
        raise RuntimeError(f"endgame_no_alpha_ordering: {alphas}")

    gamma = rows[alpha2][xc]
    delta = rows[alpha2][xb]
    epsilon = rows[alpha3][xc]
    eta = rows[alpha2][alpha3]
    excluded = {xa, xb, xc, beta1, beta2, beta3, gamma, delta, epsilon, eta}
    kappa = next((k for k in range(1, SWAP_CANDIDATES + 1) if filler.value(k) not in excluded), None)
    if kappa is None:
        raise RuntimeError("endgame_no_swap_position")
    chi = filler.value(kappa)

    filler.fix(kappa, alpha1)
    filler.fix(v - 2, chi)
    filler.fix(v - 1, alpha2)
    filler.fix(v, alpha3)
    return EndgameState(
        alpha1=alpha1,
        alpha2=alpha2,
        alpha3=alpha3,
        beta1=beta1,
        beta2=beta2,
        beta3=beta3,
        gamma=gamma,
        delta=delta,
        epsilon=epsilon,
        eta=eta,
        chi=chi,
        kappa=kappa,
    )


def greedy_4good(
    system: TripleSystem,
    policy: GreedyPolicy | None = None,
    table: ThirdTable | None = None,
) -> FourGoodResult:
    """4-good sequencing of an STS by greedy prefix, pinned look-ahead points, greedy middle and a
    swap-based endgame. Needs v >= 2m + 18 where m is the size of the look-ahead set."""
    policy = policy or GreedyPolicy()
    if system.kind != "sts":
        raise ValueError("greedy_4good_requires_sts")
    require_valid(system)
    started = time.perf_counter()
    v = system.v
    if v < MIN_FOUR_GOOD_ORDER:
        return FourGoodResult("insufficient_order", reason=f"v={v} < {MIN_FOUR_GOOD_ORDER}")

    rows = _rows(system, table)
    filler = _SlotFiller(v, rows, policy.scan_order(v))
    plan: PreplacementPlan | None = None
    try:
        for p in range(1, PREFIX_LEN + 1):
            filler.fill(p)

        plan = lookahead_plan([filler.value(p) for p in range(1, PREFIX_LEN + 1)], rows)
        if plan.m > MAX_LOOKAHEAD:
            raise RuntimeError(f"lookahead_set_too_large: m={plan.m}")
        if v < 2 * plan.m + MIN_FOUR_GOOD_ORDER:
            logger.info("greedy_4good: v=%d below 2m+18 with m=%d", v, plan.m)
            return FourGoodResult(
                "insufficient_order",
                m=plan.m,
                plan=plan,
                reason=f"v={v} < 2m+18={2 * plan.m + MIN_FOUR_GOOD_ORDER}",
            )

        for j, y in enumerate(plan.y, start=1):
            filler.fix(plan.position(j), y)
        pinned = set(plan.positions())
        for p in range(PREFIX_LEN + 1, plan.end + 1):
            if p not in pinned:
                filler.fill(p)

        for p in range(plan.end + 1, v - 2):
            filler.fill(p)
    except _Stuck as exc:
        logger.error(
            "greedy_4good stuck at position %d (v=%d, policy=%s, m=%s); banned=%s; slots=%s",
            exc.position,
            v,
            policy,
            plan.m if plan else None,
            sorted(exc.banned),
            filler.slots,
        )
        raise RuntimeError(f"greedy_4good_stuck at position {exc.position}") from exc

    endgame = _close_endgame(filler)
    order = [filler.value(p) for p in range(1, v + 1)]
    notes = (("m", str(plan.m)), ("kappa", str(endgame.kappa)))
    seq = Sequencing.of(order, policy.meta("greedy_4good", 4, notes=notes))

    violation = verify_ell_good(system, seq, 4)
    closing_blocks = endgame_blocks(system, order)
    if violation is not None or closing_blocks:
        logger.error(
            "greedy_4good verification failed (v=%d, policy=%s): violation=%s endgame_blocks=%s plan=%s endgame=%s order=%s",
            v,
            policy,
            violation.describe() if violation else None,
            closing_blocks,
            plan,
            endgame,
            order,
        )
        raise RuntimeError("greedy_4good_verification_failed")

    elapsed_ms = int((time.perf_counter() - started) * 1000)
    logger.debug("greedy_4good v=%d m=%d kappa=%d in %d ms", v, plan.m, endgame.kappa, elapsed_ms)
    return FourGoodResult(
        "found",
        sequencing=seq,
        m=plan.m,
        kappa=endgame.kappa,
        plan=plan,
        endgame=endgame,
        elapsed_ms=elapsed_ms,
    )
