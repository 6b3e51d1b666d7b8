import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Any, Callable, Literal

import numpy as np

from .designs import Block, ThirdTable, TripleSystem, blocks_by_point, require_valid

logger = logging.getLogger(__name__)

CensusMode = Literal["exact", "monte_carlo"]

DEFAULT_CAP = 9
DEFAULT_BATCH_SIZE = 100_000


@dataclass(frozen=True)
class IntersectionCertificate:
    """Blocks {a,b,c} and {c,d,e}: every sequencing opening with a b c d e is 1- and 3-forbidden."""

    first_block: Block
    second_block: Block
    prefix: tuple[int, int, int, int, int]


@dataclass
class CensusReport:
    """Counts of i-forbidden sequencings over a population.

    In exact mode the population is all v! sequencings; in Monte Carlo mode it is the drawn samples
    and the counts are hit counts among them.
    """

    v: int
    ell: int
    mode: CensusMode
    total_permutations: int
    population: int
    per_i_forbidden: list[int]
    total_forbidden: int
    seed: int | None = None
    workers: int = 1
    elapsed_ms: int = 0
    certificate: IntersectionCertificate | None = None

    @property
    def good_count(self) -> int:
        return self.population - self.total_forbidden

    @property
    def union_bound_sum(self) -> int:
        return sum(self.per_i_forbidden)

    @property
    def union_bound_strict(self) -> bool:
        return self.total_forbidden < self.union_bound_sum

    @property
    def per_i_frequency(self) -> list[float]:
        return [count / self.population for count in self.per_i_forbidden]

    @property
    def forbidden_frequency(self) -> float:
        return self.total_forbidden / self.population

    def _stderr(self, p: float) -> float:
        if self.mode == "exact":
            return 0.0
        return math.sqrt(p * (1.0 - p) / self.population)

    @property
    def per_i_stderr(self) -> list[float]:
        return [self._stderr(p) for p in self.per_i_frequency]

    @property
    def forbidden_stderr(self) -> float:
        return self._stderr(self.forbidden_frequency)

    def to_key_values(self) -> dict[str, str]:
        values = {
            "v": str(self.v),
            "ell": str(self.ell),
            "mode": self.mode,
            "total_permutations": str(self.total_permutations),
            "population": str(self.population),
            "per_i_forbidden": ",".join(str(c) for c in self.per_i_forbidden),
            "total_forbidden": str(self.total_forbidden),
            "good_count": str(self.good_count),
            "union_bound_sum": str(self.union_bound_sum),
            "union_bound_strict": str(self.union_bound_strict).lower(),
            "per_i_frequency": ",".join(f"{p:.6f}" for p in self.per_i_frequency),
            "per_i_stderr": ",".join(f"{s:.6f}" for s in self.per_i_stderr),
            "forbidden_frequency": f"{self.forbidden_frequency:.6f}",
            "forbidden_stderr": f"{self.forbidden_stderr:.6f}",
            "seed": str(self.seed),
            "workers": str(self.workers),
        }
        if self.certificate is not None:
            values["certificate_prefix"] = " ".join(str(x) for x in self.certificate.prefix)
        return values

    def render_text(self) -> str:
        lines = [f"census of v={self.v} at ell={self.ell} ({self.mode}, population {self.population})"]
        for i, (count, p, se) in enumerate(zip(self.per_i_forbidden, self.per_i_frequency, self.per_i_stderr), start=1):
            suffix = f" +/- {se:.6f}" if self.mode == "monte_carlo" else ""
            lines.append(f"  forbidden({i}): {count}  ({p:.6f}{suffix})")
        lines.append(f"  forbidden: {self.total_forbidden} <= union bound {self.union_bound_sum}")
        lines.append(f"  good: {self.good_count}")
        if self.certificate is not None:
            cert = self.certificate
            prefix = " ".join(str(x) for x in cert.prefix)
            lines.append(f"  overlap certificate: {cert.first_block} {cert.second_block} -> prefix {prefix}")
        lines.append("")
        lines.extend(f"{key}={value}" for key, value in self.to_key_values().items())
        return "\n".join(lines) + "\n"


def _window_hits(table: np.ndarray, perms: np.ndarray, ell: int) -> np.ndarray:
    """Boolean (n, v - ell + 1): window i of each row contains a block."""
    n, v = perms.shape
    windows = v - ell + 1
    hits = np.zeros((n, windows), dtype=bool)
    offsets = list(combinations(range(ell), 3))
    for i in range(windows):
        column = hits[:, i]
        for a, b, c in offsets:
            column |= table[perms[:, i + a], perms[:, i + b]] == perms[:, i + c]
    return hits


def _exact_chunk(table: np.ndarray, v: int, ell: int, first: int) -> tuple[list[int], int]:
    rest = [x for x in range(v) if x != first]
    tails = np.array(list(permutations(rest)), dtype=np.int64).reshape(-1, v - 1)
    perms = np.hstack([np.full((len(tails), 1), first, dtype=np.int64), tails])
    hits = _window_hits(table, perms, ell)
    return [int(c) for c in hits.sum(axis=0)], int(hits.any(axis=1).sum())


def _sample_chunk(
    table: np.ndarray,
    v: int,
    ell: int,
    samples: int,
    seed_seq: np.random.SeedSequence,
    batch_size: int,
) -> tuple[list[int], int]:
    rng = np.random.default_rng(seed_seq)
    per_i = np.zeros(v - ell + 1, dtype=np.int64)
    forbidden = 0
    base = np.arange(v, dtype=np.int64)
    remaining = samples
    while remaining > 0:
        n = min(batch_size, remaining)
        perms = rng.permuted(np.tile(base, (n, 1)), axis=1)
        hits = _window_hits(table, perms, ell)
        per_i += hits.sum(axis=0)
        forbidden += int(hits.any(axis=1).sum())
        remaining -= n
    return [int(c) for c in per_i], forbidden


def _map_chunks(fn: Callable[..., Any], jobs: list[tuple[Any, ...]], workers: int) -> list[Any]:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _merge(results: list[tuple[list[int], int]], windows: int) -> tuple[list[int], int]:
    per_i = [0] * windows
    forbidden = 0
    for counts, hits in results:
        per_i = [a + b for a, b in zip(per_i, counts)]
        forbidden += hits
    return per_i, forbidden


def _check_ell(ell: int, v: int) -> None:
    if not 3 <= ell <= v:
        raise ValueError(f"ell_out_of_range: need 3 <= ell <= v={v}, got {ell}")


def intersection_certificate(system: TripleSystem) -> IntersectionCertificate | None:
    for c, through in enumerate(blocks_by_point(system)):
        if len(through) < 2:
            continue
        first, second = through[0], through[1]
        a, b = (p for p in first if p != c)
        d, e = (p for p in second if p != c)
        return IntersectionCertificate(first, second, (a, b, c, d, e))
    return None


def census_exact(
    system: TripleSystem,
    ell: int = 3,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
    table: ThirdTable | None = None,
) -> CensusReport:
    """Count i-forbidden sequencings over all v! permutations, partitioned by first point."""
    require_valid(system)
    v = system.v
    _check_ell(ell, v)
    if v > cap:
        raise ValueError(f"census_cap_exceeded: v={v} > cap={cap}")

    started = time.perf_counter()
    matrix = (table or ThirdTable.build(system)).table
    jobs = [(matrix, v, ell, first) for first in range(v)]
    per_i, forbidden = _merge(_map_chunks(_exact_chunk, jobs, workers), v - ell + 1)
    report = CensusReport(
        v=v,
        ell=ell,
        mode="exact",
        total_permutations=math.factorial(v),
        population=math.factorial(v),
        per_i_forbidden=per_i,
        total_forbidden=forbidden,
        workers=workers,
        elapsed_ms=int((time.perf_counter() - started) * 1000),
        certificate=intersection_certificate(system) if ell == 3 else None,
    )
    logger.info("exact census v=%d ell=%d: %d forbidden of %d", v, ell, forbidden, report.population)
    return report


def census_sample(
    system: TripleSystem,
    ell: int,
    samples: int,
    seed: int,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
    table: ThirdTable | None = None,
) -> CensusReport:
    """Estimate i-forbidden frequencies from uniform seeded permutations.

    Each worker draws from its own stream spawned from the seed, so results depend on
    (seed, workers) only.
    """
    require_valid(system)
    v = system.v
    _check_ell(ell, v)
    if samples < 1:
        raise ValueError("samples_must_be_positive")
    workers = max(1, workers)

    started = time.perf_counter()
    matrix = (table or ThirdTable.build(system)).table
    streams = np.random.SeedSequence(seed).spawn(workers)
    shares = [samples // workers + (1 if k < samples % workers else 0) for k in range(workers)]
    jobs = [(matrix, v, ell, share, stream, batch_size) for share, stream in zip(shares, streams) if share > 0]
    per_i, forbidden = _merge(_map_chunks(_sample_chunk, jobs, workers), v - ell + 1)
    report = CensusReport(
        v=v,
        ell=ell,
        mode="monte_carlo",
        total_permutations=math.factorial(v),
        population=samples,
        per_i_forbidden=per_i,
        total_forbidden=forbidden,
        seed=seed,
        workers=workers,
        elapsed_ms=int((time.perf_counter() - started) * 1000),
        certificate=intersection_certificate(system) if ell == 3 else None,
    )
    logger.info(
        "sampled census v=%d ell=%d: forbidden frequency %.6f +/- %.6f over %d samples",
        v,
        ell,
        report.forbidden_frequency,
        report.forbidden_stderr,
        samples,
    )
    return report
