import csv
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import List

from .design_io import store_design, store_sequencing
from .designs import Sequencing, TripleSystem
from .semiseq import TheoremCheck

SUMMARY_COLUMNS = ("instance", "v", "method", "ell", "outcome", "wall_time_ms", "seed")


@dataclass
class CounterexampleRecord:
    timestamp: str
    u: int
    w: int
    design_text: str
    sequencing_text: str
    violation: dict[str, object] = field(default_factory=dict)


@dataclass
class SummaryRow:
    instance: str
    v: int | str = ""
    method: str = ""
    ell: int | str = ""
    outcome: str = ""
    wall_time_ms: int = 0
    seed: int | str = ""


class Storage:
    def __init__(self, counterexample_dir: Path):
        self.logger = logging.getLogger(__name__)
        self.counterexample_dir = counterexample_dir
        self.counterexample_dir.mkdir(parents=True, exist_ok=True)

    def save_counterexample(self, system: TripleSystem, seq: Sequencing, check: TheoremCheck) -> Path:
        violation = check.counterexample
        record = CounterexampleRecord(
            timestamp=datetime.now().isoformat(timespec="seconds"),
            u=check.u,
            w=check.w,
            design_text=store_design(system),
            sequencing_text=store_sequencing(seq),
            violation={
                "kind": violation.kind,
                "window_start": violation.window_start,
                "window_len": violation.window_len,
                "witness": [list(block) for block in violation.witness],
            }
            if violation is not None
            else {},
        )
        stamp = datetime.now().strftime("%Y%m%d-%H%M%S-%f")
        path = self.counterexample_dir / f"counterexample-v{system.v}-u{check.u}-{stamp}.json"
        with path.open("w", encoding="utf-8") as fp:
            json.dump(asdict(record), fp, ensure_ascii=False, indent=2)
        self.logger.warning("Counterexample for u=%d saved to %s", check.u, path)
        return path

    def load_counterexamples(self) -> List[CounterexampleRecord]:
        records = []
        for path in sorted(self.counterexample_dir.glob("counterexample-*.json")):
            with path.open("r", encoding="utf-8-sig") as fp:
                payload = json.load(fp)
            records.append(self._to_record(payload))
        return records

    @staticmethod
    def _to_record(payload: dict) -> CounterexampleRecord:
        raw_violation = payload.get("violation", {})
        return CounterexampleRecord(
            timestamp=str(payload.get("timestamp", "")),
            u=int(payload.get("u", 0)),
            w=int(payload.get("w", 0)),
            design_text=str(payload.get("design_text", "")),
            sequencing_text=str(payload.get("sequencing_text", "")),
            violation=dict(raw_violation) if isinstance(raw_violation, dict) else {},
        )


def write_summary(path: Path, rows: List[SummaryRow]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, delimiter="\t", lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            values = asdict(row)
            writer.writerow([values[column] for column in SUMMARY_COLUMNS])


def read_summary(path: Path) -> List[dict[str, str]]:
    with path.open("r", encoding="utf-8", newline="") as fp:
        return list(csv.DictReader(fp, delimiter="\t"))
