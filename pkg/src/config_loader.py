import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict


def load_json(path: Path) -> Dict[str, Any]:
    with path.open("r", encoding="utf-8-sig") as fp:
        return json.load(fp)


@dataclass
class Settings:
    log_level: str = "INFO"
    log_dir: str = "logs"
    census_cap: int = 9
    census_batch_size: int = 100_000
    census_workers: int = 1
    exhaustive_budget: int = 5_000_000
    default_seed: int = 0
    counterexample_dir: str = "data/counterexamples"
    batch_workers: int = 1


def load_settings(path: Path | None) -> Settings:
    """Settings from a JSON file; missing file or keys fall back to defaults."""
    if path is None or not path.exists():
        return Settings()
    payload = load_json(path)
    defaults = Settings()
    return Settings(
        log_level=str(payload.get("log_level", defaults.log_level)),
        log_dir=str(payload.get("log_dir", defaults.log_dir)),
        census_cap=int(payload.get("census_cap", defaults.census_cap)),
        census_batch_size=int(payload.get("census_batch_size", defaults.census_batch_size)),
        census_workers=int(payload.get("census_workers", defaults.census_workers)),
        exhaustive_budget=int(payload.get("exhaustive_budget", defaults.exhaustive_budget)),
        default_seed=int(payload.get("default_seed", defaults.default_seed)),
        counterexample_dir=str(payload.get("counterexample_dir", defaults.counterexample_dir)),
        batch_workers=int(payload.get("batch_workers", defaults.batch_workers)),
    )


def resolve_path(root: Path, raw_path: str) -> Path:
    path = Path(raw_path)
    if path.is_absolute():
        return path
    return root / path
