import json
from pathlib import Path

from src.config_loader import Settings, load_settings, resolve_path


def test_missing_settings_file_uses_defaults(tmp_path: Path) -> None:
    assert load_settings(tmp_path / "nope.json") == Settings()
    assert load_settings(None).census_cap == 9


def test_partial_settings_keep_defaults(tmp_path: Path) -> None:
    path = tmp_path / "settings.json"
    path.write_text("\ufeff" + json.dumps({"census_cap": 8, "log_level": "DEBUG"}), encoding="utf-8")

    settings = load_settings(path)

    assert settings.census_cap == 8
    assert settings.log_level == "DEBUG"
    assert settings.exhaustive_budget == 5_000_000
    assert settings.counterexample_dir == "data/counterexamples"


def test_repository_settings_file_loads() -> None:
    path = Path(__file__).resolve().parent.parent / "config" / "settings.json"
    assert load_settings(path) == Settings()


def test_resolve_path_keeps_absolute_paths(tmp_path: Path) -> None:
    root = Path("/srv/run")
    assert resolve_path(root, "data/x") == root / "data" / "x"
    absolute = tmp_path.resolve() / "y"
    assert resolve_path(root, str(absolute)) == absolute
