import logging
import sys
from pathlib import Path

from src.cli import CliContext, build_parser, dispatch
from src.config_loader import load_settings, resolve_path


def setup_logging(level: str, log_dir: Path | None = None) -> None:
    handlers: list[logging.Handler] = []
    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "app.log", encoding="utf-8"))
    handlers.append(logging.StreamHandler(sys.stderr))

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        force=True,
        handlers=handlers,
    )


def _runtime_root_dir() -> Path:
    return Path(__file__).resolve().parent


def main(argv: list[str] | None = None) -> int:
    runtime_root = _runtime_root_dir()
    args = build_parser().parse_args(argv)

    settings_path = Path(args.settings) if args.settings else runtime_root / "config" / "settings.json"
    settings = load_settings(settings_path)
    setup_logging(args.log_level or settings.log_level, resolve_path(runtime_root, settings.log_dir))
    logging.getLogger(__name__).debug("Settings loaded from %s: %s", settings_path, settings)

    outcome = dispatch(args, CliContext(settings=settings, root=runtime_root))
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
