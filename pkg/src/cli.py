import argparse
import logging
import shlex
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .census import census_exact, census_sample
from .config_loader import Settings, resolve_path
from .design_io import (
    DESIGN_GRAMMAR,
    SEQUENCING_GRAMMAR,
    FormatError,
    read_design,
    read_sequencing,
    store_design,
    store_sequencing,
    write_design,
)
from .designs import Sequencing, TripleSystem, validate
from .exhaustive import SearchResult, exhaustive_sequencer, random_restart_sequencer
from .generators import build as build_design
from .greedy import GreedyPolicy, greedy_3good, greedy_4good
from .semiseq import check_theorem_2u1, is_w_semi
from .storage import Storage, SummaryRow, write_summary
from .verifier import verify_ell_good

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_NONEXISTENT = 2
EXIT_BUDGET = 3
EXIT_INSUFFICIENT_ORDER = 4
EXIT_INPUT_ERROR = 5

_STATUS_EXIT = {
    "found": EXIT_OK,
    "no_sequencing_exists": EXIT_NONEXISTENT,
    "budget_exhausted": EXIT_BUDGET,
    "insufficient_order": EXIT_INSUFFICIENT_ORDER,
}

_EPILOG = f"""formats:
  {DESIGN_GRAMMAR}
  {SEQUENCING_GRAMMAR}

exit codes:
  0 success / GOOD, 1 violation or theorem counterexample, 2 no sequencing exists,
  3 search budget exhausted, 4 order too small for the 4-good construction, 5 input error
"""


class InputError(Exception):
    pass


@dataclass
class CliContext:
    settings: Settings
    root: Path


@dataclass
class CommandOutcome:
    exit_code: int
    instance: str = ""
    v: int | str = ""
    method: str = ""
    ell: int | str = ""
    outcome: str = ""
    seed: int | str = ""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sts-seq",
        description="Construct Steiner triple systems, find and verify l-good sequencings, count forbidden sequencings.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="Override log_level from settings.")
    parser.add_argument("--settings", default=None, help="Path to settings JSON (default: config/settings.json).")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a design.", epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    gen.add_argument("generator", choices=["fano", "bose", "skolem", "random-psts"])
    gen.add_argument("params", nargs="*", type=int, help="bose/skolem: n; random-psts: v b seed")
    gen.add_argument("--out", default=None, help="Design file to write (default: stdout).")

    seq = sub.add_parser("seq", help="Find a sequencing.", epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    seq.add_argument("design")
    seq.add_argument("--ell", type=int, default=3)
    seq.add_argument("--method", choices=["greedy", "exhaustive", "random-restart"], default="greedy")
    seq.add_argument("--policy", choices=["lex", "random"], default="lex")
    seq.add_argument("--seed", type=int, default=None)
    seq.add_argument("--budget", type=int, default=None, help="Node limit for exhaustive search.")
    seq.add_argument("--restarts", type=int, default=20, help="Restarts for random-restart search.")
    seq.add_argument("--out", default=None, help="Sequencing file to write (default: stdout).")

    verify = sub.add_parser("verify", help="Check a sequencing.", epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    verify.add_argument("design")
    verify.add_argument("sequencing")
    verify.add_argument("--ell", type=int, default=None, help="Block-in-window check.")
    verify.add_argument("--w-semi", dest="w_semi", type=int, default=None, help="Window partition check.")
    verify.add_argument("--theorem-u", dest="theorem_u", type=int, default=None, help="Check (2u+1)-good implies 3u-semi.")

    count = sub.add_parser("count", help="Census of forbidden sequencings.", epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    count.add_argument("design")
    mode = count.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--samples", type=int, default=None)
    count.add_argument("--ell", type=int, default=3)
    count.add_argument("--cap", type=int, default=None)
    count.add_argument("--seed", type=int, default=None)
    count.add_argument("--workers", type=int, default=None)
    count.add_argument("--out", default=None, help="Report file to write (default: stdout).")

    batch = sub.add_parser("batch", help="Run a manifest of sub-commands.", epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    batch.add_argument("manifest")
    batch.add_argument("--summary", default="data/batch_summary.tsv", help="TSV summary path.")
    batch.add_argument("--workers", type=int, default=None, help="Run manifest lines concurrently.")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _load_design(raw_path: str) -> TripleSystem:
    path = Path(raw_path)
    try:
        return read_design(path)
    except FormatError as exc:
        raise InputError(f"{path}:{exc.lineno if exc.lineno is not None else '-'}: {exc.reason}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def _load_sequencing(raw_path: str, v: int) -> Sequencing:
    path = Path(raw_path)
    try:
        return read_sequencing(path, v=v)
    except FormatError as exc:
        raise InputError(f"{path}:{exc.lineno if exc.lineno is not None else '-'}: {exc.reason}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc


def cmd_gen(args: argparse.Namespace, context: CliContext) -> CommandOutcome:
    system = build_design(args.generator, *args.params)
    label = " ".join([args.generator, *(str(p) for p in args.params)])
    faults = validate(system)
    comment = f"generated by: gen {label}"
    if args.generator == "random-psts":
        comment += f"\nseed={args.params[2]} blocks={len(system.blocks)}"
    if args.out is None:
        _emit(store_design(system, comment=comment), None)
    else:
        write_design(Path(args.out), system, comment=comment)
    seed = args.params[2] if args.generator == "random-psts" else ""
    return CommandOutcome(
        EXIT_OK if not faults else EXIT_VIOLATION,
        instance=label,
        v=system.v,
        method=f"gen_{args.generator}",
        outcome="generated" if not faults else "invalid",
        seed=seed,
    )


def cmd_seq(args: argparse.Namespace, context: CliContext) -> CommandOutcome:
    system = _load_design(args.design)
    seed = args.seed if args.seed is not None else context.settings.default_seed
    budget = args.budget if args.budget is not None else context.settings.exhaustive_budget
    outcome = CommandOutcome(EXIT_OK, instance=Path(args.design).stem, v=system.v, ell=args.ell)

    if args.method == "greedy":
        policy = GreedyPolicy(mode=args.policy, seed=seed if args.policy == "random" else None)
        outcome.seed = policy.seed if policy.seed is not None else ""
        if args.ell == 3:
            outcome.method = "greedy_3good"
            result = SearchResult("found", greedy_3good(system, policy))
        elif args.ell == 4:
            outcome.method = "greedy_4good"
            four = greedy_4good(system, policy)
            result = SearchResult(four.status, four.sequencing)
        else:
            raise InputError(f"greedy construction exists for ell 3 and 4 only, got {args.ell}")
    elif args.method == "exhaustive":
        outcome.method = "exhaustive"
        result = exhaustive_sequencer(system, args.ell, budget=budget)
    else:
        outcome.method = "random_restart"
        outcome.seed = seed
        per_restart = max(1, budget // max(1, args.restarts))
        result = random_restart_sequencer(system, args.ell, args.restarts, per_restart, seed)

    outcome.outcome = result.status
    outcome.exit_code = _STATUS_EXIT[result.status]
    if result.sequencing is not None:
        _emit(store_sequencing(result.sequencing), args.out)
    else:
        sys.stderr.write(f"{Path(args.design)}: {result.status} (nodes={result.nodes})\n")
    return outcome


def cmd_verify(args: argparse.Namespace, context: CliContext) -> CommandOutcome:
    if args.ell is None and args.w_semi is None and args.theorem_u is None:
        raise InputError("verify needs --ell, --w-semi or --theorem-u")
    system = _load_design(args.design)
    seq = _load_sequencing(args.sequencing, system.v)
    outcome = CommandOutcome(EXIT_OK, instance=Path(args.sequencing).stem, v=system.v, method="verify", outcome="good")
    outcome.seed = seq.meta.seed if seq.meta.seed is not None else ""
    lines = []

    if args.ell is not None:
        outcome.ell = args.ell
        violation = verify_ell_good(system, seq, args.ell)
        lines.append(f"ell={args.ell}: " + ("GOOD" if violation is None else violation.describe()))
        if violation is not None:
            outcome.exit_code, outcome.outcome = EXIT_VIOLATION, "violation"

    if args.w_semi is not None:
        violation = is_w_semi(system, seq, args.w_semi)
        lines.append(f"w-semi={args.w_semi}: " + ("GOOD" if violation is None else violation.describe()))
        if violation is not None:
            outcome.exit_code, outcome.outcome = EXIT_VIOLATION, "violation"

    if args.theorem_u is not None:
        check = check_theorem_2u1(system, seq, args.theorem_u)
        if check.passed:
            lines.append(f"theorem u={check.u}: PASS (w={check.w})")
        else:
            storage = Storage(resolve_path(context.root, context.settings.counterexample_dir))
            saved = storage.save_counterexample(system, seq, check)
            lines.append(f"theorem u={check.u}: FAIL {check.counterexample.describe()} saved to {saved}")  # type: ignore[union-attr]
            outcome.exit_code, outcome.outcome = EXIT_VIOLATION, "counterexample"

    sys.stdout.write("\n".join(lines) + "\n")
    return outcome


def cmd_count(args: argparse.Namespace, context: CliContext) -> CommandOutcome:
    settings = context.settings
    system = _load_design(args.design)
    workers = args.workers if args.workers is not None else settings.census_workers
    if args.exact:
        cap = args.cap if args.cap is not None else settings.census_cap
        report = census_exact(system, ell=args.ell, cap=cap, workers=workers)
        method = "census_exact"
    else:
        seed = args.seed if args.seed is not None else settings.default_seed
        report = census_sample(
            system,
            ell=args.ell,
            samples=args.samples,
            seed=seed,
            workers=workers,
            batch_size=settings.census_batch_size,
        )
        method = "census_sample"
    _emit(report.render_text(), args.out)
    return CommandOutcome(
        EXIT_OK,
        instance=Path(args.design).stem,
        v=system.v,
        method=method,
        ell=args.ell,
        outcome=f"forbidden={report.total_forbidden}/{report.population}",
        seed=report.seed if report.seed is not None else "",
    )


def _run_manifest_line(line: str, context: CliContext) -> SummaryRow:
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(shlex.split(line))
        if args.command == "batch":
            raise InputError("nested batch manifests are not supported")
        outcome = dispatch(args, context)
    except SystemExit as exc:
        outcome = CommandOutcome(EXIT_INPUT_ERROR, outcome=f"usage_error({exc.code})")
    except Exception as exc:  # noqa: BLE001
        logger.exception("Batch line failed: %s", line)
        outcome = CommandOutcome(EXIT_INPUT_ERROR, outcome=f"error: {exc}")
    return SummaryRow(
        instance=outcome.instance or line,
        v=outcome.v,
        method=outcome.method,
        ell=outcome.ell,
        outcome=outcome.outcome or str(outcome.exit_code),
        wall_time_ms=int((time.perf_counter() - started) * 1000),
        seed=outcome.seed,
    )


def cmd_batch(args: argparse.Namespace, context: CliContext) -> CommandOutcome:
    """Run each manifest line as a sub-command; lines run concurrently only when --workers > 1."""
    path = Path(args.manifest)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.strip().startswith("#")]

    workers = args.workers if args.workers is not None else context.settings.batch_workers
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda line: _run_manifest_line(line, context), lines))
    else:
        rows = [_run_manifest_line(line, context) for line in lines]

    summary = Path(args.summary)
    write_summary(summary, rows)
    failed = sum(1 for row in rows if row.outcome.startswith(("error", "usage_error")))
    logger.info("Batch %s: %d line(s), %d failed, summary at %s", path, len(rows), failed, summary)
    return CommandOutcome(
        EXIT_INPUT_ERROR if failed else EXIT_OK,
        instance=path.stem,
        method="batch",
        outcome=f"lines={len(rows)} failed={failed}",
    )


_COMMANDS = {
    "gen": cmd_gen,
    "seq": cmd_seq,
    "verify": cmd_verify,
    "count": cmd_count,
    "batch": cmd_batch,
}


def dispatch(args: argparse.Namespace, context: CliContext) -> CommandOutcome:
    try:
        return _COMMANDS[args.command](args, context)
    except (InputError, ValueError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        sys.stderr.write(f"error: {exc}\n")
        return CommandOutcome(EXIT_INPUT_ERROR, method=args.command, outcome=f"error: {exc}")


def run(argv: list[str], context: CliContext) -> int:
    args = build_parser().parse_args(argv)
    return dispatch(args, context).exit_code
