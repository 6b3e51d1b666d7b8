"""Text formats for designs and sequencings.

Design file (UTF-8):
    <kind> <v> <b>          kind is sts or psts
    <p> <q> <r>             exactly b lines, 0-based, strictly increasing
Lines starting with # and blank lines are ignored.

Sequencing file:
    <x1> <x2> ... <xv>      one line, 0-based points
    # key=value ...         optional metadata comments (method, ell, seed, policy, ...)
"""

from pathlib import Path

from .designs import DESIGN_KINDS, Block, Sequencing, SequencingMeta, TripleSystem

_META_FIELDS = ("method", "ell", "seed", "policy")

DESIGN_GRAMMAR = (
    "design file: '<kind> <v> <b>' header (kind: sts|psts), then exactly b lines of three "
    "space-separated 0-based points in strictly increasing order; '#' lines and blank lines ignored"
)
SEQUENCING_GRAMMAR = (
    "sequencing file: one line of v space-separated 0-based points, optional '# key=value' "
    "metadata comments (method, ell, seed, policy, ...)"
)


class FormatError(ValueError):
    def __init__(self, reason: str, lineno: int | None = None):
        self.reason = reason
        self.lineno = lineno
        location = f"line {lineno}: " if lineno is not None else ""
        super().__init__(f"{location}{reason}")


def _content_lines(text: str) -> list[tuple[int, str]]:
    lines = []
    for lineno, raw in enumerate(text.lstrip("\ufeff").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line))
    return lines


def _parse_ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(token) for token in line.split()]
    except ValueError as exc:
        raise FormatError("non_integer_token", lineno) from exc


def load_design(text: str) -> TripleSystem:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("missing_header")

    header_lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0].lower() not in DESIGN_KINDS:
        raise FormatError("malformed_header", header_lineno)
    kind = parts[0].lower()
    try:
        v, b = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise FormatError("malformed_header", header_lineno) from exc
    if v < 1 or b < 0:
        raise FormatError("malformed_header", header_lineno)

    body = lines[1:]
    if len(body) != b:
        lineno = body[b][0] if len(body) > b else (body[-1][0] if body else header_lineno)
        raise FormatError(f"block_count_mismatch: header says {b}, found {len(body)}", lineno)

    seen: set[Block] = set()
    blocks: list[Block] = []
    for lineno, line in body:
        values = _parse_ints(line, lineno)
        if len(values) != 3:
            raise FormatError("block_needs_three_points", lineno)
        if not all(0 <= p < v for p in values):
            raise FormatError("point_out_of_range", lineno)
        if not values[0] < values[1] < values[2]:
            raise FormatError("block_not_canonical", lineno)
        block = Block(*values)
        if block in seen:
            raise FormatError("duplicate_block", lineno)
        seen.add(block)
        blocks.append(block)

    return TripleSystem(v=v, blocks=tuple(sorted(blocks)), kind=kind)  # type: ignore[arg-type]


def store_design(system: TripleSystem, comment: str = "") -> str:
    lines = []
    if comment:
        lines.extend(f"# {row}" for row in comment.splitlines())
    lines.append(f"{system.kind} {system.v} {len(system.blocks)}")
    lines.extend(f"{block.a} {block.b} {block.c}" for block in sorted(system.blocks))
    return "\n".join(lines) + "\n"


def _parse_meta_comment(comment: str, meta: dict[str, str]) -> None:
    for token in comment.split():
        if "=" in token:
            key, value = token.split("=", 1)
            meta[key.strip()] = value.strip()


def load_sequencing(text: str, v: int | None = None) -> Sequencing:
    order: list[int] | None = None
    order_lineno = 0
    meta: dict[str, str] = {}
    for lineno, raw in enumerate(text.lstrip("\ufeff").splitlines(), start=1):
        data, _, comment = raw.partition("#")
        if comment:
            _parse_meta_comment(comment, meta)
        data = data.strip()
        if not data:
            continue
        if order is not None:
            raise FormatError("multiple_sequencing_lines", lineno)
        order = _parse_ints(data, lineno)
        order_lineno = lineno

    if order is None:
        raise FormatError("missing_sequencing_line")
    expected = len(order) if v is None else v
    if len(order) != expected or sorted(order) != list(range(expected)):
        raise FormatError(f"not_a_permutation_of_0..{expected - 1}", order_lineno)

    try:
        return Sequencing.of(order, _meta_from_dict(meta))
    except ValueError as exc:
        raise FormatError(f"bad_metadata: {exc}") from exc


def _optional_int(value: str | None) -> int | None:
    if value is None or value in ("", "none", "None"):
        return None
    return int(value)


def _meta_from_dict(meta: dict[str, str]) -> SequencingMeta:
    notes = tuple(sorted((k, v) for k, v in meta.items() if k not in _META_FIELDS))
    return SequencingMeta(
        method=meta.get("method", "manual"),
        ell=_optional_int(meta.get("ell")),
        seed=_optional_int(meta.get("seed")),
        policy=meta.get("policy"),
        notes=notes,
    )


def store_sequencing(seq: Sequencing) -> str:
    meta = seq.meta
    fields = [f"method={meta.method}", f"ell={meta.ell}", f"seed={meta.seed}"]
    if meta.policy is not None:
        fields.append(f"policy={meta.policy}")
    lines = [" ".join(str(x) for x in seq.order), "# " + " ".join(fields)]
    if meta.notes:
        lines.append("# " + " ".join(f"{k}={v}" for k, v in meta.notes))
    return "\n".join(lines) + "\n"


def read_design(path: Path) -> TripleSystem:
    return load_design(path.read_text(encoding="utf-8-sig"))


def write_design(path: Path, system: TripleSystem, comment: str = "") -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(store_design(system, comment=comment), encoding="utf-8")


def read_sequencing(path: Path, v: int | None = None) -> Sequencing:
    return load_sequencing(path.read_text(encoding="utf-8-sig"), v=v)


def write_sequencing(path: Path, seq: Sequencing) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(store_sequencing(seq), encoding="utf-8")
