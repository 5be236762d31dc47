"""Line-oriented on-disk format for table-backed games.

Layout::

    # construction: imbalanced3 m=3        (optional comment lines)
    rps m=3 objects=R,P,S
    counts=3,0,0 winner=TIE
    counts=2,1,0 winner=P
    ...

One line per full-size choice multiset; ``winner`` names an object label
or ``TIE``.  Monoset lines may be omitted: unspecified monosets default
to an all-way tie.  Lines starting with ``#`` are comments; a
``# construction:`` comment round-trips the builder tag.
"""

from __future__ import annotations

from pathlib import Path

from .core import GameError, GameRule, TableRule, all_tie, enumerate_multisets, eval_outcome, win


class GameFileError(GameError):
    """Malformed game file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


def dump_game(rule: GameRule) -> str:
    """Serialize the full-size multiset table of a rule."""
    lines = []
    if rule.construction:
        lines.append(f"# construction: {rule.construction}")
    lines.append(f"rps m={rule.m} objects={','.join(rule.labels)}")
    for counts, _ in enumerate_multisets(rule.n, rule.m):
        out = eval_outcome(rule, counts)
        name = "TIE" if out.is_tie else rule.labels[out.winner]
        lines.append(f"counts={','.join(map(str, counts))} winner={name}")
    return "\n".join(lines) + "\n"


def save_game(rule: GameRule, path: str | Path) -> None:
    Path(path).write_text(dump_game(rule))


def parse_game(text: str) -> GameRule:
    m = None
    labels: tuple[str, ...] | None = None
    construction = None
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("construction:"):
                construction = body[len("construction:") :].strip()
            continue
        if line.startswith("rps "):
            if labels is not None:
                raise GameFileError("duplicate header", lineno)
            fields = dict(
                part.split("=", 1) for part in line[4:].split() if "=" in part
            )
            if "m" not in fields or "objects" not in fields:
                raise GameFileError("header needs m=<int> objects=<labels>", lineno)
            try:
                m = int(fields["m"])
            except ValueError:
                raise GameFileError(f"bad player count {fields['m']!r}", lineno) from None
            labels = tuple(fields["objects"].split(","))
            if m < 1:
                raise GameFileError(f"bad player count {m}", lineno)
            if len(set(labels)) != len(labels) or any(not x for x in labels):
                raise GameFileError(f"bad object labels {fields['objects']!r}", lineno)
            continue
        if labels is None:
            raise GameFileError("multiset line before header", lineno)
        if not line.startswith("counts="):
            raise GameFileError(f"unrecognized line {line!r}", lineno)
        parts = line.split()
        fields = dict(part.split("=", 1) for part in parts if "=" in part)
        if "counts" not in fields or "winner" not in fields:
            raise GameFileError("need counts=<c0,c1,...> winner=<label|TIE>", lineno)
        try:
            counts = tuple(int(x) for x in fields["counts"].split(","))
        except ValueError:
            raise GameFileError(f"bad counts {fields['counts']!r}", lineno) from None
        if len(counts) != len(labels):
            raise GameFileError(
                f"{len(counts)} counts for {len(labels)} objects", lineno
            )
        if any(c < 0 for c in counts):
            raise GameFileError(f"negative count in {counts}", lineno)
        if sum(counts) != m:
            raise GameFileError(f"counts sum to {sum(counts)}, expected {m}", lineno)
        winner_name = fields["winner"]
        if winner_name == "TIE":
            table[counts] = all_tie(m)
        else:
            try:
                idx = labels.index(winner_name)
            except ValueError:
                raise GameFileError(f"unknown winner {winner_name!r}", lineno) from None
            if counts[idx] < 1:
                raise GameFileError(
                    f"winner {winner_name!r} absent from multiset {counts}", lineno
                )
            table[counts] = win(idx, counts[idx])
    if labels is None or m is None:
        raise GameFileError("missing header")
    for counts, _ in enumerate_multisets(len(labels), m):
        if counts in table:
            continue
        if sum(1 for c in counts if c) == 1:
            table[counts] = all_tie(m)  # unspecified monosets default to TIE
        else:
            raise GameFileError(f"no line for multiset {counts}")
    return GameRule(
        m=m,
        labels=labels,
        winner_fn=TableRule(table),
        construction=construction,
        table_sizes=frozenset({m}),
    )


def load_game(path: str | Path) -> GameRule:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GameFileError(f"cannot read {path}: {exc}") from exc
    return parse_game(text)
