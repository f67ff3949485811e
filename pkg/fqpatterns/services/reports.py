"""
Output writers. Every file starts with the full RunConfig so it can be
regenerated from its own header; nothing time-dependent is written.
"""
from __future__ import annotations

import contextlib
import csv
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence, TextIO

from pydantic import BaseModel

from fqpatterns.models.run import RunConfig

HEADER_PREFIX = "# config: "


@dataclass
class Table:
    columns: Sequence[str]
    rows: list[dict[str, Any]] = field(default_factory=list)


def config_header(config: RunConfig) -> str:
    return HEADER_PREFIX + json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def parse_header(line: str) -> RunConfig:
    if not line.startswith(HEADER_PREFIX):
        raise ValueError("not a config header line")
    return RunConfig.model_validate_json(line[len(HEADER_PREFIX) :])


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value


def write_csv(table: Table, config: RunConfig, out: TextIO) -> None:
    out.write(config_header(config) + "\n")
    writer = csv.DictWriter(out, fieldnames=list(table.columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in table.rows:
        writer.writerow({k: "" if v is None else v for k, v in _plain(row).items()})


def write_json(result: Any, config: RunConfig, out: TextIO) -> None:
    doc = {"config": config.model_dump(mode="json"), "result": _plain(result)}
    out.write(json.dumps(doc, sort_keys=True, indent=2, allow_nan=True))
    out.write("\n")


def write_lines(lines: Sequence[str], config: RunConfig, out: TextIO) -> None:
    out.write(config_header(config) + "\n")
    for line in lines:
        out.write(line + "\n")


@contextlib.contextmanager
def open_output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh
