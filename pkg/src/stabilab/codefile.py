"""Plain-text code definition files.

One keyword per line, ``#`` starts a comment::

    name 8-1-3
    n 8
    k 1
    stabilizer +ZXZIZIII
    logical_x +ZZXIIZII
    logical_z +ZIZIIZZI
    schedule ft
    Z0 X1 Z2 Z4
    end

Stabilizer lines are listed in syndrome-bit order; a schedule block holds
one line of ``<Pauli><qubit>`` tokens per stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .circuit import DetectorSchedule, ScheduleError
from .code import StabilizerCode
from .pauli import DimensionError, PauliOperator, format_pauli, parse_pauli

DEFAULT_CODE = "code_8_1_3.txt"


class CodeFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class CodeDefinition:
    name: str
    n: int
    k: int
    stabilizers: list[PauliOperator]
    logical_x: list[PauliOperator] = field(default_factory=list)
    logical_z: list[PauliOperator] = field(default_factory=list)
    schedules: dict[str, DetectorSchedule] = field(default_factory=dict)

    def code(self) -> StabilizerCode:
        return StabilizerCode(self.n, self.k, tuple(self.stabilizers), tuple(self.logical_x),
                              tuple(self.logical_z), self.name)

    def schedule(self, name: str | None) -> DetectorSchedule:
        if name is None:
            return DetectorSchedule.from_generators(self.code())
        try:
            return self.schedules[name]
        except KeyError:
            raise KeyError(f"no schedule named {name!r}; have {sorted(self.schedules)}") from None


def _int(value: str, lineno: int) -> int:
    try:
        v = int(value)
    except ValueError:
        raise CodeFileError(f"expected an integer, got {value!r}", lineno) from None
    if v < 0:
        raise CodeFileError("value must be non-negative", lineno)
    return v


def parse(text: str) -> CodeDefinition:
    fields: dict[str, object] = {}
    stabs: list[tuple[int, str]] = []
    lx: list[tuple[int, str]] = []
    lz: list[tuple[int, str]] = []
    blocks: dict[str, tuple[int, list[tuple[int, str]]]] = {}
    current: str | None = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if current is not None:
            if line == "end":
                current = None
            else:
                blocks[current][1].append((lineno, line))
            continue
        key, _, value = line.partition(" ")
        value = value.strip()
        if key in ("name", "n", "k"):
            if key in fields:
                raise CodeFileError(f"duplicate {key!r}", lineno)
            if not value:
                raise CodeFileError(f"{key!r} needs a value", lineno)
            fields[key] = value if key == "name" else _int(value, lineno)
        elif key == "stabilizer":
            stabs.append((lineno, value))
        elif key == "logical_x":
            lx.append((lineno, value))
        elif key == "logical_z":
            lz.append((lineno, value))
        elif key == "schedule":
            if not value or " " in value:
                raise CodeFileError("schedule needs a single-word name", lineno)
            if value in blocks:
                raise CodeFileError(f"duplicate schedule {value!r}", lineno)
            blocks[value] = (lineno, [])
            current = value
        else:
            raise CodeFileError(f"unknown keyword {key!r}", lineno)
    if current is not None:
        raise CodeFileError(f"schedule {current!r} is missing 'end'", blocks[current][0])
    for key in ("n", "k"):
        if key not in fields:
            raise CodeFileError(f"missing {key!r}")
    n, k = int(fields["n"]), int(fields["k"])

    def paulis(items):
        out = []
        for lineno, s in items:
            try:
                out.append(parse_pauli(s, n))
            except (ValueError, DimensionError) as exc:
                raise CodeFileError(str(exc), lineno) from None
        return out

    defn = CodeDefinition(str(fields.get("name", "")), n, k, paulis(stabs), paulis(lx), paulis(lz))
    code = defn.code()
    for name, (lineno, rows) in blocks.items():
        try:
            sched = DetectorSchedule.parse([r for _, r in rows], n)
            sched.check(code)
        except (ValueError, ScheduleError) as exc:
            raise CodeFileError(f"schedule {name!r}: {exc}", lineno) from None
        defn.schedules[name] = sched
    return defn


def format_definition(defn: CodeDefinition) -> str:
    lines = []
    if defn.name:
        lines.append(f"name {defn.name}")
    lines += [f"n {defn.n}", f"k {defn.k}"]
    lines += [f"stabilizer {format_pauli(s)}" for s in defn.stabilizers]
    lines += [f"logical_x {format_pauli(p)}" for p in defn.logical_x]
    lines += [f"logical_z {format_pauli(p)}" for p in defn.logical_z]
    for name, sched in defn.schedules.items():
        lines.append(f"schedule {name}")
        lines += [sched.format_row(i) for i in range(len(sched.rows))]
        lines.append("end")
    return "\n".join(lines) + "\n"


def load(path: str | Path | None = None) -> CodeDefinition:
    """Read a definition file; ``None`` loads the bundled [[8,1,3]] code."""
    if path is None:
        return parse(resources.files("stabilab.data").joinpath(DEFAULT_CODE).read_text())
    return parse(Path(path).read_text())


__all__ = ["CodeDefinition", "CodeFileError", "format_definition", "load", "parse"]
