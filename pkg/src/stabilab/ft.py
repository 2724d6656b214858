"""Static hook-error analysis for bare-ancilla syndrome extraction, and the lookup decoder."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .circuit import DetectorSchedule
from .code import GF2Span, StabilizerCode, syndrome_of
from .pauli import PauliOperator, format_sparse, weight

SINGLE = "single-qubit"
PROPAGATED = "propagated"
RESOLVED = "collision-resolved"


class FaultToleranceViolation(ValueError):
    """Two errors share a syndrome but differ by a logical operator."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class PropagatedError:
    """Data error left by a P (x) X fault after the ``position``-th controlled gate of a stabilizer.

    ``error`` is ``P`` on the faulty gate's data qubit times every later
    scheduled factor.  ``representative`` is the stabilizer-equivalent form
    of lower weight: faults in the first half of the schedule are multiplied
    by the measured stabilizer, which leaves only the factors before the fault.
    """

    stabilizer: int
    position: int  # 1-based gate index within the stabilizer's schedule
    fault: str  # I, X, Y or Z on the data qubit
    error: PauliOperator
    representative: PauliOperator

    @property
    def trivially_correctable(self) -> bool:
        return weight(self.representative) <= 1


def _tail_error(n: int, row, position: int, fault: str) -> PauliOperator:
    q, _ = row[position - 1]
    err = PauliOperator(n)
    if fault != "I":
        err = PauliOperator.single(n, q, fault)
    for q2, p2 in row[position:]:
        err = err * PauliOperator.single(n, q2, p2)
    return err


def propagated_errors(code: StabilizerCode, sched: DetectorSchedule) -> list[PropagatedError]:
    sched.check(code)
    n = code.n
    out = []
    for i, row in enumerate(sched.rows):
        g = code.generators[i]
        w = len(row)
        for j in range(1, w + 1):
            for fault in "IXYZ":
                err = _tail_error(n, row, j, fault)
                rep = (err * g) if 2 * j <= w else err
                out.append(PropagatedError(i, j, fault, err, rep.unsigned()))
    return out


@dataclass(frozen=True)
class Violation:
    syndrome: str
    error: PauliOperator
    other: PauliOperator
    product: PauliOperator

    def __str__(self) -> str:
        return (f"{format_sparse(self.error)} and {format_sparse(self.other)} share syndrome "
                f"{self.syndrome}; product {format_sparse(self.product)} is a logical operator")


@dataclass
class FTVerdict:
    fault_tolerant: bool
    violations: list[Violation] = field(default_factory=list)


def _candidate_errors(code: StabilizerCode, props: list[PropagatedError]):
    """Single-qubit errors first, then weight >= 1 propagated representatives."""
    for q in range(code.n):
        for kind in "XYZ":
            yield PauliOperator.single(code.n, q, kind), SINGLE
    for pe in props:
        if weight(pe.representative) >= 1:
            yield pe.representative, PROPAGATED


def _equivalent(span: GF2Span, a: PauliOperator, b: PauliOperator) -> bool:
    return span.solve((a * b).symplectic_vector()) is not None


def check_fault_tolerance(code: StabilizerCode, sched: DetectorSchedule) -> FTVerdict:
    """Every pair of same-syndrome errors must differ by a stabilizer (phases ignored).

    A code without generators has no detector and nothing to correct, so it
    passes vacuously.
    """
    if not code.generators:
        return FTVerdict(True)
    span = code.span()
    first: dict[str, PauliOperator] = {"0" * code.num_generators: PauliOperator(code.n)}
    violations = []
    seen = set()
    for err, _ in _candidate_errors(code, propagated_errors(code, sched)):
        key = syndrome_of(code, err)
        if key not in first:
            first[key] = err
        elif not _equivalent(span, err, first[key]):
            pair = (err.x, err.z, first[key].x, first[key].z)
            if pair not in seen:
                seen.add(pair)
                violations.append(Violation(key, err, first[key], (err * first[key]).unsigned()))
    return FTVerdict(not violations, violations)


@dataclass
class SyndromeTable:
    n: int
    entries: dict[str, tuple[PauliOperator, str]]  # syndrome -> (correction, provenance)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, syndrome: str) -> bool:
        return syndrome in self.entries

    def correction(self, syndrome: str) -> PauliOperator:
        return self.entries[syndrome][0]

    def to_json(self) -> str:
        data = {s: {"correction": format_sparse(p), "provenance": tag}
                for s, (p, tag) in sorted(self.entries.items())}
        return json.dumps(data, indent=2, sort_keys=True) + "\n"


def build_lookup_table(code: StabilizerCode, sched: DetectorSchedule) -> SyndromeTable:
    """Syndrome -> correction map over single-qubit and propagated errors.

    Raises :class:`FaultToleranceViolation` when two entries with the same
    syndrome differ by a logical operator.
    """
    span = code.span()
    zero = "0" * code.num_generators
    entries: dict[str, tuple[PauliOperator, str]] = {zero: (PauliOperator(code.n), SINGLE)}
    if not code.generators:
        return SyndromeTable(code.n, entries)
    violations = []
    for err, tag in _candidate_errors(code, propagated_errors(code, sched)):
        key = syndrome_of(code, err)
        if key not in entries:
            entries[key] = (err, tag)
            continue
        kept, kept_tag = entries[key]
        if not _equivalent(span, err, kept):
            violations.append(Violation(key, err, kept, (err * kept).unsigned()))
        elif tag == PROPAGATED and not err.equal_up_to_phase(kept):
            entries[key] = (kept, RESOLVED)
    if violations:
        raise FaultToleranceViolation(violations)
    return SyndromeTable(code.n, entries)


def correct(syndrome: str, table: SyndromeTable) -> tuple[PauliOperator, bool]:
    """Correction for ``syndrome``; unknown syndromes give the identity and ``False``."""
    hit = table.entries.get(syndrome)
    if hit is None:
        return PauliOperator(table.n), False
    return hit[0], True


# ---------------------------------------------------------------------------
# schedule search


def _inversions(perm: tuple[int, ...]) -> int:
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b)


def _row_orders(row) -> list[tuple]:
    """All orders of a stabilizer's factors, fewest inversions relative to ``row`` first."""
    idx = sorted(itertools.permutations(range(len(row))), key=lambda p: (_inversions(p), p))
    return [tuple(row[i] for i in p) for p in idx]


def search_schedules(code: StabilizerCode, budget: int, start: DetectorSchedule | None = None) -> list[DetectorSchedule]:
    """Depth-first search over per-stabilizer gate orders for fault-tolerant schedules.

    A partial assignment is abandoned as soon as the errors it can produce
    collide with a logical.  Orders closest to ``start`` are tried first, so
    early results are the smallest reorderings of the given schedule.
    """
    if budget <= 0:
        return []
    start = start or DetectorSchedule.from_generators(code)
    start.check(code)
    span = code.span()
    n = code.n
    base: dict[str, PauliOperator] = {"0" * code.num_generators: PauliOperator(n)}
    for q in range(n):
        for kind in "XYZ":
            e = PauliOperator.single(n, q, kind)
            base.setdefault(syndrome_of(code, e), e)

    def row_errors(i, order):
        sched = DetectorSchedule.of([order if j == i else start.rows[j] for j in range(len(start.rows))])
        errs = [pe.representative for pe in propagated_errors(code, sched) if pe.stabilizer == i]
        return [e for e in errs if weight(e) >= 2]

    options = [
        [(order, [(syndrome_of(code, e), e) for e in row_errors(i, order)]) for order in _row_orders(row)]
        for i, row in enumerate(start.rows)
    ]

    results: list[DetectorSchedule] = []

    def extend(i: int, table: dict[str, PauliOperator], chosen: list) -> None:
        if len(results) >= budget:
            return
        if i == len(options):
            results.append(DetectorSchedule.of(chosen))
            return
        for order, errs in options[i]:
            added = {}
            ok = True
            for key, e in errs:
                prev = table.get(key, added.get(key))
                if prev is None:
                    added[key] = e
                elif not _equivalent(span, e, prev):
                    ok = False
                    break
            if ok:
                table.update(added)
                extend(i + 1, table, chosen + [order])
                for key in added:
                    del table[key]
            if len(results) >= budget:
                return

    extend(0, dict(base), [])
    return results


__all__ = [
    "FTVerdict", "FaultToleranceViolation", "PropagatedError", "SyndromeTable", "Violation",
    "build_lookup_table", "check_fault_tolerance", "correct", "propagated_errors", "search_schedules",
]
