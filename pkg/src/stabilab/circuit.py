"""Clifford circuit records, encoder and detector synthesis."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .code import StabilizerCode, StandardForm
from .pauli import PauliOperator, format_sparse

SINGLE_QUBIT_GATES = {"H", "S", "S_DAG", "X", "Y", "Z"}
TWO_QUBIT_GATES = {"CX", "CY", "CZ", "SWAP"}
PREPARATIONS = {"PREP_Z", "PREP_X", "RESET_X"}
MEASUREMENTS = {"MEASURE_Z", "MEASURE_X"}
UNITARY = SINGLE_QUBIT_GATES | TWO_QUBIT_GATES
_INVERSE = {"S": "S_DAG", "S_DAG": "S"}
CONTROLLED = {"X": "CX", "Y": "CY", "Z": "CZ"}

_DUMP_NAMES = {
    "PREP_Z": "R", "PREP_X": "RX", "RESET_X": "RX", "MEASURE_Z": "M", "MEASURE_X": "MX",
}


class NotInvertibleError(ValueError):
    """Circuit contains measurements or resets."""


class ScheduleError(ValueError):
    """Detector schedule does not match the code generators."""


class EncoderPhaseError(RuntimeError):
    """Synthesized encoder leaves a generator with eigenvalue -1."""


@dataclass(frozen=True)
class Op:
    kind: str
    qubits: tuple[int, ...]
    cbit: int | None = None
    noisy: bool = False

    @property
    def controlled_pauli(self) -> str | None:
        """Target Pauli of a CX/CY/CZ gate."""
        return self.kind[1] if self.kind in ("CX", "CY", "CZ") else None


@dataclass(frozen=True)
class CliffordCircuit:
    n_qubits: int
    ops: tuple[Op, ...] = ()
    n_data: int | None = None  # qubits >= n_data are printed as ancillas

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        seen = set()
        for op in self.ops:
            if any(q < 0 or q >= self.n_qubits for q in op.qubits):
                raise ValueError(f"{op} addresses a qubit outside 0..{self.n_qubits - 1}")
            if op.cbit is not None:
                if op.cbit in seen:
                    raise ValueError(f"classical bit {op.cbit} written twice")
                seen.add(op.cbit)

    @property
    def num_cbits(self) -> int:
        return 1 + max((op.cbit for op in self.ops if op.cbit is not None), default=-1)

    def noise_sites(self) -> list[int]:
        return [i for i, op in enumerate(self.ops) if op.noisy]

    def __add__(self, other: "CliffordCircuit") -> "CliffordCircuit":
        return CliffordCircuit(max(self.n_qubits, other.n_qubits), self.ops + other.ops,
                               self.n_data if self.n_data is not None else other.n_data)

    def with_noise(self, noisy: bool) -> "CliffordCircuit":
        return replace(self, ops=tuple(replace(op, noisy=noisy) for op in self.ops))

    def dump(self) -> str:
        """One gate per line, e.g. ``CZ a d7`` or ``MX a s3``."""
        lines = []
        for op in self.ops:
            words = [_DUMP_NAMES.get(op.kind, op.kind)]
            words += [self._qname(q) for q in op.qubits]
            if op.cbit is not None:
                words.append(f"s{op.cbit}")
            lines.append(" ".join(words))
        return "\n".join(lines) + ("\n" if lines else "")

    def _qname(self, q: int) -> str:
        if self.n_data is None or q < self.n_data:
            return f"d{q}"
        extra = q - self.n_data
        return "a" if extra == 0 else f"a{extra}"


def adjoint(c: CliffordCircuit) -> CliffordCircuit:
    ops = []
    for op in reversed(c.ops):
        if op.kind not in UNITARY:
            raise NotInvertibleError(f"{op.kind} is not a unitary gate")
        ops.append(replace(op, kind=_INVERSE.get(op.kind, op.kind)))
    return CliffordCircuit(c.n_qubits, ops, c.n_data)


# ---------------------------------------------------------------------------
# detector schedules


@dataclass(frozen=True)
class DetectorSchedule:
    """Per-stabilizer order of (qubit, Pauli) factors used by the detector."""

    rows: tuple[tuple[tuple[int, str], ...], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable[tuple[int, str]]]) -> "DetectorSchedule":
        return cls(tuple(tuple((int(q), str(p)) for q, p in row) for row in rows))

    @classmethod
    def from_generators(cls, code: StabilizerCode) -> "DetectorSchedule":
        """Ascending-qubit order of each generator's factors."""
        return cls.of(g.terms() for g in code.generators)

    @classmethod
    def parse(cls, lines: Sequence[str], n: int) -> "DetectorSchedule":
        rows = []
        for line in lines:
            row = []
            for tok in line.split():
                kind, q = tok[0], tok[1:]
                if kind not in "XYZ" or not q.isdigit():
                    raise ValueError(f"bad schedule factor {tok!r}")
                if int(q) >= n:
                    raise ValueError(f"qubit {q} out of range in {tok!r}")
                row.append((int(q), kind))
            rows.append(row)
        return cls.of(rows)

    def format_row(self, i: int) -> str:
        return " ".join(f"{p}{q}" for q, p in self.rows[i])

    def check(self, code: StabilizerCode) -> None:
        if len(self.rows) != len(code.generators):
            raise ScheduleError(f"schedule has {len(self.rows)} rows for {len(code.generators)} generators")
        for i, (row, g) in enumerate(zip(self.rows, code.generators)):
            qubits = [q for q, _ in row]
            if len(set(qubits)) != len(qubits) or sorted(row) != sorted(g.terms()):
                raise ScheduleError(
                    f"row {i + 1} ({self.format_row(i)}) is not a reordering of {format_sparse(g.unsigned())}")

    def matches(self, code: StabilizerCode) -> bool:
        try:
            self.check(code)
        except ScheduleError:
            return False
        return True


def build_detector(code: StabilizerCode, sched: DetectorSchedule) -> CliffordCircuit:
    """Bare-ancilla syndrome extraction: one reset/measured ancilla shared by all stabilizers.

    The ancilla is qubit ``code.n``; syndrome bit ``i`` is written to classical
    bit ``i``.  A generator with sign -1 gets a noiseless Z on the ancilla so
    that the measured bit is the eigenvalue of the signed generator.
    """
    sched.check(code)
    a = code.n
    ops: list[Op] = []
    for i, (row, g) in enumerate(zip(sched.rows, code.generators)):
        ops.append(Op("RESET_X", (a,), noisy=True))
        for q, p in row:
            ops.append(Op(CONTROLLED[p], (a, q), noisy=True))
        if g.phase_exp == 2:
            ops.append(Op("Z", (a,)))
        ops.append(Op("MEASURE_X", (a,), cbit=i, noisy=True))
    return CliffordCircuit(code.n + 1, ops, n_data=code.n)


# ---------------------------------------------------------------------------
# encoder


def _phase_gates(q: int, phase_exp: int) -> list[Op]:
    """Gates multiplying the |1> branch of qubit ``q`` by ``i**phase_exp``."""
    return {0: [], 1: [Op("S", (q,))], 2: [Op("Z", (q,))], 3: [Op("S", (q,)), Op("Z", (q,))]}[phase_exp % 4]


def _swap_layer(perm: Sequence[int]) -> list[Op]:
    """SWAPs moving the content of wire ``s`` onto wire ``perm[s]``."""
    n = len(perm)
    content = list(range(n))  # content[w] = standard-form qubit currently on wire w
    want = [0] * n
    for s, w in enumerate(perm):
        want[w] = s
    ops = []
    for w in range(n):
        if content[w] != want[w]:
            src = content.index(want[w])
            ops.append(Op("SWAP", (src, w)))
            content[src], content[w] = content[w], content[src]
    return ops


def build_encoder(sf: StandardForm, k: int, verify: bool = True) -> CliffordCircuit:
    """Unitary encoder mapping ``|0>^(n-k) |psi>`` into the code space.

    Gates are laid out in standard-form labels and a final SWAP layer restores
    the original qubit order.  With ``verify`` the circuit is simulated on
    ``|0...0>`` and every generator must come out with eigenvalue +1.
    """
    from .code import derive_logicals

    if k != sf.k:
        raise ValueError(f"standard form encodes k={sf.k}, got k={k}")
    n, r, l = sf.n, sf.r, sf.l
    ops: list[Op] = []
    gens = sf.std_generators

    # X-free generators with sign -1: flip their pivot qubit
    for t in range(l):
        if gens[r + t].phase_exp == 2:
            ops.append(Op("X", (r + t,)))

    inv = [0] * n
    for s, orig in enumerate(sf.qubit_permutation):
        inv[orig] = s
    lx, _ = derive_logicals(sf)
    for j, xbar in enumerate(lx):
        ctrl = n - k + j
        std = xbar.permuted(inv)
        for q, p in std.terms():
            if q != ctrl:
                ops.append(Op(CONTROLLED[p], (ctrl, q)))

    for i in range(r):
        g = gens[i]
        ops.append(Op("H", (i,)))
        if g.factor(i) == "Y":
            ops.append(Op("S", (i,)))
        ops.extend(_phase_gates(i, g.phase_exp))
        for q, p in g.terms():
            if q != i:
                ops.append(Op(CONTROLLED[p], (i, q)))

    ops.extend(_swap_layer(sf.qubit_permutation))
    circuit = CliffordCircuit(n, ops)
    if verify:
        _verify_encoder(circuit, sf.original_generators())
    return circuit


def _verify_encoder(circuit: CliffordCircuit, generators: Sequence[PauliOperator]) -> None:
    from .tableau import StabilizerTableau

    t = StabilizerTableau(circuit.n_qubits)
    t.apply_circuit(circuit)
    bad = [g for g in generators if t.measure_observable(g) != 1]
    if bad:
        raise EncoderPhaseError(
            "encoded state is not a +1 eigenstate of " + ", ".join(format_sparse(g) for g in bad))


def encoder_for(code: StabilizerCode) -> CliffordCircuit:
    from .code import ExtendedCheckMatrix, standard_form

    return build_encoder(standard_form(ExtendedCheckMatrix.from_code(code)), code.k)


__all__ = [
    "CliffordCircuit", "DetectorSchedule", "EncoderPhaseError", "NotInvertibleError", "Op", "ScheduleError",
    "adjoint", "build_detector", "build_encoder", "encoder_for",
]
