"""Stabilizer tableau simulator with destabilizers.

Rows ``0..n-1`` hold destabilizers and rows ``n..2n-1`` stabilizers, each as
x/z bit rows plus a sign bit (Hermitian convention: Y is the (1, 1) pattern).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import MEASUREMENTS, PREPARATIONS, CliffordCircuit, Op
from .pauli import DimensionError, PauliOperator, symplectic_product


@dataclass(frozen=True)
class FaultEvent:
    """A fault attached after the op at index ``site``.

    ``paulis`` are (qubit, "X"|"Y"|"Z") factors applied after a gate; ``flip``
    marks a flipped measurement record or a flipped preparation.
    """

    site: int
    paulis: tuple[tuple[int, str], ...] = ()
    flip: bool = False


def _g(x1, z1, x2, z2):
    """Exponent of i picked up by each qubit when multiplying two Pauli rows."""
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    return np.where(
        x1 & z1, z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )


class StabilizerTableau:
    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        self.x[:n] = np.eye(n, dtype=np.uint8)
        self.z[n:] = np.eye(n, dtype=np.uint8)

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n = self.n
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        return t

    # -- gates --------------------------------------------------------
    def h(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.x[:, a], self.z[:, a] = self.z[:, a].copy(), self.x[:, a].copy()

    def s(self, a: int) -> None:
        self.r ^= self.x[:, a] & self.z[:, a]
        self.z[:, a] ^= self.x[:, a]

    def s_dag(self, a: int) -> None:
        self.r ^= self.x[:, a] & (self.z[:, a] ^ 1)
        self.z[:, a] ^= self.x[:, a]

    def pauli_x(self, a: int) -> None:
        self.r ^= self.z[:, a]

    def pauli_z(self, a: int) -> None:
        self.r ^= self.x[:, a]

    def pauli_y(self, a: int) -> None:
        self.r ^= self.x[:, a] ^ self.z[:, a]

    def cx(self, a: int, b: int) -> None:
        x, z = self.x, self.z
        self.r ^= x[:, a] & z[:, b] & (x[:, b] ^ z[:, a] ^ 1)
        x[:, b] ^= x[:, a]
        z[:, a] ^= z[:, b]

    def cz(self, a: int, b: int) -> None:
        self.h(b)
        self.cx(a, b)
        self.h(b)

    def cy(self, a: int, b: int) -> None:
        self.s_dag(b)
        self.cx(a, b)
        self.s(b)

    def swap(self, a: int, b: int) -> None:
        self.x[:, [a, b]] = self.x[:, [b, a]]
        self.z[:, [a, b]] = self.z[:, [b, a]]

    def apply_pauli(self, p: PauliOperator | Sequence[tuple[int, str]]) -> None:
        """Apply a Pauli operator (global phase dropped)."""
        terms = p.terms() if isinstance(p, PauliOperator) else p
        for q, kind in terms:
            {"X": self.pauli_x, "Y": self.pauli_y, "Z": self.pauli_z}[kind](q)

    # -- measurement --------------------------------------------------
    def _rowsum(self, h: int, i: int) -> None:
        total = 2 * int(self.r[h]) + 2 * int(self.r[i]) + int(
            _g(self.x[i], self.z[i], self.x[h], self.z[h]).sum())
        self.r[h] = 1 if total % 4 == 2 else 0
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def measure_z(self, a: int, rng: np.random.Generator | None = None,
                  forced: int | None = None) -> tuple[int, bool]:
        """Measure Z on qubit ``a``; returns (outcome bit, deterministic?).

        ``forced`` fixes the outcome of a random measurement (used by resets,
        whose result is discarded).
        """
        n = self.n
        hits = np.flatnonzero(self.x[n:, a])
        if hits.size:
            p = n + int(hits[0])
            for i in np.flatnonzero(self.x[:, a]):
                if i != p:
                    self._rowsum(int(i), p)
            self.x[p - n], self.z[p - n], self.r[p - n] = self.x[p], self.z[p], self.r[p]
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, a] = 1
            if forced is not None:
                self.r[p] = forced & 1
            elif rng is None:
                raise ValueError("random measurement outcome needs an rng")
            else:
                self.r[p] = int(rng.integers(2))
            return int(self.r[p]), False
        sx = np.zeros(n, dtype=np.uint8)
        sz = np.zeros(n, dtype=np.uint8)
        phase = 0
        for i in np.flatnonzero(self.x[:n, a]):
            row = n + int(i)
            phase += 2 * int(self.r[row]) + int(_g(self.x[row], self.z[row], sx, sz).sum())
            sx ^= self.x[row]
            sz ^= self.z[row]
        return (1 if phase % 4 == 2 else 0), True

    def measure_x(self, a: int, rng: np.random.Generator | None = None,
                  forced: int | None = None) -> tuple[int, bool]:
        self.h(a)
        out = self.measure_z(a, rng, forced)
        self.h(a)
        return out

    def reset_z(self, a: int, rng: np.random.Generator | None = None) -> None:
        bit, _ = self.measure_z(a, rng, forced=0)
        if bit:
            self.pauli_x(a)

    def reset_x(self, a: int, rng: np.random.Generator | None = None) -> None:
        bit, _ = self.measure_x(a, rng, forced=0)
        if bit:
            self.pauli_z(a)

    # -- inspection ---------------------------------------------------
    def row(self, i: int) -> PauliOperator:
        p = PauliOperator.from_bits(self.x[i], self.z[i])
        return PauliOperator(self.n, p.x, p.z, 2 * int(self.r[i]))

    def stabilizers(self) -> list[PauliOperator]:
        return [self.row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliOperator]:
        return [self.row(i) for i in range(self.n)]

    def measure_observable(self, p: PauliOperator) -> int:
        """+1/-1 if ``p`` or ``-p`` stabilizes the state, 0 otherwise."""
        if p.n != self.n:
            raise DimensionError(f"observable on {p.n} qubits, state on {self.n}")
        if not p.is_hermitian:
            raise ValueError("observable must be Hermitian")
        stabs = self.stabilizers()
        if any(symplectic_product(s, p) for s in stabs):
            return 0
        prod = PauliOperator(self.n)
        for i, d in enumerate(self.destabilizers()):
            if symplectic_product(d, p):
                prod = prod * stabs[i]
        return 1 if prod.phase_exp == p.phase_exp else -1

    def check_invariants(self) -> None:
        """Rows satisfy the symplectic pairing of a valid tableau."""
        rows = [self.row(i) for i in range(2 * self.n)]
        n = self.n
        for i in range(2 * n):
            for j in range(i + 1, 2 * n):
                want = 1 if j == i + n else 0
                if symplectic_product(rows[i], rows[j]) != want:
                    raise AssertionError(f"tableau rows {i} and {j} break the symplectic pairing")

    # -- circuits -----------------------------------------------------
    def apply_op(self, op: Op, rng: np.random.Generator | None = None) -> tuple[int, bool] | None:
        kind, qs = op.kind, op.qubits
        if kind in _UNITARY_DISPATCH:
            getattr(self, _UNITARY_DISPATCH[kind])(*qs)
            return None
        if kind == "MEASURE_Z":
            return self.measure_z(qs[0], rng)
        if kind == "MEASURE_X":
            return self.measure_x(qs[0], rng)
        if kind == "PREP_Z":
            self.reset_z(qs[0], rng)
            return None
        if kind in ("PREP_X", "RESET_X"):
            self.reset_x(qs[0], rng)
            return None
        raise ValueError(f"unknown op {kind}")

    def apply_circuit(self, circuit: CliffordCircuit, rng: np.random.Generator | None = None) -> list[int]:
        bits, _ = run(circuit, rng=rng, state=self)
        return bits


_UNITARY_DISPATCH = {
    "H": "h", "S": "s", "S_DAG": "s_dag", "X": "pauli_x", "Y": "pauli_y", "Z": "pauli_z",
    "CX": "cx", "CY": "cy", "CZ": "cz", "SWAP": "swap",
}


def run(circuit: CliffordCircuit, faults: Sequence[FaultEvent] = (), rng: np.random.Generator | None = None,
        state: StabilizerTableau | None = None) -> tuple[list[int], StabilizerTableau]:
    """Execute ``circuit`` with faults injected after their sites.

    Returns the classical record (one bit per cbit) and the final tableau.
    ``state`` is updated in place when supplied; its size may exceed the
    circuit's.
    """
    if state is None:
        state = StabilizerTableau(circuit.n_qubits)
    if state.n < circuit.n_qubits:
        raise DimensionError(f"circuit needs {circuit.n_qubits} qubits, state has {state.n}")
    by_site: dict[int, list[FaultEvent]] = {}
    for f in faults:
        if not (0 <= f.site < len(circuit.ops)) or not circuit.ops[f.site].noisy:
            raise ValueError(f"fault at site {f.site} does not reference a noise site")
        by_site.setdefault(f.site, []).append(f)
    bits = [0] * circuit.num_cbits
    for i, op in enumerate(circuit.ops):
        res = state.apply_op(op, rng)
        flip = False
        for f in by_site.get(i, ()):
            state.apply_pauli(f.paulis)
            flip ^= f.flip
        if op.kind in MEASUREMENTS:
            bit = res[0] ^ int(flip)
            if op.cbit is not None:
                bits[op.cbit] = bit
        elif flip and op.kind in PREPARATIONS:
            (state.pauli_x if op.kind == "PREP_Z" else state.pauli_z)(op.qubits[0])
    return bits, state


__all__ = ["FaultEvent", "StabilizerTableau", "run"]
