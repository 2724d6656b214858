"""Stabilizer codes: validation, standard form, logical operators, syndromes."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .pauli import DimensionError, PauliOperator, format_sparse, symplectic_product, weight


class InvalidCodeError(ValueError):
    """Generators do not define a valid stabilizer code."""


class GF2Span:
    """Row space of packed GF(2) vectors, remembering how each basis row was formed.

    Basis rows are kept fully reduced (each pivot bit appears in exactly one
    row), so reduction of a query vector is order independent.
    """

    def __init__(self, rows: Sequence[int]):
        self._basis: list[tuple[int, int, int]] = []  # (pivot bit, vector, combination mask)
        self.dependencies: list[int] = []
        for i, v in enumerate(rows):
            v, combo = self.reduce(v, 1 << i)
            if v == 0:
                self.dependencies.append(combo)
                continue
            pivot = v.bit_length() - 1
            self._basis = [
                (pb, pv ^ v, pc ^ combo) if (pv >> pivot) & 1 else (pb, pv, pc)
                for pb, pv, pc in self._basis
            ]
            self._basis.append((pivot, v, combo))

    @property
    def rank(self) -> int:
        return len(self._basis)

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        for pb, pv, pc in self._basis:
            if (v >> pb) & 1:
                v ^= pv
                combo ^= pc
        return v, combo

    def solve(self, v: int) -> int | None:
        """Mask of input rows summing to ``v``, or None when ``v`` is outside the span."""
        rest, combo = self.reduce(v)
        return combo if rest == 0 else None


def product_of(ops: Sequence[PauliOperator], mask: int, n: int) -> PauliOperator:
    out = PauliOperator(n)
    for i, op in enumerate(ops):
        if (mask >> i) & 1:
            out = out * op
    return out


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...] = ()
    logical_z: tuple[PauliOperator, ...] = ()
    name: str = ""

    def __post_init__(self):
        for op in (*self.generators, *self.logical_x, *self.logical_z):
            if op.n != self.n:
                raise DimensionError(f"operator {op} does not act on {self.n} qubits")
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "logical_x", tuple(self.logical_x))
        object.__setattr__(self, "logical_z", tuple(self.logical_z))

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def span(self) -> GF2Span:
        return GF2Span([g.symplectic_vector() for g in self.generators])

    def with_logicals(self) -> "StabilizerCode":
        """Copy with logicals derived from the standard form when none were given."""
        if self.logical_x or self.k == 0:
            return self
        lx, lz = derive_logicals(standard_form(ExtendedCheckMatrix.from_code(self)))
        return StabilizerCode(self.n, self.k, self.generators, tuple(lx), tuple(lz), self.name)


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class ValidationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            line = f"[{'PASS' if c.passed else 'FAIL'}] {c.name}"
            if c.witness:
                line += f": {c.witness}"
            lines.append(line)
        return "\n".join(lines)


def validate(code: StabilizerCode) -> ValidationReport:
    """Check the stabilizer-code invariants, collecting a witness for each failure."""
    rep = ValidationReport()
    gens = code.generators
    m = code.n - code.k

    rep.checks.append(Check("generator count", len(gens) == m,
                            "" if len(gens) == m else f"{len(gens)} generators, expected n-k={m}"))

    bad = [g for g in gens if not g.is_hermitian]
    rep.checks.append(Check("hermitian generators", not bad,
                            ", ".join(format_sparse(g) for g in bad)))

    pair = next(((a, b) for a, b in itertools.combinations(gens, 2) if symplectic_product(a, b)), None)
    rep.checks.append(Check("generators commute", pair is None,
                            "" if pair is None else f"({format_sparse(pair[0])}, {format_sparse(pair[1])})"))

    span = code.span()
    rep.checks.append(Check("generators independent", span.rank == len(gens),
                            "" if span.rank == len(gens) else f"rank {span.rank} < {len(gens)}"))

    minus = ""
    if not bad:
        for combo in span.dependencies:
            p = product_of(gens, combo, code.n)
            if p.phase_exp != 0:
                minus = "product of generators " + ",".join(
                    f"g{i + 1}" for i in range(len(gens)) if (combo >> i) & 1) + f" = {format_sparse(p)}"
                break
    else:
        minus = "anti-Hermitian generator squares to -I"
    rep.checks.append(Check("-I not in stabilizer", not minus, minus))

    lx, lz = code.logical_x, code.logical_z
    rep.checks.append(Check("logical count", len(lx) == len(lz) == code.k,
                            "" if len(lx) == len(lz) == code.k else
                            f"{len(lx)} X and {len(lz)} Z logicals for k={code.k}"))
    witness = ""
    for lbl, ops in (("X", lx), ("Z", lz)):
        for j, op in enumerate(ops):
            g = next((g for g in gens if symplectic_product(g, op)), None)
            if g is not None and not witness:
                witness = f"logical {lbl}{j} = {format_sparse(op)} anticommutes with {format_sparse(g)}"
    rep.checks.append(Check("logicals commute with generators", not witness, witness))

    witness = ""
    for i, a in enumerate(lx):
        for j, b in enumerate(lz):
            want = 1 if i == j else 0
            if symplectic_product(a, b) != want and not witness:
                witness = f"X{i} vs Z{j}: symplectic product {1 - want}, expected {want}"
    for ops in (lx, lz):
        for a, b in itertools.combinations(ops, 2):
            if symplectic_product(a, b) and not witness:
                witness = f"({format_sparse(a)}, {format_sparse(b)}) anticommute"
    rep.checks.append(Check("logical pairing", not witness, witness))

    inside = [op for op in (*lx, *lz) if span.solve(op.symplectic_vector()) is not None]
    rep.checks.append(Check("logicals outside stabilizer", not inside,
                            ", ".join(format_sparse(op) for op in inside)))
    return rep


# ---------------------------------------------------------------------------
# check matrix and standard form


@dataclass(frozen=True)
class ExtendedCheckMatrix:
    """``[H^x | H^z]`` plus a mod-4 phase column.

    The phase column uses the ``X**x Z**z`` form, so it counts one ``i`` per Y
    on top of the generator's Hermitian sign.
    """

    n: int
    k: int
    rows: np.ndarray  # (n-k, 2n) uint8
    phase_col: np.ndarray  # (n-k,) int

    @classmethod
    def from_generators(cls, generators: Sequence[PauliOperator], n: int) -> "ExtendedCheckMatrix":
        rows = np.zeros((len(generators), 2 * n), dtype=np.uint8)
        for i, g in enumerate(generators):
            rows[i, :n] = g.x_bits
            rows[i, n:] = g.z_bits
        phases = np.array([g.xz_phase for g in generators], dtype=int)
        return cls(n, n - len(generators), rows, phases)

    @classmethod
    def from_code(cls, code: StabilizerCode) -> "ExtendedCheckMatrix":
        return cls.from_generators(code.generators, code.n)

    def generators(self) -> list[PauliOperator]:
        out = []
        for row, ph in zip(self.rows, self.phase_col):
            p = PauliOperator.from_bits(row[: self.n], row[self.n:])
            out.append(PauliOperator(self.n, p.x, p.z, int(ph) - p.num_y))
        return out


@dataclass(frozen=True)
class StandardForm:
    n: int
    k: int
    r: int
    qubit_permutation: tuple[int, ...]  # standard-form qubit -> original qubit
    std_generators: tuple[PauliOperator, ...]  # in standard-form qubit labels

    @property
    def l(self) -> int:  # noqa: E743
        return self.n - self.k - self.r

    @property
    def std_phases(self) -> list[int]:
        return [g.phase_exp for g in self.std_generators]

    @property
    def check_matrix(self) -> ExtendedCheckMatrix:
        return ExtendedCheckMatrix.from_generators(self.std_generators, self.n)

    def _block(self, part: str, rows: slice, cols: slice) -> np.ndarray:
        h = self.check_matrix.rows
        off = 0 if part == "x" else self.n
        return h[rows, off + cols.start: off + cols.stop]

    @property
    def blocks(self) -> dict[str, np.ndarray]:
        r, l, n = self.r, self.l, self.n
        top, bot = slice(0, r), slice(r, r + l)
        c1, c2, c3 = slice(0, r), slice(r, r + l), slice(r + l, n)
        return {
            "A": self._block("x", top, c2), "A'": self._block("x", top, c3),
            "B": self._block("z", top, c1), "C": self._block("z", top, c3),
            "D": self._block("z", bot, c1), "E": self._block("z", bot, c3),
        }

    def shape_ok(self) -> bool:
        """Identity and zero blocks sit where the standard form puts them."""
        r, l, k, n = self.r, self.l, self.k, self.n
        h = self.check_matrix.rows
        hx, hz = h[:, :n], h[:, n:]
        return (
            np.array_equal(hx[:r, :r], np.eye(r, dtype=np.uint8))
            and not hx[r:, :].any()
            and not hz[:r, r:r + l].any()
            and np.array_equal(hz[r:, r:r + l], np.eye(l, dtype=np.uint8))
        )

    def original_generators(self) -> list[PauliOperator]:
        return [g.permuted(list(self.qubit_permutation)) for g in self.std_generators]


def _swap_qubits(p: PauliOperator, a: int, b: int) -> PauliOperator:
    if a == b:
        return p
    x, z = p.x, p.z
    if ((x >> a) ^ (x >> b)) & 1:
        x ^= (1 << a) | (1 << b)
    if ((z >> a) ^ (z >> b)) & 1:
        z ^= (1 << a) | (1 << b)
    return PauliOperator(p.n, x, z, p.phase_exp)


def standard_form(m: ExtendedCheckMatrix) -> StandardForm:
    """Reduce a check matrix to standard form by row products and qubit relabelling.

    Row additions are performed as Pauli products, so the phase column stays
    exact (mod 4) throughout.
    """
    n, k = m.n, m.k
    gens = m.generators()
    rows = len(gens)
    perm = list(range(n))
    span = GF2Span([g.symplectic_vector() for g in gens])
    if span.rank < rows:
        raise InvalidCodeError(f"generators are dependent (rank {span.rank} < {rows})")

    def swap_cols(a: int, b: int) -> None:
        if a != b:
            perm[a], perm[b] = perm[b], perm[a]
            for i in range(rows):
                gens[i] = _swap_qubits(gens[i], a, b)

    def eliminate(bit_of, t: int, candidates: range, cols: range) -> bool:
        for c in cols:
            for i in candidates:
                if bit_of(gens[i], c):
                    swap_cols(c, t)
                    gens[t], gens[i] = gens[i], gens[t]
                    return True
        return False

    def xbit(p, q):
        return (p.x >> q) & 1

    def zbit(p, q):
        return (p.z >> q) & 1

    r = 0
    while r < rows and eliminate(xbit, r, range(r, rows), range(r, n)):
        for i in range(rows):
            if i != r and xbit(gens[i], r):
                gens[i] = gens[i] * gens[r]
        r += 1

    for t in range(r, rows):
        if not eliminate(zbit, t, range(t, rows), range(t, n)):
            raise InvalidCodeError("Z block of the X-free generators is rank deficient")
        for i in range(rows):
            if i != t and zbit(gens[i], t):
                gens[i] = gens[i] * gens[t]

    return StandardForm(n, k, r, tuple(perm), tuple(gens))


def derive_logicals(sf: StandardForm) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """Logical X and Z operators read off the standard form, in original qubit labels."""
    n, k, r, l = sf.n, sf.k, sf.r, sf.l
    b = sf.blocks
    lx, lz = [], []
    for j in range(k):
        x = 1 << (r + l + j)
        z = 0
        for t in range(l):
            if b["E"][t, j]:
                x |= 1 << (r + t)
        for i in range(r):
            if b["C"][i, j]:
                z |= 1 << i
        lx.append(PauliOperator(n, x, z).permuted(list(sf.qubit_permutation)))
        z = 1 << (r + l + j)
        for i in range(r):
            if b["A'"][i, j]:
                z |= 1 << i
        lz.append(PauliOperator(n, 0, z).permuted(list(sf.qubit_permutation)))
    return lx, lz


# ---------------------------------------------------------------------------
# syndromes and membership


def syndrome_of(code: StabilizerCode, e: PauliOperator) -> str:
    """Syndrome bitstring; the leftmost bit belongs to the first generator."""
    if e.n != code.n:
        raise DimensionError(f"error acts on {e.n} qubits, code on {code.n}")
    return "".join(str(symplectic_product(g, e)) for g in code.generators)


def contains(code: StabilizerCode, p: PauliOperator, up_to_phase: bool = True) -> bool:
    if p.n != code.n:
        raise DimensionError(f"operator acts on {p.n} qubits, code on {code.n}")
    combo = code.span().solve(p.symplectic_vector())
    if combo is None:
        return False
    if up_to_phase:
        return True
    return product_of(code.generators, combo, code.n).phase_exp == p.phase_exp


class PauliClass(str, enum.Enum):
    STABILIZER = "stabilizer"
    LOGICAL = "logical"
    ERROR_DETECTING = "error-detecting"


def logical_class(code: StabilizerCode, p: PauliOperator) -> PauliClass:
    if any(symplectic_product(g, p) for g in code.generators):
        return PauliClass.ERROR_DETECTING
    if contains(code, p, up_to_phase=True):
        return PauliClass.STABILIZER
    return PauliClass.LOGICAL


def paulis_of_weight(n: int, w: int):
    """All Hermitian n-qubit Paulis of weight exactly ``w``."""
    for support in itertools.combinations(range(n), w):
        for kinds in itertools.product("XYZ", repeat=w):
            yield PauliOperator.from_terms(n, zip(support, kinds))


def min_distance(code: StabilizerCode, w_max: int) -> int | None:
    """Least weight of a logical operator, or None if every logical is heavier than ``w_max``."""
    gens = code.generators
    span = code.span()
    for w in range(1, w_max + 1):
        for p in paulis_of_weight(code.n, w):
            if any(symplectic_product(g, p) for g in gens):
                continue
            if span.solve(p.symplectic_vector()) is None:
                return w
    return None


def logical_witness(code: StabilizerCode, w: int) -> PauliOperator | None:
    """Some logical operator of weight ``w``, if one exists."""
    span = code.span()
    for p in paulis_of_weight(code.n, w):
        if all(symplectic_product(g, p) == 0 for g in code.generators) and span.solve(p.symplectic_vector()) is None:
            return p
    return None


__all__ = [
    "Check", "ExtendedCheckMatrix", "GF2Span", "InvalidCodeError", "PauliClass", "StabilizerCode",
    "StandardForm", "ValidationReport", "contains", "derive_logicals", "logical_class", "logical_witness",
    "min_distance", "product_of", "standard_form", "syndrome_of", "validate", "weight",
]
