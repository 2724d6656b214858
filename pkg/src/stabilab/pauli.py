"""Phase-tracked n-qubit Pauli operators.

An operator is stored as two packed bit masks (bit ``q`` is qubit ``q``) plus a
phase exponent::

    P = i**phase_exp * sigma_0 (x) sigma_1 (x) ... (x) sigma_{n-1}

where each ``sigma_q`` is the Hermitian Pauli I, X, Y or Z selected by the
bits ``(x_q, z_q)`` = (0,0), (1,0), (1,1), (0,1).  With this convention the
text prefix ("+", "-", "+i", "-i") maps one-to-one onto ``phase_exp`` and all
Hermitian Paulis have ``phase_exp`` in {0, 2}.

The product ``X**x Z**z`` form used in check-matrix arithmetic differs from the
Hermitian form by one factor of ``i`` per Y (``Y = iXZ``); :attr:`xz_phase`
exposes that exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

_PREFIXES = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_FORMAT_PREFIX = ("+", "+i", "-", "-i")
_CHARS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1), "_": (0, 0)}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliOperator:
    n: int
    x: int = 0
    z: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask or self.x < 0 or self.z < 0:
            raise ValueError(f"bit masks exceed {self.n} qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def from_bits(cls, x_bits: Iterable[int], z_bits: Iterable[int], phase_exp: int = 0) -> "PauliOperator":
        xs, zs = list(x_bits), list(z_bits)
        if len(xs) != len(zs):
            raise DimensionError("x and z parts differ in length")
        x = sum(1 << q for q, b in enumerate(xs) if b)
        z = sum(1 << q for q, b in enumerate(zs) if b)
        return cls(len(xs), x, z, phase_exp)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOperator":
        """Weight-one Hermitian Pauli ``kind`` on ``qubit``."""
        bx, bz = _CHARS[kind]
        return cls(n, bx << qubit, bz << qubit)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[int, str]]) -> "PauliOperator":
        """Product of single-qubit factors, e.g. ``[(0, "Z"), (3, "X")]``.

        Factors on distinct qubits give a Hermitian operator with sign +1;
        repeated qubits are multiplied in order with full phase tracking.
        """
        out = cls(n)
        for q, kind in terms:
            out = out * cls.single(n, q, kind)
        return out

    # -- views --------------------------------------------------------
    @property
    def x_bits(self) -> list[int]:
        return [(self.x >> q) & 1 for q in range(self.n)]

    @property
    def z_bits(self) -> list[int]:
        return [(self.z >> q) & 1 for q in range(self.n)]

    @property
    def support(self) -> list[int]:
        s = self.x | self.z
        return [q for q in range(self.n) if (s >> q) & 1]

    @property
    def num_y(self) -> int:
        return _popcount(self.x & self.z)

    @property
    def xz_phase(self) -> int:
        """Exponent of ``i`` when the operator is written as ``X**x Z**z``."""
        return (self.phase_exp + self.num_y) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise ValueError("anti-Hermitian operator has no real sign")
        return 1 if self.phase_exp == 0 else -1

    def factor(self, q: int) -> str:
        return "IZXY"[((self.x >> q) & 1) << 1 | ((self.z >> q) & 1)]

    def terms(self) -> list[tuple[int, str]]:
        return [(q, self.factor(q)) for q in self.support]

    def symplectic_vector(self) -> int:
        """Packed ``(x | z)`` row: x in the low ``n`` bits, z in the high ``n``."""
        return self.x | (self.z << self.n)

    # -- algebra ------------------------------------------------------
    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, self.phase_exp + 2)

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, 0)

    def commutes(self, other: "PauliOperator") -> bool:
        return symplectic_product(self, other) == 0

    def equal_up_to_phase(self, other: "PauliOperator") -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    def permuted(self, perm: list[int]) -> "PauliOperator":
        """Move the factor on qubit ``q`` to qubit ``perm[q]``."""
        x = z = 0
        for q in range(self.n):
            x |= ((self.x >> q) & 1) << perm[q]
            z |= ((self.z >> q) & 1) << perm[q]
        return PauliOperator(self.n, x, z, self.phase_exp)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliOperator({format_pauli(self)!r})"


def _check_dims(a: PauliOperator, b: PauliOperator) -> None:
    if a.n != b.n:
        raise DimensionError(f"operands act on {a.n} and {b.n} qubits")


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """0 if ``a`` and ``b`` commute, 1 if they anticommute."""
    _check_dims(a, b)
    return _popcount((a.x & b.z) ^ (a.z & b.x)) & 1


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Operator product ``a @ b`` with exact phase."""
    _check_dims(a, b)
    x, z = a.x ^ b.x, a.z ^ b.z
    # in X^x Z^z form: moving Z^za past X^xb costs (-1)^|za & xb|
    xz = a.xz_phase + b.xz_phase + 2 * _popcount(a.z & b.x)
    return PauliOperator(a.n, x, z, xz - _popcount(x & z))


def weight(a: PauliOperator) -> int:
    return _popcount(a.x | a.z)


def parse_pauli(text: str, n: int | None = None) -> PauliOperator:
    """Parse an optionally signed dense Pauli string such as ``"-iXIZY"``."""
    s = text.strip()
    body_start = 0
    while body_start < len(s) and s[body_start] in "+-i":
        body_start += 1
    prefix, body = s[:body_start], s[body_start:]
    if prefix not in _PREFIXES:
        raise ValueError(f"bad sign prefix {prefix!r} in {text!r}")
    if n is not None and len(body) != n:
        raise ValueError(f"expected {n} Pauli characters, got {len(body)} in {text!r}")
    if not body and n is None:
        raise ValueError(f"no Pauli characters in {text!r}")
    x = z = 0
    for q, ch in enumerate(body):
        try:
            bx, bz = _CHARS[ch]
        except KeyError:
            raise ValueError(f"bad Pauli character {ch!r} in {text!r}") from None
        x |= bx << q
        z |= bz << q
    return PauliOperator(len(body), x, z, _PREFIXES[prefix])


def format_pauli(p: PauliOperator, signed: bool = True) -> str:
    body = "".join(p.factor(q) for q in range(p.n))
    if not signed:
        return body
    return _FORMAT_PREFIX[p.phase_exp] + body


def format_sparse(p: PauliOperator) -> str:
    """Subscript notation, e.g. ``Z0X3Z6Z7``; identity is ``I``."""
    body = "".join(f"{kind}{q}" for q, kind in p.terms()) or "I"
    return ("", "i", "-", "-i")[p.phase_exp] + body


def parse_sparse(text: str, n: int) -> PauliOperator:
    """Inverse of :func:`format_sparse` (sign prefix optional)."""
    s = text.strip()
    sign = 0
    for prefix, val in (("-i", 3), ("+i", 1), ("-", 2), ("+", 0), ("i", 1)):
        if s.startswith(prefix):
            sign, s = val, s[len(prefix):]
            break
    if s == "I":
        return PauliOperator(n, 0, 0, sign)
    terms = []
    i = 0
    while i < len(s):
        kind = s[i]
        if kind not in "XYZ":
            raise ValueError(f"bad Pauli factor {kind!r} in {text!r}")
        j = i + 1
        while j < len(s) and s[j].isdigit():
            j += 1
        if j == i + 1:
            raise ValueError(f"missing qubit index after {kind!r} in {text!r}")
        q = int(s[i + 1:j])
        if q >= n:
            raise ValueError(f"qubit {q} out of range for n={n}")
        terms.append((q, kind))
        i = j
    qubits = [q for q, _ in terms]
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"repeated qubit in {text!r}")
    p = PauliOperator.from_terms(n, terms)
    return PauliOperator(n, p.x, p.z, sign)
