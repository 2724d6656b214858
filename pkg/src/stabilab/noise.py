"""Circuit-level noise models and fault sampling."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np

from .circuit import MEASUREMENTS, PREPARATIONS, SINGLE_QUBIT_GATES, TWO_QUBIT_GATES, CliffordCircuit
from .tableau import FaultEvent

STANDARD_DEPOLARIZING = "standard_depolarizing"
ANISOTROPIC = "anisotropic"
KINDS = (STANDARD_DEPOLARIZING, ANISOTROPIC)
PAULI_PAIRS = [(a, b) for a in "IXYZ" for b in "IXYZ"][1:]  # 15 non-identity two-qubit Paulis


@dataclass(frozen=True)
class NoiseModel:
    kind: str = STANDARD_DEPOLARIZING
    p_s: float = 0.0
    p_t: float = 0.0
    p_meas: float = 0.0
    p_prep: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise model {self.kind!r}; expected one of {KINDS}")
        for name in ("p_s", "p_t", "p_meas", "p_prep"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} is not a probability")

    @classmethod
    def uniform(cls, kind: str, p: float) -> "NoiseModel":
        return cls(kind, p, p, p, p)

    def with_p(self, p: float) -> "NoiseModel":
        return replace(self, p_s=p, p_t=p, p_meas=p, p_prep=p)

    @property
    def is_noiseless(self) -> bool:
        return self.p_s == self.p_t == self.p_meas == self.p_prep == 0.0


def _uniform_single(rng: np.random.Generator) -> str:
    return "XYZ"[int(rng.integers(3))]


def sample_faults(circuit: CliffordCircuit, noise: NoiseModel, rng: np.random.Generator) -> list[FaultEvent]:
    """Draw one fault configuration for the noise sites of ``circuit``."""
    faults = []
    for site, op in enumerate(circuit.ops):
        if not op.noisy:
            continue
        if op.kind in TWO_QUBIT_GATES:
            c, t = op.qubits
            paulis = []
            if noise.kind == STANDARD_DEPOLARIZING:
                if rng.random() < noise.p_t:
                    a, b = PAULI_PAIRS[int(rng.integers(15))]
                    paulis = [(q, k) for q, k in ((c, a), (t, b)) if k != "I"]
            else:
                if op.controlled_pauli and rng.random() < noise.p_t:
                    paulis = [(c, "Z"), (t, op.controlled_pauli)]
                for q in (c, t):
                    if rng.random() < noise.p_s:
                        paulis.append((q, _uniform_single(rng)))
            if paulis:
                faults.append(FaultEvent(site, tuple(paulis)))
        elif op.kind in SINGLE_QUBIT_GATES:
            if rng.random() < noise.p_s:
                faults.append(FaultEvent(site, ((op.qubits[0], _uniform_single(rng)),)))
        elif op.kind in MEASUREMENTS:
            if rng.random() < noise.p_meas:
                faults.append(FaultEvent(site, flip=True))
        elif op.kind in PREPARATIONS:
            if rng.random() < noise.p_prep:
                faults.append(FaultEvent(site, flip=True))
    return faults


def single_faults(circuit: CliffordCircuit) -> Iterator[FaultEvent]:
    """Every elementary fault at every noise site: 15 Pauli pairs per two-qubit gate,
    3 Paulis per single-qubit gate, and one flip per measurement or preparation."""
    for site, op in enumerate(circuit.ops):
        if not op.noisy:
            continue
        if op.kind in TWO_QUBIT_GATES:
            c, t = op.qubits
            for a, b in PAULI_PAIRS:
                yield FaultEvent(site, tuple((q, k) for q, k in ((c, a), (t, b)) if k != "I"))
        elif op.kind in SINGLE_QUBIT_GATES:
            for k in "XYZ":
                yield FaultEvent(site, ((op.qubits[0], k),))
        elif op.kind in MEASUREMENTS or op.kind in PREPARATIONS:
            yield FaultEvent(site, flip=True)


# ---------------------------------------------------------------------------
# vectorised sampling for the Pauli-frame engine

_X_OF = np.array([0, 1, 1, 0], dtype=bool)  # index: 0=I 1=X 2=Y 3=Z
_Z_OF = np.array([0, 0, 1, 1], dtype=bool)
_CODE = {"I": 0, "X": 1, "Y": 2, "Z": 3}


def _hits(rng: np.random.Generator, shots: int, p: float) -> np.ndarray:
    """Indices of the shots hit by an independent event of probability ``p``."""
    if p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(shots)
    k = int(rng.binomial(shots, p))
    return rng.choice(shots, size=k, replace=False)


def apply_frame_noise(op, noise: NoiseModel, fx: np.ndarray, fz: np.ndarray, rng: np.random.Generator,
                      shots: int) -> np.ndarray | None:
    """Inject faults for one noise site into a batch of Pauli frames (shape ``(qubits, shots)``).

    Returns the shot indices whose classical record flips (measurements only).
    """
    if op.kind in TWO_QUBIT_GATES:
        c, t = op.qubits
        if noise.kind == STANDARD_DEPOLARIZING:
            idx = _hits(rng, shots, noise.p_t)
            if idx.size:
                code = rng.integers(1, 16, size=idx.size)
                for q, part in ((c, code >> 2), (t, code & 3)):
                    fx[q, idx] ^= _X_OF[part]
                    fz[q, idx] ^= _Z_OF[part]
        else:
            if op.controlled_pauli:
                idx = _hits(rng, shots, noise.p_t)
                if idx.size:
                    fz[c, idx] ^= True
                    code = _CODE[op.controlled_pauli]
                    fx[t, idx] ^= _X_OF[code]
                    fz[t, idx] ^= _Z_OF[code]
            for q in (c, t):
                _single(q, noise.p_s, fx, fz, rng, shots)
    elif op.kind in SINGLE_QUBIT_GATES:
        _single(op.qubits[0], noise.p_s, fx, fz, rng, shots)
    elif op.kind in MEASUREMENTS:
        return _hits(rng, shots, noise.p_meas)
    elif op.kind in PREPARATIONS:
        idx = _hits(rng, shots, noise.p_prep)
        (fx if op.kind == "PREP_Z" else fz)[op.qubits[0], idx] ^= True
    return None


def _single(q, p, fx, fz, rng, shots) -> None:
    idx = _hits(rng, shots, p)
    if idx.size:
        code = rng.integers(1, 4, size=idx.size)
        fx[q, idx] ^= _X_OF[code]
        fz[q, idx] ^= _Z_OF[code]
