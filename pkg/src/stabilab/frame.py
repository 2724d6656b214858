"""Batched Pauli-frame propagation.

Every circuit in the error-correction cycle is Clifford and its noiseless
reference run has deterministic all-zero measurement records, so a shot is
fully described by the Pauli frame it carries.  Frames for a batch of shots
are stored as boolean arrays of shape ``(qubits, shots)``.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .circuit import CliffordCircuit
from .noise import NoiseModel, apply_frame_noise
from .tableau import FaultEvent


def propagate(circuit: CliffordCircuit, fx: np.ndarray, fz: np.ndarray, noise: NoiseModel | None = None,
              rng: np.random.Generator | None = None, inject: Sequence[FaultEvent] = ()) -> np.ndarray:
    """Push frames through ``circuit`` in place; returns record flips, shape ``(cbits, shots)``.

    ``inject`` adds fixed faults to every shot, on top of sampled noise.
    """
    shots = fx.shape[1]
    fixed: dict[int, list[FaultEvent]] = {}
    for f in inject:
        fixed.setdefault(f.site, []).append(f)
    record = np.zeros((circuit.num_cbits, shots), dtype=bool)
    for i, op in enumerate(circuit.ops):
        kind, qs = op.kind, op.qubits
        if kind == "H":
            q = qs[0]
            fx[q], fz[q] = fz[q].copy(), fx[q].copy()
        elif kind in ("S", "S_DAG"):
            fz[qs[0]] ^= fx[qs[0]]
        elif kind == "CX":
            c, t = qs
            fx[t] ^= fx[c]
            fz[c] ^= fz[t]
        elif kind == "CZ":
            c, t = qs
            fz[t] ^= fx[c]
            fz[c] ^= fx[t]
        elif kind == "CY":
            c, t = qs
            fz[c] ^= fx[t] ^ fz[t]
            fx[t] ^= fx[c]
            fz[t] ^= fx[c]
        elif kind == "SWAP":
            a, b = qs
            fx[[a, b]] = fx[[b, a]]
            fz[[a, b]] = fz[[b, a]]
        elif kind == "MEASURE_Z":
            record[op.cbit] = fx[qs[0]]
        elif kind == "MEASURE_X":
            record[op.cbit] = fz[qs[0]]
        elif kind in ("PREP_Z", "PREP_X", "RESET_X"):
            fx[qs[0]] = False
            fz[qs[0]] = False
        # X, Y, Z gates leave frames unchanged
        if op.noisy and noise is not None:
            flips = apply_frame_noise(op, noise, fx, fz, rng, shots)
            if flips is not None and op.cbit is not None:
                record[op.cbit, flips] ^= True
        for f in fixed.get(i, ()):
            for q, p in f.paulis:
                fx[q] ^= p in "XY"
                fz[q] ^= p in "YZ"
            if f.flip:
                if op.cbit is not None:
                    record[op.cbit] ^= True
                elif kind in ("PREP_Z", "PREP_X", "RESET_X"):
                    (fx if kind == "PREP_Z" else fz)[qs[0]] ^= True
    return record


def pack_bits(record: np.ndarray) -> np.ndarray:
    """Integer key per shot; row 0 of ``record`` is the most significant bit."""
    m = record.shape[0]
    weights = (1 << np.arange(m - 1, -1, -1)).astype(np.int64)
    return weights @ record.astype(np.int64)
