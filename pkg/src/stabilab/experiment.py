"""Error-correction trials and Monte Carlo estimation of logical and total error rates.

One trial: ideal encoder on ``|0>^n``, two noisy detector rounds (a third
when they disagree), ideal lookup-table correction, optionally one ideal
detection/correction round ("modified" method), ideal adjoint encoder, and a
Z measurement of every data qubit.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import frame
from .circuit import CliffordCircuit, DetectorSchedule, adjoint, build_detector, encoder_for
from .code import StabilizerCode
from .ft import SyndromeTable, build_lookup_table, check_fault_tolerance, correct
from .noise import NoiseModel, sample_faults
from .tableau import FaultEvent, StabilizerTableau, run

PRACTICAL = "practical"
MODIFIED = "modified"
METHODS = (PRACTICAL, MODIFIED)

FIDELITY = "fidelity"
LOGICAL_ERROR = "logical_error"
OUT_OF_CODESPACE = "out_of_codespace"

CHUNK = 1 << 16


@dataclass(frozen=True)
class TrialConfig:
    code: StabilizerCode
    schedule: DetectorSchedule
    method: str = MODIFIED
    noise: NoiseModel = NoiseModel()
    max_detector_rounds: int = 3

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.max_detector_rounds < 2:
            raise ValueError("at least two detector rounds are required")


@dataclass
class TrialResult:
    classification: str
    rounds_used: int
    syndromes: list[str]
    known: bool


def classify(bits: Sequence[int], n: int, k: int) -> str:
    if any(bits[: n - k]):
        return OUT_OF_CODESPACE
    return LOGICAL_ERROR if any(bits[n - k: n]) else FIDELITY


class Pipeline:
    """Circuits and decoder tables for one (code, schedule) pair."""

    def __init__(self, code: StabilizerCode, schedule: DetectorSchedule):
        self.code = code
        self.schedule = schedule
        self.n, self.k = code.n, code.k
        self.m = code.num_generators
        self.fault_tolerant = check_fault_tolerance(code, schedule).fault_tolerant
        self.encoder = encoder_for(code)
        self.decoder = adjoint(self.encoder)
        self.detector = build_detector(code, schedule)
        self.ideal_detector = self.detector.with_noise(False)
        self.table = self._table()
        self._encoded = StabilizerTableau(self.n + 1)
        self._encoded.apply_circuit(self.encoder)

        # decoder lookup as arrays indexed by the packed syndrome
        size = 1 << self.m
        self.corr_x = np.zeros((size, self.n), dtype=bool)
        self.corr_z = np.zeros((size, self.n), dtype=bool)
        self.known = np.zeros(size, dtype=bool)
        for s, (p, _) in self.table.entries.items():
            key = int(s, 2)
            self.corr_x[key] = p.x_bits
            self.corr_z[key] = p.z_bits
            self.known[key] = True
        self._check_reference()

    def _table(self) -> SyndromeTable:
        if self.fault_tolerant:
            return build_lookup_table(self.code, self.schedule)
        # non fault-tolerant schedules still get a table: first entry per syndrome wins
        from .ft import _candidate_errors, propagated_errors, SINGLE
        from .code import syndrome_of
        from .pauli import PauliOperator

        entries = {"0" * self.m: (PauliOperator(self.n), SINGLE)}
        for err, tag in _candidate_errors(self.code, propagated_errors(self.code, self.schedule)):
            entries.setdefault(syndrome_of(self.code, err), (err, tag))
        return SyndromeTable(self.n, entries)

    def _check_reference(self) -> None:
        """The noiseless cycle must be deterministic with all-zero records."""
        res = self.run_trial(MODIFIED, faults={}, rng=None)
        if res.classification != FIDELITY or any(set(s) - {"0"} for s in res.syndromes):
            raise RuntimeError("noiseless reference cycle is not trivial")

    # -- single trials on the tableau ----------------------------------
    def run_trial(self, method: str, noise: NoiseModel | None = None, rng: np.random.Generator | None = None,
                  faults: dict[int, Sequence[FaultEvent]] | None = None, max_rounds: int = 3) -> TrialResult:
        """One trial on the tableau simulator.

        ``faults`` maps a 1-based detector round to its fault list and replaces
        sampling: rounds absent from the map run noiselessly.
        """
        state = self._encoded.copy()

        def detect(round_no: int) -> str:
            if faults is not None:
                fl = list(faults.get(round_no, ()))
            elif noise is not None and not noise.is_noiseless:
                fl = sample_faults(self.detector, noise, rng)
            else:
                fl = []
            bits, _ = run(self.detector, fl, rng, state)
            return "".join(map(str, bits))

        syndromes = [detect(1), detect(2)]
        while syndromes[-1] != syndromes[-2] and len(syndromes) < max_rounds:
            syndromes.append(detect(len(syndromes) + 1))
        corr, known = correct(syndromes[-1], self.table)
        state.apply_pauli(corr.terms())
        if method == MODIFIED:
            bits, _ = run(self.ideal_detector, (), rng, state)
            corr2, _ = correct("".join(map(str, bits)), self.table)
            state.apply_pauli(corr2.terms())
        state.apply_circuit(self.decoder, rng)
        bits = [state.measure_z(q, rng)[0] for q in range(self.n)]
        return TrialResult(classify(bits, self.n, self.k), len(syndromes), syndromes, known)

    # -- batched Pauli-frame simulation ----------------------------------
    def simulate(self, noise: NoiseModel | None, shots: int, rng: np.random.Generator | None,
                 max_rounds: int = 3, faults: dict[int, Sequence[FaultEvent]] | None = None) -> dict[str, np.ndarray]:
        """Classify ``shots`` trials under both methods from shared noisy rounds.

        Returns, per method, an int array of counts ordered
        (fidelity, logical_error, out_of_codespace).  ``faults`` (1-based
        round -> faults) are injected into every shot.
        """
        faults = faults or {}
        nq = self.n + 1
        fx = np.zeros((nq, shots), dtype=bool)
        fz = np.zeros((nq, shots), dtype=bool)
        keys = [frame.pack_bits(frame.propagate(self.detector, fx, fz, noise, rng, faults.get(r, ())))
                for r in (1, 2)]
        final = keys[1].copy()
        pending = np.flatnonzero(keys[0] != keys[1])
        last = keys[1]
        rounds = 2
        while pending.size and rounds < max_rounds:
            sx, sz = fx[:, pending], fz[:, pending]
            new = frame.pack_bits(frame.propagate(self.detector, sx, sz, noise, rng, faults.get(rounds + 1, ())))
            fx[:, pending], fz[:, pending] = sx, sz
            prev = last[pending]
            final[pending] = new
            last = last.copy()
            last[pending] = new
            pending = pending[new != prev]
            rounds += 1

        fx[: self.n] ^= self.corr_x[final].T
        fz[: self.n] ^= self.corr_z[final].T

        out = {}
        for method in METHODS:
            gx, gz = fx.copy(), fz.copy()
            if method == MODIFIED:
                proj = frame.pack_bits(frame.propagate(self.ideal_detector, gx, gz))
                gx[: self.n] ^= self.corr_x[proj].T
                gz[: self.n] ^= self.corr_z[proj].T
            frame.propagate(self.decoder, gx, gz)
            record = gx[: self.n]  # Z-basis readout flips
            anc = record[: self.n - self.k].any(axis=0)
            info = record[self.n - self.k: self.n].any(axis=0)
            fid = int(np.count_nonzero(~anc & ~info))
            log = int(np.count_nonzero(~anc & info))
            out[method] = np.array([fid, log, shots - fid - log], dtype=np.int64)
        return out


@functools.lru_cache(maxsize=32)
def pipeline_for(code: StabilizerCode, schedule: DetectorSchedule) -> Pipeline:
    return Pipeline(code, schedule)


def run_trial(cfg: TrialConfig, rng: np.random.Generator | None = None,
              faults: dict[int, Sequence[FaultEvent]] | None = None) -> TrialResult:
    pipe = pipeline_for(cfg.code, cfg.schedule)
    return pipe.run_trial(cfg.method, cfg.noise, rng, faults, cfg.max_detector_rounds)


# ---------------------------------------------------------------------------
# Monte Carlo aggregation


def substream(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for one (seed, batch, chunk, ...) coordinate."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *path])))


def default_shots(p: float) -> int:
    return max(10_000, math.ceil(100 / p)) if p > 0 else 10_000


@dataclass
class ErrorRatePoint:
    p: float
    noise: str
    method: str
    shots: int
    batches: int
    logical: list[float] = field(default_factory=list)  # per-batch rates
    total: list[float] = field(default_factory=list)
    fidelity: list[float] = field(default_factory=list)

    @staticmethod
    def _stats(v):
        return float(np.mean(v)), float(np.min(v)), float(np.max(v))

    @property
    def logical_stats(self):
        return self._stats(self.logical)

    @property
    def total_stats(self):
        return self._stats(self.total)

    @property
    def fidelity_stats(self):
        return self._stats(self.fidelity)

    def variance(self, metric: str) -> float:
        """Variance of the batch-mean estimate of ``metric``."""
        v = np.asarray(getattr(self, metric), dtype=float)
        spread = float(np.var(v, ddof=1)) / len(v) if len(v) > 1 else 0.0
        pooled = float(np.mean(v))
        n_tot = self.shots * self.batches
        return max(spread, pooled * (1 - pooled) / n_tot, 1.0 / n_tot ** 2)


def _batch_counts(pipe: Pipeline, noise: NoiseModel, shots: int, seed: int, batch: int, max_rounds: int,
                  threads: int) -> dict[str, np.ndarray]:
    chunks = [(c, min(CHUNK, shots - c * CHUNK)) for c in range(math.ceil(shots / CHUNK))]

    def job(chunk):
        c, size = chunk
        return pipe.simulate(noise, size, substream(seed, batch, c), max_rounds)

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(job, chunks))
    else:
        parts = [job(ch) for ch in chunks]
    return {m: sum(p[m] for p in parts) for m in METHODS}


def estimate_rates_all(code: StabilizerCode, schedule: DetectorSchedule, noise: NoiseModel, p: float,
                       shots: int, batches: int, seed: int, max_rounds: int = 3,
                       threads: int = 1) -> dict[str, ErrorRatePoint]:
    """Both methods at one physical error rate, sharing the sampled faults."""
    if shots < 1 or batches < 1:
        raise ValueError("shots and batches must be positive")
    pipe = pipeline_for(code, schedule)
    model = noise.with_p(p)
    points = {m: ErrorRatePoint(p, noise.kind, m, shots, batches) for m in METHODS}
    for b in range(batches):
        counts = _batch_counts(pipe, model, shots, seed, b, max_rounds, threads)
        for m in METHODS:
            fid, log, _ = (int(v) for v in counts[m])
            pt = points[m]
            pt.fidelity.append(fid / shots)
            pt.logical.append(log / shots)
            pt.total.append((shots - fid) / shots)
    return points


def estimate_rates(cfg: TrialConfig, p: float, shots: int, batches: int, seed: int,
                   threads: int = 1) -> ErrorRatePoint:
    return estimate_rates_all(cfg.code, cfg.schedule, cfg.noise, p, shots, batches, seed,
                              cfg.max_detector_rounds, threads)[cfg.method]


def estimate_rates_tableau(cfg: TrialConfig, p: float, shots: int, batches: int, seed: int) -> ErrorRatePoint:
    """Reference estimator: every trial runs on the tableau with its own substream."""
    pipe = pipeline_for(cfg.code, cfg.schedule)
    model = cfg.noise.with_p(p)
    pt = ErrorRatePoint(p, cfg.noise.kind, cfg.method, shots, batches)
    for b in range(batches):
        tally = {FIDELITY: 0, LOGICAL_ERROR: 0, OUT_OF_CODESPACE: 0}
        for t in range(shots):
            res = pipe.run_trial(cfg.method, model, substream(seed, b, t), None, cfg.max_detector_rounds)
            tally[res.classification] += 1
        pt.fidelity.append(tally[FIDELITY] / shots)
        pt.logical.append(tally[LOGICAL_ERROR] / shots)
        pt.total.append(1 - tally[FIDELITY] / shots)
    return pt
