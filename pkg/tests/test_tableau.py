import itertools

import numpy as np
import pytest
from scipy.stats import chisquare

from statevector import StateVector
from stabilab.circuit import CliffordCircuit, Op
from stabilab.pauli import PauliOperator, parse_pauli
from stabilab.tableau import FaultEvent, StabilizerTableau, run

ONE = ["H", "S", "S_DAG", "X", "Y", "Z"]
TWO = ["CX", "CY", "CZ", "SWAP"]


def random_ops(rng, n, count=12):
    ops = []
    for _ in range(count):
        if n > 1 and rng.random() < 0.45:
            a, b = (int(v) for v in rng.choice(n, 2, replace=False))
            ops.append(Op(TWO[int(rng.integers(4))], (a, b)))
        else:
            ops.append(Op(ONE[int(rng.integers(6))], (int(rng.integers(n)),)))
    return ops


def sv_distribution(ops, n):
    sv = StateVector(n)
    for op in ops:
        sv.apply(op.kind, op.qubits)
    probs = np.abs(sv.psi) ** 2
    return {bits: float(probs[bits]) for bits in itertools.product((0, 1), repeat=n)}


@pytest.mark.parametrize("seed", range(40))
def test_oracle_stabilizers(seed):
    """Every Pauli expectation agrees with the statevector oracle (with Pauli injections)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    ops = random_ops(rng, n)
    t = StabilizerTableau(n)
    sv = StateVector(n)
    for op in ops:
        t.apply_op(op)
        sv.apply(op.kind, op.qubits)
        if rng.random() < 0.2:
            q, k = int(rng.integers(n)), "XYZ"[int(rng.integers(3))]
            t.apply_pauli([(q, k)])
            sv.apply(k, (q,))
    t.check_invariants()
    for label in itertools.product("IXYZ", repeat=n):
        s = "".join(label)
        want = sv.expectation(s)
        got = t.measure_observable(parse_pauli(s))
        assert want == pytest.approx(got, abs=1e-9), s


@pytest.mark.parametrize("seed", range(6))
def test_oracle_measurement_distribution(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(2, 5))
    ops = random_ops(rng, n)
    meas = [Op("MEASURE_Z", (q,), cbit=q) for q in range(n)]
    circ = CliffordCircuit(n, tuple(ops) + tuple(meas))
    dist = sv_distribution(ops, n)
    support = [b for b, p in dist.items() if p > 1e-12]
    shots = 10_000
    counts = dict.fromkeys(support, 0)
    sampler = np.random.default_rng(seed)
    for _ in range(shots):
        bits, _ = run(circ, rng=sampler)
        key = tuple(bits)
        assert key in counts, f"outcome {key} has zero oracle probability"
        counts[key] += 1
    if len(support) > 1:
        obs = [counts[b] for b in support]
        exp = [dist[b] * shots for b in support]
        assert chisquare(obs, exp).pvalue > 1e-4


def test_gate_conjugation_rules():
    # H Z H = X: |0> -> |+>
    t = StabilizerTableau(1)
    t.h(0)
    assert t.measure_observable(parse_pauli("X")) == 1
    # S X S^dag = Y: |+> -> |+i>
    t = StabilizerTableau(1)
    t.h(0)
    t.s(0)
    assert t.measure_observable(parse_pauli("Y")) == 1
    # CX: X(x)I -> X(x)X ; Z(x)I -> Z(x)I
    t = StabilizerTableau(2)
    t.h(0)
    t.cx(0, 1)
    assert t.measure_observable(parse_pauli("XX")) == 1
    assert t.measure_observable(parse_pauli("ZZ")) == 1
    t = StabilizerTableau(2)
    t.cx(0, 1)
    assert t.measure_observable(parse_pauli("ZI")) == 1
    # CZ on |++> gives XZ and ZX stabilizers
    t = StabilizerTableau(2)
    t.h(0)
    t.h(1)
    t.cz(0, 1)
    assert t.measure_observable(parse_pauli("XZ")) == 1
    assert t.measure_observable(parse_pauli("ZX")) == 1
    # CY on |+0> gives the XY stabilizer
    t = StabilizerTableau(2)
    t.h(0)
    t.cy(0, 1)
    assert t.measure_observable(parse_pauli("XY")) == 1


def test_measure_observable_examples():
    t = StabilizerTableau(1)
    assert t.measure_observable(parse_pauli("Z")) == 1
    assert t.measure_observable(parse_pauli("X")) == 0
    assert t.measure_observable(parse_pauli("-Z")) == -1


def test_run_examples():
    bits, _ = run(CliffordCircuit(1, (Op("H", (0,)), Op("MEASURE_X", (0,), cbit=0))))
    assert bits == [0]
    bell = CliffordCircuit(2, (Op("H", (0,)), Op("CX", (0, 1)), Op("MEASURE_Z", (0,), cbit=0),
                               Op("MEASURE_Z", (1,), cbit=1)))
    rng = np.random.default_rng(5)
    outs = [run(bell, rng=rng)[0] for _ in range(2000)]
    assert all(a == b for a, b in outs)
    ones = sum(a for a, _ in outs)
    assert abs(ones - 1000) < 4 * np.sqrt(500)


def test_random_measurement_requires_rng():
    with pytest.raises(ValueError):
        run(CliffordCircuit(1, (Op("H", (0,)), Op("MEASURE_Z", (0,), cbit=0))))


def test_measurement_flip_is_record_only():
    c = CliffordCircuit(1, (Op("MEASURE_Z", (0,), cbit=0, noisy=True), Op("MEASURE_Z", (0,), cbit=1)))
    bits, _ = run(c, [FaultEvent(0, flip=True)])
    assert bits == [1, 0]


def test_preparation_flip():
    c = CliffordCircuit(1, (Op("PREP_Z", (0,), noisy=True), Op("MEASURE_Z", (0,), cbit=0)))
    assert run(c, [FaultEvent(0, flip=True)])[0] == [1]
    c = CliffordCircuit(1, (Op("RESET_X", (0,), noisy=True), Op("MEASURE_X", (0,), cbit=0)))
    assert run(c)[0] == [0]
    assert run(c, [FaultEvent(0, flip=True)])[0] == [1]


def test_fault_at_non_noise_site():
    c = CliffordCircuit(1, (Op("H", (0,)),))
    with pytest.raises(ValueError):
        run(c, [FaultEvent(0, ((0, "X"),))])


def test_reset_discards_state():
    t = StabilizerTableau(2)
    t.h(0)
    t.cx(0, 1)
    t.reset_x(0)
    assert t.measure_observable(parse_pauli("XI")) == 1
    t.check_invariants()


def test_determinism():
    rng_ops = np.random.default_rng(9)
    ops = random_ops(rng_ops, 4, 20) + [Op("MEASURE_Z", (q,), cbit=q) for q in range(4)]
    c = CliffordCircuit(4, tuple(ops))
    a = [run(c, rng=np.random.default_rng(3))[0] for _ in range(5)]
    b = [run(c, rng=np.random.default_rng(3))[0] for _ in range(5)]
    assert a == b


def test_tableau_invariants_stress():
    rng = np.random.default_rng(11)
    t = StabilizerTableau(5)
    for _ in range(300):
        r = rng.random()
        if r < 0.1:
            t.measure_z(int(rng.integers(5)), rng)
        elif r < 0.15:
            t.reset_x(int(rng.integers(5)))
        else:
            t.apply_op(random_ops(rng, 5, 1)[0])
    t.check_invariants()
    assert all(p.phase_exp in (0, 2) for p in t.stabilizers())
