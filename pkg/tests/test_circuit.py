import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from statevector import StateVector
from stabilab.circuit import (
    CliffordCircuit, DetectorSchedule, EncoderPhaseError, NotInvertibleError, Op, ScheduleError, adjoint,
    build_detector, build_encoder, encoder_for,
)
from stabilab.code import ExtendedCheckMatrix, StabilizerCode, standard_form, syndrome_of, validate
from stabilab.pauli import PauliOperator, format_pauli, parse_pauli, parse_sparse
from stabilab.tableau import StabilizerTableau, run


def mk(n, k, *gens):
    return StabilizerCode(n, k, tuple(parse_pauli(g, n) for g in gens))


def simulate_sv(circuit: CliffordCircuit, n: int | None = None) -> StateVector:
    sv = StateVector(n or circuit.n_qubits)
    for op in circuit.ops:
        sv.apply(op.kind, op.qubits)
    return sv


def sv_expect(sv: StateVector, p: PauliOperator) -> float:
    label = format_pauli(p.unsigned(), signed=False)
    return sv.expectation(label) * (1 if p.phase_exp == 0 else -1)


def test_encoder_single_x():
    enc = encoder_for(mk(1, 0, "X"))
    assert [(op.kind, op.qubits) for op in enc.ops] == [("H", (0,))]


def test_encoder_bell_statevector():
    enc = encoder_for(mk(2, 0, "XX", "ZZ"))
    sv = simulate_sv(enc)
    assert np.allclose(np.abs(sv.psi.reshape(-1)), [2 ** -0.5, 0, 0, 2 ** -0.5])
    assert sv_expect(sv, parse_pauli("XX")) == pytest.approx(1)
    assert sv_expect(sv, parse_pauli("ZZ")) == pytest.approx(1)


@pytest.mark.parametrize("gens", [
    ("-XX", "ZZ"), ("XX", "-ZZ"), ("-YY", "XX"), ("XZ", "ZX"), ("-Z",), ("Y",), ("-Y",),
    ("XZZX", "ZXXZ"), ("XZZXI", "IXZZX", "XIXZZ", "-ZXIXZ"), ("-XXXX", "ZZZZ", "-XYZI"), ("YII", "IYI", "-IIY"),
])
def test_encoder_statevector_oracle(gens):
    n = len(gens[0].lstrip("+-i"))
    code = mk(n, n - len(gens), *gens)
    assert validate(code.with_logicals()).ok
    enc = encoder_for(code)
    sv = simulate_sv(enc)
    for g in code.generators:
        assert sv_expect(sv, g) == pytest.approx(1), format_pauli(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_encoder_random_small_codes(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    t = StabilizerTableau(n)
    for _ in range(15):
        kind = int(rng.integers(5))
        if kind == 4 and n > 1:
            a, b = (int(v) for v in rng.choice(n, 2, replace=False))
            t.cx(a, b)
        else:
            [t.h, t.s, t.pauli_x, t.pauli_z, t.h][kind](int(rng.integers(n)))
    k = int(rng.integers(0, n))
    code = StabilizerCode(n, k, tuple(t.stabilizers()[: n - k])).with_logicals()
    enc = encoder_for(code)
    sv = simulate_sv(enc)
    for g in code.generators:
        assert sv_expect(sv, g) == pytest.approx(1)
    for lz in code.logical_z:
        assert abs(sv_expect(sv, lz)) == pytest.approx(1)


def test_encoder_table_i(code):
    enc = encoder_for(code)
    t = StabilizerTableau(8)
    t.apply_circuit(enc)
    for g in code.generators:
        assert t.measure_observable(g) == 1
    assert t.measure_observable(code.logical_z[0]) == 1
    back = adjoint(enc)
    t.apply_circuit(back)
    for q in range(8):
        assert t.measure_observable(PauliOperator.single(8, q, "Z")) == 1


def test_encoder_table_i_statevector(code):
    sv = simulate_sv(encoder_for(code))
    for g in code.generators:
        assert sv_expect(sv, g) == pytest.approx(1)
    assert sv_expect(sv, code.logical_z[0]) == pytest.approx(1)


def test_encoder_logical_one(code):
    enc = encoder_for(code)
    t = StabilizerTableau(8)
    t.pauli_x(7)  # info qubit is the last one in standard-form labels, before the swap layer
    t.apply_circuit(enc)
    for g in code.generators:
        assert t.measure_observable(g) == 1
    assert t.measure_observable(code.logical_z[0]) == -1


def test_encoder_sign_failure_is_loud(code):
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    broken = type(sf)(sf.n, sf.k, sf.r, sf.qubit_permutation,
                      (-sf.std_generators[0],) + sf.std_generators[1:])
    # flipping the sign of a standard generator is handled by the phase fix, so the circuit must verify
    build_encoder(broken, 1)
    with pytest.raises(ValueError):
        build_encoder(sf, 2)


def test_verify_catches_bad_circuit(code):
    from stabilab.circuit import _verify_encoder

    enc = encoder_for(code)
    bad = CliffordCircuit(8, enc.ops + (Op("X", (0,)),))
    with pytest.raises(EncoderPhaseError):
        _verify_encoder(bad, code.generators)


def test_detector_gate_orders(code, t1_sched, ft_sched):
    a = 8
    for sched, want in ((t1_sched, [("CZ", 0), ("CX", 3), ("CZ", 6), ("CZ", 7)]),
                        (ft_sched, [("CZ", 7), ("CX", 3), ("CZ", 0), ("CZ", 6)])):
        det = build_detector(code, sched)
        block = []
        seen = 0
        for op in det.ops:
            if op.kind == "MEASURE_X":
                seen += 1
            elif seen == 5 and op.kind in ("CX", "CY", "CZ"):
                block.append((op.kind, op.qubits[1]))
                assert op.qubits[0] == a
        assert block == want


def test_detector_noise_flags(code, ft_sched):
    det = build_detector(code, ft_sched)
    kinds = {op.kind for op in det.ops if op.noisy}
    assert kinds == {"RESET_X", "CX", "CY", "CZ", "MEASURE_X"}
    assert sum(op.kind == "MEASURE_X" for op in det.ops) == 7
    assert sorted(op.cbit for op in det.ops if op.cbit is not None) == list(range(7))
    assert all(not op.noisy for op in encoder_for(code).ops)


def test_detector_dump(code, ft_sched):
    lines = build_detector(code, ft_sched).dump().splitlines()
    assert lines[:6] == ["RX a", "CZ a d0", "CX a d1", "CZ a d2", "CZ a d4", "MX a s0"]


@pytest.mark.parametrize("q", range(8))
@pytest.mark.parametrize("kind", "XYZ")
def test_detector_matches_check_matrix(code, ft_sched, q, kind):
    t = StabilizerTableau(9)
    t.apply_circuit(encoder_for(code))
    err = PauliOperator.single(8, q, kind)
    t.apply_pauli(err)
    bits, _ = run(build_detector(code, ft_sched), state=t)
    assert "".join(map(str, bits)) == syndrome_of(code, err)


def test_detector_clean_codeword(code, t1_sched):
    t = StabilizerTableau(9)
    t.apply_circuit(encoder_for(code))
    bits, _ = run(build_detector(code, t1_sched), state=t)
    assert bits == [0] * 7
    assert syndrome_of(code, parse_sparse("X0", 8)) == "1110010"


def test_detector_signed_generator():
    code = mk(2, 0, "-XX", "ZZ")
    sched = DetectorSchedule.from_generators(code)
    det = build_detector(code, sched)
    t = StabilizerTableau(3)
    t.apply_circuit(encoder_for(code))
    bits, _ = run(det, state=t)
    assert bits == [0, 0]


def test_schedule_mismatch(code):
    rows = [list(r) for r in DetectorSchedule.from_generators(code).rows]
    rows[0][0] = (0, "X")
    with pytest.raises(ScheduleError):
        build_detector(code, DetectorSchedule.of(rows))
    with pytest.raises(ScheduleError):
        DetectorSchedule.of(rows[:3]).check(code)


def test_adjoint_examples():
    c = CliffordCircuit(1, (Op("H", (0,)),))
    assert adjoint(c).ops == c.ops
    s = CliffordCircuit(1, (Op("S", (0,)),))
    assert [op.kind for op in adjoint(s).ops] == ["S_DAG"]
    with pytest.raises(NotInvertibleError):
        adjoint(CliffordCircuit(1, (Op("MEASURE_Z", (0,), cbit=0),)))


def test_adjoint_involution(code):
    enc = encoder_for(code)
    assert adjoint(adjoint(enc)) == enc


def test_circuit_validation():
    with pytest.raises(ValueError):
        CliffordCircuit(1, (Op("H", (1,)),))
    with pytest.raises(ValueError):
        CliffordCircuit(1, (Op("MEASURE_Z", (0,), cbit=0), Op("MEASURE_Z", (0,), cbit=0)))
