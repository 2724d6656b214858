import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabilab.code import (
    ExtendedCheckMatrix, InvalidCodeError, PauliClass, StabilizerCode, contains, derive_logicals, logical_class,
    logical_witness, min_distance, standard_form, syndrome_of, validate,
)
from stabilab.pauli import PauliOperator, parse_pauli, parse_sparse, symplectic_product


def mk(n, k, *gens, lx=(), lz=()):
    return StabilizerCode(n, k, tuple(parse_pauli(g, n) for g in gens),
                          tuple(parse_pauli(g, n) for g in lx), tuple(parse_pauli(g, n) for g in lz))


def sp(s, n=8):
    return parse_sparse(s, n)


def test_table_i_validates(code):
    rep = validate(code)
    assert rep.ok, str(rep)
    assert len(rep.checks) >= 8


def test_commutation_witness(code):
    gens = (sp("X0"),) + code.generators[1:]
    bad = StabilizerCode(8, 1, gens, code.logical_x, code.logical_z)
    rep = validate(bad)
    assert not rep.ok
    fail = {c.name: c.witness for c in rep.failures()}
    assert fail["generators commute"] == "(X0, Y0Y2Z3Z4)"


def test_trivial_validates():
    assert validate(mk(1, 0, "Z")).ok


def test_minus_identity_detected():
    rep = validate(mk(2, 0, "XX", "-XX"))
    names = {c.name for c in rep.failures()}
    assert "generators independent" in names


def test_minus_identity_in_group():
    # XX * ZZ = -YY, so the group {XX, ZZ, YY} contains -I
    rep = validate(mk(2, -1, "XX", "ZZ", "YY"))
    names = {c.name for c in rep.failures()}
    assert "-I not in stabilizer" in names


def test_table_iii_from_golden(code):
    gold = json.loads(resources.files("stabilab.data").joinpath("single_qubit_syndromes.json").read_text())
    assert len(gold) == 24
    for err, syn in gold.items():
        assert syndrome_of(code, sp(err)) == syn, err


def test_syndrome_examples(code):
    assert syndrome_of(code, sp("X0")) == "1110010"
    assert syndrome_of(code, PauliOperator(8)) == "0000000"
    assert syndrome_of(code, sp("Z6Z7")) == "0001100" == syndrome_of(code, sp("Y5"))


def test_contains_examples(code):
    assert contains(code, sp("Z1X3X4Z7"))
    assert contains(code, code.generators[0])
    assert not contains(code, sp("Z0Z1X2Z5"))


def test_contains_with_phase(code):
    g = code.generators[0]
    assert contains(code, g, up_to_phase=False)
    assert not contains(code, -g, up_to_phase=False)
    assert contains(code, -g, up_to_phase=True)


def test_logical_class_examples(code):
    assert logical_class(code, sp("Y5Z6Z7")) == PauliClass.LOGICAL
    assert logical_class(code, sp("Z4Z6")) == PauliClass.ERROR_DETECTING
    assert syndrome_of(code, sp("Z4Z6")) == "0011001"
    assert logical_class(code, code.generators[2]) == PauliClass.STABILIZER


def test_distance(code):
    assert min_distance(code, 2) is None
    assert min_distance(code, 3) == 3
    w = logical_witness(code, 3)
    assert w is not None and logical_class(code, w) == PauliClass.LOGICAL
    assert min_distance(mk(1, 0, "Z"), 3) is None


def test_table_i_relations(code):
    gens = code.generators
    for a in gens:
        for b in gens:
            assert symplectic_product(a, b) == 0
        for lg in (*code.logical_x, *code.logical_z):
            assert symplectic_product(a, lg) == 0
    assert symplectic_product(code.logical_x[0], code.logical_z[0]) == 1


def test_check_matrix_phase_column(code):
    m = ExtendedCheckMatrix.from_code(code)
    assert m.rows.shape == (7, 16)
    # Y0Y2Z3Z4 = i^2 X0Z0 X2Z2 Z3 Z4 in X^x Z^z form
    assert m.phase_col[1] == 2
    assert [g for g in m.generators()] == list(code.generators)


def _group_equal(sf, code):
    std = StabilizerCode(code.n, code.k, tuple(sf.original_generators()))
    for g in code.generators:
        assert contains(std, g, up_to_phase=False)
    for g in std.generators:
        assert contains(code, g, up_to_phase=False)


def test_standard_form_table_i(code):
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    assert 1 <= sf.r <= 7 and sf.l == 7 - sf.r
    assert sf.shape_ok()
    assert sorted(sf.qubit_permutation) == list(range(8))
    _group_equal(sf, code)


def test_standard_form_already_standard():
    code = mk(2, 0, "XI", "IZ")
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    assert sf.qubit_permutation == (0, 1)
    assert [str(g) for g in sf.std_generators] == ["+XI", "+IZ"]


def test_standard_form_bell():
    code = mk(2, 0, "XX", "ZZ")
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    assert (sf.r, sf.l) == (1, 1)
    assert sf.shape_ok()
    _group_equal(sf, code)


def test_standard_form_rank_deficient():
    with pytest.raises(InvalidCodeError):
        standard_form(ExtendedCheckMatrix.from_code(mk(2, 0, "XX", "XX")))


def test_derived_logicals_match_table_i(code):
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    lx, lz = derive_logicals(sf)
    assert contains(code, lx[0] * code.logical_x[0])
    assert contains(code, lz[0] * code.logical_z[0])
    for g in sf.std_generators:
        assert all(symplectic_product(g, p.permuted(list(np.argsort(sf.qubit_permutation)))) == 0
                   for p in (*lx, *lz))


def test_derived_logicals_small():
    code = mk(2, 1, "XX")
    lx, lz = derive_logicals(standard_form(ExtendedCheckMatrix.from_code(code)))
    assert len(lx) == len(lz) == 1
    assert validate(code.with_logicals()).ok
    assert derive_logicals(standard_form(ExtendedCheckMatrix.from_code(mk(1, 0, "Z")))) == ([], [])


@st.composite
def stabilizer_multiples(draw):
    n = 8
    err = PauliOperator(n, draw(st.integers(0, 255)), draw(st.integers(0, 255)))
    mask = draw(st.integers(0, 127))
    return err, mask


@settings(max_examples=100)
@given(stabilizer_multiples())
def test_syndrome_invariance(code, sample):
    err, mask = sample
    s = PauliOperator(8)
    for i, g in enumerate(code.generators):
        if (mask >> i) & 1:
            s = s * g
    assert syndrome_of(code, err * s) == syndrome_of(code, err)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_standard_form_random_codes(seed):
    """Random Clifford images of |0..0> give valid codes whose standard form preserves the group."""
    from stabilab.tableau import StabilizerTableau

    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    t = StabilizerTableau(n)
    for _ in range(20):
        kind = rng.integers(4)
        a, b = (int(v) for v in rng.choice(n, 2, replace=False))
        [t.h, t.s, t.pauli_x][kind](a) if kind < 3 else t.cx(a, b)
    k = int(rng.integers(0, n))
    gens = tuple(t.stabilizers()[: n - k])
    code = StabilizerCode(n, k, gens).with_logicals()
    assert validate(code).ok
    sf = standard_form(ExtendedCheckMatrix.from_code(code))
    assert sf.shape_ok()
    _group_equal(sf, code)
