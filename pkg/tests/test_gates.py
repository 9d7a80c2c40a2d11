import itertools

import numpy as np
import pytest

from qgatecheck.gates import (LABELS, SYMBOL_MASK, BasisKind, basis_family, cnot, family_states,
                              flip_pattern, label_from_pattern, pauli, pauli_labels,
                              preserved_errors)
from qgatecheck.qmath import is_hermitian, is_unitary

# Error labels in canonical order, i = j_z j_x
PAPER_LIST = dict(zip(
    "00 C0 T0 B0 0C CC TC BC 0T CT TT BT 0B CB TB BB".split(),
    "II XI IX XX ZI YI ZX YX IZ XZ IY XY ZZ YZ ZY YY".split()))


def ket(bits):
    v = np.zeros(4, dtype=complex)
    v[int(bits, 2)] = 1
    return v


def test_pauli_basics():
    np.testing.assert_array_equal(pauli("II"), np.eye(4))
    np.testing.assert_allclose(pauli("XI") @ ket("00"), ket("10"))
    for lab in LABELS:
        assert is_unitary(pauli(lab)) and is_hermitian(pauli(lab))


def test_pauli_yy_from_product():
    np.testing.assert_allclose(pauli("YY"), -pauli("XX") @ pauli("ZZ"), atol=1e-12)


@pytest.mark.parametrize("bad", ["", "XA", "xi", None])
def test_pauli_malformed(bad):
    with pytest.raises(ValueError):
        pauli(bad)


def test_pauli_labels_distinct():
    assert len(set(LABELS)) == 16
    mats = {pauli(lab).tobytes() for lab in LABELS}
    assert len(mats) == 16
    assert len(set(pauli_labels(3))) == 64


def test_cnot_truth_table():
    np.testing.assert_allclose(cnot() @ ket("10"), ket("11"))
    np.testing.assert_allclose(cnot() @ cnot(), np.eye(4))


def test_cnot_reversed_in_x_basis():
    plus, minus = np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)
    out = cnot() @ np.kron(plus, minus)
    assert abs(abs(np.vdot(np.kron(minus, minus), out)) - 1) < 1e-12


def test_flip_pattern_matches_label_list():
    for pattern, label in PAPER_LIST.items():
        fp = flip_pattern(label)
        assert fp.symbol == pattern
        assert label_from_pattern(SYMBOL_MASK[pattern[0]], SYMBOL_MASK[pattern[1]]) == label
    assert LABELS == tuple(PAPER_LIST.values())


def test_flip_pattern_examples():
    assert flip_pattern("YI").symbol == "CC"
    assert flip_pattern("II").symbol == "00"
    assert flip_pattern("ZX").symbol == "TC"


def test_flip_pattern_bijection():
    pairs = {(flip_pattern(lab).j_z, flip_pattern(lab).j_x) for lab in LABELS}
    assert pairs == set(itertools.product(range(4), range(4)))
    three = {(flip_pattern(lab).j_z, flip_pattern(lab).j_x) for lab in pauli_labels(3)}
    assert len(three) == 64


@pytest.mark.parametrize("kind,attr", [(BasisKind.Z_PRODUCT, "j_z"), (BasisKind.X_PRODUCT, "j_x")])
def test_flip_pattern_is_executable(kind, attr):
    states, _ = family_states(kind)
    for lab in LABELS:
        mask = getattr(flip_pattern(lab), attr)
        for k, s in enumerate(states):
            assert abs(abs(np.vdot(states[k ^ mask], pauli(lab) @ s)) - 1) < 1e-12


def test_family_permutations():
    assert basis_family("z").permutation == (0, 1, 3, 2)
    assert basis_family("x").permutation == (0, 3, 2, 1)
    for kind in ("zx", "xz", "bell"):
        assert basis_family(kind).permutation == (0, 1, 2, 3)


def test_zx_members_are_cnot_eigenstates():
    fam = basis_family("zx")
    np.testing.assert_allclose(cnot() @ fam.inputs[0], fam.inputs[0], atol=1e-12)
    for s in fam.inputs:
        assert abs(abs(np.vdot(s, cnot() @ s)) - 1) < 1e-12


def test_entangler_output_is_bell():
    fam = basis_family("xz")
    phi_plus = (ket("00") + ket("11")) / np.sqrt(2)
    np.testing.assert_allclose(cnot() @ fam.inputs[0], phi_plus, atol=1e-12)


@pytest.mark.parametrize("kind", list(BasisKind))
def test_families_orthonormal_and_realized(kind):
    fam = basis_family(kind)
    for states in (fam.inputs, fam.outputs):
        np.testing.assert_allclose(np.conj(states) @ states.T, np.eye(4), atol=1e-12)
    for k, s in enumerate(fam.inputs):
        assert abs(abs(np.vdot(fam.outputs[fam.permutation[k]], cnot() @ s)) - 1) < 1e-12


def test_preserved_errors_known_sets():
    assert preserved_errors("zx") == {"II", "ZI", "IX", "ZX"}
    assert preserved_errors("bell") == {"II", "XX", "YY", "ZZ"}
    assert preserved_errors("xz") == {"II", "XI", "IZ", "XZ"}


def test_preserved_errors_unsupported():
    with pytest.raises(ValueError):
        preserved_errors("ghz")
