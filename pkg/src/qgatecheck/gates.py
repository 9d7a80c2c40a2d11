"""Gate catalog, measurement-basis families and the flip-pattern labeling of Pauli errors.

Qubit order is (control, target): the control is the leftmost tensor factor and the
most significant bit of every basis index, so ``|c t>`` has index ``2*c + t``.

A Pauli error is characterised by which output bits it flips when the output is read
in the Z basis (``j_z``: letters X or Y) and in the X basis (``j_x``: letters Z or Y).
For two qubits the masks are rendered with the symbols ``0, C, T, B`` (no flip, control,
target, both).
"""
import enum
import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Tuple

import numpy as np

from .qmath import tensor

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_1Q = {"I": I2, "X": X, "Y": Y, "Z": Z}

# (flips Z-basis bit, flips X-basis bit) -> letter
_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_FLIPS = {v: k for k, v in _LETTER.items()}

# Two-qubit rendering of flip masks, in table order.
SYMBOLS = ("0", "C", "T", "B")
SYMBOL_MASK = {"0": 0b00, "C": 0b10, "T": 0b01, "B": 0b11}
MASK_SYMBOL = {m: s for s, m in SYMBOL_MASK.items()}


def _check_label(label: str) -> str:
    if not isinstance(label, str) or not label or any(c not in PAULI_1Q for c in label):
        raise ValueError(f"malformed Pauli label {label!r}")
    return label


def pauli(label: str) -> np.ndarray:
    """Matrix of a Pauli product such as ``"ZX"`` (first letter acts on the control)."""
    _check_label(label)
    return tensor(*(PAULI_1Q[c] for c in label))


def cnot() -> np.ndarray:
    return np.array([[1, 0, 0, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1],
                     [0, 0, 1, 0]], dtype=complex)


def identity(n_qubits: int = 2) -> np.ndarray:
    return np.eye(2 ** n_qubits, dtype=complex)


@dataclass(frozen=True)
class FlipPattern:
    """Output bit flips of a Pauli error in the Z basis and in the X basis."""
    j_z: int
    j_x: int
    n_qubits: int = 2

    @property
    def symbol(self) -> str:
        return pattern_symbol(self.j_z, self.n_qubits) + pattern_symbol(self.j_x, self.n_qubits)

    def __str__(self):
        return self.symbol


def pattern_symbol(mask: int, n_qubits: int = 2) -> str:
    """``0/C/T/B`` for two qubits, a bit string otherwise."""
    if n_qubits == 2:
        return MASK_SYMBOL[mask]
    return format(mask, f"0{n_qubits}b")


def pattern_mask(symbol, n_qubits: int = 2) -> int:
    if isinstance(symbol, (int, np.integer)):
        if not 0 <= symbol < 2 ** n_qubits:
            raise ValueError(f"flip mask {symbol} out of range")
        return int(symbol)
    if n_qubits == 2 and symbol in SYMBOL_MASK:
        return SYMBOL_MASK[symbol]
    if len(symbol) == n_qubits and set(symbol) <= {"0", "1"}:
        return int(symbol, 2)
    raise ValueError(f"unknown flip-pattern symbol {symbol!r}")


def flip_pattern(label: str) -> FlipPattern:
    _check_label(label)
    n = len(label)
    j_z = j_x = 0
    for q, c in enumerate(label):
        fz, fx = _FLIPS[c]
        bit = 1 << (n - 1 - q)
        j_z |= bit * fz
        j_x |= bit * fx
    return FlipPattern(j_z, j_x, n)


def label_from_pattern(j_z: int, j_x: int, n_qubits: int = 2) -> str:
    bits = [((j_z >> (n_qubits - 1 - q)) & 1, (j_x >> (n_qubits - 1 - q)) & 1)
            for q in range(n_qubits)]
    return "".join(_LETTER[b] for b in bits)


def pauli_labels(n_qubits: int = 2) -> Tuple[str, ...]:
    """
    All 4**n Pauli labels in flip-pattern order: ``j_x`` major, ``j_z`` minor, each
    running over the masks in symbol order (for two qubits: II, XI, IX, XX, ZI, YI, ...).
    """
    if n_qubits == 2:
        masks = [SYMBOL_MASK[s] for s in SYMBOLS]
    else:
        masks = list(range(2 ** n_qubits))
    return tuple(label_from_pattern(jz, jx, n_qubits) for jx in masks for jz in masks)


LABELS = pauli_labels(2)


class BasisKind(str, enum.Enum):
    Z_PRODUCT = "z"
    X_PRODUCT = "x"
    ZX_EIGEN = "zx"
    XZ_EIGEN = "xz"
    BELL = "bell"

    @classmethod
    def parse(cls, value) -> "BasisKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip()
        for kind in cls:
            if key.lower() == kind.value or key.upper() == kind.name:
                return kind
        raise ValueError(f"unsupported basis kind {value!r}")


_ZKET = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))
_XKET = (np.array([1, 1], dtype=complex) / np.sqrt(2), np.array([1, -1], dtype=complex) / np.sqrt(2))
BELL_LABELS = ("phi+", "psi+", "phi-", "psi-")


def _product_states(first, second) -> np.ndarray:
    return np.array([tensor(a, b) for a, b in itertools.product(first, second)])


def _product_labels(c_tag: str, t_tag: str):
    return tuple(f"{c}{c_tag}{t}{t_tag}" for c, t in itertools.product("01", "01"))


def family_states(kind) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """Member states (as rows) and canonical labels of one orthonormal two-qubit basis."""
    kind = BasisKind.parse(kind)
    if kind is BasisKind.Z_PRODUCT:
        return _product_states(_ZKET, _ZKET), _product_labels("z", "z")
    if kind is BasisKind.X_PRODUCT:
        return _product_states(_XKET, _XKET), _product_labels("x", "x")
    if kind is BasisKind.ZX_EIGEN:
        return _product_states(_ZKET, _XKET), _product_labels("z", "x")
    if kind is BasisKind.XZ_EIGEN:
        return _product_states(_XKET, _ZKET), _product_labels("x", "z")
    # Bell member k is the ideal CNOT image of XZ member k
    xz, _ = family_states(BasisKind.XZ_EIGEN)
    return np.array([cnot() @ s for s in xz]), BELL_LABELS


# input family -> family the ideal CNOT output is read in
OUTPUT_KIND = {
    BasisKind.Z_PRODUCT: BasisKind.Z_PRODUCT,
    BasisKind.X_PRODUCT: BasisKind.X_PRODUCT,
    BasisKind.ZX_EIGEN: BasisKind.ZX_EIGEN,
    BasisKind.XZ_EIGEN: BasisKind.BELL,
    BasisKind.BELL: BasisKind.XZ_EIGEN,
}


@dataclass(frozen=True, eq=False)
class BasisFamily:
    """
    Input states of a classical test of the gate and the basis its outputs are read in.

    ``permutation[k]`` is the index of the output member the ideal gate sends input ``k`` to.
    """
    kind: BasisKind
    inputs: np.ndarray
    outputs: np.ndarray
    permutation: Tuple[int, ...]
    input_labels: Tuple[str, ...]
    output_labels: Tuple[str, ...]

    @property
    def d(self) -> int:
        return len(self.permutation)

    @property
    def output_kind(self) -> BasisKind:
        return OUTPUT_KIND[self.kind]


def induced_permutation(gate: np.ndarray, inputs: np.ndarray, outputs: np.ndarray,
                        atol: float = 1e-9) -> Tuple[int, ...]:
    """Index of the output member each input is mapped onto, up to global phase."""
    overlaps = np.abs(np.conj(outputs) @ (gate @ inputs.T))  # [out, in]
    perm = []
    for k in range(inputs.shape[0]):
        j = int(np.argmax(overlaps[:, k]))
        if abs(overlaps[j, k] - 1) > atol:
            raise ValueError(f"gate does not map input {k} onto a single output member")
        perm.append(j)
    return tuple(perm)


def basis_family(kind, gate: np.ndarray = None) -> BasisFamily:
    kind = BasisKind.parse(kind)
    gate = cnot() if gate is None else gate
    inputs, in_labels = family_states(kind)
    outputs, out_labels = family_states(OUTPUT_KIND[kind])
    perm = induced_permutation(gate, inputs, outputs)
    return BasisFamily(kind, inputs, outputs, perm, in_labels, out_labels)


def preserving_errors(states: np.ndarray, n_qubits: int = 2, atol: float = 1e-9) -> FrozenSet[str]:
    """Pauli labels that leave every given state invariant up to a phase."""
    keep = set()
    for label in pauli_labels(n_qubits):
        p = pauli(label)
        if all(abs(abs(np.vdot(s, p @ s)) - 1) <= atol for s in states):
            keep.add(label)
    return frozenset(keep)


def preserved_errors(kind) -> FrozenSet[str]:
    """
    Output errors that cannot be seen when outputs are read in the ``kind`` family.

    ZX eigenstates: {II, ZI, IX, ZX}; Bell states (entangler outputs): {II, XX, YY, ZZ};
    XZ eigenstates (Bell-analyzer outputs): {II, XI, IZ, XZ}.
    """
    states, _ = family_states(BasisKind.parse(kind))
    return preserving_errors(states)
