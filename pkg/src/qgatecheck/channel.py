"""Noisy two-qubit gate models and their exact and sampled simulation.

A model is an ideal unitary U0 plus either a Pauli-diagonal process matrix (weights of
output errors F_i applied after U0) or a probabilistic mixture of unitaries A_m. The
process matrix is always expressed in the output-error basis U_i = F_i U0.
"""
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import qmath
from .analysis import TruthTable, classical_fidelity
from .gates import (BasisFamily, LABELS, basis_family, cnot, flip_pattern, pauli,
                    pauli_labels)

WEIGHT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class NoisyGateModel:
    """
    Either ``chi_diagonal`` (label -> weight) or ``mixture`` ((p_m, A_m) pairs) is set.

    Use :meth:`from_chi_diagonal`, :meth:`from_mixture` or :func:`ideal_model` rather than
    the raw constructor.
    """
    ideal: np.ndarray
    chi_diagonal: Optional[Mapping[str, float]] = None
    mixture: Optional[Tuple[Tuple[float, np.ndarray], ...]] = None

    def __post_init__(self):
        ideal = qmath.as_matrix(self.ideal)
        if not qmath.is_unitary(ideal):
            raise ValueError("ideal operation is not unitary")
        object.__setattr__(self, "ideal", ideal)
        if (self.chi_diagonal is None) == (self.mixture is None):
            raise ValueError("give exactly one of chi_diagonal or mixture")
        n = self.n_qubits
        if self.chi_diagonal is not None:
            weights = {}
            for label, w in self.chi_diagonal.items():
                if len(label) != n:
                    raise ValueError(f"label {label!r} does not act on {n} qubits")
                flip_pattern(label)
                w = float(w)
                if not np.isfinite(w) or w < 0:
                    raise ValueError(f"weight of {label} must be nonnegative, got {w}")
                weights[label] = weights.get(label, 0.0) + w
            total = sum(weights.values())
            if abs(total - 1) > WEIGHT_TOL:
                raise ValueError(f"chi_diagonal weights sum to {total:.12g}, not 1")
            object.__setattr__(self, "chi_diagonal", weights)
        else:
            terms = []
            for p, a in self.mixture:
                p = float(p)
                a = qmath.as_matrix(a)
                if not np.isfinite(p) or p < 0:
                    raise ValueError(f"mixture probability must be nonnegative, got {p}")
                if a.shape != ideal.shape:
                    raise ValueError(f"mixture operator has shape {a.shape}, expected {ideal.shape}")
                if not qmath.is_unitary(a, atol=1e-9):
                    raise ValueError("mixture operator is not unitary")
                terms.append((p, a))
            if not terms:
                raise ValueError("mixture is empty")
            total = sum(p for p, _ in terms)
            if abs(total - 1) > WEIGHT_TOL:
                raise ValueError(f"mixture probabilities sum to {total:.12g}, not 1")
            object.__setattr__(self, "mixture", tuple(terms))

    @classmethod
    def from_chi_diagonal(cls, weights: Mapping[str, float], ideal=None) -> "NoisyGateModel":
        return cls(cnot() if ideal is None else ideal, chi_diagonal=dict(weights))

    @classmethod
    def from_mixture(cls, terms: Sequence[Tuple[float, np.ndarray]], ideal=None) -> "NoisyGateModel":
        return cls(cnot() if ideal is None else ideal, mixture=tuple(terms))

    @property
    def d(self) -> int:
        return self.ideal.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(np.log2(self.d)))

    @property
    def variant(self) -> str:
        return "chi_diagonal" if self.chi_diagonal is not None else "unitary_mixture"

    def operators(self) -> Tuple[Tuple[float, np.ndarray], ...]:
        """The model as a mixture of unitaries, (weight, operator) pairs."""
        if self.mixture is not None:
            return self.mixture
        return tuple((w, pauli(label) @ self.ideal) for label, w in self.chi_diagonal.items())


def ideal_model(ideal=None) -> NoisyGateModel:
    ideal = cnot() if ideal is None else ideal
    n = int(round(np.log2(ideal.shape[0])))
    return NoisyGateModel.from_chi_diagonal({"I" * n: 1.0}, ideal)


def validate_density(rho: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    rho = qmath.as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not qmath.is_hermitian(rho, atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh((rho + qmath.adjoint(rho)) / 2).min() < -atol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def apply(model: NoisyGateModel, rho: np.ndarray) -> np.ndarray:
    """E(rho) = sum_m p_m A_m rho A_m^dagger."""
    rho = qmath.as_matrix(rho)
    if rho.shape != model.ideal.shape:
        raise ValueError(f"state has shape {rho.shape}, model acts on {model.ideal.shape}")
    out = np.zeros_like(rho)
    for p, a in model.operators():
        out += p * (a @ rho @ qmath.adjoint(a))
    return out


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """chi in the basis U_i = F_i U0; ``matrix[i, j]`` pairs ``labels[i]`` with ``labels[j]``."""
    labels: Tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (len(self.labels),) * 2:
            raise ValueError("process matrix shape does not match its labels")
        if not qmath.is_hermitian(m, 1e-10):
            raise ValueError("process matrix is not Hermitian")
        if np.real(np.diag(m)).min() < -1e-10:
            raise ValueError("process matrix has negative diagonal entries")
        if np.linalg.eigvalsh((m + qmath.adjoint(m)) / 2).min() < -1e-9:
            raise ValueError("process matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    def __getitem__(self, pair) -> complex:
        a, b = pair
        return complex(self.matrix[self._index[a], self._index[b]])

    @property
    def fidelity(self) -> float:
        return float(np.real(self["I" * len(self.labels[0]), "I" * len(self.labels[0])]))

    def diagonal(self) -> Dict[str, float]:
        return {lab: float(np.real(self.matrix[i, i])) for i, lab in enumerate(self.labels)}

    def flip_grid(self) -> np.ndarray:
        """Diagonal entries arranged as ``grid[j_z, j_x]``."""
        n = len(self.labels[0])
        grid = np.zeros((2 ** n, 2 ** n))
        for lab, w in self.diagonal().items():
            fp = flip_pattern(lab)
            grid[fp.j_z, fp.j_x] = w
        return grid


def process_matrix(model: NoisyGateModel) -> ProcessMatrix:
    labels = pauli_labels(model.n_qubits) if model.n_qubits != 2 else LABELS
    index = {lab: i for i, lab in enumerate(labels)}
    chi = np.zeros((len(labels), len(labels)), dtype=complex)
    if model.chi_diagonal is not None:
        for lab, w in model.chi_diagonal.items():
            chi[index[lab], index[lab]] = w
        return ProcessMatrix(labels, chi)
    basis = [pauli(lab) @ model.ideal for lab in labels]
    for p, a in model.mixture:
        c = np.array([qmath.hs_coefficient(u, a) for u in basis])
        chi += p * np.outer(c, np.conj(c))
    return ProcessMatrix(labels, chi)


def _max_entangled(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)


def choi_fidelity(model: NoisyGateModel) -> float:
    """
    Fidelity of the channel acting on one half of a maximally entangled pair.

    Computed directly on the d^2-dimensional pair, without going through chi.
    """
    d = model.d
    e_max = _max_entangled(d)
    rho = qmath.projector(e_max)
    eye = np.eye(d)
    out = np.zeros_like(rho)
    for p, a in model.operators():
        big = qmath.tensor(a, eye)
        out += p * (big @ rho @ qmath.adjoint(big))
    target = qmath.tensor(model.ideal, eye) @ e_max
    return float(np.real(np.vdot(target, out @ target)))


def average_fidelity_mc(model: NoisyGateModel, samples: int, seed: Optional[int] = None,
                        ) -> Tuple[float, float]:
    """
    Monte-Carlo mean of <psi|U0^dagger E(|psi><psi|) U0|psi> over Haar-random inputs.

    :return: (mean, standard error of the mean)
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    psi = qmath.haar_states(model.d, samples, rng)
    u0_dag = qmath.adjoint(model.ideal)
    fid = np.zeros(samples)
    for p, a in model.operators():
        # <psi| U0^dag A |psi> for every sample row
        amp = np.einsum("si,ij,sj->s", np.conj(psi), u0_dag @ a, psi)
        fid += p * np.abs(amp) ** 2
    mean = float(fid.mean())
    stderr = float(fid.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return mean, stderr


def truth_table(model: NoisyGateModel, family) -> TruthTable:
    """Exact output probabilities of every family input, read in the family's output basis."""
    if not isinstance(family, BasisFamily):
        family = basis_family(family)
    if model.d != family.d:
        raise ValueError("model and basis family differ in dimension")
    probs = np.zeros((family.d, family.d))
    for k, s in enumerate(family.inputs):
        out = apply(model, qmath.projector(s))
        probs[k] = np.real(np.einsum("ji,ik,jk->j", np.conj(family.outputs), out, family.outputs))
    probs = np.clip(probs, 0, None)
    return TruthTable(family.kind, probs, family.permutation, row_tol=1e-10)


def sample_counts(table: TruthTable, shots_per_row: int, seed: Optional[int] = None) -> TruthTable:
    """Multinomial finite-statistics version of a table, one draw per input row."""
    if shots_per_row < 1:
        raise ValueError("shots_per_row must be >= 1")
    rng = np.random.default_rng(seed)
    p = table.probs / table.probs.sum(axis=1, keepdims=True)
    counts = np.array([rng.multinomial(shots_per_row, row) for row in p])
    return TruthTable.from_counts(table.basis, counts, table.permutation)


def verify_identities(model: NoisyGateModel) -> Dict[str, float]:
    """
    Cross-check simulated classical fidelities against process-matrix bookkeeping.

    Residuals (all should vanish):

    * ``f_z`` / ``f_x``: simulated classical fidelity minus the diagonal sum over cells with
      no Z (resp. X) flip;
    * ``sum_rule``: trace of the diagonal minus one;
    * ``reconstruction``: F_Z + F_X - 1 + (mass flipped in both bases) minus chi_00,00;
    * ``choi``: entangled-pair fidelity minus chi_00,00.

    ``max`` holds the largest absolute residual.
    """
    chi = process_matrix(model)
    grid = chi.flip_grid()
    f_z_sim = classical_fidelity(truth_table(model, "z"))
    f_x_sim = classical_fidelity(truth_table(model, "x"))
    f_qp = chi.fidelity
    res = {
        "f_z": f_z_sim - grid[0, :].sum(),
        "f_x": f_x_sim - grid[:, 0].sum(),
        "sum_rule": grid.sum() - 1.0,
        "reconstruction": f_z_sim + f_x_sim - 1 + grid[1:, 1:].sum() - f_qp,
        "choi": choi_fidelity(model) - f_qp,
    }
    res = {k: float(v) for k, v in res.items()}
    res["max"] = max(abs(v) for v in res.values())
    return res


def random_chi_diagonal(rng: np.random.Generator, sparsity: float = 0.0) -> NoisyGateModel:
    """Pauli-diagonal CNOT model with Dirichlet(1) weights, optionally zeroing some entries."""
    w = rng.dirichlet(np.ones(len(LABELS)))
    if sparsity > 0:
        w = np.where(rng.random(len(w)) < sparsity, 0.0, w)
        if w.sum() == 0:
            w[0] = 1.0
        w = w / w.sum()
    return NoisyGateModel.from_chi_diagonal(dict(zip(LABELS, w)))


def random_unitary_mixture(rng: np.random.Generator, terms: int = 3,
                           strength: Optional[float] = None) -> NoisyGateModel:
    """
    CNOT followed by random unitary errors, mixed with Dirichlet weights.

    With ``strength`` each error is exp(-i strength H) for a random Hermitian H, keeping
    the model close to the ideal gate; otherwise errors are Haar random.
    """
    d = 4
    u0 = cnot()
    out = []
    for p in rng.dirichlet(np.ones(terms)):
        if strength is None:
            err = qmath.haar_unitary(d, rng)
        else:
            h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            h = (h + qmath.adjoint(h)) / 2
            evals, evecs = np.linalg.eigh(h)
            err = evecs @ np.diag(np.exp(-1j * strength * evals)) @ qmath.adjoint(evecs)
        out.append((p, err @ u0))
    return NoisyGateModel.from_mixture(out, u0)
