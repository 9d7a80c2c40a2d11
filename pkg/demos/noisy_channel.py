"""Simulate a noisy CNOT and check the identities that tie tables to chi.

A Pauli-diagonal model and a coherent one are compared: both have
F_Z and F_X equal to row/column sums of the flip grid.
"""
import numpy as np

from qgatecheck import choi_fidelity, classical_fidelity, process_matrix, truth_table
from qgatecheck.channel import random_unitary_mixture, verify_identities
from qgatecheck.iofmt import load_fixture

models = {
    "pauli-diagonal": load_fixture("model"),
    "coherent": random_unitary_mixture(np.random.default_rng(11), terms=2, strength=0.3),
}

for name, model in models.items():
    chi = process_matrix(model)
    grid = chi.flip_grid()
    fz = classical_fidelity(truth_table(model, "z"))
    fx = classical_fidelity(truth_table(model, "x"))
    print(f"{name}:")
    print(f"  chi_00,00 = {chi.fidelity:.5f}, Choi overlap = {choi_fidelity(model):.5f}")
    print(f"  F_Z = {fz:.5f} (grid row 0 sum {grid[0].sum():.5f})")
    print(f"  F_X = {fx:.5f} (grid column 0 sum {grid[:, 0].sum():.5f})")
    worst = verify_identities(model)["max"]
    print(f"  largest identity residual {worst:.1e}")
