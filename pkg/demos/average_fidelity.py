"""Monte Carlo average state fidelity against (F_qp d + 1)/(d + 1).

Haar-random input states are pushed through the noisy gate and compared
with the ideal output.
"""
from qgatecheck import average_fidelity_mc, choi_fidelity
from qgatecheck.iofmt import load_fixture

model = load_fixture("model")
f_qp = choi_fidelity(model)
mean, stderr = average_fidelity_mc(model, 50_000, seed=1)
print(f"F_qp = {f_qp:.4f}")
print(f"predicted average fidelity {(4 * f_qp + 1) / 5:.4f}")
print(f"sampled average fidelity   {mean:.4f} ± {stderr:.4f}")
