"""Bound the process fidelity of a CNOT from two measured truth tables.

Loads the bundled Z-basis and X-basis tables, prints the classical fidelities,
the error budget per flip pattern and the derived bounds.
"""
from qgatecheck import full_report
from qgatecheck.iofmt import emit_report, load_fixture

z = load_fixture("z")
x = load_fixture("x")
report = full_report(z, x, b=0.5)

print(emit_report(report, "text").decode())

# errors seen in one basis are invisible in the other, so the lower bound
# is simply F_Z + F_X - 1
print(f"F_Z + F_X - 1 = {report.f_z + report.f_x - 1:.5f}")
for sym in "CTB":
    print(f"  eta_z({sym}) = {report.eta_z[sym]:.5f}   eta_x({sym}) = {report.eta_x[sym]:.5f}")
