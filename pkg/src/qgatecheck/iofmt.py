"""Reading and writing truth tables, gate models and reports.

Truth-table JSON::

    {"basis": "Z", "rows": [{"input": "0z0z", "probs": {"0z0z": 0.898, ...}}, ...]}

Count tables use ``"counts"`` in place of ``"probs"`` (integer entries). CSV tables carry a
header ``input,<out1>,...`` and one row per input; the basis is inferred from the labels.

Model JSON::

    {"gate": "cnot", "chi_diagonal": {"II": 0.9, "XI": 0.1}}
    {"gate": "cnot", "unitary_mixture": [{"probability": 1.0, "matrix": [[[re, im], ...], ...]}]}

Floats are written with ``repr`` precision, which round-trips exactly.
"""
import csv
import io
import json
from importlib import resources
from typing import Union

import numpy as np

from .analysis import FidelityReport, TruthTable
from .channel import NoisyGateModel
from .gates import BasisKind, SYMBOLS, SYMBOL_MASK, basis_family, cnot

GATES = {"cnot": cnot}
_BASIS_TAG = {BasisKind.Z_PRODUCT: "Z", BasisKind.X_PRODUCT: "X", BasisKind.ZX_EIGEN: "ZX",
              BasisKind.XZ_EIGEN: "XZ", BasisKind.BELL: "BELL"}

Data = Union[bytes, str]


def _text(data: Data) -> str:
    return data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data


def _load_json(data: Data):
    try:
        return json.loads(_text(data))
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from None


def _number(value, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{where}: entry {value!r} is not a number")
    if not np.isfinite(value):
        raise ValueError(f"{where}: entry is not finite")
    if value < 0:
        raise ValueError(f"{where}: negative entry {value}")
    return value


def _build_table(kind: BasisKind, rows: dict, force_counts: bool) -> TruthTable:
    """``rows`` maps input label -> {output label: value}."""
    fam = basis_family(kind)
    if set(rows) != set(fam.input_labels):
        raise ValueError(f"input labels {sorted(rows)} do not match basis {_BASIS_TAG[kind]}")
    matrix = []
    for label in fam.input_labels:
        entries = rows[label]
        if set(entries) != set(fam.output_labels):
            raise ValueError(f"output labels for input {label} do not match basis {_BASIS_TAG[kind]}")
        matrix.append([_number(entries[o], f"row {label}") for o in fam.output_labels])
    is_counts = force_counts or all(isinstance(v, int) for row in matrix for v in row)
    if is_counts:
        return TruthTable.from_counts(kind, np.array(matrix, dtype=float), fam.permutation)
    return TruthTable(kind, np.array(matrix, dtype=float), fam.permutation)


def _infer_basis(inputs, outputs) -> BasisKind:
    for kind in BasisKind:
        fam = basis_family(kind)
        if set(inputs) == set(fam.input_labels) and set(outputs) == set(fam.output_labels):
            return kind
    raise ValueError(f"labels {sorted(inputs)} match no known basis family")


def parse_truth_table(data: Data, fmt: str = "json") -> TruthTable:
    fmt = fmt.lower()
    if fmt == "json":
        doc = _load_json(data)
        if not isinstance(doc, dict) or "rows" not in doc or "basis" not in doc:
            raise ValueError("truth-table JSON needs 'basis' and 'rows'")
        kind = BasisKind.parse(doc["basis"])
        rows, counts_key = {}, False
        for row in doc["rows"]:
            if "counts" in row:
                entries, counts_key = row["counts"], True
            elif "probs" in row:
                entries = row["probs"]
            else:
                raise ValueError("each row needs 'probs' or 'counts'")
            if row.get("input") in rows:
                raise ValueError(f"duplicate input {row.get('input')!r}")
            rows[row.get("input")] = entries
        return _build_table(kind, rows, counts_key)
    if fmt == "csv":
        reader = csv.reader(io.StringIO(_text(data)))
        lines = [r for r in reader if r and any(c.strip() for c in r)]
        if not lines or lines[0][0].strip() != "input":
            raise ValueError("CSV header must start with 'input'")
        header = [h.strip() for h in lines[0][1:]]
        rows = {}
        for line in lines[1:]:
            if len(line) != len(header) + 1:
                raise ValueError(f"CSV row {line[0]!r} has {len(line) - 1} entries, expected {len(header)}")
            vals = []
            for cell in line[1:]:
                cell = cell.strip()
                try:
                    vals.append(int(cell))
                except ValueError:
                    try:
                        vals.append(float(cell))
                    except ValueError:
                        raise ValueError(f"CSV entry {cell!r} is not a number") from None
            rows[line[0].strip()] = dict(zip(header, vals))
        return _build_table(_infer_basis(rows, header), rows, False)
    raise ValueError(f"unknown table format {fmt!r}")


def emit_truth_table(table: TruthTable, fmt: str = "json") -> bytes:
    fam = basis_family(table.basis)
    values = table.probs if table.counts is None else table.counts
    cast = float if table.counts is None else int
    fmt = fmt.lower()
    if fmt == "json":
        key = "probs" if table.counts is None else "counts"
        rows = [{"input": fam.input_labels[k],
                 key: {o: cast(values[k, j]) for j, o in enumerate(fam.output_labels)}}
                for k in range(table.d)]
        doc = {"basis": _BASIS_TAG[table.basis], "rows": rows}
        return (json.dumps(doc, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["input", *fam.output_labels])
        for k in range(table.d):
            w.writerow([fam.input_labels[k], *(repr(cast(v)) for v in values[k])])
        return buf.getvalue().encode()
    raise ValueError(f"unknown table format {fmt!r}")


def _complex_entry(value, where: str) -> complex:
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return complex(value[0], value[1])
    raise ValueError(f"{where}: matrix entries must be [re, im] pairs")


def parse_model(data: Data) -> NoisyGateModel:
    doc = _load_json(data)
    if not isinstance(doc, dict):
        raise ValueError("model JSON must be an object")
    gate = doc.get("gate")
    if gate not in GATES:
        raise ValueError(f"unknown gate {gate!r}")
    ideal = GATES[gate]()
    if ("chi_diagonal" in doc) == ("unitary_mixture" in doc):
        raise ValueError("model needs exactly one of 'chi_diagonal' or 'unitary_mixture'")
    if "chi_diagonal" in doc:
        weights = doc["chi_diagonal"]
        if not isinstance(weights, dict):
            raise ValueError("'chi_diagonal' must map Pauli labels to weights")
        for lab, w in weights.items():
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise ValueError(f"weight of {lab!r} is not a number")
        return NoisyGateModel.from_chi_diagonal(weights, ideal)
    terms = []
    for i, term in enumerate(doc["unitary_mixture"]):
        p = term.get("probability", term.get("p"))
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise ValueError(f"mixture term {i} needs a numeric 'probability'")
        rows = term.get("matrix")
        if not isinstance(rows, list):
            raise ValueError(f"mixture term {i} needs a 'matrix'")
        mat = np.array([[_complex_entry(v, f"term {i}") for v in row] for row in rows])
        terms.append((p, mat))
    return NoisyGateModel.from_mixture(terms, ideal)


def emit_model(model: NoisyGateModel) -> bytes:
    gate = next((name for name, f in GATES.items() if np.allclose(f(), model.ideal)), None)
    if gate is None:
        raise ValueError("model's ideal gate has no file representation")
    doc = {"gate": gate}
    if model.chi_diagonal is not None:
        doc["chi_diagonal"] = dict(model.chi_diagonal)
    else:
        doc["unitary_mixture"] = [
            {"probability": p,
             "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in a]}
            for p, a in model.mixture]
    return (json.dumps(doc, indent=2) + "\n").encode()


def _grid_rows(grid: np.ndarray):
    order = [SYMBOL_MASK[s] for s in SYMBOLS]
    return {SYMBOLS[a]: {SYMBOLS[b]: float(grid[i, j]) for b, j in enumerate(order)}
            for a, i in enumerate(order)}


def report_dict(report: FidelityReport) -> dict:
    keys = ("f_z", "f_x", "f_qp_lo", "f_qp_lo_unclamped", "f_qp_hi", "b",
            "c_coarse", "c_coarse_raw", "d_coarse", "d_coarse_raw",
            "f_i_min", "f_c_min", "f_d_min",
            "c_refined", "c_refined_raw", "d_refined", "d_refined_raw")
    out = {k: float(getattr(report, k)) for k in keys}
    out["eta_z"] = report.eta_z.as_dict()
    out["eta_x"] = report.eta_x.as_dict()
    if report.min_fqp_grid.shape == (4, 4):
        out["min_fqp_grid"] = _grid_rows(report.min_fqp_grid)
    return out


def _f3(v: float) -> str:
    # strip binary representation noise so 0.0335 renders as 0.034
    return f"{round(float(v), 12):.3f}"


def _md_table(table: TruthTable, title: str):
    fam = basis_family(table.basis)
    lines = [f"### {title}", "",
             "| in \\ out | " + " | ".join(f"<{o}\\|" for o in fam.output_labels) + " |",
             "|---" * (table.d + 1) + "|"]
    for k, label in enumerate(fam.input_labels):
        cells = []
        for j in range(table.d):
            v = _f3(table.probs[k, j])
            cells.append(f"**{v}**" if j == table.permutation[k] else v)
        lines.append(f"| \\|{label}> | " + " | ".join(cells) + " |")
    return lines + [""]


def _md_grid(title: str, grid, row_sums, col_sums, total):
    head = "| chi_ii | " + " | ".join(f"*{s}" for s in SYMBOLS) + " | sum |"
    lines = [f"## {title}", "", head, "|---" * 6 + "|"]
    for a, r in enumerate(SYMBOLS):
        cells = [grid(r, c) for c in SYMBOLS]
        lines.append(f"| {r}* | " + " | ".join(cells) + f" | {_f3(row_sums[a])} |")
    lines.append("| sum | " + " | ".join(_f3(v) for v in col_sums) + f" | {_f3(total)} |")
    return lines + [""]


def report_markdown(report: FidelityReport) -> str:
    lines = ["# Controlled-NOT characterization report", ""]
    if report.z_table is not None and report.x_table is not None:
        lines += ["## Classical truth tables", ""]
        lines += _md_table(report.z_table, "Z basis (controlled-NOT)")
        lines += _md_table(report.x_table, "X basis (reversed controlled-NOT)")
    ez = [report.eta_z[s] for s in SYMBOLS]
    ex = [report.eta_x[s] for s in SYMBOLS]
    lines += _md_grid("Error budget and process-matrix sum relation",
                      lambda r, c: f"chi({r}{c},{r}{c})", ez, ex, sum(ez))
    if report.min_fqp_grid.shape == (4, 4):
        g = report.min_fqp_grid
        m = SYMBOL_MASK
        lines += _md_grid("Diagonal elements at minimal process fidelity",
                          lambda r, c: _f3(g[m[r], m[c]]),
                          [g[m[s], :].sum() for s in SYMBOLS],
                          [g[:, m[s]].sum() for s in SYMBOLS], g.sum())
    lines += ["## Bounds", ""] + [f"- {s}" for s in summary_lines(report)] + [""]
    return "\n".join(lines)


def summary_lines(report: FidelityReport):
    return [
        f"F_Z = {report.f_z:.3f}, F_X = {report.f_x:.3f}",
        f"F_qp in [{report.f_qp_lo:.3f}, {report.f_qp_hi:.3f}]"
        + ("" if report.f_qp_lo_unclamped >= 0 else f" (raw lower bound {report.f_qp_lo_unclamped:.3f})"),
        f"C >= {report.c_coarse:.3f} (b = {report.b:g}), D >= {report.d_coarse:.3f}",
        f"F_I >= {report.f_i_min:.3f}, F_C >= {report.f_c_min:.3f}, F_D >= {report.f_d_min:.3f}",
        f"refined: C >= {report.c_refined:.3f}, D >= {report.d_refined:.3f}",
    ]


def emit_report(report: FidelityReport, fmt: str = "json") -> bytes:
    fmt = fmt.lower()
    if fmt == "json":
        return (json.dumps(report_dict(report), indent=2) + "\n").encode()
    if fmt in ("markdown", "md"):
        return report_markdown(report).encode()
    if fmt == "text":
        return ("\n".join(summary_lines(report)) + "\n").encode()
    raise ValueError(f"unknown report format {fmt!r}")


FIXTURES = {"z": "table1_z.json", "x": "table1_x.json", "model": "table3_model.json"}


def fixture_bytes(name: str) -> bytes:
    """Raw bytes of a bundled file: ``"z"``/``"x"`` truth tables or ``"model"``."""
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}")
    return resources.files("qgatecheck").joinpath("data", FIXTURES[name]).read_bytes()


def load_fixture(name: str):
    if name == "model":
        return parse_model(fixture_bytes(name))
    return parse_truth_table(fixture_bytes(name), "json")
