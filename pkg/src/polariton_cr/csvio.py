"""Deterministic CSV encoding of intensity traces."""

from __future__ import annotations

import io

import numpy as np

from .model import ModelParams
from .traces import CoherentState, IntensityTrace, NumberState


def fmt(x: float) -> str:
    """Shortest round-trip scientific notation."""
    return np.format_float_scientific(float(x), unique=True, trim="-")


def header_line(trace: IntensityTrace, convention: str = "exact") -> str:
    p, s = trace.params, trace.state
    n = s.N if isinstance(s, NumberState) else fmt(s.nbar)
    fields = [
        f"method={trace.method}", f"state={s.kind}", f"n={n}", f"g={fmt(p.g)}", f"A={fmt(p.A)}",
        f"B={fmt(p.B)}", f"delta={fmt(p.delta)}", f"gamma1={fmt(p.gamma1)}", f"gamma2={fmt(p.gamma2)}",
    ]
    if isinstance(s, CoherentState) and s.phi:
        fields.append(f"phi={fmt(s.phi)}")
    if convention != "exact":
        fields.append(f"convention={convention}")
    return "# " + " ".join(fields)


def format_table(header: str, names, columns) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    buf.write(",".join(names) + "\n")
    for row in zip(*columns):
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def trace_to_csv(trace: IntensityTrace, envelope=None, convention: str = "exact") -> str:
    names = ["t", "intensity"]
    cols = [trace.times, trace.intensity]
    if envelope is not None:
        names.append("envelope")
        cols.append(envelope)
    return format_table(header_line(trace, convention), names, cols)


def _parse_header(line: str) -> dict:
    if not line.startswith("#"):
        raise ValueError("trace CSV must start with a '# method=...' header line")
    out = {}
    for token in line[1:].split():
        key, sep, value = token.partition("=")
        if not sep:
            raise ValueError(f"malformed header token {token!r}")
        out[key] = value
    return out


def read_trace_csv(text: str) -> IntensityTrace:
    """Inverse of trace_to_csv; parameters are rebuilt in the omega_ex = 0 frame."""
    lines = text.splitlines()
    if len(lines) < 4:
        raise ValueError("trace CSV needs a header, a column line and at least two rows")
    meta = _parse_header(lines[0])
    cols = lines[1].split(",")
    if cols[:2] != ["t", "intensity"]:
        raise ValueError(f"unexpected columns {lines[1]!r}")
    try:
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines[2:] if ln], dtype=float)
        params = ModelParams(float(meta["delta"]), 0.0, float(meta["g"]), float(meta["A"]), float(meta["B"]),
                             float(meta["gamma1"]), float(meta["gamma2"]))
        if meta["state"] == "number":
            state = NumberState(int(meta["n"]))
        else:
            state = CoherentState(float(meta["n"]), float(meta.get("phi", 0.0)))
    except KeyError as exc:
        raise ValueError(f"header is missing {exc.args[0]!r}") from None
    if data.ndim != 2 or data.shape[1] != len(cols):
        raise ValueError("ragged trace CSV")
    return IntensityTrace(data[:, 0], data[:, 1], meta["method"], state, params,
                          {"convention": meta.get("convention", "exact")})
