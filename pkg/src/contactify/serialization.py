"""JSON matrix format, deterministic JSON output and the trajectory CSV format."""

import csv
import io
import json
import math

import numpy as np

from ._checks import ContactifyError, as_antihermitian, as_hermitian, as_unitary
from .dynamics import Trajectory

KINDS = {"hermitian": as_hermitian, "antihermitian": as_antihermitian, "unitary": as_unitary}
CSV_HEADER = ["t", "re_z1", "im_z1", "re_z2", "im_z2", "x", "y", "z", "Hhat"]


def matrix_to_json(m, kind):
    if kind not in KINDS:
        raise ContactifyError(f"unknown matrix kind {kind!r}")
    m = KINDS[kind](m)
    return {
        "kind": kind,
        "n": int(m.shape[0]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj, kind=None):
    """Parse ``{"kind", "n", "re", "im"}``; ``kind`` overrides or supplies the tag."""
    try:
        tag = kind or obj["kind"]
        n = int(obj["n"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((n, n))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ContactifyError(f"malformed matrix JSON: {exc}") from exc
    if tag not in KINDS:
        raise ContactifyError(f"unknown matrix kind {tag!r}")
    if re.shape != (n, n) or im.shape != (n, n):
        raise ContactifyError(f"matrix entries do not match n = {n}")
    return KINDS[tag](re + 1j * im)


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ContactifyError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def dumps(obj):
    """Deterministic compact JSON; floats always carry 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise ContactifyError(f"cannot serialize {type(obj).__name__}")


def trajectory_to_csv(traj):
    if traj.states.shape[1] != 2:
        raise ContactifyError("the CSV format stores trajectories on S^3 only")
    if traj.hhat is None:
        raise ContactifyError("trajectory has no Hhat samples")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for t, s, p, e in zip(traj.times, traj.states, traj.projected, traj.hhat):
        row = [t, s[0].real, s[0].imag, s[1].real, s[1].imag, p[0], p[1], p[2], e]
        w.writerow([format_float(v) for v in row])
    return buf.getvalue()


def trajectory_from_csv(text, gauge="from-csv"):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ContactifyError("trajectory CSV must start with header " + ",".join(CSV_HEADER))
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ContactifyError(f"non-numeric CSV entry: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != len(CSV_HEADER) or data.shape[0] == 0:
        raise ContactifyError("trajectory CSV has no rows or the wrong number of columns")
    times = data[:, 0]
    states = np.stack([data[:, 1] + 1j * data[:, 2], data[:, 3] + 1j * data[:, 4]], axis=1)
    step = float(times[1] - times[0]) if times.size > 1 else 0.0
    return Trajectory(times, states, data[:, 5:8], step, gauge, data[:, 8])
