"""Command-line entry point: ``contactify {integrality,orbit-info,simulate,action,verify}``.

Reports go to standard output as deterministic JSON. Domain errors exit with
status 1 and a JSON object ``{code, message, location}`` on standard error;
a failed verification suite exits with status 2.
"""

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import dynamics, integrality, orbit, verify
from ._checks import ContactifyError, STRUCTURAL_TOL
from .serialization import dumps, matrix_from_json, trajectory_from_csv, trajectory_to_csv

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2


class CliError(ContactifyError):
    """Domain error tagged with the argument or file it came from."""

    def __init__(self, message, location=None, code=None):
        super().__init__(message)
        self.location = location
        if code is not None:
            self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is reserved for verification failures
    def error(self, message):
        raise CliError(message, location="argv", code="usage")


def _read_text(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(str(exc), location=path, code="io_error") from exc


def _read_json(path):
    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(exc.msg, location=f"{path}:{exc.lineno}:{exc.colno}", code="malformed_json") from exc


def _located(fn, location, *args):
    try:
        return fn(*args)
    except CliError:
        raise
    except ContactifyError as exc:
        raise CliError(str(exc), location=location, code=exc.code) from exc


def _hermitian_input(obj, path):
    if not isinstance(obj, dict):
        raise CliError("expected a JSON object", location=path, code="malformed_input")
    return _located(matrix_from_json, path, obj, obj.get("kind", "hermitian"))


def _blocks_input(obj, path):
    if isinstance(obj, dict) and "eigenvalues" in obj:
        try:
            pairs = list(zip(obj["eigenvalues"], obj["multiplicities"], strict=True))
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(
                "eigenvalues and multiplicities must be lists of equal length",
                location=path,
                code="malformed_input",
            ) from exc
        return _located(integrality.spectral_blocks, path, pairs)
    mu = _hermitian_input(obj, path)
    return _located(integrality.blocks_from_matrix, path, mu)


def cmd_integrality(args):
    blocks = _blocks_input(_read_json(args.input), args.input)
    report = _located(integrality.build_report, args.input, blocks)
    return EXIT_OK, report.to_dict()


def cmd_orbit_info(args):
    mu = _hermitian_input(_read_json(args.input), args.input)
    return EXIT_OK, _located(orbit.orbit_info, args.input, mu)


def _hamiltonian(spec):
    """``linear-z`` or a JSON file ``{"linear": [..], "matrix": [[..]], "constant": c}``."""
    if spec == "linear-z":
        return dynamics.linear_z()
    obj = _read_json(spec)
    if not isinstance(obj, dict) or not set(obj) <= {"linear", "matrix", "constant"}:
        raise CliError(
            "Hamiltonian JSON takes only the keys linear, matrix and constant",
            location=spec,
            code="malformed_input",
        )
    try:
        return dynamics.quadratic(
            linear=obj.get("linear", (0.0, 0.0, 0.0)),
            matrix=obj.get("matrix"),
            constant=float(obj.get("constant", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        code = exc.code if isinstance(exc, ContactifyError) else "malformed_input"
        raise CliError(str(exc), location=spec, code=code) from exc


def _gauge(text):
    if text == "orthogonal":
        return 0.0
    if text.startswith("constant:"):
        try:
            c = float(text.split(":", 1)[1])
        except ValueError:
            pass
        else:
            if np.isfinite(c):
                return c
    raise CliError(f"gauge must be 'orthogonal' or 'constant:<c>', got {text!r}", location="--gauge", code="usage")


def _initial_point(values):
    x = np.array([values[0] + 1j * values[1], values[2] + 1j * values[3]])
    norm = np.linalg.norm(x)
    if not np.isfinite(norm) or norm == 0.0:
        raise CliError("initial point must be a nonzero finite vector", location="--x0", code="invariant_violation")
    return x / norm


def cmd_simulate(args):
    H = _hamiltonian(args.hamiltonian)
    gauge = _gauge(args.gauge)
    x0 = _initial_point(args.x0)
    if not (args.t1 > 0 and args.dt > 0 and np.isfinite(args.t1) and np.isfinite(args.dt)):
        raise CliError("--t1 and --dt must be positive", location="--t1/--dt", code="usage")
    traj = _located(dynamics.el_flow, "simulate", H, x0, args.t1, args.dt, gauge)
    text = trajectory_to_csv(traj)
    summary = {
        "hamiltonian": H.name,
        "gauge": traj.gauge,
        "x0": [x0[0].real, x0[0].imag, x0[1].real, x0[1].imag],
        "t1": float(traj.times[-1]),
        "step": traj.step,
        "samples": len(traj.times),
        "hhat_drift": float(np.max(np.abs(traj.hhat - traj.hhat[0]))),
        "out": args.out,
    }
    if args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK, None
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(str(exc), location=args.out, code="io_error") from exc
    return EXIT_OK, summary


def cmd_action(args):
    traj = _located(trajectory_from_csv, args.trajectory, _read_text(args.trajectory))
    H = _hamiltonian(args.hamiltonian) if args.hamiltonian else None
    value = _located(dynamics.action_functional, args.trajectory, traj, H)
    return EXIT_OK, dataclasses.asdict(value)


def _overrides(items):
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        try:
            tol = float(value)
        except ValueError:
            tol = float("nan")
        if not sep or not np.isfinite(tol):
            raise CliError(f"--tol expects name=value, got {item!r}", location="--tol", code="usage")
        if tol < STRUCTURAL_TOL:
            raise CliError(f"tolerance {tol} is below the floor {STRUCTURAL_TOL}", location="--tol", code="usage")
        out[name] = tol
    return out


def _seed(args):
    env = os.environ.get("CONTACTIFY_SEED")
    if env is None:
        return args.seed
    try:
        seed = int(env)
    except ValueError:
        seed = -1
    if seed < 0:
        raise CliError(f"CONTACTIFY_SEED must be an unsigned integer, got {env!r}", location="CONTACTIFY_SEED", code="usage")
    return seed


def cmd_verify(args):
    if args.samples <= 0:
        raise CliError("--samples must be positive", location="--samples", code="usage")
    if args.seed < 0:
        raise CliError("--seed must be an unsigned integer", location="--seed", code="usage")
    seed = _seed(args)
    results = _located(verify.run, "--tol", seed, args.samples, _overrides(args.tol))
    passed = all(r["passed"] for r in results) and len(results) == len(verify.SUITES)
    out = {"seed": seed, "samples": args.samples, "passed": passed, "suites": results}
    return (EXIT_OK if passed else EXIT_VERIFY), out


def build_parser():
    p = _Parser(prog="contactify", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("integrality", help="integrality report for a spectrum or Hermitian matrix")
    s.add_argument("input", help="JSON file, or - for standard input")
    s.set_defaults(func=cmd_integrality)

    s = sub.add_parser("orbit-info", help="isotropy and orbit dimensions of a Hermitian matrix")
    s.add_argument("input", help="matrix JSON file, or - for standard input")
    s.set_defaults(func=cmd_orbit_info)

    s = sub.add_parser("simulate", help="integrate the contactified Euler-Lagrange flow on S^3")
    s.add_argument("--hamiltonian", default="linear-z", help="linear-z or a quadratic Hamiltonian JSON file")
    s.add_argument("--x0", type=float, nargs=4, required=True, metavar=("RE_Z1", "IM_Z1", "RE_Z2", "IM_Z2"))
    s.add_argument("--t1", type=float, required=True)
    s.add_argument("--dt", type=float, required=True)
    s.add_argument("--gauge", default="orthogonal", help="orthogonal or constant:<c>")
    s.add_argument("--out", default="-", help="CSV path, or - for standard output")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("action", help="action functional of a trajectory CSV")
    s.add_argument("trajectory", help="CSV written by simulate, or - for standard input")
    s.add_argument("--hamiltonian", default=None, help="recompute Hhat instead of using the CSV column")
    s.set_defaults(func=cmd_action)

    s = sub.add_parser("verify", help="run the seeded invariant suites")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", action="append", default=[], metavar="SUITE=VALUE", help="loosen a suite tolerance")
    s.set_defaults(func=cmd_verify)
    return p


def _error(exc):
    return {
        "code": getattr(exc, "code", "domain_error"),
        "message": str(exc),
        "location": getattr(exc, "location", None),
    }


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        status, payload = args.func(args)
    except ContactifyError as exc:
        sys.stderr.write(dumps(_error(exc)) + "\n")
        return EXIT_DOMAIN
    if payload is not None:
        sys.stdout.write(dumps(payload) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
