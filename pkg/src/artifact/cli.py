"""JSON codec and command dispatch.

Documents use ``[re, im]`` pairs for complex scalars and row-major nested
lists for matrices.  Every command prints one JSON report on stdout.
Exit codes: 0 success, 1 domain error (or failed verification), 2 usage error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import matlin as ml
from .hausdorff_seq import (
    MomentSequence,
    canonical_moments,
    classify,
    derived_sequences,
    f_params,
    interval_data,
)
from .matlin import DomainError, Tolerance
from .measures import ContourConfig, MolecularMeasure, moments_from_transform
from .resolvent import MatrixPoly2q, resolvent_polynomial
from .schur_transform import f_transform
from . import solutions as so


class CodecError(ValueError):
    """Schema violation; the message starts with the offending JSON path."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}")
        self.path = path


# codec


def emit_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def parse_complex(x, path: str = "$") -> complex:
    if isinstance(x, bool):
        raise CodecError(path, "expected a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise CodecError(path, "expected a number or [re, im]")


def emit_matrix(A) -> list:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    return [[emit_complex(v) for v in row] for row in A]


def parse_matrix(x, path: str = "$", square: bool = False) -> np.ndarray:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        x = [[x]]
    if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
        raise CodecError(path, "expected a non-empty list of rows")
    width = len(x[0])
    rows = []
    for i, r in enumerate(x):
        if len(r) != width:
            raise CodecError(f"{path}[{i}]", f"row has {len(r)} entries, expected {width}")
        rows.append([parse_complex(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)])
    A = np.array(rows, dtype=complex).reshape(len(x), width)
    if square and A.shape[0] != A.shape[1]:
        raise CodecError(path, f"expected a square matrix, got {A.shape[0]}x{A.shape[1]}")
    if not np.all(np.isfinite(A)):
        raise CodecError(path, "non-finite entry")
    return A


def _field(doc: dict, key: str, path: str):
    if not isinstance(doc, dict):
        raise CodecError(path, "expected an object")
    if key not in doc:
        raise CodecError(f"{path}.{key}", "missing field")
    return doc[key]


def _real(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise CodecError(path, "expected a real number")
    return float(x)


def emit_sequence(s: MomentSequence) -> dict:
    return {"alpha": s.alpha, "beta": s.beta, "q": s.q, "moments": [emit_matrix(x) for x in s.moments]}


def parse_sequence(doc, path: str = "$") -> MomentSequence:
    al = _real(_field(doc, "alpha", path), f"{path}.alpha")
    be = _real(_field(doc, "beta", path), f"{path}.beta")
    raw = _field(doc, "moments", path)
    if not isinstance(raw, list) or not raw:
        raise CodecError(f"{path}.moments", "expected a non-empty list of matrices")
    mats = [parse_matrix(x, f"{path}.moments[{j}]", square=True) for j, x in enumerate(raw)]
    q = doc.get("q", mats[0].shape[0])
    for j, X in enumerate(mats):
        if X.shape != (q, q):
            raise CodecError(f"{path}.moments[{j}]", f"expected {q}x{q}, got {X.shape[0]}x{X.shape[1]}")
    if not al < be:
        raise CodecError(path, "need alpha < beta")
    return MomentSequence(al, be, mats)


def emit_measure(mu: MolecularMeasure) -> dict:
    return {"alpha": mu.alpha, "beta": mu.beta,
            "atoms": [{"t": t, "weight": emit_matrix(w)} for t, w in mu.atoms]}


def parse_measure(doc, path: str = "$") -> MolecularMeasure:
    al = _real(_field(doc, "alpha", path), f"{path}.alpha")
    be = _real(_field(doc, "beta", path), f"{path}.beta")
    atoms = _field(doc, "atoms", path)
    if not isinstance(atoms, list):
        raise CodecError(f"{path}.atoms", "expected a list")
    out = []
    for i, a in enumerate(atoms):
        p = f"{path}.atoms[{i}]"
        out.append((_real(_field(a, "t", p), f"{p}.t"), parse_matrix(_field(a, "weight", p), f"{p}.weight", True)))
    try:
        return MolecularMeasure(al, be, out)
    except ValueError as exc:
        raise CodecError(path, str(exc)) from exc


_PAIR_MATRICES = ("X", "Y", "M", "U", "W")


def emit_pair_spec(spec: dict) -> dict:
    out = {}
    for k, v in spec.items():
        if k in _PAIR_MATRICES and v is not None:
            v = np.asarray(v, dtype=complex)
            out[k] = [] if v.size == 0 else emit_matrix(v)
        elif k in ("f", "g"):
            out[k] = emit_complex(v)
        elif k == "inner":
            out[k] = emit_pair_spec(v)
        else:
            out[k] = v
    return out


def parse_pair_spec(doc, path: str = "$") -> dict:
    cat = _field(doc, "catalog", path)
    if cat not in so.PAIR_CATALOG:
        raise CodecError(f"{path}.catalog", f"unknown catalog {cat!r}")
    out = {"catalog": cat}
    for k, v in doc.items():
        if k == "catalog":
            continue
        if k in _PAIR_MATRICES:
            out[k] = None if v is None else (np.zeros((0, 0)) if v == [] else parse_matrix(v, f"{path}.{k}"))
        elif k in ("f", "g"):
            out[k] = parse_complex(v, f"{path}.{k}")
        elif k == "inner":
            out[k] = parse_pair_spec(v, f"{path}.inner")
        else:
            out[k] = v
    if cat == "subspace" and isinstance(out.get("U"), np.ndarray) and out["U"].size == 0:
        out["U"] = None
    return out


def emit_poly(P: MatrixPoly2q) -> dict:
    return {"q": P.q, "coeffs": [emit_matrix(C) for C in P.coeffs]}


def parse_poly(doc, path: str = "$") -> MatrixPoly2q:
    q = _field(doc, "q", path)
    if not isinstance(q, int) or q < 1:
        raise CodecError(f"{path}.q", "expected a positive integer")
    raw = _field(doc, "coeffs", path)
    mats = [parse_matrix(x, f"{path}.coeffs[{n}]", True) for n, x in enumerate(raw)]
    for n, C in enumerate(mats):
        if C.shape != (2 * q, 2 * q):
            raise CodecError(f"{path}.coeffs[{n}]", f"expected {2 * q}x{2 * q}")
    return MatrixPoly2q(q, np.stack(mats))


def to_doc(x):
    """Generic emitter for reports: dataclasses, arrays, complex and containers."""
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {f.name: to_doc(getattr(x, f.name)) for f in dataclasses.fields(x) if f.repr}
    if isinstance(x, np.ndarray):
        return emit_matrix(x) if x.ndim == 2 else [to_doc(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return emit_complex(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): to_doc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_doc(v) for v in x]
    return x


# commands


@dataclass(frozen=True)
class JobConfig:
    tol: Tolerance
    contour: ContourConfig
    seed: int = 7
    trials: int = 50


def _load(arg: str, what: str = "document"):
    """Inline JSON, ``-`` for stdin, or a file path."""
    try:
        if arg == "-":
            return json.load(sys.stdin)
        if arg.lstrip().startswith(("{", "[")):
            return json.loads(arg)
        return json.loads(Path(arg).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CodecError("$", f"cannot read {what}: {exc}") from exc


def _points(raw) -> list:
    pts = []
    for a in raw or []:
        try:
            parts = [float(v) for v in a.split(",")]
        except ValueError:
            raise CodecError("--at", f"expected re,im but got {a!r}") from None
        if len(parts) not in (1, 2):
            raise CodecError("--at", f"expected re,im but got {a!r}")
        pts.append(complex(parts[0], parts[1] if len(parts) == 2 else 0.0))
    if not pts:
        raise CodecError("--at", "give at least one evaluation point")
    return pts


def _values(F, pts) -> list:
    return [{"z": emit_complex(z), "value": emit_matrix(F(z))} for z in pts]


def cmd_check(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    return to_doc(classify(s, cfg.tol))


def cmd_params(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    der = derived_sequences(s)
    iv = interval_data(s, cfg.tol)
    rep = classify(s, cfg.tol)
    doc = {
        "a": der.a, "b": der.b, "c": der.c, "u": iv.u, "o": iv.o, "d": iv.d,
        "f": f_params(s, cfg.tol), "e": canonical_moments(s, cfg.tol).e if rep.is_fgg else None,
    }
    return to_doc(doc)


def cmd_transform(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    if not classify(s, cfg.tol).is_fgg:
        raise DomainError("transform: sequence is not Hausdorff nonnegative definite")
    return emit_sequence(f_transform(s, a.k, cfg.tol))


def cmd_resolvent(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    return emit_poly(resolvent_polynomial(s, a.m, a.factorization, cfg.tol))


def cmd_solve(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    spec = parse_pair_spec(_load(a.pair, "pair"), "$pair")
    pts = _points(a.at)
    pair = so.make_pair(spec, s, a.m, tol=cfg.tol)
    F = so.solution(s, a.m, pair, cfg.tol)
    return {"pair": emit_pair_spec(spec), "m": a.m, "values": _values(F, pts)}


def cmd_special(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    pts = _points(a.at)
    return {"which": a.which, "values": _values(so.special(s, a.which, cfg.tol), pts)}


def cmd_moments_of(a, cfg):
    s = parse_sequence(_load(a.seq, "sequence"))
    if a.count < 1:
        raise CodecError("--count", "must be at least 1")
    F = so.special(s, a.which, cfg.tol)
    got = moments_from_transform(F, a.count - 1, s.alpha, s.beta, cfg.contour)
    return {"which": a.which, "sequence": emit_sequence(got)}


def cmd_verify(a, cfg):
    from .verify import run_checks

    res = run_checks(cfg.seed, cfg.trials, cfg.tol, cfg.contour, a.only or None)
    doc = {"seed": cfg.seed, "trials": cfg.trials, "passed": all(r.passed for r in res),
           "checks": [to_doc(r) for r in res]}
    return doc


COMMANDS = {
    "check": cmd_check, "params": cmd_params, "transform": cmd_transform, "resolvent": cmd_resolvent,
    "solve": cmd_solve, "special": cmd_special, "moments-of": cmd_moments_of, "verify": cmd_verify,
}


def _globals(p: argparse.ArgumentParser, default):
    g = p.add_argument_group("global options")
    g.add_argument("--rank-rtol", type=float, default=default)
    g.add_argument("--psd-atol", type=float, default=default)
    g.add_argument("--contour-nodes", type=int, default=default)
    g.add_argument("--contour-radius-factor", type=float, default=default)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description="Truncated matricial Hausdorff moment problem toolkit.")
    _globals(p, None)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help):
        sp = sub.add_parser(name, help=help)
        _globals(sp, argparse.SUPPRESS)
        return sp

    for name, help in (("check", "classify a sequence"), ("params", "derived sequences and parameters")):
        add(name, help).add_argument("seq")
    sp = add("transform", "k-fold Schur transform")
    sp.add_argument("seq")
    sp.add_argument("--k", type=int, required=True)
    sp = add("resolvent", "resolvent matrix polynomial")
    sp.add_argument("seq")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--factorization", choices=("V", "U"), default="V")
    sp = add("solve", "evaluate the solution for a parameter pair")
    sp.add_argument("seq")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--at", action="append", metavar="RE,IM")
    sp = add("special", "evaluate a special solution")
    sp.add_argument("seq")
    sp.add_argument("--which", choices=so.SPECIAL, required=True)
    sp.add_argument("--at", action="append", metavar="RE,IM")
    sp = add("moments-of", "moments of a special solution by contour quadrature")
    sp.add_argument("seq")
    sp.add_argument("--which", choices=so.SPECIAL, required=True)
    sp.add_argument("--count", type=int, required=True, help="number of moments s_0..s_{N-1}")
    sp = add("verify", "run the seeded invariant suite")
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--only", action="append", metavar="NAME", help="check or module name")
    return p


def _config(a) -> JobConfig:
    base_t, base_c = Tolerance(), ContourConfig()
    tol = Tolerance(
        rank_rtol=a.rank_rtol if a.rank_rtol is not None else base_t.rank_rtol,
        psd_atol=a.psd_atol if a.psd_atol is not None else base_t.psd_atol,
        herm_atol=base_t.herm_atol,
    )
    contour = ContourConfig(
        radius_factor=a.contour_radius_factor if a.contour_radius_factor is not None else base_c.radius_factor,
        nodes=a.contour_nodes if a.contour_nodes is not None else base_c.nodes,
    )
    return JobConfig(tol, contour, getattr(a, "seed", 7), getattr(a, "trials", 50))


def run(argv=None, out=None) -> int:
    """Parse ``argv``, run the command and write its report; returns the exit code."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = _config(a)
        doc = COMMANDS[a.command](a, cfg)
    except CodecError as exc:
        json.dump({"error": "usage", "path": exc.path, "message": str(exc)}, out)
        out.write("\n")
        return 2
    except DomainError as exc:
        json.dump({"error": "domain", "message": str(exc)}, out)
        out.write("\n")
        return 1
    except ValueError as exc:
        json.dump({"error": "usage", "message": str(exc)}, out)
        out.write("\n")
        return 2
    json.dump(doc, out, indent=2)
    out.write("\n")
    if a.command == "verify" and not doc["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
