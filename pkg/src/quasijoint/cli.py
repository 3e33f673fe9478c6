"""Command-line front end.

Reads observables, states and schemes from JSON, runs the engine, and
writes CSV or JSON tables with deterministic formatting (17 significant
digits, lexicographically sorted support) and stable exit codes:

    0  success
    1  numerical failure (rank-deficient tomography, no atomic form)
    2  parse error (unreadable file, malformed JSON)
    3  validation error (well-formed input violating a constraint)
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analysis, distributions, quantum
from .errors import (
    DomainError,
    ParseError,
    QuasiJointError,
    ValidationError,
)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3

SCHEME_NAMES = ("kirkwood", "s_alpha", "margenau_hill", "born_jordan", "wigner")
COMMANDS = (
    "compute",
    "marginals",
    "tomography",
    "rank",
    "verify",
    "charfunc",
    "degeneracy",
    "scan-realness",
)


def fmt_g(x) -> str:
    """Fixed 17-significant-digit decimal formatting."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class JobConfig:
    """Canonical description of one CLI invocation."""

    command: str
    observables: tuple = ()
    state: str = None
    scheme: str = None
    out: str = None
    fmt: str = "csv"
    tolerances: dict = field(default_factory=dict)
    grid: str = None
    params: dict = field(default_factory=dict)

    def canonical_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "JobConfig":
        doc = json.loads(text)
        doc["observables"] = tuple(doc.get("observables", ()))
        return cls(**doc)


# ---------------------------------------------------------------------------
# input parsing


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def _parse_complex_matrix(node, where: str) -> np.ndarray:
    if not isinstance(node, list) or not node:
        raise ValidationError("expected a nonempty list of rows", field=where)
    n = len(node)
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(node):
        if not isinstance(row, list) or len(row) != n:
            raise ValidationError(
                f"expected {n} entries in row {i} of a square matrix",
                field=f"{where}[{i}]",
            )
        for j, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) for v in entry)
            ):
                raise ValidationError(
                    "matrix entries must be [re, im] number pairs",
                    field=f"{where}[{i}][{j}]",
                )
            out[i, j] = complex(entry[0], entry[1])
    return out


def _spin_component(token: str, component, where: str) -> quantum.HermitianObservable:
    try:
        j = Fraction(token.split(":", 1)[1])
    except (IndexError, ValueError) as exc:
        raise ValidationError(f"cannot parse spin token {token!r}", field=where) from exc
    j_times_two = 2 * j
    if j_times_two.denominator != 1 or j_times_two < 1:
        raise ValidationError(f"spin must be a positive multiple of 1/2, got {j}", field=where)
    if component not in (1, 2, 3):
        raise ValidationError(f"component must be 1, 2 or 3, got {component}", field=where)
    triple = quantum.spin_operators(int(j_times_two))
    return triple.components[component - 1]


def parse_observable(doc, where: str) -> quantum.HermitianObservable:
    if not isinstance(doc, dict):
        raise ValidationError("observable document must be a JSON object", field=where)
    if "builtin" in doc:
        return _spin_component(str(doc["builtin"]), doc.get("component", 3), f"{where}:builtin")
    if "matrix" not in doc:
        raise ValidationError("need either 'builtin' or 'matrix'", field=where)
    m = _parse_complex_matrix(doc["matrix"], f"{where}:matrix")
    dim = doc.get("dim", m.shape[0])
    if dim != m.shape[0]:
        raise ValidationError(
            f"declared dim {dim} does not match matrix size {m.shape[0]}",
            field=f"{where}:dim",
        )
    defect = np.abs(m - m.conj().T)
    if defect.max() > 1e-10:
        i, j = np.unravel_index(int(defect.argmax()), defect.shape)
        raise ValidationError(
            f"matrix is not Hermitian (entry [{i}][{j}] vs [{j}][{i}])",
            field=f"{where}:matrix[{i}][{j}]",
        )
    return quantum.HermitianObservable(m, label=doc.get("label", where))


def parse_state(doc, where: str) -> quantum.DensityState:
    if not isinstance(doc, dict):
        raise ValidationError("state document must be a JSON object", field=where)
    if "bloch" in doc:
        b = doc["bloch"]
        if not isinstance(b, dict):
            raise ValidationError("'bloch' must be an object", field=f"{where}:bloch")
        try:
            return quantum.bloch_state(
                float(b.get("theta", 0.0)),
                float(b.get("phi", 0.0)),
                float(b.get("m", 1.0)),
            )
        except DomainError as exc:
            raise ValidationError(str(exc), field=f"{where}:bloch") from exc
    if "density" not in doc:
        raise ValidationError("need either 'density' or 'bloch'", field=where)
    m = _parse_complex_matrix(doc["density"], f"{where}:density")
    try:
        return quantum.DensityState(m)
    except (DomainError, QuasiJointError) as exc:
        raise ValidationError(str(exc), field=f"{where}:density") from exc


def _scheme_from_name(name: str, n_vars: int, alpha, nodes, where: str):
    if name == "kirkwood":
        return distributions.scheme_kirkwood(n_vars)
    if name == "wigner":
        return distributions.WignerScheme(n_vars)
    if n_vars != 2:
        raise ValidationError(
            f"scheme {name!r} is defined for two observables, got {n_vars}", field=where
        )
    if name == "s_alpha":
        return distributions.scheme_s_alpha(0.5 if alpha is None else float(alpha))
    if name == "margenau_hill":
        return distributions.scheme_margenau_hill(0.0 if alpha is None else float(alpha))
    if name == "born_jordan":
        return distributions.scheme_born_jordan(201 if nodes is None else int(nodes))
    raise ValidationError(
        f"unknown scheme {name!r}; expected one of {SCHEME_NAMES}", field=where
    )


def parse_scheme(doc, n_vars: int, where: str):
    if not isinstance(doc, dict):
        raise ValidationError("scheme document must be a JSON object", field=where)
    if "name" in doc:
        return _scheme_from_name(
            str(doc["name"]), n_vars, doc.get("alpha"), doc.get("nodes"), f"{where}:name"
        )
    if "terms" not in doc:
        raise ValidationError("need either 'name' or 'terms'", field=where)
    terms = []
    for t_idx, term in enumerate(doc["terms"]):
        tw = f"{where}:terms[{t_idx}]"
        if not isinstance(term, dict) or "weight" not in term or "word" not in term:
            raise ValidationError("each term needs 'weight' and 'word'", field=tw)
        w = term["weight"]
        if not isinstance(w, list) or len(w) != 2:
            raise ValidationError("weight must be a [re, im] pair", field=f"{tw}:weight")
        word = []
        for f_idx, factor in enumerate(term["word"]):
            fw = f"{tw}:word[{f_idx}]"
            if not isinstance(factor, dict):
                raise ValidationError("factor must be an object", field=fw)
            try:
                word.append(
                    (int(factor["var"]), float(factor["coeff"]), int(factor["obs"]))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(
                    "factor needs integer 'var'/'obs' and numeric 'coeff'", field=fw
                ) from exc
        terms.append((complex(w[0], w[1]), word))
    try:
        return distributions.SchemeSpec(n_vars, tuple(terms))
    except DomainError as exc:
        raise ValidationError(str(exc), field=where) from exc


def resolve_scheme(token: str, n_vars: int):
    """Scheme from a file path, or from a name token like 's_alpha:0.25'."""
    if token is None:
        raise ValidationError("a scheme is required", field="--scheme")
    if Path(token).exists():
        return parse_scheme(_load_json(token), n_vars, token)
    name, _, arg = token.partition(":")
    if name not in SCHEME_NAMES:
        raise ParseError(
            f"--scheme {token!r} is neither an existing file nor a known scheme name"
        )
    alpha = nodes = None
    if arg:
        if name == "born_jordan":
            try:
                nodes = int(arg)
            except ValueError as exc:
                raise ValidationError(f"bad node count {arg!r}", field="--scheme") from exc
        else:
            try:
                alpha = float(arg)
            except ValueError as exc:
                raise ValidationError(f"bad parameter {arg!r}", field="--scheme") from exc
    return _scheme_from_name(name, n_vars, alpha, nodes, "--scheme")


def parse_grid(text: str, n_vars: int) -> np.ndarray:
    """Cartesian grid from 'min:max:steps' specs, one per variable."""
    if text is None:
        raise ValidationError("charfunc needs --grid", field="--grid")
    parts = text.split(",")
    if len(parts) != n_vars:
        raise ValidationError(
            f"grid needs {n_vars} comma-separated ranges, got {len(parts)}", field="--grid"
        )
    axes = []
    for part in parts:
        pieces = part.split(":")
        if len(pieces) != 3:
            raise ValidationError(f"range {part!r} is not min:max:steps", field="--grid")
        try:
            lo, hi, steps = float(pieces[0]), float(pieces[1]), int(pieces[2])
        except ValueError as exc:
            raise ValidationError(f"range {part!r} is not numeric", field="--grid") from exc
        if steps < 1:
            raise ValidationError("steps must be at least 1", field="--grid")
        axes.append(np.linspace(lo, hi, steps))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


# ---------------------------------------------------------------------------
# command runners: each returns (header, rows, footers, json_payload)


def _load_problem(cfg: JobConfig, *, need_state=True, n_obs=None):
    observables = tuple(
        parse_observable(_load_json(p), p) for p in cfg.observables
    )
    if not observables:
        raise ValidationError("at least one --obs is required", field="--obs")
    if n_obs is not None and len(observables) != n_obs:
        raise ValidationError(f"this command needs exactly {n_obs} observables", field="--obs")
    dims = {o.dim for o in observables}
    if len(dims) > 1:
        raise ValidationError(f"observables have mixed dimensions {sorted(dims)}", field="--obs")
    scheme = resolve_scheme(cfg.scheme, len(observables))
    state = None
    if need_state:
        if cfg.state is None:
            raise ValidationError("this command needs --state", field="--state")
        state = parse_state(_load_json(cfg.state), cfg.state)
        if state.dim != observables[0].dim:
            raise ValidationError(
                f"state dim {state.dim} does not match observable dim {observables[0].dim}",
                field=cfg.state,
            )
    return observables, scheme, state


def _weight_table(dist):
    header = [f"x{v + 1}" for v in range(dist.n_vars)] + ["weight_re", "weight_im"]
    rows = [
        [fmt_g(c) for c in p] + [fmt_g(w.real), fmt_g(w.imag)]
        for p, w in zip(dist.points, dist.weights)
    ]
    total = dist.total()
    footers = [
        f"sum_weight_re={fmt_g(total.real)} sum_weight_im={fmt_g(total.imag)}",
    ]
    if dist.meta.get("approximate"):
        footers.append("approximate=true")
    payload = {
        "points": [[float(c) for c in p] for p in dist.points],
        "weights": [[float(w.real), float(w.imag)] for w in dist.weights],
        "weight_sum": [float(total.real), float(total.imag)],
        "meta": {k: v for k, v in sorted(dist.meta.items()) if k != "observables"},
    }
    return header, rows, footers, payload


def run_compute(cfg: JobConfig):
    observables, scheme, state = _load_problem(cfg)
    atoms = distributions.build_atoms(scheme, observables)
    dist = distributions.evaluate_distribution(atoms, state)
    return _weight_table(dist)


def run_marginals(cfg: JobConfig):
    observables, scheme, state = _load_problem(cfg)
    atoms = distributions.build_atoms(scheme, observables)
    dist = distributions.evaluate_distribution(atoms, state)
    header = ["var", "value", "marginal_re", "marginal_im", "born_weight", "abs_dev"]
    rows = []
    payload_vars = []
    sums = []
    worst = 0.0
    for v, obs in enumerate(observables):
        marg = distributions.marginal(dist, v)
        born = distributions.born_distribution(obs, state)
        dev_v = distributions.max_weight_deviation(marg, born)
        worst = max(worst, dev_v)
        sums.append(marg.total())
        entries = []
        for value, bw in zip(born.points[:, 0], born.weights):
            mw = marg.weight_at([value])
            dev = abs(mw - bw)
            rows.append(
                [str(v), fmt_g(value), fmt_g(mw.real), fmt_g(mw.imag), fmt_g(bw.real), fmt_g(dev)]
            )
            entries.append(
                {
                    "value": float(value),
                    "marginal": [mw.real, mw.imag],
                    "born": bw.real,
                    "abs_dev": dev,
                }
            )
        payload_vars.append({"var": v, "max_dev": dev_v, "entries": entries})
    footers = [f"max_deviation={fmt_g(worst)}"] + [
        f"var{v}_weight_sum_re={fmt_g(total.real)} var{v}_weight_sum_im={fmt_g(total.imag)}"
        for v, total in enumerate(sums)
    ]
    return header, rows, footers, {"variables": payload_vars, "max_deviation": worst}


def _matrix_payload(m: np.ndarray):
    return [[[float(e.real), float(e.imag)] for e in row] for row in m]


def run_tomography(cfg: JobConfig):
    observables, scheme, state = _load_problem(cfg, n_obs=2)
    rmap = analysis.reconstruction_map(observables[0], observables[1], scheme)
    dist = distributions.evaluate_distribution(rmap.atoms, state)
    rec = analysis.reconstruct_state(rmap, dist)
    residual = float(np.abs(rec.matrix - state.matrix).max())
    header = ["row", "col", "re", "im"]
    rows = [
        [str(i), str(j), fmt_g(rec.matrix[i, j].real), fmt_g(rec.matrix[i, j].imag)]
        for i in range(rec.dim)
        for j in range(rec.dim)
    ]
    footers = [f"residual={fmt_g(residual)}", f"rank={rmap.rank}"]
    payload = {
        "reconstructed": _matrix_payload(rec.matrix),
        "residual": residual,
        "rank": rmap.rank,
    }
    return header, rows, footers, payload


def run_rank(cfg: JobConfig):
    observables, scheme, _ = _load_problem(cfg, need_state=False, n_obs=2)
    rmap = analysis.reconstruction_map(observables[0], observables[1], scheme)
    full = rmap.dim**2 - 1
    header = ["dim", "rank", "full_rank_needed", "support_size", "distinguishes_states"]
    rows = [[str(rmap.dim), str(rmap.rank), str(full), str(len(rmap.support)), str(rmap.full_rank).lower()]]
    payload = {
        "dim": rmap.dim,
        "rank": rmap.rank,
        "full_rank_needed": full,
        "support_size": int(len(rmap.support)),
        "distinguishes_states": rmap.full_rank,
    }
    return header, rows, [], payload


def run_verify(cfg: JobConfig):
    observables, scheme, state = _load_problem(cfg)
    tol_support = float(cfg.tolerances.get("support", 1e-10))
    tol_real = float(cfg.tolerances.get("real", 1e-10))
    atoms = distributions.build_atoms(scheme, observables)
    dist = distributions.evaluate_distribution(atoms, state)
    support = analysis.verify_support(dist, observables, tol_support)
    real = analysis.is_real(dist, tol_real)
    scheme_real = analysis.scheme_is_real(scheme, observables)
    header = ["check", "result", "detail"]
    offending = ";".join(
        "(" + " ".join(fmt_g(c) for c in p) + ")" for p, _ in support.offending
    )
    rows = [
        ["support_on_eigenvalues", str(support.ok).lower(), offending],
        ["distribution_real", str(real).lower(), fmt_g(dist.max_imag())],
        ["scheme_real_for_all_states", str(scheme_real).lower(), ""],
    ]
    payload = {
        "support_on_eigenvalues": support.ok,
        "offending_points": [list(p) for p, _ in support.offending],
        "distribution_real": real,
        "max_abs_imag": dist.max_imag(),
        "scheme_real_for_all_states": scheme_real,
    }
    return header, rows, [], payload


def run_charfunc(cfg: JobConfig):
    observables, scheme, state = _load_problem(cfg)
    pts = parse_grid(cfg.grid, len(observables))
    values = distributions.characteristic_function(scheme, observables, state, pts)
    header = [f"s{v + 1}" for v in range(len(observables))] + ["re", "im"]
    rows = [
        [fmt_g(c) for c in p] + [fmt_g(z.real), fmt_g(z.imag)]
        for p, z in zip(pts, values)
    ]
    payload = {
        "points": [[float(c) for c in p] for p in pts],
        "values": [[float(z.real), float(z.imag)] for z in values],
    }
    return header, rows, [], payload


def run_degeneracy(cfg: JobConfig):
    try:
        n = int(cfg.params["n"])
        n_a = int(cfg.params["na"])
        n_b = int(cfg.params["nb"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("degeneracy needs integer --n, --na, --nb", field="--n") from exc
    try:
        report = analysis.degeneracy_feasible(n, n_a, n_b)
    except DomainError as exc:
        raise ValidationError(str(exc), field="--na/--nb") from exc
    header = ["n", "n_a", "n_b", "lhs", "rhs", "feasible", "equal_spectra_bound", "nondegenerate_partner_bound"]
    rows = [
        [
            str(report.n),
            str(report.n_a),
            str(report.n_b),
            str(report.lhs),
            str(report.rhs),
            str(report.feasible).lower(),
            fmt_g(analysis.equal_spectra_bound(n)),
            fmt_g(analysis.nondegenerate_partner_bound(n)),
        ]
    ]
    payload = {
        "n": report.n,
        "n_a": report.n_a,
        "n_b": report.n_b,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "feasible": report.feasible,
        "equal_spectra_bound": float(analysis.equal_spectra_bound(n)),
        "nondegenerate_partner_bound": float(analysis.nondegenerate_partner_bound(n)),
    }
    return header, rows, [], payload


def run_scan_realness(cfg: JobConfig):
    if cfg.observables:
        observables = tuple(parse_observable(_load_json(p), p) for p in cfg.observables)
        if len(observables) != 2 or observables[0].dim != 2 or observables[1].dim != 2:
            raise ValidationError(
                "scan-realness needs two two-level observables", field="--obs"
            )
    else:
        triple = quantum.spin_operators(1)
        observables = (triple.j1, triple.j2)
    scheme = resolve_scheme(cfg.scheme or "kirkwood", 2)
    atoms = distributions.build_atoms(scheme, observables)
    triple = quantum.spin_operators(1)
    theta_steps = int(cfg.params.get("theta_steps", 9))
    phi_steps = int(cfg.params.get("phi_steps", 8))
    m_steps = int(cfg.params.get("m_steps", 5))
    header = ["theta", "phi", "m", "max_abs_imag", "z_expectation"]
    rows = []
    payload_rows = []
    for theta in np.linspace(0.0, np.pi, theta_steps):
        for phi in np.linspace(0.0, 2 * np.pi, phi_steps, endpoint=False):
            for m in np.linspace(0.0, 1.0, m_steps):
                state = quantum.bloch_state(theta, phi, m)
                dist = distributions.evaluate_distribution(atoms, state, prune_tol=0.0)
                top_imag = dist.max_imag()
                z = quantum.expectation(triple.j3, state)
                rows.append([fmt_g(theta), fmt_g(phi), fmt_g(m), fmt_g(top_imag), fmt_g(z)])
                payload_rows.append(
                    {
                        "theta": float(theta),
                        "phi": float(phi),
                        "m": float(m),
                        "max_abs_imag": float(top_imag),
                        "z_expectation": float(z),
                    }
                )
    return header, rows, [], {"rows": payload_rows}


RUNNERS = {
    "compute": run_compute,
    "marginals": run_marginals,
    "tomography": run_tomography,
    "rank": run_rank,
    "verify": run_verify,
    "charfunc": run_charfunc,
    "degeneracy": run_degeneracy,
    "scan-realness": run_scan_realness,
}


# ---------------------------------------------------------------------------
# output and entry point


def _write_output(cfg: JobConfig, header, rows, footers, payload):
    if cfg.fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        lines.extend(",".join(row) for row in rows)
        lines.extend("# " + foot for foot in footers)
        text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run(cfg: JobConfig) -> int:
    """Execute one job; raises package errors for the caller to map."""
    if cfg.command not in RUNNERS:
        raise ValidationError(f"unknown command {cfg.command!r}", field="command")
    header, rows, footers, payload = RUNNERS[cfg.command](cfg)
    _write_output(cfg, header, rows, footers, payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasijoint",
        description="Quasi-joint-probability distributions of non-commuting observables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scheme", help="scheme JSON file, or name token like s_alpha:0.5")
        p.add_argument("--obs", action="append", default=[], help="observable JSON file (repeatable)")
        p.add_argument("--state", help="state JSON file")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--tol-support", type=float, default=1e-10)
        p.add_argument("--tol-real", type=float, default=1e-10)
        if name == "charfunc":
            p.add_argument("--grid", help="per-variable ranges 'min:max:steps,min:max:steps'")
        if name == "degeneracy":
            p.add_argument("--n", type=int, help="system dimension")
            p.add_argument("--na", type=int, help="distinct eigenvalues of A")
            p.add_argument("--nb", type=int, help="distinct eigenvalues of B")
        if name == "scan-realness":
            p.add_argument("--theta-steps", type=int, default=9)
            p.add_argument("--phi-steps", type=int, default=8)
            p.add_argument("--m-steps", type=int, default=5)
    return parser


def config_from_args(args: argparse.Namespace) -> JobConfig:
    params = {}
    if args.command == "degeneracy":
        params = {"n": args.n, "na": args.na, "nb": args.nb}
    elif args.command == "scan-realness":
        params = {
            "theta_steps": args.theta_steps,
            "phi_steps": args.phi_steps,
            "m_steps": args.m_steps,
        }
    return JobConfig(
        command=args.command,
        observables=tuple(args.obs),
        state=args.state,
        scheme=args.scheme,
        out=args.out,
        fmt=args.format,
        tolerances={"support": args.tol_support, "real": args.tol_real},
        grid=getattr(args, "grid", None),
        params=params,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return run(cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except QuasiJointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
