"""Command-line front end.

Exit codes: 0 success, 1 numerical failure (failed checks, unconverged
oracle), 2 configuration error (bad flags, invalid quantum numbers).
Settings resolve as command-line flags over the ``--config`` file over the
``RINGKEPLER_TOL_*`` environment over built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from importlib import resources

import numpy as np

from . import model
from . import parabolic as par
from . import spherical as sph
from . import verify
from .errors import GridError, RingKeplerError
from .model import ModelParams, ParabolicState, SphericalState

COMMANDS = ("spectrum", "eval", "verify", "interbasis", "enumerate")
SCHEMA_VERSION = 1
TOL_NAMES = tuple(f.name for f in fields(verify.Tolerances))


class ConfigError(RingKeplerError):
    """Invalid command-line or config-file input (exit code 2)."""


class NumericalFailure(RingKeplerError):
    """A computation completed but failed its accuracy contract (exit code 1)."""


# -- parsing helpers ---------------------------------------------------------


def parse_half(text, name) -> int:
    """'5/2', '2.5' or '3' -> doubled integer (5, 5, 6)."""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name}: cannot read {text!r} as a number") from None
    doubled = 2 * value
    if doubled.denominator != 1:
        raise ConfigError(f"{name} must be an integer or half-integer, got {text}")
    return int(doubled)


def parse_int(text, name) -> int:
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name}: cannot read {text!r} as an integer") from None
    if value.denominator != 1:
        raise ConfigError(f"{name} must be an integer, got {text}")
    return int(value)


def parse_float(text, name) -> float:
    try:
        value = float(Fraction(str(text).strip()))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{name}: cannot read {text!r} as a number") from None
    return value


_PI = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/(\d+(?:\.\d*)?))?$")


def parse_real(text, name) -> float:
    """A real number; multiples of pi may be written as 'pi', 'pi/2', '0.5*pi'."""
    tok = str(text).strip().lower()
    m = _PI.match(tok)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        return coef * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
    return parse_float(tok, name)


def parse_grid(text, name) -> np.ndarray:
    """'start:stop:count' (inclusive linspace) or a comma-separated list."""
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{name}: a range needs start:stop:count, got {text!r}")
        count = parse_int(parts[2], name)
        if count < 1:
            raise ConfigError(f"{name}: count must be positive")
        return np.linspace(parse_real(parts[0], name), parse_real(parts[1], name), count)
    values = [parse_real(t, name) for t in text.split(",") if t.strip()]
    if not values:
        raise ConfigError(f"{name}: empty grid")
    return np.asarray(values)


# -- configuration -----------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    params: ModelParams
    n2_max: int | None = None
    n2: int | None = None
    m2q_list: list = field(default_factory=list)
    m2q_spherical: int | None = None
    basis: str = "spherical"
    j2: int | None = None
    n1: int | None = None
    n2p: int | None = None
    r: np.ndarray | None = None
    theta: np.ndarray | None = None
    phi: np.ndarray | None = None
    fmt: str = "csv"
    output: str | None = None
    tolerances: verify.Tolerances = field(default_factory=verify.Tolerances)


# Keys accepted in a config file; identical to the long option names with '_' for '-'.
CONFIG_KEYS = (
    "s2", "s", "c1", "c2", "n_max", "n", "m", "m_spherical", "basis", "j", "n1", "n2",
    "r", "theta", "phi", "format", "output", "tol",
) + tuple(f"tol_{t}" for t in TOL_NAMES)


def read_config_file(path) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment. Unknown keys are rejected."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    out = {}
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{num}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{path}:{num}: duplicate key {key!r}")
        out[key] = value
    return out


def _common(parser):
    g = parser.add_argument_group("model")
    g.add_argument("--s2", help="doubled monopole charge (1 means s = 1/2)")
    g.add_argument("--s", help="monopole charge as a fraction, e.g. 1/2")
    g.add_argument("--c1", help="ring strength c1 >= 0")
    g.add_argument("--c2", help="ring strength c2 >= 0")
    g.add_argument("--config", help="flat key = value file; flags take precedence")
    o = parser.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--output", "-o", help="write here instead of stdout")


def _tolerance_flags(parser):
    g = parser.add_argument_group("tolerances")
    g.add_argument("--tol", help="set every tolerance to this value")
    for name in TOL_NAMES:
        g.add_argument(f"--tol-{name}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringkepler", description="Bound states of a Coulomb-monopole problem with ring potentials.", allow_abbrev=False
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("spectrum", allow_abbrev=False, help="energies of all states up to n_max")
    _common(p)
    p.add_argument("--n-max", help="largest principal number (fractions allowed)")
    p.add_argument("--m", help="comma-separated m values to keep")
    p.add_argument("--basis", choices=("spherical", "parabolic"))

    p = sub.add_parser("enumerate", allow_abbrev=False, help="list state labels up to n_max")
    _common(p)
    p.add_argument("--n-max")
    p.add_argument("--m")
    p.add_argument("--basis", choices=("spherical", "parabolic", "both"))

    p = sub.add_parser("eval", allow_abbrev=False, help="sample one state on an (r, theta, phi) grid")
    _common(p)
    p.add_argument("--basis", choices=("spherical", "parabolic"))
    p.add_argument("--n", help="principal number (spherical basis)")
    p.add_argument("--j")
    p.add_argument("--m")
    p.add_argument("--n1", help="parabolic quantum number n1")
    p.add_argument("--n2", help="parabolic quantum number n2")
    p.add_argument("--r", help="start:stop:count or comma list")
    p.add_argument("--theta", help="values in [0, pi]; 'pi/2' style allowed")
    p.add_argument("--phi")

    p = sub.add_parser("verify", allow_abbrev=False, help="run the oracle suite; exit 1 if any check fails")
    _common(p)
    p.add_argument("--n-max")
    _tolerance_flags(p)

    p = sub.add_parser("interbasis", allow_abbrev=False, help="parabolic-spherical overlap matrix at fixed (n, m)")
    _common(p)
    p.add_argument("--n")
    p.add_argument("--m")
    p.add_argument("--m-spherical", help="m of the spherical block; must equal --m")
    _tolerance_flags(p)
    return parser


def resolve_config(ns: argparse.Namespace, environ=None) -> RunConfig:
    """Merge flags, config file and defaults into a validated RunConfig."""
    raw = {k: v for k, v in vars(ns).items() if v is not None and k not in ("command", "config")}
    file_values = read_config_file(ns.config) if getattr(ns, "config", None) else {}
    merged = {**file_values, **raw}
    if "format" in merged and merged["format"] not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {merged['format']!r}")
    cmd = ns.command

    if "s2" in merged and "s" in merged:
        if parse_int(merged["s2"], "s2") != parse_half(merged["s"], "s"):
            raise ConfigError("--s2 and --s disagree")
    if "s" in merged:
        s2 = parse_half(merged["s"], "s")
    else:
        s2 = parse_int(merged.get("s2", 0), "s2")
    c1 = parse_float(merged.get("c1", 0), "c1")
    c2 = parse_float(merged.get("c2", 0), "c2")
    try:
        params = ModelParams(s2, c1, c2)
    except RingKeplerError as exc:
        raise ConfigError(str(exc)) from None

    default_fmt = "json" if cmd == "verify" else "csv"
    cfg = RunConfig(cmd, params, fmt=merged.get("format", default_fmt), output=merged.get("output"))

    tol = verify.Tolerances.from_env(environ)
    if "tol" in merged:
        tol = verify.Tolerances.uniform(parse_float(merged["tol"], "tol"))
    tol = tol.updated(**{t: parse_float(merged[f"tol_{t}"], f"tol-{t}") for t in TOL_NAMES if f"tol_{t}" in merged})
    if any(not getattr(tol, t) >= 0 for t in TOL_NAMES):
        raise ConfigError("tolerances must be nonnegative")
    cfg.tolerances = tol

    smin = abs(s2) + 2
    if cmd in ("spectrum", "enumerate", "verify"):
        default_nmax = smin + (4 if cmd == "verify" else 2)
        cfg.n2_max = parse_half(merged["n_max"], "n-max") if "n_max" in merged else default_nmax
        try:
            model._check_principal(params, cfg.n2_max)
        except RingKeplerError as exc:
            raise ConfigError(str(exc)) from None
    if "m" in merged and cmd in ("spectrum", "enumerate"):
        cfg.m2q_list = [parse_half(t, "m") for t in str(merged["m"]).split(",") if t.strip()]
    if cmd in ("spectrum", "enumerate", "eval"):
        cfg.basis = merged.get("basis", "spherical")
        allowed = ("spherical", "parabolic", "both") if cmd == "enumerate" else ("spherical", "parabolic")
        if cfg.basis not in allowed:
            raise ConfigError(f"basis must be one of {', '.join(allowed)}")
    if cmd == "eval":
        cfg.m2q_list = [parse_half(merged.get("m", 0), "m")]
        if cfg.basis == "spherical":
            cfg.n2 = parse_half(merged.get("n", Fraction(smin, 2)), "n")
            cfg.j2 = parse_half(merged["j"], "j") if "j" in merged else model.m_plus2(params, cfg.m2q_list[0])
        else:
            cfg.n1 = parse_int(merged.get("n1", 0), "n1")
            cfg.n2p = parse_int(merged.get("n2", 0), "n2")
        cfg.r = parse_grid(merged.get("r", "0.5:10:20"), "r")
        cfg.theta = parse_grid(merged.get("theta", "pi/2"), "theta")
        cfg.phi = parse_grid(merged.get("phi", "0"), "phi")
    if cmd == "interbasis":
        cfg.n2 = parse_half(merged.get("n", Fraction(smin, 2)), "n")
        m2q = parse_half(merged.get("m", Fraction(s2, 2) if s2 else 0), "m")
        cfg.m2q_list = [m2q]
        if "m_spherical" in merged:
            cfg.m2q_spherical = parse_half(merged["m_spherical"], "m-spherical")
            if cfg.m2q_spherical != m2q:
                raise ConfigError(
                    "interbasis blocks connect states of equal m only: "
                    f"--m {Fraction(m2q, 2)} vs --m-spherical {Fraction(cfg.m2q_spherical, 2)}"
                )
    return cfg


# -- formatting --------------------------------------------------------------


def fmt_float(x) -> str:
    """17 significant digits, lowercase exponent; stable across runs."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.16e}"


def fmt_half(x2) -> str:
    return str(x2 // 2) if x2 % 2 == 0 else f"{x2 / 2:.1f}"


class Half(int):
    """Doubled integer rendered as an exact decimal in JSON and CSV."""


def _cell(v) -> str:
    if isinstance(v, Half):
        return fmt_half(int(v))
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    text = str(v)
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def to_json(obj, indent=0) -> str:
    """Deterministic JSON with fixed float formatting (no reliance on repr)."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(to_json(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, Half):
        return fmt_half(int(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(fmt_float(x))  # JSON has no nan/inf literals
        return fmt_float(x)
    return json.dumps(str(obj))


def render_csv(schema, columns, rows, notes="") -> str:
    header = f"# schema: ringkepler.{schema}/{SCHEMA_VERSION}"
    if notes:
        header += f"; {notes}"
    lines = [header, ",".join(columns)]
    lines += [",".join(_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def render_table_json(schema, columns, rows, extra=None) -> str:
    doc = {"schema": f"ringkepler.{schema}/{SCHEMA_VERSION}"}
    doc.update(extra or {})
    doc["columns"] = list(columns)
    doc["rows"] = [dict(zip(columns, row)) for row in rows]
    return to_json(doc) + "\n"


def params_dict(p: ModelParams) -> dict:
    return {"s2": p.s2, "s": Half(p.s2), "c1": float(p.c1), "c2": float(p.c2)}


def load_schema(name) -> dict:
    """JSON schema shipped with the package, e.g. ``load_schema('spectrum')``."""
    text = resources.files("ringkepler").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# -- commands ----------------------------------------------------------------


def _keep_m(cfg, m2q):
    return not cfg.m2q_list or m2q in cfg.m2q_list


SPECTRUM_COLUMNS = {
    "spherical": ("n", "m", "j", "delta1", "delta2", "energy", "epsilon", "separation_constant"),
    "parabolic": ("n", "m", "n1", "n2", "delta1", "delta2", "energy", "epsilon", "beta"),
}


def cmd_spectrum(cfg: RunConfig):
    p = cfg.params
    rows = []
    for n2 in model.principal_range(p, cfg.n2_max):
        if cfg.basis == "spherical":
            for st in model.enumerate_spherical(p, n2):
                if not _keep_m(cfg, st.m2q):
                    continue
                ex = model.derived_exponents(p, st.m2q)
                e = model.energy(p, st.m2q, n2)
                a = sph.separation_constant(p, st.j2, st.m2q)
                rows.append((Half(n2), Half(st.m2q), Half(st.j2), ex.delta1, ex.delta2, e.value, e.epsilon, a))
        else:
            for st in model.enumerate_parabolic(p, n2):
                if not _keep_m(cfg, st.m2q):
                    continue
                ex = model.derived_exponents(p, st.m2q)
                e = model.energy(p, st.m2q, n2)
                beta = par.beta_eigenvalue(p, st)
                rows.append((Half(n2), Half(st.m2q), st.n1, st.n2p, ex.delta1, ex.delta2, e.value, e.epsilon, beta))
    rows.sort(key=lambda r: (int(r[0]), int(r[1]), int(r[2])))
    if not all(math.isfinite(float(v)) for row in rows for v in row[3:]):
        raise NumericalFailure("non-finite value in spectrum")
    cols = SPECTRUM_COLUMNS[cfg.basis]
    if cfg.fmt == "json":
        return render_table_json("spectrum", cols, rows, {"params": params_dict(p), "basis": cfg.basis}), 0
    return render_csv("spectrum", cols, rows, f"basis={cfg.basis}; {p.label()}; atomic units, E = -eps^2/2"), 0


ENUMERATE_COLUMNS = ("basis", "n", "m", "j", "n1", "n2")


def cmd_enumerate(cfg: RunConfig):
    p = cfg.params
    rows = []
    for n2 in model.principal_range(p, cfg.n2_max):
        if cfg.basis in ("spherical", "both"):
            rows += [
                ("spherical", Half(n2), Half(st.m2q), Half(st.j2), "", "")
                for st in model.enumerate_spherical(p, n2)
                if _keep_m(cfg, st.m2q)
            ]
        if cfg.basis in ("parabolic", "both"):
            rows += [
                ("parabolic", Half(n2), Half(st.m2q), "", st.n1, st.n2p)
                for st in model.enumerate_parabolic(p, n2)
                if _keep_m(cfg, st.m2q)
            ]
    if cfg.fmt == "json":
        json_rows = [tuple(None if v == "" else v for v in row) for row in rows]
        return render_table_json("enumerate", ENUMERATE_COLUMNS, json_rows, {"params": params_dict(p)}), 0
    return render_csv("enumerate", ENUMERATE_COLUMNS, rows, p.label()), 0


EVAL_COLUMNS = ("r", "theta", "phi", "re_psi", "im_psi", "abs2_psi", "pole")


def cmd_eval(cfg: RunConfig):
    p = cfg.params
    m2q = cfg.m2q_list[0]
    if np.any(cfg.r <= 0):
        raise ConfigError("r must be positive")
    if np.any((cfg.theta < 0) | (cfg.theta > math.pi)):
        raise ConfigError("theta must lie in [0, pi]")
    r, theta, phi = (a.ravel() for a in np.meshgrid(cfg.r, cfg.theta, cfg.phi, indexing="ij"))
    pole = sph.is_pole(theta)
    if cfg.basis == "spherical":
        state = model.check_spherical(p, SphericalState(cfg.n2, cfg.j2, m2q))
        psi = sph.spherical_state_eval(p, state, sph.SphericalPoint(r, theta, phi), poles="limit")
        label = f"spherical n={fmt_half(state.n2)} j={fmt_half(state.j2)} m={fmt_half(m2q)}"
    else:
        state = model.check_parabolic(p, ParabolicState(cfg.n1, cfg.n2p, m2q))
        # exact axis values so that xi or eta is exactly 0 there
        c = np.where(theta == 0, 1.0, np.where(theta == math.pi, -1.0, np.cos(theta)))
        psi = par.parabolic_state_eval(p, state, par.ParabolicPoint(r * (1 + c), r * (1 - c), phi))
        label = f"parabolic n1={state.n1} n2={state.n2p} m={fmt_half(m2q)}"
    psi = np.asarray(psi, dtype=complex).reshape(r.shape)
    if not np.all(np.isfinite(psi)):
        raise NumericalFailure("non-finite wavefunction value")
    rows = [
        (r[i], theta[i], phi[i], psi[i].real, psi[i].imag, abs(psi[i]) ** 2, bool(pole[i]))
        for i in range(r.size)
    ]
    notes = f"{label}; {p.label()}; psi includes exp(i(m-s)phi)/sqrt(2pi); pole=1 rows hold the axis limit"
    if cfg.fmt == "json":
        extra = {"params": params_dict(p), "state": label}
        return render_table_json("eval", EVAL_COLUMNS, rows, extra), 0
    return render_csv("eval", EVAL_COLUMNS, rows, notes), 0


def cmd_verify(cfg: RunConfig):
    report = verify.run_verification(cfg.params, cfg.n2_max, cfg.tolerances)
    code = 0 if report.passed else 1
    doc = report.to_dict()
    doc["params"] = params_dict(cfg.params)
    if cfg.fmt == "json":
        return to_json(doc) + "\n", code
    cols = ("name", "category", "closed_form", "oracle", "abs_deviation", "rel_deviation", "measure", "tolerance", "passed")
    rows = [tuple(c[k] for k in cols) for c in doc["checks"]]
    notes = f"{cfg.params.label()}; n_max={fmt_half(cfg.n2_max)}; passed={int(report.passed)}"
    return render_csv("verification", cols, rows, notes), code


INTERBASIS_COLUMNS = ("n1", "n2", "j", "re", "im", "abs")


def cmd_interbasis(cfg: RunConfig):
    p = cfg.params
    m2q = cfg.m2q_list[0]
    model.check_n(p, m2q, cfg.n2)
    res = verify.interbasis_matrix(p, cfg.n2, m2q)
    tol = cfg.tolerances.quadrature
    code = 0 if res.defect <= tol else 1
    u = res.matrix
    if cfg.fmt == "json":
        doc = {
            "schema": f"ringkepler.interbasis/{SCHEMA_VERSION}",
            "params": params_dict(p),
            "n": Half(cfg.n2),
            "m": Half(m2q),
            "parabolic": [{"n1": s.n1, "n2": s.n2p} for s in res.parabolic],
            "spherical": [{"j": Half(s.j2)} for s in res.spherical],
            "real": [[float(v) for v in row] for row in u.real],
            "imag": [[float(v) for v in row] for row in u.imag],
            "unitarity_defect": res.defect,
            "tolerance": tol,
            "passed": code == 0,
        }
        return to_json(doc) + "\n", code
    rows = [
        (a.n1, a.n2p, Half(b.j2), u[i, k].real, u[i, k].imag, abs(u[i, k]))
        for i, a in enumerate(res.parabolic)
        for k, b in enumerate(res.spherical)
    ]
    notes = (
        f"U[a,b] = <parabolic a|spherical b>; n={fmt_half(cfg.n2)} m={fmt_half(m2q)}; {p.label()}; "
        f"unitarity_defect={fmt_float(res.defect)}"
    )
    return render_csv("interbasis", INTERBASIS_COLUMNS, rows, notes), code


HANDLERS = {
    "spectrum": cmd_spectrum,
    "enumerate": cmd_enumerate,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "interbasis": cmd_interbasis,
}


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with 2 already
        return int(exc.code or 0)
    try:
        cfg = resolve_config(ns, environ)
        text, code = HANDLERS[cfg.command](cfg)
    except (NumericalFailure, GridError, FloatingPointError) as exc:
        print(f"ringkepler: numerical failure: {exc}", file=sys.stderr)
        return 1
    except RingKeplerError as exc:
        print(f"ringkepler: error: {exc}", file=sys.stderr)
        return 2
    try:
        _write(text, cfg.output)
    except OSError as exc:
        print(f"ringkepler: error: cannot write {cfg.output}: {exc.strerror}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
