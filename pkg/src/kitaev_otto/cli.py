"""Command-line front end.

Every subcommand prints or writes one table. Parameters may come from flags
or from a ``--config`` file of ``key = value`` lines using the long flag
names (``n = 100``, ``delta-h = 0.5``); flags win over the file.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys

import numpy as np

from . import output
from .bdg import build_quadratic, diagonalize
from .couplings import Boundary, CouplingSpec
from .dynamics import BathSpec, internal_energy, relax_occupations
from .errors import ConfigurationError, OttoError
from .otto import CycleParams, fermi_occupation, mode_energies, run_cycle
from .sweep import OBSERVABLES, Axis, SweepGrid, peak_scaling, run_curve, run_map

__all__ = ["build_parser", "main", "parse_config"]

# Defaults applied after flags and config file are merged.
_DEFAULTS = {
    "J": 1.0,
    "kac": True,
    "boundary": "periodic",
    "format": "csv",
    "digits": 12,
    "observable": "Pi/N",
    "hi_range": "0:2:0.01",
    "time": math.inf,
}
# Keys that never reach the output header: they cannot change the numbers.
_NOT_ECHOED = {"command", "config", "out", "workers", "format", "func"}


def _model_flags(p):
    g = p.add_argument_group("model")
    g.add_argument("--n", type=int, help="chain length (even)")
    g.add_argument("--alpha", type=float, help="common exponent for hopping and pairing")
    g.add_argument("--alpha1", type=float, help="hopping exponent")
    g.add_argument("--alpha2", type=float, help="pairing exponent")
    g.add_argument("--J", dest="J", type=float, help="energy scale (default 1)")
    g.add_argument("--no-kac", dest="kac", action="store_const", const=False, help="disable Kac normalisation")
    g.add_argument("--boundary", choices=[b.value for b in Boundary], help="default periodic")
    g.add_argument("--disorder-file", help="N x N coupling table (whitespace-separated text or .npy)")


def _cycle_flags(p, need_hi=True):
    g = p.add_argument_group("cycle")
    if need_hi:
        g.add_argument("--hi", type=float, help="initial field h_i")
    x = g.add_mutually_exclusive_group()
    x.add_argument("--hf", type=float, help="final field h_f")
    x.add_argument("--delta-h", type=float, help="h_f - h_i (default 0.5)")
    g.add_argument("--tc", type=float, help="cold bath temperature")
    g.add_argument("--th", type=float, help="hot bath temperature")


def _output_flags(p):
    g = p.add_argument_group("output")
    g.add_argument("--out", help="output path (default stdout)")
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--digits", type=int, help="significant digits (default 12)")
    g.add_argument("--workers", type=int, help="worker processes (default $OTTO_WORKERS or CPU count)")
    g.add_argument("--config", help="key = value file with defaults for any flag")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kitaev-otto", allow_abbrev=False, description="Ideal quantum Otto cycles on long-range Kitaev chains.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{cycle,map,curve,scaling,relax}")

    p = sub.add_parser("cycle", help="one cycle", allow_abbrev=False)
    _model_flags(p)
    _cycle_flags(p)
    _output_flags(p)

    p = sub.add_parser("map", allow_abbrev=False, help="two-axis sweep of the operating mode")
    _model_flags(p)
    _cycle_flags(p)
    p.add_argument("--axis", action="append", metavar="NAME=SPEC", help="swept axis, e.g. h_i=0:2:0.01 (give two)")
    _output_flags(p)

    p = sub.add_parser("curve", allow_abbrev=False, help="observable against h_i for a family of N or alpha")
    _model_flags(p)
    _cycle_flags(p, need_hi=False)
    p.add_argument("--observable", choices=OBSERVABLES, help="default Pi/N")
    p.add_argument("--hi-range", help="h_i axis, start:stop:step or list (default 0:2:0.01)")
    p.add_argument("--family", metavar="NAME=SPEC", help="N=10,20,... or alpha=0.2,1.2")
    _output_flags(p)

    p = sub.add_parser("scaling", allow_abbrev=False, help="peak heights against N and their power-law exponents")
    _model_flags(p)
    _cycle_flags(p, need_hi=False)
    p.add_argument("--observable", choices=OBSERVABLES, help="default Pi/N")
    p.add_argument("--hi-range", help="h_i axis (default 0:2:0.01)")
    p.add_argument("--sizes", help="chain lengths, e.g. 10:100:10")
    p.add_argument("--split", type=float, help="field separating the two peaks (default: critical-field estimate)")
    _output_flags(p)

    p = sub.add_parser("relax", allow_abbrev=False, help="mode occupations after contact with thermal baths")
    _model_flags(p)
    p.add_argument("--h", type=float, help="field")
    p.add_argument("--baths", help="bath temperatures, comma-separated")
    p.add_argument("--rates", help="per-bath rates, comma-separated (default 1 each)")
    p.add_argument("--time", type=float, help="relaxation time (default inf)")
    p.add_argument("--t-init", type=float, help="initial thermal temperature (default: ground state)")
    _output_flags(p)

    # Debugging aid: compares the Nambu spectrum with brute-force diagonalisation.
    p = sub.add_parser("oracle", allow_abbrev=False)
    _model_flags(p)
    p.add_argument("--h", type=float, help="field")
    _output_flags(p)
    return parser


def _read_config_file(path: str) -> list:
    """Turn a flat ``key = value`` file into an argv fragment."""
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[run]\n" + fh.read(), source=path)
    except OSError as exc:
        raise output.OutputError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config file {path}: {exc}") from None
    argv = []
    for key, value in parser["run"].items():
        flag = "--" + key.strip().replace("_", "-")
        if flag.lower() == "--no-kac" or flag == "--kac":
            truthy = value.strip().lower() in ("1", "true", "yes", "on")
            if (flag == "--kac") != truthy:
                argv.append("--no-kac")
            continue
        argv.extend([flag, value.strip()])
    return argv


class _Usage(Exception):
    pass


def _strict_parse(sub: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    """Parse with errors raised instead of printed-and-exited."""

    def fail(message):
        raise _Usage(message)

    original = sub.error
    sub.error = fail
    try:
        return sub.parse_args(argv)
    finally:
        sub.error = original


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise ConfigurationError(f"unknown command {command!r}")


def parse_config(argv=None) -> dict:
    """Resolve flags, config file and defaults into one flat dict."""
    parser = build_parser()
    args = parser.parse_args(argv)
    resolved = {k: v for k, v in vars(args).items()}
    if args.config:
        sub = _subparser(parser, args.command)
        try:
            from_file = vars(_strict_parse(sub, _read_config_file(args.config)))
        except _Usage as exc:
            raise ConfigurationError(f"config file {args.config}: {exc}") from None
        if from_file.get("config"):
            raise ConfigurationError("config files cannot include other config files")
        cli_set = {k for k, v in resolved.items() if v is not None}
        for key, value in from_file.items():
            if value is None or key in cli_set:
                continue
            # A flag on one side of an exclusive pair displaces the file's other side.
            if key == "delta_h" and "hf" in cli_set or key == "hf" and "delta_h" in cli_set:
                continue
            resolved[key] = value
        if resolved.get("hf") is not None and resolved.get("delta_h") is not None:
            raise ConfigurationError("h_f and delta-h are mutually exclusive")
    for key, value in _DEFAULTS.items():
        if key in resolved and resolved[key] is None:
            resolved[key] = value
    return resolved


def _require(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigurationError("missing required parameter(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _exponents(cfg):
    a1 = cfg.get("alpha1") if cfg.get("alpha1") is not None else cfg.get("alpha")
    a2 = cfg.get("alpha2") if cfg.get("alpha2") is not None else cfg.get("alpha")
    if a1 is None or a2 is None:
        raise ConfigurationError("give --alpha, or both --alpha1 and --alpha2")
    return a1, a2


def _load_disorder(path):
    try:
        return np.load(path) if path.endswith(".npy") else np.loadtxt(path, ndmin=2)
    except OSError as exc:
        raise output.OutputError(f"cannot read disorder table {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigurationError(f"malformed disorder table {path}: {exc}") from None


def _spec(cfg) -> CouplingSpec:
    _require(cfg, "n")
    a1, a2 = _exponents(cfg)
    disorder = _load_disorder(cfg["disorder_file"]) if cfg.get("disorder_file") else None
    return CouplingSpec(
        N=cfg["n"], alpha1=a1, alpha2=a2, J=cfg["J"], kac=cfg["kac"], boundary=cfg["boundary"], disorder=disorder
    )


def _delta_h(cfg) -> float:
    """Resolved ``h_f - h_i``; recorded back into ``cfg`` so the header shows it."""
    if cfg.get("delta_h") is None and cfg.get("hf") is None:
        cfg["delta_h"] = 0.5
    return cfg.get("delta_h") or 0.0


def _cycle_row(alpha, N: int, params: CycleParams, out) -> dict:
    return {
        "alpha": alpha,
        "h_i": params.h_i,
        "h_f": params.h_f,
        "N": N,
        "T_c": params.T_c,
        "T_h": params.T_h,
        "Q_h": out.Q_h,
        "Q_c": out.Q_c,
        "W": out.W,
        "eta": out.eta,
        "eta_R": out.eta_R,
        "mode": out.mode,
        "pi_per_spin": out.pi_per_spin,
        "piR_per_spin": out.piR_per_spin,
    }


def _echo(cfg) -> dict:
    out = {}
    for key, value in cfg.items():
        if key in _NOT_ECHOED or value is None:
            continue
        out[key] = " ".join(value) if isinstance(value, list) else value
    return out


def _cmd_cycle(cfg):
    _require(cfg, "hi", "tc", "th")
    spec = _spec(cfg)
    h_f = cfg["hf"] if cfg.get("hf") is not None else cfg["hi"] + _delta_h(cfg)
    cfg["hf"] = h_f
    params = CycleParams(cfg["hi"], h_f, cfg["tc"], cfg["th"])
    alpha = spec.alpha1 if spec.alpha1 == spec.alpha2 else None
    row = _cycle_row(alpha, spec.N, params, run_cycle(params, spec))
    return output.Table(output.CYCLE_COLUMNS, _echo(cfg), [row])


_FLAG_TO_AXIS = {"n": "N", "alpha": "alpha", "hi": "h_i", "hf": "h_f", "tc": "T_c", "th": "T_h"}


def _parse_axis(text: str) -> Axis:
    name, sep, spec = text.partition("=")
    if not sep:
        raise ConfigurationError(f"axis {text!r} must look like NAME=SPEC")
    name = _FLAG_TO_AXIS.get(name.strip(), name.strip())
    if name == "N":
        axis = Axis.parse(name, spec)
        return Axis("N", tuple(int(round(v)) for v in axis.values))
    return Axis.parse(name, spec)


def _fixed(cfg, swept) -> dict:
    fixed = {}
    for flag, name in _FLAG_TO_AXIS.items():
        if name not in swept and cfg.get(flag) is not None:
            fixed[name] = cfg[flag]
    return fixed


def _sweep_base(cfg) -> CouplingSpec:
    if cfg.get("disorder_file"):
        raise ConfigurationError("sweeps do not accept a disorder table")
    if cfg.get("alpha1") is not None or cfg.get("alpha2") is not None:
        raise ConfigurationError("sweeps use a single --alpha for hopping and pairing")
    return CouplingSpec(N=2, alpha1=1.0, alpha2=1.0, J=cfg["J"], kac=cfg["kac"], boundary=cfg["boundary"])


def _outcome_rows(rows):
    return [_cycle_row(p.alpha, p.N, p.params, o) for p, o in rows]


def _cmd_map(cfg):
    axes = [_parse_axis(a) for a in (cfg.get("axis") or [])]
    if len(axes) != 2:
        raise ConfigurationError("map needs exactly two --axis options")
    swept = {a.name for a in axes}
    grid = SweepGrid(tuple(axes), _fixed(cfg, swept), _delta_h(cfg))
    rows = run_map(grid, _sweep_base(cfg), cfg.get("workers"))
    return output.Table(output.CYCLE_COLUMNS, _echo(cfg), _outcome_rows(rows))


def _cmd_curve(cfg):
    if not cfg.get("family"):
        raise ConfigurationError("curve needs --family N=... or alpha=...")
    family = _parse_axis(cfg["family"])
    h_axis = Axis.parse("h_i", cfg["hi_range"])
    fixed = _fixed(cfg, {family.name, "h_i"})
    curve = run_curve(cfg["observable"], h_axis, family, fixed, _delta_h(cfg), _sweep_base(cfg), cfg.get("workers"))
    rows = []
    for r in curve:
        row = _outcome_rows([(r.point, r.outcome)])[0]
        row["value"] = r.value
        rows.append(row)
    return output.Table(output.CYCLE_COLUMNS + ("value",), _echo(cfg), rows)


def _cmd_scaling(cfg):
    _require(cfg, "alpha", "tc", "th", "sizes")
    if cfg.get("hf") is not None:
        raise ConfigurationError("scaling sweeps h_i, so h_f must be given as --delta-h")
    sizes = _parse_axis("N=" + cfg["sizes"]).values
    result = peak_scaling(
        cfg["observable"],
        cfg["alpha"],
        sizes,
        cfg["tc"],
        cfg["th"],
        Axis.parse("h_i", cfg["hi_range"]),
        _delta_h(cfg),
        split=cfg.get("split"),
        workers=cfg.get("workers"),
    )
    rows = []
    for N, rep in zip(result.sizes, result.reports):
        rows.append(
            {
                "N": N,
                "split": rep.split,
                "ferro_h_i": rep.ferro.h_i if rep.ferro else None,
                "ferro_peak": rep.ferro.value if rep.ferro else None,
                "para_h_i": rep.para.h_i if rep.para else None,
                "para_peak": rep.para.value if rep.para else None,
            }
        )
    notes = {}
    for side, fit in (("ferro", result.ferro_fit), ("para", result.para_fit)):
        a, b, rms = fit if fit else (None, None, None)
        notes[f"{side}_exponent"] = a
        notes[f"{side}_intercept"] = b
        notes[f"{side}_rms"] = rms
    columns = ("N", "split", "ferro_h_i", "ferro_peak", "para_h_i", "para_peak")
    return output.Table(columns, _echo(cfg), rows, notes)


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse {what} {text!r}") from None


def _cmd_relax(cfg):
    _require(cfg, "h", "baths")
    spec = _spec(cfg)
    temps = _floats(cfg["baths"], "bath temperatures")
    rates = _floats(cfg["rates"], "rates") if cfg.get("rates") else None
    bath = BathSpec(tuple(temps), rates)
    omegas, _ = mode_energies(CycleParams(cfg["h"], cfg["h"], 1.0, 1.0), spec)
    n0 = fermi_occupation(cfg["t_init"], omegas) if cfg.get("t_init") else np.zeros_like(omegas)
    n_t = relax_occupations(bath, omegas, n0, cfg["time"])
    rows = [{"mode": i, "omega": float(w), "n0": float(a), "n_t": float(b)} for i, (w, a, b) in enumerate(zip(omegas, n0, n_t))]
    notes = {"internal_energy_initial": internal_energy(n0, omegas), "internal_energy": internal_energy(n_t, omegas)}
    return output.Table(("mode", "omega", "n0", "n_t"), _echo(cfg), rows, notes)


def _cmd_oracle(cfg):
    from .oracle import many_body_spectrum, spin_ed_tfim

    _require(cfg, "h")
    spec = _spec(cfg)
    q = build_quadratic(spec, cfg["h"])
    nambu = diagonalize(q).many_body_energies()
    fock = many_body_spectrum(q)
    rows = [{"level": i, "nambu": float(a), "fock": float(b)} for i, (a, b) in enumerate(zip(nambu, fock))]
    notes = {"max_nambu_vs_fock": float(np.max(np.abs(nambu - fock)))}
    nearest = math.isinf(spec.alpha1) and math.isinf(spec.alpha2) and spec.kac
    if nearest and spec.boundary is Boundary.OPEN and spec.disorder is None and spec.N <= 10:
        notes["max_nambu_vs_spin"] = float(np.max(np.abs(nambu - spin_ed_tfim(spec.N, cfg["h"], spec.J))))
    return output.Table(("level", "nambu", "fock"), _echo(cfg), rows, notes)


_COMMANDS = {
    "cycle": _cmd_cycle,
    "map": _cmd_map,
    "curve": _cmd_curve,
    "scaling": _cmd_scaling,
    "relax": _cmd_relax,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        table = _COMMANDS[cfg["command"]](cfg)
        output.write(table, cfg.get("out"), cfg["format"], cfg["digits"])
    except OttoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
