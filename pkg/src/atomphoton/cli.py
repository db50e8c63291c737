"""Command-line front end: data files for the width and R plots, densities and checks.

Every output starts with a ``# config: {...}`` header (or a ``config`` key in
JSON) holding the fully resolved options, so a file can be regenerated from
its own header.  Exit status: 0 on success, 1 when bound violations or failed
acceptance checks are found, 2 on usage or parameter errors, 3 on I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coordinate import MODELS, default_grid, sample_density
from .core import make_params
from .exceptions import DomainError
from .entanglement import gaussian_schmidt_report, hidden_entanglement_scan
from .momentum import default_momentum_grid, sample_momentum_density
from .sweeps import header_lines, intervals_table, log_grid, r_sweep, uncertainty_sweep, width_sweep

DENSITY_MODELS = MODELS + ("momentum_gauss", "momentum_lorentz")

# defaults for the shared flags; None means "command specific"
SHARED_DEFAULTS = {
    "eta0": 0.05, "beta": 0.1, "tau_spr": 100.0, "t": 5.0, "grid": None,
    "extent_sigmas": 8.0, "model": None, "out": None,
}

COMMAND_DEFAULTS = {
    "widths": {"beta": 1e-8, "log10_eta_min": -20.0, "log10_eta_max": 6.0, "points": 261},
    "rsweep": {"beta": 1e-4, "log10_eta_min": -8.0, "log10_eta_max": 4.0, "points": 1201,
               "t_max": None},
    "density": {"grid": 512, "model": "full_1d", "A": 1.0, "argument": "exact"},
    "schmidt": {"grid": 1024, "t": 0.0, "A": 1.0, "argument": "exact", "full_spectrum": False},
    "uncertainty": {"t_max": None, "points": 1001},
    "hidden": {"eta0": 1e-4, "beta": 0.01, "t_max": None, "points": 2001,
               "r_tol": 0.1, "k_min": 1.1},
    "verify": {},
}


class UsageError(Exception):
    pass


def _shared_parser():
    sp = argparse.ArgumentParser(add_help=False)
    g = sp.add_argument_group("shared options")
    g.add_argument("--eta0", type=float, help="initial control parameter eta0 (default 0.05)")
    g.add_argument("--beta", type=float, help="velocity ratio v_rec/c")
    g.add_argument("--tau-spr", dest="tau_spr", type=float, help="spreading time in 1/gamma")
    g.add_argument("--t", type=float, help="time in units of 1/gamma")
    g.add_argument("--grid", type=int, metavar="N", help="points per grid axis")
    g.add_argument("--extent-sigmas", dest="extent_sigmas", type=float, metavar="S",
                   help="grid half-extent in widths (default 8)")
    g.add_argument("--model", help="density model")
    g.add_argument("--out", metavar="PATH", help="output file (stdout when omitted)")
    g.add_argument("--config", metavar="PATH", help="JSON file with flat keys mirroring the flags")
    return sp


def build_parser():
    shared = _shared_parser()
    parser = argparse.ArgumentParser(prog="atomphoton", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def eta_range(p):
        p.add_argument("--log10-eta-min", dest="log10_eta_min", type=float)
        p.add_argument("--log10-eta-max", dest="log10_eta_max", type=float)
        p.add_argument("--points", type=int)

    p = sub.add_parser("widths", parents=[shared], help="relative coordinate widths vs eta (CSV)")
    eta_range(p)
    p = sub.add_parser("rsweep", parents=[shared],
                       help="R vs eta; R along t when --tau-spr is given (CSV)")
    eta_range(p)
    p.add_argument("--t-max", dest="t_max", type=float, help="end of the time sweep (10 tau_spr)")
    p = sub.add_parser("density", parents=[shared], help="sampled joint density (CSV or JSON)")
    p.add_argument("--A", dest="A", type=float, help="photon packet width of gaussian_1d")
    p.add_argument("--argument", choices=("exact", "linear"))
    p = sub.add_parser("schmidt", parents=[shared], help="grid SVD Schmidt number (JSON)")
    p.add_argument("--A", dest="A", type=float)
    p.add_argument("--argument", choices=("exact", "linear"))
    p.add_argument("--full-spectrum", dest="full_spectrum", action="store_true", default=None)
    p = sub.add_parser("uncertainty", parents=[shared], help="uncertainty products vs t (CSV)")
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--points", type=int)
    p = sub.add_parser("hidden", parents=[shared], help="hidden-entanglement intervals (CSV)")
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--r-tol", dest="r_tol", type=float)
    p.add_argument("--k-min", dest="k_min", type=float)
    sub.add_parser("verify", parents=[shared], help="run the acceptance suite")
    return parser


def resolve_config(args):
    """Merge defaults, the ``--config`` file and explicit flags (in increasing priority).

    Returns ``(config, explicit)`` where ``explicit`` names the keys set by
    the user through either route.
    """
    cmd = args.command
    cfg = dict(SHARED_DEFAULTS)
    cfg.update(COMMAND_DEFAULTS[cmd])
    explicit = set()
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key == "command":
                # a header echoed back from an earlier run
                if value != cmd:
                    raise UsageError(f"config was written by '{value}', not '{cmd}'")
                continue
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r} for '{cmd}'")
            cfg[key] = value
            explicit.add(key)
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        cfg[key] = value
        explicit.add(key)
    cfg["command"] = cmd
    return cfg, explicit


def _params(cfg):
    return make_params(cfg["eta0"], cfg["beta"], cfg["tau_spr"])


def _header(cfg):
    return {k: cfg[k] for k in sorted(cfg)}


def _write(text, cfg):
    if cfg["out"] is None:
        sys.stdout.write(text)
    else:
        Path(cfg["out"]).write_text(text)


def _time_axis(cfg):
    t_max = cfg["t_max"] if cfg["t_max"] is not None else 10.0 * cfg["tau_spr"]
    if cfg["points"] < 1 or not t_max > 0:
        raise UsageError(f"empty time range [0, {t_max}] with {cfg['points']} points")
    return np.linspace(0.0, t_max, cfg["points"])


def _eta_axis(cfg):
    try:
        return log_grid(cfg["log10_eta_min"], cfg["log10_eta_max"], cfg["points"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_widths(cfg, explicit):
    make_params(1.0, cfg["beta"], 1.0)
    tab = width_sweep(cfg["beta"], _eta_axis(cfg))
    _write(tab.to_csv(header=_header(cfg)), cfg)
    return 0


def cmd_rsweep(cfg, explicit):
    if "tau_spr" in explicit:
        p = _params(cfg)
        tab = r_sweep(p.beta, p=p, times=_time_axis(cfg))
    else:
        make_params(1.0, cfg["beta"], 1.0)
        tab = r_sweep(cfg["beta"], 10.0 ** _eta_axis(cfg))
    _write(tab.to_csv(header=_header(cfg)), cfg)
    return 0


def cmd_density(cfg, explicit):
    p = _params(cfg)
    model = cfg["model"]
    n = cfg["grid"]
    if model not in DENSITY_MODELS:
        raise UsageError(f"unknown model {model!r}; choose from {', '.join(DENSITY_MODELS)}")
    if n < 8:
        raise UsageError("--grid must be at least 8")
    if model.startswith("momentum_"):
        grid = default_momentum_grid(p, n=n, extent_sigmas=cfg["extent_sigmas"])
        d = sample_momentum_density(grid, p, model.split("_", 1)[1])
    else:
        grid = default_grid(p, cfg["t"], model, n=n, extent_sigmas=cfg["extent_sigmas"],
                            A=cfg["A"], argument=cfg["argument"])
        d = sample_density(grid, cfg["t"], p, model, A=cfg["A"], argument=cfg["argument"])
    if cfg["out"] is not None and cfg["out"].endswith(".json"):
        d.to_json(cfg["out"], {"config": _header(cfg)})
    else:
        text = d.to_csv(extra_header=header_lines(_header(cfg)))
        _write(text, cfg)
    return 0


def cmd_schmidt(cfg, explicit):
    p = _params(cfg)
    rep = gaussian_schmidt_report(p, cfg["t"], n=cfg["grid"], extent_sigmas=cfg["extent_sigmas"],
                                  A=cfg["A"], argument=cfg["argument"],
                                  full_spectrum=bool(cfg["full_spectrum"]))
    payload = {"config": _header(cfg), "report": rep.to_dict()}
    _write(json.dumps(payload, sort_keys=True, indent=1) + "\n", cfg)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_uncertainty(cfg, explicit):
    p = _params(cfg)
    tab, violations = uncertainty_sweep(p, _time_axis(cfg))
    _write(tab.to_csv(header=_header(cfg)), cfg)
    for v in violations:
        print(f"violation: {v}", file=sys.stderr)
    return 1 if violations else 0


def cmd_hidden(cfg, explicit):
    p = _params(cfg)
    t = _time_axis(cfg)
    try:
        intervals = hidden_entanglement_scan(p, (0.0, t[-1]), r_tol=cfg["r_tol"],
                                             k_min=cfg["k_min"], n=cfg["points"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(intervals_table(intervals).to_csv(header=_header(cfg)), cfg)
    return 0


def cmd_verify(cfg, explicit):
    from .verify import run_verify

    results = run_verify(cfg["out"])
    for r in results:
        print("\n".join(r.lines()))
    failed = [r.number for r in results if not r.passed]
    if failed:
        print(f"failed criteria: {', '.join(map(str, failed))}", file=sys.stderr)
    return 1 if failed else 0


COMMANDS = {
    "widths": cmd_widths, "rsweep": cmd_rsweep, "density": cmd_density,
    "schmidt": cmd_schmidt, "uncertainty": cmd_uncertainty, "hidden": cmd_hidden,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg, explicit = resolve_config(args)
        return COMMANDS[args.command](cfg, explicit)
    except (UsageError, DomainError) as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
