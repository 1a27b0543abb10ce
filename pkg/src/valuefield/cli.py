"""Config-driven scenario runner.

Configuration files are line-oriented ``key = value`` pairs under
``[section]`` headers (INI syntax). The ``[scenario]`` section selects the
experiment by ``name``; a section of the same name holds its parameters.
``--set section.key=value`` flags override config keys, and the output
directory resolves in order: ``--out`` flag, ``VALUEFIELD_OUT`` environment
variable, ``[output] dir`` key, then ``./valuefield_out``.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 invalid
configuration or usage.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from pathlib import Path

from .errors import ConfigInvalid
from .scenarios import SCENARIOS, run_scenario

_NUMERIC_KEYS = {
    "arithmetic-check": {"seed": int, "cases": int},
    "field-calculus": {"k": float, "y0": float, "sigma": float, "n": int},
    "geodesic": {"c": float, "steps": int, "beta": float, "alpha_const": float,
                 "span_tau": float, "mass": float},
    "schrodinger": {"n": int, "steps": int, "dt": float, "a0": float},
    "cosmology": {"h0_kms_mpc": float, "omega_m": float, "omega_r": float,
                  "omega_v": float, "t_now_gyr": float, "s_rm_kyr": float,
                  "s_de_gyr": float},
    "bound-check": {"h0_kms_mpc": float, "window_s": float, "eps": float},
}

DEFAULT_CONFIGS = {
    "arithmetic-check": {"seed": "0", "cases": "1000"},
    "field-calculus": {"k": "0.7", "y0": "0.3", "sigma": "0.5", "n": "16384"},
    "geodesic": {"c": "299792458.0", "steps": "10000", "beta": "0.3",
                 "alpha_const": "0.4", "span_tau": "1e-4", "mass": "1.0"},
    "schrodinger": {"n": "1024", "steps": "1000", "dt": "1e-3", "a0": "0.25"},
    "cosmology": {"h0_kms_mpc": "70", "omega_m": "0.3", "omega_r": "0",
                  "omega_v": "0.7", "t_now_gyr": "13.8", "s_rm_kyr": "50",
                  "s_de_gyr": "10"},
    "bound-check": {"h0_kms_mpc": "70", "window_s": "499.0", "eps": "1e-10"},
}


def load_config(path) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError:
        raise
    except configparser.Error as exc:
        raise ConfigInvalid(f"cannot parse {path}: {exc}") from exc
    return {section: dict(parser.items(section)) for section in parser.sections()}


def validate_config(cfg: dict[str, dict[str, str]]) -> list[str]:
    """Schema and range diagnostics; an empty list means the config is valid."""
    diags: list[str] = []
    scenario = cfg.get("scenario", {}).get("name")
    if scenario is None:
        diags.append("missing key scenario.name")
        return diags
    if scenario not in SCENARIOS:
        diags.append(
            f"scenario.name: unknown scenario {scenario!r}; "
            f"choose from {sorted(SCENARIOS)}"
        )
        return diags

    section = cfg.get(scenario, {})
    types = _NUMERIC_KEYS[scenario]
    values: dict[str, float] = {}
    for key, raw in section.items():
        if key not in types:
            diags.append(f"{scenario}.{key}: unknown key")
            continue
        try:
            values[key] = types[key](raw)
        except ValueError:
            diags.append(f"{scenario}.{key}: cannot parse {raw!r} as {types[key].__name__}")

    def check(key, ok, message):
        if key in values and not ok(values[key]):
            diags.append(f"{scenario}.{key}: {message}")

    check("h0_kms_mpc", lambda v: v > 0, "H0 must be positive")
    check("cases", lambda v: v > 0, "must be positive")
    check("steps", lambda v: v > 0, "must be positive")
    check("n", lambda v: v > 0 and v % 2 == 0, "must be a positive even count")
    check("dt", lambda v: v > 0, "must be positive")
    check("sigma", lambda v: v > 0, "must be positive")
    check("span_tau", lambda v: v > 0, "must be positive")
    check("mass", lambda v: v > 0, "must be positive")
    check("beta", lambda v: 0 <= v < 1, "must lie in [0, 1)")
    check("eps", lambda v: v > 0, "must be positive")
    check("window_s", lambda v: v > 0, "must be positive")
    check("t_now_gyr", lambda v: v > 0, "must be positive")

    if scenario == "cosmology":
        for key in ("omega_m", "omega_r", "omega_v"):
            check(key, lambda v: v >= 0, "must be nonnegative")
        omegas = [values.get(k) for k in ("omega_m", "omega_r", "omega_v")]
        if all(v is not None for v in omegas):
            total = sum(omegas)
            if abs(total - 1.0) > 1e-12:
                diags.append(
                    f"cosmology.omega_m+omega_r+omega_v: flatness violated, "
                    f"sum = {total!r} (needs 1)"
                )
        s_rm = values.get("s_rm_kyr")
        s_de = values.get("s_de_gyr")
        t_now = values.get("t_now_gyr")
        if s_rm is not None and s_de is not None and s_rm * 1e3 >= s_de * 1e9:
            diags.append("cosmology.s_rm_kyr: must precede s_de_gyr")
        if s_de is not None and t_now is not None and s_de >= t_now:
            diags.append("cosmology.s_de_gyr: must precede t_now_gyr")
    return diags


def _merged_scenario_config(cfg: dict[str, dict[str, str]]) -> tuple[str, dict[str, str]]:
    scenario = cfg["scenario"]["name"]
    merged = dict(DEFAULT_CONFIGS[scenario])
    merged.update(cfg.get(scenario, {}))
    return scenario, merged


def _resolve_out_dir(args, cfg) -> Path:
    if getattr(args, "out", None):
        return Path(args.out)
    env = os.environ.get("VALUEFIELD_OUT")
    if env:
        return Path(env)
    return Path(cfg.get("output", {}).get("dir", "valuefield_out"))


def _apply_overrides(cfg, overrides) -> None:
    for item in overrides or []:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigInvalid(f"--set expects section.key=value, got {item!r}")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        cfg.setdefault(section.strip(), {})[key.strip()] = value.strip()


def _print_report(report) -> None:
    print(f"scenario: {report.scenario}  wall_time: {report.wall_time_s:.3f} s")
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"  [{status}] {c.name}: measured {c.measured!r} vs expected "
              f"{c.expected!r} (tolerance {c.tolerance!r})")
    for path in report.artifacts:
        print(f"  artifact: {path}")


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    _apply_overrides(cfg, args.set)
    diags = validate_config(cfg)
    if diags:
        for d in diags:
            print(f"config error: {d}", file=sys.stderr)
        return 2
    scenario, merged = _merged_scenario_config(cfg)
    report = run_scenario(scenario, merged, _resolve_out_dir(args, cfg))
    _print_report(report)
    return 0 if report.all_passed else 1


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    _apply_overrides(cfg, args.set)
    diags = validate_config(cfg)
    for d in diags:
        print(d)
    return 0 if not diags else 2


def cmd_demo(args) -> int:
    if args.scenario not in SCENARIOS:
        print(f"unknown scenario {args.scenario!r}; choose from {sorted(SCENARIOS)}",
              file=sys.stderr)
        return 2
    cfg = {"scenario": {"name": args.scenario},
           args.scenario: dict(DEFAULT_CONFIGS[args.scenario])}
    out_dir = _resolve_out_dir(args, cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_path = out_dir / f"{args.scenario}.cfg"
    with open(config_path, "w") as fh:
        for section, entries in cfg.items():
            fh.write(f"[{section}]\n")
            for key, value in entries.items():
                fh.write(f"{key} = {value}\n")
            fh.write("\n")
    scenario, merged = _merged_scenario_config(cfg)
    report = run_scenario(scenario, merged, out_dir)
    print(f"wrote config: {config_path}")
    _print_report(report)
    return 0 if report.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="valuefield",
        description="Run value-field scenarios from a config file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the scenario named in the config")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="output directory (overrides config and env)")
    p_run.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                       help="override a config key")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="print config diagnostics and exit")
    p_val.add_argument("config")
    p_val.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    p_val.set_defaults(func=cmd_validate)

    p_demo = sub.add_parser("demo", help="run a scenario with built-in defaults")
    p_demo.add_argument("scenario", choices=sorted(SCENARIOS))
    p_demo.add_argument("--out")
    p_demo.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
