"""
Command-line front end.

Each subcommand reads its own ``[section]`` of an INI file (``--config``),
applies ``--set key=value`` overrides, validates every key and only then
calls into the library. Exit codes: 0 success, 1 computational error,
2 configuration error. Files written by a failed run are removed.
"""
from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Callable

from . import __version__, export
from .dispersion import available_materials, get_material, gvm_map
from .errors import ConfigError, QPGError
from .grids import SpectralGrid
from .jsa import PDCSpec, PumpEnvelope, default_pdc_grids, marginal_fwhm, pdc_jsa, schmidt, tune_pump_for_decorrelation
from .phasematching import ProcessSpec, phasematching_map, phasematching_output_fwhm
from .pipeline import ReportConfig, run_report
from .processfinder import Materials, partner_wavelength, pump_trend, sweep_temperature


@dataclass(frozen=True)
class Param:
    name: str
    kind: str  # float | int | str | floats | choice
    default: Any
    help: str
    check: Callable = None
    choices: tuple = ()


def _positive(v):
    return None if v > 0 else "must be positive"


def _fraction(v):
    return None if 0 <= v <= 1 else "must lie in [0, 1]"


def _at_least_one(v):
    return None if v >= 1 else "must be >= 1"


def _non_negative(v):
    return None if v >= 0 else "must be non-negative"


MATERIAL_KEYS = (
    Param("material", "str", "lithium-niobate-effective-waveguide", "coefficient set name"),
    Param("polarization_in", "str", "o", "input polarization"),
    Param("polarization_pump", "str", "e", "pump polarization"),
    Param("polarization_out", "str", "o", "output polarization"),
)

PROCESS_KEYS = MATERIAL_KEYS + (
    Param("length", "float", 27e-3, "interaction length in m", _positive),
    Param("temperature", "float", 190.0, "crystal temperature in C"),
    Param("lambda_in", "float", 1545.0, "central input wavelength in nm", _positive),
    Param("lambda_pump", "float", 854.0, "central pump wavelength in nm", _positive),
    Param("qpm_order", "int", 1, "quasi-phasematching order", _at_least_one),
)

SCHEMAS = {
    "gvm-map": MATERIAL_KEYS[:3] + (
        Param("temperatures", "floats", (190.0, 300.0), "comma-separated temperatures in C"),
        Param("targets", "floats", (550.0, 574.0), "output wavelength per temperature in nm (constraint lines)"),
        Param("lambda_in_start", "float", 1300.0, "input axis start in nm", _positive),
        Param("lambda_in_stop", "float", 1800.0, "input axis stop in nm", _positive),
        Param("lambda_in_num", "int", 201, "input axis points", _at_least_one),
        Param("lambda_pump_start", "float", 750.0, "pump axis start in nm", _positive),
        Param("lambda_pump_stop", "float", 1000.0, "pump axis stop in nm", _positive),
        Param("lambda_pump_num", "int", 201, "pump axis points", _at_least_one),
    ),
    "phasematching": PROCESS_KEYS + (
        Param("lambda_in_start", "float", 1525.0, "input axis start in nm", _positive),
        Param("lambda_in_stop", "float", 1565.0, "input axis stop in nm", _positive),
        Param("lambda_in_num", "int", 512, "input axis points", _at_least_one),
        Param("lambda_pump_start", "float", 848.0, "pump axis start in nm", _positive),
        Param("lambda_pump_stop", "float", 860.0, "pump axis stop in nm", _positive),
        Param("lambda_pump_num", "int", 512, "pump axis points", _at_least_one),
    ),
    "jsa": (
        Param("material", "str", "ktp-bulk", "coefficient set name"),
        Param("polarization_pump", "str", "y", "pump polarization"),
        Param("polarization_signal", "str", "y", "signal polarization"),
        Param("polarization_idler", "str", "z", "idler polarization"),
        Param("length", "float", 3.88e-3, "crystal length in m", _positive),
        Param("temperature", "float", 25.0, "crystal temperature in C"),
        Param("lambda_signal", "float", 1545.0, "central signal wavelength in nm", _positive),
        Param("lambda_idler", "float", 1545.0, "central idler wavelength in nm", _positive),
        Param("grid_span", "float", 10e12, "frequency span of both axes in Hz", _positive),
        Param("grid_num", "int", 240, "points per axis", _at_least_one),
        Param("pump_fwhm", "float", 0.0, "pump intensity FWHM in Hz; 0 tunes it for minimal Schmidt number",
              _non_negative),
        Param("target_schmidt", "float", 1.25, "largest acceptable Schmidt number when tuning", _at_least_one),
        Param("schmidt_modes", "int", 20, "rows in the Schmidt coefficient table", _at_least_one),
    ),
    "report": (
        Param("material", "str", ReportConfig.material, "converter coefficient set"),
        Param("length", "float", ReportConfig.length, "converter length in m", _positive),
        Param("temperature", "float", ReportConfig.temperature, "converter temperature in C"),
        Param("lambda_in", "float", ReportConfig.lambda_in, "input wavelength in nm", _positive),
        Param("lambda_pump", "float", ReportConfig.lambda_pump, "converter pump wavelength in nm", _positive),
        Param("pdc_length", "float", ReportConfig.pdc_length, "source crystal length in m", _positive),
        Param("pdc_temperature", "float", ReportConfig.pdc_temperature, "source temperature in C"),
        Param("pdc_grid_span", "float", ReportConfig.pdc_grid_span, "source grid span in Hz", _positive),
        Param("pdc_grid_num", "int", ReportConfig.pdc_grid_num, "source grid points", _at_least_one),
        Param("target_schmidt", "float", ReportConfig.target_schmidt, "largest acceptable source Schmidt number",
              _at_least_one),
        Param("measured_input_fwhm", "float", ReportConfig.measured_input_fwhm, "measured input FWHM in Hz",
              _positive),
        Param("measured_output_fwhm", "float", ReportConfig.measured_output_fwhm, "measured output FWHM in Hz",
              _positive),
        Param("klyshko_open", "float", ReportConfig.klyshko_open, "unconverted Klyshko efficiency, pump on",
              _fraction),
        Param("klyshko_blocked", "float", ReportConfig.klyshko_blocked, "unconverted Klyshko efficiency, pump off",
              _fraction),
        Param("klyshko_converted", "float", ReportConfig.klyshko_converted, "Klyshko efficiency of converted light",
              _fraction),
        Param("klyshko_unconverted", "float", ReportConfig.klyshko_unconverted,
              "Klyshko efficiency of unconverted reference", _fraction),
        Param("detector_converted", "float", ReportConfig.detector_converted, "detector efficiency, converted arm",
              _fraction),
        Param("detector_reference", "float", ReportConfig.detector_reference, "detector efficiency, reference arm",
              _fraction),
        Param("coupling_converted", "float", ReportConfig.coupling_converted, "fibre coupling, converted mode",
              _fraction),
        Param("coupling_reference", "float", ReportConfig.coupling_reference, "fibre coupling, reference mode",
              _fraction),
        Param("target_g2", "float", ReportConfig.target_g2, "heralded g2 the mean pair number is fitted to",
              _positive),
        Param("herald_transmission", "float", ReportConfig.herald_transmission, "herald arm transmission",
              _fraction),
        Param("signal_transmission", "float", ReportConfig.signal_transmission, "signal arm transmission",
              _fraction),
        Param("schmidt_modes", "int", ReportConfig.schmidt_modes, "thermal modes of the source", _at_least_one),
        Param("trials", "int", ReportConfig.trials, "Monte Carlo trials", _at_least_one),
        Param("seed", "int", ReportConfig.seed, "Monte Carlo seed", _non_negative),
        Param("workers", "int", ReportConfig.workers, "Monte Carlo worker threads", _at_least_one),
    ),
    "operating-points": MATERIAL_KEYS + (
        Param("process", "choice", "sfg", "energy-conservation sign", choices=("sfg", "dfg")),
        Param("temperatures", "floats", (190.0, 300.0), "comma-separated temperatures in C"),
        Param("targets", "floats", (550.0, 574.0), "output wavelength per temperature (or one for all) in nm"),
        Param("lambda_in_min", "float", 0.0, "lower input search bound in nm; 0 for the validity edge",
              _non_negative),
        Param("lambda_in_max", "float", 0.0, "upper input search bound in nm; 0 for the validity edge",
              _non_negative),
    ),
}

GNUPLOT = {
    "gvm-map": (
        "set xlabel 'pump wavelength (nm)'\nset ylabel 'input wavelength (nm)'\nset view map\n"
        "splot '{gvm}' using 2:1:3 with image notitle, '{zero}' using 2:1:(0) with lines title 'GVM = 0', "
        "'{constraint}' using 2:1:(0) with lines title 'energy conservation'\n"
    ),
    "phasematching": (
        "set xlabel 'pump wavelength (nm)'\nset ylabel 'input wavelength (nm)'\nset view map\n"
        "splot '{map}' using 2:1:5 with image notitle\n"
    ),
    "jsa": (
        "set xlabel 'idler frequency (Hz)'\nset ylabel 'signal frequency (Hz)'\nset view map\n"
        "splot '{map}' using 2:1:5 with image notitle\n"
    ),
    "operating-points": (
        "set xlabel 'temperature (C)'\nset ylabel 'wavelength (nm)'\n"
        "plot '{points}' using 1:2 with linespoints title 'input', '' using 1:3 with linespoints title 'pump'\n"
    ),
}


# --- configuration -----------------------------------------------------------


def _convert(section, p, raw):
    key = f"{section}.{p.name}"
    text = str(raw).strip()
    try:
        if p.kind == "float":
            v = float(text)
        elif p.kind == "int":
            v = int(text)
        elif p.kind == "floats":
            v = tuple(float(x) for x in text.split(",") if x.strip())
        else:
            v = text
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r} as {p.kind}") from None
    if p.kind == "choice" and v not in p.choices:
        raise ConfigError(key, f"must be one of {', '.join(p.choices)}")
    if p.check is not None:
        msg = p.check(v)
        if msg:
            raise ConfigError(key, msg)
    return v


def load_config(section, config_path=None, overrides=()):
    """Parsed and type-checked parameters of one subcommand section."""
    schema = {p.name: p for p in SCHEMAS[section]}
    raw = {}
    if config_path is not None:
        cp = configparser.ConfigParser()
        try:
            with open(config_path) as fh:
                cp.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError("config", str(exc)) from None
        if cp.has_section(section):
            raw.update(cp.items(section))
    for item in overrides:
        if "=" not in item:
            raise ConfigError("--set", f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        raw[k.strip()] = v
    for k in raw:
        if k not in schema:
            raise ConfigError(f"{section}.{k}", "unknown key")
    return {name: _convert(section, p, raw[name]) if name in raw else p.default for name, p in schema.items()}


def _material(section, cfg, pol_key, name_key="material"):
    name = cfg[name_key]
    if name not in available_materials():
        raise ConfigError(f"{section}.{name_key}", f"unknown material {name!r}; known: {', '.join(available_materials())}")
    try:
        return get_material(name, cfg[pol_key])
    except KeyError:
        raise ConfigError(f"{section}.{pol_key}", f"no {cfg[pol_key]!r} record for {name}") from None


def _in_range(section, key, model, wavelength, temperature):
    try:
        model.check(wavelength, temperature)
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}", str(exc)) from None


def _grid(section, cfg, prefix):
    try:
        return SpectralGrid(cfg[f"{prefix}_start"], cfg[f"{prefix}_stop"], cfg[f"{prefix}_num"])
    except ValueError as exc:
        raise ConfigError(f"{section}.{prefix}_stop", str(exc)) from None


# --- subcommands -------------------------------------------------------------
# Each ``plan_*`` validates and returns a zero-argument callable that does the
# work, so nothing is computed before the whole config has been checked.


class Outputs:
    """Tracks files written so a failed run can remove them."""

    def __init__(self, directory, header):
        self.dir = Path(directory)
        self.header = header
        self.written = []

    def path(self, name):
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.dir / name
        self.written.append(p)
        return p

    def cleanup(self):
        for p in self.written:
            p.unlink(missing_ok=True)


def plan_gvm_map(cfg, out, gnuplot):
    s = "gvm-map"
    m_in = _material(s, cfg, "polarization_in")
    m_p = _material(s, cfg, "polarization_pump")
    gin, gp = _grid(s, cfg, "lambda_in"), _grid(s, cfg, "lambda_pump")
    if cfg["targets"] and len(cfg["targets"]) not in (1, len(cfg["temperatures"])):
        raise ConfigError(f"{s}.targets", "needs one value or one per temperature")
    for T in cfg["temperatures"]:
        for key, model, g in (("lambda_in_start", m_in, gin), ("lambda_pump_start", m_p, gp)):
            _in_range(s, key, model, g.start, T)
            _in_range(s, key.replace("start", "stop"), model, g.stop, T)

    def run():
        targets = cfg["targets"]
        for i, T in enumerate(cfg["temperatures"]):
            tag = f"T{T:g}"
            gm = gvm_map(m_in, m_p, gin, gp, T)
            names = {"gvm": f"gvm_{tag}.dat", "zero": f"gvm_zero_{tag}.dat", "constraint": f"constraint_{tag}.dat"}
            export.write_gvm(out.path(names["gvm"]), gm, out.header)
            export.write_table(out.path(names["zero"]), ("lambda_in_nm", "lambda_pump_nm"), gm.zero_contour(),
                               out.header + [f"# temperature_C {T}"])
            rows = []
            if targets:
                target = targets[0] if len(targets) == 1 else targets[i]
                lam_in = gin.wavelengths[gin.wavelengths > target]
                rows = zip(lam_in, partner_wavelength(lam_in, target))
            export.write_table(out.path(names["constraint"]), ("lambda_in_nm", "lambda_pump_nm"), rows,
                               out.header + [f"# temperature_C {T}"])
            if gnuplot:
                out.path(f"gvm_{tag}.gp").write_text(GNUPLOT[s].format(**names))

    return run


def plan_phasematching(cfg, out, gnuplot):
    s = "phasematching"
    mats = [_material(s, cfg, f"polarization_{k}") for k in ("in", "pump", "out")]
    gin, gp = _grid(s, cfg, "lambda_in"), _grid(s, cfg, "lambda_pump")
    T = cfg["temperature"]
    for key, model, g in (("lambda_in", mats[0], gin), ("lambda_pump", mats[1], gp)):
        _in_range(s, f"{key}_start", model, g.start, T)
        _in_range(s, f"{key}_stop", model, g.stop, T)
    try:
        spec = ProcessSpec(*mats, cfg["length"], T, cfg["lambda_in"], cfg["lambda_pump"], qpm_order=cfg["qpm_order"])
    except ValueError as exc:
        raise ConfigError(s, str(exc)) from None

    def run():
        solved = spec.solved()
        pm = phasematching_map(solved, gin, gp)
        export.write_map(out.path("phasematching.dat"), pm, out.header)
        export.write_summary(
            out.path("phasematching_summary.txt"),
            {
                "lambda_out_nm": float(solved.lambda_out),
                "poling_period_m": float(solved.poling_period),
                "output_fwhm_hz": float(phasematching_output_fwhm(solved)),
            },
            out.header,
        )
        if gnuplot:
            out.path("phasematching.gp").write_text(GNUPLOT[s].format(map="phasematching.dat"))

    return run


def plan_jsa(cfg, out, gnuplot):
    s = "jsa"
    mats = [_material(s, cfg, f"polarization_{k}") for k in ("pump", "signal", "idler")]
    T = cfg["temperature"]
    _in_range(s, "lambda_signal", mats[1], cfg["lambda_signal"], T)
    _in_range(s, "lambda_idler", mats[2], cfg["lambda_idler"], T)
    try:
        spec = PDCSpec(*mats, cfg["length"], T, cfg["lambda_signal"], cfg["lambda_idler"])
    except ValueError as exc:
        raise ConfigError(s, str(exc)) from None

    def run():
        solved = spec.solved()
        grids = default_pdc_grids(solved, span=cfg["grid_span"], num=cfg["grid_num"])
        if cfg["pump_fwhm"] > 0:
            pump = PumpEnvelope(centre=solved.lambda_pump, fwhm=cfg["pump_fwhm"])
        else:
            pump, _ = tune_pump_for_decorrelation(solved, cfg["target_schmidt"], grids=grids)
        jmap = pdc_jsa(solved, pump, *grids)
        dec = schmidt(jmap)
        export.write_map(out.path("jsa.dat"), jmap, out.header)
        for axis, name in ((0, "signal"), (1, "idler")):
            export.write_marginal(out.path(f"marginal_{name}.dat"), jmap.axis(axis).frequencies,
                                  jmap.marginal(axis), out.header)
        export.write_schmidt(out.path("schmidt.dat"), dec, out.header, cfg["schmidt_modes"])
        export.write_summary(
            out.path("jsa_summary.txt"),
            {
                "poling_period_m": float(solved.poling_period),
                "pump_fwhm_hz": float(pump.fwhm),
                "schmidt_number": float(dec.schmidt_number),
                "signal_fwhm_hz": float(marginal_fwhm(jmap, 0).value),
                "idler_fwhm_hz": float(marginal_fwhm(jmap, 1).value),
            },
            out.header,
        )
        if gnuplot:
            out.path("jsa.gp").write_text(GNUPLOT[s].format(map="jsa.dat"))

    return run


def plan_report(cfg, out, gnuplot):
    s = "report"
    if cfg["material"] not in available_materials():
        raise ConfigError(f"{s}.material", f"unknown material {cfg['material']!r}")
    if cfg["measured_output_fwhm"] > cfg["measured_input_fwhm"]:
        raise ConfigError(f"{s}.measured_output_fwhm", "exceeds measured_input_fwhm")
    for key in ("klyshko_blocked", "klyshko_unconverted", "detector_converted", "coupling_converted"):
        if cfg[key] == 0:
            raise ConfigError(f"{s}.{key}", "must be non-zero")
    names = {f.name for f in fields(ReportConfig)}
    rc = ReportConfig(**{k: v for k, v in cfg.items() if k in names})

    def run():
        summary, _ = run_report(rc)
        export.write_summary(out.path("summary.txt"), summary, out.header)

    return run


def plan_operating_points(cfg, out, gnuplot):
    s = "operating-points"
    mats = Materials(*(_material(s, cfg, f"polarization_{k}") for k in ("in", "pump", "out")))
    temps, targets = cfg["temperatures"], cfg["targets"]
    if len(targets) not in (1, len(temps)):
        raise ConfigError(f"{s}.targets", "needs one value or one per temperature")
    lo, hi = cfg["lambda_in_min"], cfg["lambda_in_max"]
    window = None
    if lo or hi:
        if not 0 < lo < hi:
            raise ConfigError(f"{s}.lambda_in_max", "search bounds need 0 < lambda_in_min < lambda_in_max")
        window = (lo, hi)
    per_t = dict(zip(temps, targets)) if len(targets) > 1 else None

    def run():
        target = (lambda T: per_t[T]) if per_t else targets[0]
        samples = sweep_temperature(mats, temps, target, cfg["process"], window)
        extra = [f"# trend {pump_trend(samples)}"]
        extra += [f"# failed T={x.temperature:g} target={x.lambda_out:g}: {x.error}" for x in samples if x.point is None]
        export.write_points(out.path("operating_points.dat"), [x.point for x in samples if x.point], out.header + extra)
        if gnuplot:
            out.path("operating_points.gp").write_text(GNUPLOT[s].format(points="operating_points.dat"))

    return run


PLANS = {
    "gvm-map": plan_gvm_map,
    "phasematching": plan_phasematching,
    "jsa": plan_jsa,
    "report": plan_report,
    "operating-points": plan_operating_points,
}

HELP = {
    "gvm-map": "group-velocity mismatch maps with zero contours and constraint lines",
    "phasematching": "phasematching map of the converter",
    "jsa": "joint spectral amplitude of the pair source, marginals and Schmidt table",
    "report": "full chain summary: widths, compression, baselines, efficiencies, g2",
    "operating-points": "group-velocity-matched operating points versus temperature",
}


def _keys_epilog(section):
    lines = [f"configuration keys (section [{section}]):"]
    for p in SCHEMAS[section]:
        d = ",".join(f"{x:g}" for x in p.default) if p.kind == "floats" else p.default
        lines.append(f"  {p.name} = {d}    {p.help}")
    return "\n".join(lines)


def build_parser():
    parser = argparse.ArgumentParser(prog="qpgsim", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qpgsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SCHEMAS:
        p = sub.add_parser(name, help=HELP[name], description=HELP[name], epilog=_keys_epilog(name),
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", help="INI file; keys are read from the section named after the subcommand")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one key")
        p.add_argument("--out", default=".", help="output directory (default: current directory)")
        if name in GNUPLOT:
            p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    section = args.command
    try:
        cfg = load_config(section, args.config, args.set)
        seed = cfg.get("seed")
        # thread count does not change results, so it stays out of the hash
        hashed = {k: v for k, v in cfg.items() if k != "workers"}
        out = Outputs(args.out, export.header_lines({"command": section, **hashed}, seed))
        job = PLANS[section](cfg, out, getattr(args, "gnuplot", False))
    except ConfigError as exc:
        print(f"qpgsim {section}: config error: {exc}", file=sys.stderr)
        return 2
    try:
        job()
    except (QPGError, ValueError, ArithmeticError, OSError) as exc:
        out.cleanup()
        print(f"qpgsim {section}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except BaseException:
        out.cleanup()
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
