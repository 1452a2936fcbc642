"""Command-line front end.

Subcommands::

    pbtradeoff measures  closed-form vs numeric-limit tradeoff measures
    pbtradeoff curve     analytic spectral efficiency vs Eb/N0 curve
    pbtradeoff simulate  Monte Carlo curve with standard errors
    pbtradeoff compare   analytic vs Monte Carlo, pointwise relative gaps

SNR bounds are given in dB and converted to linear internally. Spectral
efficiency is exported in b/s/Hz and Eb/N0 in dB. Settings may come from
a ``key=value`` file (``--config``); command-line flags override it.

Exit status: 0 success, 1 usage/config error, 2 numeric/domain error,
3 ``compare`` gap above ``--tolerance``.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, fields
from typing import Optional

from . import __version__
from .capacity import SystemConfig, TimeShare
from .errors import ConfigError, DomainError, EmptyCurveError, NumericalError
from .evt import FAMILIES, make_fading
from .montecarlo import empirical_curve
from .tradeoff import (
    LN2,
    MODES,
    curve,
    curve_from_values,
    measures_closed,
    measures_numeric,
    measures_relay_limits,
    snr_grid,
    spectral_function,
    to_db,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_TOLERANCE = 0, 1, 2, 3

PRESETS = {"fig2": 1.0 / 3.0, "fig3": 0.5, "fig4": 2.0 / 3.0}
FORMATS = ("csv", "json", "text")
CURVE_COLUMNS = ("snr_db", "se_bps_hz", "ebno_db")
SIMULATE_COLUMNS = ("snr_db", "se_bps_hz", "std_err_bps_hz", "ebno_db", "n_samples")
COMPARE_COLUMNS = ("mode", "snr_db", "se_analytic_bps_hz", "se_empirical_bps_hz",
                   "std_err_bps_hz", "rel_gap", "ebno_analytic_db", "ebno_empirical_db")


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------

def parse_fading(text: str):
    """``"rayleigh"``, ``"nakagami-m:2"`` or ``"weibull:1.5"`` -> (family, params)."""
    name, _, rest = text.strip().partition(":")
    params = tuple(float(p) for p in rest.split(",") if p.strip()) if rest else ()
    make_fading(name, params)  # validates
    return name, params


@dataclass(frozen=True)
class ScenarioSpec:
    mode: str = "direct"
    k: int = 20
    alpha_b: float = 0.01
    alpha_r: float = 1.0
    beta_b: float = 0.5
    fading: str = "rayleigh"
    snr_min_db: float = -10.0
    snr_max_db: float = 40.0
    points: int = 30
    samples: int = 100_000
    seed: int = 0
    out: Optional[str] = None
    format: str = "csv"
    tolerance: float = 0.05
    preset: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode: expected one of {MODES}, got {self.mode!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format: expected one of {FORMATS}, got {self.format!r}")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(f"preset: expected one of {tuple(PRESETS)}, got {self.preset!r}")
        if self.k < 2:
            raise ConfigError(f"k: must be >= 2, got {self.k}")
        if not (self.alpha_b > 0 and self.alpha_r > 0):
            raise ConfigError("alpha_b/alpha_r: must be positive")
        if not 0.0 <= self.beta_b <= 1.0:
            raise ConfigError(f"beta_b: must lie in [0, 1], got {self.beta_b}")
        if self.points < 1:
            raise ConfigError(f"points: must be >= 1, got {self.points}")
        if self.points > 1 and not self.snr_min_db < self.snr_max_db:
            raise ConfigError("snr_min_db: must be below snr_max_db")
        if self.samples < 1:
            raise ConfigError(f"samples: must be >= 1, got {self.samples}")
        if self.seed < 0:
            raise ConfigError(f"seed: must be nonnegative, got {self.seed}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        if not self.tolerance >= 0:
            raise ConfigError(f"tolerance: must be nonnegative, got {self.tolerance}")
        try:
            parse_fading(self.fading)
        except (ConfigError, ValueError) as exc:
            raise ConfigError(f"fading: {exc}") from None

    @property
    def beta_r(self) -> float:
        return 1.0 - self.beta_b

    def system_config(self) -> SystemConfig:
        fading = make_fading(*parse_fading(self.fading))
        return SystemConfig(k=self.k, alpha_b=self.alpha_b, alpha_r=self.alpha_r,
                            timeshare=TimeShare.from_backhaul(self.beta_b),
                            fading_h=fading, fading_g=fading)

    def grid(self):
        return snr_grid(self.snr_min_db, self.snr_max_db, self.points)

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        for key in ("out", "workers"):
            d.pop(key)
        return d

    def to_config_text(self) -> str:
        lines = ["# pbtradeoff scenario"]
        for f in fields(self):
            v = getattr(self, f.name)
            lines.append(f"{f.name}={'' if v is None else (repr(v) if isinstance(v, float) else v)}")
        return "\n".join(lines) + "\n"


_KEYS = {f.name for f in fields(ScenarioSpec)}
_INT_KEYS = {"k", "points", "samples", "seed", "workers"}
_FLOAT_KEYS = {"alpha_b", "alpha_r", "beta_b", "snr_min_db", "snr_max_db", "tolerance"}
_OPTIONAL_KEYS = {"out", "preset"}


def _coerce(key, raw):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None
    if key in _OPTIONAL_KEYS and raw == "":
        return None
    return raw


def parse_config(text: str) -> dict:
    """Parse ``key=value`` lines (``#`` comments allowed); unknown keys are errors."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"config line {lineno}: expected key=value, got {line!r}")
        if key not in _KEYS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def spec_from_config_text(text: str) -> ScenarioSpec:
    return ScenarioSpec(**parse_config(text))


# ---------------------------------------------------------------------------
# library-level runners (the CLI only formats their output)
# ---------------------------------------------------------------------------

def run_measures(spec: ScenarioSpec) -> dict:
    cfg = spec.system_config()
    closed = measures_closed(spec.mode, cfg)
    numeric = measures_numeric(spectral_function(spec.mode, cfg))
    report = {
        "mode": spec.mode,
        "closed": closed.as_dict(),
        "numeric": numeric.as_dict(),
        "rel_gap": closed.rel_gap(numeric),
    }
    if spec.mode == "relay":
        limits = measures_relay_limits(cfg)
        report["limits"] = limits.as_dict()
        report["limits_rel_gap"] = limits.rel_gap(numeric)
    return report


def _modes_for(spec):
    return ("direct", "relay") if spec.preset else (spec.mode,)


def run_curve(spec: ScenarioSpec) -> list[dict]:
    cfg = spec.system_config()
    c = spectral_function(spec.mode, cfg)
    if spec.points < 2:
        crv = curve_from_values(spec.grid(), [c(float(s)) for s in spec.grid()], spec.mode)
    else:
        crv = curve(c, (spec.snr_min_db, spec.snr_max_db, spec.points), spec.mode)
    return [{"snr_db": p.snr_db, "se_bps_hz": p.se_bits, "ebno_db": p.ebno_db}
            for p in crv]


def _need_empirical(spec):
    if spec.mode == "awgn" and not spec.preset:
        raise ConfigError("mode: awgn has no fading to simulate; use direct or relay")


def run_simulate(spec: ScenarioSpec) -> list[dict]:
    _need_empirical(spec)
    cfg = spec.system_config()
    snrs = spec.grid()
    _, est = empirical_curve(spec.mode, cfg, snrs, spec.samples, spec.seed,
                             workers=spec.workers)
    rows = []
    for s, e in zip(snrs, est):
        if not e.mean > 0.0:
            continue
        rows.append({"snr_db": to_db(s), "se_bps_hz": e.mean / LN2,
                     "std_err_bps_hz": e.std_err / LN2,
                     "ebno_db": to_db(s * LN2 / e.mean), "n_samples": e.n_samples})
    return rows


def run_compare(spec: ScenarioSpec) -> tuple[list[dict], dict]:
    _need_empirical(spec)
    if spec.samples < 1000:
        raise ConfigError(f"samples: compare needs at least 1000, got {spec.samples}")
    cfg = spec.system_config()
    snrs = spec.grid()
    rows = []
    for mode in _modes_for(spec):
        c = spectral_function(mode, cfg)
        _, est = empirical_curve(mode, cfg, snrs, spec.samples, spec.seed,
                                 workers=spec.workers)
        for i, (s, e) in enumerate(zip(snrs, est)):
            try:
                analytic = c(float(s))
            except (DomainError, NumericalError) as exc:
                raise type(exc)(f"point {i} (snr={s!r}): {exc}") from exc
            gap = abs(analytic - e.mean) / e.mean if e.mean > 0 else math.inf
            rows.append({
                "mode": mode,
                "snr_db": to_db(s),
                "se_analytic_bps_hz": analytic / LN2,
                "se_empirical_bps_hz": e.mean / LN2,
                "std_err_bps_hz": e.std_err / LN2,
                "rel_gap": gap,
                "ebno_analytic_db": to_db(s * LN2 / analytic) if analytic > 0 else math.inf,
                "ebno_empirical_db": to_db(s * LN2 / e.mean) if e.mean > 0 else math.inf,
            })
    worst = max(rows, key=lambda r: r["rel_gap"])
    summary = {
        "max_rel_gap": worst["rel_gap"],
        "at_mode": worst["mode"],
        "at_snr_db": worst["snr_db"],
        "tolerance": spec.tolerance,
        "passed": worst["rel_gap"] <= spec.tolerance,
    }
    return rows, summary


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, float):
        return format(v, ".12e")
    return str(v)


def render_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def render_json(rows, spec: ScenarioSpec, extra=None) -> str:
    meta = {"spec": spec.echo(), "seed": spec.seed, "version": __version__}
    if extra:
        meta.update(extra)
    return json.dumps({"metadata": meta, "rows": rows}, indent=2) + "\n"


_MEASURE_ROWS = (("ebno_min", "linear"), ("ebno_min_db", "dB"), ("s0", "b/s/Hz/3dB"),
                 ("ebno_imp", "linear"), ("ebno_imp_db", "dB"), ("s_inf", "b/s/Hz/3dB"))


def _gap(report, block, name):
    """Relative gap for linear rows, absolute difference for dB rows."""
    if name.endswith("_db"):
        return abs(report[block][name] - report["numeric"][name])
    return report["rel_gap" if block == "closed" else "limits_rel_gap"][name]


def _measure_rows(report):
    rows = []
    for name, unit in _MEASURE_ROWS:
        row = {"measure": name, "unit": unit,
               "closed": report["closed"][name], "numeric": report["numeric"][name],
               "gap": _gap(report, "closed", name)}
        if "limits" in report:
            row["limits"] = report["limits"][name]
            row["limits_gap"] = _gap(report, "limits", name)
        rows.append(row)
    return rows


def render_measures_text(report) -> str:
    rows = _measure_rows(report)
    cols = list(rows[0])
    table = [cols] + [[r[c] if isinstance(r[c], str) else f"{r[c]:.8g}" for c in cols]
                      for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
    lines = [f"mode: {report['mode']}  (gap: relative for linear rows, dB for dB rows)"]
    for row in table:
        lines.append("  ".join(cell.rjust(wd) for cell, wd in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"out: cannot write {out!r}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _flags(p):
    p.add_argument("--config", help="key=value scenario file; flags override it")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--k", type=int, help="number of users (default 20)")
    p.add_argument("--alpha-b", type=float, help="direct-link SNR ratio (default 0.01)")
    p.add_argument("--alpha-r", type=float, help="relay access SNR ratio (default 1)")
    p.add_argument("--beta-b", type=float,
                   help="backhaul time share; beta_r = 1 - beta_b (default 0.5)")
    p.add_argument("--fading", help=f"family[:params], families {', '.join(FAMILIES)}")
    p.add_argument("--snr-min-db", type=float, help="lowest SNR in dB (default -10)")
    p.add_argument("--snr-max-db", type=float, help="highest SNR in dB (default 40)")
    p.add_argument("--points", type=int, help="grid points (default 30)")
    p.add_argument("--samples", type=int, help="Monte Carlo samples per point (default 1e5)")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--tolerance", type=float,
                   help="compare: max allowed relative gap (default 0.05)")
    p.add_argument("--preset", choices=tuple(PRESETS),
                   help="beta_b of 1/3, 1/2, 2/3; compare then covers direct and relay")
    p.add_argument("--workers", type=int, help="threads for Monte Carlo (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pbtradeoff", description=__doc__.split("\n\n")[0],
                     epilog="SNR inputs are in dB; spectral efficiency is reported "
                            "in b/s/Hz and Eb/N0 in dB.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (("measures", "closed-form vs numeric-limit measures"),
                       ("curve", "analytic curve export"),
                       ("simulate", "Monte Carlo curve export"),
                       ("compare", "analytic vs Monte Carlo comparison")):
        _flags(sub.add_parser(name, help=text, description=text))
    return parser


def spec_from_args(args) -> ScenarioSpec:
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config(fh.read()))
        except OSError as exc:
            raise ConfigError(f"config: cannot read {args.config!r}: {exc.strerror}") from None
    explicit = {f.name: getattr(args, f.name) for f in fields(ScenarioSpec)
                if getattr(args, f.name, None) is not None}
    values.update(explicit)
    preset = values.get("preset")
    if preset is not None:
        if "beta_b" in values and abs(values["beta_b"] - PRESETS[preset]) > 1e-12:
            raise ConfigError(f"beta_b: conflicts with preset {preset!r}")
        values["beta_b"] = PRESETS[preset]
    if "format" not in values and args.command == "measures":
        values["format"] = "text"
    return ScenarioSpec(**values)


def _cmd_measures(spec):
    report = run_measures(spec)
    if spec.format == "json":
        meta = {"spec": spec.echo(), "seed": spec.seed, "version": __version__}
        text = json.dumps({"metadata": meta, **report}, indent=2) + "\n"
    elif spec.format == "csv":
        rows = _measure_rows(report)
        text = render_csv(rows, list(rows[0]))
    else:
        text = render_measures_text(report)
    _emit(text, spec.out)
    return EXIT_OK


def _rows_out(rows, columns, spec, extra=None):
    if spec.format == "json":
        return render_json(rows, spec, extra)
    if spec.format == "text":
        raise ConfigError("format: text is only available for measures")
    return render_csv(rows, columns)


def _cmd_curve(spec):
    _emit(_rows_out(run_curve(spec), CURVE_COLUMNS, spec), spec.out)
    return EXIT_OK


def _cmd_simulate(spec):
    _emit(_rows_out(run_simulate(spec), SIMULATE_COLUMNS, spec), spec.out)
    return EXIT_OK


def _cmd_compare(spec):
    rows, summary = run_compare(spec)
    _emit(_rows_out(rows, COMPARE_COLUMNS, spec, {"summary": summary}), spec.out)
    status = "PASS" if summary["passed"] else "FAIL"
    print(f"{status} max_rel_gap={summary['max_rel_gap']:.6g} "
          f"(mode={summary['at_mode']}, snr_db={summary['at_snr_db']:.4g}) "
          f"tolerance={summary['tolerance']:g}", file=sys.stderr)
    return EXIT_OK if summary["passed"] else EXIT_TOLERANCE


_COMMANDS = {"measures": _cmd_measures, "curve": _cmd_curve,
             "simulate": _cmd_simulate, "compare": _cmd_compare}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        spec = spec_from_args(args)
        return _COMMANDS[args.command](spec)
    except ConfigError as exc:
        print(f"pbtradeoff: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, NumericalError, EmptyCurveError) as exc:
        print(f"pbtradeoff: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
