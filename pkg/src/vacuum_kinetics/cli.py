"""Batch front-end: parameter sweeps over the physics modules with
deterministic CSV output, optional rendered figures, and the acceptance-suite
runner.

    vacuum-kinetics <scenario> [--config FILE] [--param name=value|name=start:stop:count[:log]]
                    [--out FILE] [--format csv] [--jobs N] [--allow-flagged]
                    [--no-timestamp] [--plot [FILE]] [--criteria LIST]

Scenarios: cp-stationary, cp-moving, cp-transient, unruh-kernels,
cavity-rates, cavity-master, acceptance.  Exit codes: 0 success, 1 config
error, 2 computation flag (suppressible with --allow-flagged), 3 acceptance
failure.

Config files hold one `name = value` pair per line (# comments allowed) with
the same value syntax as --param; a flag given on the command line wins.
Sweep values `start:stop:count` (linear) or `start:stop:count:log` expand to
grids, and several swept parameters combine as a full product, evaluated in
row-major order of the parameter list.  Output is one record per grid point,
every column named with its unit in brackets, numbers at full round-trip
precision, and byte-for-byte reproducible apart from the suppressible
timestamp line.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import itertools
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .core import AtomSpec, UnitSystem
from . import acceptance
from . import casimir_polder as cp
from . import cavity_scheme as cavity
from . import detector_kernels as dk
from . import master_equation as me
from .trajectory import AcceleratedTrajectory


class ConfigError(ValueError):
    """Invalid configuration (bad scenario, parameter, range, or file)."""


SCENARIOS = ("cp-stationary", "cp-moving", "cp-transient", "unruh-kernels",
             "cavity-rates", "cavity-master", "acceptance")

# per-scenario parameter schema: name -> (default, sweepable)
_COMMON = {"omega0": (1.0, False), "alpha0": (1.0, False),
           "c": (1.0, False), "hbar": (1.0, False), "kB": (1.0, False)}
_SCHEMAS: dict[str, dict[str, tuple[object, bool]]] = {
    "cp-stationary": {**_COMMON, "R": (1.0, True)},
    "cp-moving": {**_COMMON, "R": (1.0, True), "R0": (1.0, True)},
    "cp-transient": {**_COMMON, "R": (1.0, True), "t_elapsed": (0.0, True),
                     "V": (0.0, True), "k_uv": (1.0e3, False)},
    "unruh-kernels": {"alpha": (1.0, True), "dtau": (1.0, True),
                      "epsilon": (0.05, False)},
    "cavity-rates": {"nu": (1.0e4, True), "omega": (100.0, True),
                     "alpha": (1.0, True), "lambda": (1.0, True),
                     "T": (9.2103403719761836, True), "r": (1.0, True),
                     "propagation": ("co", False)},
    "cavity-master": {"R1": (1.0, False), "R2": (0.5, False),
                      "nu": (1.0, False), "N_max": (128.0, False),
                      "t_final": (20.0, False), "rows": (50.0, False)},
    "acceptance": {},
}


@dataclass
class RunConfig:
    scenario: str
    params: dict[str, list] = field(default_factory=dict)
    out: str | None = None
    fmt: str = "csv"
    jobs: int = 1
    allow_flagged: bool = False
    no_timestamp: bool = False
    plot: str | None = None
    criteria: list[int] | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; "
                              f"choose from {', '.join(SCENARIOS)}")
        if self.fmt != "csv":
            raise ConfigError(f"unsupported output format {self.fmt!r}; only csv")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {self.jobs}")
        schema = _SCHEMAS[self.scenario]
        for name, values in self.params.items():
            if name not in schema:
                raise ConfigError(
                    f"parameter {name!r} is not valid for scenario "
                    f"{self.scenario!r}; valid: {', '.join(sorted(schema))}")
            if len(values) == 0:
                raise ConfigError(f"parameter {name!r} has an empty grid")
            if len(values) > 1 and not schema[name][1]:
                raise ConfigError(f"parameter {name!r} cannot be swept")


def parse_value_spec(name: str, text: str):
    """A scalar, or start:stop:count[:log] expanded to a grid."""
    parts = text.split(":")
    if len(parts) == 1:
        try:
            return [float(text)]
        except ValueError:
            return [text]  # string-valued option such as propagation
    if len(parts) not in (3, 4):
        raise ConfigError(
            f"bad range for {name!r}: {text!r} (use start:stop:count[:log])")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad range for {name!r}: {text!r} ({exc})") from None
    if count < 1:
        raise ConfigError(f"range for {name!r} needs count >= 1, got {count}")
    if count > 1 and not (stop > start):
        raise ConfigError(f"range for {name!r} must have positive extent")
    if len(parts) == 4:
        if parts[3] != "log":
            raise ConfigError(f"unknown range modifier {parts[3]!r} for {name!r}")
        if start <= 0.0:
            raise ConfigError(f"log range for {name!r} needs start > 0")
        return list(np.geomspace(start, stop, count))
    return list(np.linspace(start, stop, count))


def read_config_file(path: str) -> dict[str, list]:
    params: dict[str, list] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'name = value', got {raw!r}")
        name, _, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not name or not value:
            raise ConfigError(f"{path}:{lineno}: empty name or value")
        params[name] = parse_value_spec(name, value)
    return params


def _grid_points(config: RunConfig):
    """Product grid over swept parameters, defaults filled in, deterministic
    row-major ordering."""
    schema = _SCHEMAS[config.scenario]
    values = {}
    for name, (default, _) in schema.items():
        values[name] = config.params.get(name, [default])
    names = list(schema.keys())
    for combo in itertools.product(*(values[n] for n in names)):
        yield dict(zip(names, combo))


# ---------------------------------------------------------------------------
# per-point evaluation (top-level for pickling under --jobs)
# ---------------------------------------------------------------------------

def _units_of(point) -> UnitSystem:
    return UnitSystem(c=point["c"], hbar=point["hbar"], kB=point["kB"])


def _atom_of(point) -> AtomSpec:
    return AtomSpec(omega0=point["omega0"], alpha0=point["alpha0"])


def _eval_cp_stationary(point):
    spec, units = _atom_of(point), _units_of(point)
    R = point["R"]
    force = cp.stationary_force(spec, R, units)
    return {
        "R_in_c_over_omega0 [c/omega0]": R * spec.omega0 / units.c,
        "R [length]": R,
        "potential [hbar*omega0]": cp.stationary_potential(spec, R, units),
        "force_z [hbar*omega0^2/c]": force.force_z,
        "asymptote_near [hbar*omega0]": cp.asymptote_near(spec, R, units),
        "asymptote_far [hbar*omega0]": cp.asymptote_far(spec, R, units),
        "error_estimate [hbar*omega0^2/c]": force.error_estimate,
    }


def _eval_cp_moving(point):
    spec, units = _atom_of(point), _units_of(point)
    R, R0 = point["R"], point["R0"]
    force = cp.moving_force(spec, R, R0, units)
    return {
        "R_in_c_over_omega0 [c/omega0]": R * spec.omega0 / units.c,
        "R0_in_c_over_omega0 [c/omega0]": R0 * spec.omega0 / units.c,
        "potential [hbar*omega0]": cp.moving_potential(spec, R, R0, units),
        "force_z [hbar*omega0^2/c]": force.force_z,
        "stationary_part [hbar*omega0^2/c]": force.decomposition["stationary_part"],
        "residual_part [hbar*omega0^2/c]": force.decomposition["residual_part"],
        "error_estimate [hbar*omega0^2/c]": force.error_estimate,
    }


def _eval_cp_transient(point):
    spec, units = _atom_of(point), _units_of(point)
    scen = cp.WallScenario(R=point["R"], V=point["V"], t_elapsed=point["t_elapsed"])
    res = cp.transient_force(spec, scen, units, k_uv=point["k_uv"])
    return {
        "R_in_c_over_omega0 [c/omega0]": point["R"] * spec.omega0 / units.c,
        "t_elapsed [1/omega0]": point["t_elapsed"],
        "V [c]": point["V"] / units.c,
        "force_z [hbar*omega0^2/c]": res.force_z,
        "steady_part [hbar*omega0^2/c]": res.decomposition["steady_part"],
        "transient_part [hbar*omega0^2/c]": res.decomposition["transient_part"],
        "error_estimate [hbar*omega0^2/c]": res.error_estimate,
        "flags [-]": ";".join(res.flags),
    }


def _eval_unruh_kernels(point):
    spec = dk.KernelSpec(AcceleratedTrajectory(alpha=point["alpha"]),
                         epsilon=point["epsilon"])
    dtau = point["dtau"]
    fixed_n = dk.noise_kernel(spec, 0.5 * dtau, -0.5 * dtau)
    fixed_d = dk.dissipation_kernel(spec, 0.5 * dtau, -0.5 * dtau)
    ext = dk.extrapolated_kernels(spec, 0.5 * dtau, -0.5 * dtau)
    return {
        "alpha [omega0]": point["alpha"],
        "dtau [1/omega0]": dtau,
        "epsilon [1/omega0]": point["epsilon"],
        "noise [omega0^2]": fixed_n,
        "dissipation [omega0^2]": fixed_d,
        "noise_extrapolated [omega0^2]": ext.noise,
        "dissipation_extrapolated [omega0^2]": ext.dissipation,
        "extrapolated [bool]": 1,
    }


def _eval_cavity_rates(point):
    spec = cavity.CavitySpec(
        nu=point["nu"], omega=point["omega"], alpha=point["alpha"],
        lambda_coupling=point["lambda"], T_transit=point["T"],
        injection_rate=point["r"], propagation=point["propagation"])
    res = cavity.rates(spec)
    ratio = res.R2 / res.R1 if res.R1 > 0.0 else math.nan
    return {
        "nu [omega0]": point["nu"],
        "omega [omega0]": point["omega"],
        "alpha [omega0]": point["alpha"],
        "lambda [omega0]": point["lambda"],
        "T [1/omega0]": point["T"],
        "r [omega0]": point["r"],
        "I1_re [1/omega0]": res.I1.real,
        "I1_im [1/omega0]": res.I1.imag,
        "I2_re [1/omega0]": res.I2.real,
        "I2_im [1/omega0]": res.I2.imag,
        "R1 [omega0]": res.R1,
        "R2 [omega0]": res.R2,
        "ratio_R2_R1 [-]": ratio,
        "amplitude_error_I1 [1/omega0]": res.diagnostics["amplitude_error_I1"],
        "amplitude_error_I2 [1/omega0]": res.diagnostics["amplitude_error_I2"],
        "flags [-]": ";".join(res.flags),
    }


_EVALUATORS = {
    "cp-stationary": _eval_cp_stationary,
    "cp-moving": _eval_cp_moving,
    "cp-transient": _eval_cp_transient,
    "unruh-kernels": _eval_unruh_kernels,
    "cavity-rates": _eval_cavity_rates,
}


def _evaluate_point(scenario: str, point: dict) -> dict:
    try:
        record = _EVALUATORS[scenario](point)
        record.setdefault("flags [-]", "")
        record["error [-]"] = ""
        return record
    except Exception as exc:  # recorded per point, not fatal
        return {"error [-]": f"{type(exc).__name__}: {exc}",
                "flags [-]": "error"}


def _master_records(point):
    """cavity-master emits a time series plus the closed-form steady state."""
    rates = (point["R1"], point["R2"])
    nu = point["nu"]
    n_max = int(point["N_max"])
    t_final = point["t_final"]
    n_rows = max(2, int(point["rows"]))
    q = point["R2"] / point["R1"] if point["R1"] > 0 else math.nan
    t_c = me.cavity_temperature(rates, nu) if 0.0 <= q < 1.0 else math.nan
    dist = me.PhotonDistribution.vacuum(n_max)
    records = []
    times = np.linspace(0.0, t_final, n_rows)
    previous_t = 0.0
    for t in times:
        if t > previous_t:
            dist = me.evolve(dist, rates, t - previous_t)
            previous_t = t
        record = {
            "t [1/omega0]": float(t),
            "nbar [-]": dist.mean_occupation,
            "trace [-]": dist.trace,
            "q_R2_over_R1 [-]": q,
            "T_c [hbar*omega0/kB]": t_c,
            "flags [-]": "",
            "error [-]": "",
        }
        for n in range(min(10, n_max + 1)):
            record[f"p_{n} [-]"] = float(dist.p[n])
        records.append(record)
    return records


def emit_csv(records, path: str | None, no_timestamp: bool = False,
             extra_comments: tuple[str, ...] = ()) -> str:
    """Serialize records (list of dicts sharing a column set) as CSV text and
    write it to path when given.

    Full repr precision keeps parse(emit(x)) == x for every finite double,
    subnormals included; output bytes depend only on the records except for
    the timestamp comment, which --no-timestamp suppresses.
    """
    columns: list[str] = []
    for rec in records:
        for key in rec:
            if key not in columns:
                columns.append(key)
    lines = []
    if not no_timestamp:
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
        lines.append(f"# generated {stamp}")
    lines.extend(f"# {comment}" for comment in extra_comments)
    lines.append(",".join(columns))

    def fmt(value):
        if value is None:
            return ""
        if isinstance(value, (float, np.floating)):
            return repr(float(value))  # shortest round-trip decimal
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        return str(value)

    for rec in records:
        lines.append(",".join(fmt(rec.get(col)) for col in columns))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def _render_plot(scenario: str, records, path: str):
    """One figure per scenario, rendered to file next to the table."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in records if not r.get("error [-]")]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if scenario in ("cp-stationary", "cp-moving"):
        x = [r["R_in_c_over_omega0 [c/omega0]"] for r in rows]
        y = [abs(r["potential [hbar*omega0]"]) for r in rows]
        ax.loglog(x, y, "o-", label="|U|")
        if scenario == "cp-stationary" and rows:
            ax.loglog(x, [abs(r["asymptote_near [hbar*omega0]"]) for r in rows],
                      "--", label="electrostatic")
            ax.loglog(x, [abs(r["asymptote_far [hbar*omega0]"]) for r in rows],
                      ":", label="retarded")
        ax.set_xlabel(r"$R\,\omega_0/c$")
        ax.set_ylabel(r"$|U|\ [\hbar\omega_0]$")
    elif scenario == "cp-transient":
        x = [r["t_elapsed [1/omega0]"] for r in rows]
        ax.plot(x, [r["force_z [hbar*omega0^2/c]"] for r in rows], "o-", label="force")
        ax.plot(x, [r["steady_part [hbar*omega0^2/c]"] for r in rows], "--",
                label="steady")
        ax.set_xlabel(r"$t\,\omega_0$")
        ax.set_ylabel(r"$F_z\ [\hbar\omega_0^2/c]$")
    elif scenario == "unruh-kernels":
        x = [r["dtau [1/omega0]"] for r in rows]
        ax.plot(x, [r["noise_extrapolated [omega0^2]"] for r in rows], "o-",
                label="noise")
        ax.plot(x, [r["dissipation_extrapolated [omega0^2]"] for r in rows], "s-",
                label="dissipation")
        ax.set_xlabel(r"$\Delta\tau$")
        ax.set_ylabel("kernel")
    elif scenario == "cavity-rates":
        x = list(range(len(rows)))
        ax.semilogy(x, [r["ratio_R2_R1 [-]"] for r in rows], "o-", label="R2/R1")
        ax.set_xlabel("grid index")
        ax.set_ylabel(r"$R_2/R_1$")
    elif scenario == "cavity-master":
        x = [r["t [1/omega0]"] for r in rows]
        ax.plot(x, [r["nbar [-]"] for r in rows], "o-", label=r"$\bar n$")
        ax.set_xlabel("t")
        ax.set_ylabel(r"$\bar n$")
    else:  # acceptance
        ax.bar([r["criterion [-]"] for r in rows],
               [int(r["passed [-]"]) for r in rows])
        ax.set_xlabel("criterion")
        ax.set_ylabel("passed")
    if ax.get_legend_handles_labels()[1]:
        ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vacuum-kinetics",
        description="Atom-wall retardation forces and accelerated-detector "
                    "kernels: batch sweeps, tables, figures, acceptance suite.")
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", help="key = value file; flags override it")
    parser.add_argument("--param", action="append", default=[],
                        metavar="NAME=VALUE|NAME=START:STOP:COUNT[:log]",
                        help="set or sweep a parameter (repeatable)")
    parser.add_argument("--out", help="output table path (default <scenario>.csv)")
    parser.add_argument("--format", dest="fmt", default="csv", help="output format")
    parser.add_argument("--jobs", type=int, default=1,
                        help="concurrent grid evaluations")
    parser.add_argument("--allow-flagged", action="store_true",
                        help="exit 0 even when points carry divergence flags")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="suppress the timestamp comment for byte-stable output")
    parser.add_argument("--plot", nargs="?", const="", default=None, metavar="FILE",
                        help="render a figure beside the table (optional path)")
    parser.add_argument("--criteria", default=None,
                        help="comma-separated acceptance criteria subset, e.g. 1,9,10")
    return parser


def _config_from_args(args) -> RunConfig:
    params: dict[str, list] = {}
    if args.config:
        params.update(read_config_file(args.config))
    for item in args.param:
        if "=" not in item:
            raise ConfigError(f"--param needs name=value, got {item!r}")
        name, _, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not name or not value:
            raise ConfigError(f"--param needs name=value, got {item!r}")
        params[name] = parse_value_spec(name, value)
    criteria = None
    if args.criteria is not None:
        try:
            criteria = [int(tok) for tok in args.criteria.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"--criteria must be integers, got {args.criteria!r}")
        if any(not 1 <= n <= len(acceptance.ALL_CRITERIA) for n in criteria):
            raise ConfigError("--criteria entries must lie in 1..11")
    return RunConfig(scenario=args.scenario, params=params, out=args.out,
                     fmt=args.fmt, jobs=args.jobs, allow_flagged=args.allow_flagged,
                     no_timestamp=args.no_timestamp, plot=args.plot,
                     criteria=criteria)


def run(config: RunConfig) -> int:
    """Execute a run configuration; returns the process exit code."""
    out_path = config.out or f"{config.scenario}.csv"
    extra_comments: tuple[str, ...] = ()

    if config.scenario == "acceptance":
        results = acceptance.run_all(numbers=config.criteria)
        records = [{
            "criterion [-]": r.number,
            "name [-]": r.name,
            "passed [-]": int(r.passed),
            "details [-]": r.details.replace(",", ";"),
            "elapsed [s]": r.elapsed,
            "budget [s]": r.budget,
        } for r in results]
        emit_csv(records, out_path, config.no_timestamp)
        if config.plot is not None:
            plot_path = config.plot or (out_path.rsplit(".", 1)[0] + ".png")
            _render_plot("acceptance", records, plot_path)
        return 0 if all(r.passed for r in results) else 3

    if config.scenario == "cavity-master":
        points = list(_grid_points(config))
        records = []
        for point in points:
            try:
                records.extend(_master_records(point))
            except Exception as exc:
                records.append({"error [-]": f"{type(exc).__name__}: {exc}",
                                "flags [-]": "error"})
        from .master_equation import cavity_temperature_printed_form
        point = points[0]
        try:
            printed = cavity_temperature_printed_form((point["R1"], point["R2"]),
                                                      point["nu"])
            extra_comments = (
                f"printed-form temperature (hbar*nu/kB)*ln(R1/R2) = {printed!r}; "
                "reported for reference, the detailed-balance form is used",)
        except Exception:
            pass
    else:
        points = list(_grid_points(config))
        if config.jobs > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
                futures = [pool.submit(_evaluate_point, config.scenario, p)
                           for p in points]
                records = [f.result() for f in futures]  # grid order, not completion
        else:
            records = [_evaluate_point(config.scenario, p) for p in points]

    emit_csv(records, out_path, config.no_timestamp, extra_comments)
    if config.plot is not None:
        plot_path = config.plot or (out_path.rsplit(".", 1)[0] + ".png")
        _render_plot(config.scenario, records, plot_path)

    watch = ("error", "divergence", "cutoff_sensitive")
    flagged = [r for r in records
               if r.get("error [-]")
               or any(w in r.get("flags [-]", "") for w in watch)]
    if flagged and not config.allow_flagged:
        print(f"{len(flagged)} grid point(s) flagged; rerun with --allow-flagged "
              "to accept", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
