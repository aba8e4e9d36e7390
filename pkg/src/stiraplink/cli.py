"""Command-line front end: configuration, figure runners, CSV/JSON output.

All outputs are deterministic and reproducible byte-for-byte for a given
configuration: numbers are serialised in scientific notation with 17
significant digits (lossless float64 round trip), CSVs use comma
separators, a header row, LF line endings and UTF-8, and files are
written only after all computation has finished.

Exit codes: 0 success, 1 configuration/validation error, 2 infeasible
pulse design, 3 numerical integration failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .core import (
    DEFAULT_GRID_POINTS,
    PhysicalParams,
    TimeGrid,
    default_grid,
)
from .atom_dynamics import IntegrationFailureError
from .pulse_shaping import (
    InfeasibleTargetError,
    adiabaticity_check,
    closed_form_c,
    gaussian_target,
    invert_envelope_to_theta,
    theta_to_rabi,
)
from .transfer_protocol import (
    ChannelModel,
    QubitState,
    h_population_scan,
    loglog_slope,
    run_state_transfer_polarization,
    run_state_transfer_simple,
    simulate_emission,
    sweep_omega,
)

__all__ = ["ExperimentConfig", "ConfigError", "main", "entry"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Invalid or unknown configuration content."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: physical parameters, channel, schedule and sweep options.

    Omega sweep lists are dimensionless multiples of gamma.  The random
    seed is reserved and unused; every run is deterministic.
    """

    params: PhysicalParams
    channel: ChannelModel
    target: str = "gaussian"
    n_points: int = DEFAULT_GRID_POINTS
    denominator_floor: float = 1e-6
    fig3_omegas: tuple[float, ...] = (2.0, 5.0, 10.0)
    fig4_omegas: tuple[float, ...] = (2.0, 4.0, 6.0, 8.0, 10.0, 20.0, 40.0)
    hscan_omegas: tuple[float, ...] = (5.0, 10.0, 20.0, 40.0)
    output_dir: str = "out"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.target != "gaussian":
            raise ConfigError(f"unknown target type {self.target!r}")
        if self.n_points < 2:
            raise ConfigError("n_points must be at least 2")
        if not 0.0 < self.denominator_floor < 1.0:
            raise ConfigError("denominator_floor must be in (0, 1)")

    @classmethod
    def default(cls) -> "ExperimentConfig":
        return cls(params=PhysicalParams.reference(), channel=ChannelModel(alpha=1.0 + 0.0j))

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("configuration root must be an object")
        known = {"params", "channel", "schedule", "sweeps", "output_dir", "seed"}
        _reject_unknown(raw, known, "top level")

        base = cls.default()
        params = _parse_params(raw.get("params", {}), base.params)
        channel = _parse_channel(raw.get("channel", {}), base.channel)

        sched = raw.get("schedule", {})
        _reject_unknown(sched, {"target", "n_points", "denominator_floor"}, "schedule")
        sweeps = raw.get("sweeps", {})
        _reject_unknown(sweeps, {"fig3_omegas", "fig4_omegas", "hscan_omegas"}, "sweeps")

        try:
            return cls(
                params=params,
                channel=channel,
                target=str(sched.get("target", base.target)),
                n_points=int(sched.get("n_points", base.n_points)),
                denominator_floor=float(
                    sched.get("denominator_floor", base.denominator_floor)
                ),
                fig3_omegas=_parse_omegas(sweeps.get("fig3_omegas", base.fig3_omegas)),
                fig4_omegas=_parse_omegas(sweeps.get("fig4_omegas", base.fig4_omegas)),
                hscan_omegas=_parse_omegas(sweeps.get("hscan_omegas", base.hscan_omegas)),
                output_dir=str(raw.get("output_dir", base.output_dir)),
                seed=int(raw.get("seed", base.seed)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc


def _reject_unknown(section: dict, known: set[str], where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(section) - known
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _parse_params(section: dict, base: PhysicalParams) -> PhysicalParams:
    fields = {f.name for f in dataclasses.fields(PhysicalParams)}
    _reject_unknown(section, fields, "params")
    values = {f: float(section[f]) for f in section}
    try:
        return replace(base, **values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_channel(section: dict, base: ChannelModel) -> ChannelModel:
    _reject_unknown(section, {"alpha_re", "alpha_im", "tau"}, "channel")
    alpha = complex(
        float(section.get("alpha_re", base.alpha.real)),
        float(section.get("alpha_im", base.alpha.imag)),
    )
    try:
        return ChannelModel(alpha=alpha, tau=float(section.get("tau", base.tau)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_omegas(value) -> tuple[float, ...]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        omegas = tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad omega list {value!r}") from exc
    if any(om < 0 for om in omegas):
        raise ConfigError("omega values must be non-negative")
    return omegas


# ---------------------------------------------------------------------------
# Serialisation helpers
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".16e")


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def _outdir(config: ExperimentConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _design(config: ExperimentConfig, params: PhysicalParams | None = None):
    p = params if params is not None else config.params
    grid = default_grid(p, config.n_points)
    target = gaussian_target(p, grid)
    schedule = invert_envelope_to_theta(
        target, p.gamma, p.omega, eps_den=config.denominator_floor
    )
    return grid, target, schedule


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_design(config: ExperimentConfig) -> int:
    """Write the designed schedule, the target envelope and the adiabaticity report."""
    grid, target, schedule = _design(config)
    om1, om2 = theta_to_rabi(schedule)
    report = adiabaticity_check(schedule, config.params)
    out = _outdir(config)
    _write_csv(
        out / "schedule.csv",
        ["t", "theta", "omega1", "omega2"],
        zip(grid.samples, schedule.theta, om1, om2),
    )
    _write_csv(
        out / "target_envelope.csv",
        ["t", "re_f", "im_f"],
        zip(grid.samples, target.values.real, target.values.imag),
    )
    _write_json(out / "adiabaticity.json", dataclasses.asdict(report))
    return EXIT_OK


def _population_rows(grid: TimeGrid, populations: np.ndarray, envelope: np.ndarray):
    return zip(
        grid.samples,
        populations[:, 0],
        populations[:, 1],
        populations[:, 2],
        populations[:, 3],
        envelope.real,
        envelope.imag,
    )


_FIG3_HEADER = ["t", "P_g1", "P_g2_coherent", "P_h", "P_r", "Re_f", "Im_f"]


def cmd_fig3(config: ExperimentConfig, omegas: tuple[float, ...] | None = None) -> int:
    """Excited-state population traces per Rabi amplitude plus the ideal trace."""
    oms = omegas if omegas is not None else config.fig3_omegas
    if not oms:
        raise ConfigError("fig3 needs a non-empty omega list")
    gamma = config.params.gamma
    grid, _, schedule = _design(config)

    # Ideal (adiabatic) trace: same designed angle for every omega.
    c_ideal = closed_form_c(schedule, gamma)
    sin_t = np.sin(schedule.theta)
    cos_t = np.cos(schedule.theta)
    f_ideal = -c_ideal * sin_t
    pop_ideal = np.zeros((grid.n_points, 4))
    pop_ideal[:, 0] = np.abs(c_ideal * cos_t) ** 2
    pop_ideal[:, 3] = np.abs(f_ideal) ** 2

    traces = {}
    for om in oms:
        p_om = replace(config.params, omega=om * gamma)
        _, _, sched_om = _design(config, p_om)
        traj, envelope, _ = simulate_emission(p_om, sched_om)
        traces[om] = (traj.populations, envelope.values)

    out = _outdir(config)
    _write_csv(
        out / "fig3_ideal.csv", _FIG3_HEADER, _population_rows(grid, pop_ideal, f_ideal)
    )
    linf = {}
    for om, (pops, env) in traces.items():
        _write_csv(
            out / f"fig3_omega_{om:g}.csv",
            _FIG3_HEADER,
            _population_rows(grid, pops, env),
        )
        linf[f"{om:g}"] = float(np.max(np.abs(pops[:, 3] - pop_ideal[:, 3])))
    _write_json(
        out / "fig3_summary.json",
        {
            "gamma": gamma,
            "omegas_over_gamma": list(oms),
            "l_inf_to_ideal": linf,
            "ideal_peak": float(np.max(pop_ideal[:, 3])),
        },
    )
    return EXIT_OK


def cmd_fig4(
    config: ExperimentConfig,
    omegas: tuple[float, ...] | None = None,
    alpha: complex | None = None,
    receiver_shift: float = 0.0,
) -> int:
    """Absorption success probability against the Rabi amplitude."""
    oms = omegas if omegas is not None else config.fig4_omegas
    if not oms:
        raise ConfigError("fig4 needs a non-empty omega list")
    channel = config.channel if alpha is None else replace(config.channel, alpha=alpha)
    gamma = config.params.gamma
    curve = sweep_omega(
        [om * gamma for om in oms],
        config.params,
        channel,
        config.n_points,
        receiver_shift=receiver_shift,
    )
    rows = [(om, p) for om, (_, p) in zip(oms, curve)]
    out = _outdir(config)
    _write_csv(out / "fig4_success.csv", ["omega_over_gamma", "success_probability"], rows)
    values = [p for _, p in rows]
    _write_json(
        out / "fig4_summary.json",
        {
            "omegas_over_gamma": list(oms),
            "success_probabilities": values,
            "strictly_increasing": bool(
                all(b > a for a, b in zip(values, values[1:]))
            ),
        },
    )
    return EXIT_OK


def cmd_transfer(
    config: ExperimentConfig,
    protocol: str,
    qubit_a: complex,
    qubit_b: complex,
    alpha: complex | None = None,
    tau: float | None = None,
) -> int:
    """Run one state-transfer protocol and write the outcome as JSON."""
    channel = config.channel
    if alpha is not None:
        channel = replace(channel, alpha=alpha)
    if tau is not None:
        channel = replace(channel, tau=tau)
    qubit = QubitState(a=qubit_a, b=qubit_b)
    if protocol == "simple":
        outcome = run_state_transfer_simple(qubit, config.params, channel, config.n_points)
    elif protocol == "polarization":
        outcome = run_state_transfer_polarization(
            qubit, config.params, channel, config.n_points
        )
    else:
        raise ConfigError(f"unknown protocol {protocol!r}")
    payload = {
        "protocol": protocol,
        "success_probability": outcome.success_probability,
        "fidelity": outcome.fidelity,
        "branch_probabilities": outcome.branch_probabilities,
        "heralded": outcome.heralded,
    }
    out = _outdir(config)
    _write_json(out / f"transfer_{protocol}.json", payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_hscan(config: ExperimentConfig, omegas: tuple[float, ...] | None = None) -> int:
    """Maximum ancillary-level population per Rabi amplitude."""
    oms = omegas if omegas is not None else config.hscan_omegas
    if not oms:
        raise ConfigError("hscan needs a non-empty omega list")
    gamma = config.params.gamma
    scan = h_population_scan([om * gamma for om in oms], config.params, config.n_points)
    rows = [(om, value) for om, (_, value) in zip(oms, scan)]
    out = _outdir(config)
    _write_csv(out / "hscan.csv", ["omega_over_gamma", "max_h_population"], rows)
    summary = {
        "omegas_over_gamma": list(oms),
        "max_h_populations": [v for _, v in rows],
    }
    if len(rows) >= 2:
        summary["loglog_slope"] = loglog_slope([(om * gamma, v) for om, v in rows])
    _write_json(out / "hscan_summary.json", summary)
    return EXIT_OK


def cmd_validate(config: ExperimentConfig, threshold: float = 0.1) -> int:
    """Write the adiabaticity report for the configured design."""
    _, _, schedule = _design(config)
    report = adiabaticity_check(schedule, config.params, threshold)
    out = _outdir(config)
    _write_json(out / "adiabaticity.json", dataclasses.asdict(report))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stiraplink",
        description="Design STIRAP pulse schedules and simulate photon-mediated state transfer.",
    )
    parser.add_argument("--config", type=Path, default=None, help="JSON configuration file")
    parser.add_argument("--out", type=Path, default=None, help="output directory override")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("design", help="write the pulse schedule and target envelope")
    p3 = sub.add_parser("fig3", help="population traces for several Rabi amplitudes")
    p3.add_argument("--omegas", default=None, help="comma-separated, in units of gamma")
    p4 = sub.add_parser("fig4", help="absorption success against Rabi amplitude")
    p4.add_argument("--omegas", default=None, help="comma-separated, in units of gamma")
    p4.add_argument("--alpha", default=None, help="channel amplitude override, e.g. '0.5+0.5j'")
    p4.add_argument(
        "--receiver-shift", type=float, default=0.0,
        help="mistiming of the receiver pulses for robustness scans [time]",
    )
    pt = sub.add_parser("transfer", help="run one state-transfer protocol")
    pt.add_argument("--protocol", choices=("simple", "polarization"), default="simple")
    pt.add_argument("--qubit-a", default="1", help="amplitude on the first logical state")
    pt.add_argument("--qubit-b", default="0", help="amplitude on the second logical state")
    pt.add_argument("--alpha", default=None, help="channel amplitude override")
    pt.add_argument("--tau", type=float, default=None, help="propagation delay override")
    ph = sub.add_parser("hscan", help="ancillary-population scan over Rabi amplitudes")
    ph.add_argument("--omegas", default=None, help="comma-separated, in units of gamma")
    pv = sub.add_parser("validate", help="adiabaticity report only")
    pv.add_argument("--threshold", type=float, default=0.1)
    return parser


def _parse_complex(text: str, what: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} {text!r} as a complex number") from exc


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    try:
        config = (
            ExperimentConfig.from_file(args.config)
            if args.config is not None
            else ExperimentConfig.default()
        )
        if args.out is not None:
            config = replace(config, output_dir=str(args.out))

        if args.command == "design":
            return cmd_design(config)
        if args.command == "fig3":
            omegas = _parse_omegas(args.omegas) if args.omegas is not None else None
            return cmd_fig3(config, omegas)
        if args.command == "fig4":
            omegas = _parse_omegas(args.omegas) if args.omegas is not None else None
            alpha = _parse_complex(args.alpha, "--alpha") if args.alpha is not None else None
            return cmd_fig4(config, omegas, alpha, args.receiver_shift)
        if args.command == "transfer":
            alpha = _parse_complex(args.alpha, "--alpha") if args.alpha is not None else None
            return cmd_transfer(
                config,
                args.protocol,
                _parse_complex(args.qubit_a, "--qubit-a"),
                _parse_complex(args.qubit_b, "--qubit-b"),
                alpha,
                args.tau,
            )
        if args.command == "hscan":
            omegas = _parse_omegas(args.omegas) if args.omegas is not None else None
            return cmd_hscan(config, omegas)
        if args.command == "validate":
            return cmd_validate(config, args.threshold)
        raise ConfigError(f"unknown command {args.command!r}")
    except InfeasibleTargetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except IntegrationFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
