"""Batch command-line interface.

Exit codes: 0 ran and canonical checks passed, 1 usage or config error,
2 numerical failure.  ``evolve`` reports missed physics tolerances as FAIL
lines but still exits 0.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from foldrel import clifford, dimensions, dispersion, evolve, potential
from foldrel.config import ConfigError, load_config, merge, resolve_params, validate
from foldrel.exceptions import FoldrelError, InconsistentSystem
from foldrel.report import Report, format_csv

DEFAULT_FORMAT = {"dispersion": "csv"}


class NumericalFailure(Exception):
    pass


def _fmt_frac(q: Fraction) -> str:
    return str(q)


def cmd_exponents(cfg: dict, params) -> Report:
    sec = cfg["exponents"]
    try:
        basis = [dimensions.Quantity(n, dimensions.KNOWN_QUANTITIES[n]) for n in sec["basis"]]
    except KeyError as exc:
        known = ", ".join(sorted(dimensions.KNOWN_QUANTITIES))
        raise ConfigError(f"unknown quantity {exc.args[0]!r}; known: {known}") from None
    try:
        target = dimensions.parse_dim(sec["target"])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad target dimension: {exc}") from None

    report = Report("exponents", {"basis": sec["basis"], "target": str(target), "alpha4": sec["alpha4"]})
    sol = dimensions.solve_exponent_system(basis, target)
    report.summary.append(f"target {target}; free parameters: {', '.join(sol.free_names) or 'none'}")
    report.summary.extend(sol.describe())
    report.columns = ["quantity", "particular"] + [name for name in sol.free_names]
    for i, name in enumerate(sol.basis_names):
        row = {"quantity": name, "particular": _fmt_frac(sol.particular[i])}
        for fname, direction in sol.free_directions:
            row[fname] = _fmt_frac(direction[i])
        report.rows.append(row)

    # Every family member must reproduce the target; spot-check two members.
    for lam in (0, 1):
        values = {n: lam for n in sol.free_names}
        got = dimensions.product_dim(basis, sol.evaluate(values))
        report.check(f"family member at {lam} reproduces target", got == target, str(got))

    if sec["alpha4"] is not None:
        try:
            a4 = Fraction(str(sec["alpha4"]))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"alpha4 must be a rational like 2/3, got {sec['alpha4']!r}") from None
        a1, a2, a3 = dimensions.fold_variable_exponents(a4)
        a0 = dimensions.control_parameter_exponent(dimensions.FOLD_VARIABLE_DIM)
        report.summary.append(f"alpha1, alpha2, alpha3 = {a1}, {a2}, {a3}")
        report.summary.append(f"alpha0 = {a0}")
        report.inputs["alpha4"] = str(a4)
        if [q.name for q in basis] == [q.name for q in dimensions.standard_basis()] \
                and target == dimensions.FOLD_VARIABLE_DIM:
            report.check("closed form agrees with solver", sol.evaluate({"alpha4": a4}) == (a1, a2, a3, a4))
    return report


def _exact_beta(E: float, params) -> Fraction | None:
    beta = potential.beta_kg(E, params, exact=True)
    return beta if beta.denominator < 10**6 else None


def cmd_beta(cfg: dict, params) -> Report:
    E = float(cfg["beta"]["E"])
    if not (math.isfinite(E) and E > 0):
        raise ConfigError(f"E must be positive, got {E!r}")
    beta = potential.beta_kg(E, params)
    residual = potential.bracket_residual(beta, E, params)
    report = Report("beta", {"E": E, "params": vars_params(params)})
    report.columns = ["E", "beta", "bracket_residual", "relative_residual"]
    report.rows.append({"E": E, "beta": beta, "bracket_residual": residual, "relative_residual": abs(residual) / E**2})
    exact = _exact_beta(E, params)
    report.summary.append(f"beta = {beta!r}" + (f" (exactly {exact})" if exact is not None else ""))
    report.check("bracket residual vanishes", abs(residual) / E**2 <= 1e-12, f"{abs(residual) / E**2:.3e} <= 1e-12")
    return report


def _rel(a: float, b: float, scale: float) -> float:
    return abs(a - b) / scale if scale else abs(a - b)


def cmd_potential(cfg: dict, params) -> Report:
    sec = cfg["potential"]
    spec = potential.RelativisticPotentialSpec(E=float(sec["E"]), beta=float(sec["beta"]), B=float(sec["B"]),
                                               params=params)
    omega = spec.E / params.hbar
    report = Report("potential", {**sec, "params": vars_params(params), "seed": cfg["seed"]})
    report.columns = ["r", "V_general", "V_specialized", "f_r", "V_revised", "beta_kg"]
    bk = potential.beta_kg(spec.E, params)
    for r in sec["r"]:
        r = float(r)
        report.rows.append({
            "r": r,
            "V_general": potential.potential_general(r, 2 / 3, spec, omega),
            "V_specialized": potential.potential_specialized(r, spec),
            "f_r": potential.action_field(r, spec),
            "V_revised": potential.revised_potential(r, spec),
            "beta_kg": bk,
        })
    worst = specialization_sweep(params, sec["draws"], cfg["seed"])
    report.check("alpha4=2/3 specialisation identity", worst <= 1e-13, f"max rel err {worst:.3e} <= 1e-13")
    worst = revised_sweep(params, sec["draws"], cfg["seed"])
    report.check("revised = beta_kg E^2/mc^2 + f(r)", worst <= 1e-13, f"max rel err {worst:.3e} <= 1e-13")
    return report


def specialization_sweep(params, draws: int, seed: int) -> float:
    """Worst relative gap between the general (alpha4 = 2/3) and specialised forms."""
    rng = np.random.default_rng(seed)
    mc2 = params.m * params.c**2
    length = params.hbar / (params.m * params.c)
    worst = 0.0
    for _ in range(draws):
        r = length * 10 ** rng.uniform(-2, 2)
        E = mc2 * 10 ** rng.uniform(-3, 3)
        spec = potential.RelativisticPotentialSpec(E=E, beta=rng.uniform(0.01, 2), B=rng.uniform(0.01, 2),
                                                   params=params)
        a = potential.potential_general(r, 2 / 3, spec, E / params.hbar)
        b = potential.potential_specialized(r, spec)
        worst = max(worst, _rel(a, b, abs(b)))
    return worst


def revised_sweep(params, draws: int, seed: int) -> float:
    """Worst gap between the revised form and the beta_kg composition.

    Scaled by the summed magnitude of the contributions: the constant term
    crosses zero at E = (1 + sqrt 2) mc^2, where plain relative error is
    meaningless.
    """
    rng = np.random.default_rng(seed + 1)
    mc2 = params.m * params.c**2
    length = params.hbar / (params.m * params.c)
    worst = 0.0
    for _ in range(draws):
        r = length * 10 ** rng.uniform(-2, 2)
        E = mc2 * 10 ** rng.uniform(-3, 3)
        spec = potential.RelativisticPotentialSpec(E=E, B=rng.uniform(-2, 2), params=params)
        composed_const = potential.beta_kg(E, params) * E**2 / mc2
        f = potential.action_field(r, spec)
        scale = 0.5 * (mc2 + 2 * E + E**2 / mc2) + abs(f)
        worst = max(worst, _rel(potential.revised_potential(r, spec), composed_const + f, scale))
    return worst


def cmd_clifford(cfg: dict, params) -> Report:
    ds = clifford.dirac_set()
    rep = clifford.check_clifford(ds)
    report = Report("clifford", {"params": vars_params(params), "seed": cfg["seed"],
                                 "k_samples": cfg["clifford"]["k_samples"]})
    report.columns = ["condition", "max_deviation"]
    for name, dev in rep.max_deviation.items():
        report.rows.append({"condition": name, "max_deviation": dev})
    report.check("anticommutators {S_i,S_j} = 2 delta_ij I", rep.max_deviation["anticommute_spatial"] == 0)
    report.check("anticommutators {S_i,S_0} = 0", rep.max_deviation["anticommute_mixed"] == 0)
    report.check("squares S_mu^2 = I", rep.max_deviation["squares_identity"] == 0)
    report.check("S_mu Hermitian", rep.max_deviation["hermitian"] == 0)

    worst = square_identity_sweep(params, cfg["clifford"]["k_samples"], cfg["seed"])
    report.rows.append({"condition": "hamiltonian_square_relative", "max_deviation": worst})
    report.check("H(k)^2 = (hbar^2 c^2 k^2 + m^2 c^4) I", worst <= 1e-12, f"{worst:.3e} <= 1e-12")

    sigma_rep, literal_rep = clifford.spin_algebra_reports()
    report.rows.append({"condition": "su2_sigma", "max_deviation": max(sigma_rep.deviations.values())})
    report.rows.append({"condition": "su2_literal_S", "max_deviation": max(literal_rep.deviations.values())})
    report.check("[J_i,J_j] = i hbar eps_ijk J_k for J = (hbar/2) Sigma", sigma_rep.passed)
    comm = literal_rep.commutators[(1, 2)]
    report.check(
        "[J_i,J_j] = i hbar eps_ijk J_k for J = (hbar/2) S",
        literal_rep.passed,
        "[S_1,S_2] = " + _matrix_text(comm) + " = 2i Sigma_3, not 2i S_3; "
        "so [J_1,J_2] = i hbar (hbar/2) Sigma_3 != i hbar J_3",
        canonical=False,
    )
    return report


def square_identity_sweep(params, samples: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    kc = params.m * params.c / params.hbar
    worst = 0.0
    for _ in range(samples):
        k = rng.normal(size=3) * kc * 10 ** rng.uniform(-3, 3)
        worst = max(worst, clifford.hamiltonian_square_check(k, params))
    return worst


def _matrix_text(m: clifford.GaussianMatrix) -> str:
    def entry(a, b):
        if b == 0:
            return str(a)
        im = {1: "i", -1: "-i"}.get(b, f"{b}i")
        return im if a == 0 else f"{a}{'+' if b > 0 else ''}{im}"

    return "[" + "; ".join(" ".join(entry(int(a), int(b)) for a, b in zip(ra, ia))
                           for ra, ia in zip(m.re, m.im)) + "]"


def k_sweep(sec: dict) -> np.ndarray:
    kmin, kmax, count = float(sec["k_min"]), float(sec["k_max"]), int(sec["count"])
    if count < 1 or kmax < kmin or kmin < 0:
        raise ConfigError("dispersion sweep needs 0 <= k_min <= k_max and count >= 1")
    if sec["spacing"] == "log":
        if kmin <= 0:
            raise ConfigError("log spacing needs k_min > 0")
        return np.geomspace(kmin, kmax, count)
    return np.linspace(kmin, kmax, count)


def cmd_dispersion(cfg: dict, params) -> Report:
    sec = cfg["dispersion"]
    ks = k_sweep(sec)
    report = Report("dispersion", {**sec, "params": vars_params(params)})
    report.columns = ["k", "E_kg", "E_selfconsistent", "rel_gap",
                      "dirac_eig_1", "dirac_eig_2", "dirac_eig_3", "dirac_eig_4", "nonrel_gap_ratio"]
    mc2 = params.m * params.c**2
    worst_gap = worst_sum = 0.0
    for k in ks:
        k = float(k)
        e_kg = float(dispersion.kg_energy(k, params))
        try:
            e_sc = dispersion.self_consistent_energy(k, params).E
        except FoldrelError as exc:
            raise NumericalFailure(f"self-consistent solve failed at k={k!r}: {exc}") from exc
        eigs = dispersion.dirac_spectrum((k, 0.0, 0.0), params)
        gap = abs(e_sc - e_kg) / e_kg
        worst_gap = max(worst_gap, gap)
        worst_sum = max(worst_sum, abs(float(eigs.sum())) / mc2)
        report.rows.append({
            "k": k, "E_kg": e_kg, "E_selfconsistent": e_sc, "rel_gap": gap,
            **{f"dirac_eig_{i + 1}": float(e) for i, e in enumerate(eigs)},
            "nonrel_gap_ratio": dispersion.nonrel_limit_gap(k, params),
        })
    report.check("self-consistent energy matches Klein-Gordon", worst_gap <= 1e-10, f"{worst_gap:.3e} <= 1e-10")
    report.check("Dirac spectrum symmetric", worst_sum <= 1e-10, f"{worst_sum:.3e} mc^2 <= 1e-10 mc^2")
    return report


def cmd_evolve(cfg: dict, params):
    sec = cfg["evolve"]
    kind = sec["kind"]
    singular = sec["potential"] == "revised" and sec["B"] != 0
    try:
        grid = evolve.Grid1D.centered(int(sec["n_points"]), float(sec["dx"]), avoid_origin=singular)
        state = evolve.gaussian_packet(grid, float(sec["x_center"]), float(sec["k0"]), float(sec["sigma"]))
    except (evolve.UnresolvableWidth, evolve.AliasFrequency) as exc:
        raise NumericalFailure(str(exc)) from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if kind == "relativistic_free" and sec["potential"] != "none":
        raise ConfigError("relativistic_free propagation takes no potential")
    pot = None
    if sec["potential"] == "constant":
        pot = float(sec["constant"])
    elif sec["potential"] == "revised":
        pot = evolve.revised_spec_for_state(state, params, B=float(sec["B"]))
    try:
        spec = evolve.PropagatorSpec(kind, float(sec["dt"]), params, pot)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    try:
        final, traj = evolve.evolve(state, spec, int(sec["steps"]), int(sec["sample_every"]))
        velocity = evolve.group_velocity_estimate(traj.time_position(), period=grid.length, dt=spec.dt)
    except FoldrelError as exc:
        raise NumericalFailure(str(exc)) from exc

    k0 = float(sec["k0"])
    if kind == "relativistic_free":
        target = float(dispersion.group_velocity(k0, params))
    else:
        target = params.hbar * k0 / params.m
    drift = float(np.max(np.abs(traj.column("norm") - traj.column("norm")[0])))
    rel = abs(velocity - target) / abs(target) if target else abs(velocity)

    report = Report("evolve", {**sec, "params": vars_params(params)})
    report.columns = ["measured_group_velocity", "target_group_velocity", "relative_error", "norm_drift"]
    report.rows.append({"measured_group_velocity": velocity, "target_group_velocity": target,
                        "relative_error": rel, "norm_drift": drift})
    report.summary.append(f"group velocity {velocity!r} (target {target!r}, {velocity / params.c!r} c)")
    report.check("group velocity", rel <= sec["tolerance"], f"relative error {rel:.3e} <= {sec['tolerance']}")
    report.check("norm conserved", drift <= 1e-10, f"max drift {drift:.3e} <= 1e-10")
    if kind == "relativistic_free":
        report.check("group velocity below c", abs(velocity) < params.c)

    trajectory_csv = format_csv(list(evolve.Trajectory.COLUMNS), traj.rows, header_comment="foldrel-trajectory")
    if sec["trajectory"]:
        Path(sec["trajectory"]).write_text(trajectory_csv)
        report.inputs["trajectory"] = sec["trajectory"]
    return report, trajectory_csv


def vars_params(params) -> dict:
    return {"m": params.m, "c": params.c, "hbar": params.hbar}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration document")
    common.add_argument("--units", choices=("natural", "si"))
    common.add_argument("--m", type=float, help="rest mass")
    common.add_argument("--c", type=float, help="speed of light")
    common.add_argument("--hbar", type=float, help="reduced Planck constant")
    common.add_argument("--format", dest="output", choices=("text", "csv", "json"))
    common.add_argument("--json", dest="output", action="store_const", const="json", help="same as --format json")
    common.add_argument("--seed", type=int)
    common.add_argument("-o", "--out", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="foldrel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents", parents=[common], help="solve the dimensional exponent system")
    p.add_argument("--basis", help="comma-separated quantity names, e.g. m,hbar,c,omega")
    p.add_argument("--target", help="'dimensionless' or e.g. L=-2/3,T=0,M=0")
    p.add_argument("--alpha4", help="rational frequency exponent, e.g. 2/3")

    p = sub.add_parser("beta", parents=[common], help="beta making the plane wave self-consistent")
    p.add_argument("--E", type=float)

    p = sub.add_parser("potential", parents=[common], help="evaluate the relativistic potential forms")
    p.add_argument("--beta", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--E", type=float)
    p.add_argument("--r", help="comma-separated radii")
    p.add_argument("--draws", type=int)

    p = sub.add_parser("clifford", parents=[common], help="Dirac-matrix algebra checks")
    p.add_argument("--k-samples", dest="k_samples", type=int)

    p = sub.add_parser("dispersion", parents=[common], help="mode-energy sweep")
    p.add_argument("--k-min", dest="k_min", type=float)
    p.add_argument("--k-max", dest="k_max", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--spacing", choices=("linear", "log"))

    p = sub.add_parser("evolve", parents=[common], help="propagate a Gaussian packet")
    p.add_argument("--kind", choices=("schrodinger", "relativistic_free"))
    p.add_argument("--n-points", dest="n_points", type=int)
    p.add_argument("--dx", type=float)
    p.add_argument("--x-center", dest="x_center", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--sample-every", dest="sample_every", type=int)
    p.add_argument("--potential", choices=("none", "constant", "revised"))
    p.add_argument("--constant", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--trajectory", help="write the trajectory CSV here")
    return parser


SECTION_FLAGS = {
    "exponents": ("basis", "target", "alpha4"),
    "beta": ("E",),
    "potential": ("beta", "B", "E", "r", "draws"),
    "clifford": ("k_samples",),
    "dispersion": ("k_min", "k_max", "count", "spacing"),
    "evolve": ("kind", "n_points", "dx", "x_center", "k0", "sigma", "dt", "steps", "sample_every",
               "potential", "constant", "B", "tolerance", "trajectory"),
}


def _overrides(args) -> dict:
    out: dict = {}
    for key in ("units", "output", "seed"):
        if getattr(args, key) is not None:
            out[key] = getattr(args, key)
    params = {k: getattr(args, k) for k in ("m", "c", "hbar") if getattr(args, k) is not None}
    if params:
        out["params"] = params
    section = {}
    for key in SECTION_FLAGS[args.command]:
        value = getattr(args, key)
        if value is None:
            continue
        if key == "basis":
            value = [v.strip() for v in value.split(",") if v.strip()]
        elif key == "r":
            value = [float(v) for v in value.split(",")]
        section[key] = value
    if section:
        out[args.command] = section
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0

    try:
        cfg = validate(merge(load_config(args.config), _overrides(args)))
        params = resolve_params(cfg)
        out_format = cfg["output"] or DEFAULT_FORMAT.get(args.command, "text")
        extra = None
        if args.command == "exponents":
            report = cmd_exponents(cfg, params)
        elif args.command == "beta":
            report = cmd_beta(cfg, params)
        elif args.command == "potential":
            report = cmd_potential(cfg, params)
        elif args.command == "clifford":
            report = cmd_clifford(cfg, params)
        elif args.command == "dispersion":
            report = cmd_dispersion(cfg, params)
        else:
            report, extra = cmd_evolve(cfg, params)
    except (ConfigError, ValueError) as exc:
        print(f"foldrel: error: {exc}", file=sys.stderr)
        return 1
    except InconsistentSystem as exc:
        print(f"foldrel: inconsistent system: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, FoldrelError) as exc:
        print(f"foldrel: numerical failure: {exc}", file=sys.stderr)
        return 2

    if args.command == "evolve" and out_format == "csv" and not cfg["evolve"]["trajectory"]:
        text = extra
    else:
        text = report.render(out_format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)

    if args.command == "evolve":
        return 0
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
