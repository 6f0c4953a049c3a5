"""Batch command-line front end: sweeps, phase diagrams, descent and flow runs.

One JSON config document per run (selected with --config) with a "command"
field; explicit command-line flags override config fields.  All outputs are
deterministic functions of (config, seed) at any thread count: grid points
are independent pure computations and rows are assembled in submission
order.  Exit codes: 0 success, 2 usage/config error, 3 numerical failure.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__, descent, phase_field, profiles, spectrum
from ._serialize import write_csv, write_json
from .errors import DomainError, NoBracketError
from .kernels import DEFAULT_TAIL_TERMS
from .sharp_energy import ModelParams, energy_total
from .spectrum import circulant_eigenvalues, circulant_row_at_UN

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _parse_number_list(text):
    if isinstance(text, (list, tuple)):
        return list(text)
    return [float(v) for v in str(text).split(",") if v.strip() != ""]


def _parse_int_list(text):
    return [int(round(v)) for v in _parse_number_list(text)]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lamellar",
        description="Sharp-interface energies, spectra and phase-field flows "
        "for the doubly nonlocal lamellar energy on the unit circle.",
    )
    ap.add_argument("--version", action="version", version=f"lamellar {__version__}")
    sub = ap.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override its fields")
        p.add_argument("--out", help="output path (stdout if omitted)")
        p.add_argument("--seed", type=int, help="seed for randomized perturbations")
        p.add_argument("--threads", type=int, help="parallel workers (default: cores)")
        p.add_argument("--tail-terms", type=int, dest="tail_terms",
                       help=f"kernel image count (default {DEFAULT_TAIL_TERMS})")

    p = sub.add_parser("energy", help="sharp energies of equidistributed profiles")
    common(p)
    p.add_argument("--N", dest="N", help="comma-separated even interface counts")
    p.add_argument("--s", type=float)
    p.add_argument("--gamma", type=float)

    p = sub.add_parser("spectrum", help="circulant Hessian spectra at U_N")
    common(p)
    p.add_argument("--N", dest="N", help="comma-separated even interface counts")
    p.add_argument("--s", type=float)
    p.add_argument("--gamma", help="comma-separated gamma values")
    p.add_argument("--m", type=float, help="mass (must be 0)")

    p = sub.add_parser("phase-diagram", help="stability classification over a grid")
    common(p)
    p.add_argument("--N", dest="N", help="comma-separated even interface counts")
    p.add_argument("--s", help="comma-separated s values")
    p.add_argument("--gamma", help="comma-separated gamma values")

    p = sub.add_parser("minimize", help="projected descent from a perturbed U_N")
    common(p)
    p.add_argument("--N", dest="N", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--amplitude", type=float, help="perturbation max-norm")
    p.add_argument("--gtol", type=float)
    p.add_argument("--max-iters", type=int, dest="max_iters")

    p = sub.add_parser("flow", help="phase-field relaxation / epsilon-schedule run")
    common(p)
    p.add_argument("--grid-points", type=int, dest="grid_points")
    p.add_argument("--s", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--eps", help="one epsilon, or a decreasing comma-separated schedule")
    p.add_argument("--N-target", type=int, dest="n_target")
    p.add_argument("--dt", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument("--energy-tol", type=float, dest="energy_tol")
    p.add_argument("--width", type=float, help="mollification width of the initial profile")
    p.add_argument("--noise", type=float, help="initial noise amplitude")
    p.add_argument("--checkpoint", help="binary state output path")

    p = sub.add_parser("gamma0", help="sufficient stability threshold gamma_0(N, s)")
    common(p)
    p.add_argument("--N", dest="N", help="comma-separated even interface counts")
    p.add_argument("--s", help="comma-separated s values")
    return ap


def _merge_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise DomainError("config must be a JSON object")
    for key, val in vars(args).items():
        if key in ("config",) or val is None:
            continue
        cfg[key] = val
    cfg.setdefault("seed", 0)
    cfg.setdefault("threads", os.cpu_count() or 1)
    cfg.setdefault("tail_terms", DEFAULT_TAIL_TERMS)
    return cfg


def _deterministic_map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _comment(cfg) -> str:
    # threads is execution infrastructure: outputs must be byte-identical
    # at any worker count, so it stays out of the parameter echo
    fields = ",".join(f"{k}={cfg[k]}" for k in sorted(cfg) if k != "threads")
    return f"lamellar {__version__} {fields}"


def _emit_csv(cfg, header, rows):
    out = cfg.get("out")
    if out:
        write_csv(out, header, rows, comment=_comment(cfg))
    else:
        from ._serialize import csv_line

        sys.stdout.write(f"# {_comment(cfg)}\n")
        sys.stdout.write(",".join(header) + "\n")
        for row in rows:
            sys.stdout.write(csv_line(row) + "\n")


def _emit_json(cfg, obj):
    out = cfg.get("out")
    if out:
        write_json(out, obj)
    else:
        json.dump(obj, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")


def cmd_energy(cfg) -> int:
    ns = _parse_int_list(cfg.get("N", ""))
    if not ns:
        raise DomainError("energy: need a nonempty --N list")
    s = float(cfg.get("s", 0.25))
    gamma = float(cfg.get("gamma", 1.0))
    tail = int(cfg["tail_terms"])

    def one(n):
        mp = ModelParams(s, gamma)
        eb = energy_total(profiles.make_equidistributed(n), mp, tail)
        return (n, s, gamma, eb.h, eb.k, eb.total, n ** (2 * s),
                1.0 / (24.0 * gamma**2 * n**2))

    rows = _deterministic_map(one, ns, cfg["threads"])
    _emit_csv(cfg, ["N", "s", "gamma", "h", "k", "total", "n_pow_2s", "k_reference"], rows)
    return EXIT_OK


def cmd_spectrum(cfg) -> int:
    ns = _parse_int_list(cfg.get("N", ""))
    gammas = _parse_number_list(cfg.get("gamma", "1.0"))
    if not ns or not gammas:
        raise DomainError("spectrum: need nonempty --N and --gamma lists")
    s = float(cfg.get("s", 0.25))
    if float(cfg.get("m", 0.0)) != 0.0:
        raise DomainError("spectrum: the closed-form row requires m = 0")
    tail = int(cfg["tail_terms"])

    def one(point):
        n, gamma = point
        mp = ModelParams(s, gamma)
        rep = spectrum.classify(n, mp, tail)
        lam = circulant_eigenvalues(circulant_row_at_UN(n, mp, tail))
        kp = mp.kernel_params(tail)
        gp = mp.green_params()
        out = []
        for l in range(n):
            gpart = spectrum.green_part_direct(n, l, gp) if l > 0 else 0.0
            kpart = spectrum.kernel_part(n, l, kp) if l > 0 else 0.0
            out.append((n, s, gamma, l, lam[l], gpart, kpart,
                        rep.constrained_classification, rep.gamma0))
        return out

    grid = [(n, g) for n in ns for g in gammas]
    rows = [r for chunk in _deterministic_map(one, grid, cfg["threads"]) for r in chunk]
    _emit_csv(cfg, ["N", "s", "gamma", "l", "lambda", "green_part", "kernel_part",
                    "classification", "gamma0"], rows)
    return EXIT_OK


def cmd_phase_diagram(cfg) -> int:
    ns = _parse_int_list(cfg.get("N", ""))
    svals = _parse_number_list(cfg.get("s", "0.25"))
    gammas = _parse_number_list(cfg.get("gamma", ""))
    if not ns or not gammas or not svals:
        raise DomainError("phase-diagram: need nonempty --N, --s and --gamma lists")
    tail = int(cfg["tail_terms"])

    def star(point):
        n, s = point
        if n < 4:
            return (float("inf"), 0)
        try:
            return (spectrum.critical_gamma(n, s, tail), 0)
        except NoBracketError:
            return (float("nan"), 1)

    pairs = [(n, s) for n in ns for s in svals]
    stars = dict(zip(pairs, _deterministic_map(star, pairs, cfg["threads"])))

    def one(point):
        n, s, gamma = point
        rep = spectrum.classify(n, ModelParams(s, gamma), tail)
        gstar, flag = stars[(n, s)]
        return (n, s, gamma, rep.min_constrained_eigenvalue,
                rep.constrained_classification, rep.gamma0, gstar, flag)

    grid = [(n, s, g) for n in ns for s in svals for g in gammas]
    rows = _deterministic_map(one, grid, cfg["threads"])
    _emit_csv(cfg, ["N", "s", "gamma", "min_constrained_eigenvalue", "classification",
                    "gamma0", "gamma_star", "no_bracket"], rows)
    return EXIT_OK


def cmd_minimize(cfg) -> int:
    n = int(cfg.get("N", 4))
    s = float(cfg.get("s", 0.25))
    gamma = float(cfg.get("gamma", spectrum.gamma0(max(n, 4), s) / 2.0))
    amplitude = float(cfg.get("amplitude", 1.0 / (10.0 * n)))
    gtol = float(cfg.get("gtol", 1e-9))
    max_iters = int(cfg.get("max_iters", 500))
    tail = int(cfg["tail_terms"])
    mp = ModelParams(s, gamma)

    start = profiles.make_equidistributed(n)
    noise = descent.seeded_tangent_noise(n, amplitude, int(cfg["seed"]))
    if amplitude > 0.0:
        start = profiles.perturb(start, profiles.tangent_project(noise), 1.0)
    result = descent.projected_descent(start, mp, gtol, max_iters, tail)
    _emit_json(cfg, {
        "command": "minimize",
        "N": n, "s": s, "gamma": gamma, "amplitude": amplitude,
        "seed": int(cfg["seed"]),
        "initial": json.loads(start.to_json()),
        "final": json.loads(result.profile.to_json()),
        "energies": result.energies,
        "grad_norms": result.grad_norms,
        "iterations": result.iterations,
        "status": result.status,
    })
    return EXIT_OK


def cmd_flow(cfg) -> int:
    m = int(cfg.get("grid_points", 4096))
    s = float(cfg.get("s", 0.25))
    gamma = float(cfg.get("gamma", 0.05))
    mass = float(cfg.get("m", 0.0))
    eps_list = _parse_number_list(cfg.get("eps", "0.1"))
    n_target = int(cfg.get("n_target", 2))
    dt = float(cfg.get("dt", 5e-3))
    kappa = cfg.get("kappa")
    max_steps = int(cfg.get("max_steps", 2000))
    energy_tol = float(cfg.get("energy_tol", 1e-11))
    width = float(cfg.get("width", 0.01))
    noise = float(cfg.get("noise", 0.0))
    tail = int(cfg["tail_terms"])
    checkpoint = cfg.get("checkpoint", "flow_state.llpf")
    if mass != 0.0:
        raise DomainError("flow: initial lamellar data requires m = 0")

    mp = ModelParams(s, gamma, 0.0, eps_list[0])
    base = phase_field.smoothed_profile(
        profiles.make_equidistributed(n_target), m, mp, width
    )
    if noise > 0.0:
        base = phase_field.add_noise(base, noise, int(cfg["seed"]))
    fc = phase_field.FlowConfig(
        dt=dt,
        stabilization=None if kappa is None else float(kappa),
        max_steps=max_steps,
        energy_tolerance=energy_tol,
    )
    if len(eps_list) > 1:
        final, records = phase_field.gamma_limit_experiment(
            eps_list, base, fc, n_target, tail
        )
        rows = [(r.epsilon, r.energy.h, r.energy.w, r.energy.k, r.energy.total,
                 r.distance, r.energy_gap, r.steps) for r in records]
        _emit_csv(cfg, ["eps", "h", "w", "k", "total", "distance", "energy_gap",
                        "steps"], rows)
    else:
        final, diag = phase_field.run_flow(base, fc)
        rows = [(i, dt0, e.h, e.w, e.k, e.total)
                for i, (dt0, e) in enumerate(zip([0.0] + diag.dts, diag.energies))]
        _emit_csv(cfg, ["step", "dt", "h", "w", "k", "total"], rows)
    phase_field.save_state(final, checkpoint)
    return EXIT_OK


def cmd_gamma0(cfg) -> int:
    ns = _parse_int_list(cfg.get("N", ""))
    svals = _parse_number_list(cfg.get("s", "0.25"))
    if not ns or not svals:
        raise DomainError("gamma0: need nonempty --N and --s lists")
    rows = [(n, s, spectrum.gamma0(n, s)) for n in ns for s in svals]
    _emit_csv(cfg, ["N", "s", "gamma0"], rows)
    return EXIT_OK


_COMMANDS = {
    "energy": cmd_energy,
    "spectrum": cmd_spectrum,
    "phase-diagram": cmd_phase_diagram,
    "minimize": cmd_minimize,
    "flow": cmd_flow,
    "gamma0": cmd_gamma0,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        cfg = _merge_config(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    command = cfg.get("command", command)
    if command not in _COMMANDS:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[command](cfg)
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
