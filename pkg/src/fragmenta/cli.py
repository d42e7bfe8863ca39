"""Command-line entry point: every experiment as a reproducible subcommand.

Reports are JSON on stdout (or --out); gates-demo emits one JSON line per
gate report.  All randomness flows from --seed, and identical invocations
produce byte-identical output: numpy scalars are converted to plain Python
values and floats serialize via their exact shortest round-trip
representation (up to 17 significant digits).  Exit codes: 0 success,
1 acceptance failure, 2 usage error.
"""

import argparse
import json
import sys

import numpy as np

from . import config as cfgmod
from . import dynamics as dyn
from . import encoding as enc
from . import fragmentation as fr
from . import gates
from . import quadflip as qf
from . import selftest
from . import syndrome as syn
from .lattice import build_lattice


def _canonical(obj):
    """Recursively convert numpy containers/scalars to plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_canonical(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _emit(report, out):
    text = json.dumps(_canonical(report), indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_frozen_count(args):
    report = {"schema": 1, "L": args.L}
    if args.method in ("brute", "both"):
        lat = build_lattice(args.L)
        report["brute_force"] = fr.enumerate_frozen(lat).to_dict()
    if args.method in ("transfer", "both"):
        report["transfer_matrix"] = fr.transfer_report(args.L).to_dict()
    _emit(report, args.out)
    return 0


def _cmd_krylov(args):
    lat = build_lattice(args.L)
    sectors = fr.krylov_decompose(lat)
    histogram = fr.sector_histogram(sectors)
    n_unflippable = sum(1 for s in sectors if s.is_frozen_sector)
    n_code = sum(
        1 for s in sectors if s.is_frozen_sector and all(v == 1 for v in s.syndrome)
    )
    formula = fr.formula_count(args.L)
    report = {
        "schema": 1,
        "L": args.L,
        "method": "union_find",
        "n_sectors": len(sectors),
        "total_members": sum(s.size for s in sectors),
        "count_unflippable": n_unflippable,
        "count_code_states": n_code,
        "formula_value": formula,
        "matches": {
            "unflippable": n_unflippable == formula,
            "code_states": n_code == formula,
        },
        "sector_histogram": [{"size": s, "count": c} for s, c in histogram],
    }
    _emit(report, args.out)
    return 0


def _cmd_blocks(args):
    lat = build_lattice(args.L)
    blocks = enc.enumerate_blocks(lat)
    n_code, n_blocks, n_qubits = enc.qubit_count(lat)
    report = {
        "schema": 1,
        "L": args.L,
        "count_code_states": n_code,
        "n_blocks": n_blocks,
        "n_logical_qubits": n_qubits,
        "blocks": [
            {
                "index": k,
                "representative": cfgmod.format_config_literal(b.alpha, args.L),
                "members": list(b.members),
            }
            for k, b in enumerate(blocks)
        ],
    }
    _emit(report, args.out)
    return 0


def _cmd_verify_algebra(args):
    lat = build_lattice(args.L)
    blocks = enc.enumerate_blocks(lat)
    per_block = []
    worst = 0.0
    for k, b in enumerate(blocks):
        residuals = enc.verify_pauli_algebra(b)
        block_max = max(residuals.values())
        worst = max(worst, block_max)
        per_block.append({"index": k, "max_residual": block_max})
    report = {
        "schema": 1,
        "L": args.L,
        "blocks": per_block,
        "max_residual": worst,
        "passed": worst <= selftest.ALGEBRA_TOL,
    }
    _emit(report, args.out)
    return 0 if worst <= selftest.ALGEBRA_TOL else 1


def _gate_lines_cnot(lat, block):
    lines = []
    for k, (sa, sb) in enumerate(enc.MEMBER_LABELS):
        amps = np.zeros(4)
        amps[k] = 1.0
        psi = enc.logical_state(block, amps)
        out = gates.apply_logical_cnot(psi, block)
        expected_amps = np.zeros(4)
        expected_amps[(sa << 1) | (sa ^ sb)] = 1.0
        expected = enc.logical_state(block, expected_amps)
        lines.append(
            gates.gate_report(
                block, "cnot", {}, psi, out,
                expected=expected, input_label=f"|{sa}{sb}>",
            )
        )
    probe = enc.logical_state(block, dyn.DEFAULT_PROBE)
    bell = gates.apply_logical_cnot(probe, block)
    expected = enc.logical_state(
        block, (1 / np.sqrt(2), 0.0, 0.0, 1 / np.sqrt(2))
    )
    lines.append(
        gates.gate_report(
            block, "cnot", {}, probe, bell,
            expected=expected, input_label="(|00>+|10>)/sqrt2",
        )
    )
    return lines


def _gate_lines_rx(lat, block, theta):
    psi = enc.logical_state(block, (1.0, 0.0, 0.0, 0.0))
    out = gates.apply_rx(psi, lat, "A", theta)
    expected = None
    if abs(theta - np.pi) < 1e-15:
        expected = gates.rx_pi_global_phase(lat.n_sublattice) * enc.logical_state(
            block, (0.0, 0.0, 1.0, 0.0)
        )
    return [
        gates.gate_report(
            block, "rx", {"sublattice": "A", "theta": theta}, psi, out,
            expected=expected, input_label="|00>",
        )
    ]


def _gate_lines_rz(lat, block, phi):
    probe = enc.logical_state(block, dyn.DEFAULT_PROBE)
    out = gates.apply_rz(probe, block, "A", phi)
    expected = enc.logical_state(
        block,
        (
            np.exp(-1j * phi / 2.0) / np.sqrt(2.0),
            0.0,
            np.exp(+1j * phi / 2.0) / np.sqrt(2.0),
            0.0,
        ),
    )
    return [
        gates.gate_report(
            block, "rz", {"sublattice": "A", "phi": phi}, probe, out,
            expected=expected, input_label="(|00>+|10>)/sqrt2",
        )
    ]


def _cmd_gates_demo(args):
    lat = build_lattice(args.L)
    blocks = enc.enumerate_blocks(lat)
    block = blocks[args.block]
    if args.gate == "cnot":
        reports = _gate_lines_cnot(lat, block)
    elif args.gate == "rx":
        reports = _gate_lines_rx(lat, block, args.theta)
    else:
        reports = _gate_lines_rz(lat, block, args.phi)
    lines = "".join(
        json.dumps({"schema": 1, **_canonical(r.to_dict())}) + "\n" for r in reports
    )
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    return 0


def _cmd_syndrome_demo(args):
    lat = build_lattice(args.L)
    blocks = enc.enumerate_blocks(lat)
    block = blocks[args.block]
    sites = [args.site] if args.site is not None else list(range(lat.n_sites))
    paulis = [args.pauli] if args.pauli else ["X", "Z"]
    reports = {}
    for site in sites:
        for p in paulis:
            rep = syn.detection_experiment(block, site, p)
            reports[f"block{args.block}/site{site}/{p}"] = rep.to_dict()
    _emit({"schema": 1, "L": args.L, "reports": reports}, args.out)
    return 0


def _cmd_evolve(args):
    lat = build_lattice(args.L)
    blocks = enc.enumerate_blocks(lat)
    block = blocks[args.block]
    if args.hamiltonian == "heff":
        H = dyn.build_heff(lat, h=args.h)
    else:
        H = dyn.build_hczp(lat, J=args.J, h=args.h)
    if args.perturbation != "none":
        H = H + dyn.build_perturbation(
            lat, args.perturbation, args.lam, seed=args.seed
        )
    times = np.linspace(0.0, args.tmax, args.steps + 1)
    series = dyn.coherence_experiment(block, H, times, tol=args.tol)
    rows = list(series.csv_rows())
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("t,reX,imX,population,fidelity\n")
            for row in rows:
                fh.write(",".join(repr(v) for v in row) + "\n")
    report = {
        "schema": 1,
        "L": args.L,
        "hamiltonian": args.hamiltonian,
        "perturbation": args.perturbation,
        "lambda": args.lam,
        "J": args.J,
        "h": args.h,
        "seed": args.seed,
        "block": args.block,
        "tol": args.tol,
        "times": list(series.times),
        "series": rows,
        "final_tomography": series.tomography[-1],
        "final_fidelity": float(series.fidelity[-1]),
        "scaling_note": "single-size run; exponential-in-L stability claims are untested here",
    }
    _emit(report, args.out)
    return 0


def _cmd_quadflip(args):
    report = qf.quadflip_report(args.L, args.m)
    report = {"schema": 1, **report}
    _emit(report, args.out)
    return 0


def _cmd_selftest(args):
    report = selftest.run_all(seed=args.seed)
    _emit(report, args.out)
    return 0 if report["all_passed"] else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fragmenta",
        description="Exact simulator and verification toolkit for "
        "symmetry-protected logical qubits in constrained plaquette models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_L=4):
        p.add_argument("--L", type=int, default=default_L)
        p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("frozen-count", help="count unflippable/code states")
    common(p)
    p.add_argument("--method", choices=("brute", "transfer", "both"), default="both")
    p.set_defaults(func=_cmd_frozen_count)

    p = sub.add_parser("krylov", help="full sector decomposition")
    common(p)
    p.set_defaults(func=_cmd_krylov)

    p = sub.add_parser("blocks", help="logical block inventory")
    common(p)
    p.set_defaults(func=_cmd_blocks)

    p = sub.add_parser("verify-algebra", help="Pauli algebra residuals per block")
    common(p)
    p.set_defaults(func=_cmd_verify_algebra)

    p = sub.add_parser("gates-demo", help="gate reports as JSON lines")
    common(p)
    p.add_argument("--block", type=int, default=0)
    p.add_argument("--gate", choices=("cnot", "rx", "rz"), default="cnot")
    p.add_argument("--theta", type=float, default=np.pi)
    p.add_argument("--phi", type=float, default=np.pi / 3)
    p.set_defaults(func=_cmd_gates_demo)

    p = sub.add_parser("syndrome-demo", help="single-Pauli detection reports")
    common(p)
    p.add_argument("--block", type=int, default=0)
    p.add_argument("--site", type=int, default=None)
    p.add_argument("--pauli", choices=("X", "Y", "Z"), default=None)
    p.set_defaults(func=_cmd_syndrome_demo)

    p = sub.add_parser("evolve", help="coherence experiment under exact evolution")
    common(p)
    p.add_argument("--hamiltonian", choices=("heff", "czp"), default="heff")
    p.add_argument(
        "--perturbation",
        choices=("none",) + dyn.PERTURBATION_KINDS,
        default="none",
    )
    p.add_argument("--lambda", dest="lam", type=float, default=0.05)
    p.add_argument("--J", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=50.0)
    p.add_argument("--steps", type=int, default=25)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--block", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("quadflip", help="clock-model sector decomposition")
    p.add_argument("--L", type=int, default=2)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_quadflip)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
