"""Command-line entry point emitting CSV datasets."""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .approx import ApproximationValidityWarning, approximation_fidelity, validity_limit
from .config import RunConfig, dump_config, load_config
from .dynamics import ModelParams, evolve_exact, unscaled_time
from .fock import TruncationError, coherent_state, partial_trace_field
from .overlaps import AsymptoticValidityWarning, OverlapParams, overlap_approx, overlap_exact
from .protocol import (
    BRANCHES,
    FAIL,
    ProtocolConfig,
    fidelity_vs_nbar,
    fidelity_vs_tau,
    predicted_probabilities,
    run_protocol,
)
from .sweep import SweepResult
from .wigner import wigner_grid

log = logging.getLogger("tcbell")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise ValueError("step count must be at least 1")
    if steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, steps)


def _stepped(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0 or hi < lo:
        raise ValueError("need step > 0 and max >= min")
    return lo + step * np.arange(int(round((hi - lo) / step)) + 1)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _output(args, config: RunConfig) -> str | None:
    return args.out if args.out is not None else config.out


def cmd_wigner(args, config: RunConfig) -> str:
    params = ModelParams(config.nbar, config.g, config.phi)
    field = coherent_state(config.alpha, config.cutoff)
    joint = evolve_exact(config.atom(), field, unscaled_time(args.tau, params), config.g)
    rho = partial_trace_field(joint)
    return wigner_grid(rho, config.grid_spec()).to_csv()


def cmd_approx_fidelity(args, config: RunConfig) -> str:
    atom = config.atom()
    taus = _grid(0.0, args.tau_max, args.tau_steps)
    rows = []
    for nbar in args.nbar_list:
        alpha = np.sqrt(nbar) * np.exp(1j * config.phi)
        if taus[-1] >= validity_limit(nbar):
            log.warning(
                "nbar=%g: tau beyond %.4g lies outside the approximation's range",
                nbar,
                validity_limit(nbar),
            )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ApproximationValidityWarning)
            for tau in taus:
                f = approximation_fidelity(atom, alpha, float(tau), config.g, config.cutoff)
                rows.append([float(tau), float(nbar), f])
    return SweepResult(("tau", "nbar", "F"), rows).to_csv()


def cmd_protocol(args, config: RunConfig) -> str:
    cfg = ProtocolConfig(
        config.atom(),
        config.alpha,
        args.tau1,
        args.tau2,
        args.engine,
        config.g,
        config.cutoff,
    )
    outcomes = run_protocol(cfg)
    predicted = predicted_probabilities(cfg.atom, config.phi)
    labels = {v: k for k, v in BRANCHES.items()}
    rows = []
    for o in outcomes:
        if o.branch == FAIL:
            rows.append([FAIL, "", "", FAIL, o.probability, predicted[FAIL], None])
        else:
            d1, d2 = labels[o.bell_label]
            rows.append(
                [o.bell_label, d1, d2, o.bell_label, o.probability, predicted[o.bell_label], o.fidelity]
            )
    columns = ("outcome", "detector1", "detector2", "heralded", "probability", "predicted", "fidelity")
    return SweepResult(columns, rows).to_csv()


def cmd_fidelity_vs_nbar(args, config: RunConfig) -> str:
    nbars = _stepped(args.nbar_min, args.nbar_max, args.nbar_step)
    return fidelity_vs_nbar(config.atom(), nbars, args.tau, config.phi, args.engine, config.g).to_csv()


def cmd_fidelity_vs_tau(args, config: RunConfig) -> str:
    taus = _grid(args.tau_min, args.tau_max, args.tau_steps)
    nbar = config.nbar if args.nbar is None else args.nbar
    return fidelity_vs_tau(config.atom(), nbar, taus, config.phi, args.engine, config.g).to_csv()


def cmd_overlap(args, config: RunConfig) -> str:
    taus = _grid(args.tau_min, args.tau_max, args.tau_steps)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticValidityWarning)
        for tau in taus:
            params = OverlapParams(args.nbar, float(tau), args.j, args.sign)
            ex, ap = overlap_exact(params), overlap_approx(params)
            rows.append([float(tau), ex.real, ex.imag, ap.real, ap.imag])
    return SweepResult(("tau", "exact_re", "exact_im", "approx_re", "approx_im"), rows).to_csv()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON run configuration")
    common.add_argument(
        "--dump-config",
        default=argparse.SUPPRESS,
        metavar="PATH",
        help="write the effective configuration as JSON",
    )
    common.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    parser = argparse.ArgumentParser(prog="tcbell", description=__doc__)
    parser.add_argument("--config", default=None, help="JSON run configuration")
    parser.add_argument("--dump-config", default=None, metavar="PATH")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("wigner", parents=[common], help="Wigner grid of the cavity field")
    p.add_argument("--tau", type=float, default=0.5)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("approx-fidelity", parents=[common], help="fidelity of the approximate state")
    p.add_argument("--nbar-list", type=_float_list, default=[10.0, 20.0, 40.0, 80.0, 160.0])
    p.add_argument("--tau-steps", type=int, default=101)
    p.add_argument("--tau-max", type=float, default=1.0)
    p.set_defaults(func=cmd_approx_fidelity)

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--engine", choices=("exact", "approx"), default="exact")

    p = sub.add_parser("protocol", parents=[common, engine], help="outcome table of the protocol")
    p.add_argument("--tau1", type=float, default=0.5)
    p.add_argument("--tau2", type=float, default=0.5)
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("fidelity-vs-nbar", parents=[common, engine])
    p.add_argument("--nbar-min", type=float, default=1.0)
    p.add_argument("--nbar-max", type=float, default=50.0)
    p.add_argument("--nbar-step", type=float, default=0.05)
    p.add_argument("--tau", type=float, default=0.5)
    p.set_defaults(func=cmd_fidelity_vs_nbar)

    p = sub.add_parser("fidelity-vs-tau", parents=[common, engine])
    p.add_argument("--nbar", type=float, default=None, help="defaults to the config value")
    p.add_argument("--tau-min", type=float, default=0.4)
    p.add_argument("--tau-max", type=float, default=0.6)
    p.add_argument("--tau-steps", type=int, default=401)
    p.set_defaults(func=cmd_fidelity_vs_tau)

    p = sub.add_parser("overlap", parents=[common], help="exact vs asymptotic branch overlap")
    p.add_argument("--nbar", type=float, default=12.16)
    p.add_argument("--j", type=int, default=-1, choices=(-1, 1))
    p.add_argument("--sign", type=int, default=1, choices=(-1, 1))
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=1.0)
    p.add_argument("--tau-steps", type=int, default=401)
    p.set_defaults(func=cmd_overlap)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = load_config(args.config) if args.config else RunConfig()
        if args.dump_config:
            dump_config(config, args.dump_config)
        if args.command is None:
            if not args.dump_config:
                parser.print_help(sys.stderr)
                return 2
            return 0
        _emit(args.func(args, config), _output(args, config))
    except (ValueError, TruncationError, OSError, ArithmeticError) as exc:
        print(f"tcbell: error: {exc}", file=sys.stderr)
        return 1
    return 0
