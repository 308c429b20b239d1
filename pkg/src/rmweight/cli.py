"""Command-line front end.

Every file-producing invocation writes a run manifest next to its output so
a run can be replayed bit-for-bit: same tool version, same manifest, same
bytes. Exit codes: 0 success, 2 usage error, 3 resource cap exceeded,
4 unconverged estimate.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .estimator import estimate_adaptive, estimate_fixed
from .exact import (
    ResourceLimitError,
    WeightDistribution,
    brute_force_distribution,
    coset_recursion_distribution,
    macwilliams_transform,
)
from .gf2 import BitVec
from .rm import RmCode
from .rng import child_stream
from .sampler import WeightEnergy, sample
from .spectrum import candidate_weights, estimate_spectrum

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_UNCONVERGED = 4


@dataclass
class RunManifest:
    command: str
    m: int | None = None
    r: int | None = None
    omega: int | list[int] | None = None
    tau: int | None = None
    t: int | None = None
    delta: float | None = None
    beta_star: float | None = None
    schedule_step: float | None = None
    seed: int | None = None
    trials: int | None = None
    wallclock_seconds: float | None = None
    tool_version: str = __version__
    outputs: list[dict] = field(default_factory=list)

    def add_output(self, path: str, data: bytes):
        self.outputs.append(
            {"path": path, "sha256": hashlib.sha256(data).hexdigest()}
        )

    def write(self, out_path: str):
        with open(_manifest_path(out_path), "w") as fh:
            json.dump(asdict(self), fh, indent=2)
            fh.write("\n")


def _manifest_path(out_path: str) -> str:
    return out_path + ".manifest.json"


def _emit(text: str, out: str | None, manifest: RunManifest):
    data = text.encode()
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "wb") as fh:
        fh.write(data)
    manifest.add_output(out, data)
    manifest.write(out)


def _parse_omegas(args) -> list[int]:
    if args.omega is not None:
        return [args.omega]
    lo, hi, step = args.omega_range
    return list(range(lo, hi + 1, step))


def _cmd_estimate(args) -> int:
    code = RmCode(args.m, args.r)
    omegas = _parse_omegas(args)
    if not omegas:
        print("error: empty --omega-range", file=sys.stderr)
        return EXIT_USAGE
    manifest = RunManifest(
        command="estimate", m=args.m, r=args.r,
        omega=omegas if len(omegas) > 1 else omegas[0],
        tau=args.tau, t=args.t, delta=args.delta, beta_star=args.beta_star,
        schedule_step=args.schedule_step, seed=args.seed,
    )
    t0 = time.monotonic()
    rows = []
    any_unconverged = False
    for idx, omega in enumerate(omegas):
        stream = child_stream(args.seed, idx)
        if args.beta_star is not None:
            est = estimate_fixed(
                code, omega, beta_star=args.beta_star, t=args.t, tau=args.tau,
                rng=stream, step=args.schedule_step, threads=args.threads,
            )
        else:
            est = estimate_adaptive(
                code, omega, t=args.t, tau=args.tau, delta=args.delta,
                rng=stream, step=args.schedule_step, ell_max=args.ell_max,
                threads=args.threads,
            )
        any_unconverged |= not est.converged
        rows.append(est)
    manifest.wallclock_seconds = time.monotonic() - t0

    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["omega", "rate", "log2_Z", "ell_used", "converged"])
    for est in rows:
        writer.writerow(
            [est.omega, f"{est.rate:.10f}", f"{est.log2_z:.6f}",
             est.ell_used, est.converged]
        )
    _emit(buf.getvalue(), args.out, manifest)
    return EXIT_UNCONVERGED if any_unconverged else EXIT_OK


def _cmd_spectrum(args) -> int:
    code = RmCode(args.m, args.r)
    candidates = candidate_weights(
        args.m, args.r,
        self_dual_filter=args.self_dual_filter,
        full_range=args.full_range,
    )
    manifest = RunManifest(
        command="spectrum", m=args.m, r=args.r,
        omega=list(candidates.weights), tau=args.tau,
        beta_star=args.beta_star, seed=args.seed, trials=args.trials,
    )
    t0 = time.monotonic()
    report = estimate_spectrum(
        code, candidates, beta_star=args.beta_star, tau=args.tau,
        trials=args.trials, rng=child_stream(args.seed),
        threads=args.threads, full_range=args.full_range,
    )
    manifest.wallclock_seconds = time.monotonic() - t0
    _emit(report.to_json() + "\n", args.out, manifest)
    return EXIT_OK


def _cmd_exact(args) -> int:
    code = RmCode(args.m, args.r)
    manifest = RunManifest(command="exact", m=args.m, r=args.r)
    t0 = time.monotonic()
    try:
        if args.method == "coset":
            wd = coset_recursion_distribution(args.m, args.r)
        else:
            wd = brute_force_distribution(code, k_max=args.k_max)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    manifest.wallclock_seconds = time.monotonic() - t0
    _emit(wd.to_json() + "\n", args.out, manifest)
    return EXIT_OK


def _cmd_macwilliams(args) -> int:
    with open(args.infile) as fh:
        wd = WeightDistribution.from_json(fh.read())
    manifest = RunManifest(command="macwilliams")
    t0 = time.monotonic()
    dual = macwilliams_transform(wd, args.k)
    manifest.wallclock_seconds = time.monotonic() - t0
    _emit(dual.to_json() + "\n", args.out, manifest)
    return EXIT_OK


def _cmd_sample(args) -> int:
    code = RmCode(args.m, args.r)
    manifest = RunManifest(
        command="sample", m=args.m, r=args.r, omega=args.omega,
        tau=args.tau, beta_star=args.beta_star, seed=args.seed,
    )
    t0 = time.monotonic()
    c = sample(
        code, BitVec(code.n), args.beta_star, WeightEnergy(args.omega),
        args.tau, child_stream(args.seed),
    )
    manifest.wallclock_seconds = time.monotonic() - t0
    body = {"codeword": c.to_hex(), "weight": c.weight}
    _emit(json.dumps(body, indent=2) + "\n", args.out, manifest)
    return EXIT_OK


def _cmd_recover(args) -> int:
    code = RmCode(args.m, args.r)
    manifest = RunManifest(command="recover", m=args.m, r=args.r)
    try:
        c = BitVec.from_hex(args.codeword, code.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.monotonic()
    u = code.recover_message(c)
    manifest.wallclock_seconds = time.monotonic() - t0
    body = {
        "k": code.k,
        "message_support": [i + 1 for i in u.indices()],
    }
    _emit(json.dumps(body, indent=2) + "\n", args.out, manifest)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="output path ('-' for stdout)")
    p.add_argument("--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmweight",
        description="Reed-Muller weight enumerator estimation and exact oracles",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate A(omega) rates by sampling")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--omega", type=int)
    group.add_argument(
        "--omega-range", nargs=3, type=int, metavar=("LO", "HI", "STEP")
    )
    p.add_argument("--tau", type=int, default=10**6)
    p.add_argument("--t", type=int, default=10)
    p.add_argument("--delta", type=float, default=1e-3)
    p.add_argument("--beta-star", type=float, default=None,
                   help="use the fixed schedule up to this beta")
    p.add_argument("--schedule-step", type=float, default=None)
    p.add_argument("--ell-max", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("spectrum", help="witness search over candidate weights")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--tau", type=int, default=10**5)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--beta-star", type=float, default=50.0)
    p.add_argument("--full-range", action="store_true")
    p.add_argument("--self-dual-filter", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("exact", help="exact weight distribution")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k-max", type=int, default=26)
    p.add_argument("--method", choices=["brute", "coset"], default="brute")
    _add_common(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("macwilliams", help="dual distribution via MacWilliams")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_macwilliams)

    p = sub.add_parser("sample", help="draw one Gibbs-distributed codeword")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--omega", type=int, required=True)
    p.add_argument("--tau", type=int, default=10**5)
    p.add_argument("--beta-star", type=float, default=50.0)
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("recover", help="message support of a codeword")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--codeword", required=True, help="hex, bit 0 = point 0...0")
    _add_common(p)
    p.set_defaults(func=_cmd_recover)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(name)s %(message)s",
    )
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
