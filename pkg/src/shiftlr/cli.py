"""Command-line interface: ``shiftlr {decompose,reconstruct,matvec,synth,bench,tracks}``.

Exit codes: 0 success, 1 usage error, 2 unreadable/malformed input,
3 zero matrix, 4 dimension mismatch.
"""

import argparse
import csv
import sys

from . import bench, io
from .config import STAGES, SolverConfig
from .decompose import decompose, reconstruct
from .errors import DimensionMismatch, InvalidSpec, ParseError, ZeroMatrix
from .fastops import decomposition_matvec

EXIT_USAGE, EXIT_PARSE, EXIT_ZERO, EXIT_DIM = 1, 2, 3, 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _stages(text):
    names = [s.strip() for s in text.split(",") if s.strip()] if text not in ("", "none") else []
    bad = set(names) - set(STAGES)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown stages {sorted(bad)}; choose from {','.join(STAGES)}")
    return names


def _param(text):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("expected key=value")
    try:
        parsed = [float(v) if any(ch in v for ch in ".eE") else int(v) for v in value.split(",")]
        value = parsed if len(parsed) > 1 or "," in value else parsed[0]
    except ValueError:
        pass
    return key, value


def build_parser():
    p = _Parser(prog="shiftlr", description="Shifted rank-1 matrix decomposition tools.")
    p.add_argument("--seed", type=int, default=None, help="random seed (synth, bench)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="greedy shifted rank-1 decomposition of a matrix file")
    d.add_argument("input")
    d.add_argument("--output", required=True, help="decomposition JSON path")
    d.add_argument("--components", type=int, default=1, help="number of terms L; 0 = until --tol")
    d.add_argument("--tol", type=float, default=0.0, help="stop once residual <= tol * ||A||_F")
    d.add_argument("--format", choices=io.FORMATS)
    d.add_argument("--mode", type=_stages, default=list(STAGES), help="estimator stages, e.g. start,global,local or none")
    d.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="accepted for scripting symmetry; decompose is deterministic")

    r = sub.add_parser("reconstruct", help="write the dense sum of a decomposition")
    r.add_argument("decomposition")
    r.add_argument("--output", required=True)
    r.add_argument("--format", choices=io.FORMATS)

    m = sub.add_parser("matvec", help="multiply a decomposition with a vector")
    m.add_argument("decomposition")
    m.add_argument("vector")
    m.add_argument("--output", required=True)
    m.add_argument("--format", choices=io.FORMATS)
    m.add_argument("--pad-pow2", action="store_true", help="use power-of-two FFT lengths (same result)")

    s = sub.add_parser("synth", help="generate a synthetic matrix")
    s.add_argument("--kind", choices=bench.KINDS, default="shiftedRank1Sum")
    s.add_argument("--rows", "-M", type=int, required=True)
    s.add_argument("--cols", "-N", type=int, required=True)
    s.add_argument("--components", type=int, default=1)
    s.add_argument("--psnr", type=float)
    s.add_argument("--noise-level", type=float)
    s.add_argument("--sigma-ratio", type=float, default=4.0)
    s.add_argument("--real", action="store_true")
    s.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    s.add_argument("--output", required=True)
    s.add_argument("--format", choices=io.FORMATS)
    s.add_argument("--truth", help="also write the ground-truth decomposition here")

    b = sub.add_parser("bench", help="run a benchmark experiment and write a CSV report")
    b.add_argument("experiment", choices=bench.EXPERIMENTS)
    b.add_argument("--output", required=True)
    b.add_argument("--seeds", type=int, default=3, help="number of seeds, starting at --seed")
    b.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="first seed")
    b.add_argument("--param", type=_param, action="append", default=[], help="experiment parameter key=value")

    t = sub.add_parser("tracks", help="export per-column shifts of each component as CSV")
    t.add_argument("decomposition")
    t.add_argument("--output", required=True)
    return p


def _seed(args):
    return args.seed if getattr(args, "seed", None) is not None else 0


def cmd_decompose(args):
    if args.components < 0 or (args.components == 0 and args.tol <= 0):
        raise _UsageError("need --components >= 1 or a positive --tol")
    A = io.read_matrix(args.input, args.format)
    try:
        cfg = SolverConfig(max_components=args.components, residual_threshold=args.tol).with_stages(args.mode)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    D = decompose(A, cfg)
    io.save_decomposition(args.output, D)
    print(f"relative_residual {float(D.relative_residuals[-1])!r}")
    for i, c in enumerate(D.components):
        print(f"sigma[{i}] {c.sigma!r}")


def cmd_reconstruct(args):
    D = io.load_decomposition(args.decomposition)
    io.write_matrix(args.output, reconstruct(D), args.format)


def cmd_matvec(args):
    D = io.load_decomposition(args.decomposition)
    x = io.read_vector(args.vector, args.format)
    if x.size != D.N:
        raise DimensionMismatch(f"vector has length {x.size}, decomposition expects {D.N}")
    io.write_vector(args.output, decomposition_matvec(D, x, pad_pow2=args.pad_pow2), args.format)


def cmd_synth(args):
    spec = bench.SynthSpec(
        kind=args.kind,
        M=args.rows,
        N=args.cols,
        L=args.components,
        noise_psnr=args.psnr,
        noise_level=args.noise_level,
        seed=_seed(args),
        sigma_ratio=args.sigma_ratio,
        complex=not args.real,
    )
    A, truth = bench.generate(spec)
    io.write_matrix(args.output, A, args.format)
    if args.truth:
        if truth is None:
            raise _UsageError(f"kind {args.kind} has no ground truth")
        io.save_decomposition(args.truth, truth)


def cmd_bench(args):
    params = dict(args.param)
    start = _seed(args)
    params["seeds"] = list(range(start, start + args.seeds))
    rows = bench.run_experiment(args.experiment, params)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        bench.write_report(rows, fh)


def cmd_tracks(args):
    D = io.load_decomposition(args.decomposition)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["component_index", "column_index", "shift"])
        for i, c in enumerate(D.components):
            for j, s in enumerate(c.shifts):
                w.writerow([i, j, int(s)])


_COMMANDS = {
    "decompose": cmd_decompose,
    "reconstruct": cmd_reconstruct,
    "matvec": cmd_matvec,
    "synth": cmd_synth,
    "bench": cmd_bench,
    "tracks": cmd_tracks,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"shiftlr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"shiftlr: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ZeroMatrix as exc:
        print(f"shiftlr: {exc}", file=sys.stderr)
        return EXIT_ZERO
    except DimensionMismatch as exc:
        print(f"shiftlr: {exc}", file=sys.stderr)
        return EXIT_DIM
    except InvalidSpec as exc:
        print(f"shiftlr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"shiftlr: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return 0


if __name__ == "__main__":
    sys.exit(main())
