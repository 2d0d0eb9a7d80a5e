"""Command line: ``dtsne generate | embed | evaluate | plot``.

Exit codes: 0 success, 2 usage or specification error, 3 I/O error,
4 numerical failure during optimization.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter

from . import io as tsv
from .core import ConfigError, DtsneError, EmbeddingConfig, NonFiniteIterateError
from .embedder import run_embedding
from .metrics import evaluate
from .plot import PlotSpec, write_svg
from .synthgen import PRESET_NAMES, SpecInvalidError, generate, preset, spec_from_dict

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_generate(args):
    try:
        if args.spec:
            with open(args.spec, encoding="utf-8") as fh:
                raw = json.load(fh)
            if args.seed is not None:
                raw["seed"] = args.seed
            spec = spec_from_dict(raw)
        else:
            spec = preset(args.preset, seed=args.seed or 0)
        data = generate(spec)
    except SpecInvalidError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(EXIT_IO, str(exc))
    try:
        tsv.write_tsv(data.points, args.out)
        if args.labels:
            tsv.write_labels(data.labels, args.labels)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    counts = Counter(int(v) for v in data.labels)
    print(f"n={data.n} m={data.m} clusters={len(counts)}")
    for lab in sorted(counts):
        print(f"cluster {lab}: {counts[lab]} points, scale {spec.scales[lab]:g}")
    return EXIT_OK


def _load_dataset(path):
    try:
        return tsv.dataset_from_tsv(path), None
    except OSError as exc:
        return None, _fail(EXIT_IO, str(exc))
    except DtsneError as exc:
        return None, _fail(EXIT_USAGE, f"{path}: {exc}")


def cmd_embed(args):
    data, err = _load_dataset(args.input)
    if err is not None:
        return err
    try:
        config = EmbeddingConfig(
            method=args.method,
            perplexity=args.perplexity,
            iterations=args.iters,
            learning_rate=None if args.learning_rate == "auto" else float(args.learning_rate),
            exaggeration_factor=args.exaggeration,
            exaggeration_iters=min(args.exaggeration_iters, args.iters),
            momentum_switch_iter=min(20, args.iters),
            pca_input_dims=args.pca_dims,
            seed=args.seed,
            out_dim=args.out_dim,
        )
        config.check_against(data)
    except (ConfigError, ValueError) as exc:
        return _fail(EXIT_USAGE, str(exc))
    start = time.perf_counter()
    try:
        embedding, state = run_embedding(data, config)
    except NonFiniteIterateError as exc:
        return _fail(EXIT_NUMERIC, str(exc))
    except DtsneError as exc:
        return _fail(EXIT_USAGE, str(exc))
    elapsed = time.perf_counter() - start
    try:
        tsv.embedding_to_tsv(embedding, args.out)
        if args.kl_trace:
            with open(args.kl_trace, "w", encoding="utf-8") as fh:
                for it, kl in zip(state.kl_iters, state.kl_trace):
                    fh.write(f"{it}\t{tsv.format_real(kl)}\n")
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    print(f"method={config.method.value} n={data.n} kl={state.kl_trace[-1]:.6g} runtime_s={elapsed:.2f}")
    return EXIT_OK


def cmd_evaluate(args):
    data, err = _load_dataset(args.data)
    if err is not None:
        return err
    try:
        low = tsv.read_tsv(args.embedding)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except DtsneError as exc:
        return _fail(EXIT_USAGE, f"{args.embedding}: {exc}")
    if low.shape[0] != data.n:
        return _fail(EXIT_USAGE, f"row counts differ: data has {data.n}, embedding has {low.shape[0]}")
    try:
        report = evaluate(data, low, k=args.k)
    except DtsneError as exc:
        return _fail(EXIT_USAGE, str(exc))
    print(report.as_line())
    print(report.spearman_line())
    return EXIT_OK


def cmd_plot(args):
    try:
        coords = tsv.read_tsv(args.embedding)
        labels = tsv.read_labels(args.labels) if args.labels else None
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except DtsneError as exc:
        return _fail(EXIT_USAGE, str(exc))
    if coords.shape[1] != 2:
        return _fail(EXIT_USAGE, f"plot needs a 2-column embedding, got {coords.shape[1]} columns")
    try:
        spec = PlotSpec(args.width, args.height, args.radius, args.opacity, not args.no_color)
        write_svg(args.out, coords, labels, spec, title=args.title)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except DtsneError as exc:
        return _fail(EXIT_USAGE, str(exc))
    return EXIT_OK


def build_parser():
    p = _Parser(prog="dtsne", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic benchmark dataset")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help=f"one of: {', '.join(PRESET_NAMES)}")
    src.add_argument("--spec", help="JSON cluster specification")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)
    g.add_argument("--labels")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("embed", help="embed a TSV dataset")
    e.add_argument("--in", dest="input", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--method", choices=["tsne", "dtsne"], default="dtsne")
    e.add_argument("--perplexity", type=float, default=100.0)
    e.add_argument("--iters", type=int, default=750)
    e.add_argument("--learning-rate", default="auto")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--pca-dims", type=int, default=50)
    e.add_argument("--out-dim", type=int, choices=[2, 3], default=2)
    e.add_argument("--exaggeration", type=float, default=12.0)
    e.add_argument("--exaggeration-iters", type=int, default=100)
    e.add_argument("--kl-trace", help="write 'iteration<TAB>KL' lines here")
    e.set_defaults(func=cmd_embed)

    v = sub.add_parser("evaluate", help="score an embedding against its source data")
    v.add_argument("--data", required=True)
    v.add_argument("--embedding", required=True)
    v.add_argument("--k", type=int, default=None, help="neighbors (default min(100, n-1))")
    v.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("plot", help="render a 2-d embedding as SVG")
    s.add_argument("--embedding", required=True)
    s.add_argument("--labels")
    s.add_argument("--out", required=True)
    s.add_argument("--width", type=int, default=400)
    s.add_argument("--height", type=int, default=400)
    s.add_argument("--radius", type=float, default=2.0)
    s.add_argument("--opacity", type=float, default=0.5)
    s.add_argument("--no-color", action="store_true")
    s.add_argument("--title")
    s.set_defaults(func=cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
