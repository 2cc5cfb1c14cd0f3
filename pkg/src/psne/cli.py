"""Command-line entry point: ``psne {embed,audit,classify,generate}``."""
from __future__ import annotations

import argparse
import logging
import sys


from .config import ConfigError, PsneConfig
from .graph import GraphFormatError, read_edge_list, write_edge_list

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_AUDIT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p, defaults=PsneConfig):
    p.add_argument("--alpha", type=float, default=defaults.alpha, help="PPR decay factor")
    p.add_argument("--trunc", type=int, default=defaults.T, help="truncation order T")
    p.add_argument("--samples-factor", type=float, default=defaults.c, help="c in N = c*T*m")
    p.add_argument("--mu", type=float, default=defaults.mu, help="log-filter parameter")
    p.add_argument("--dim", type=int, default=defaults.k, help="embedding dimension k")
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--threads", type=int, default=defaults.threads)
    p.add_argument("--s-cap", type=int, default=defaults.s_cap, help="pattern samples kept per edge")
    p.add_argument("--oversample", type=int, default=defaults.oversample)
    p.add_argument("--power-iters", type=int, default=defaults.power_iters)


def _config(args) -> PsneConfig:
    return PsneConfig(alpha=args.alpha, T=args.trunc, c=args.samples_factor, mu=args.mu,
                      k=args.dim, seed=args.seed, threads=args.threads, s_cap=args.s_cap,
                      oversample=args.oversample, power_iters=args.power_iters)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psne", description="Spectral-sparsification PPR network embedding.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="embed the nodes of an edge-list graph")
    p.add_argument("edges", help="edge list: 'u v [w]' per line")
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--format", choices=("tsv", "bin"), default="tsv")
    p.add_argument("--no-mp", action="store_true", help="skip the multiple-perspective step")
    p.add_argument("--dump-dir", help="also write Pi~, L~ and pattern weights here")
    _add_config_flags(p)

    p = sub.add_parser("audit", help="check error bounds against dense exact PPR")
    p.add_argument("edges")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--c-values", type=float, nargs="+", default=[1, 4, 16, 64])
    _add_config_flags(p)

    p = sub.add_parser("classify", help="node classification F1 over training ratios")
    p.add_argument("embedding", help="TSV embedding from 'embed'")
    p.add_argument("labels", help="'node label1 label2 ...' per line")
    p.add_argument("--ratios", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.7, 0.9])
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--l2", type=float, default=1.0)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--output", "-o", help="TSV results (default stdout)")

    p = sub.add_parser("generate", help="write a synthetic ER or BA graph")
    p.add_argument("model", choices=("er", "ba"))
    p.add_argument("--nodes", "-n", type=int, required=True)
    p.add_argument("--p", type=float, help="ER edge probability")
    p.add_argument("--attach", type=int, help="BA edges per new node")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", required=True)
    return parser


def cmd_embed(args) -> int:
    from .io import write_embedding_binary, write_embedding_tsv, write_pattern_weights, write_triplets
    from .pipeline import psne_embed
    from .sparsifier import build_sparsifier

    cfg = _config(args)
    g = read_edge_list(args.edges)
    result = psne_embed(g, cfg, use_mp=not args.no_mp)
    if args.format == "tsv":
        write_embedding_tsv(args.output, result.node_ids, result.vectors)
    else:
        write_embedding_binary(args.output, result.vectors)
    if args.dump_dir:
        import os
        os.makedirs(args.dump_dir, exist_ok=True)
        out = build_sparsifier(g, cfg)
        write_triplets(os.path.join(args.dump_dir, "pi_tilde.txt"), out.pi_tilde)
        write_triplets(os.path.join(args.dump_dir, "l_tilde.txt"), out.l_tilde)
        write_pattern_weights(os.path.join(args.dump_dir, "wp.txt"), g, out.pattern_table.finalize())
    for stage, sec in result.timings.items():
        print(f"time.{stage}={sec:.3f}", file=sys.stderr)
    for key, val in result.stats.items():
        print(f"{key}={val}", file=sys.stderr)
    return EXIT_OK


def cmd_audit(args) -> int:
    from .oracle import audit_bounds

    cfg = _config(args)
    g = read_edge_list(args.edges)
    report = audit_bounds(g, cfg, runs=args.runs, cs=tuple(args.c_values))
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_AUDIT


def cmd_classify(args) -> int:
    from .evaluation import LabeledDataset, format_table, run_protocol
    from .io import read_embedding_tsv

    ids, vectors = read_embedding_tsv(args.embedding)
    index = {int(x): i for i, x in enumerate(ids)}
    label_sets = [set() for _ in ids]
    with open(args.labels) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            node = int(parts[0])
            if node not in index:
                raise GraphFormatError(f"{args.labels}:{lineno}: node {node} has no embedding")
            label_sets[index[node]].update(int(x) for x in parts[1:])
    ds, _ = LabeledDataset.from_label_sets(vectors, label_sets)
    rows = run_protocol(ds, ratios=args.ratios, trials=args.trials, seed=args.seed,
                        l2=args.l2, epochs=args.epochs)
    text = format_table(rows)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_generate(args) -> int:
    from .generators import generate_ba, generate_er

    try:
        if args.model == "er":
            if args.p is None:
                raise ConfigError("--p is required for ER graphs")
            g = generate_er(args.nodes, args.p, args.seed)
        else:
            if args.attach is None:
                raise ConfigError("--attach is required for BA graphs")
            g = generate_ba(args.nodes, args.attach, args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    write_edge_list(g, args.output)
    print(f"n={g.n} m={g.m}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"embed": cmd_embed, "audit": cmd_audit, "classify": cmd_classify, "generate": cmd_generate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"psne: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"psne: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except AssertionError as exc:
        print(f"psne: assertion failed: {exc}", file=sys.stderr)
        return EXIT_AUDIT


if __name__ == "__main__":
    sys.exit(main())
