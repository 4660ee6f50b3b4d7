"""Command line interface: ``reduced-google {rank,reduce,friends,oracle}``.

Exit codes: 0 success, 2 usage, 3 input/parse, 4 convergence,
5 consistency, 6 oracle validation failure, 7 oracle size cap.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import io, oracle
from .errors import GraphParseError, ReducedGoogleError, ValidationError
from .graph import GoogleOperator, parse_edge_list, parse_labels, parse_subset, resolve_token
from .interaction import build_interaction_graph, top_followers, top_friends
from .ranking import cheirank, google_residual, local_indices, nondominated_front, pagerank
from .reduced import (
    SeriesTruncationWarning,
    max_rank_one_minor,
    projector_pagerank_cosine,
    reduce,
    reduced_pagerank_residual,
)

log = logging.getLogger("reduced_google")

EXIT_USAGE = 2
EXIT_IO = 3


@dataclass
class RunConfig:
    alpha: float = 0.85
    pagerank_tol: float = 1e-12
    pagerank_max_iter: int = 1000
    deflation_tol: float = 1e-12
    deflation_max_iter: int = 10000
    series_tol: float = 1e-12
    series_l_max: int = 10000
    top_k: int = 4
    seeds: list = field(default_factory=list)
    source: str = "gr"
    mode: str = "friends"
    surfer_steps: int = 1_000_000
    surfer_seed: int = 0
    oracle_tol: float = 1e-10
    edges: str | None = None
    labels: str | None = None
    subset: str | None = None
    groups: str | None = None
    decomposition: str | None = None
    output: str = "."

    def validate(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        for name in ("pagerank_tol", "deflation_tol", "series_tol", "oracle_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.source not in ("gr", "gqrnd", "grr"):
            raise ValueError("source must be gr, gqrnd or grr")
        if self.mode not in ("friends", "followers"):
            raise ValueError("mode must be friends or followers")

    def numeric(self):
        return {f.name: getattr(self, f.name) for f in fields(self)
                if isinstance(getattr(self, f.name), (int, float)) and not isinstance(getattr(self, f.name), bool)}


def _coerce(name, value):
    kind = {f.name: f.default for f in fields(RunConfig)}.get(name)
    if name == "seeds":
        if isinstance(value, str):
            return [s.strip() for s in value.split(",") if s.strip()]
        return list(value)
    if isinstance(kind, bool):
        return str(value).lower() in ("1", "true", "yes")
    if isinstance(kind, int):
        return int(float(value))
    if isinstance(kind, float):
        return float(value)
    return value


def read_config_file(path):
    """Flat ``key = value`` file (no section header)."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_string("[run]\n" + Path(path).read_text(encoding="utf-8"))
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for key, value in parser["run"].items():
        key = key.replace("-", "_")
        if key not in known:
            raise GraphParseError(f"{path}: unknown config key {key!r}")
        values[key] = value
    return values


def build_config(args):
    """Defaults < config file < command line flags."""
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig()
    for name, value in file_values.items():
        setattr(cfg, name, _coerce(name, value))
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, _coerce(f.name, value))
    cfg.validate()
    return cfg, file_values


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def load_inputs(cfg, need_subset=False):
    if not cfg.edges:
        raise GraphParseError("no edge list given (--edges)")
    labels = parse_labels(_read(cfg.labels)) if cfg.labels else None
    graph = parse_edge_list(_read(cfg.edges), labels)
    subset = parse_subset(_read(cfg.subset), graph) if cfg.subset else None
    if need_subset and subset is None:
        raise GraphParseError("a subset file is required (--subset)")
    return graph, subset


def _outdir(cfg):
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_rank(cfg):
    graph, subset = load_inputs(cfg)
    op = GoogleOperator(graph, cfg.alpha)
    p = pagerank(op, cfg.pagerank_tol, cfg.pagerank_max_iter)
    p_star = cheirank(graph, cfg.alpha, cfg.pagerank_tol, cfg.pagerank_max_iter)
    out = _outdir(cfg)
    io.write_rank_csv(out / "pagerank.csv", graph, p)
    io.write_rank_csv(out / "cheirank.csv", graph, p_star)
    written = ["pagerank.csv", "cheirank.csv"]
    if subset is not None:
        idx = local_indices(p, p_star, subset)
        io.write_local_indices(out / "local_indices.csv", subset, idx)
        io.write_local_indices(out / "nondominated.csv", subset, idx, nondominated_front(idx))
        written += ["local_indices.csv", "nondominated.csv"]
    log.info("pagerank: %d iterations, residual %.3e", p.iterations_used, p.final_residual)
    return written


def _decompose(cfg, graph, subset):
    op = GoogleOperator(graph, cfg.alpha)
    with warnings.catch_warnings():
        warnings.simplefilter("always", SeriesTruncationWarning)
        decomp = reduce(op, subset, cfg.deflation_tol, cfg.deflation_max_iter, cfg.series_tol, cfg.series_l_max)
    return op, decomp


def cmd_reduce(cfg, config_echo=None):
    graph, subset = load_inputs(cfg, need_subset=True)
    op, d = _decompose(cfg, graph, subset)
    p = pagerank(op, cfg.pagerank_tol, cfg.pagerank_max_iter)
    out = _outdir(cfg)
    labels = list(subset.labels)
    for name, m in d.matrices().items():
        io.write_matrix_csv(out / f"{name}.csv", m, labels)
    cosine = projector_pagerank_cosine(d, p)
    summary = {
        "subset": labels,
        "lambda_c": d.lambda_c,
        "weights": d.weights,
        "weight_sum": d.W_rr + d.W_pr + d.W_qr,
        "negative_weight": d.negative_weight,
        "series_terms_used": d.series_terms_used,
        "series_truncated": d.series_truncated,
        "deflation_iterations": list(d.deflation.iterations_used),
        "residuals": {
            "pagerank": google_residual(op, p.probabilities),
            "psi_R": d.deflation.residual_R,
            "psi_L": d.deflation.residual_L,
            "reduced_pagerank": reduced_pagerank_residual(d, p),
            "column_sum_max_deviation": float(np.abs(d.G_R.sum(axis=0) - 1.0).max()),
        },
        "projector_pagerank_cosine": {"min": float(cosine.min()), "mean": float(cosine.mean())},
        "config": {**cfg.numeric(), "seeds": list(cfg.seeds), "source": cfg.source, "mode": cfg.mode},
        "config_file": dict(config_echo or {}),
    }
    io.write_json(out / "summary.json", summary)
    return [f"{name}.csv" for name in d.matrices()] + ["summary.json"]


def _resolve_seeds(cfg, graph, subset):
    if not cfg.seeds:
        raise GraphParseError("no seeds given (--seeds)")
    lookup = graph.label_index()
    pos = {m: i for i, m in enumerate(subset.members)}
    seeds = []
    for token in cfg.seeds:
        node = resolve_token(token, lookup, graph.node_count)
        if node not in pos:
            raise GraphParseError(f"seed {token!r} is not in the subset")
        seeds.append(pos[node])
    return seeds


def _source_matrix(cfg, graph, subset):
    if cfg.decomposition:
        labels, m = io.read_matrix_csv(Path(cfg.decomposition) / f"{cfg.source}.csv")
        if labels != list(subset.labels):
            raise GraphParseError("decomposition labels do not match the subset")
        return m
    _, d = _decompose(cfg, graph, subset)
    return d.matrices()[cfg.source]


def friends_lists(M, seeds, k, mode, order):
    pick = top_friends if mode == "friends" else top_followers
    return {s: pick(M, s, k, order) for s in seeds}


def cmd_friends(cfg):
    graph, subset = load_inputs(cfg, need_subset=True)
    if not 1 <= cfg.top_k <= len(subset) - 1:
        raise ValueError(f"top_k must lie in [1, {len(subset) - 1}]")
    seeds = _resolve_seeds(cfg, graph, subset)
    M = _source_matrix(cfg, graph, subset)
    op = GoogleOperator(graph, cfg.alpha)
    p = pagerank(op, cfg.pagerank_tol, cfg.pagerank_max_iter)
    p_star = cheirank(graph, cfg.alpha, cfg.pagerank_tol, cfg.pagerank_max_iter)
    order = local_indices(p, p_star, subset).K
    labels = list(subset.labels)
    groups, colors = io.parse_groups(_read(cfg.groups)) if cfg.groups else ({}, {})

    out = _outdir(cfg)
    stem = f"{cfg.source}_{cfg.mode}"
    lists = friends_lists(M, seeds, cfg.top_k, cfg.mode, order)
    fh, w = io._writer(out / f"{stem}.csv")
    with fh:
        w.writerow(["seed", "rank", "member", "value"])
        for s, entries in lists.items():
            for r, (i, v) in enumerate(entries, start=1):
                w.writerow([labels[s], r, labels[i], io.fmt(v)])
    graph_i = build_interaction_graph(M, seeds, cfg.top_k, cfg.mode, order, cfg.source)
    (out / f"{stem}.dot").write_text(io.interaction_dot(graph_i, labels, groups, stem, colors), encoding="utf-8")
    io.write_json(out / f"{stem}.json", io.interaction_json(graph_i, labels))
    return [f"{stem}.csv", f"{stem}.dot", f"{stem}.json"]


def run_oracle_checks(cfg, graph, subset):
    """Compare every production path with the dense references.

    Returns a list of ``(name, passed, measured, threshold)``.
    """
    checks = []

    def check(name, value, limit):
        checks.append((name, bool(value <= limit), float(value), float(limit)))

    G = oracle.dense_google(graph, cfg.alpha)
    op = GoogleOperator(graph, cfg.alpha)
    p = pagerank(op, cfg.pagerank_tol, cfg.pagerank_max_iter)
    check("pagerank_vs_dense_eigenvector", np.abs(p.probabilities - oracle.dense_pagerank(G)).max(), 1e-10)

    mc = oracle.random_surfer(graph, cfg.alpha, cfg.surfer_steps, cfg.surfer_seed)
    pp = p.probabilities
    sigma = np.sqrt(pp * (1 - pp) / cfg.surfer_steps)
    check("surfer_max_deviation_in_std_errors", (np.abs(mc.probabilities - pp) / sigma).max(), 3.0)

    if subset is not None:
        ref = oracle.dense_reduced(G, subset)
        check("dense_reduced_column_sums", np.abs(ref.sum(axis=0) - 1).max(), 1e-12)
        if cfg.decomposition:
            labels, gr = io.read_matrix_csv(Path(cfg.decomposition) / "gr.csv")
            if labels != list(subset.labels):
                raise GraphParseError("decomposition labels do not match the subset")
            check("file_gr_vs_dense_inverse", np.abs(gr - ref).max(), cfg.oracle_tol)
        _, d = _decompose(cfg, graph, subset)
        check("deflated_vs_dense_inverse", np.abs(d.G_R - ref).max(), cfg.oracle_tol)
        check("gr_column_sums", np.abs(d.G_R.sum(axis=0) - 1).max(), 1e-10)
        check("gr_negative_entries", max(0.0, -d.G_R.min()), 1e-12)
        check("reduced_pagerank_residual", reduced_pagerank_residual(d, p), 1e-8)
        check("closure_rr_pr_qr", np.abs(d.G_rr + d.G_pr + d.G_qr - d.G_R).max(), 1e-13)
        check("weight_sum", abs(d.W_rr + d.W_pr + d.W_qr - 1), 1e-12)
        check("gpr_rank_one_minor", max_rank_one_minor(d.G_pr) / d.G_pr.max() ** 2, 1e-12)
        errs = []
        for l_max in (0, 1, 2, 4, 8, 16, 32, 64, 128, 256):
            errs.append(np.abs(oracle.dense_series_reduced(G, subset, l_max) - ref).max())
        check("raw_series_monotone_increase", max(0.0, float(np.max(np.diff(errs)))), 0.0)
    return checks


def cmd_oracle(cfg):
    graph, subset = load_inputs(cfg)
    checks = run_oracle_checks(cfg, graph, subset)
    out = _outdir(cfg)
    report = {
        "node_count": graph.node_count,
        "subset": list(subset.labels) if subset is not None else None,
        "surfer": {"seed": cfg.surfer_seed, "steps": cfg.surfer_steps},
        "checks": [{"name": n, "passed": ok, "measured": v, "threshold": t} for n, ok, v, t in checks],
        "passed": all(ok for _, ok, _, _ in checks),
    }
    io.write_json(out / "oracle_report.json", report)
    for name, ok, value, limit in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {value:.3e} (limit {limit:.1e})")
    if not report["passed"]:
        raise ValidationError("oracle validation failed")
    return ["oracle_report.json"]


COMMANDS = {"rank": cmd_rank, "reduce": cmd_reduce, "friends": cmd_friends, "oracle": cmd_oracle}


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--edges", help="edge list, one 'source target' per line")
    common.add_argument("--labels", help="id<TAB>label table")
    common.add_argument("--subset", help="one label or id per line")
    common.add_argument("-o", "--output", help="output directory")
    common.add_argument("--alpha", type=float)
    common.add_argument("--pagerank-tol", dest="pagerank_tol", type=float)
    common.add_argument("--pagerank-max-iter", dest="pagerank_max_iter", type=int)
    common.add_argument("--deflation-tol", dest="deflation_tol", type=float)
    common.add_argument("--deflation-max-iter", dest="deflation_max_iter", type=int)
    common.add_argument("--series-tol", dest="series_tol", type=float)
    common.add_argument("--series-l-max", dest="series_l_max", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="reduced-google", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rank", parents=[common], help="PageRank, CheiRank and local (K, K*) indices")
    sub.add_parser("reduce", parents=[common], help="reduced Google matrix and its components")
    p = sub.add_parser("friends", parents=[common], help="top-k friends/followers and closure graph")
    p.add_argument("--source", choices=["gr", "gqrnd", "grr"])
    p.add_argument("--mode", choices=["friends", "followers"])
    p.add_argument("--seeds", help="comma separated labels or ids")
    p.add_argument("-k", "--top-k", dest="top_k", type=int)
    p.add_argument("--groups", help="label<TAB>group file for node colors")
    p.add_argument("--decomposition", help="directory with matrices written by 'reduce'")
    p = sub.add_parser("oracle", parents=[common], help="validate against dense reference computations")
    p.add_argument("--surfer-steps", dest="surfer_steps", type=int)
    p.add_argument("--surfer-seed", dest="surfer_seed", type=int)
    p.add_argument("--oracle-tol", dest="oracle_tol", type=float)
    p.add_argument("--decomposition", help="also check gr.csv from this directory")
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg, file_values = build_config(args)
        if args.command == "reduce":
            written = cmd_reduce(cfg, file_values)
        else:
            written = COMMANDS[args.command](cfg)
    except ReducedGoogleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for name in written:
        log.info("wrote %s", Path(cfg.output) / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
