"""Command line entry point: the full pipeline as subcommands.

One verb per pipeline stage: extract features, analyze a labeled corpus,
train and evaluate the voting ensemble, cluster an unlabeled corpus, predict
over an unlabeled corpus, spot-check flagged domains against a reputation
list, and generate synthetic corpora. All diagnostics go to stderr; data
outputs are CSV or .dsmodel files.

Exit codes: 0 success, 1 data/runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analytics, corpus, evaluate, reputation, synthetic
from .cluster import KMeans, cluster_feature_histogram, write_centroids_csv
from .config import (
    kmeans_params_from_config,
    load_config,
    member_params_from_config,
)
from .ensemble import MEMBER_KINDS, MajorityVoteEnsemble
from .features import FEATURE_NAMES, extract_features, read_feature_csv, write_feature_csv
from .model_io import ModelIOError, load_model, save_model

log = logging.getLogger("domainsift")

DEFAULT_SEED = 42


# ---------------------------------------------------------------------------
# corpus loading


@dataclass(slots=True)
class LoadedData:
    """A corpus reduced to its feature matrix, with aligned domain records."""

    records: list | None  # None when the input was already a feature CSV
    X: np.ndarray
    y: np.ndarray | None


def _sniff_format(path):
    with corpus.open_corpus_text(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if "\t" in line:
                return "census"
            head = [cell.strip().lower() for cell in line.split(",")]
            if head[: len(FEATURE_NAMES)] == list(FEATURE_NAMES):
                return "features"
            if "class" in head and ("host" in head or "domain" in head):
                return "labeled"
            return "domains"
    raise corpus.ParseError(f"{path}: file is empty")


def _load_data(path, mode, max_rows=None, allow_features=True):
    fmt = _sniff_format(path)
    log.info("input %s detected as %s corpus", path, fmt)
    if fmt == "features":
        if not allow_features:
            raise corpus.ParseError(
                f"{path} is a feature CSV; this command needs a domain corpus"
            )
        with corpus.open_corpus_text(path) as fh:
            X, y = read_feature_csv(fh)
        return LoadedData(records=None, X=X, y=y)

    with corpus.open_corpus_text(path) as fh:
        if fmt == "census":
            records, stats = corpus.parse_census_lines(fh, max_rows=max_rows, mode=mode)
        elif fmt == "labeled":
            records, stats = corpus.parse_labeled_csv(fh, mode=mode)
        else:
            records, stats = corpus.parse_domain_lines(fh, mode=mode, max_rows=max_rows)
    if fmt == "labeled" and max_rows is not None:
        records = records[:max_rows]
    records, conflicts = corpus.dedupe(records)
    log.info(
        "parsed %d rows: %d unique domains, %d skipped, %d label conflicts",
        stats.total_rows, len(records), stats.skipped_rows, len(conflicts),
    )
    if not records:
        raise corpus.ParseError(f"{path}: no usable rows")
    X, y = extract_features(records)
    return LoadedData(records=records, X=X, y=y)


def _require_labels(data, path):
    if data.y is None:
        raise corpus.ParseError(f"{path}: this command needs a fully labeled corpus")


# ---------------------------------------------------------------------------
# option resolution (CLI flag > config file > built-in default)


def _resolve(args, name, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return args.run_config.get(name, default)


def _prepare(args, mode_default="sld"):
    args.run_config = load_config(args.config) if getattr(args, "config", None) else {}
    resolved = {
        "mode": _resolve(args, "mode", mode_default),
        "seed": _resolve(args, "seed", DEFAULT_SEED),
        "max_rows": _resolve(args, "max_rows", None),
        "threads": _resolve(args, "threads", 1),
    }
    if hasattr(args, "test_fraction"):
        resolved["test_fraction"] = _resolve(args, "test_fraction", 0.3)
    if hasattr(args, "cv"):
        resolved["cv"] = _resolve(args, "cv", 0)
    if hasattr(args, "k"):
        resolved["k"] = _resolve(args, "k", 2)
    log.info("resolved options: %s", resolved)
    return resolved


def _out_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# subcommands


def cmd_extract(args):
    opt = _prepare(args, mode_default="sld")
    data = _load_data(args.in_path, opt["mode"], opt["max_rows"], allow_features=False)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_feature_csv(fh, data.X, data.y)
    log.info("wrote %d feature rows to %s", data.X.shape[0], args.out)
    return 0


def cmd_analyze(args):
    opt = _prepare(args, mode_default="sld")
    data = _load_data(args.in_path, opt["mode"], opt["max_rows"])
    _require_labels(data, args.in_path)
    out = _out_dir(args.out)

    report = analytics.summarize(data.X, data.y)
    with open(os.path.join(out, "summary.csv"), "w", encoding="utf-8", newline="") as fh:
        analytics.write_summary_csv(fh, report)

    table = analytics.correlation_table(data.X, data.y)
    with open(os.path.join(out, "correlation.csv"), "w", encoding="utf-8", newline="") as fh:
        analytics.write_correlation_csv(fh, table)

    for j, name in enumerate(FEATURE_NAMES):
        hist = analytics.histogram_pdf(data.X[:, j], data.y, feature_name=name)
        with open(os.path.join(out, f"hist_{name}.csv"), "w", encoding="utf-8", newline="") as fh:
            analytics.write_histogram_csv(fh, hist)

    print(analytics.format_correlation_table(table))
    log.info("analysis written to %s", out)
    return 0


def _build_ensemble(opt, args):
    return MajorityVoteEnsemble(
        seed=opt["seed"], member_params=member_params_from_config(args.run_config) or None
    )


def cmd_train(args):
    opt = _prepare(args, mode_default="sld")
    data = _load_data(args.in_path, opt["mode"], opt["max_rows"])
    _require_labels(data, args.in_path)
    model = _build_ensemble(opt, args).fit(data.X, data.y)
    meta = {
        "source": os.path.basename(args.in_path),
        "mode": opt["mode"],
        "seed": opt["seed"],
        "n_rows": int(data.X.shape[0]),
    }
    info = save_model(model, args.out, metadata=meta)
    log.info("saved ensemble (%d training rows) to %s", data.X.shape[0], args.out)
    print(f"{info['path']}  sha256:{info['payload_sha256'][:16]}  {info['bytes']} bytes")
    return 0


def _member_rows(model, X, y):
    predictors = [(name, lambda Z, n=name: model.member_predict(n, Z)) for name in MEMBER_KINDS]
    predictors.append(("ensemble", model.predict))
    return evaluate.evaluate_all(predictors, X, y)


def cmd_evaluate(args):
    opt = _prepare(args, mode_default="sld")
    data = _load_data(args.in_path, opt["mode"], opt["max_rows"])
    _require_labels(data, args.in_path)

    if opt["cv"]:
        results = _cross_validate_members(args, opt, data)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                evaluate.write_cv_csv(fh, results)
        for name, cv in results:
            print(
                f"{name}: accuracy {100 * cv.mean.accuracy:.1f}+-{100 * cv.std.accuracy:.1f}%"
                f"  f_score {cv.mean.f_score:.2f}+-{cv.std.f_score:.2f}"
            )
        return 0

    train_idx, test_idx = evaluate.stratified_split(
        data.y, test_fraction=opt["test_fraction"], seed=opt["seed"]
    )
    if args.model:
        model = load_model(args.model, expected_kind="ensemble")
    else:
        model = _build_ensemble(opt, args).fit(data.X[train_idx], data.y[train_idx])
    rows = _member_rows(model, data.X[test_idx], data.y[test_idx])
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            evaluate.write_report_csv(fh, rows)
    print(evaluate.format_report(rows))
    return 0


def _cross_validate_members(args, opt, data):
    n_folds = opt["cv"]
    per_name = {name: [] for name in (*MEMBER_KINDS, "ensemble")}
    for train_idx, test_idx in evaluate.stratified_kfold(data.y, n_folds, seed=opt["seed"]):
        model = _build_ensemble(opt, args).fit(data.X[train_idx], data.y[train_idx])
        for name, cm, m in _member_rows(model, data.X[test_idx], data.y[test_idx]):
            per_name[name].append(m)
    results = []
    for name, fold_metrics in per_name.items():
        table = np.array(
            [[m.accuracy, m.precision, m.recall, m.f_score] for m in fold_metrics]
        )
        results.append(
            (
                name,
                evaluate.CVResult(
                    fold_metrics=fold_metrics,
                    mean=evaluate.Metrics(*(float(v) for v in table.mean(axis=0))),
                    std=evaluate.Metrics(*(float(v) for v in table.std(axis=0))),
                ),
            )
        )
    return results


def cmd_cluster(args):
    opt = _prepare(args, mode_default="full")
    data = _load_data(args.in_path, opt["mode"], opt["max_rows"])
    model = KMeans(
        k=opt["k"], seed=opt["seed"], **kmeans_params_from_config(args.run_config)
    ).fit(data.X)
    out = _out_dir(args.out)
    with open(os.path.join(out, "centroids.csv"), "w", encoding="utf-8", newline="") as fh:
        write_centroids_csv(fh, model)
    for j, name in enumerate(FEATURE_NAMES):
        hist = cluster_feature_histogram(model, data.X, j)
        with open(os.path.join(out, f"hist_{name}.csv"), "w", encoding="utf-8", newline="") as fh:
            analytics.write_histogram_csv(fh, hist)
    if args.model_out:
        save_model(model, args.model_out, metadata={"source": os.path.basename(args.in_path)})
        log.info("saved cluster model to %s", args.model_out)
    sizes = ", ".join(
        f"cluster {c + 1}: {int(s)}" for c, s in enumerate(model.sizes_)
    )
    print(sizes)
    print(
        f"length centroids: {', '.join(f'{v:.4f}' for v in model.centroids_[:, 0])}"
    )
    print(f"inertia {model.inertia_:.2f} after {model.n_iter_} iterations")
    return 0


def _vote_matrix_chunked(model, X, threads):
    if threads <= 1 or X.shape[0] < 4096:
        return model.vote_matrix(X)
    bounds = np.linspace(0, X.shape[0], threads * 4 + 1, dtype=np.int64)
    chunks = [X[bounds[i] : bounds[i + 1]] for i in range(len(bounds) - 1) if bounds[i] < bounds[i + 1]]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(model.vote_matrix, chunks))
    return np.concatenate(parts, axis=0)


def cmd_predict(args):
    # slds, not full names: trained models saw sld features
    opt = _prepare(args, mode_default="sld")
    model = load_model(args.model, expected_kind="ensemble")
    data = _load_data(args.in_path, opt["mode"], opt["max_rows"], allow_features=False)
    votes = _vote_matrix_chunked(model, data.X, opt["threads"])
    labels = (2 * votes.sum(axis=1) > votes.shape[1]).astype(np.int64)
    names = model.member_names()

    out = _out_dir(args.out)
    with open(os.path.join(out, "predictions.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write("host,domain,prediction," + ",".join(f"vote_{n}" for n in names) + "\n")
        for i, rec in enumerate(data.records):
            vote_cells = ",".join(str(int(v)) for v in votes[i])
            fh.write(f"{rec.raw_host},{rec.domain_part},{int(labels[i])},{vote_cells}\n")
    with open(os.path.join(out, "flagged.txt"), "w", encoding="utf-8") as fh:
        for i, rec in enumerate(data.records):
            if labels[i] == 1:
                fh.write(rec.raw_host + "\n")
    for j, name in enumerate(FEATURE_NAMES):
        hist = analytics.histogram_pdf(data.X[:, j], labels, feature_name=name)
        with open(os.path.join(out, f"hist_{name}.csv"), "w", encoding="utf-8", newline="") as fh:
            analytics.write_histogram_csv(fh, hist)

    flagged = int(labels.sum())
    print(f"{flagged} of {labels.size} domains flagged as DGA ({100 * flagged / labels.size:.2f}%)")
    return 0


def cmd_reputation_check(args):
    opt = _prepare(args, mode_default="full")
    with corpus.open_corpus_text(args.in_path) as fh:
        domains = [line.strip() for line in fh if line.strip() and not line.startswith("#")]
    if opt["max_rows"] is not None:
        domains = domains[: opt["max_rows"]]
    provider = reputation.LocalListProvider.from_file(args.badlist)
    n = args.sample if args.sample is not None else len(domains)
    results = reputation.sample_and_check(domains, n, opt["seed"], provider)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            reputation.write_reputation_csv(fh, results)
    counts = {}
    for r in results:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    print(", ".join(f"{verdict}: {count}" for verdict, count in sorted(counts.items())))
    return 0


def cmd_generate(args):
    opt = _prepare(args, mode_default="sld")
    out = _out_dir(args.out)
    seed = opt["seed"]

    domains, labels = synthetic.generate_labeled_corpus(
        n_legit=args.n_legit, n_dga=args.n_dga, seed=seed
    )
    labeled_path = os.path.join(out, "labeled.csv")
    synthetic.write_labeled_csv(labeled_path, domains, labels)

    hosts, ips, truth = synthetic.generate_census(
        n=args.census_n, dga_fraction=args.dga_fraction, seed=seed + 1
    )
    census_path = os.path.join(out, "census.tsv.gz" if args.gzip else "census.tsv")
    synthetic.write_census_file(census_path, hosts, ips)
    truth_path = os.path.join(out, "census_truth.csv")
    synthetic.write_truth_csv(truth_path, hosts, truth)

    print(labeled_path)
    print(census_path)
    print(truth_path)
    log.info(
        "generated %d labeled domains and %d census rows (%d planted DGA)",
        len(domains), len(hosts), int(truth.sum()),
    )
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, *, out_required=True, out_help="output path"):
    sp.add_argument("--in", dest="in_path", required=True, help="input corpus path")
    sp.add_argument("--out", required=out_required, help=out_help)
    sp.add_argument("--mode", choices=("full", "sld"), help="domain normalization mode")
    sp.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    sp.add_argument("--max-rows", dest="max_rows", type=int, help="cap on corpus rows read")
    sp.add_argument("--threads", type=int, help="worker thread cap (default 1)")
    sp.add_argument("--config", help="key=value config file with option defaults")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="domainsift",
        description="Lexical DGA/typosquatting domain detection toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("extract", help="compute the 8 lexical features of a corpus")
    _add_common(sp, out_help="feature CSV to write")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("analyze", help="summary stats, histograms, correlation table")
    _add_common(sp, out_help="output directory for analysis CSVs")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("train", help="train the 5-member voting ensemble")
    _add_common(sp, out_help="model file to write (.dsmodel)")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("evaluate", help="train/test metrics for all classifiers")
    _add_common(sp, out_required=False, out_help="report CSV to write")
    sp.add_argument("--test-fraction", dest="test_fraction", type=float,
                    help="held-out fraction (default 0.3)")
    sp.add_argument("--cv", type=int, help="use k-fold cross-validation instead of a split")
    sp.add_argument("--model", help="evaluate an existing .dsmodel instead of training")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("cluster", help="k-means clustering of an unlabeled corpus")
    _add_common(sp, out_help="output directory for cluster CSVs")
    sp.add_argument("--k", type=int, help="number of clusters (default 2)")
    sp.add_argument("--model-out", dest="model_out", help="also save the cluster model here")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("predict", help="ensemble prediction over an unlabeled corpus")
    _add_common(sp, out_help="output directory for predictions")
    sp.add_argument("--model", required=True, help="trained ensemble .dsmodel")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("reputation-check", help="spot-check flagged domains against a bad-list")
    _add_common(sp, out_required=False, out_help="results CSV to write")
    sp.add_argument("--badlist", required=True, help="local bad-list file (one domain per line)")
    sp.add_argument("--sample", type=int, help="check a seeded sample of this size (default all)")
    sp.set_defaults(func=cmd_reputation_check)

    sp = sub.add_parser("generate", help="generate synthetic labeled + census corpora")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--seed", type=int, help=f"RNG seed (default {DEFAULT_SEED})")
    sp.add_argument("--n-legit", dest="n_legit", type=int, default=synthetic.DEFAULT_N_LEGIT)
    sp.add_argument("--n-dga", dest="n_dga", type=int, default=synthetic.DEFAULT_N_DGA)
    sp.add_argument("--census-n", dest="census_n", type=int, default=30_000)
    sp.add_argument("--dga-fraction", dest="dga_fraction", type=float, default=0.1)
    sp.add_argument("--gzip", action="store_true", help="gzip the census file")
    sp.add_argument("--config", help="key=value config file with option defaults")
    sp.set_defaults(func=cmd_generate)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(
        level=logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    try:
        return args.func(args) or 0
    except ModelIOError as exc:
        log.error("model error: %s", exc)
        return 1
    except (corpus.ParseError, corpus.DomainError) as exc:
        log.error("corpus error: %s", exc)
        return 1
    except (ValueError, OSError, RuntimeError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
