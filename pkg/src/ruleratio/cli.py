"""Command-line pipeline around the library.

Subcommands cover the full workflow: ``synth`` writes a reproducible
corpus, ``count`` builds the co-occurrence table, ``rank`` scores and
orders candidate rules, ``eval`` and ``curve`` measure a ranking
against reference pairs, ``tune`` sweeps an estimator's parameter,
``compare`` runs the paired significance test on a recall table, and
``verify-optimizer`` cross-checks the closed-form solver against
gradient descent.

Conventions: ``-`` means stdin/stdout; every file-producing command
drops a JSON manifest next to its output recording the exact options,
so a run can be reproduced from the artifact alone; usage problems,
missing inputs, and malformed files exit 2, runtime failures exit 1,
and failures are reported as a single ``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from importlib import metadata
from pathlib import Path
from typing import IO, Iterator, Optional, Sequence

import numpy as np

from .counts import count, count_slice, load_counts, merge_counts, save_counts
from .estimators import (
    AdditiveSmoothing,
    BetaPosterior,
    EstimatorSpec,
    FAMILIES,
    MaximumLikelihood,
    RegularizedRatio,
    ThresholdedRatio,
    score_all,
)
from .evaluation import (
    candidate_pairs,
    curve,
    precision_at,
    rank,
    read_ranked,
    read_truth,
    recall_at,
    resolve_truth,
    write_curve,
    write_ranked,
    write_truth,
)
from .objective import analytic_solution, numeric_minimizer, objective_gradient
from .stats import compare_systems, load_benchmark
from .synth import SynthConfig, config_to_dict, generate, load_config
from .transactions import (
    DomainLabel,
    ParseError,
    load_records,
    parse_records,
    read_domain_table,
    records_to_text,
    write_domain_table,
)
from .tuning import SearchConfig, load_outcome, save_outcome, spec_for, tune

_EXIT_OK = 0
_EXIT_RUNTIME = 1
_EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# small plumbing helpers


@contextmanager
def _text_in(path: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdin
        return
    with open(path, "r", encoding="utf-8", newline="") as fh:
        yield fh


@contextmanager
def _text_out(path: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        yield fh


def _tool_version() -> str:
    try:
        return metadata.version("ruleratio")
    except metadata.PackageNotFoundError:  # running from a source tree
        return "unversioned"


def _write_manifest(command: str, options: dict, dest: Path) -> None:
    manifest = {
        "format": 1,
        "command": command,
        "options": options,
        "tool": {"name": "ruleratio", "version": _tool_version()},
    }
    dest.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _options_of(args: argparse.Namespace) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func", "command")}


def _manifest_beside(args: argparse.Namespace, out: Optional[str]) -> None:
    """Manifest for single-file outputs; stdout outputs leave no artifact."""
    if out and out != "-":
        _write_manifest(args.command, _options_of(args), Path(out + ".manifest.json"))


def _labels_for_tokens(
    tokens: Sequence[str], table: dict[str, DomainLabel]
) -> list[DomainLabel]:
    return [table.get(tok, DomainLabel.OTHER) for tok in tokens]


def _estimator_from_args(args: argparse.Namespace) -> EstimatorSpec:
    if args.params:
        outcome = load_outcome(args.params)
        return spec_for(outcome.family, outcome.parameter, classes=args.classes)
    if not args.estimator:
        raise ValueError("either --estimator or --params is required")
    if args.estimator == "proposed":
        return RegularizedRatio(lam=args.lam)
    if args.estimator == "apriori":
        return ThresholdedRatio(theta=args.theta)
    if args.estimator == "additive":
        return AdditiveSmoothing(mu=args.mu, classes=args.classes)
    if args.estimator == "beta":
        return BetaPosterior(a=args.alpha, b=args.beta)
    return MaximumLikelihood()


def _add_estimator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--estimator",
        choices=sorted(FAMILIES),
        help="estimator family to score with",
    )
    p.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=1.0,
        metavar="L",
        help="ridge weight for --estimator proposed (default 1.0)",
    )
    p.add_argument(
        "--theta",
        type=int,
        default=0,
        help="count threshold for --estimator apriori (default 0)",
    )
    p.add_argument(
        "--mu",
        type=float,
        default=1.0,
        help="pseudo-count for --estimator additive (default 1.0)",
    )
    p.add_argument(
        "--classes",
        type=int,
        default=2,
        metavar="B",
        help="outcome classes for additive smoothing (default 2)",
    )
    p.add_argument(
        "--alpha", type=float, default=1.0, help="beta prior alpha (default 1.0)"
    )
    p.add_argument(
        "--beta", type=float, default=1.0, help="beta prior beta (default 1.0)"
    )
    p.add_argument(
        "--params",
        metavar="FILE",
        help="tuning outcome file; overrides --estimator and its parameter",
    )


def _grid_argument(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected numeric LO:HI:STEP, got {text!r}"
        ) from None
    return lo, hi, step


# ---------------------------------------------------------------------------
# subcommands


def _cmd_synth(args: argparse.Namespace) -> int:
    cfg = load_config(args.config) if args.config else SynthConfig()
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    db, truth, table = generate(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "records.txt").write_text(records_to_text(db), encoding="utf-8")
    write_domain_table(table, str(out / "domains.tsv"))
    write_truth(truth, out / "truth.tsv")
    options = _options_of(args)
    options["resolved_config"] = config_to_dict(cfg)
    _write_manifest(args.command, options, out / "manifest.json")
    return _EXIT_OK


def _cmd_count(args: argparse.Namespace) -> int:
    if args.records == "-":
        db = load_records(sys.stdin.buffer)
    else:
        db = load_records(args.records)
    if args.threads <= 1:
        result = count(db)
    else:
        n = db.n_records
        bounds = [(i * n) // args.threads for i in range(args.threads + 1)]
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            parts = list(
                pool.map(lambda se: count_slice(db, *se), zip(bounds, bounds[1:]))
            )
        result = parts[0]
        for part in parts[1:]:
            result = merge_counts(result, part)
    with _text_out(args.out) as fh:
        save_counts(result, fh)
    _manifest_beside(args, args.out)
    return _EXIT_OK


def _cmd_rank(args: argparse.Namespace) -> int:
    with _text_in(args.counts) as fh:
        counts = load_counts(fh)
    table = read_domain_table(args.domains)
    labels = _labels_for_tokens(counts.tokens, table)
    spec = _estimator_from_args(args)
    pairs = candidate_pairs(counts, labels)
    entries = rank(score_all(spec, counts, pairs), counts)
    with _text_out(args.out) as fh:
        write_ranked(entries, fh)
    _manifest_beside(args, args.out)
    return _EXIT_OK


def _eval_inputs(args: argparse.Namespace):
    with _text_in(args.ranked) as fh:
        entries = read_ranked(fh)
    with _text_in(args.counts) as fh:
        counts = load_counts(fh)
    truth = resolve_truth(read_truth(args.truth), counts)
    return entries, truth


def _cmd_eval(args: argparse.Namespace) -> int:
    entries, truth = _eval_inputs(args)
    ks = args.k
    if not ks and args.params:
        ks = [load_outcome(args.params).k]
    if not ks:
        ks = [1000, 4000, 12000]
    with _text_out(args.out) as fh:
        fh.write("k\trecall\tprecision\n")
        for k in ks:
            r = recall_at(entries, truth, k)
            p = precision_at(entries, truth, k)
            fh.write(f"{k}\t{r:.6f}\t{p:.6f}\n")
    _manifest_beside(args, args.out)
    return _EXIT_OK


def _cmd_curve(args: argparse.Namespace) -> int:
    entries, truth = _eval_inputs(args)
    c = curve(entries, truth, args.step)
    with _text_out(args.out) as fh:
        write_curve(c, fh)
    _manifest_beside(args, args.out)
    return _EXIT_OK


def _cmd_tune(args: argparse.Namespace) -> int:
    train = Path(args.train)
    table = read_domain_table(str(train / "domains.tsv"))
    db = load_records(str(train / "records.txt"), table)
    counts_ = count(db)
    truth_path = args.truth if args.truth else str(train / "truth.tsv")
    truth = read_truth(truth_path)
    lo, hi, step = args.grid
    search = SearchConfig(lo=lo, hi=hi, coarse=step, refine=args.refine)
    outcome = tune(
        args.estimator,
        counts_,
        db.labels,
        truth,
        k=args.k,
        search=search,
        classes=args.classes,
    )
    with _text_out(args.out) as fh:
        save_outcome(outcome, fh)
    _manifest_beside(args, args.out)
    return _EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    table = load_benchmark(args.fixture)
    result, a, b = compare_systems(table, args.system_a, args.system_b, args.k)
    with _text_out(args.out) as fh:
        fh.write(f"dataset\t{args.system_a}\t{args.system_b}\tdiff\n")
        for name, ra, rb in zip(table.datasets, a, b):
            fh.write(f"{name}\t{ra:.4f}\t{rb:.4f}\t{ra - rb:+.4f}\n")
        fh.write(f"t\t{result.t:.4f}\n")
        fh.write(f"dof\t{result.dof}\n")
        fh.write(f"p\t{result.p:.6g}\n")
    _manifest_beside(args, args.out)
    return _EXIT_OK


def _random_counts(rng: np.random.Generator):
    n_items = int(rng.integers(2, 9))
    n_records = int(rng.integers(1, 51))
    p = rng.uniform(0.1, 0.6)
    tokens = [f"i{k}" for k in range(n_items)]
    lines = []
    for _ in range(n_records):
        keep = rng.random(n_items) < p
        lines.append(" ".join(tok for tok, flag in zip(tokens, keep) if flag))
    return count(parse_records(lines))


def _cmd_verify_optimizer(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    lambdas = [float(v) for v in args.lambdas.split(",")]
    worst_gap = 0.0
    worst_grad = 0.0
    for _ in range(args.trials):
        counts_ = _random_counts(rng)
        for lam in lambdas:
            exact = analytic_solution(counts_, lam)
            descent = numeric_minimizer(counts_, lam, tol=args.tol)
            for key in exact.keys() | descent.keys():
                gap = abs(exact.get(key, 0.0) - descent.get(key, 0.0))
                worst_gap = max(worst_gap, gap)
            if exact:
                grad = objective_gradient(exact, counts_, lam)
                worst_grad = max(worst_grad, max(abs(g) for g in grad.values()))
    ok = worst_gap <= args.max_discrepancy
    print(f"trials\t{args.trials}")
    print(f"lambdas\t{args.lambdas}")
    print(f"max_discrepancy\t{worst_gap:.3e}")
    print(f"max_gradient_at_solution\t{worst_grad:.3e}")
    print(f"status\t{'ok' if ok else 'fail'}")
    return _EXIT_OK if ok else _EXIT_RUNTIME


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ruleratio",
        description="Score, rank, and evaluate two-item association rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "synth",
        help="generate a synthetic corpus with planted rules",
        description=(
            "Generate a reproducible synthetic corpus: writes records.txt, "
            "domains.tsv (token<TAB>label), truth.tsv (consequent<TAB>antecedent), "
            "and manifest.json into --out."
        ),
    )
    p.add_argument("--config", metavar="FILE", help="TOML config (flat scalar keys)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser(
        "count",
        help="build the co-occurrence count table",
        description=(
            "Count single items and unordered pairs over a records file "
            "(one record per line, whitespace-separated tokens) and write a "
            "versioned TSV count dump."
        ),
    )
    p.add_argument("--records", default="-", metavar="FILE", help="records file or -")
    p.add_argument("--out", default="-", metavar="FILE", help="counts file or -")
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="partition records and merge the partial counts (same result)",
    )
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser(
        "rank",
        help="score candidate rules and write the ranked list",
        description=(
            "Score every (consequent, antecedent) candidate from a counts dump "
            "and a domain table, then write rank<TAB>consequent<TAB>antecedent"
            "<TAB>score<TAB>cxy<TAB>cy with scores at 6 decimal places."
        ),
    )
    p.add_argument("--counts", required=True, metavar="FILE", help="counts dump or -")
    p.add_argument("--domains", required=True, metavar="FILE", help="token<TAB>label TSV")
    _add_estimator_flags(p)
    p.add_argument("--out", default="-", metavar="FILE", help="ranked TSV or -")
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser(
        "eval",
        help="recall and precision of a ranked list at chosen ranks",
        description=(
            "Read a ranked list and reference pairs and print "
            "k<TAB>recall<TAB>precision rows.  The recall denominator counts "
            "reference pairs whose two tokens both occur in the counted data."
        ),
    )
    p.add_argument("--ranked", default="-", metavar="FILE", help="ranked TSV or -")
    p.add_argument("--truth", required=True, metavar="FILE")
    p.add_argument(
        "--counts", required=True, metavar="FILE",
        help="counts dump or - (for the denominator)",
    )
    p.add_argument(
        "--k",
        type=int,
        action="append",
        default=[],
        metavar="K",
        help="evaluation rank; repeatable (default 1000, 4000, 12000)",
    )
    p.add_argument("--params", metavar="FILE", help="tuning outcome; supplies k when --k is absent")
    p.add_argument("--out", default="-", metavar="FILE")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser(
        "curve",
        help="recall/precision curve sampled every STEP ranks",
        description="Write a rank,recall,precision CSV sampled every --step ranks.",
    )
    p.add_argument("--ranked", default="-", metavar="FILE", help="ranked TSV or -")
    p.add_argument("--truth", required=True, metavar="FILE")
    p.add_argument("--counts", required=True, metavar="FILE", help="counts dump or -")
    p.add_argument("--step", type=int, default=100)
    p.add_argument("--out", default="-", metavar="FILE")
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser(
        "tune",
        help="pick an estimator parameter by recall at a fixed rank",
        description=(
            "Sweep the tunable parameter of one family on a training corpus "
            "directory (records.txt + domains.tsv, truth.tsv unless --truth) "
            "and write the winning parameter as a key-value outcome file."
        ),
    )
    p.add_argument(
        "--estimator", required=True, choices=("proposed", "apriori", "additive")
    )
    p.add_argument("--train", required=True, metavar="DIR", help="corpus directory")
    p.add_argument("--truth", metavar="FILE", help="default: DIR/truth.tsv")
    p.add_argument("--k", type=int, default=4000, help="tuning rank (default 4000)")
    p.add_argument(
        "--grid",
        type=_grid_argument,
        default=(0.0, 20.0, 0.25),
        metavar="LO:HI:STEP",
        help="coarse sweep range (default 0:20:0.25)",
    )
    p.add_argument("--refine", type=float, default=0.01, help="refinement spacing")
    p.add_argument("--classes", type=int, default=2, metavar="B")
    p.add_argument("--out", default="-", metavar="FILE", help="outcome file or -")
    p.set_defaults(func=_cmd_tune)

    p = sub.add_parser(
        "compare",
        help="one-sided paired t-test between two systems on a recall table",
        description=(
            "Run the one-sided paired t-test (alternative: first system is "
            "better) on a recall table CSV; defaults to the bundled benchmark."
        ),
    )
    p.add_argument("--fixture", metavar="FILE", help="recall table CSV (default: bundled)")
    p.add_argument("--k", type=int, default=4000, choices=(1000, 4000, 12000))
    p.add_argument("--system-a", default="proposed", metavar="NAME")
    p.add_argument("--system-b", default="apriori", metavar="NAME")
    p.add_argument("--out", default="-", metavar="FILE")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser(
        "verify-optimizer",
        help="cross-check the closed-form solver against gradient descent",
        description=(
            "Solve random small problems with both the closed form and "
            "projected gradient descent and report the worst disagreement; "
            "exits 1 if it exceeds --max-discrepancy."
        ),
    )
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lambdas", default="0.5,1,5", metavar="L1,L2,...")
    p.add_argument("--tol", type=float, default=1e-10, help="descent tolerance")
    p.add_argument("--max-discrepancy", type=float, default=1e-6)
    p.set_defaults(func=_cmd_verify_optimizer)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError, NotADirectoryError) as exc:
        _report(exc)
        return _EXIT_USAGE
    except ParseError as exc:
        _report(exc)
        return _EXIT_USAGE
    except (ValueError, RuntimeError, OSError) as exc:
        _report(exc)
        return _EXIT_RUNTIME


def _report(exc: BaseException) -> None:
    text = str(exc) or exc.__class__.__name__
    print(f"error: {text.splitlines()[0]}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
