"""The `jatecs` command line tool.

Subcommands operate on serialized index directories and model directories so
every pipeline stage is independently runnable and testable.  Exit codes:
0 success, 1 usage/config error, 2 data/parse error, 3 internal invariant
violation.  Given identical inputs, flags and seeds, every subcommand writes
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import weighting
from .corpus import read_category_file, read_corpus, documents_to_index
from .errors import InternalError, JatecsError, ParseError, ValidationError
from .evaluation import compare, measures, micro_macro
from .experiments import grid_search, kfold_evaluate, make_folds
from .index import deserialize_index, serialize_index
from .learners import load_classifier, make_learner, save_classifier, train
from .projection import build_projection, project, save_projection
from .quantification import (LogisticScaling, evaluate_quantification,
                             learn_quantifiers, quantify, true_prevalences,
                             QUANTIFIERS)
from .textproc import ExtractorConfig, english_stopwords
from .tsr import (apply_selection, per_category_rankings, rank_features,
                  select_round_robin)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

_FUNC_NAMES = {"ig": "IG", "chi2": "Chi2", "pmi": "PMI", "or": "OddsRatio"}
_KIND_NAMES = {"ri": "RandomIndexing", "lri": "LightweightRI",
               "achlioptas": "Achlioptas"}


class CliError(Exception):
    """Usage or configuration problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise CliError(message)


def _bool(value: str) -> bool:
    low = value.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise CliError(f"expected true/false, got {value!r}")


def _separator(value: str) -> str:
    if value == "\\t":
        return "\t"
    if len(value) != 1:
        raise CliError(f"separator must be a single character, got {value!r}")
    return value


# Option tables: (name, type, default, choices, help). All options take a
# value so the config-file merge treats every key uniformly.
_COMMON = [
    ("config", str, None, None, "config file of key=value lines"),
    ("threads", int, 0, None,
     "worker threads (0 = all cores); env JATECS_THREADS overrides"),
]

_READER_OPTS = [
    ("reader", str, "csv", ("libsvm", "csv", "arff"), "corpus format"),
    ("input", str, None, None, "corpus file"),
    ("categories", str, None, None, "category label file"),
    ("separator", _separator, "\t", None, "CSV field separator (\\t for tab)"),
]

_EXTRACTOR_OPTS = [
    ("extractor", str, "bow", ("bow", "chargrams", "set"), "feature extractor"),
    ("ngram", int, 3, None, "character n-gram size"),
    ("word-bounded", _bool, True, None, "n-grams within tokens (true/false)"),
    ("stoplist", str, "none", ("en", "none"), "stop word list"),
    ("stem", str, "none", ("en", "none"), "stemmer"),
]

_TSR_OPTS = [
    ("func", str, "ig", tuple(_FUNC_NAMES), "TSR scoring function"),
    ("policy", str, "rr", ("local", "max", "sum", "wavg", "rr"),
     "selection policy"),
    ("k", int, None, None, "number of features to keep"),
]

_WEIGHT_OPTS = [
    ("scheme", str, "tfidf", ("tfidf", "bm25"), "weighting scheme"),
    ("k1", float, weighting.DEFAULT_K1, None, "BM25 k1"),
    ("b", float, weighting.DEFAULT_B, None, "BM25 b"),
]

_LEARNER_OPTS = [
    ("learner", str, "nb", ("nb", "rocchio", "knn", "boost"), "learner kind"),
    ("param", "append", None, None,
     "learner hyperparameter as name=value (repeatable)"),
]

COMMANDS = {
    "index": _READER_OPTS + _EXTRACTOR_OPTS + [
        ("out", str, None, None, "output index directory")],
    "tsr": [("index", str, None, None, "input index directory"),
            ("out", str, None, None, "output index directory")] + _TSR_OPTS,
    "project": [
        ("index", str, None, None, "input index directory"),
        ("out", str, None, None, "output directory"),
        ("kind", str, "ri", tuple(_KIND_NAMES), "projection kind"),
        ("dim", int, None, None, "latent dimensionality"),
        ("nonzeros", int, 0, None, "nonzeros per index vector (0 = dim/100)"),
        ("seed", int, 0, None, "random seed"),
    ],
    "weight": [("index", str, None, None, "input index directory"),
               ("out", str, None, None, "output index directory")] + _WEIGHT_OPTS,
    "train": [("index", str, None, None, "training index directory"),
              ("out", str, None, None, "output model directory")] + _LEARNER_OPTS,
    "classify": [
        ("model", str, None, None, "model directory"),
        ("index", str, None, None, "index directory to classify"),
        ("out", str, "predictions.tsv", None, "predictions output file"),
    ],
    "eval": [
        ("pred", str, None, None, "predictions file (dID cID pairs)"),
        ("gold", str, None, None, "gold index directory"),
        ("out", str, "eval.tsv", None, "machine-readable results file"),
    ],
    "quantify": [
        ("train", str, None, None, "training index directory"),
        ("test", str, None, None, "test index directory"),
        ("folds", int, 50, None, "folds for rate estimation"),
        ("slope", float, 1.0, None, "logistic scaling slope"),
        ("out", str, "quantify.tsv", None, "report output file"),
    ] + _LEARNER_OPTS,
    "kfold": [
        ("index", str, None, None, "index directory"),
        ("k", int, 10, None, "number of folds"),
        ("mode", str, "simple", ("simple", "stratified"), "fold mode"),
        ("seed", int, 0, None, "shuffle seed"),
        ("out", str, "kfold.tsv", None, "results output file"),
    ] + _LEARNER_OPTS,
    "grid": [
        ("index", str, None, None, "index directory"),
        ("objective", str, "macrof1", ("macrof1", "microf1", "accuracy"),
         "selection objective"),
        ("k", int, 10, None, "number of folds"),
        ("mode", str, "simple", ("simple", "stratified"), "fold mode"),
        ("seed", int, 0, None, "shuffle seed"),
        ("out", str, "grid.tsv", None, "score table output file"),
    ] + _LEARNER_OPTS,
    "pipeline": (_READER_OPTS + _EXTRACTOR_OPTS + _TSR_OPTS + _WEIGHT_OPTS
                 + _LEARNER_OPTS + [
                     ("stages", str, "index,tsr,weight,train,classify,eval",
                      None, "comma-separated stage list"),
                     ("test-input", str, None, None,
                      "separate test corpus for classify/quantify stages"),
                     ("folds", int, 50, None, "quantify stage folds"),
                     ("slope", float, 1.0, None, "quantify scaling slope"),
                     ("seed", int, 0, None, "seed for seeded stages"),
                     ("out", str, None, None, "output root directory"),
                 ]),
}

_REQUIRED = {
    "index": ("input", "categories", "out"),
    "tsr": ("index", "out", "k"),
    "project": ("index", "out", "dim"),
    "weight": ("index", "out"),
    "train": ("index", "out"),
    "classify": ("model", "index"),
    "eval": ("pred", "gold"),
    "quantify": ("train", "test"),
    "kfold": ("index",),
    "grid": ("index", "param"),
    "pipeline": ("input", "categories", "out"),
}

_STAGE_ORDER = ("index", "tsr", "weight", "train", "classify", "eval",
                "quantify")


def build_parser() -> _Parser:
    parser = _Parser(prog="jatecs", description=__doc__)
    subparsers = parser.add_subparsers(dest="command")
    for command, options in COMMANDS.items():
        sub = subparsers.add_parser(command, description=f"jatecs {command}")
        for name, kind, default, choices, help_text in options + _COMMON:
            text = help_text
            if default not in (None, ""):
                text += f" (default: {default!r})"
            if kind == "append":
                sub.add_argument(f"--{name}", action="append", default=None,
                                 help=text)
            else:
                # defaults are injected after the config merge
                sub.add_argument(f"--{name}", type=str, default=None, help=text)
    return parser


def _load_config(path) -> dict:
    if not os.path.exists(path):
        raise CliError(f"config file not found: {path}")
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise CliError(f"{path}:{line_no}: expected key=value")
            values[key.strip()] = value.strip()
    return values


def _merge_options(command: str, args) -> dict:
    """defaults <- config file <- explicit flags, rightmost wins."""
    options = COMMANDS[command] + _COMMON
    spec = {name: (kind, default, choices)
            for name, kind, default, choices, _ in options}
    merged = {name.replace("-", "_"): spec[name][1] for name in spec}
    raw = vars(args)

    config_path = raw.get("config")
    if config_path is not None:
        config = _load_config(config_path)
        for key, value in config.items():
            if key not in spec:
                raise CliError(f"unknown config key {key!r} for '{command}'")
            kind, _, choices = spec[key]
            if kind == "append":
                raise CliError(f"config key {key!r} must be given on the "
                               "command line")
            merged[key.replace("-", "_")] = _convert(key, kind, choices, value)

    for key in spec:
        attr = key.replace("-", "_")
        value = raw.get(attr)
        if value is None:
            continue
        kind, _, choices = spec[key]
        if kind == "append":
            merged[attr] = list(value)
        else:
            merged[attr] = _convert(key, kind, choices, value)

    for key in _REQUIRED[command]:
        if merged.get(key.replace("-", "_")) is None:
            raise CliError(f"--{key} is required for '{command}'")
    return merged


def _convert(key, kind, choices, value):
    if kind is str:
        converted = value
    else:
        try:
            converted = kind(value)
        except (TypeError, ValueError):
            raise CliError(f"bad value {value!r} for --{key}") from None
    if choices is not None and converted not in choices:
        raise CliError(f"--{key} must be one of {', '.join(choices)}")
    return converted


def _threads(opts) -> int:
    env = os.environ.get("JATECS_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliError(f"bad JATECS_THREADS value {env!r}") from None
    n = opts.get("threads") or 0
    return n if n > 0 else (os.cpu_count() or 1)


def _require_file(path) -> str:
    if not os.path.isfile(path):
        raise ParseError(path, 0, "input file not found")
    return path


def _require_index_dir(path) -> str:
    if not os.path.isdir(path):
        raise ParseError(path, 0, "index directory not found")
    return path


def _extractor_config(opts) -> ExtractorConfig:
    stoplist = english_stopwords() if opts["stoplist"] == "en" else None
    stemmer = "EnglishPorter" if opts["stem"] == "en" else None
    if opts["extractor"] == "bow":
        return ExtractorConfig(kind="BOW", stoplist=stoplist, stemmer=stemmer)
    if opts["extractor"] == "chargrams":
        return ExtractorConfig(kind="CharNGram", ngram_size=opts["ngram"],
                               word_bounded=opts["word_bounded"],
                               stoplist=stoplist, stemmer=stemmer)
    children = (
        ExtractorConfig(kind="BOW", stoplist=stoplist, stemmer=stemmer),
        ExtractorConfig(kind="CharNGram", ngram_size=opts["ngram"],
                        word_bounded=opts["word_bounded"],
                        stoplist=stoplist, stemmer=stemmer),
    )
    return ExtractorConfig(kind="Set", children=children, namespacing=True)


def _parse_params(param_list) -> dict:
    params = {}
    for item in param_list or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise CliError(f"--param expects name=value, got {item!r}")
        params[key] = value
    return params


def _learner_from(opts):
    return make_learner(opts["learner"], **_parse_params(opts.get("param")))


def _write_tsv(path, rows) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write("\t".join(str(x) for x in row) + "\n")


# -- subcommands ----------------------------------------------------------------


def _build_index_from_opts(opts, input_path):
    _require_file(input_path)
    _require_file(opts["categories"])
    categories = read_category_file(opts["categories"])
    docs = read_corpus(opts["reader"], input_path, categories,
                       separator=opts["separator"])
    if not docs:
        print("warning: empty corpus, building an empty index",
              file=sys.stderr)
    return documents_to_index(docs, categories, _extractor_config(opts))


def cmd_index(opts) -> int:
    index = _build_index_from_opts(opts, opts["input"])
    serialize_index(index, opts["out"])
    nnz = sum(1 for _ in index.content_items())
    print(f"indexed D={index.num_documents} F={index.num_features} "
          f"C={index.num_categories} nnz={nnz} -> {opts['out']}")
    return EXIT_OK


def cmd_tsr(opts) -> int:
    index = deserialize_index(_require_index_dir(opts["index"]))
    func = _FUNC_NAMES[opts["func"]]
    k = opts["k"]
    if k < 1:
        raise CliError("--k must be >= 1")
    policy = opts["policy"]
    if policy == "rr":
        rankings = per_category_rankings(index, func)
        selected = select_round_robin(rankings, k)
        reduced = apply_selection(index, selected=selected)
    elif policy == "local":
        rankings = per_category_rankings(index, func)
        local = {ranking.scope: set(ranking.top(k)) for ranking in rankings}
        reduced = apply_selection(index, local=local)
    else:
        ranking = rank_features(index, func, policy=policy)
        reduced = apply_selection(index, selected=set(ranking.top(k)))
    serialize_index(reduced, opts["out"])
    print(f"selected F={reduced.num_features} of {index.num_features} "
          f"({opts['func']}/{policy}) -> {opts['out']}")
    return EXIT_OK


def cmd_project(opts) -> int:
    index = deserialize_index(_require_index_dir(opts["index"]))
    dim = opts["dim"]
    nonzeros = opts["nonzeros"] or max(1, round(dim * 0.01))
    model = build_projection(index, _KIND_NAMES[opts["kind"]], dim,
                             nonzeros=nonzeros, seed=opts["seed"])
    matrix = project(model, index)
    save_projection(model, matrix, opts["out"])
    print(f"projected D={index.num_documents} into dim={dim} "
          f"({opts['kind']}) -> {opts['out']}")
    return EXIT_OK


def cmd_weight(opts) -> int:
    index = deserialize_index(_require_index_dir(opts["index"]))
    if opts["scheme"] == "tfidf":
        weighted = weighting.tfidf_normalized(index)
    else:
        weighted = weighting.bm25(index, k1=opts["k1"], b=opts["b"])
    serialize_index(weighted, opts["out"])
    print(f"weighted ({opts['scheme']}) -> {opts['out']}")
    return EXIT_OK


def cmd_train(opts) -> int:
    index = deserialize_index(_require_index_dir(opts["index"]))
    classifier = train(_learner_from(opts), index)
    for message in classifier.warnings:
        print(f"warning: {message}", file=sys.stderr)
    save_classifier(classifier, opts["out"])
    print(f"trained {classifier.kind} on D={index.num_documents} "
          f"-> {opts['out']}")
    return EXIT_OK


def _scores_path(out_path: str) -> str:
    root, ext = os.path.splitext(out_path)
    return f"{root}-scores{ext or '.tsv'}"


def cmd_classify(opts) -> int:
    classifier = load_classifier(_require_index_dir(opts["model"]))
    index = deserialize_index(_require_index_dir(opts["index"]))
    pair_rows = []
    score_rows = []
    for d in range(index.num_documents):
        scores = classifier.score_document(index, d)
        for c, score in enumerate(scores):
            score_rows.append((d, c, repr(score)))
            if classifier.decide(c, score):
                pair_rows.append((d, c))
    _write_tsv(opts["out"], pair_rows)
    _write_tsv(_scores_path(opts["out"]), score_rows)
    print(f"classified D={index.num_documents} -> {opts['out']}")
    return EXIT_OK


def _read_predictions(path) -> dict:
    predictions: dict = {}
    with open(_require_file(path), "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(path, line_no, "expected dID<TAB>cID")
            try:
                d, c = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(path, line_no, "non-integer id") from None
            predictions.setdefault(d, []).append(c)
    return predictions


def _print_table(label, table):
    p, r, f1, acc = measures(table)
    print(label)
    print(f"tp = {table.tp}\ttn = {table.tn}\tfp = {table.fp}\tfn = {table.fn}")
    print(f"p = {p:.3f}\tr = {r:.3f}\tf1 = {f1:.3f}\tacc = {acc:.3f}")


def _eval_rows(index, table_set):
    rows = []
    for c in sorted(table_set.per_category):
        t = table_set.per_category[c]
        p, r, f1, acc = measures(t)
        rows.append((index.categories.name(c), t.tp, t.tn, t.fp, t.fn,
                     repr(p), repr(r), repr(f1), repr(acc)))
    g = table_set.global_table
    p, r, f1, acc = measures(g)
    rows.append(("GLOBAL", g.tp, g.tn, g.fp, g.fn,
                 repr(p), repr(r), repr(f1), repr(acc)))
    summary = micro_macro(table_set)
    rows.append(("MACRO", "", "", "", "", repr(summary["macroP"]),
                 repr(summary["macroR"]), repr(summary["macroF1"]),
                 repr(summary["macroAcc"])))
    return rows


def cmd_eval(opts) -> int:
    gold_index = deserialize_index(_require_index_dir(opts["gold"]))
    predictions = _read_predictions(opts["pred"])
    gold = {d: gold_index.document_categories(d)
            for d in range(gold_index.num_documents)}
    table_set = compare(predictions, gold, gold_index.num_documents,
                        gold_index.num_categories)
    for c in sorted(table_set.per_category):
        _print_table(f"category {gold_index.categories.name(c)}",
                     table_set.per_category[c])
    _print_table("Global results (micro-averaged evaluation)",
                 table_set.global_table)
    _write_tsv(opts["out"], _eval_rows(gold_index, table_set))
    return EXIT_OK


def cmd_quantify(opts) -> int:
    train_index = deserialize_index(_require_index_dir(opts["train"]))
    test_index = deserialize_index(_require_index_dir(opts["test"]))
    pool = learn_quantifiers(_learner_from(opts), train_index,
                             folds=opts["folds"],
                             scaling=LogisticScaling(slope=opts["slope"]))
    for message in pool.warnings:
        print(f"warning: {message}", file=sys.stderr)
    estimates = quantify(pool, test_index)
    truth = true_prevalences(test_index)
    report = evaluate_quantification(estimates, truth,
                                     test_index.num_documents)
    rows = []
    for c in sorted(truth):
        label = test_index.categories.name(c)
        for name in QUANTIFIERS:
            est = estimates.of(name, c)
            row = next(r for r in report.rows if r[0] == name and r[1] == c)
            rows.append((label, name, repr(est), repr(truth[c]),
                         repr(row[4]), repr(row[5]), repr(row[6])))
    _write_tsv(opts["out"], rows)
    for name in QUANTIFIERS:
        print(f"{name}: mean AE = {report.means[name]['AE']:.4f}")
    return EXIT_OK


def cmd_kfold(opts) -> int:
    index = deserialize_index(_require_index_dir(opts["index"]))
    plan = make_folds(index, opts["k"], mode=opts["mode"], seed=opts["seed"])
    table_set = kfold_evaluate(_learner_from(opts), index, plan,
                               threads=_threads(opts))
    _write_tsv(opts["out"], _eval_rows(index, table_set))
    summary = micro_macro(table_set)
    print(f"{opts['k']}-fold {opts['mode']}: microF1 = "
          f"{summary['microF1']:.4f} macroF1 = {summary['macroF1']:.4f}")
    return EXIT_OK


def cmd_grid(opts) -> int:
    index = deserialize_index(_require_index_dir(opts["index"]))
    grid = {}
    for name, value in _parse_params(opts.get("param")).items():
        grid[name] = [v for v in value.split(",") if v]
        if not grid[name]:
            raise CliError(f"empty value list for grid axis {name!r}")
    plan = make_folds(index, opts["k"], mode=opts["mode"], seed=opts["seed"])
    best, score_table = grid_search(opts["learner"], grid, index, plan,
                                    objective=opts["objective"],
                                    threads=_threads(opts))
    rows = []
    for params, score in score_table:
        spec = ",".join(f"{k}={v}" for k, v in params.items())
        rows.append((spec, repr(score)))
    _write_tsv(opts["out"], rows)
    best_spec = ",".join(f"{k}={v}" for k, v in best.items())
    print(f"best: {best_spec} ({opts['objective']})")
    return EXIT_OK


def cmd_pipeline(opts) -> int:
    stages = [s.strip() for s in opts["stages"].split(",") if s.strip()]
    if not stages:
        raise CliError("empty stage list")
    for stage in stages:
        if stage not in _STAGE_ORDER:
            raise CliError(f"unknown stage {stage!r}")
    positions = [_STAGE_ORDER.index(s) for s in stages]
    if positions != sorted(positions) or len(set(stages)) != len(stages):
        raise CliError(f"stages out of order: {','.join(stages)} "
                       f"(canonical order: {','.join(_STAGE_ORDER)})")
    if stages[0] != "index":
        raise CliError("the pipeline must start with the 'index' stage")
    if "classify" in stages and "train" not in stages:
        raise CliError("'classify' requires the 'train' stage")
    if "eval" in stages and "classify" not in stages:
        raise CliError("'eval' requires the 'classify' stage")

    root = opts["out"]
    os.makedirs(root, exist_ok=True)
    current_index_dir = None
    model_dir = None
    predictions_path = None

    for stage in stages:
        try:
            if stage == "index":
                index = _build_index_from_opts(opts, opts["input"])
                current_index_dir = os.path.join(root, "index")
                serialize_index(index, current_index_dir)
            elif stage == "tsr":
                stage_opts = dict(opts, index=current_index_dir,
                                  out=os.path.join(root, "tsr"))
                if stage_opts["k"] is None:
                    stage_opts["k"] = 500
                cmd_tsr(stage_opts)
                current_index_dir = stage_opts["out"]
            elif stage == "weight":
                stage_opts = dict(opts, index=current_index_dir,
                                  out=os.path.join(root, "weight"))
                cmd_weight(stage_opts)
                current_index_dir = stage_opts["out"]
            elif stage == "train":
                model_dir = os.path.join(root, "model")
                cmd_train(dict(opts, index=current_index_dir, out=model_dir))
            elif stage == "classify":
                target = _resolve_eval_index(opts, current_index_dir, root)
                predictions_path = os.path.join(root, "predictions.tsv")
                cmd_classify(dict(opts, model=model_dir, index=target,
                                  out=predictions_path))
            elif stage == "eval":
                target = _resolve_eval_index(opts, current_index_dir, root)
                cmd_eval(dict(opts, pred=predictions_path, gold=target,
                              out=os.path.join(root, "eval.tsv")))
            elif stage == "quantify":
                target = _resolve_eval_index(opts, current_index_dir, root)
                cmd_quantify(dict(opts, train=current_index_dir, test=target,
                                  out=os.path.join(root, "quantify.tsv")))
        except (CliError, JatecsError) as exc:
            message = f"stage '{stage}' failed: {exc}"
            if isinstance(exc, CliError):
                raise CliError(message) from exc
            if isinstance(exc, InternalError):
                raise InternalError(message) from exc
            raise ValidationError(message) from exc
    print(f"pipeline done: {','.join(stages)} -> {root}")
    return EXIT_OK


def _resolve_eval_index(opts, current_index_dir, root):
    """Classify/eval/quantify against --test-input when given, else the
    pipeline's own index (smoke-test mode)."""
    if opts.get("test_input") is None:
        return current_index_dir
    test_dir = os.path.join(root, "test-index")
    if not os.path.isdir(test_dir):
        index = _build_index_from_opts(opts, opts["test_input"])
        serialize_index(index, test_dir)
    return test_dir


_HANDLERS = {
    "index": cmd_index,
    "tsr": cmd_tsr,
    "project": cmd_project,
    "weight": cmd_weight,
    "train": cmd_train,
    "classify": cmd_classify,
    "eval": cmd_eval,
    "quantify": cmd_quantify,
    "kfold": cmd_kfold,
    "grid": cmd_grid,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return EXIT_USAGE
        opts = _merge_options(args.command, args)
        return _HANDLERS[args.command](opts)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except JatecsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
