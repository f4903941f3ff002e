"""Command-line entry point.

Subcommands:
  audit     tokenize a parallel corpus with one or more engines and emit
            the fairness table
  geometry  audit embedding files for anisotropy / collapse / convergence
  train     train a parity-aware BPE vocabulary with language oversampling

Diagnostics go to stderr, report data to --out or stdout. Exit codes:
0 success, 1 error, 2 partial results under --allow-partial.
"""

from __future__ import annotations

import argparse
import datetime
import itertools
import json
import os
import sys

from . import __version__
from .corpus import parse_corpus, word_count
from .engines import (
    Cassette,
    LocalEngine,
    PretokenSpec,
    RemoteCounter,
    TokenizerId,
    load_bpe,
    load_unigram,
    save_bpe,
    train_bpe,
)
from .errors import TokParityError, ValidationError
from .geometry import association_probe, parse_embeddings, spectrum, subspace_convergence
from .metrics import aggregate, tokenize_corpus
from .report import AuditReport, emit_json, emit_markdown, emit_tsv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def parse_engine_spec(spec: str, pretokenizer: PretokenSpec):
    """Engine grammar: ``bpe:PATH``, ``unigram:PATH``, ``remote:provider/model``.

    Local specs may add ``=provider/model`` to label the report rows, e.g.
    ``bpe:o200k.tiktoken=openai/gpt-4.1``.
    """
    if ":" not in spec:
        raise ValidationError(f"bad engine spec {spec!r}: expected kind:target")
    kind, target = spec.split(":", 1)
    if kind == "remote":
        if "/" not in target:
            raise ValidationError(f"bad remote spec {spec!r}: expected provider/model")
        provider, model = target.split("/", 1)
        return TokenizerId(provider, model, "remote")
    if kind not in ("bpe", "unigram"):
        raise ValidationError(f"unknown engine kind {kind!r}")
    label = None
    if "=" in target:
        target, label = target.rsplit("=", 1)
    if label:
        if "/" not in label:
            raise ValidationError(f"bad engine label {label!r}: expected provider/model")
        provider, model = label.split("/", 1)
    else:
        provider = "local"
        model = os.path.splitext(os.path.basename(target))[0]
    if kind == "bpe":
        tid = TokenizerId(provider, model, "bpe_byte")
        return LocalEngine(tid, load_bpe(target, pretokenizer=pretokenizer))
    tid = TokenizerId(provider, model, "unigram")
    return LocalEngine(tid, load_unigram(target))


def cmd_audit(args) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        corpus = parse_corpus(fh.read(), name=os.path.basename(args.corpus))
    if args.pivot not in corpus.languages:
        raise ValidationError(f"pivot {args.pivot!r} not in corpus languages")
    pretokenizer = PretokenSpec(args.pretokenizer)
    cassette = Cassette(args.cassette) if args.cassette else None

    all_stats = []
    partial = False
    for spec in args.engine:
        handle = parse_engine_spec(spec, pretokenizer)
        if isinstance(handle, TokenizerId):  # remote
            handle = RemoteCounter(handle, cassette=cassette)
        results, failures = tokenize_corpus(
            corpus,
            handle,
            normalization=args.normalization,
            allow_partial=args.allow_partial,
            overhead=args.overhead,
        )
        if failures:
            partial = True
            for lang, row_id, err in failures:
                _log(f"warning: {spec} failed on ({lang}, row {row_id}): {err}")
        all_stats.extend(aggregate(results, corpus, args.pivot, handle.tokenizer))

    report = AuditReport(
        corpus_name=corpus.name,
        pivot=args.pivot,
        rows=tuple(all_stats),
        tool_version=__version__,
        timestamp=args.timestamp or _utc_now(),
    )
    _write_report(report, args)
    return EXIT_PARTIAL if partial else EXIT_OK


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def _write_report(report: AuditReport, args) -> None:
    if args.format == "tsv":
        text = emit_tsv(report, extended=args.extended)
    elif args.format == "json":
        text = emit_json(report)
    else:
        text = emit_markdown(report, extended=args.extended)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _log(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def cmd_geometry(args) -> int:
    sets = []
    for path in args.embeddings:
        with open(path, encoding="utf-8") as fh:
            sets.append(parse_embeddings(fh.read(), label=os.path.basename(path)))
    dims = {s.dim for s in sets}
    if len(dims) > 1:
        raise ValidationError(f"dimension mismatch across sets: {sorted(dims)}")

    doc: dict = {"sets": [], "convergence": [], "associations": []}
    for s in sets:
        rep = spectrum(s)
        doc["sets"].append(
            {
                "label": rep.label,
                "anisotropy": rep.anisotropy,
                "effective_rank": rep.effective_rank,
                "participation_ratio": rep.participation_ratio,
                "singular_values": list(rep.singular_values),
                "singular_values_uncentered": list(rep.singular_values_uncentered),
                "anisotropy_sample_seed": rep.anisotropy_sample_seed,
            }
        )
    for a, b in itertools.combinations(sets, 2):
        centroid_cos, angle_cos = subspace_convergence(a, b, args.k)
        doc["convergence"].append(
            {
                "a": a.label,
                "b": b.label,
                "k": args.k,
                "centroid_cosine": centroid_cos,
                "mean_principal_angle_cos": angle_cos,
            }
        )
    if args.probes:
        with open(args.probes, encoding="utf-8") as fh:
            probes = json.load(fh)
        by_label = {s.label: s for s in sets}
        for probe in probes:
            emb = by_label.get(probe.get("set"), sets[0])
            doc["associations"].append(
                {
                    **probe,
                    "association": association_probe(
                        emb, probe["target"], probe["pos"], probe["neg"]
                    ),
                }
            )
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _log(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_train(args) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        corpus = parse_corpus(fh.read(), name=os.path.basename(args.corpus))
    weights = {}
    for item in args.weights or []:
        if "=" not in item:
            raise ValidationError(f"bad weight {item!r}: expected lang=float")
        lang, value = item.split("=", 1)
        try:
            weights[lang] = float(value)
        except ValueError:
            raise ValidationError(f"bad weight value in {item!r}") from None
    for lang in corpus.languages:
        weights.setdefault(lang, 1.0)

    pretokenizer = PretokenSpec(args.pretokenizer)
    pivot = args.pivot if args.pivot in corpus.languages else corpus.languages[0]

    def fertility_table(model) -> dict[str, float]:
        engine = LocalEngine(TokenizerId("local", "trained", "bpe_byte"), model)
        results, _ = tokenize_corpus(corpus, engine)
        stats = aggregate(results, corpus, pivot, engine.tokenizer)
        return {s.lang: s.ratio_vs_pivot for s in stats}

    _log(f"training uniform baseline (vocab {args.vocab_size}) ...")
    baseline = train_bpe(corpus, args.vocab_size, {l: 1.0 for l in corpus.languages},
                         pretokenizer=pretokenizer)
    _log(f"training weighted model {weights} ...")
    model = train_bpe(corpus, args.vocab_size, weights, pretokenizer=pretokenizer)
    save_bpe(model, args.out)
    _log(f"wrote {args.out}")

    before, after = fertility_table(baseline), fertility_table(model)
    _log(f"ratio_vs_{pivot} before -> after (uniform -> weighted):")
    for lang in corpus.languages:
        _log(f"  {lang}: {before[lang]:.3f} -> {after[lang]:.3f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tokparity",
        description="Tokenization-parity and latent-space audit toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="tokenize a parallel corpus and report fairness stats")
    p.add_argument("--corpus", required=True)
    p.add_argument("--pivot", default="en")
    p.add_argument("--engine", action="append", required=True,
                   help="bpe:PATH[=provider/model] | unigram:PATH[=provider/model] | remote:provider/model")
    p.add_argument("--normalization", choices=["nfc", "none"], default="nfc")
    p.add_argument("--pretokenizer", choices=["none", "whitespace", "unicode-category"],
                   default="unicode-category")
    p.add_argument("--overhead", type=int, default=0,
                   help="constant per-row token overhead (special-token hypothesis testing)")
    p.add_argument("--format", choices=["tsv", "json", "md"], default="tsv")
    p.add_argument("--out", default=None)
    p.add_argument("--allow-partial", action="store_true")
    p.add_argument("--extended", action="store_true")
    p.add_argument("--cassette", default=None, help="remote-count cassette file")
    p.add_argument("--timestamp", default=None, help=argparse.SUPPRESS)  # test injection
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("geometry", help="audit embedding files")
    p.add_argument("embeddings", nargs="+")
    p.add_argument("--k", type=int, default=2, help="subspace dimension for convergence")
    p.add_argument("--probes", default=None,
                   help='JSON list of {"set", "target", "pos", "neg"} probes')
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("train", help="train a parity-aware BPE vocabulary")
    p.add_argument("--corpus", required=True)
    p.add_argument("--vocab-size", type=int, required=True)
    p.add_argument("--weights", action="append", default=[],
                   help="lang=float, repeatable; unlisted languages weigh 1.0")
    p.add_argument("--pivot", default="en")
    p.add_argument("--pretokenizer", choices=["none", "whitespace", "unicode-category"],
                   default="unicode-category")
    p.add_argument("--out", required=True, help="rank-vocabulary output path")
    p.set_defaults(func=cmd_train)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        _log(f"error: no such file: {exc.filename}")
        return EXIT_ERROR
    except TokParityError as exc:
        _log(f"error: {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
