# graphlin/cli.py
import contextlib
import json
import logging
from fractions import Fraction
from typing import Iterator, List, Optional

import typer
from rich.console import Console
from rich.table import Table

from . import config
from .encodings import EncodingSpec, parse_specs
from .errors import GraphlinError, IllFormedError
from .formats import (
    SDP_HEADER,
    SourceFormat,
    open_text,
    read_corpus,
    read_labels,
    write_corpus,
    write_labels,
)
from .metrics import evaluate, evaluate_by, oracle_coverage, tagging_report
from .pipeline import decode_document, encode_document
from .stats import corpus_stats, vocab_stats
from .synth import generate_corpus

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, help="Dependency graphs as per-token label sequences, and back.")
console = Console()
err_console = Console(stderr=True)

FormatOpt = typer.Option(SourceFormat.SDP, "--format", "-f", help="Corpus format.")
JobsOpt = typer.Option(config.DEFAULT_JOBS, "--jobs", "-j", min=1, help="Worker processes.")
JsonOpt = typer.Option(False, "--json", help="Print the result as JSON.")


def pct(value: Fraction) -> str:
    return f"{float(value) * 100:.2f}"


@contextlib.contextmanager
def guard() -> Iterator[None]:
    """Map library errors to exit codes: 2 for strict ill-formedness, 1 otherwise."""
    try:
        yield
    except IllFormedError as e:
        logger.debug("strict decoding failed", exc_info=True)
        err_console.print(f"[red]error:[/red] {e}", markup=True, highlight=False)
        raise typer.Exit(code=2)
    except (GraphlinError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        err_console.print(f"[red]error:[/red] {e}", markup=True, highlight=False)
        raise typer.Exit(code=1)


@app.callback()
def main(verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v for INFO, -vv for DEBUG.")):
    config.setup_logging(verbose)


@app.command("encode")
def cmd_encode(
    input: str = typer.Argument(..., help="Corpus file, or - for stdin."),
    fmt: SourceFormat = FormatOpt,
    spec: str = typer.Option("b4", "--spec", "-s", help="Encoding, e.g. abs, rel, b:2, b4:3, b6:2."),
    output: str = typer.Option("-", "--output", "-o", help="Label file, or - for stdout."),
    keep_empty_nodes: bool = typer.Option(False, "--keep-empty-nodes", help="Fail on CoNLL-U empty nodes instead of skipping."),
    jobs: int = JobsOpt,
):
    """Write the label file of a corpus."""
    with guard():
        enc_spec = EncodingSpec.parse(spec)
        doc = read_corpus(input, fmt, keep_empty_nodes)
        labels = encode_document(doc, enc_spec, jobs)
        with open_text(output, "w") as fh:
            write_labels(fh, enc_spec, doc, labels)
        dropped = sum(s.coverage.dropped_arcs for s in labels)
        total = sum(s.coverage.total_arcs for s in labels)
        err_console.print(f"{enc_spec}: {len(labels)} sentence(s), dropped {dropped}/{total} arc(s)", highlight=False)


@app.command("decode")
def cmd_decode(
    labels: str = typer.Argument(..., help="Label file, or - for stdin."),
    fmt: SourceFormat = FormatOpt,
    strict: bool = typer.Option(False, "--strict", help="Fail on the first sequence that needs a repair."),
    output: str = typer.Option("-", "--output", "-o", help="Corpus file, or - for stdout."),
    jobs: int = JobsOpt,
):
    """Rebuild a corpus from a label file."""
    with guard():
        with open_text(labels) as fh:
            label_doc = read_labels(fh, labels)
        doc = decode_document(label_doc, strict=strict, jobs=jobs, source_format=fmt)
        write_corpus(output, doc, fmt)


@app.command("coverage")
def cmd_coverage(
    inputs: List[str] = typer.Argument(..., help="Corpus files."),
    fmt: SourceFormat = FormatOpt,
    spec: str = typer.Option("abs,rel,b:2,b:3,b4:2,b4:3,b6:2,b6:3", "--spec", "-s", help="Comma-separated encodings."),
    jobs: int = JobsOpt,
    as_json: bool = JsonOpt,
):
    """Oracle F-score (decode of encode against gold) per file and encoding."""
    with guard():
        specs = parse_specs(spec)
        rows = []
        for path in inputs:
            doc = read_corpus(path, fmt)
            for s in specs:
                rows.append((path, str(s), oracle_coverage(doc, s, jobs)))
        if as_json:
            typer.echo(json.dumps([{"file": p, "spec": s, **r.model_dump(mode="json")} for p, s, r in rows], indent=2))
            return
        table = Table(title="Oracle coverage")
        for col in ("file", "encoding", "UP", "UR", "OF", "LF", "UM"):
            table.add_column(col, justify="left" if col in ("file", "encoding") else "right")
        for path, s, r in rows:
            table.add_row(path, s, pct(r.up), pct(r.ur), pct(r.uf), pct(r.lf), pct(r.um))
        console.print(table)


@app.command("eval")
def cmd_eval(
    gold: str = typer.Argument(..., help="Gold corpus."),
    pred: str = typer.Argument(..., help="Predicted corpus."),
    fmt: SourceFormat = FormatOpt,
    macro: bool = typer.Option(False, "--macro", help="Also report per-sentence averages."),
    breakdown: Optional[str] = typer.Option(None, "--breakdown", help="Group scores by gold 'planes' or 'cycles'."),
    as_json: bool = JsonOpt,
):
    """UF / LF / UM / LM of a predicted corpus."""
    if breakdown is not None and breakdown not in ("planes", "cycles"):
        raise typer.BadParameter("must be 'planes' or 'cycles'", param_hint="--breakdown")
    with guard():
        gold_doc = read_corpus(gold, fmt)
        pred_doc = read_corpus(pred, fmt)
        results = {"all": evaluate(gold_doc, pred_doc, macro=macro)}
        if breakdown:
            results.update({f"{breakdown}={k}": v for k, v in evaluate_by(gold_doc, pred_doc, breakdown, macro).items()})
        if as_json:
            typer.echo(json.dumps({k: v.model_dump(mode="json") for k, v in results.items()}, indent=2))
            return
        table = Table(title=f"{pred} vs {gold}")
        cols = ["group", "sentences", "UP", "UR", "UF", "LP", "LR", "LF", "UM", "LM"]
        if macro:
            cols += ["macro UF", "macro LF"]
        for col in cols:
            table.add_column(col, justify="left" if col == "group" else "right")
        for name, r in results.items():
            row = [name, str(r.sentences)] + [pct(v) for v in (r.up, r.ur, r.uf, r.lp, r.lr, r.lf, r.um, r.lm)]
            if macro:
                row += [pct(r.macro_uf), pct(r.macro_lf)]
            table.add_row(*row)
        console.print(table)


@app.command("stats")
def cmd_stats(
    inputs: List[str] = typer.Argument(..., help="Corpus files (e.g. train, dev, test)."),
    fmt: SourceFormat = FormatOpt,
    spec: str = typer.Option("abs,rel,b:2,b:3,b4:2,b4:3,b6:2,b6:3", "--spec", "-s", help="Encodings for label counts."),
    oracle: bool = typer.Option(False, "--oracle", help="Also compute exact plane counts (sentences up to 7 tokens)."),
    jobs: int = JobsOpt,
    as_json: bool = JsonOpt,
):
    """Planarity, density and cycle statistics, plus label-space sizes."""
    with guard():
        specs = parse_specs(spec)
        docs = {path: read_corpus(path, fmt) for path in inputs}
        results = {path: (corpus_stats(doc, oracle=oracle), vocab_stats(doc, specs, jobs)) for path, doc in docs.items()}
        if as_json:
            payload = {
                path: {"corpus": cs.model_dump(mode="json"), "vocab": vs.model_dump(mode="json")}
                for path, (cs, vs) in results.items()
            }
            typer.echo(json.dumps(payload, indent=2))
            return
        max_planes = max([cs.max_planes for cs, _ in results.values()] + [1])
        table = Table(title="Treebank statistics")
        table.add_column("file")
        for col in ["sents", "h/n", "d/n", "arcs", "len", "cyc.sents", "cycles"] + [f"{k}p%" for k in range(1, max_planes + 1)]:
            table.add_column(col, justify="right")
        for path, (cs, _) in results.items():
            row = [
                path,
                str(cs.sentence_count),
                f"{float(cs.avg_in_degree):.2f}",
                f"{float(cs.avg_out_degree):.2f}",
                f"{float(cs.arcs_per_graph):.2f}",
                f"{float(cs.avg_length):.2f}",
                str(cs.cycle_sentences),
                str(cs.cycle_count),
            ]
            row += [pct(cs.plane_distribution.get(k, Fraction(0))) for k in range(1, max_planes + 1)]
            table.add_row(*row)
        console.print(table)
        if oracle:
            for path, (cs, _) in results.items():
                exact = ", ".join(f"{k}: {pct(v)}" for k, v in (cs.exact_plane_distribution or {}).items())
                console.print(f"{path}: exact planes (n <= 7) {exact or '-'}", highlight=False)

        vocab = Table(title="Labels / relations")
        vocab.add_column("file")
        for s in specs:
            vocab.add_column(str(s), justify="right")
        for path, (_, vs) in results.items():
            by_spec = vs.by_spec()
            vocab.add_row(path, *[f"{by_spec[str(s)].structural_labels}/{by_spec[str(s)].relations}" for s in specs])
        console.print(vocab)


@app.command("gen")
def cmd_gen(
    count: int = typer.Option(100, "--count", "-n", min=0, help="Number of sentences."),
    seed: int = typer.Option(0, "--seed", help="Random seed."),
    min_n: int = typer.Option(1, "--min-len", min=1),
    max_n: int = typer.Option(20, "--max-len", min=1),
    density: float = typer.Option(0.8, "--density", min=0.0, help="Token-to-token arcs per token."),
    rightward_bias: float = typer.Option(0.5, "--rightward-bias", min=0.0, max=1.0),
    cycles: bool = typer.Option(True, "--cycles/--no-cycles", help="Allow directed cycles."),
    root_prob: float = typer.Option(0.15, "--root-prob", min=0.0, max=1.0),
    trees: bool = typer.Option(False, "--trees", help="Projective single-rooted trees instead of graphs."),
    fmt: SourceFormat = FormatOpt,
    output: str = typer.Option("-", "--output", "-o"),
):
    """Write a synthetic corpus."""
    if max_n < min_n:
        raise typer.BadParameter("--max-len must not be below --min-len", param_hint="--max-len")
    with guard():
        doc = generate_corpus(
            count,
            seed=seed,
            min_n=min_n,
            max_n=max_n,
            density=density,
            rightward_bias=rightward_bias,
            allow_cycles=cycles,
            root_prob=root_prob,
            trees=trees,
        )
        if fmt == SourceFormat.SDP:
            doc = doc.model_copy(update={"header": SDP_HEADER})
        write_corpus(output, doc, fmt)


@app.command("tageval")
def cmd_tageval(
    gold: str = typer.Argument(..., help="Gold label file."),
    pred: str = typer.Argument(..., help="Predicted label file."),
    as_json: bool = JsonOpt,
):
    """Tag accuracy and share of well-formed predicted sequences."""
    with guard():
        with open_text(gold) as fh:
            gold_doc = read_labels(fh, gold)
        with open_text(pred) as fh:
            pred_doc = read_labels(fh, pred)
        result = tagging_report(gold_doc, pred_doc)
        if as_json:
            typer.echo(result.model_dump_json(indent=2))
            return
        table = Table(title=f"{pred_doc.spec} tagging")
        for col in ("sentences", "tokens", "tag acc", "rel acc", "well-formed"):
            table.add_column(col, justify="right")
        table.add_row(
            str(result.sentences),
            str(result.tokens),
            pct(result.tag_accuracy),
            pct(result.relation_accuracy),
            pct(result.well_formed),
        )
        console.print(table)
