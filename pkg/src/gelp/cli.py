"""Command line entry points.

Subcommands follow the pipeline: lexicon-check, seed, build, serve, score.
A --config file of flat key=value lines supplies defaults for any
subcommand option; explicit flags always win.
"""
from __future__ import annotations

import contextlib
import importlib.resources
import json
import sys
from pathlib import Path

import click

from . import __version__
from .expserver import ExperimentServer, serve as run_server
from .items import DatasetFormatError, read_items, read_lists
from .lexicon import Lexicon, LexiconError, LexiconValidationError, load_lexicon
from .listing import (
    ITEMS_FILENAME,
    LISTS_FILENAME,
    QUAL_FILENAME,
    BuildConfig,
    ListingError,
    assign_list_ids,
    build_dataset,
    build_qualification,
    partition_lists,
    write_dataset,
)
from .scoring import (
    DEFAULT_DIMENSIONS,
    ScoringError,
    build_report,
    collect_majorities,
    model_grid,
    read_predictions,
    read_responses,
    write_model_grid_tsv,
    write_plotdata,
    write_report_tsv,
)
from .seeder import (
    ApiConfig,
    SeederError,
    load_bank,
    revalidate_bank,
    seed_construction,
    write_bank,
    write_review_queue,
)


def _packaged(*parts: str):
    return importlib.resources.as_file(
        importlib.resources.files("gelp").joinpath("/".join(("data",) + parts))
    )


@contextlib.contextmanager
def _lexicon_path(option: str | None):
    if option is not None:
        yield Path(option)
        return
    with _packaged("lexicon", "sample_lexicon.tsv") as p:
        yield p


@contextlib.contextmanager
def _bank_path(option: str | None):
    if option is not None:
        yield Path(option)
        return
    with _packaged("bank", "sample_bank.jsonl") as p:
        yield p


def _read_config(path: str) -> dict[str, str]:
    cfg = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{line_no}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


@click.group()
@click.version_option(version=__version__, prog_name="gelp")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="File of key=value lines used as option defaults for subcommands.",
)
@click.pass_context
def main(ctx: click.Context, config_path: str | None):
    """Evaluation suite generator, annotation server, and scorer."""
    if config_path:
        cfg = _read_config(config_path)
        # config keys are flag names; default_map wants parameter names
        ctx.default_map = {
            name: _remap_flags(cmd, cfg) for name, cmd in main.commands.items()
        }


def _remap_flags(cmd: click.Command, cfg: dict[str, str]) -> dict[str, str]:
    names = {}
    for param in cmd.params:
        for opt in param.opts:
            if opt.startswith("--"):
                names[opt[2:].replace("-", "_")] = param.name
    return {names.get(key, key): value for key, value in cfg.items()}


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


@main.command("lexicon-check")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["sample", "strict"]), default="sample")
def lexicon_check(path: str, mode: str):
    """Validate a lexicon file and print a summary."""
    try:
        lex = load_lexicon(path, mode=mode)
    except LexiconValidationError as exc:
        click.echo(exc.report.summary(), err=True)
        raise _fail(exc)
    except LexiconError as exc:
        raise _fail(exc)
    from .lexicon import VERB_CLASSES

    n_verbs = sum(len(lex.verbs_in_class(c)) for c in VERB_CLASSES)
    click.echo(
        f"ok: {n_verbs} verbs, {len(lex.target_nouns('animate'))} animate "
        f"and {len(lex.target_nouns('inanimate'))} inanimate target nouns, "
        f"{len(lex.filler_nouns)} filler nouns"
    )


@main.command("seed")
@click.option("--lexicon", "lexicon_opt", type=click.Path(exists=True), default=None)
@click.option("--construction", "constructions", multiple=True, help="Repeatable; default all.")
@click.option("--endpoint", default=None, help="Chat completion endpoint for online seeding.")
@click.option("--model", default=None)
@click.option("--temperature", type=float, default=1.0, show_default=True)
@click.option(
    "--offline",
    is_flag=True,
    help="Re-validate an existing bank instead of calling an API.",
)
@click.option(
    "--bank",
    "bank_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Premise bank for --offline mode.",
)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--review-queue", "queue_path", type=click.Path(), default=None)
def seed(lexicon_opt, constructions, endpoint, model, temperature, offline, bank_path, out_path, queue_path):
    """Collect candidate premises and validate them against the lexicon."""
    from .constructions import CONSTRUCTIONS

    wanted = list(constructions) or list(CONSTRUCTIONS)
    unknown = [c for c in wanted if c not in CONSTRUCTIONS]
    if unknown:
        raise click.UsageError(f"unknown construction {unknown[0]!r}")
    if offline and bank_path is None:
        raise click.UsageError("--offline needs --bank")
    try:
        with _lexicon_path(lexicon_opt) as lp:
            lex = load_lexicon(lp)
        if offline:
            bank = load_bank(bank_path)
            candidates = revalidate_bank([c for c in bank if c.construction in wanted], lex)
        else:
            if not endpoint or not model:
                raise click.UsageError("online seeding needs --endpoint and --model")
            config = ApiConfig(endpoint_url=endpoint, model_name=model, temperature=temperature)
            candidates = []
            for construction in wanted:
                candidates.extend(seed_construction(construction, lex, config))
        write_bank(out_path, candidates)
        if queue_path:
            write_review_queue(queue_path, candidates)
    except (SeederError, LexiconError, DatasetFormatError) as exc:
        raise _fail(exc)
    counts = {"auto_accepted": 0, "needs_review": 0, "rejected": 0}
    for c in candidates:
        counts[c.review_status] += 1
    click.echo(
        f"wrote {len(candidates)} candidates to {out_path} "
        f"({counts['auto_accepted']} accepted, {counts['needs_review']} for review, "
        f"{counts['rejected']} rejected)"
    )


@main.command("build")
@click.option("--lexicon", "lexicon_opt", type=click.Path(exists=True), default=None)
@click.option("--bank", "bank_opt", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--seed", "master_seed", type=int, required=True, help="Master seed; same seed, same bytes.")
@click.option(
    "--label-mode",
    type=click.Choice(["logical", "table_faithful"]),
    default="logical",
    show_default=True,
)
@click.option("--premises-per-construction", type=int, default=80, show_default=True)
def build(lexicon_opt, bank_opt, out_dir, master_seed, label_mode, premises_per_construction):
    """Build the item set, the 160 lists, and the screening items."""
    config = BuildConfig(
        premises_per_construction=premises_per_construction, label_mode=label_mode
    )
    if premises_per_construction != 80:
        # distractor counts scale with the target count: equal totals,
        # one third two-proposition, two thirds three-proposition
        n_targets = premises_per_construction * 8 * 2 * 2 * 3
        config = BuildConfig(
            premises_per_construction=premises_per_construction,
            label_mode=label_mode,
            two_prop_distractors=n_targets // 3,
            three_prop_distractors=n_targets - n_targets // 3,
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        with _lexicon_path(lexicon_opt) as lp, _bank_path(bank_opt) as bp:
            lex = load_lexicon(lp)
            bank = load_bank(bp)
        items = build_dataset(lex, bank, config, master_seed)
        lists = partition_lists(items, master_seed)
        items = assign_list_ids(items, lists)
        items_path, lists_path = write_dataset(items, lists, out)
        qual = build_qualification(lex, bank, config, master_seed)
        from .items import write_jsonl

        qual_path = write_jsonl(out / QUAL_FILENAME, qual)
    except (ListingError, LexiconError, DatasetFormatError, SeederError) as exc:
        raise _fail(exc)
    click.echo(f"wrote {len(items)} items to {items_path}")
    click.echo(f"wrote {len(lists)} lists to {lists_path}")
    click.echo(f"wrote {len(qual)} screening items to {qual_path}")


@main.command("lists")
@click.option(
    "--items",
    "items_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="A built items file to re-partition.",
)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--seed", "master_seed", type=int, required=True)
def lists_cmd(items_path, out_dir, master_seed):
    """Partition an items file into counterbalanced lists."""
    from .items import write_jsonl

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        items = read_items(items_path)
        lists = partition_lists(items, master_seed)
        path = write_jsonl(
            out / LISTS_FILENAME,
            ({"list_id": l.list_id, "item_ids": list(l.item_ids)} for l in lists),
        )
    except (ListingError, DatasetFormatError) as exc:
        raise _fail(exc)
    click.echo(f"wrote {len(lists)} lists to {path}")


@main.command("serve")
@click.option("--items", "items_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--lists", "lists_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option(
    "--qual",
    "qual_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Screening items file; defaults to the one next to --items.",
)
@click.option("--log", "log_path", type=click.Path(), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--ui-dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--fsync/--no-fsync", default=True, show_default=True)
@click.option("--pending-ttl", type=float, default=24 * 3600.0, show_default=True)
def serve(items_path, lists_path, qual_path, log_path, host, port, ui_dir, fsync, pending_ttl):
    """Run the annotation server over a built dataset."""
    if qual_path is None:
        sibling = Path(items_path).parent / QUAL_FILENAME
        if not sibling.is_file():
            raise click.UsageError(
                f"no {QUAL_FILENAME} next to --items; pass --qual explicitly"
            )
        qual_path = sibling
    try:
        items = read_items(items_path)
        lists = read_lists(lists_path)
        qual = _read_qual(Path(qual_path))
        server = ExperimentServer(
            items, lists, qual, log_path, fsync=fsync, pending_ttl_s=pending_ttl
        )
    except (DatasetFormatError, OSError, ValueError) as exc:
        raise _fail(exc)
    click.echo(f"serving {len(lists)} lists on http://{host}:{port} (log: {log_path})")
    run_server(server, host=host, port=port, ui_dir=ui_dir)


def _read_qual(path: Path) -> list[dict]:
    qual = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            for fieldname in ("id", "premise", "question", "correct_answer"):
                if fieldname not in obj:
                    raise DatasetFormatError(
                        f"missing field {fieldname!r}", str(path), line_no
                    )
            qual.append(obj)
    return qual


@main.command("score")
@click.option("--items", "items_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option(
    "--responses",
    "responses_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Server event log or bare JSONL of response records.",
)
@click.option(
    "--preds",
    "preds_opt",
    multiple=True,
    help="Model predictions as PATH or NAME=PATH; repeat for a model grid.",
)
@click.option(
    "--by",
    "by_opt",
    default=",".join(DEFAULT_DIMENSIONS),
    show_default=True,
    help="Comma-separated breakdown dimensions; cross with '*'.",
)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".", show_default=True)
def score(items_path, responses_path, preds_opt, by_opt, out_dir):
    """Score responses: accuracy, plus matching when predictions are given."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dimensions = tuple(d.strip() for d in by_opt.split(",") if d.strip())
    try:
        items = {item.id: item for item in read_items(items_path)}
        responses = read_responses(responses_path)
        majorities = collect_majorities(responses)
        if not majorities:
            raise ScoringError("no items with a complete response set")
        named = []
        for spec_arg in preds_opt:
            name, sep, path = spec_arg.partition("=")
            if not sep:
                name, path = Path(spec_arg).stem, spec_arg
            named.append((name, read_predictions(path)))
        preds = named[0][1] if len(named) == 1 else None
        rows = build_report(majorities, items, predictions=preds, dimensions=dimensions)
        write_report_tsv(rows, out / "report.tsv")
        write_plotdata(rows, out / "plotdata.json")
        for metric, dimension, _group, sc in rows:
            if dimension == "overall":
                click.echo(f"{metric} {sc.value:.4f} (se {sc.se:.4f}, n {sc.n})")
        click.echo(f"report -> {out / 'report.tsv'}")
        if len(named) > 1:
            grid = model_grid(majorities, items, dict(named))
            write_model_grid_tsv(grid, out / "modelgrid.tsv")
            for model_name, metric, group, sc in grid:
                if group == "all" and metric == "matching":
                    click.echo(
                        f"matching[{model_name}] {sc.value:.4f} (se {sc.se:.4f}, n {sc.n})"
                    )
            click.echo(f"model grid -> {out / 'modelgrid.tsv'}")
    except (ScoringError, DatasetFormatError, OSError) as exc:
        raise _fail(exc)


if __name__ == "__main__":
    main()
