"""Command line entry point: gelp-adapter predict."""

import click

from .classifiers import ClassifierError
from .predict import ItemsFormatError, predict_items


@click.group()
def main():
    """Model predictions for entailment item files."""


@main.command("predict")
@click.option(
    "--items",
    "items_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
)
@click.option(
    "--model",
    "model_ref",
    required=True,
    help="stub:<label>, stub:cycle:<l1,l2,...>, overlap, or hf:<name>.",
)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.option("--batch-size", type=int, default=32, show_default=True)
def predict(items_path, model_ref, out_path, batch_size):
    """Write one prediction per target item in the items file."""
    try:
        count = predict_items(items_path, model_ref, out_path, batch_size=batch_size)
    except (ItemsFormatError, ClassifierError, OSError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {count} predictions to {out_path}")


if __name__ == "__main__":
    main()
