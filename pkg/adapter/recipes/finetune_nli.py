"""Fine-tune a sequence classifier on public NLI corpora, then predict.

Recipe only: this script needs a GPU, the transformers/datasets stack, and
hours of compute, so no test exercises it. It documents the intended path
from a base checkpoint to a predictions file:

    python recipes/finetune_nli.py --base bert-base-uncased \
        --out-dir runs/bert-nli --items gelp.items.jsonl \
        --preds preds.jsonl

Training data is SNLI plus MultiNLI (with an optional heuristic-targeted
augmentation split mixed in via --extra-jsonl, one
{"premise":..., "hypothesis":..., "label":...} per line). After training,
the saved checkpoint is run through the normal adapter path (hf:<out-dir>)
so the predictions file is identical in shape to any other backend's.
"""

import argparse
import sys


def parse_args(argv):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--base", required=True, help="base checkpoint name")
    parser.add_argument("--out-dir", required=True, help="where to save the tuned model")
    parser.add_argument("--items", help="items file to predict after training")
    parser.add_argument("--preds", help="predictions output path")
    parser.add_argument("--extra-jsonl", help="additional training pairs, JSONL")
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--lr", type=float, default=2e-5)
    parser.add_argument("--seed", type=int, default=0)
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv if argv is not None else sys.argv[1:])
    try:
        import datasets
        import torch  # noqa: F401  (Trainer needs it; fail fast if absent)
        import transformers
    except ImportError:
        print(
            "recipe requires torch, transformers, and datasets "
            "(pip install gelp-adapter[hf] datasets)",
            file=sys.stderr,
        )
        return 2

    transformers.set_seed(args.seed)
    tokenizer = transformers.AutoTokenizer.from_pretrained(args.base)
    model = transformers.AutoModelForSequenceClassification.from_pretrained(
        args.base, num_labels=3
    )

    snli = datasets.load_dataset("snli", split="train")
    mnli = datasets.load_dataset("multi_nli", split="train")
    train = datasets.concatenate_datasets(
        [snli.remove_columns([c for c in snli.column_names if c not in ("premise", "hypothesis", "label")]),
         mnli.remove_columns([c for c in mnli.column_names if c not in ("premise", "hypothesis", "label")])]
    ).filter(lambda row: row["label"] >= 0)
    if args.extra_jsonl:
        extra = datasets.load_dataset("json", data_files=args.extra_jsonl, split="train")
        train = datasets.concatenate_datasets([train, extra])

    def encode(batch):
        return tokenizer(batch["premise"], batch["hypothesis"], truncation=True)

    train = train.map(encode, batched=True)
    trainer = transformers.Trainer(
        model=model,
        args=transformers.TrainingArguments(
            output_dir=args.out_dir,
            num_train_epochs=args.epochs,
            per_device_train_batch_size=args.batch_size,
            learning_rate=args.lr,
            seed=args.seed,
            save_strategy="epoch",
            logging_steps=500,
        ),
        train_dataset=train,
        data_collator=transformers.DataCollatorWithPadding(tokenizer),
    )
    trainer.train()
    trainer.save_model(args.out_dir)
    tokenizer.save_pretrained(args.out_dir)

    if args.items and args.preds:
        from gelp_adapter.predict import predict_items

        count = predict_items(args.items, f"hf:{args.out_dir}", args.preds)
        print(f"wrote {count} predictions to {args.preds}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
