"""Best-effort recipe: fine-tune only the classification head of a
sequence-pair model on labeled (claim, text, label) JSONL.

This script documents one workable configuration; it makes no fidelity
claims and is not exercised by any test suite. Requires the optional
transformer extra (torch + transformers).

Usage:
    python train_last_layer.py --checkpoint <hf-model> --train pairs.jsonl \
        --out ./finetuned [--epochs 3] [--lr 2e-4] [--batch-size 16]

Input records: {"claim": str, "text": str, "label": one of MISINFORMATION,
DEBUNK, IRRELEVANT}. The claim is encoded as the first segment and the text
as the second, the standard pair construction for BERT-style classifiers.
"""
import argparse
import json
import sys
from pathlib import Path

LABELS = ("MISINFORMATION", "DEBUNK", "IRRELEVANT")


def load_pairs(path):
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec["label"] not in LABELS:
            raise ValueError(f"label {rec['label']!r} outside the closed set")
        records.append((rec["claim"], rec["text"], LABELS.index(rec["label"])))
    if not records:
        raise ValueError(f"no records in {path}")
    return records


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--checkpoint", required=True)
    parser.add_argument("--train", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--lr", type=float, default=2e-4)
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    try:
        import torch
        from torch.utils.data import DataLoader
        from transformers import AutoModelForSequenceClassification, AutoTokenizer
    except ImportError as exc:
        print(f"error: transformer extra not installed ({exc})", file=sys.stderr)
        return 1

    torch.manual_seed(args.seed)
    records = load_pairs(args.train)
    tokenizer = AutoTokenizer.from_pretrained(args.checkpoint)
    model = AutoModelForSequenceClassification.from_pretrained(
        args.checkpoint,
        num_labels=len(LABELS),
        id2label=dict(enumerate(LABELS)),
        label2id={name: i for i, name in enumerate(LABELS)},
        ignore_mismatched_sizes=True,
    )

    # freeze everything except the classification head
    for param in model.parameters():
        param.requires_grad = False
    head = getattr(model, "classifier", None) or model.get_output_embeddings()
    for param in head.parameters():
        param.requires_grad = True

    def collate(batch):
        claims, texts, labels = zip(*batch)
        enc = tokenizer(list(claims), list(texts), padding=True, truncation=True, return_tensors="pt")
        enc["labels"] = torch.tensor(labels)
        return enc

    loader = DataLoader(records, batch_size=args.batch_size, shuffle=True, collate_fn=collate)
    optim = torch.optim.AdamW((p for p in model.parameters() if p.requires_grad), lr=args.lr)
    model.train()
    for epoch in range(args.epochs):
        total = 0.0
        for batch in loader:
            optim.zero_grad()
            loss = model(**batch).loss
            loss.backward()
            optim.step()
            total += float(loss)
        print(f"epoch {epoch}: mean loss {total / len(loader):.4f}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    print(f"saved to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
