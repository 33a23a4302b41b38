"""Train the bundled POS model on the full mini-treebank (5 epochs, seed 42)
and freeze it under src/hatetriage/data/. Deterministic: rerunning
reproduces the model file byte for byte."""

import pathlib

from hatetriage.postag import parse_conll, save_model, train_tagger

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "hatetriage" / "data"


def main():
    sentences = parse_conll((DATA / "mini_treebank.conll").read_text(encoding="utf-8"))
    model = train_tagger(sentences, epochs=5, seed=42)
    out = DATA / "pos_model.txt"
    out.write_bytes(save_model(model))
    print(f"wrote {out} ({out.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
