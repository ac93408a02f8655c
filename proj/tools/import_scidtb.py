#!/usr/bin/env python3
"""Convert a SciDTB checkout into ddparse corpus directories.

    import_scidtb.py SciDTB/dataset OUT

Reads train/ and test/gold/ (falling back to test/) and writes OUT/train and
OUT/test with one JSON document per .dep file. Sentence boundaries come from
the "<S>" markers SciDTB leaves at the end of sentence-final EDUs.
"""

import argparse
import json
import sys
from pathlib import Path

SENTENCE_MARK = "<S>"


def convert(path):
    with open(path, encoding="utf-8-sig") as f:
        units = json.load(f)["root"]
    units = sorted((u for u in units if u["id"] != 0), key=lambda u: u["id"])
    edus = []
    sentence = 1
    for u in units:
        text = u["text"].strip()
        final = text.endswith(SENTENCE_MARK)
        if final:
            text = text[: -len(SENTENCE_MARK)].strip()
        relation = u["relation"]
        if u["parent"] == 0 or relation in ("null", None):
            relation = "ROOT" if u["parent"] == 0 else ""
        edus.append(
            {
                "id": u["id"],
                "text": text,
                "parent": u["parent"],
                "relation": relation,
                "sentence": sentence,
                "ends_with_period": final and text.endswith((".", "?", "!")),
            }
        )
        if final:
            sentence += 1
    return {"doc_id": path.stem, "edus": edus}


def convert_split(src, dst):
    dst.mkdir(parents=True, exist_ok=True)
    files = sorted(src.glob("*.dep"))
    for path in files:
        doc = convert(path)
        with open(dst / f"{doc['doc_id']}.json", "w", encoding="utf-8") as f:
            json.dump(doc, f, ensure_ascii=False, indent=2)
            f.write("\n")
    return len(files)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("dataset", type=Path, help="SciDTB dataset directory")
    parser.add_argument("out", type=Path, help="output directory")
    args = parser.parse_args()

    test = args.dataset / "test" / "gold"
    if not test.is_dir():
        test = args.dataset / "test"
    for name, src in (("train", args.dataset / "train"), ("test", test)):
        if not src.is_dir():
            sys.exit(f"missing {src}")
        n = convert_split(src, args.out / name)
        print(f"{name}: {n} documents -> {args.out / name}")


if __name__ == "__main__":
    main()
