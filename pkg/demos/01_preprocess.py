"""Corpus cleanup walkthrough: noise, case, telex, tone marks, spacing.

Run:  python3 demos/01_preprocess.py
"""

from vsec.preprocess import Preprocessor
from vsec.lexicon import UnigramModel
from vsec.telex import standardize_marks, to_telex

SAMPLES = [
    "Homo nay trowif ddepj lamws!!! 😀",
    "Cuả ai thì trả lại cho người đó.",
    "Thời tiết hôm nay RẤT   đẹp...",
]


def main():
    print("== telex round trip ==")
    for word in ("của", "trường", "người", "việt", "đẹp"):
        raw = to_telex(word)
        back, ok = standardize_marks(raw)
        print(f"  {word!r:12} -> telex {raw!r:14} -> {back!r} ok={ok}")

    print("\n== tone mark placement ==")
    for style in ("new", "old"):
        pre = Preprocessor(tone_style=style)
        rendered = [pre.preprocess(w).text for w in ("hoaf", "khoer", "tuyr")]
        print(f"  {style:3} style: {rendered}")

    print("\n== cleanup passes ==")
    pre = Preprocessor()
    for line in SAMPLES:
        seq = pre.preprocess(line)
        print(f"  {line!r}\n    -> {seq.text!r}")

    print("\n== merged / split syllables ==")
    # Segmentation needs unigram evidence for the candidate pieces, which
    # ordinarily comes from a first pass over the training corpus.
    evidence = ["hôm nay trời đẹp", "hôm nay đi học", "các bạn ơi"] * 5
    pre = Preprocessor(unigram=UnigramModel.from_corpus(evidence))
    for line in ("homnay trời đẹp", "các b ạn ơi"):
        print(f"  {line!r} -> {pre.preprocess(line).text!r}")


if __name__ == "__main__":
    main()
