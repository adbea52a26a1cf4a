"""Subword tokenizer walkthrough: merge learning, encoding, round trip.

Run:  python3 demos/02_tokenizer.py
"""

from vsec.bpe import N_SPECIALS, decode, encode, train_bpe

CORPUS = [
    "hôm nay trời đẹp",
    "hôm nay tôi đi học",
    "trời hôm nay nắng đẹp",
    "tôi thích đi học",
    "ngày mai trời nắng",
]


def main():
    print("== the classic two-word corpus ==")
    tiny = train_bpe(["ate at"], 4)
    for step, m in enumerate(tiny.merges, start=1):
        print(f"  merge {step}: ({m.left!r}, {m.right!r}) -> {m.left + m.right!r}")
    print(f"  content vocab: {len(tiny) - N_SPECIALS} tokens")

    print("\n== a slightly real corpus ==")
    model = train_bpe(CORPUS, 30)
    print(f"  mode={model.mode} merges={len(model.merges)} vocab={len(model)}")
    sentence = "hôm nay tôi đi học"
    ids = encode(sentence, model)
    pieces = [model.token_of(i) for i in ids]
    print(f"  {sentence!r}")
    print(f"  ids    : {ids}")
    print(f"  pieces : {pieces}")
    print(f"  decoded: {decode(ids, model).text!r}")

    print("\n== unknown syllables fall back to the unknown token ==")
    ids = encode("zzz", model)
    print(f"  'zzz' -> {ids} -> {list(decode(ids, model))}")


if __name__ == "__main__":
    main()
