"""Train a tiny corrector in-process and watch it fix sentences.

A handful of clean sentences are corrupted into (noisy, clean) pairs and a
small encoder-decoder memorizes the mapping.  Takes a few seconds on a
laptop CPU.

Run:  python3 demos/04_train_tiny.py
"""

from vsec.bpe import encode, train_bpe
from vsec.corruption import (CorruptionConfig, build_fusion_table, corrupt,
                             default_rules_path)
from vsec.model import Hyperparams
from vsec.model.training import train
from vsec.pipeline import correct

CLEAN = [
    "hôm nay trời đẹp",
    "tôi đi học muộn",
    "chúng tôi đi chơi công viên",
    "ngày mai trời nắng",
    "các bạn học bài chưa",
    "cô giáo giảng bài rất hay",
    "mẹ nấu cơm tối",
    "em bé đang ngủ",
]


def main():
    table = build_fusion_table(default_rules_path())
    cfg = CorruptionConfig(select_rate=0.3, seed=1)
    tok = train_bpe(CLEAN, 120)

    pairs = []
    rows = []
    for i, line in enumerate(CLEAN):
        for variant in range(8):
            rec = corrupt(line, table, cfg, index=i * 8 + variant)
            pairs.append((encode(rec.source.text, tok),
                          encode(rec.target.text, tok)))
            rows.append((rec.source.text, rec.target.text))

    h = Hyperparams(d_model=64, n_layers=1, n_heads=4, max_seq_len=32,
                    dropout=0.0, learning_rate=2e-3, batch_size=8)
    print(f"training on {len(pairs)} pairs ...")
    params, _, losses = train(pairs, len(tok), h, epochs=30, seed=0)
    print("epoch losses:", " ".join(f"{x:.2f}" for x in losses[::5]))

    print("\n== corrections ==")
    fixed = 0
    for noisy, clean in rows[:10]:
        res = correct(noisy, tok, params, preprocess=False)
        mark = "ok " if res.output == clean else "    "
        fixed += res.output == clean
        print(f"  {mark}{noisy!r} -> {res.output!r}")
    print(f"\nexact on {fixed}/10 shown (training pairs, so this is "
          "memorization, not generalization)")


if __name__ == "__main__":
    main()
