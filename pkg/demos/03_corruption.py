"""Synthetic error generation: confusion candidates, corruption, replay.

Run:  python3 demos/03_corruption.py
"""

from vsec.corruption import (CorruptionConfig, build_fusion_table, corrupt,
                             default_rules_path, replay)


def main():
    table = build_fusion_table(default_rules_path())

    print("== confusion candidates ==")
    for syl in ("sẵn", "trời", "nửa", "dờ"):
        cands = table.candidates(syl)
        shown = ", ".join(cands[:8]) + (" ..." if len(cands) > 8 else "")
        print(f"  {syl!r}: {len(cands):3d} candidates [{shown}]")

    print("\n== corrupting a sentence ==")
    clean = "hôm nay trời đẹp chúng tôi đi chơi công viên"
    cfg = CorruptionConfig(select_rate=0.4, seed=7)
    for index in range(3):
        rec = corrupt(clean, table, cfg, index=index)
        print(f"  variant {index}: {rec.source.text!r}")
        for e in rec.edits:
            print(f"    {e.op:9s} at {e.target_index}: "
                  f"{e.original!r} -> {e.produced!r}")

    print("\n== edits replay exactly ==")
    rec = corrupt(clean, table, cfg, index=0)
    print(f"  clean    : {rec.target.text!r}")
    print(f"  corrupted: {rec.source.text!r}")
    print(f"  replay(target, edits) == source: "
          f"{replay(rec.target, rec.edits) == rec.source}")


if __name__ == "__main__":
    main()
