"""Detection and correction scoring over token alignments.

Source and reference, and source and hypothesis, are each aligned with
minimum edit distance; the two alignments are then merged on source
positions into three-way columns.  Tie-breaking is fixed so scores are
reproducible: among equal-cost alignments we take the one whose operation
sequence is lexicographically smallest under substitution < deletion <
insertion, which a forward trace over suffix costs yields directly.
"""

import json
from dataclasses import dataclass, field


def align(src, other):
    """Columns (src_token | None, other_token | None) of a minimum-cost
    alignment; None marks a gap."""
    m, n = len(src), len(other)
    cost = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        cost[i][n] = m - i
    for j in range(n + 1):
        cost[m][j] = n - j
    for i in range(m - 1, -1, -1):
        for j in range(n - 1, -1, -1):
            sub = (src[i] != other[j]) + cost[i + 1][j + 1]
            dele = 1 + cost[i + 1][j]
            ins = 1 + cost[i][j + 1]
            cost[i][j] = min(sub, dele, ins)
    cols = []
    i = j = 0
    while i < m or j < n:
        if (i < m and j < n
                and cost[i][j] == (src[i] != other[j]) + cost[i + 1][j + 1]):
            cols.append((src[i], other[j]))
            i += 1
            j += 1
        elif i < m and cost[i][j] == 1 + cost[i + 1][j]:
            cols.append((src[i], None))
            i += 1
        else:
            cols.append((None, other[j]))
            j += 1
    return cols


def merge_on_source(src_ref, src_hyp):
    """Three-way columns (src, ref, hyp) from two pairwise alignments.

    Both alignments consume every source token once, so source-consuming
    columns pair up in order.  Insertion columns carry no source anchor;
    at each gap the reference insertions are emitted before the hypothesis
    ones.
    """
    cols = []
    a = b = 0
    while a < len(src_ref) or b < len(src_hyp):
        if a < len(src_ref) and src_ref[a][0] is None:
            cols.append((None, src_ref[a][1], None))
            a += 1
        elif b < len(src_hyp) and src_hyp[b][0] is None:
            cols.append((None, None, src_hyp[b][1]))
            b += 1
        else:
            s, r = src_ref[a]
            s2, h = src_hyp[b]
            if s != s2:
                raise AssertionError("alignments disagree on source tokens")
            cols.append((s, r, h))
            a += 1
            b += 1
    return cols


def sentence_columns(src, ref, hyp):
    return merge_on_source(align(src, ref), align(src, hyp))


@dataclass
class Counts:
    actual: int = 0          # src differs from ref
    detected: int = 0        # hyp differs from src
    true_detected: int = 0   # both of the above
    true_corrected: int = 0  # hyp differs from src and equals ref
    columns: int = 0
    sentences: int = 0

    def add_columns(self, cols):
        self.sentences += 1
        for s, r, h in cols:
            self.columns += 1
            err = s != r
            det = h != s
            self.actual += err
            self.detected += det
            self.true_detected += err and det
            self.true_corrected += det and h == r

    def to_dict(self):
        return {"actual": self.actual, "detected": self.detected,
                "true_detected": self.true_detected,
                "true_corrected": self.true_corrected,
                "columns": self.columns, "sentences": self.sentences}


def _ratio(num, den):
    # An empty denominator means nothing could have gone wrong: vacuously 1.
    return num / den if den else 1.0


def _f1(p, r):
    return 2.0 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class MetricsReport:
    dp: float
    dr: float
    df: float
    cp: float
    cr: float
    cf: float
    counts: Counts = field(compare=False)

    @classmethod
    def from_counts(cls, c):
        dp = _ratio(c.true_detected, c.detected)
        dr = _ratio(c.true_detected, c.actual)
        cp = _ratio(c.true_corrected, c.detected)
        cr = _ratio(c.true_corrected, c.actual)
        return cls(dp=dp, dr=dr, df=_f1(dp, dr),
                   cp=cp, cr=cr, cf=_f1(cp, cr), counts=c)

    def to_dict(self):
        return {"dp": self.dp, "dr": self.dr, "df": self.df,
                "cp": self.cp, "cr": self.cr, "cf": self.cf,
                "counts": self.counts.to_dict()}


def evaluate(rows):
    """Scores rows carrying "text" (noisy), "predict" and "correct" keys."""
    counts = Counts()
    for row in rows:
        cols = sentence_columns(row["text"].split(),
                                row["correct"].split(),
                                row["predict"].split())
        counts.add_columns(cols)
    return MetricsReport.from_counts(counts)


def evaluate_file(path):
    def rows():
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                    for key in ("text", "predict", "correct"):
                        if key not in row:
                            raise KeyError(key)
                except (json.JSONDecodeError, KeyError) as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from exc
                yield row
    return evaluate(rows())


def write_report(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
