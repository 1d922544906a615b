"""Reference text-generation metrics and corpus statistics.

BLEU-4: geometric mean of modified n-gram precisions (n=1..4) with brevity
penalty. A precision with zero clipped matches (or no n-grams at all) is
smoothed to EPSILON / max(total, 1) so short or disjoint candidates score
near zero instead of failing. ROUGE-L: LCS-based F-measure with beta^2 = 1.2.
Both return scores on the 0..100 scale.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable

from artdesc.corpus import MaskedSentence, TopicLabel
from artdesc.errors import DataError

BLEU_EPSILON = 1e-9
ROUGE_BETA_SQ = 1.2


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu4(candidate: list[str], references: list[list[str]]) -> float:
    """Corpus-standard sentence BLEU-4 against one or more references."""
    if not candidate:
        raise DataError("bleu4: empty candidate")
    if not references or any(not r for r in references):
        raise DataError("bleu4: references must be non-empty")

    log_precisions = 0.0
    for n in range(1, 5):
        cand_counts = _ngrams(candidate, n)
        total = sum(cand_counts.values())
        clipped = 0
        if total:
            max_ref = Counter()
            for ref in references:
                for gram, count in _ngrams(ref, n).items():
                    if count > max_ref[gram]:
                        max_ref[gram] = count
            clipped = sum(min(count, max_ref[gram]) for gram, count in cand_counts.items())
        if clipped > 0:
            precision = clipped / total
        else:
            precision = BLEU_EPSILON / max(total, 1)
        log_precisions += math.log(precision)

    c = len(candidate)
    # effective reference length: closest to the candidate, shorter on ties
    r = min((abs(len(ref) - c), len(ref)) for ref in references)[1]
    brevity = 1.0 if c > r else math.exp(1.0 - r / c)
    return 100.0 * brevity * math.exp(log_precisions / 4.0)


def _lcs_length(a: list[str], b: list[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: list[str], reference: list[str]) -> float:
    """LCS F-measure with beta^2 = 1.2."""
    if not candidate or not reference:
        raise DataError("rouge_l: empty input")
    lcs = _lcs_length(candidate, reference)
    if lcs == 0:
        return 0.0
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    f = ((1.0 + ROUGE_BETA_SQ) * precision * recall) / (recall + ROUGE_BETA_SQ * precision)
    return 100.0 * f


def slot_ratio(sentences: Iterable[MaskedSentence]) -> dict[TopicLabel, float]:
    """Mean slots per sentence by topic; topics with no sentences are absent."""
    totals: dict[TopicLabel, int] = {}
    counts: dict[TopicLabel, int] = {}
    for sentence in sentences:
        totals[sentence.topic] = totals.get(sentence.topic, 0) + sentence.slot_count()
        counts[sentence.topic] = counts.get(sentence.topic, 0) + 1
    return {topic: totals[topic] / counts[topic] for topic in counts}
