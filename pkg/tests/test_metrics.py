"""Metric fixtures with hand-worked expected values."""

import math

import pytest

from artdesc.corpus import EntityType, MaskedSentence, Slot, TopicLabel, Word
from artdesc.errors import DataError
from artdesc.metrics import BLEU_EPSILON, bleu4, rouge_l, slot_ratio


class TestBleu4:
    def test_perfect_match_scores_100(self):
        tokens = "a quiet river scene with boats".split()
        assert bleu4(tokens, [tokens]) == pytest.approx(100.0, abs=1e-9)

    def test_zero_overlap_scores_near_zero(self):
        assert bleu4("a b c d e".split(), ["v w x y z".split()]) < 1e-3

    def test_hand_worked_fixture(self):
        # candidate: the cat sat on the mat  /  reference: the cat is on the mat
        # 1-grams: clipped the:2 cat:1 on:1 mat:1 -> 5/6
        # 2-grams: (the,cat) (on,the) (the,mat)   -> 3/5
        # 3-grams: (on,the,mat)                   -> 1/4
        # 4-grams: none                           -> eps/3
        # lengths equal -> brevity penalty 1
        candidate = "the cat sat on the mat".split()
        reference = "the cat is on the mat".split()
        expected = 100.0 * math.exp(
            (math.log(5 / 6) + math.log(3 / 5) + math.log(1 / 4)
             + math.log(BLEU_EPSILON / 3)) / 4.0
        )
        assert bleu4(candidate, [reference]) == pytest.approx(expected, abs=1e-6)

    def test_brevity_penalty_hand_worked(self):
        # candidate is a 4-token prefix of a 8-token reference:
        # precisions all 1, BP = exp(1 - 8/4)
        reference = "one two three four five six seven eight".split()
        candidate = reference[:4]
        expected = 100.0 * math.exp(1.0 - 8 / 4)
        assert bleu4(candidate, [reference]) == pytest.approx(expected, abs=1e-9)

    def test_duplicate_reference_changes_nothing(self):
        candidate = "the cat sat on the mat".split()
        reference = "the cat is on the mat".split()
        assert bleu4(candidate, [reference]) == bleu4(candidate, [reference, reference])

    def test_extra_reference_never_hurts(self):
        candidate = "the cat sat on the mat".split()
        ref1 = "the cat is on the mat".split()
        ref2 = "the cat sat on a mat".split()
        assert bleu4(candidate, [ref1, ref2]) >= bleu4(candidate, [ref1])

    def test_pure_function(self):
        c = "a b c d".split()
        r = "a b c e".split()
        assert bleu4(c, [r]) == bleu4(list(c), [list(r)])

    def test_empty_inputs_rejected(self):
        with pytest.raises(DataError):
            bleu4([], [["a"]])
        with pytest.raises(DataError):
            bleu4(["a"], [])
        with pytest.raises(DataError):
            bleu4(["a"], [[]])


class TestRougeL:
    def test_identity_scores_100(self):
        tokens = "the painter of light".split()
        assert rouge_l(tokens, tokens) == pytest.approx(100.0, abs=1e-9)

    def test_disjoint_scores_zero(self):
        assert rouge_l("a b c".split(), "x y z".split()) == 0.0

    def test_hand_worked_lcs_fixture(self):
        # LCS("the gray cat", "the cat sat") = [the, cat], length 2
        # P = 2/3, R = 2/3, F = (1 + 1.2) P R / (R + 1.2 P) = 2/3
        candidate = "the gray cat".split()
        reference = "the cat sat".split()
        expected = 100.0 * (2.2 * (2 / 3) * (2 / 3)) / ((2 / 3) + 1.2 * (2 / 3))
        assert rouge_l(candidate, reference) == pytest.approx(expected, abs=1e-6)
        assert rouge_l(candidate, reference) == pytest.approx(100.0 * 2 / 3, abs=1e-6)

    def test_asymmetric_lengths_hand_worked(self):
        # LCS("a b", "a b c d") = 2: P = 1, R = 1/2,
        # F = 2.2 * 1 * 0.5 / (0.5 + 1.2) = 1.1 / 1.7
        assert rouge_l("a b".split(), "a b c d".split()) == pytest.approx(
            100.0 * 1.1 / 1.7, abs=1e-6
        )

    def test_empty_inputs_rejected(self):
        with pytest.raises(DataError):
            rouge_l([], ["a"])
        with pytest.raises(DataError):
            rouge_l(["a"], [])


class TestSlotRatio:
    def _sentence(self, n_slots, n_words, topic):
        tokens = [Slot(EntityType.PERSON)] * n_slots + [Word("w")] * max(n_words, 1)
        return MaskedSentence(tokens, topic)

    def test_manual_count(self):
        sentences = [
            self._sentence(1, 3, TopicLabel.CONTENT),
            self._sentence(0, 4, TopicLabel.CONTENT),
            self._sentence(2, 2, TopicLabel.FORM),
            self._sentence(3, 1, TopicLabel.CONTEXT),
            self._sentence(2, 1, TopicLabel.CONTEXT),
            self._sentence(1, 5, TopicLabel.CONTEXT),
        ]
        ratios = slot_ratio(sentences)
        assert ratios[TopicLabel.CONTENT] == pytest.approx(0.5)
        assert ratios[TopicLabel.FORM] == pytest.approx(2.0)
        assert ratios[TopicLabel.CONTEXT] == pytest.approx(2.0)

    def test_no_slots_all_zero(self):
        sentences = [self._sentence(0, 3, t) for t in TopicLabel]
        assert all(v == 0.0 for v in slot_ratio(sentences).values())

    def test_absent_topic_missing_from_map(self):
        ratios = slot_ratio([self._sentence(1, 2, TopicLabel.FORM)])
        assert TopicLabel.CONTENT not in ratios
        assert set(ratios) == {TopicLabel.FORM}
