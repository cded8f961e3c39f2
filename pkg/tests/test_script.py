import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from devacaptcha import script
from devacaptcha.script import (
    CharClass,
    Cluster,
    ClusterKind,
    GenerationWeights,
    InvalidLength,
    MalformedText,
    MatraPosition,
    classify,
    digit_value,
    make_challenge_text,
    matra_position,
    normalize,
    random_cluster,
    random_string,
    segment_clusters,
)

from .grammar_oracle import OracleReject, oracle_segment


class TestClassify:
    def test_known_codepoints(self):
        assert classify(0x0915) is CharClass.CONSONANT  # ka
        assert classify(0x093F) is CharClass.MATRA
        assert matra_position(0x093F) is MatraPosition.LEFT
        assert classify(0x0966) is CharClass.DIGIT
        assert digit_value(0x0966) == 0
        assert classify(0x0041) is CharClass.OTHER  # latin A
        assert classify("क") is CharClass.CONSONANT
        assert classify(0x094D) is CharClass.VIRAMA
        assert classify(0x093C) is CharClass.NUKTA
        assert classify(0x0902) is CharClass.COMBINING_SIGN
        assert classify(0x0905) is CharClass.INDEPENDENT_VOWEL

    def test_total_over_block(self):
        for cp in range(0x0900, 0x0980):
            assert classify(cp) in CharClass

    def test_digits_bijective(self):
        digits = [cp for cp in range(0x0900, 0x0980) if classify(cp) is CharClass.DIGIT]
        assert len(digits) == 10
        assert [digit_value(cp) for cp in digits] == list(range(10))
        assert digit_value(0x0915) is None

    def test_matra_positions_cover_all_matras(self):
        for cp in range(0x0900, 0x0980):
            if classify(cp) is CharClass.MATRA:
                assert matra_position(cp) is not None
            else:
                assert matra_position(cp) is None


class TestNormalize:
    def test_trim(self):
        assert normalize("  कर्मणि ") == "कर्मणि"

    def test_zwj_stripped(self):
        assert normalize("क‍्य") == "क्य"
        assert normalize("क‌्य") == "क्य"

    def test_empty(self):
        assert normalize("") == ""

    def test_collapse_internal_whitespace(self):
        assert normalize("कर्मणि \t\n योग") == "कर्मणि योग"

    def test_nfc_applied(self):
        # precomposed qa decomposes: Devanagari nukta letters are NFC exclusions
        assert normalize("क़") == "क़"

    @given(st.text(max_size=50))
    @settings(max_examples=300)
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(once) == once


class TestSegmentation:
    def test_figure_word(self):
        clusters = segment_clusters("कर्मणि")
        assert [c.text for c in clusters] == ["क", "र्म", "णि"]
        assert [c.conjunct_depth for c in clusters] == [1, 2, 1]

    def test_conjunct_depth(self):
        (c,) = segment_clusters("क्य")
        assert c.conjunct_depth == 2
        assert c.is_conjunct
        assert c.kind is ClusterKind.CONSONANT_SYLLABLE

    def test_dangling_matra(self):
        with pytest.raises(MalformedText):
            segment_clusters("ि")

    def test_leading_virama(self):
        with pytest.raises(MalformedText):
            segment_clusters("्क")

    def test_trailing_virama_rejected(self):
        with pytest.raises(MalformedText):
            segment_clusters("क्")

    def test_non_devanagari_rejected(self):
        with pytest.raises(MalformedText):
            segment_clusters("hello")

    def test_words_partition(self):
        clusters = segment_clusters("कर्मणि योग")
        assert "".join(c.text for c in clusters) == "कर्मणियोग"
        assert len(clusters) == 5

    def test_vowel_with_sign(self):
        (c,) = segment_clusters("अं")
        assert c.kind is ClusterKind.VOWEL_SYLLABLE
        assert c.conjunct_depth == 0

    def test_digit_cluster(self):
        clusters = segment_clusters("१२")
        assert [c.kind for c in clusters] == [ClusterKind.DIGIT, ClusterKind.DIGIT]

    def test_nukta_accepted(self):
        # za = ja + nukta (NFC keeps this pair decomposed)
        clusters = segment_clusters(normalize("ज़रा"))
        assert len(clusters) == 2

    def test_challenge_text_reassembles(self):
        ct = make_challenge_text("  कर्मणि   योग ")
        joined = []
        for c in ct.clusters:
            joined.append(c.text)
        assert ct.normalized == "कर्मणि योग"
        assert "".join(joined) == ct.normalized.replace(" ", "")


class TestOracleAgreement:
    def _agree(self, text):
        try:
            mine = [c.text for c in segment_clusters(text)]
            ok_mine = True
        except MalformedText:
            ok_mine = False
        try:
            theirs = oracle_segment(text)
            ok_oracle = True
        except OracleReject:
            ok_oracle = False
        assert ok_mine == ok_oracle, f"accept/reject disagreement on {text!r}"
        if ok_mine:
            assert mine == theirs, f"boundary disagreement on {text!r}"

    def test_generated_strings(self):
        rng = random.Random(20240901)
        for _ in range(2000):
            text = random_string(rng, rng.randint(1, 10)).normalized
            self._agree(text)

    def test_adversarial_codepoint_soup(self):
        # raw block codepoints, mostly malformed: both sides must agree
        pool = [chr(cp) for cp in range(0x0900, 0x0980)]
        rng = random.Random(7)
        for _ in range(2000):
            text = "".join(rng.choice(pool) for _ in range(rng.randint(1, 8)))
            self._agree(text)


class TestGeneration:
    def test_deterministic(self):
        a = random_cluster(random.Random(7))
        b = random_cluster(random.Random(7))
        assert a == b

    def test_forced_digit(self):
        w = GenerationWeights(digit=1, vowel=0, consonant=0)
        c = random_cluster(random.Random(1), w)
        assert c.kind is ClusterKind.DIGIT
        assert len(c.text) == 1

    def test_no_conjuncts_when_probability_zero(self):
        w = GenerationWeights(conjunct_depth2=0, conjunct_depth3=0)
        rng = random.Random(3)
        assert all(
            random_cluster(rng, w).conjunct_depth < 2 for _ in range(10_000)
        )

    def test_random_string_roundtrip(self):
        ct = random_string(random.Random(3), 5)
        assert len(ct.clusters) == 5
        assert [c.text for c in segment_clusters(ct.normalized)] == [
            c.text for c in ct.clusters
        ]

    def test_random_string_deterministic(self):
        assert (
            random_string(random.Random(3), 5).normalized
            == random_string(random.Random(3), 5).normalized
        )

    def test_zero_length_rejected(self):
        with pytest.raises(InvalidLength):
            random_string(random.Random(3), 0)

    def test_invalid_weights(self):
        with pytest.raises(ValueError):
            GenerationWeights(digit=-1).validate()
        with pytest.raises(ValueError):
            GenerationWeights(conjunct_depth2=0.9, conjunct_depth3=0.9).validate()

    @given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=12))
    @settings(max_examples=120)
    def test_roundtrip_property(self, seed, n):
        ct = random_string(random.Random(seed), n)
        assert len(segment_clusters(ct.normalized)) == n

    def test_cluster_immutable(self):
        c = Cluster("क", ClusterKind.CONSONANT_SYLLABLE, 1)
        with pytest.raises(AttributeError):
            c.text = "ख"
