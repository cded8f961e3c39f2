"""Devanagari codepoint classification, normalization, akshara segmentation,
and grammar-driven random text generation.

The unit of work throughout is the *cluster* (akshara): the orthographic
syllable a reader perceives and types as one character. A cluster is::

    cluster := digit
             | independent_vowel combining_sign*
             | (consonant nukta? virama)* consonant nukta? matra? combining_sign*

Everything here is pure; randomized operations take an explicit
``random.Random`` so results are reproducible from a seed.
"""

from __future__ import annotations

import enum
import random
import unicodedata
from dataclasses import dataclass

DEVANAGARI_BLOCK = range(0x0900, 0x0980)

ZWNJ = "‌"
ZWJ = "‍"
VIRAMA = "्"
NUKTA = "़"


class CharClass(enum.Enum):
    """What role a codepoint can play inside a cluster."""

    INDEPENDENT_VOWEL = "independent_vowel"
    CONSONANT = "consonant"
    MATRA = "matra"  # dependent vowel sign
    VIRAMA = "virama"
    NUKTA = "nukta"
    COMBINING_SIGN = "combining_sign"  # anusvara, candrabindu, visarga
    DIGIT = "digit"
    OTHER = "other"


class MatraPosition(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    ABOVE = "above"
    BELOW = "below"


def _build_class_table() -> dict[int, CharClass]:
    t: dict[int, CharClass] = {}

    def put(rng, cls):
        for cp in rng:
            t[cp] = cls

    put(range(0x0900, 0x0904), CharClass.COMBINING_SIGN)
    put(range(0x0904, 0x0915), CharClass.INDEPENDENT_VOWEL)
    put(range(0x0915, 0x093A), CharClass.CONSONANT)
    t[0x093A] = CharClass.MATRA
    t[0x093B] = CharClass.MATRA
    t[0x093C] = CharClass.NUKTA
    t[0x093D] = CharClass.OTHER  # avagraha
    put(range(0x093E, 0x094D), CharClass.MATRA)
    t[0x094D] = CharClass.VIRAMA
    t[0x094E] = CharClass.MATRA
    t[0x094F] = CharClass.MATRA
    t[0x0950] = CharClass.OTHER  # om
    put(range(0x0951, 0x0955), CharClass.OTHER)  # Vedic tone marks, out of scope
    put(range(0x0955, 0x0958), CharClass.MATRA)
    put(range(0x0958, 0x0960), CharClass.CONSONANT)  # precomposed nukta forms
    t[0x0960] = CharClass.INDEPENDENT_VOWEL
    t[0x0961] = CharClass.INDEPENDENT_VOWEL
    t[0x0962] = CharClass.MATRA
    t[0x0963] = CharClass.MATRA
    t[0x0964] = CharClass.OTHER  # danda
    t[0x0965] = CharClass.OTHER  # double danda
    put(range(0x0966, 0x0970), CharClass.DIGIT)
    t[0x0970] = CharClass.OTHER
    t[0x0971] = CharClass.OTHER
    put(range(0x0972, 0x0978), CharClass.INDEPENDENT_VOWEL)
    put(range(0x0978, 0x0980), CharClass.CONSONANT)
    assert len(t) == 128
    return t


_CLASS_TABLE = _build_class_table()

_MATRA_POSITIONS = {
    0x093A: MatraPosition.ABOVE,
    0x093B: MatraPosition.RIGHT,
    0x093E: MatraPosition.RIGHT,
    0x093F: MatraPosition.LEFT,
    0x0940: MatraPosition.RIGHT,
    0x0941: MatraPosition.BELOW,
    0x0942: MatraPosition.BELOW,
    0x0943: MatraPosition.BELOW,
    0x0944: MatraPosition.BELOW,
    0x0945: MatraPosition.ABOVE,
    0x0946: MatraPosition.ABOVE,
    0x0947: MatraPosition.ABOVE,
    0x0948: MatraPosition.ABOVE,
    0x0949: MatraPosition.RIGHT,
    0x094A: MatraPosition.RIGHT,
    0x094B: MatraPosition.RIGHT,
    0x094C: MatraPosition.RIGHT,
    0x094E: MatraPosition.LEFT,
    0x094F: MatraPosition.RIGHT,
    0x0955: MatraPosition.ABOVE,
    0x0956: MatraPosition.BELOW,
    0x0957: MatraPosition.BELOW,
    0x0962: MatraPosition.BELOW,
    0x0963: MatraPosition.BELOW,
}

_DIGIT_ZERO = 0x0966


def classify(cp: int | str) -> CharClass:
    """Classify a codepoint. Total: anything outside the block is OTHER."""
    if isinstance(cp, str):
        cp = ord(cp)
    return _CLASS_TABLE.get(cp, CharClass.OTHER)


def matra_position(cp: int | str) -> MatraPosition | None:
    """Placement of a dependent vowel sign; None for non-matras."""
    if isinstance(cp, str):
        cp = ord(cp)
    return _MATRA_POSITIONS.get(cp)


def digit_value(cp: int | str) -> int | None:
    """0-9 for the Devanagari digits, None otherwise."""
    if isinstance(cp, str):
        cp = ord(cp)
    if classify(cp) is CharClass.DIGIT:
        return cp - _DIGIT_ZERO
    return None


class MalformedText(ValueError):
    """Text whose codepoint sequence violates the cluster grammar."""

    def __init__(self, message: str, text: str = "", index: int = -1):
        super().__init__(message)
        self.text = text
        self.index = index


class InvalidLength(ValueError):
    """Requested cluster count is not a positive integer."""


def normalize(text: str) -> str:
    """Canonical answer form: NFC, ZWJ/ZWNJ stripped, whitespace collapsed.

    Idempotent; visually identical inputs compare equal after this.
    """
    text = text.replace(ZWJ, "").replace(ZWNJ, "")
    text = unicodedata.normalize("NFC", text)
    return " ".join(text.split())


class ClusterKind(enum.Enum):
    DIGIT = "digit"
    VOWEL_SYLLABLE = "vowel_syllable"
    CONSONANT_SYLLABLE = "consonant_syllable"


@dataclass(frozen=True)
class Cluster:
    """One akshara. ``conjunct_depth`` counts virama-joined consonants
    (1 for a plain consonant syllable, 0 for digits and vowel syllables)."""

    text: str
    kind: ClusterKind
    conjunct_depth: int

    @property
    def codepoints(self) -> tuple[int, ...]:
        return tuple(ord(c) for c in self.text)

    @property
    def is_conjunct(self) -> bool:
        return self.conjunct_depth >= 2


@dataclass(frozen=True)
class ChallengeText:
    """Normalized text together with its cluster decomposition."""

    normalized: str
    clusters: tuple[Cluster, ...]

    def __len__(self) -> int:
        return len(self.clusters)


def _scan_cluster(word: str, i: int) -> tuple[Cluster, int]:
    """Greedy maximal-munch scan of one cluster starting at ``word[i]``."""
    n = len(word)
    start = i
    cls = classify(word[i])

    if cls is CharClass.DIGIT:
        return Cluster(word[i], ClusterKind.DIGIT, 0), i + 1

    if cls is CharClass.INDEPENDENT_VOWEL:
        i += 1
        while i < n and classify(word[i]) is CharClass.COMBINING_SIGN:
            i += 1
        return Cluster(word[start:i], ClusterKind.VOWEL_SYLLABLE, 0), i

    if cls is CharClass.CONSONANT:
        depth = 1
        i += 1
        if i < n and classify(word[i]) is CharClass.NUKTA:
            i += 1
        # absorb further (virama consonant nukta?) pairs
        while (
            i + 1 < n
            and classify(word[i]) is CharClass.VIRAMA
            and classify(word[i + 1]) is CharClass.CONSONANT
        ):
            i += 2
            depth += 1
            if i < n and classify(word[i]) is CharClass.NUKTA:
                i += 1
        if i < n and classify(word[i]) is CharClass.MATRA:
            i += 1
        while i < n and classify(word[i]) is CharClass.COMBINING_SIGN:
            i += 1
        return Cluster(word[start:i], ClusterKind.CONSONANT_SYLLABLE, depth), i

    raise MalformedText(
        f"codepoint U+{ord(word[i]):04X} cannot start a cluster", word, i
    )


def segment_clusters(text: str) -> list[Cluster]:
    """Partition normalized text into clusters.

    Spaces separate words and are not part of any cluster. Raises
    MalformedText on sequences the grammar rejects (dangling matra,
    leading virama, non-Devanagari codepoints, ...).
    """
    clusters: list[Cluster] = []
    for word in text.split(" "):
        i = 0
        while i < len(word):
            cluster, i = _scan_cluster(word, i)
            clusters.append(cluster)
    return clusters


def make_challenge_text(text: str) -> ChallengeText:
    """Normalize and segment; the two fields are consistent by construction."""
    norm = normalize(text)
    return ChallengeText(norm, tuple(segment_clusters(norm)))


# Generation pools: the traditional 33 consonants, 11 vowels, and the ten
# common matras; the rarer block extensions stay recognizable to classify()
# but are never generated.
GEN_CONSONANTS = [
    chr(cp)
    for cp in range(0x0915, 0x093A)
    if cp not in (0x0929, 0x0931, 0x0933, 0x0934)
]
GEN_VOWELS = [chr(cp) for cp in (0x0905, 0x0906, 0x0907, 0x0908, 0x0909,
                                 0x090A, 0x090B, 0x090F, 0x0910, 0x0913, 0x0914)]
GEN_MATRAS = [chr(cp) for cp in (0x093E, 0x093F, 0x0940, 0x0941, 0x0942,
                                 0x0943, 0x0947, 0x0948, 0x094B, 0x094C)]
GEN_SIGNS = ["ँ", "ं", "ः"]  # candrabindu, anusvara, visarga
GEN_DIGITS = [chr(cp) for cp in range(0x0966, 0x0970)]

assert len(GEN_CONSONANTS) == 33 and len(GEN_VOWELS) == 11


@dataclass(frozen=True)
class GenerationWeights:
    """Knobs for random cluster generation. Kind weights are relative;
    the rest are independent probabilities."""

    digit: float = 0.10
    vowel: float = 0.15
    consonant: float = 0.75
    conjunct_depth2: float = 0.25
    conjunct_depth3: float = 0.05
    matra: float = 0.60
    combining_sign: float = 0.05

    def validate(self) -> None:
        probs = (
            self.conjunct_depth2,
            self.conjunct_depth3,
            self.matra,
            self.combining_sign,
        )
        if min(self.digit, self.vowel, self.consonant) < 0:
            raise ValueError("kind weights must be non-negative")
        if self.digit + self.vowel + self.consonant <= 0:
            raise ValueError("at least one kind weight must be positive")
        if any(p < 0 or p > 1 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.conjunct_depth2 + self.conjunct_depth3 > 1:
            raise ValueError("conjunct depth probabilities exceed 1")


DEFAULT_WEIGHTS = GenerationWeights()


def random_cluster(rng: random.Random, weights: GenerationWeights = DEFAULT_WEIGHTS) -> Cluster:
    """Draw one grammar-valid cluster."""
    weights.validate()
    kind = rng.choices(
        (ClusterKind.DIGIT, ClusterKind.VOWEL_SYLLABLE, ClusterKind.CONSONANT_SYLLABLE),
        weights=(weights.digit, weights.vowel, weights.consonant),
    )[0]

    if kind is ClusterKind.DIGIT:
        return Cluster(rng.choice(GEN_DIGITS), kind, 0)

    if kind is ClusterKind.VOWEL_SYLLABLE:
        text = rng.choice(GEN_VOWELS)
        if rng.random() < weights.combining_sign:
            text += rng.choice(GEN_SIGNS)
        return Cluster(text, kind, 0)

    depth = rng.choices(
        (1, 2, 3),
        weights=(
            1.0 - weights.conjunct_depth2 - weights.conjunct_depth3,
            weights.conjunct_depth2,
            weights.conjunct_depth3,
        ),
    )[0]
    parts = [rng.choice(GEN_CONSONANTS)]
    for _ in range(depth - 1):
        parts.append(VIRAMA)
        parts.append(rng.choice(GEN_CONSONANTS))
    if rng.random() < weights.matra:
        parts.append(rng.choice(GEN_MATRAS))
    if rng.random() < weights.combining_sign:
        parts.append(rng.choice(GEN_SIGNS))
    return Cluster("".join(parts), ClusterKind.CONSONANT_SYLLABLE, depth)


def random_string(
    rng: random.Random,
    n_clusters: int,
    weights: GenerationWeights = DEFAULT_WEIGHTS,
) -> ChallengeText:
    """A random single word of exactly ``n_clusters`` clusters."""
    if not isinstance(n_clusters, int) or n_clusters < 1:
        raise InvalidLength(f"n_clusters must be >= 1, got {n_clusters!r}")
    text = "".join(random_cluster(rng, weights).text for _ in range(n_clusters))
    result = make_challenge_text(text)
    # Cluster boundaries survive concatenation: no generated cluster starts
    # with a join-eligible codepoint (matra, sign, virama).
    assert len(result.clusters) == n_clusters
    return result
