"""Independent cluster-grammar checker used to cross-validate segmentation.

Deliberately implemented on a different mechanism than the scanner in
devacaptcha.script: each codepoint is mapped to a class letter and a regex
performs backtracking maximal-munch over the letter string. Keep this free
of any imports from the segmentation implementation besides classify().
"""

from __future__ import annotations

import re

from devacaptcha.script import CharClass, classify

_LETTER = {
    CharClass.DIGIT: "d",
    CharClass.INDEPENDENT_VOWEL: "V",
    CharClass.CONSONANT: "C",
    CharClass.MATRA: "M",
    CharClass.VIRAMA: "x",
    CharClass.NUKTA: "N",
    CharClass.COMBINING_SIGN: "S",
    CharClass.OTHER: "O",
}

_CLUSTER_RE = re.compile(r"d|VS*|(?:CN?x)*CN?M?S*")


class OracleReject(ValueError):
    pass


def oracle_spans(word: str) -> list[tuple[int, int]]:
    """Greedy cluster spans for a single word, or OracleReject."""
    letters = "".join(_LETTER[classify(ch)] for ch in word)
    spans = []
    i = 0
    while i < len(letters):
        m = _CLUSTER_RE.match(letters, i)
        if m is None or m.end() == i:
            raise OracleReject(f"no cluster at index {i} of {word!r}")
        spans.append((i, m.end()))
        i = m.end()
    return spans


def oracle_segment(text: str) -> list[str]:
    """Cluster texts for space-separated normalized text."""
    out = []
    for word in text.split(" "):
        if not word:
            continue
        for a, b in oracle_spans(word):
            out.append(word[a:b])
    return out
