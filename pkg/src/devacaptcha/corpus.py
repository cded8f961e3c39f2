"""Page store, word index, and constrained sampling of challenge text.

Pages live in an append-only ``pages.dat`` of length-prefixed UTF-8 JSON
records. The word index is derived data: it is rebuilt from the pages
whenever its fingerprint no longer matches, and never treated as a source
of truth. A corpus opened with ``directory=None`` is purely in-memory.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import random
import struct
from dataclasses import dataclass, field
from pathlib import Path

from .script import (
    ChallengeText,
    CharClass,
    MalformedText,
    classify,
    make_challenge_text,
    normalize,
    random_string,
    segment_clusters,
)

log = logging.getLogger(__name__)

PAGES_FILE = "pages.dat"
INDEX_FILE = "index.dat"
_LEN = struct.Struct(">I")


class EmptyPage(ValueError):
    """No Devanagari word survived tokenization."""


class NoCandidate(LookupError):
    """No indexed word satisfies the sampling constraints."""


class SampleKind(enum.Enum):
    EXISTING_WORD = "existing_word"
    RANDOM_STRING = "random_string"
    PHRASE = "phrase"


@dataclass(frozen=True)
class SampleConstraints:
    min_clusters: int = 3
    max_clusters: int = 6
    kind: SampleKind = SampleKind.EXISTING_WORD
    phrase_words: int = 2
    prefer_conjuncts: bool = False

    def __post_init__(self):
        if not 1 <= self.min_clusters <= self.max_clusters:
            raise ValueError(
                f"need 1 <= min_clusters <= max_clusters, "
                f"got [{self.min_clusters}, {self.max_clusters}]"
            )
        if self.kind is SampleKind.PHRASE and self.phrase_words < 1:
            raise ValueError("phrase_words must be >= 1")


@dataclass(frozen=True)
class Page:
    id: str
    source: str
    text: str


@dataclass
class WordEntry:
    pages: set[str] = field(default_factory=set)
    count: int = 0


@dataclass(frozen=True)
class CorpusStats:
    pages: int
    words: int
    buckets: dict[int, int]  # cluster count -> distinct words


def tokenize_words(text: str) -> list[str]:
    """Maximal runs of cluster-forming Devanagari codepoints.

    Anything classify() calls OTHER (danda, avagraha, Latin, punctuation)
    acts as a separator, so sentence-final words come out clean.
    """
    words = []
    current: list[str] = []
    for ch in text:
        if classify(ch) is not CharClass.OTHER:
            current.append(ch)
        elif current:
            words.append("".join(current))
            current = []
    if current:
        words.append("".join(current))
    return words


def _page_id(text: str, source: str) -> str:
    h = hashlib.sha256()
    h.update(source.encode("utf-8"))
    h.update(b"\x00")
    h.update(text.encode("utf-8"))
    return h.hexdigest()[:16]


class WordIndex:
    """word -> (page ids, occurrence count), plus cluster-length buckets."""

    def __init__(self):
        self.entries: dict[str, WordEntry] = {}
        self.buckets: dict[int, set[str]] = {}

    def add_occurrence(self, word: str, page_id: str, n_clusters: int) -> None:
        entry = self.entries.setdefault(word, WordEntry())
        entry.pages.add(page_id)
        entry.count += 1
        self.buckets.setdefault(n_clusters, set()).add(word)

    def words_in_range(self, lo: int, hi: int) -> list[str]:
        found: set[str] = set()
        for n in range(lo, hi + 1):
            found.update(self.buckets.get(n, ()))
        return sorted(found)

    def to_json(self) -> dict:
        return {
            "entries": {
                w: {"pages": sorted(e.pages), "count": e.count}
                for w, e in sorted(self.entries.items())
            },
            "buckets": {
                str(n): sorted(ws) for n, ws in sorted(self.buckets.items())
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "WordIndex":
        idx = cls()
        for w, e in data["entries"].items():
            idx.entries[w] = WordEntry(set(e["pages"]), e["count"])
        for n, ws in data["buckets"].items():
            idx.buckets[int(n)] = set(ws)
        return idx


def build_index(pages: dict[str, Page]) -> WordIndex:
    """The index is a pure function of the page store."""
    idx = WordIndex()
    for page_id in sorted(pages):
        for word in tokenize_words(pages[page_id].text):
            try:
                n = len(segment_clusters(word))
            except MalformedText:
                log.warning("skipping unsegmentable word %r in page %s", word, page_id)
                continue
            idx.add_occurrence(word, page_id, n)
    return idx


class Corpus:
    """Single-writer, multi-reader page store with a derived word index."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory is not None else None
        self.pages: dict[str, Page] = {}
        self.index = WordIndex()
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            self._load()

    # -- persistence ------------------------------------------------------

    def _pages_path(self) -> Path:
        return self.directory / PAGES_FILE

    def _index_path(self) -> Path:
        return self.directory / INDEX_FILE

    def _pages_fingerprint(self) -> str:
        path = self._pages_path()
        if not path.exists():
            return hashlib.sha256(b"").hexdigest()
        return hashlib.sha256(path.read_bytes()).hexdigest()

    def _load(self) -> None:
        path = self._pages_path()
        if path.exists():
            raw = path.read_bytes()
            off = 0
            while off < len(raw):
                (length,) = _LEN.unpack_from(raw, off)
                off += _LEN.size
                record = json.loads(raw[off : off + length].decode("utf-8"))
                off += length
                page = Page(record["id"], record["source"], record["text"])
                self.pages[page.id] = page
        index_path = self._index_path()
        if index_path.exists():
            data = json.loads(index_path.read_text("utf-8"))
            if data.get("fingerprint") == self._pages_fingerprint():
                self.index = WordIndex.from_json(data)
                return
            log.info("stale index at %s, rebuilding", index_path)
        self.index = build_index(self.pages)
        if self.directory is not None:
            self._write_index()

    def _append_page(self, page: Page) -> None:
        payload = json.dumps(
            {"id": page.id, "source": page.source, "text": page.text},
            ensure_ascii=False,
            sort_keys=True,
        ).encode("utf-8")
        with open(self._pages_path(), "ab") as fh:
            fh.write(_LEN.pack(len(payload)))
            fh.write(payload)

    def _write_index(self) -> None:
        data = self.index.to_json()
        data["fingerprint"] = self._pages_fingerprint()
        self._index_path().write_text(
            json.dumps(data, ensure_ascii=False, sort_keys=True), "utf-8"
        )

    # -- operations -------------------------------------------------------

    def ingest(self, text: str, source: str) -> str:
        """Store one page and index its words. Idempotent per (text, source)."""
        norm = normalize(text)
        if not norm:
            raise EmptyPage(f"no text after normalization ({source!r})")
        page_id = _page_id(norm, source)
        if page_id in self.pages:
            return page_id

        words = []
        for word in tokenize_words(norm):
            try:
                n = len(segment_clusters(word))
            except MalformedText:
                log.warning("skipping unsegmentable word %r from %r", word, source)
                continue
            words.append((word, n))
        if not words:
            raise EmptyPage(f"no Devanagari word survived tokenization ({source!r})")

        page = Page(page_id, source, norm)
        self.pages[page_id] = page
        for word, n in words:
            self.index.add_occurrence(word, page_id, n)
        if self.directory is not None:
            self._append_page(page)
            self._write_index()
        return page_id

    def reindex(self) -> None:
        self.index = build_index(self.pages)
        if self.directory is not None:
            self._write_index()

    def sample(self, constraints: SampleConstraints, rng: random.Random) -> ChallengeText:
        """Draw challenge text per the constraints, deterministic given rng state."""
        kind = constraints.kind
        if kind is SampleKind.RANDOM_STRING:
            n = rng.randint(constraints.min_clusters, constraints.max_clusters)
            return random_string(rng, n)
        if kind is SampleKind.PHRASE:
            words = [
                self._sample_existing(constraints, rng)
                for _ in range(constraints.phrase_words)
            ]
            return make_challenge_text(" ".join(words))
        return make_challenge_text(self._sample_existing(constraints, rng))

    def _sample_existing(self, constraints: SampleConstraints, rng: random.Random) -> str:
        candidates = self.index.words_in_range(
            constraints.min_clusters, constraints.max_clusters
        )
        if not candidates:
            raise NoCandidate(
                f"no indexed word with {constraints.min_clusters}-"
                f"{constraints.max_clusters} clusters"
            )
        if constraints.prefer_conjuncts:
            weights = [
                3.0 if any(c.is_conjunct for c in segment_clusters(w)) else 1.0
                for w in candidates
            ]
            return rng.choices(candidates, weights=weights)[0]
        return rng.choice(candidates)

    def stats(self) -> CorpusStats:
        return CorpusStats(
            pages=len(self.pages),
            words=len(self.index.entries),
            buckets={n: len(ws) for n, ws in sorted(self.index.buckets.items())},
        )
