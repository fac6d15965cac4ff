"""Feature extraction from raw text: bag of words, character n-grams, sets.

All extractors share the same base behavior: XML/HTML entities are decoded,
text is lowercased, and tokenization splits on Unicode whitespace plus a
fixed punctuation set.  Tokens left with no letter or digit (e.g. a bare "&")
are dropped.  Stop word removal runs before stemming.  Extractors are
stateless pure functions and safe to call concurrently.
"""

from __future__ import annotations

import importlib.resources
import re
from dataclasses import dataclass, field

from .porter import porter_stem

# separators used on top of whitespace; a fixed superset of the usual signs
PUNCTUATION = set(",.;:!?()[]{}\"'<>")

_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}
_ENTITY_RE = re.compile(r"&(amp|lt|gt|quot|apos|#x[0-9a-fA-F]+|#[0-9]+);")

_english_stopwords: frozenset | None = None


def english_stopwords() -> frozenset:
    """The bundled English stop list (classic ~300-word SMART-derived list)."""
    global _english_stopwords
    if _english_stopwords is None:
        text = (importlib.resources.files("jatecs") / "data" / "stopwords_en.txt"
                ).read_text(encoding="utf-8")
        _english_stopwords = frozenset(
            line.strip() for line in text.splitlines()
            if line.strip() and not line.startswith("#"))
    return _english_stopwords


def decode_entities(text: str) -> str:
    """Replace &amp; &lt; &gt; &quot; &apos; and numeric &#nn;/&#xhh; forms."""
    def sub(match):
        name = match.group(1)
        if name in _ENTITIES:
            return _ENTITIES[name]
        code = int(name[2:], 16) if name[1] in "xX" else int(name[1:])
        return chr(code)

    return _ENTITY_RE.sub(sub, text)


def tokenize(text: str) -> list:
    """Lowercased tokens, split on whitespace and punctuation separators."""
    text = decode_entities(text).lower()
    chars = [" " if ch in PUNCTUATION or ch.isspace() else ch for ch in text]
    tokens = "".join(chars).split()
    return [t for t in tokens if any(ch.isalnum() for ch in t)]


def _aggregate(features) -> list:
    counts: dict = {}
    for f in features:
        counts[f] = counts.get(f, 0) + 1
    return list(counts.items())


def _processed_tokens(text, stoplist, stemmer):
    tokens = tokenize(text)
    if stoplist is not None:
        tokens = [t for t in tokens if t not in stoplist]
    if stemmer == "EnglishPorter":
        tokens = [porter_stem(t) for t in tokens]
    return tokens


def extract_bow(text: str, stoplist=None, stemmer=None) -> list:
    """Bag of words: [(featureText, count)] in first-seen order."""
    return _aggregate(_processed_tokens(text, stoplist, stemmer))


def _token_ngrams(token: str, n: int):
    if len(token) <= n:
        # short tokens emit themselves once so no word disappears entirely
        yield token
        return
    for i in range(len(token) - n + 1):
        yield token[i:i + n]


def extract_char_ngrams(text: str, n: int, word_bounded: bool = True,
                        stoplist=None, stemmer=None) -> list:
    """Character n-grams, within tokens or continuously across the string.

    Continuous mode slides over the lowercased raw string with whitespace
    runs collapsed to single spaces; stop word removal and stemming only
    apply in word-bounded mode (there are no tokens otherwise).
    """
    if n < 1:
        raise ValueError("n-gram size must be >= 1")
    if word_bounded:
        grams = (g for token in _processed_tokens(text, stoplist, stemmer)
                 for g in _token_ngrams(token, n))
        return _aggregate(grams)
    flat = " ".join(decode_entities(text).lower().split())
    if not flat:
        return []
    return _aggregate(_token_ngrams(flat, n))


@dataclass(frozen=True)
class ExtractorConfig:
    """Declarative extractor description; build one per corpus pass.

    kind: "BOW", "CharNGram" or "Set".  ngram_size / word_bounded apply to
    CharNGram; children and namespacing to Set.  stoplist is a set of tokens
    or None; stemmer is "EnglishPorter" or None.
    """

    kind: str = "BOW"
    ngram_size: int = 3
    word_bounded: bool = True
    stoplist: frozenset | None = None
    stemmer: str | None = None
    namespacing: bool = True
    children: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("BOW", "CharNGram", "Set"):
            raise ValueError(f"unknown extractor kind {self.kind!r}")
        if self.kind == "Set" and not self.children:
            raise ValueError("Set extractor requires children")

    def extract(self, text: str) -> list:
        if self.kind == "BOW":
            return extract_bow(text, self.stoplist, self.stemmer)
        if self.kind == "CharNGram":
            return extract_char_ngrams(text, self.ngram_size, self.word_bounded,
                                       self.stoplist, self.stemmer)
        return extract_set(text, self.children, self.namespacing)


def extract_set(text: str, children, namespacing: bool = True) -> list:
    """Concatenate child extractor outputs.

    With namespacing on, features are prefixed "<childIndex>#" so identical
    strings produced by different extractors stay distinct; with it off,
    identical features merge and their counts add up.
    """
    merged: dict = {}
    for i, child in enumerate(children):
        for text_feat, count in child.extract(text):
            key = f"{i}#{text_feat}" if namespacing else text_feat
            merged[key] = merged.get(key, 0) + count
    return list(merged.items())
