"""Byte n-gram language and character-encoding identification.

A profile holds exact overlapping bigram and trigram byte counts for one
(language, encoding) pair.  Scoring uses an order-2 Markov model with
add-one smoothing over the 256-symbol byte alphabet; language and encoding
are recognised in the same step by ranking all profiles.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, DecodeError, LoadError, ScoringError, TrainingError

# Registry name -> Python codec name.
ENCODING_REGISTRY = {
    "UTF-8": "utf-8",
    "ISO-8859-1": "iso8859-1",
    "ISO-8859-2": "iso8859-2",
    "ISO-8859-3": "iso8859-3",
    "ISO-8859-5": "iso8859-5",
    "ISO-8859-7": "iso8859-7",
    "US-ASCII": "ascii",
}

_ALPHABET = 256


@dataclass(frozen=True, order=True)
class LangEncLabel:
    language: str
    encoding: str

    def __post_init__(self):
        if not (
            len(self.language) == 2
            and self.language.isascii()
            and self.language.isalpha()
            and self.language.islower()
        ):
            raise ValueError("language must be a 2-letter lowercase code: %r" % (self.language,))
        if self.encoding not in ENCODING_REGISTRY:
            raise ValueError("unknown encoding %r (registry: %s)"
                             % (self.encoding, ", ".join(sorted(ENCODING_REGISTRY))))

    def __str__(self):
        return "%s/%s" % (self.language, self.encoding)


@dataclass(frozen=True)
class LangEncProfile:
    label: LangEncLabel
    bigram_counts: dict = field(default_factory=dict)
    trigram_counts: dict = field(default_factory=dict)
    total_bytes: int = 0


@dataclass(frozen=True)
class ScoredLabel:
    label: LangEncLabel
    score: float


def train_profile(corpus: bytes, label: LangEncLabel) -> LangEncProfile:
    """Count overlapping byte bigrams and trigrams of ``corpus``."""
    if len(corpus) < 3:
        raise TrainingError("training corpus must hold at least 3 bytes, got %d" % len(corpus))
    bigrams = Counter(zip(corpus, corpus[1:]))
    trigrams = Counter(zip(corpus, corpus[1:], corpus[2:]))
    return LangEncProfile(
        label=label,
        bigram_counts=dict(bigrams),
        trigram_counts=dict(trigrams),
        total_bytes=len(corpus),
    )


def score_text(profile: LangEncProfile, text: bytes) -> float:
    """Mean log-probability per byte of ``text`` under the profile.

    Each trigram (b1, b2, b3) contributes
    ln((trigram_count + 1) / (bigram_count + 256)); the sum is divided by
    the number of trigrams.  Always finite and <= 0.
    """
    if len(text) < 3:
        raise ScoringError("text must hold at least 3 bytes, got %d" % len(text))
    tri = profile.trigram_counts
    bi = profile.bigram_counts
    total = 0.0
    for i in range(len(text) - 2):
        b1, b2, b3 = text[i], text[i + 1], text[i + 2]
        t = tri.get((b1, b2, b3), 0)
        b = bi.get((b1, b2), 0)
        total += math.log((t + 1) / (b + _ALPHABET))
    return total / (len(text) - 2)


def identify(profiles, text: bytes):
    """Rank all profiles against ``text``; best match first.

    Ties on score break by lexicographic label order.
    """
    profiles = list(profiles)
    if not profiles:
        raise ConfigError("identify needs at least one profile")
    scored = [ScoredLabel(p.label, score_text(p, text)) for p in profiles]
    scored.sort(key=lambda s: (-s.score, s.label))
    return scored


def decode_to_utf8(text: bytes, encoding: str) -> str:
    """Decode ``text`` under a registry encoding to a Unicode string."""
    if encoding not in ENCODING_REGISTRY:
        raise ConfigError("unknown encoding %r" % (encoding,))
    codec = ENCODING_REGISTRY[encoding]
    try:
        return text.decode(codec)
    except UnicodeDecodeError as exc:
        raise DecodeError(
            "invalid byte for %s at offset %d" % (encoding, exc.start),
            offset=exc.start,
        ) from exc


def save_profile(profile: LangEncProfile, path) -> None:
    """Write a profile in the line-oriented text format.

    Header ``#langenc <lang> <encoding> <total_bytes>``, then one record
    per line: ``B b1 b2 count`` / ``T b1 b2 b3 count`` with decimal bytes.
    """
    lines = ["#langenc %s %s %d" % (profile.label.language, profile.label.encoding,
                                    profile.total_bytes)]
    for (b1, b2), n in sorted(profile.bigram_counts.items()):
        lines.append("B %d %d %d" % (b1, b2, n))
    for (b1, b2, b3), n in sorted(profile.trigram_counts.items()):
        lines.append("T %d %d %d %d" % (b1, b2, b3, n))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_profile(path) -> LangEncProfile:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#langenc "):
        raise LoadError("%s: missing #langenc header" % path)
    parts = lines[0].split()
    if len(parts) != 4:
        raise LoadError("%s: malformed header %r" % (path, lines[0]))
    try:
        label = LangEncLabel(parts[1], parts[2])
        total = int(parts[3])
    except ValueError as exc:
        raise LoadError("%s: %s" % (path, exc)) from exc
    bigrams, trigrams = {}, {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split()
        try:
            if fields[0] == "B" and len(fields) == 4:
                b1, b2, n = (int(x) for x in fields[1:])
                bigrams[(b1, b2)] = n
            elif fields[0] == "T" and len(fields) == 5:
                b1, b2, b3, n = (int(x) for x in fields[1:])
                trigrams[(b1, b2, b3)] = n
            else:
                raise ValueError("bad record")
        except ValueError as exc:
            raise LoadError("%s:%d: malformed record %r" % (path, lineno, line)) from exc
    return LangEncProfile(label=label, bigram_counts=bigrams,
                          trigram_counts=trigrams, total_bytes=total)


def load_profile_dir(directory):
    """Load every ``*.prof`` file under ``directory``."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError("profile directory %s does not exist" % directory)
    profiles = [load_profile(p) for p in sorted(directory.glob("*.prof"))]
    if not profiles:
        raise ConfigError("no *.prof files in %s" % directory)
    return profiles
