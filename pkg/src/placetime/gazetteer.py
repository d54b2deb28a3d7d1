"""Place-name database: loading, indexing and longest multi-word lookup.

The gazetteer file is UTF-8 TSV:
``id<TAB>canonical<TAB>variant1|variant2|...<TAB>country<TAB>lat<TAB>lon<TAB>size_class``
with ``#`` comment lines.  Lookup is a dictionary match over whitespace
tokens, longest name first, exact-case.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import LoadError

TRIGGER_KINDS = ("iso_code", "currency", "adjective", "country_name")

_NONSPACE = re.compile(r"\S+")


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str):
    """Split on whitespace and strip leading/trailing punctuation.

    Internal hyphens and apostrophes survive ("Nord-Pas de Calais" gives
    the three tokens "Nord-Pas", "de", "Calais").  Offsets address the
    stripped core in the original text.
    """
    tokens = []
    for m in _NONSPACE.finditer(text):
        s, e = m.start(), m.end()
        while s < e and _is_punct(text[s]):
            s += 1
        while e > s and _is_punct(text[e - 1]):
            e -= 1
        if e > s:
            tokens.append(Token(text[s:e], s, e))
    return tokens


@dataclass(frozen=True)
class PlaceRecord:
    id: int
    canonical_name: str
    variants: tuple
    country: str
    latitude: float
    longitude: float
    size_class: int

    def surfaces(self):
        return (self.canonical_name,) + self.variants


@dataclass(frozen=True)
class CountryTrigger:
    surface: str
    country: str
    kind: str

    def __post_init__(self):
        if not self.surface:
            raise ValueError("trigger surface must be nonempty")
        if self.kind not in TRIGGER_KINDS:
            raise ValueError("unknown trigger kind %r" % (self.kind,))


@dataclass(frozen=True)
class GeoStopList:
    language: str
    words: frozenset


@dataclass(frozen=True)
class SpanMatch:
    """A name starting at some token position: its token span and payload."""
    span: int
    payload: tuple


class GazetteerIndex:
    """All place records plus a first-token index over every surface form."""

    def __init__(self, records):
        self.records = {}
        for rec in records:
            if rec.id in self.records:
                raise LoadError("duplicate place id %d" % rec.id)
            self.records[rec.id] = rec
        # token tuple -> sorted tuple of record ids
        by_name = {}
        for rec in records:
            for surface in rec.surfaces():
                key = tuple(t.text for t in tokenize(surface))
                if not key:
                    raise LoadError("unindexable surface %r for id %d" % (surface, rec.id))
                by_name.setdefault(key, set()).add(rec.id)
        self._first = {}
        for key, ids in by_name.items():
            self._first.setdefault(key[0], []).append((key, tuple(sorted(ids))))
        for entries in self._first.values():
            entries.sort(key=lambda e: (-len(e[0]), e[0]))

    def __len__(self):
        return len(self.records)

    def match_at(self, tokens, position):
        """Longest name/variant whose tokens start at ``position``, or None."""
        return _match_token_index(self._first, tokens, position)

    def single_token_surfaces(self):
        """All distinct single-token surface forms in the index."""
        out = set()
        for rec in self.records.values():
            for surface in rec.surfaces():
                toks = tokenize(surface)
                if len(toks) == 1:
                    out.add(toks[0].text)
        return out


class TriggerIndex:
    """Country triggers indexed the same way as gazetteer names."""

    def __init__(self, triggers):
        self.triggers = tuple(triggers)
        self._first = {}
        for trig in self.triggers:
            key = tuple(t.text for t in tokenize(trig.surface))
            if not key:
                raise LoadError("unindexable trigger surface %r" % (trig.surface,))
            self._first.setdefault(key[0], []).append((key, (trig,)))
        for entries in self._first.values():
            entries.sort(key=lambda e: (-len(e[0]), e[0]))

    def match_at(self, tokens, position):
        return _match_token_index(self._first, tokens, position)


def _match_token_index(first_index, tokens, position):
    if position < 0 or position >= len(tokens):
        raise IndexError("position %d outside token sequence" % position)
    entries = first_index.get(tokens[position].text)
    if not entries:
        return None
    for key, payload in entries:  # sorted longest first
        if position + len(key) > len(tokens):
            continue
        if all(tokens[position + i].text == key[i] for i in range(len(key))):
            return SpanMatch(span=len(key), payload=payload)
    return None


def match_at(index: GazetteerIndex, tokens, position):
    """Module-level alias for :meth:`GazetteerIndex.match_at`."""
    return index.match_at(tokens, position)


def load_gazetteer(path, max_size_class=None, keep_countries=()) -> GazetteerIndex:
    """Load the TSV gazetteer.

    When ``max_size_class`` is given, records of a larger (less important)
    size class are dropped unless their country is in ``keep_countries``.
    """
    path = Path(path)
    records = []
    keep = frozenset(keep_countries)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LoadError("cannot read gazetteer %s: %s" % (path, exc)) from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 7:
            raise LoadError("%s:%d: expected 7 tab-separated fields, got %d"
                            % (path, lineno, len(fields)))
        rid, canonical, variants, country, lat, lon, size_class = fields
        try:
            rid = int(rid)
            lat = float(lat)
            lon = float(lon)
            size_class = int(size_class)
        except ValueError as exc:
            raise LoadError("%s:%d: %s" % (path, lineno, exc)) from exc
        if not canonical:
            raise LoadError("%s:%d: empty canonical name" % (path, lineno))
        if variants:
            variant_list = tuple(variants.split("|"))
            if any(not v for v in variant_list):
                raise LoadError("%s:%d: empty variant" % (path, lineno))
        else:
            variant_list = ()
        if not (1 <= size_class <= 6):
            raise LoadError("%s:%d: size_class %d outside 1..6" % (path, lineno, size_class))
        if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
            raise LoadError("%s:%d: coordinates out of range" % (path, lineno))
        if len(country) != 2 or not country.isalpha() or not country.isupper():
            raise LoadError("%s:%d: bad country code %r" % (path, lineno, country))
        if max_size_class is not None and size_class > max_size_class and country not in keep:
            continue
        records.append(PlaceRecord(rid, canonical, variant_list, country, lat, lon, size_class))
    try:
        return GazetteerIndex(records)
    except LoadError as exc:
        raise LoadError("%s: %s" % (path, exc)) from exc


def load_stop_words(path, language: str) -> GeoStopList:
    """One surface form per line, exact-case, deduplicated."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LoadError("cannot read stop-word list %s: %s" % (path, exc)) from exc
    words = frozenset(w.strip() for w in lines if w.strip())
    return GeoStopList(language=language, words=words)


def load_triggers(path) -> TriggerIndex:
    """TSV ``surface<TAB>country<TAB>kind`` with ``#`` comments."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LoadError("cannot read trigger file %s: %s" % (path, exc)) from exc
    triggers = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise LoadError("%s:%d: expected 3 tab-separated fields" % (path, lineno))
        surface, country, kind = fields
        try:
            triggers.append(CountryTrigger(surface, country, kind))
        except ValueError as exc:
            raise LoadError("%s:%d: %s" % (path, lineno, exc)) from exc
    return TriggerIndex(triggers)


def propose_stop_words(index: GazetteerIndex, frequency_list, top_n: int):
    """Candidate geo stop words for human review.

    Every single-token gazetteer surface that occurs (case-insensitively)
    among the ``top_n`` most frequent words, in frequency-rank order.  The
    output is a proposal only; nothing is ever applied automatically.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    surfaces = {}
    for s in index.single_token_surfaces():
        surfaces.setdefault(s.lower(), []).append(s)
    proposals = []
    seen = set()
    for word in list(frequency_list)[:top_n]:
        key = word.lower()
        for surface in sorted(surfaces.get(key, ())):
            if surface not in seen:
                seen.add(surface)
                proposals.append(surface)
    return proposals
