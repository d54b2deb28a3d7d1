"""Date-expression recognition and normalization.

Recognition is driven entirely by a per-language lexicon file (month
names, day ordinals, relative-day words, modifiers, connectors, number
words), so adding a language means writing a parameter file, not code.

The pipeline first finds complete numeric dates (``13/02/03``,
``31.5.2003``), infers whether the document writes day-month-year or
month-day-year, then anchors on month names and scans both sides for the
remaining parts.  Matches carry character offset, length and a typed
normal form; relative expressions can be resolved against a reference
date.
"""

from __future__ import annotations

import calendar
import datetime
import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from .errors import ConfigError, ContractError, LoadError

ORDER_DMY = "dmy"
ORDER_MDY = "mdy"

# Permissive month lengths (leap year) used when the year is unknown.
_MONTH_DAYS = (31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


class DateKind(Enum):
    FULL = "full"
    YEAR_MONTH = "year_month"
    MONTH_DAY = "month_day"
    RELATIVE_DAY = "relative_day"
    RELATIVE_MONTH = "relative_month"
    MONTH_RELATIVE_YEAR = "month_relative_year"


@dataclass(frozen=True)
class NormalizedDate:
    kind: DateKind
    year: int | None = None
    month: int | None = None
    day: int | None = None
    rel_offset: int | None = None

    def __post_init__(self):
        k = self.kind
        if k is DateKind.FULL:
            self._need(year=True, month=True, day=True)
        elif k is DateKind.YEAR_MONTH:
            self._need(year=True, month=True)
        elif k is DateKind.MONTH_DAY:
            self._need(month=True, day=True)
        elif k is DateKind.RELATIVE_DAY:
            self._need(rel=True)
        elif k is DateKind.RELATIVE_MONTH:
            self._need(month=True, rel=True)
        elif k is DateKind.MONTH_RELATIVE_YEAR:
            self._need(month=True, rel=True)
        if self.month is not None and not 1 <= self.month <= 12:
            raise ValueError("month %r outside 1..12" % (self.month,))
        if self.day is not None:
            if self.year is not None and self.month is not None:
                limit = calendar.monthrange(self.year, self.month)[1]
            elif self.month is not None:
                limit = _MONTH_DAYS[self.month - 1]
            else:
                limit = 31
            if not 1 <= self.day <= limit:
                raise ValueError("day %r invalid for month %r year %r"
                                 % (self.day, self.month, self.year))

    def _need(self, year=False, month=False, day=False, rel=False):
        for name, want in (("year", year), ("month", month),
                           ("day", day), ("rel_offset", rel)):
            have = getattr(self, name) is not None
            if have != want:
                raise ValueError("%s: field %s %s for kind %s"
                                 % (self.kind.value, name,
                                    "unexpected" if have else "required", self.kind))

    def to_string(self) -> str:
        k = self.kind
        if k is DateKind.FULL:
            return "%04d-%02d-%02d" % (self.year, self.month, self.day)
        if k is DateKind.YEAR_MONTH:
            return "%04d-%02d" % (self.year, self.month)
        if k is DateKind.MONTH_DAY:
            return "--%02d-%02d" % (self.month, self.day)
        if k is DateKind.RELATIVE_DAY:
            return "D%+d" % self.rel_offset
        if k is DateKind.RELATIVE_MONTH:
            return "M%02d%+d" % (self.month, self.rel_offset)
        return "M%02dY%+d" % (self.month, self.rel_offset)


@dataclass(frozen=True)
class DateMatch:
    offset: int
    length: int
    surface: str
    normal: NormalizedDate
    resolved: NormalizedDate | None = None


@dataclass(frozen=True)
class DateLexicon:
    language: str
    default_order: str
    months: dict            # 1..12 -> [surface, ...]
    day_ordinals: dict      # 1..31 -> [surface, ...]
    relative_days: dict     # surface -> day offset
    pre_modifiers: dict     # surface -> month-relative sign
    relative_years: dict    # surface phrase -> year offset
    connectors: tuple       # surface phrases
    number_words: dict      # surface -> integer value (0 = join word)
    post_modifiers: dict    # reserved; shipped empty


# --------------------------------------------------------------------------
# lexicon file parsing

_SECTIONS = ("meta", "months", "day_ordinals", "relative_days", "pre_modifiers",
             "relative_years", "connectors", "number_words", "post_modifiers")


def load_date_lexicon(path) -> DateLexicon:
    """Parse a sectioned ``key = value`` parameter file (see data/lexicons)."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise LoadError("cannot read lexicon %s: %s" % (path, exc)) from exc
    sections = {name: [] for name in _SECTIONS}
    current = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in sections:
                raise LoadError("%s:%d: unknown section [%s]" % (path, lineno, current))
            continue
        if current is None:
            raise LoadError("%s:%d: content before first section" % (path, lineno))
        sections[current].append((lineno, line))

    def keyvals(name):
        out = []
        for lineno, line in sections[name]:
            if "=" not in line:
                raise LoadError("%s:%d: expected 'key = value' in [%s]" % (path, lineno, name))
            key, _, value = line.partition("=")
            out.append((lineno, key.strip(), value.strip()))
        return out

    meta = {k: v for _, k, v in keyvals("meta")}
    language = meta.get("language", "")
    default_order = meta.get("default_order", ORDER_DMY).lower()
    if default_order not in (ORDER_DMY, ORDER_MDY):
        raise LoadError("%s: default_order must be dmy or mdy" % path)

    months = {}
    for lineno, key, value in keyvals("months"):
        try:
            idx = int(key)
        except ValueError as exc:
            raise LoadError("%s:%d: month index %r" % (path, lineno, key)) from exc
        if not 1 <= idx <= 12 or idx in months:
            raise LoadError("%s:%d: bad or duplicate month index %d" % (path, lineno, idx))
        surfaces = [s for s in value.split("|") if s]
        if not surfaces:
            raise LoadError("%s:%d: month %d has no surfaces" % (path, lineno, idx))
        months[idx] = surfaces
    if set(months) != set(range(1, 13)):
        missing = sorted(set(range(1, 13)) - set(months))
        raise LoadError("%s: [months] missing indices %s" % (path, missing))

    day_ordinals = {}
    for lineno, key, value in keyvals("day_ordinals"):
        idx = int(key)
        if not 1 <= idx <= 31:
            raise LoadError("%s:%d: day index %d outside 1..31" % (path, lineno, idx))
        day_ordinals.setdefault(idx, []).extend(s for s in value.split("|") if s)

    def int_map(name):
        out = {}
        for lineno, key, value in keyvals(name):
            if key in out:
                raise LoadError("%s:%d: duplicate surface %r in [%s]" % (path, lineno, key, name))
            try:
                out[key] = int(value)
            except ValueError as exc:
                raise LoadError("%s:%d: bad integer %r" % (path, lineno, value)) from exc
        return out

    relative_days = int_map("relative_days")
    pre_modifiers = int_map("pre_modifiers")
    relative_years = int_map("relative_years")
    number_words = int_map("number_words")
    post_modifiers = int_map("post_modifiers")
    connectors = tuple(line for _, line in sections["connectors"])

    # A surface carrying two different meanings would make matching ambiguous.
    pools = {
        "months": [s for surfs in months.values() for s in surfs],
        "day_ordinals": [s for surfs in day_ordinals.values() for s in surfs],
        "relative_days": list(relative_days),
        "pre_modifiers": list(pre_modifiers),
        "relative_years": list(relative_years),
    }
    seen = {}
    for pool_name, surfaces in pools.items():
        for s in surfaces:
            if s in seen and seen[s] != pool_name:
                raise LoadError("%s: surface %r appears in both [%s] and [%s]"
                                % (path, s, seen[s], pool_name))
            seen[s] = pool_name
    for surfs in (months, day_ordinals):
        flat = [s for v in surfs.values() for s in v]
        if len(flat) != len(set(flat)):
            dupes = sorted({s for s in flat if flat.count(s) > 1})
            raise LoadError("%s: conflicting duplicate surfaces %s" % (path, dupes))

    return DateLexicon(language=language, default_order=default_order, months=months,
                       day_ordinals=day_ordinals, relative_days=relative_days,
                       pre_modifiers=pre_modifiers, relative_years=relative_years,
                       connectors=connectors, number_words=number_words,
                       post_modifiers=post_modifiers)


# --------------------------------------------------------------------------
# numeric dates

@dataclass(frozen=True)
class NumericCandidate:
    offset: int
    length: int
    surface: str
    f1: str
    sep: str
    f2: str
    f3: str
    ymd: bool
    dmy_possible: bool
    mdy_possible: bool


_RE_NUM_YMD = re.compile(r"(?<!\d)(\d{4})([./-])(\d{1,2})\2(\d{1,2})(?!\d)")
_RE_NUM_GEN = re.compile(r"(?<!\d)(\d{1,2})([./-])(\d{1,2})\2(\d{4}|\d{2})(?!\d)")


def _day_ok(month: int, day: int) -> bool:
    return 1 <= month <= 12 and 1 <= day <= _MONTH_DAYS[month - 1]


def find_numeric_dates(text: str):
    """Complete numeric date candidates with their possible field orders."""
    candidates = []
    taken = []
    for m in _RE_NUM_YMD.finditer(text):
        f1, sep, f2, f3 = m.group(1), m.group(2), m.group(3), m.group(4)
        candidates.append(NumericCandidate(
            offset=m.start(), length=m.end() - m.start(), surface=m.group(0),
            f1=f1, sep=sep, f2=f2, f3=f3, ymd=True,
            dmy_possible=False, mdy_possible=False))
        taken.append((m.start(), m.end()))
    for m in _RE_NUM_GEN.finditer(text):
        if any(m.start() < e and m.end() > s for s, e in taken):
            continue
        f1, sep, f2, f3 = m.group(1), m.group(2), m.group(3), m.group(4)
        a, b = int(f1), int(f2)
        candidates.append(NumericCandidate(
            offset=m.start(), length=m.end() - m.start(), surface=m.group(0),
            f1=f1, sep=sep, f2=f2, f3=f3, ymd=False,
            dmy_possible=_day_ok(b, a), mdy_possible=_day_ok(a, b)))
    candidates.sort(key=lambda c: c.offset)
    return candidates


def infer_document_order(candidates, default: str = ORDER_DMY) -> str:
    """Document-wide field order from unambiguous numeric candidates."""
    forced_dmy = any(c.dmy_possible and not c.mdy_possible
                     for c in candidates if not c.ymd)
    forced_mdy = any(c.mdy_possible and not c.dmy_possible
                     for c in candidates if not c.ymd)
    if forced_mdy and not forced_dmy:
        return ORDER_MDY
    if forced_dmy and not forced_mdy:
        return ORDER_DMY
    return default


def _expand_year(field: str) -> int:
    year = int(field)
    if len(field) == 2:
        return 2000 + year if year < 50 else 1900 + year
    return year


# --------------------------------------------------------------------------
# lexical dates

@dataclass(frozen=True)
class LexicalCandidate:
    offset: int
    length: int
    surface: str
    kind: DateKind
    year: int | None = None
    month: int | None = None
    day: int | None = None
    rel_offset: int | None = None


def _alt(surfaces):
    return "|".join(re.escape(s) for s in sorted(surfaces, key=len, reverse=True))


class _Scanner:
    """Compiled month-anchored patterns for one lexicon."""

    def __init__(self, lexicon: DateLexicon):
        self.lexicon = lexicon
        self.month_of = {}
        for idx, surfaces in lexicon.months.items():
            for s in surfaces:
                self.month_of[s] = idx
        self.day_of = {}
        for idx, surfaces in lexicon.day_ordinals.items():
            for s in surfaces:
                self.day_of[s] = idx

        month_alt = _alt(self.month_of)
        conn = "(?i:%s)" % _alt(lexicon.connectors) if lexicon.connectors else "(?!x)x"
        day_surf = _alt(self.day_of)
        day_alt = r"(?:%s|\d{1,2})" % day_surf if day_surf else r"\d{1,2}"

        self.re_month = re.compile(r"(?<!\w)(%s)(?!\w)" % month_alt)
        self.re_day_left = re.compile(
            r"(?<!\w)(?:(%s)[\s,]+)?(%s)(?:[\s,]+(?:%s))?[\s,]+\Z"
            % (conn, day_alt, conn))
        self.re_year_left = re.compile(
            r"(?<!\w)(\d{4})[\s,]*(?:(?:%s)[\s,]+)?\Z" % conn)
        self.re_year_right = re.compile(
            r"[\s,]+(?:(?:%s)[\s,]+)?(\d{4})(?!\w)" % conn)
        self.re_day_right = re.compile(
            r"[\s,]+(?:(?:%s)[\s,]+)?(%s)(?!\w)" % (conn, day_alt))
        if lexicon.pre_modifiers:
            self.re_premod = re.compile(
                r"(?<!\w)(%s)[\s-]+\Z" % _alt(lexicon.pre_modifiers))
        else:
            self.re_premod = None
        if lexicon.relative_years:
            self.re_relyear = re.compile(
                r"[\s,]+(?:(?:%s)[\s,]+)?(%s)(?!\w)"
                % (conn, _alt(lexicon.relative_years)))
        else:
            self.re_relyear = None
        if lexicon.number_words:
            numword = _alt(lexicon.number_words)
            self.re_numseq = re.compile(
                r"[\s,]+(?:(?:%s)[\s,]+)?((?:%s)(?:[\s-]+(?:%s)){0,4})(?!\w)"
                % (conn, numword, numword))
        else:
            self.re_numseq = None
        if lexicon.relative_days:
            self.re_relday = re.compile(
                r"(?<!\w)(%s)(?!\w)" % _alt(lexicon.relative_days))
        else:
            self.re_relday = None

    def parse_day(self, surface: str):
        if surface in self.day_of:
            return self.day_of[surface]
        if surface.isdigit():
            value = int(surface)
            if 1 <= value <= 31:
                return value
        return None

    def compose_spelled_year(self, words):
        """Compose number words into a year value; None if not a year.

        Pairs grammar: (19)(84) -> 1984, with tens+units grouping.  The
        thousand form (two thousand and two) is flagged so callers can
        restrict it to day-bearing dates.
        """
        vals = [self.lexicon.number_words[w] for w in words]
        vals = [v for v in vals if v != 0]  # join words like "and"
        if not vals:
            return None, False
        if 1000 in vals:
            i = vals.index(1000)
            head, tail = vals[:i], vals[i + 1:]
            if len(head) == 1 and 1 <= head[0] <= 9 and len(tail) <= 2:
                rest = _group_tens(tail)
                if len(rest) <= 1 and (not rest or 0 <= rest[0] <= 99):
                    return head[0] * 1000 + (rest[0] if rest else 0), True
            return None, False
        groups = _group_tens(vals)
        if len(groups) == 2 and 10 <= groups[0] <= 29 and 0 <= groups[1] <= 99:
            return groups[0] * 100 + groups[1], False
        return None, False


def _group_tens(vals):
    out = []
    i = 0
    while i < len(vals):
        v = vals[i]
        if v % 10 == 0 and 20 <= v <= 90 and i + 1 < len(vals) and 1 <= vals[i + 1] <= 9:
            out.append(v + vals[i + 1])
            i += 2
        else:
            out.append(v)
            i += 1
    return out


_SCANNER_CACHE = {}


def _scanner(lexicon: DateLexicon) -> _Scanner:
    scanner = _SCANNER_CACHE.get(id(lexicon))
    if scanner is None or scanner.lexicon is not lexicon:
        scanner = _Scanner(lexicon)
        _SCANNER_CACHE[id(lexicon)] = scanner
    return scanner


def find_lexical_dates(text: str, lexicon: DateLexicon):
    """Month-anchored and relative-day candidates (not yet validated)."""
    sc = _scanner(lexicon)
    candidates = []
    for m in sc.re_month.finditer(text):
        cand = _scan_month(text, m, sc)
        if cand is not None:
            candidates.append(cand)
    if sc.re_relday is not None:
        for m in sc.re_relday.finditer(text):
            candidates.append(LexicalCandidate(
                offset=m.start(), length=m.end() - m.start(), surface=m.group(0),
                kind=DateKind.RELATIVE_DAY,
                rel_offset=lexicon.relative_days[m.group(1)]))
    candidates.sort(key=lambda c: c.offset)
    return candidates


def _scan_month(text, m, sc: _Scanner):
    month = sc.month_of[m.group(1)]
    start, end = m.start(1), m.end(1)
    left = text[:start]
    day = year = rel_year = None
    spelled_thousand = False

    lm = sc.re_day_left.search(left)
    if lm is not None:
        parsed = sc.parse_day(lm.group(2))
        if parsed is not None:
            day = parsed
            start = lm.start(1) if lm.group(1) else lm.start(2)
            ym = sc.re_year_left.search(text[:start])
            if ym is not None:
                year = int(ym.group(1))
                start = ym.start(1)
            else:
                # A leading connector only belongs to the span when a year
                # precedes it ("1999, the 2nd of May").
                start = lm.start(2)
    if day is None:
        ym = sc.re_year_left.search(left)
        if ym is not None:
            year = int(ym.group(1))
            start = ym.start(1)

    pos = end
    if sc.re_relyear is not None and day is None and year is None:
        rm = sc.re_relyear.match(text, pos)
        if rm is not None:
            rel_year = sc.lexicon.relative_years[rm.group(1)]
            end = rm.end(1)
    if rel_year is None:
        for _ in range(2):
            matched = False
            if year is None:
                rm = sc.re_year_right.match(text, pos)
                if rm is not None:
                    year = int(rm.group(1))
                    pos = end = rm.end(1)
                    matched = True
                elif sc.re_numseq is not None:
                    rm = sc.re_numseq.match(text, pos)
                    if rm is not None:
                        words = re.split(r"[\s-]+", rm.group(1))
                        value, used_thousand = sc.compose_spelled_year(words)
                        if value is not None:
                            year = value
                            spelled_thousand = used_thousand
                            pos = end = rm.end(1)
                            matched = True
            if not matched and day is None:
                rm = sc.re_day_right.match(text, pos)
                if rm is not None:
                    parsed = sc.parse_day(rm.group(1))
                    if parsed is not None:
                        day = parsed
                        pos = end = rm.end(1)
                        matched = True
            if not matched:
                break

    # The thousand form of a spelled year only counts inside a full date.
    if spelled_thousand and day is None:
        year = None
        end = m.end(1)

    if rel_year is not None:
        kind = DateKind.MONTH_RELATIVE_YEAR
        return LexicalCandidate(offset=start, length=end - start,
                                surface=text[start:end], kind=kind,
                                month=month, rel_offset=rel_year)
    if day is not None and year is not None:
        return LexicalCandidate(offset=start, length=end - start,
                                surface=text[start:end], kind=DateKind.FULL,
                                year=year, month=month, day=day)
    if year is not None:
        return LexicalCandidate(offset=start, length=end - start,
                                surface=text[start:end], kind=DateKind.YEAR_MONTH,
                                year=year, month=month)
    if day is not None:
        return LexicalCandidate(offset=start, length=end - start,
                                surface=text[start:end], kind=DateKind.MONTH_DAY,
                                month=month, day=day)
    if sc.re_premod is not None:
        pm = sc.re_premod.search(left)
        if pm is not None:
            start = pm.start(1)
            return LexicalCandidate(offset=start, length=end - start,
                                    surface=text[start:end], kind=DateKind.RELATIVE_MONTH,
                                    month=month,
                                    rel_offset=sc.lexicon.pre_modifiers[pm.group(1)])
    return None


# --------------------------------------------------------------------------
# normalization and resolution

def normalize_match(candidate, document_order: str, lexicon: DateLexicon | None = None,
                    reject_two_digit_years: bool = False, diagnostics=None):
    """Turn a finder candidate into a DateMatch; None when discarded.

    Discards land on the diagnostics list as (offset, surface, reason).
    """
    def discard(reason):
        if diagnostics is not None:
            diagnostics.append((candidate.offset, candidate.surface, reason))
        return None

    if isinstance(candidate, NumericCandidate):
        if candidate.ymd:
            year, month, day = int(candidate.f1), int(candidate.f2), int(candidate.f3)
        else:
            if (reject_two_digit_years and len(candidate.f3) == 2
                    and len(candidate.f1) == 1 and len(candidate.f2) == 1):
                return discard("two-digit year with unpadded day and month")
            year = _expand_year(candidate.f3)
            if candidate.dmy_possible and not candidate.mdy_possible:
                day, month = int(candidate.f1), int(candidate.f2)
            elif candidate.mdy_possible and not candidate.dmy_possible:
                month, day = int(candidate.f1), int(candidate.f2)
            elif candidate.dmy_possible and candidate.mdy_possible:
                if document_order == ORDER_MDY:
                    month, day = int(candidate.f1), int(candidate.f2)
                else:
                    day, month = int(candidate.f1), int(candidate.f2)
            else:
                return discard("no valid day/month reading")
        try:
            normal = NormalizedDate(DateKind.FULL, year=year, month=month, day=day)
        except ValueError as exc:
            return discard(str(exc))
        return DateMatch(candidate.offset, candidate.length, candidate.surface, normal)

    try:
        normal = NormalizedDate(candidate.kind, year=candidate.year,
                                month=candidate.month, day=candidate.day,
                                rel_offset=candidate.rel_offset)
    except ValueError as exc:
        return discard(str(exc))
    return DateMatch(candidate.offset, candidate.length, candidate.surface, normal)


def resolve_relative(normal: NormalizedDate, reference: datetime.date) -> NormalizedDate:
    """Resolve a relative normal form against a reference date."""
    k = normal.kind
    if k is DateKind.RELATIVE_DAY:
        resolved = reference + datetime.timedelta(days=normal.rel_offset)
        return NormalizedDate(DateKind.FULL, year=resolved.year,
                              month=resolved.month, day=resolved.day)
    if k is DateKind.RELATIVE_MONTH:
        sign = normal.rel_offset
        month = normal.month
        if sign > 0:
            year = reference.year + (0 if month > reference.month else 1)
        elif sign < 0:
            year = reference.year - (0 if month < reference.month else 1)
        else:
            year = reference.year
        return NormalizedDate(DateKind.YEAR_MONTH, year=year, month=month)
    if k is DateKind.MONTH_RELATIVE_YEAR:
        return NormalizedDate(DateKind.YEAR_MONTH,
                              year=reference.year + normal.rel_offset,
                              month=normal.month)
    raise ContractError("cannot resolve non-relative kind %s" % k)


def extract_dates(text: str, lexicon: DateLexicon, reference: datetime.date | None = None,
                  default_order: str | None = None, reject_two_digit_years: bool = False,
                  diagnostics=None):
    """Full per-document pipeline; matches sorted by offset."""
    numeric = find_numeric_dates(text)
    default = (default_order or lexicon.default_order).lower()
    if default not in (ORDER_DMY, ORDER_MDY):
        raise ConfigError("default order must be dmy or mdy, got %r" % default_order)
    order = infer_document_order(numeric, default)
    matches = []
    for cand in numeric:
        m = normalize_match(cand, order, lexicon, reject_two_digit_years, diagnostics)
        if m is not None:
            matches.append(m)
    for cand in find_lexical_dates(text, lexicon):
        m = normalize_match(cand, order, lexicon, reject_two_digit_years, diagnostics)
        if m is not None:
            matches.append(m)

    # Overlaps keep the longest match, then the leftmost.
    matches.sort(key=lambda m: (-m.length, m.offset))
    kept = []
    spans = []
    for m in matches:
        if any(m.offset < e and m.offset + m.length > s for s, e in spans):
            continue
        kept.append(m)
        spans.append((m.offset, m.offset + m.length))
    kept.sort(key=lambda m: m.offset)

    if reference is not None:
        kept = [replace(m, resolved=resolve_relative(m.normal, reference))
                if m.normal.kind in (DateKind.RELATIVE_DAY, DateKind.RELATIVE_MONTH,
                                     DateKind.MONTH_RELATIVE_YEAR)
                else m
                for m in kept]
    return kept
