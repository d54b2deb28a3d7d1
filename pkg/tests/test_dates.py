import datetime

import pytest

from placetime import dates
from placetime.dates import (DateKind, NormalizedDate, extract_dates,
                             find_lexical_dates, find_numeric_dates,
                             infer_document_order, load_date_lexicon,
                             normalize_match, resolve_relative)
from placetime.errors import ContractError, LoadError


def normals(text, lexicon, **kw):
    return [m.normal.to_string() for m in extract_dates(text, lexicon, **kw)]


class TestNormalizedDate:
    def test_to_string_forms(self):
        assert NormalizedDate(DateKind.FULL, year=2003, month=5, day=31).to_string() == "2003-05-31"
        assert NormalizedDate(DateKind.YEAR_MONTH, year=2003, month=5).to_string() == "2003-05"
        assert NormalizedDate(DateKind.MONTH_DAY, month=5, day=31).to_string() == "--05-31"
        assert NormalizedDate(DateKind.RELATIVE_DAY, rel_offset=-1).to_string() == "D-1"
        assert NormalizedDate(DateKind.RELATIVE_MONTH, month=6, rel_offset=1).to_string() == "M06+1"
        assert NormalizedDate(DateKind.MONTH_RELATIVE_YEAR, month=2,
                              rel_offset=-1).to_string() == "M02Y-1"

    def test_kind_field_contracts(self):
        with pytest.raises(ValueError):
            NormalizedDate(DateKind.FULL, year=2003, month=5)  # no day
        with pytest.raises(ValueError):
            NormalizedDate(DateKind.YEAR_MONTH, year=2003, month=5, day=2)
        with pytest.raises(ValueError):
            NormalizedDate(DateKind.MONTH_DAY, month=13, day=2)

    def test_calendar_validity(self):
        with pytest.raises(ValueError):
            NormalizedDate(DateKind.FULL, year=2003, month=2, day=29)
        # leap-permissive when year unknown
        assert NormalizedDate(DateKind.MONTH_DAY, month=2, day=29).day == 29
        with pytest.raises(ValueError):
            NormalizedDate(DateKind.MONTH_DAY, month=2, day=30)


class TestLexiconLoad:
    def test_english_fixture(self, lexicon_en):
        assert lexicon_en.language == "en"
        assert set(lexicon_en.months) == set(range(1, 13))
        assert lexicon_en.relative_days["yesterday"] == -1
        assert lexicon_en.pre_modifiers["next"] == 1

    def test_romanian_diacritic_variants(self, lexicon_ro):
        surfaces = {s for forms in lexicon_ro.day_ordinals.values() for s in forms}
        assert "întîi" in surfaces and "intii" in surfaces

    def test_missing_month_rejected(self, tmp_path):
        path = tmp_path / "bad.lex"
        path.write_text("[meta]\nlanguage = xx\ndefault_order = DMY\n"
                        "[months]\n" +
                        "".join("%d = m%d\n" % (i, i) for i in range(1, 12)))
        with pytest.raises(LoadError):
            load_date_lexicon(path)

    def test_conflicting_surface_rejected(self, tmp_path):
        path = tmp_path / "bad.lex"
        path.write_text("[meta]\nlanguage = xx\ndefault_order = DMY\n"
                        "[months]\n" +
                        "".join("%d = m%d\n" % (i, i) for i in range(1, 13)) +
                        "[relative_days]\nm3 = -1\n")
        with pytest.raises(LoadError):
            load_date_lexicon(path)


class TestNumericFinder:
    def test_dmy_forced(self):
        (c,) = find_numeric_dates("on 13/02/03 it")
        assert c.dmy_possible and not c.mdy_possible

    def test_mdy_forced(self):
        (c,) = find_numeric_dates("on 12/31/03 it")
        assert c.mdy_possible and not c.dmy_possible

    def test_ymd_forced(self):
        (c,) = find_numeric_dates("1997/04/01")
        assert c.ymd

    def test_ambiguous(self):
        (c,) = find_numeric_dates("01/02/03")
        assert c.dmy_possible and c.mdy_possible

    def test_mixed_separators_rejected(self):
        assert find_numeric_dates("13/02.2003") == []

    def test_digit_boundaries(self):
        assert find_numeric_dates("phone 113/02/034 here") == []

    def test_surface_and_offset(self):
        text = "x 31.5.2003 y"
        (c,) = find_numeric_dates(text)
        assert text[c.offset:c.offset + c.length] == c.surface == "31.5.2003"


class TestOrderInference:
    def test_mdy_document(self, lexicon_en):
        cands = find_numeric_dates("12/31/03 then 01/02/03")
        assert infer_document_order(cands) == dates.ORDER_MDY
        assert normals("12/31/03 then 01/02/03", lexicon_en) == ["2003-12-31", "2003-01-02"]

    def test_lone_ambiguous_defaults_dmy(self, lexicon_en):
        assert normals("01/02/03", lexicon_en) == ["2003-02-01"]

    def test_conflict_falls_back_but_forced_readings_stand(self, lexicon_en):
        out = normals("31/12/03 and 12/31/03", lexicon_en)
        assert out == ["2003-12-31", "2003-12-31"]

    def test_default_override(self, lexicon_en):
        assert normals("01/02/03", lexicon_en, default_order="MDY") == ["2003-01-02"]

    def test_idempotent_on_normalized_output(self):
        cands = find_numeric_dates("12/31/03 then 01/02/03")
        order = infer_document_order(cands)
        # the normalized strings re-parse to the same decision
        again = find_numeric_dates("2003-12-31 2003-01-02")
        assert infer_document_order(again, default=order) == order


class TestLexicalFinder:
    def test_spelled_year(self, lexicon_en):
        out = extract_dates("the sixth of March in the year nineteen eighty four",
                            lexicon_en)
        assert [m.normal.to_string() for m in out] == ["1984-03-06"]

    def test_year_month_and_month_day(self, lexicon_en):
        assert normals("Jan. 2003", lexicon_en) == ["2003-01"]
        assert normals("third February", lexicon_en) == ["--02-03"]

    def test_relative_kinds(self, lexicon_en):
        assert normals("February last year", lexicon_en) == ["M02Y-1"]
        assert normals("next June", lexicon_en) == ["M06+1"]
        assert normals("last September", lexicon_en) == ["M09-1"]
        assert normals("yesterday", lexicon_en) == ["D-1"]
        assert normals("today and tomorrow", lexicon_en) == ["D+0", "D+1"]

    def test_late_and_mid_modifiers(self, lexicon_en):
        assert normals("late January", lexicon_en) == ["M01+0"]
        assert normals("mid August", lexicon_en) == ["M08+0"]

    def test_period_first_part_missed(self, lexicon_en):
        out = extract_dates("7-8 May 2003", lexicon_en)
        assert [(m.surface, m.normal.to_string()) for m in out] == [("8 May 2003", "2003-05-08")]

    def test_exact_case_month(self, lexicon_en):
        assert normals("this may sound reasonable", lexicon_en) == []
        assert normals("this May", lexicon_en) == ["M05+0"]

    def test_bare_month_not_a_date(self, lexicon_en):
        assert normals("in May", lexicon_en) == []

    def test_connector_year_after(self, lexicon_en):
        assert normals("1999, the 2nd of May", lexicon_en) == ["1999-05-02"]

    def test_day_month_year(self, lexicon_en):
        out = extract_dates("signed on 21 March 2001 in", lexicon_en)
        assert [(m.surface, m.normal.to_string()) for m in out] == [
            ("21 March 2001", "2001-03-21")]

    def test_romanian_full_date(self, lexicon_ro):
        out = extract_dates("Armistice signed la 11 noiembrie 1918", lexicon_ro)
        assert [(m.surface, m.normal.to_string()) for m in out] == [
            ("11 noiembrie 1918", "1918-11-11")]

    def test_romanian_mai_false_positive(self, lexicon_ro):
        # known homograph error: adverb "mai" reads as the month
        assert normals("cei doi mai incercasera", lexicon_ro) == ["--05-02"]


class TestFormatClosure:
    RECOGNISED = [
        ("3-04-03", "2003-04-03"),
        ("21.2.1983", "1983-02-21"),
        ("1997/04/01", "1997-04-01"),
        ("1999, the 2nd of May", "1999-05-02"),
        ("the sixth of March in the year nineteen eighty four", "1984-03-06"),
        ("third February", "--02-03"),
        ("Jan. 2003", "2003-01"),
        ("yesterday", "D-1"),
        ("today", "D+0"),
        ("tomorrow", "D+1"),
        ("next June", "M06+1"),
        ("last September", "M09-1"),
        ("February last year", "M02Y-1"),
    ]
    NOT_RECOGNISED = [
        "1.2.15",
        "1990 ;",
        "the 1970s",
        "two thousand and two",
        "in May",
        "last month",
        "next Summer",
        "Labour Day",
        "on Tuesday",
        "in the third quarter",
        "February three years ago is long gone",
    ]

    @pytest.mark.parametrize("text,normal", RECOGNISED)
    def test_recognised(self, lexicon_en, text, normal):
        out = extract_dates(text, lexicon_en, reject_two_digit_years=True)
        assert [m.normal.to_string() for m in out] == [normal]

    @pytest.mark.parametrize("text", NOT_RECOGNISED)
    def test_not_recognised(self, lexicon_en, text):
        out = extract_dates(text, lexicon_en, reject_two_digit_years=True)
        assert out == []

    def test_february_three_years_ago_keeps_no_relative(self, lexicon_en):
        # "February" alone would be a bare month; the unknown phrase after it
        # must not rescue the match
        assert normals("February three years ago", lexicon_en) == []


class TestTwoDigitYearFlag:
    def test_padded_fields_still_accepted(self, lexicon_en):
        assert normals("3-04-03", lexicon_en, reject_two_digit_years=True) == ["2003-04-03"]

    def test_unpadded_rejected_with_diagnostic(self, lexicon_en):
        diags = []
        out = extract_dates("1.2.15", lexicon_en, reject_two_digit_years=True,
                            diagnostics=diags)
        assert out == []
        assert len(diags) == 1 and diags[0][1] == "1.2.15"

    def test_default_accepts(self, lexicon_en):
        assert normals("1.2.15", lexicon_en) == ["2015-02-01"]


class TestNormalization:
    def test_pivot(self, lexicon_en):
        assert normals("1.2.49", lexicon_en) == ["2049-02-01"]
        assert normals("1.2.50", lexicon_en) == ["1950-02-01"]

    def test_invalid_calendar_discarded(self, lexicon_en):
        diags = []
        out = extract_dates("31/02/2003", lexicon_en, diagnostics=diags)
        assert out == []
        assert diags and diags[0][1] == "31/02/2003"


class TestResolveRelative:
    def test_relative_day(self):
        n = NormalizedDate(DateKind.RELATIVE_DAY, rel_offset=-1)
        r = resolve_relative(n, datetime.date(2003, 3, 1))
        assert r.to_string() == "2003-02-28"

    def test_relative_month_forward(self):
        n = NormalizedDate(DateKind.RELATIVE_MONTH, month=6, rel_offset=1)
        assert resolve_relative(n, datetime.date(2003, 9, 10)).to_string() == "2004-06"
        assert resolve_relative(n, datetime.date(2003, 3, 10)).to_string() == "2003-06"

    def test_relative_month_backward(self):
        n = NormalizedDate(DateKind.RELATIVE_MONTH, month=9, rel_offset=-1)
        assert resolve_relative(n, datetime.date(2003, 5, 5)).to_string() == "2002-09"
        assert resolve_relative(n, datetime.date(2003, 11, 5)).to_string() == "2003-09"

    def test_same_month_is_strict(self):
        n = NormalizedDate(DateKind.RELATIVE_MONTH, month=6, rel_offset=1)
        assert resolve_relative(n, datetime.date(2003, 6, 15)).to_string() == "2004-06"

    def test_this_month_same_year(self):
        n = NormalizedDate(DateKind.RELATIVE_MONTH, month=1, rel_offset=0)
        assert resolve_relative(n, datetime.date(2003, 12, 31)).to_string() == "2003-01"

    def test_month_relative_year(self):
        n = NormalizedDate(DateKind.MONTH_RELATIVE_YEAR, month=2, rel_offset=-1)
        assert resolve_relative(n, datetime.date(2003, 5, 5)).to_string() == "2002-02"

    def test_non_relative_rejected(self):
        n = NormalizedDate(DateKind.FULL, year=2003, month=1, day=1)
        with pytest.raises(ContractError):
            resolve_relative(n, datetime.date(2003, 1, 1))


class TestExtractPipeline:
    def test_offset_fidelity(self, lexicon_en):
        text = ("Meetings on 21 March 2001, then 12/31/03, postponed to "
                "next June; yesterday the sixth of March was floated.")
        for m in extract_dates(text, lexicon_en):
            assert text[m.offset:m.offset + m.length] == m.surface

    def test_sorted_and_non_overlapping(self, lexicon_en):
        text = "21.2.1983 then Jan. 2003, third February, 01/02/03"
        out = extract_dates(text, lexicon_en)
        offs = [m.offset for m in out]
        assert offs == sorted(offs)
        for a, b in zip(out, out[1:]):
            assert a.offset + a.length <= b.offset

    def test_reference_resolves_relatives(self, lexicon_en):
        out = extract_dates("yesterday and next June", lexicon_en,
                            reference=datetime.date(2003, 9, 10))
        assert [m.resolved.to_string() for m in out] == ["2003-09-09", "2004-06"]

    def test_absolute_matches_have_no_resolved(self, lexicon_en):
        out = extract_dates("21.2.1983", lexicon_en,
                            reference=datetime.date(2003, 9, 10))
        assert out[0].resolved is None
