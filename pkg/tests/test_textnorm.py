import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from claimsift import textnorm


class TestFold:
    def test_lowercases(self):
        assert textnorm.fold("COVID Hoax") == "covid hoax"

    def test_strips_diacritics(self):
        assert textnorm.fold("Pandémie à Paris") == "pandemie a paris"

    def test_idempotent(self):
        s = "Größe MÊLÉE covid19"
        assert textnorm.fold(textnorm.fold(s)) == textnorm.fold(s)

    @given(st.text(max_size=60))
    def test_fold_idempotent_property(self, s):
        assert textnorm.fold(textnorm.fold(s)) == textnorm.fold(s)


class TestStripNoise:
    def test_removes_urls(self):
        assert "http" not in textnorm.strip_noise("see https://t.co/abc now")

    def test_removes_www_urls(self):
        assert "www" not in textnorm.strip_noise("at www.example.com today")

    def test_removes_mentions(self):
        assert "@who" not in textnorm.strip_noise("ask @who about it")

    def test_keeps_hashtag_text(self):
        assert "#covid19" in textnorm.strip_noise("trending #covid19 now")


class TestTokenize:
    def test_basic(self):
        assert textnorm.tokenize("The VIRUS spreads fast!") == ["the", "virus", "spreads", "fast"]

    def test_urls_and_mentions_dropped(self):
        toks = textnorm.tokenize("@user check https://example.com/x #Covid19 facts")
        assert toks == ["check", "covid19", "facts"]

    def test_empty(self):
        assert textnorm.tokenize("") == []
        assert textnorm.tokenize("   !!! ...") == []

    @given(st.text(alphabet=string.printable, max_size=80))
    def test_tokens_are_folded_words(self, s):
        for tok in textnorm.tokenize(s):
            assert tok == textnorm.fold(tok)
            assert textnorm.WORD_RE.fullmatch(tok)


class TestHashtags:
    def test_extracts_folded(self):
        assert textnorm.hashtags("Big #COVID19 and #Hoax news") == {"#covid19", "#hoax"}

    def test_none(self):
        assert textnorm.hashtags("no tags here") == set()


class TestStopwordsAndContent:
    def test_stopwords_nonempty_and_folded(self):
        sw = textnorm.stopwords()
        assert len(sw) > 50
        assert all(w == textnorm.fold(w) for w in sw)
        assert "the" in sw and "is" in sw

    def test_content_tokens_drop_stopwords(self):
        assert textnorm.content_tokens("the virus is a hoax") == ["virus", "hoax"]

    def test_content_token_set(self):
        assert textnorm.content_token_set("The virus, the VIRUS!") == {"virus"}


class TestJaccard:
    def test_identical(self):
        assert textnorm.jaccard({"a", "b"}, {"a", "b"}) == 1.0

    def test_disjoint(self):
        assert textnorm.jaccard({"a"}, {"b"}) == 0.0

    def test_both_empty(self):
        assert textnorm.jaccard(set(), set()) == 0.0

    def test_half(self):
        assert textnorm.jaccard({"a", "b"}, {"b", "c"}) == pytest.approx(1 / 3)

    @given(
        st.sets(st.text(string.ascii_lowercase, min_size=1, max_size=4), max_size=8),
        st.sets(st.text(string.ascii_lowercase, min_size=1, max_size=4), max_size=8),
    )
    def test_bounds_and_symmetry(self, a, b):
        j = textnorm.jaccard(a, b)
        assert 0.0 <= j <= 1.0
        assert j == textnorm.jaccard(b, a)


class TestKeywords:
    def test_bundled_list(self):
        kws = textnorm.default_keywords()
        assert len(kws) >= 50
        assert any(k.startswith("#") for k in kws)


class TestNormalizeUrl:
    def test_scheme_and_www(self):
        assert textnorm.normalize_url("https://www.Example.com/a/") == "example.com/a"

    def test_fragment_dropped_query_kept(self):
        u = textnorm.normalize_url("https://poynter.org/?ifcn_misinformation=x#frag")
        assert u == "poynter.org/?ifcn_misinformation=x"

    def test_equivalent_forms_agree(self):
        forms = [
            "http://www.site.org/page",
            "https://site.org/page/",
            "HTTPS://WWW.SITE.ORG/page",
        ]
        assert len({textnorm.normalize_url(f) for f in forms}) == 1
