import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import ref_match, ref_normalize
from tubescan.errors import LexiconError
from tubescan.lexicon import KeywordLexicon, default_lexicon, match_keywords, normalize_text


@pytest.mark.parametrize(
    "raw, expected",
    [("FREE  Download!", "free download!"), ("", ""), ("CRACK\t2025", "crack 2025"), ("  a \n b  ", "a b")],
)
def test_normalize_examples(raw, expected):
    assert normalize_text(raw) == expected
    assert ref_normalize(raw) == expected


@given(st.text())
def test_normalize_matches_reference_and_is_idempotent(raw):
    once = normalize_text(raw)
    assert once == ref_normalize(raw)
    assert normalize_text(once) == once


def test_match_example_photoshop(small_lexicon):
    m = match_keywords("Photoshop 2025 FREE crack download", small_lexicon)
    assert m.matched_bait == {"free", "download", "crack"}
    assert m.matched_products == {"adobe_photoshop": {"photoshop"}}
    assert m.is_bait_product


def test_match_example_clean(small_lexicon):
    m = match_keywords("relaxing piano music", small_lexicon)
    assert m.is_clean
    assert not m.matched_testimonials and not m.matched_password_markers


def test_testimonial_phrase(small_lexicon):
    m = match_keywords("It worked! Thanks!", small_lexicon)
    assert m.matched_testimonials == {"it worked! thanks!"}


def test_word_boundaries():
    lex = KeywordLexicon.build(bait_terms={"crack", "pass:"})
    assert not match_keywords("scrack crackers", lex).matched_bait
    assert match_keywords("CRACK.", lex).matched_bait == {"crack"}
    # a non-word edge has no boundary requirement
    assert match_keywords("pass:1234", lex).matched_bait == {"pass:"}


def test_non_latin_matched_after_nfc():
    lex = KeywordLexicon.build(bait_terms={"бесплатно", "क्रैक"}, product_names={"x": {"фотошоп"}})
    m = match_keywords("ФОТОШОП скачать БЕСПЛАТНО", lex)
    assert m.matched_bait == {"бесплатно"}
    assert m.matched_products == {"x": {"фотошоп"}}
    decomposed = "Café free"
    lex2 = KeywordLexicon.build(bait_terms={"café"})
    assert match_keywords(decomposed, lex2).matched_bait == {"café"}


def test_overlapping_variant_reported_under_every_category():
    lex = KeywordLexicon.build(product_names={"a": {"office"}, "b": {"office", "word"}})
    m = match_keywords("office", lex)
    assert m.matched_products == {"a": {"office"}, "b": {"office"}}


def test_lexicon_rejects_unnormalized_entries():
    with pytest.raises(LexiconError):
        KeywordLexicon(frozenset({"FREE"}), {})
    with pytest.raises(LexiconError):
        KeywordLexicon(frozenset({""}), {})


def test_lexicon_round_trip(tmp_path):
    lex = default_lexicon()
    path = tmp_path / "lex.json"
    lex.save(path)
    again = KeywordLexicon.load(path)
    assert again == lex
    assert again.categories == lex.categories
    assert again.dumps() == lex.dumps()


def test_lexicon_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(LexiconError):
        KeywordLexicon.load(bad)
    with pytest.raises(LexiconError):
        KeywordLexicon.from_dict({"bait_terms": []})
    with pytest.raises(LexiconError):
        KeywordLexicon.from_dict({"format_version": 9})


def test_default_lexicon_shape():
    lex = default_lexicon()
    assert len(lex.categories) == 17
    assert {"free", "download", "crack", "keygen", "cheat", "hack", "license key", "full version"} <= lex.bait_terms
    assert "works like a charm!" in lex.testimonial_phrases


ALPHABET = ["free", "crack", "photo", "shop", "photoshop", "key", "pass:", "é", "dl", "x"]
SEPS = [" ", "  ", "\t", "-", ".", "!", "", "_", "\n"]


def random_text(rng):
    words = [rng.choice(ALPHABET) for _ in range(rng.randint(0, 8))]
    out = ""
    for w in words:
        out += rng.choice(SEPS) + (w.upper() if rng.random() < 0.2 else w)
    return out


def random_lexicon(rng):
    pick = lambda k: {rng.choice(ALPHABET) + (" " + rng.choice(ALPHABET) if rng.random() < 0.2 else "") for _ in range(k)}  # noqa: E731
    return KeywordLexicon.build(
        bait_terms=pick(rng.randint(0, 4)),
        product_names={f"c{i}": pick(rng.randint(1, 3)) for i in range(rng.randint(0, 3))},
        testimonial_phrases=pick(rng.randint(0, 2)),
        archive_password_markers=pick(rng.randint(0, 2)),
    )


def test_match_keywords_oracle_equivalence_1000():
    rng = random.Random(20250719)
    disagreements = 0
    for _ in range(1000):
        lex, text = random_lexicon(rng), random_text(rng)
        m = match_keywords(text, lex)
        ref = ref_match(text, lex.bait_terms, lex.product_names, lex.testimonial_phrases, lex.archive_password_markers)
        got = {
            "bait": set(m.matched_bait),
            "products": {k: set(v) for k, v in m.matched_products.items()},
            "testimonials": set(m.matched_testimonials),
            "markers": set(m.matched_password_markers),
        }
        disagreements += got != ref
    assert disagreements == 0


words = st.sampled_from(ALPHABET)
texts = st.lists(st.tuples(st.sampled_from(SEPS), words), max_size=8).map(lambda xs: "".join(a + b for a, b in xs))


@settings(max_examples=200)
@given(texts, st.sets(words, max_size=4), words)
def test_monotonicity(text, bait, extra):
    lex = KeywordLexicon.build(bait_terms=bait)
    bigger = KeywordLexicon.build(bait_terms=bait | {extra})
    assert match_keywords(text, lex).matched_bait <= match_keywords(text, bigger).matched_bait


@settings(max_examples=200)
@given(texts, st.sets(words, max_size=5))
def test_soundness_and_purity(text, bait):
    lex = KeywordLexicon.build(bait_terms=bait, product_names={"p": {"photoshop"}})
    m = match_keywords(text, lex)
    norm = normalize_text(text)
    for entry in m.matched_bait:
        assert ref_match(norm, {entry}, {})["bait"] == {entry}
    assert match_keywords(text, lex) == m
