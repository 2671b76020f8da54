import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bite.stylometry import (FEATURE_NAMES, FeatureVector, count_syllables, extract_features, feature_delta,
                             flesch_kincaid_grade, sentiment_polarity, tokenize)

COUNT_FEATURES = ("token_count", "paragraph_count", "list_item_count", "citation_marker", "emoji_count",
                  "header_count", "special_char_count")
BOUNDED = ("sentiment_polarity", "formality_score")

# Alphabet that exercises markdown, citations, lists and emoji.
text_st = st.text(alphabet=st.sampled_from(list("ab Z.!?*_#-[]0123(),\n") + ["😊", "é", "’"]), max_size=80)


def test_list_and_emphasis_fixture():
    f = extract_features("- a\n- b\n\n**bold** *it*")
    assert f["list_item_count"] == 2
    assert f["bold_count"] == 1
    assert f["italic_count"] == 1
    assert f["markdown_usage"] == 2
    assert f["paragraph_count"] == 2
    assert f["header_count"] == 0


def test_numeric_citation_fixture():
    f = extract_features("Water boils at 100°C. [1]")
    assert f["citation_marker"] == 1
    assert f["emoji_count"] == 0
    assert f["paragraph_count"] == 1


def test_empty_string_is_all_zero():
    f = extract_features("")
    assert all(v == 0.0 for v in f.values)
    assert len(f) == len(FEATURE_NAMES)


def test_author_year_citation_and_header():
    f = extract_features("# Title\nAs shown (Okafor, 2019) and [2, 3].")
    assert f["citation_marker"] == 2
    assert f["header_count"] == 1


def test_fenced_code_flag():
    assert extract_features("```json\n{\"a\": 1}\n```")["is_formatted_code"] == 1
    assert extract_features("text ```x```")["is_formatted_code"] == 0


def test_emoji_count():
    assert extract_features("Hi 😊 there 🚀✨")["emoji_count"] == 3


def test_tokens_words_and_punctuation():
    assert tokenize("Yes, it's 42.") == ["Yes", ",", "it", "'", "s", "42", "."]


def test_syllable_heuristic():
    assert count_syllables("cat") == 1
    assert count_syllables("make") == 1
    assert count_syllables("table") == 2
    assert count_syllables("rhythm") == 1


def test_readability_matches_formula():
    # 4 words, 1 sentence, syllables 1+1+1+3.
    text = "The cat sat happily."
    expected = 0.39 * 4 / 1 + 11.8 * 6 / 4 - 15.59
    assert flesch_kincaid_grade(text) == pytest.approx(expected)


def test_sentiment_sign_and_negation():
    assert sentiment_polarity("This is great and helpful.") > 0
    assert sentiment_polarity("This is terrible.") < 0
    assert sentiment_polarity("This is not great.") < 0
    assert sentiment_polarity("The sky is blue.") == 0.0


def test_delta_is_antisymmetric():
    a, b = extract_features("Plain answer."), extract_features("**Bold** answer 😊 [1].")
    d1, d2 = feature_delta(a, b), feature_delta(b, a)
    assert all(x == -y for x, y in zip(d1.values, d2.values))
    assert feature_delta(a, a).values == tuple(0.0 for _ in FEATURE_NAMES)


def test_delta_rejects_registry_mismatch():
    a = extract_features("x")
    other = FeatureVector(a.values[:2], ("token_count", "emoji_count"))
    with pytest.raises(ValueError):
        feature_delta(a, other)


def test_round_trip_dict():
    f = extract_features("Some text, **with** markup.")
    assert FeatureVector.from_dict(f.as_dict()) == f
    with pytest.raises(ValueError):
        FeatureVector.from_dict({"token_count": 1.0})


@settings(max_examples=300, deadline=None)
@given(text_st)
def test_invariants(text):
    f = extract_features(text)
    assert all(math.isfinite(v) for v in f.values)
    for name in COUNT_FEATURES + ("bold_count", "italic_count"):
        assert f[name] >= 0 and f[name] == int(f[name])
    for name in BOUNDED:
        assert -1.0 <= f[name] <= 1.0
    assert f["is_formatted_code"] in (0.0, 1.0)
    assert f["markdown_usage"] == f["bold_count"] + f["italic_count"]
    assert extract_features(text) == f


@settings(max_examples=300, deadline=None)
@given(text_st, text_st)
def test_concatenation_is_additive_for_tokens(a, b):
    fa, fb, fab = extract_features(a), extract_features(b), extract_features(a + "\n\n" + b)
    assert fab["token_count"] == fa["token_count"] + fb["token_count"]
    assert fab["special_char_count"] == fa["special_char_count"] + fb["special_char_count"]
    assert fab["emoji_count"] == fa["emoji_count"] + fb["emoji_count"]
    assert fab["paragraph_count"] == fa["paragraph_count"] + fb["paragraph_count"]
    for name in ("list_item_count", "header_count", "citation_marker"):
        assert fab[name] >= max(fa[name], fb[name])
