"""Stylometric feature extraction.

Every feature is a deterministic function of the raw answer text. The
registry order below is the column order used by the fingerprint regression,
the synthetic judges and the style-control defense.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, Mapping, Tuple

REGISTRY_VERSION = "1"

FEATURE_NAMES: Tuple[str, ...] = (
    "token_count",
    "readability_score",
    "sentiment_polarity",
    "paragraph_count",
    "list_item_count",
    "markdown_usage",
    "citation_marker",
    "is_formatted_code",
    "emoji_count",
    "formality_score",
    "bold_count",
    "italic_count",
    "header_count",
    "special_char_count",
)

# markdown_usage is bold_count + italic_count by definition; regressions that
# include all three are rank deficient, so fits drop it as an alias.
ALIASED_FEATURES: Dict[str, Tuple[str, ...]] = {
    "markdown_usage": ("bold_count", "italic_count"),
}

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)
_WORD_RE = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)?", re.UNICODE)
_SENTENCE_END_RE = re.compile(r"[.!?]+")
_LIST_RE = re.compile(r"^\s*([*\-+]|\d+\.)\s", re.MULTILINE)
_HEADER_RE = re.compile(r"^\s{0,3}#{1,6}\s+\S", re.MULTILINE)
_BOLD_RE = re.compile(r"\*\*(?=\S)(.+?)(?<=\S)\*\*|__(?=\S)(.+?)(?<=\S)__", re.DOTALL)
_ITALIC_RE = re.compile(
    r"(?<![*\w])\*(?=[^\s*])([^*\n]+?)(?<=[^\s*])\*(?![*\w])"
    r"|(?<![_\w])_(?=[^\s_])([^_\n]+?)(?<=[^\s_])_(?![_\w])"
)
_NUMERIC_CITATION_RE = re.compile(r"\[\d+(?:\s*[,–-]\s*\d+)*\]")
_AUTHOR_YEAR_RE = re.compile(
    r"\(\s*[A-Z][A-Za-z'\-]+(?:\s+(?:et\s+al\.|and|&)\s*[A-Z]?[A-Za-z'\-]*)?,"
    r"\s*(?:[A-Z]\.\s*)*\(?(?:1[5-9]|20)\d\d[a-z]?\)?"
)
_FENCED_RE = re.compile(r"\A```[^\n`]*\n.*\n```\Z", re.DOTALL)
_BLANK_LINE_RE = re.compile(r"\n[ \t]*\n")

# Inclusive codepoint ranges treated as emoji. Skin-tone modifiers, ZWJ and
# variation selectors are deliberately absent so a composed emoji counts once.
_EMOJI_RANGES: Tuple[Tuple[int, int], ...] = (
    (0x1F000, 0x1F0FF),
    (0x1F10D, 0x1F1AD),
    (0x1F1E6, 0x1F1FF),
    (0x1F201, 0x1F2FF),
    (0x1F300, 0x1F3FA),
    (0x1F400, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F7E0, 0x1F7FF),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
    (0x2600, 0x27BF),
    (0x231A, 0x231B),
    (0x23E9, 0x23FA),
    (0x2B05, 0x2B07),
    (0x2B1B, 0x2B1C),
    (0x2B50, 0x2B50),
    (0x2B55, 0x2B55),
    (0x3030, 0x3030),
    (0x303D, 0x303D),
    (0x3297, 0x3299),
)
_EMOJI_RE = re.compile("[" + "".join(f"{chr(lo)}-{chr(hi)}" for lo, hi in _EMOJI_RANGES) + "]")

POSITIVE_WORDS = {
    "good": 1.9, "great": 3.1, "excellent": 3.2, "amazing": 2.8, "wonderful": 2.7,
    "happy": 2.7, "glad": 2.0, "love": 3.2, "like": 1.5, "enjoy": 2.2, "best": 3.2,
    "better": 1.9, "helpful": 1.8, "useful": 1.9, "easy": 1.9, "fun": 2.3,
    "delightful": 2.8, "fantastic": 2.6, "awesome": 3.1, "cheerful": 2.5,
    "exciting": 2.2, "beautiful": 2.9, "nice": 1.8, "positive": 2.3,
    "success": 2.7, "successful": 2.6, "benefit": 2.0, "benefits": 2.0,
    "effective": 2.1, "reliable": 1.9, "clear": 1.6, "thanks": 1.9, "thank": 1.5,
    "perfect": 2.7, "brilliant": 2.8, "hope": 1.9, "joy": 2.8, "pleased": 1.9,
    "superb": 3.1, "valuable": 2.1, "efficient": 1.7, "safe": 1.9, "healthy": 1.7,
}
NEGATIVE_WORDS = {
    "bad": -2.5, "poor": -2.1, "terrible": -2.1, "awful": -2.0, "horrible": -2.5,
    "sad": -2.1, "hate": -2.7, "worse": -2.1, "worst": -3.1, "wrong": -2.1,
    "problem": -1.7, "problems": -1.7, "difficult": -1.5, "hard": -0.4,
    "fail": -2.3, "failure": -2.3, "risk": -1.1, "risky": -1.4, "dangerous": -2.1,
    "harmful": -2.4, "error": -1.7, "errors": -1.7, "unfortunately": -1.6,
    "annoying": -1.7, "painful": -1.9, "ugly": -2.3, "weak": -1.9, "useless": -1.8,
    "boring": -1.3, "angry": -2.3, "loss": -1.3, "damage": -2.2, "pain": -2.3,
}
NEGATIONS = {"not", "no", "never", "none", "nobody", "nothing", "neither", "nor",
             "cannot", "without", "hardly"}
_SENTIMENT_ALPHA = 15.0

FORMAL_MARKERS = {
    "therefore", "moreover", "furthermore", "consequently", "however", "thus",
    "hence", "regarding", "accordingly", "nevertheless", "additionally",
    "subsequently", "whereas", "notwithstanding", "approximately", "sufficient",
    "demonstrate", "demonstrates", "utilize", "obtain", "require", "requires",
    "significant", "significantly", "respectively", "substantial", "indicate",
    "indicates", "consider", "ensure", "facilitate", "provide", "provides",
}
INFORMAL_MARKERS = {
    "gonna", "wanna", "gotta", "yeah", "yep", "nope", "kinda", "sorta", "stuff",
    "cool", "awesome", "hey", "ok", "okay", "lol", "btw", "guys", "super",
    "totally", "pretty", "really", "lots", "folks", "wow", "yay", "oops", "ya",
}
_CONTRACTION_RE = re.compile(r"[^\W\d_]+'(?:t|re|ll|ve|d|m|s)\b", re.IGNORECASE)


@dataclass(frozen=True)
class FeatureVector(Mapping[str, float]):
    """Named stylometric measurements of one answer, in registry order."""

    values: Tuple[float, ...]
    names: Tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        if len(self.values) != len(self.names):
            raise ValueError("feature values and names differ in length")

    def __getitem__(self, key: str) -> float:
        try:
            return self.values[self.names.index(key)]
        except ValueError:
            raise KeyError(key) from None

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.names, self.values))

    @classmethod
    def from_dict(cls, data: Mapping[str, float], names: Tuple[str, ...] = FEATURE_NAMES) -> "FeatureVector":
        missing = [n for n in names if n not in data]
        if missing:
            raise ValueError(f"feature map is missing {missing}")
        return cls(tuple(float(data[n]) for n in names), tuple(names))


def tokenize(text: str):
    return _TOKEN_RE.findall(text)


_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


@lru_cache(maxsize=100_000)
def count_syllables(word: str) -> int:
    """Vowel-group heuristic with a silent trailing 'e' rule; minimum one."""
    w = word.lower()
    n = len(_VOWEL_GROUP_RE.findall(w))
    if n > 1 and w.endswith("e") and not w.endswith(("le", "ee", "ye")):
        n -= 1
    return max(1, n)


def flesch_kincaid_grade(text: str) -> float:
    words = _WORD_RE.findall(text)
    if not words:
        return 0.0
    n_sentences = max(1, len(_SENTENCE_END_RE.findall(text)))
    syllables = sum(count_syllables(w) for w in words)
    return 0.39 * len(words) / n_sentences + 11.8 * syllables / len(words) - 15.59


def sentiment_polarity(text: str) -> float:
    """Lexicon valence sum with one-word negation flip, squashed into (-1, 1)."""
    words = [w.lower() for w in _WORD_RE.findall(text)]
    total = 0.0
    for i, w in enumerate(words):
        valence = POSITIVE_WORDS.get(w) or NEGATIVE_WORDS.get(w)
        if valence is None:
            continue
        prev = words[i - 1] if i > 0 else ""
        if prev in NEGATIONS or prev.endswith("n't"):
            valence = -0.74 * valence
        total += valence
    if total == 0.0:
        return 0.0
    return total / math.sqrt(total * total + _SENTIMENT_ALPHA)


def formality_score(text: str) -> float:
    words = [w.lower() for w in _WORD_RE.findall(text)]
    formal = sum(1 for w in words if w in FORMAL_MARKERS)
    informal = sum(1 for w in words if w in INFORMAL_MARKERS)
    informal += len(_CONTRACTION_RE.findall(text)) + text.count("!")
    if formal + informal == 0:
        return 0.0
    return (formal - informal) / (formal + informal)


def is_emoji(ch: str) -> bool:
    cp = ord(ch)
    for lo, hi in _EMOJI_RANGES:
        if lo <= cp <= hi:
            return True
    return False


def count_emoji(text: str) -> int:
    return len(_EMOJI_RE.findall(text))


def count_bold(text: str) -> int:
    return len(_BOLD_RE.findall(text))


def count_italic(text: str) -> int:
    return len(_ITALIC_RE.findall(_BOLD_RE.sub(" ", text)))


def count_citations(text: str) -> int:
    return len(_NUMERIC_CITATION_RE.findall(text)) + len(_AUTHOR_YEAR_RE.findall(text))


def count_paragraphs(text: str) -> int:
    return sum(1 for block in _BLANK_LINE_RE.split(text) if block.strip())


def is_fenced(text: str) -> int:
    return int(bool(_FENCED_RE.match(text.strip())))


@lru_cache(maxsize=65_536)
def extract_features(answer: str) -> FeatureVector:
    bold = count_bold(answer)
    italic = count_italic(answer)
    values = {
        "token_count": len(tokenize(answer)),
        "readability_score": flesch_kincaid_grade(answer),
        "sentiment_polarity": sentiment_polarity(answer),
        "paragraph_count": count_paragraphs(answer),
        "list_item_count": len(_LIST_RE.findall(answer)),
        "markdown_usage": bold + italic,
        "citation_marker": count_citations(answer),
        "is_formatted_code": is_fenced(answer),
        "emoji_count": count_emoji(answer),
        "formality_score": formality_score(answer),
        "bold_count": bold,
        "italic_count": italic,
        "header_count": len(_HEADER_RE.findall(answer)),
        "special_char_count": sum(1 for ch in answer if not ch.isalnum() and not ch.isspace()),
    }
    return FeatureVector(tuple(float(values[n]) for n in FEATURE_NAMES))


def feature_delta(before: FeatureVector, after: FeatureVector) -> FeatureVector:
    if tuple(before.names) != tuple(after.names):
        raise ValueError("feature vectors use different registries")
    return FeatureVector(tuple(a - b for a, b in zip(after.values, before.values)), before.names)
