"""Token counting and budget truncation for rendered prompts.

Two counters are provided.  The default heuristic needs no external data:
text splits on whitespace, each of ``[ ] ( ) , : . -`` becomes its own token,
and any other contiguous run (letters, digit groups, units) stays one token.
A wordpiece counter can be loaded from a vocabulary file when exact
subword-model budgets matter; point SCENEKIT_VOCAB at a vocab.txt to make it
the default.
"""

from __future__ import annotations

import os
import re
import unicodedata
from pathlib import Path
from typing import Iterable, Protocol, runtime_checkable

from .errors import InvalidInputError

VOCAB_ENV_VAR = "SCENEKIT_VOCAB"

_SPLIT_CHARS = "[](),:.-"
_TOKEN_RE = re.compile(r"[\[\](),:.\-]|[^\s\[\](),:.\-]+")


@runtime_checkable
class TokenCounter(Protocol):
    """Anything that can segment text into token character spans."""

    def spans(self, text: str) -> list[tuple[int, int]]:
        """Half-open character spans of each token, in order."""
        ...

    def count(self, text: str) -> int:
        ...


class HeuristicTokenCounter:
    """Deterministic counter approximating subword tokenizers on this
    package's prompt text, with no vocabulary file required."""

    def spans(self, text: str) -> list[tuple[int, int]]:
        return [(m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]

    def count(self, text: str) -> int:
        return sum(1 for _ in _TOKEN_RE.finditer(text))


def _is_punctuation(char: str) -> bool:
    code = ord(char)
    if (33 <= code <= 47) or (58 <= code <= 64) or (91 <= code <= 96) or (123 <= code <= 126):
        return True
    return unicodedata.category(char).startswith("P")


class WordPieceTokenCounter:
    """Greedy longest-match wordpiece counting against a vocab.txt.

    Mirrors the usual uncased pipeline: whitespace and punctuation splitting,
    lowercasing, then greedy subword matching with ``##`` continuations and a
    single unknown token per unmatchable word.
    """

    def __init__(self, vocab: Iterable[str] | str | Path, lowercase: bool = True,
                 max_word_chars: int = 100):
        if isinstance(vocab, (str, Path)):
            with open(vocab, encoding="utf-8") as fh:
                tokens = [line.rstrip("\n") for line in fh]
        else:
            tokens = list(vocab)
        self.vocab = frozenset(t for t in tokens if t)
        if not self.vocab:
            raise InvalidInputError("wordpiece vocabulary is empty")
        self.lowercase = lowercase
        self.max_word_chars = max_word_chars

    def _words(self, text: str) -> list[tuple[int, int]]:
        words: list[tuple[int, int]] = []
        start = None
        for i, ch in enumerate(text):
            if ch.isspace():
                if start is not None:
                    words.append((start, i))
                    start = None
            elif _is_punctuation(ch):
                if start is not None:
                    words.append((start, i))
                    start = None
                words.append((i, i + 1))
            elif start is None:
                start = i
        if start is not None:
            words.append((start, len(text)))
        return words

    def _normalize(self, word: str) -> str:
        if not self.lowercase:
            return word
        decomposed = unicodedata.normalize("NFD", word.lower())
        return "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")

    def spans(self, text: str) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        for wstart, wend in self._words(text):
            word = self._normalize(text[wstart:wend])
            if not word:
                out.append((wstart, wend))
                continue
            if len(word) > self.max_word_chars:
                out.append((wstart, wend))
                continue
            # Offsets inside the normalized word only map back to the text
            # when normalization kept the length; otherwise fall back to
            # word-level spans.
            exact = len(word) == (wend - wstart)
            pieces: list[tuple[int, int]] = []
            pos = 0
            while pos < len(word):
                end = len(word)
                found = None
                while end > pos:
                    piece = word[pos:end]
                    if pos > 0:
                        piece = "##" + piece
                    if piece in self.vocab:
                        found = end
                        break
                    end -= 1
                if found is None:
                    pieces = [(0, len(word))]
                    break
                pieces.append((pos, found))
                pos = found
            for pstart, pend in pieces:
                if exact:
                    out.append((wstart + pstart, wstart + pend))
                else:
                    out.append((wstart, wend))
        return out

    def count(self, text: str) -> int:
        return len(self.spans(text))


def default_token_counter() -> TokenCounter:
    """The heuristic counter, unless SCENEKIT_VOCAB names a vocabulary file."""
    vocab_path = os.environ.get(VOCAB_ENV_VAR)
    if vocab_path:
        try:
            return WordPieceTokenCounter(vocab_path)
        except OSError as exc:
            raise InvalidInputError(
                f"{VOCAB_ENV_VAR} points at an unreadable vocabulary: {exc}") from exc
    return HeuristicTokenCounter()


def count_tokens(text: str, counter: TokenCounter | None = None) -> int:
    counter = counter or default_token_counter()
    return counter.count(text)


def truncate(text: str, max_tokens: int, counter: TokenCounter | None = None) -> tuple[str, bool]:
    """Cut ``text`` at a token boundary so it holds at most ``max_tokens``
    tokens.  Returns the (possibly shortened) text and whether a cut happened.
    Truncating an already truncated text is a no-op.
    """
    if max_tokens < 1:
        raise InvalidInputError(f"max_tokens must be >= 1, got {max_tokens}")
    counter = counter or default_token_counter()
    spans = counter.spans(text)
    if len(spans) <= max_tokens:
        return text, False
    cut = text[: spans[max_tokens - 1][1]]
    # Re-count defensively: a cut can only shorten the tail, but make the
    # budget a hard guarantee rather than an argument about the tokenizer.
    while counter.count(cut) > max_tokens:
        cut_spans = counter.spans(cut)
        cut = cut[: cut_spans[-2][1]] if len(cut_spans) > 1 else ""
    return cut, True
