"""Comparison symbols, transition tokens and their composition algebra.

A token records how one attribute evolves over an interval as the sequence of
distinct consecutive changes, e.g. ``=>=`` for "flat, rising, flat".  Adjacent
equal symbols are absorbed, so tokens are run-length collapsed words over the
alphabet ``<``, ``=``, ``>``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InvalidArgumentError, InvalidValueError

DEFAULT_EPS = 1e-9


class Symbol(str, enum.Enum):
    LT = "<"
    EQ = "="
    GT = ">"

    def __str__(self) -> str:
        return self.value


_BY_CHAR = {s.value: s for s in Symbol}


@dataclass(frozen=True, eq=False)
class Token:
    """A non-empty word of comparison symbols with no two adjacent equal."""

    symbols: tuple[Symbol, ...]
    _text: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_text", "".join(s.value for s in self.symbols))
        if not self.symbols:
            raise InvalidArgumentError("a token needs at least one symbol")
        for a, b in zip(self.symbols, self.symbols[1:]):
            if a is b:
                raise InvalidArgumentError(
                    f"token {self.text!r} is not collapsed: repeated {a.value!r}"
                )

    @property
    def text(self) -> str:
        return self._text

    @property
    def first(self) -> Symbol:
        return self.symbols[0]

    @property
    def last(self) -> Symbol:
        return self.symbols[-1]

    def __len__(self) -> int:
        return len(self.symbols)

    def __eq__(self, other) -> bool:
        return isinstance(other, Token) and self._text == other._text

    def __hash__(self) -> int:
        return hash(self._text)

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"Token({self.text!r})"

    def __lt__(self, other: Token) -> bool:
        return self.text < other.text

    @classmethod
    def parse(cls, text: str) -> Token:
        return _parse_token(text)


_REPEAT = re.compile(r"(.)\1")


@lru_cache(maxsize=65536)
def _parse_token(text: str) -> Token:
    bad = set(text) - _BY_CHAR.keys()
    if bad:
        raise InvalidArgumentError(f"bad token character {min(bad)!r} in {text!r}")
    if not text or _REPEAT.search(text):
        return Token(tuple(_BY_CHAR[c] for c in text))  # raises with the usual message
    tok = object.__new__(Token)
    object.__setattr__(tok, "symbols", tuple(map(_BY_CHAR.__getitem__, text)))
    object.__setattr__(tok, "_text", text)
    return tok


@dataclass(frozen=True)
class QualifiedToken:
    """A token tagged with the attribute it describes, rendered ``attr:token``."""

    attribute: str
    token: Token

    def __post_init__(self):
        if not self.attribute or ":" in self.attribute:
            raise InvalidArgumentError(f"invalid attribute name {self.attribute!r}")

    @property
    def text(self) -> str:
        return f"{self.attribute}:{self.token.text}"

    def sort_key(self) -> tuple[str, str]:
        return (self.attribute, self.token.text)

    def __lt__(self, other: QualifiedToken) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.text

    def __repr__(self) -> str:
        return f"QualifiedToken({self.text!r})"

    @classmethod
    def parse(cls, text: str) -> QualifiedToken:
        attribute, sep, token = text.strip().partition(":")
        if not sep:
            raise InvalidArgumentError(f"expected 'attribute:token', got {text!r}")
        return cls(attribute.strip(), Token.parse(token.strip()))


def compare_values(prev: float, nxt: float, eps: float = DEFAULT_EPS) -> Symbol:
    """Symbol describing the change from ``prev`` to the later value ``nxt``."""
    if not (math.isfinite(eps) and eps >= 0):
        raise InvalidValueError(f"eps must be finite and non-negative, got {eps!r}")
    if not (math.isfinite(prev) and math.isfinite(nxt)):
        raise InvalidValueError(f"non-finite comparison operand ({prev!r}, {nxt!r})")
    if nxt > prev + eps:
        return Symbol.GT
    if nxt < prev - eps:
        return Symbol.LT
    return Symbol.EQ


def collapse(symbols: Iterable[Symbol | str]) -> Token:
    """Replace every maximal run of equal symbols by a single symbol."""
    out: list[Symbol] = []
    for s in symbols:
        s = Symbol(s)
        if not out or out[-1] is not s:
            out.append(s)
    if not out:
        raise InvalidArgumentError("cannot collapse an empty symbol sequence")
    return Token(tuple(out))


def compose_tokens(t1: Token, t2: Token) -> Token:
    """Transition token for the union of two contiguous intervals.

    The shared junction symbol is written once when both sides agree there.
    The (=, <) case yields ``=<``, following the same junction rule as every
    other pair.
    """
    if t1.last is t2.first:
        return Token(t1.symbols + t2.symbols[1:])
    return Token(t1.symbols + t2.symbols)


def compose_all(tokens: Sequence[Token]) -> Token:
    if not tokens:
        raise InvalidArgumentError("cannot compose an empty token sequence")
    out = tokens[0]
    for t in tokens[1:]:
        out = compose_tokens(out, t)
    return out
