"""Reduced words over a free group on generators a1, ..., ad.

Letters are nonzero integers: ``i`` is the i-th generator, ``-i`` its
inverse.  Every :class:`Word` is stored freely reduced, so equality of
words is equality of group elements.
"""

from __future__ import annotations

from itertools import count, islice
from typing import Iterable, Iterator

__all__ = [
    "Word",
    "WordSyntaxError",
    "RankError",
    "free_reduce",
    "letter_sort_key",
    "parse_word",
    "iter_reduced_words",
    "enumerate_words",
]


class WordSyntaxError(ValueError):
    """Input text does not match the word grammar."""


class RankError(ValueError):
    """A generator index exceeds the ambient rank."""


def letter_sort_key(letter: int) -> tuple[int, int]:
    """Sort key realizing the letter order a1 < a1^-1 < a2 < a2^-1 < ..."""
    return (abs(letter), 0 if letter > 0 else 1)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence, cancelling adjacent inverse pairs."""
    out: list[int] = []
    for x in letters:
        x = int(x)
        if x == 0:
            raise ValueError("0 is not a letter; use +i / -i with i >= 1")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """An immutable freely reduced word.

    Supports ``u * v`` (reduced concatenation), ``~w`` (inverse),
    ``w ** n`` (reduced power, computed through the cyclically reduced
    form so the cost is linear in the output), ``len``, indexing and
    slicing.  The identity is ``Word()``.
    """

    __slots__ = ("letters",)

    letters: tuple[int, ...]

    def __init__(self, letters: Iterable[int] = ()):
        self.letters = free_reduce(letters)

    @classmethod
    def _raw(cls, letters: tuple[int, ...]) -> "Word":
        # caller guarantees the tuple is already reduced
        w = cls.__new__(cls)
        w.letters = letters
        return w

    @property
    def max_index(self) -> int:
        """Largest generator index used, 0 for the identity."""
        return max((abs(x) for x in self.letters), default=0)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    @property
    def is_cyclically_reduced(self) -> bool:
        ls = self.letters
        return not ls or ls[0] != -ls[-1]

    def cyclic_reduce(self) -> tuple["Word", "Word"]:
        """Return ``(core, conjugator)`` with self == conjugator * core * ~conjugator.

        ``core`` is cyclically reduced and ``conjugator`` is the maximal
        such prefix.
        """
        ls = self.letters
        i, j = 0, len(ls)
        while j - i >= 2 and ls[i] == -ls[j - 1]:
            i += 1
            j -= 1
        return Word._raw(ls[i:j]), Word._raw(ls[:i])

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __invert__(self) -> "Word":
        return Word._raw(tuple(-x for x in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if not isinstance(n, int):
            return NotImplemented
        if n == 0 or not self.letters:
            return Word._raw(())
        base = self if n > 0 else ~self
        n = abs(n)
        core, conj = base.cyclic_reduce()
        inv_conj = tuple(-x for x in reversed(conj.letters))
        return Word._raw(conj.letters + core.letters * n + inv_conj)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word._raw(self.letters[item])
        return self.letters[item]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def sort_key(self) -> tuple:
        """Length-lexicographic sort key (the enumeration order)."""
        return (len(self.letters), tuple(letter_sort_key(x) for x in self.letters))

    def __lt__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        parts = []
        for x in self.letters:
            parts.append(f"a{x}" if x > 0 else f"a{-x}^-1")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


_LOWER = "abcdefghijklmnopqrstuvwxyz"
_UPPER = _LOWER.upper()


def parse_word(text: str, rank: int) -> Word:
    """Parse ``text`` into a reduced word over a1..a<rank>.

    Tokens are either ``a<INT>`` with an optional ``^<INT>`` exponent
    (the grammar's ``^-1`` plus general integer exponents), or single
    compact letters for rank <= 26: lowercase = generator, uppercase =
    inverse, e.g. ``"aB" == "a1 a2^-1"``.  Whitespace and ``*`` separate
    tokens but are optional.  Empty text is the identity.
    """
    if rank < 1:
        raise RankError(f"ambient rank must be >= 1, got {rank}")
    letters: list[int] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace() or ch == "*":
            i += 1
            continue
        if ch == "a" and i + 1 < n and text[i + 1].isdigit():
            if text[i + 1] == "0":
                raise WordSyntaxError(f"generator index cannot start with 0 at position {i}")
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            index = int(text[i + 1 : j])
            i = j
            letter = index
        elif ch in _LOWER or ch in _UPPER:
            if rank > 26:
                raise WordSyntaxError(
                    "compact letters are only valid for rank <= 26; use a<INT> tokens"
                )
            if ch in _LOWER:
                index = _LOWER.index(ch) + 1
                letter = index
            else:
                index = _UPPER.index(ch) + 1
                letter = -index
            i += 1
        else:
            raise WordSyntaxError(f"unexpected character {ch!r} at position {i}")
        if index > rank:
            raise RankError(f"generator a{index} exceeds ambient rank {rank}")
        exponent = 1
        if i < n and text[i] == "^":
            j = i + 1
            if j < n and text[j] == "-":
                j += 1
            k = j
            while k < n and text[k].isdigit():
                k += 1
            if k == j:
                raise WordSyntaxError(f"malformed exponent at position {i}")
            exponent = int(text[i + 1 : k])
            i = k
        if exponent < 0:
            letter = -letter
            exponent = -exponent
        letters.extend([letter] * exponent)
    return Word(letters)


def iter_reduced_words(rank: int) -> Iterator[Word]:
    """Yield every nontrivial reduced word in length-lexicographic order.

    Within a length, words are ordered letter by letter using
    a1 < a1^-1 < a2 < a2^-1 < ...; the stream is infinite and
    deterministic.
    """
    if rank < 1:
        raise RankError(f"ambient rank must be >= 1, got {rank}")
    alphabet = [x for i in range(1, rank + 1) for x in (i, -i)]

    def extend(prefix: list[int], remaining: int) -> Iterator[Word]:
        if remaining == 0:
            yield Word._raw(tuple(prefix))
            return
        last = prefix[-1] if prefix else 0
        for x in alphabet:
            if x == -last:
                continue
            prefix.append(x)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    for length in count(1):
        yield from extend([], length)


def enumerate_words(rank: int, count_: int) -> list[Word]:
    """First ``count_`` nontrivial reduced words in enumeration order."""
    if count_ < 0:
        raise ValueError("count must be >= 0")
    return list(islice(iter_reduced_words(rank), count_))
