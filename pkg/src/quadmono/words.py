"""Free-group words.

A word is stored as a run-length encoded tuple of syllables ``(generator, exponent)``
with generators numbered from 1.  Every constructor reduces freely, so two words
are equal as group elements exactly when their syllable tuples are equal.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence


def _reduce_letters(letters: Iterable[int]) -> list[int]:
    stack: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("generator index 0 is not allowed")
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return stack


def _rle(letters: Sequence[int]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for a in letters:
        g, e = abs(a), (1 if a > 0 else -1)
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


class Word:
    """An element of the free group on generators 1, 2, 3, ..."""

    __slots__ = ("syllables", "_letters", "_hash")

    def __init__(self, syllables: Iterable[tuple[int, int]] = ()):
        letters: list[int] = []
        for g, e in syllables:
            if g <= 0:
                raise ValueError(f"generator index must be positive, got {g}")
            letters.extend([g if e > 0 else -g] * abs(e))
        self._set(_reduce_letters(letters))

    def _set(self, reduced: list[int]) -> None:
        self._letters = tuple(reduced)
        self.syllables = _rle(reduced)
        self._hash = hash(self.syllables)

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Word":
        """Build from signed letters, e.g. ``[1, 2, -1]`` is x1 x2 x1^-1."""
        w = cls.__new__(cls)
        w._set(_reduce_letters(letters))
        return w

    @classmethod
    def gen(cls, g: int, e: int = 1) -> "Word":
        return cls(((g, e),))

    @classmethod
    def product(cls, gens: Iterable[int]) -> "Word":
        return cls.from_letters(gens)

    @property
    def letters(self) -> tuple[int, ...]:
        return self._letters

    def __len__(self) -> int:
        return len(self._letters)

    def __bool__(self) -> bool:
        return bool(self._letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: "Word") -> "Word":
        return Word.from_letters(self._letters + other._letters)

    def inverse(self) -> "Word":
        return Word.from_letters(-a for a in reversed(self._letters))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word.from_letters(self._letters * n)

    def conjugate(self, by: "Word") -> "Word":
        """Return ``by * self * by^-1``."""
        return by * self * by.inverse()

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}

    def max_generator(self) -> int:
        return max((g for g, _ in self.syllables), default=0)

    def exponent_sum(self, g: int) -> int:
        return sum(e for h, e in self.syllables if h == g)

    def occurrences(self, g: int) -> int:
        return sum(abs(e) for h, e in self.syllables if h == g)

    def substitute(self, images: dict[int, "Word"]) -> "Word":
        """Replace each generator by its image; generators without an image stay."""
        out: list[int] = []
        for a in self._letters:
            img = images.get(abs(a))
            if img is None:
                out.append(a)
            elif a > 0:
                out.extend(img._letters)
            else:
                out.extend(-b for b in reversed(img._letters))
        return Word.from_letters(out)

    def rename(self, mapping: dict[int, int]) -> "Word":
        return Word((mapping.get(g, g), e) for g, e in self.syllables)

    def __repr__(self) -> str:
        return f"Word({format_word(self)})"

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = Word()


def multiply(u: Word, v: Word) -> Word:
    return u * v


def conjugate(u: Word, by: Word) -> Word:
    return u.conjugate(by)


def commutator(u: Word, v: Word) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    return u * v * u.inverse() * v.inverse()


def cyclic_reduce_with_conjugator(u: Word) -> tuple[Word, Word]:
    """Return ``(r, c)`` with ``r`` cyclically reduced and ``u == c * r * c^-1``."""
    letters = u.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    core = Word.from_letters(letters[i:j + 1])
    return core, Word.from_letters(letters[:i])


def cyclic_reduce(u: Word) -> Word:
    return cyclic_reduce_with_conjugator(u)[0]


def rotations(u: Word) -> list[tuple[int, ...]]:
    """All cyclic rotations of the letters of a cyclically reduced word."""
    s = u.letters
    return [s[i:] + s[:i] for i in range(len(s))] or [()]


def _letter_key(a: int) -> tuple[int, int]:
    return (abs(a), 0 if a > 0 else 1)


def canonical_relator(u: Word) -> Word:
    """Canonical representative of the conjugacy classes of ``u`` and ``u^-1``.

    The cyclic reduction is rotated (and possibly inverted) to the rotation whose
    letter sequence is least under the order x1 < x1^-1 < x2 < x2^-1 < ...
    """
    r = cyclic_reduce(u)
    if not r:
        return r
    best = min(_least_rotation(r.letters), _least_rotation(r.inverse().letters))
    return Word.from_letters(tuple((k >> 1) * (-1 if k & 1 else 1) for k in best))


def _least_rotation(s: tuple[int, ...]) -> tuple[int, ...]:
    # letters encoded as 2|a| + (a < 0) so tuple comparison matches _letter_key
    keys = tuple(2 * abs(a) + (a < 0) for a in s)
    n, lo = len(keys), min(keys)
    doubled = keys + keys
    return min(doubled[i:i + n] for i in range(n) if keys[i] == lo)


def is_proper_power(u: Word) -> tuple[Word, int]:
    """Return ``(root, k)`` with ``u == root**k`` and ``k`` maximal (letters-level)."""
    s = u.letters
    n = len(s)
    for d in range(1, n + 1):
        if n % d == 0 and s[:d] * (n // d) == s:
            return Word.from_letters(s[:d]), n // d
    return u, 1


# ---------------------------------------------------------------- names / text

def default_name(g: int, prefix: str = "x") -> str:
    return f"{prefix}{g}"


def format_word(w: Word, names: Sequence[str] | None = None, sep: str = " ") -> str:
    """Render as e.g. ``x1 x2^-2``; ``e`` for the identity."""
    if not w:
        return "e"
    parts = []
    for g, e in w.syllables:
        name = names[g - 1] if names else default_name(g)
        parts.append(name if e == 1 else f"{name}^{e}")
    return sep.join(parts)


def word_to_json(w: Word, names: Sequence[str]) -> list:
    return [[names[g - 1], e] for g, e in w.syllables]


def word_from_json(data: Sequence, names: Sequence[str]) -> Word:
    index = {n: i + 1 for i, n in enumerate(names)}
    try:
        return Word((index[str(name)], int(e)) for name, e in data)
    except KeyError as exc:
        raise ValueError(f"unknown generator {exc.args[0]!r}") from None


def dumps_word(w: Word, names: Sequence[str]) -> str:
    return json.dumps(word_to_json(w, names))
