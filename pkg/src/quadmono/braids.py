"""Braid words, half-twists, full twists and the Artin action on free words.

Two orientation conventions for the Artin action are supported:

``"descending"`` (default)
    sigma_k: x_k -> x_{k+1},  x_{k+1} -> x_{k+1} x_k x_{k+1}^-1.
    Fixes the product x_p ... x_2 x_1, so the full twist acts by conjugation
    by x_p ... x_1 and the projective relator reads ``x_p ... x_1``.

``"ascending"``
    sigma_k: x_k -> x_k x_{k+1} x_k^-1,  x_{k+1} -> x_k.
    Fixes x_1 x_2 ... x_p.

The two are mirror images under reversing the numbering of the points.
The descending one reproduces the hand-computed monodromy relations of the
built-in tables letter for letter, hence the default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import Word

CONVENTIONS = ("descending", "ascending")
DEFAULT_CONVENTION = "descending"


class BraidError(ValueError):
    pass


def reduce_braid_word(gens: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Free reduction of a word in the sigma_k (merging powers, dropping zeros)."""
    out: list[list[int]] = []
    for k, e in gens:
        if e == 0:
            continue
        if out and out[-1][0] == k:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([k, e])
    return tuple((k, e) for k, e in out)


@dataclass(frozen=True)
class Braid:
    """A word in the Artin generators sigma_1..sigma_{strands-1}."""

    strands: int
    word: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        word = reduce_braid_word(self.word)
        for k, _ in word:
            if not 1 <= k < self.strands:
                raise BraidError(f"sigma_{k} is not a generator of B_{self.strands}")
        object.__setattr__(self, "word", word)

    @classmethod
    def identity(cls, strands: int) -> "Braid":
        return cls(strands, ())

    @classmethod
    def sigma(cls, strands: int, k: int, e: int = 1) -> "Braid":
        return cls(strands, ((k, e),))

    def __mul__(self, other: "Braid") -> "Braid":
        if self.strands != other.strands:
            raise BraidError("cannot multiply braids on different strand counts")
        return Braid(self.strands, self.word + other.word)

    def inverse(self) -> "Braid":
        return Braid(self.strands, tuple((k, -e) for k, e in reversed(self.word)))

    def __pow__(self, n: int) -> "Braid":
        if n < 0:
            return self.inverse() ** (-n)
        return Braid(self.strands, self.word * n)

    def conjugate(self, by: "Braid") -> "Braid":
        return by * self * by.inverse()

    def length(self) -> int:
        return sum(abs(e) for _, e in self.word)

    def with_strands(self, strands: int) -> "Braid":
        return Braid(strands, self.word)

    def __str__(self) -> str:
        return format_braid(self)

    # images of x_1..x_p, computed once per braid and convention
    def images(self, convention: str = DEFAULT_CONVENTION) -> tuple[Word, ...]:
        cache = self.__dict__.setdefault("_images", {})
        if convention not in cache:
            cache[convention] = _compute_images(self, convention)
        return cache[convention]

    def act(self, w: Word, convention: str = DEFAULT_CONVENTION) -> Word:
        return artin_apply(self, w, convention)


def _sigma_images(k: int, e: int, convention: str) -> dict[int, Word]:
    a, b = Word.gen(k), Word.gen(k + 1)
    if convention == "descending":
        if e > 0:
            return {k: b, k + 1: b * a * b.inverse()}
        return {k: a.inverse() * b * a, k + 1: a}
    if convention == "ascending":
        if e > 0:
            return {k: a * b * a.inverse(), k + 1: a}
        return {k: b, k + 1: b.inverse() * a * b}
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def _compute_images(b: Braid, convention: str) -> tuple[Word, ...]:
    # phi_{s1 s2 ... sm} = phi_{s1} o ... o phi_{sm}; grow the prefix left to right:
    # images_{prefix * s}(x) = images_prefix(phi_s(x)).
    p = b.strands
    current = {i: Word.gen(i) for i in range(1, p + 1)}
    for k, e in b.word:
        step = _sigma_images(k, 1 if e > 0 else -1, convention)
        for _ in range(abs(e)):
            new_k = step[k].substitute(current)
            new_k1 = step[k + 1].substitute(current)
            current[k], current[k + 1] = new_k, new_k1
    return tuple(current[i] for i in range(1, p + 1))


def artin_apply(b: Braid, w: Word, convention: str = DEFAULT_CONVENTION) -> Word:
    """Apply the Artin automorphism of ``b`` to ``w``.

    ``artin_apply(b1 * b2, w) == artin_apply(b1, artin_apply(b2, w))``.
    """
    if w.max_generator() > b.strands:
        raise BraidError(
            f"word mentions x{w.max_generator()} but the braid has {b.strands} strands"
        )
    imgs = b.images(convention)
    return w.substitute({i + 1: img for i, img in enumerate(imgs)})


def fixed_product(p: int, convention: str = DEFAULT_CONVENTION) -> Word:
    """The product of all generators preserved by every braid."""
    order = range(p, 0, -1) if convention == "descending" else range(1, p + 1)
    return Word.product(order)


# ------------------------------------------------------------------ twists

@dataclass(frozen=True)
class HalfTwist:
    """The half-twist ``conjugator * sigma_index * conjugator^-1``."""

    strands: int
    index: int
    conjugator: Braid = None  # type: ignore[assignment]

    def __post_init__(self):
        if not 1 <= self.index < self.strands:
            raise BraidError(f"half-twist index {self.index} out of range for B_{self.strands}")
        if self.conjugator is None:
            object.__setattr__(self, "conjugator", Braid.identity(self.strands))
        elif self.conjugator.strands != self.strands:
            raise BraidError("conjugator lives on a different number of strands")

    def to_braid(self, power: int = 1) -> Braid:
        return halftwist_to_braid(self, power)

    def to_json(self) -> dict:
        return {"index": self.index, "conjugator": braid_to_json(self.conjugator)}


def halftwist_to_braid(h: HalfTwist, power: int = 1) -> Braid:
    core = Braid.sigma(h.strands, h.index, power)
    return h.conjugator * core * h.conjugator.inverse()


PATHS = ("below", "above")


def path_conjugator_word(i: int, j: int, side: str) -> tuple[tuple[int, int], ...]:
    """Letters of the conjugator bringing point ``j`` next to ``i`` along ``side``.

    ``side`` is ``below``, ``above`` or a mixed path written as one character per
    intermediate point, read from ``j-1`` down to ``i+1``: ``b`` passes below
    that point and ``a`` above it (``"aabb"`` for j - i = 5).
    """
    gap = j - i - 1
    if side == "below":
        side = "b" * gap
    elif side == "above":
        side = "a" * gap
    if len(side) != gap or set(side) - {"a", "b"}:
        raise BraidError(
            f"path must be 'below', 'above' or {gap} characters from 'ab', got {side!r}"
        )
    return tuple((k, 1 if c == "b" else -1) for k, c in zip(range(j - 1, i, -1), side))


def band_generator(p: int, i: int, j: int, side: str = "below") -> HalfTwist:
    """Half-twist exchanging points ``i < j`` along a path below/above the points between.

    The conjugator walks ``j`` down to ``i + 1``: ``sigma_{j-1} ... sigma_{i+1}``
    for a path below the axis, the same word with inverse letters above it.
    Mixed paths are accepted as described in :func:`path_conjugator_word`.
    """
    if not 1 <= i < j <= p:
        raise BraidError(f"need 1 <= i < j <= p, got i={i}, j={j}, p={p}")
    return HalfTwist(p, i, Braid(p, path_conjugator_word(i, j, side)))


@dataclass(frozen=True)
class FullTwistSpec:
    strands: int
    start: int
    stop: int
    power: int = 1

    def __post_init__(self):
        if not 1 <= self.start < self.stop <= self.strands:
            raise BraidError(f"bad full-twist range [{self.start}..{self.stop}] in B_{self.strands}")
        if self.power < 1:
            raise BraidError("full-twist power counts full twists and must be positive")


def garside(strands: int, start: int, stop: int) -> Braid:
    """The positive half twist Delta on the points start..stop."""
    word = []
    for top in range(stop - 1, start - 1, -1):
        word.extend((k, 1) for k in range(start, top + 1))
    return Braid(strands, tuple(word))


def fulltwist(spec: FullTwistSpec) -> Braid:
    """``(Delta_[i..j])^(2*power)`` as a positive word: (sigma_i ... sigma_{j-1})^(m*power), m = j-i+1."""
    i, j = spec.start, spec.stop
    m = j - i + 1
    row = tuple((k, 1) for k in range(i, j))
    return Braid(spec.strands, row * (m * spec.power))


# --------------------------------------------------------------- text / json

def format_braid(b: Braid) -> str:
    if not b.word:
        return "1"
    return " ".join(f"s{k}" if e == 1 else f"s{k}^{e}" for k, e in b.word)


def parse_braid_word(text: str, strands: int) -> Braid:
    """Parse ``s3^2 s2 s1^-1`` (the ``s`` prefix is optional)."""
    gens = []
    for tok in text.split():
        body = tok[1:] if tok[:1] in "sS" else tok
        base, _, exp = body.partition("^")
        try:
            k = int(base)
            e = int(exp) if exp else 1
        except ValueError:
            raise BraidError(f"bad braid token {tok!r}") from None
        gens.append((k, e))
    return Braid(strands, tuple(gens))


def braid_to_json(b: Braid) -> list:
    return [[k, e] for k, e in b.word]


def braid_from_json(data: Sequence, strands: int) -> Braid:
    return Braid(strands, tuple((int(k), int(e)) for k, e in data))


def dumps_braid(b: Braid) -> str:
    return json.dumps(braid_to_json(b))


# ------------------------------------------------------------ hurwitz action

def hurwitz_apply(b: Braid, images: Sequence, mul, inv,
                  convention: str = DEFAULT_CONVENTION) -> list:
    """Images of x_1..x_p under ``rho o phi_b`` given the images under ``rho``.

    ``mul``/``inv`` are the operations of the target group, so any group with
    cheap arithmetic (permutations, matrices) can stand in for the free group.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    desc = convention == "descending"
    out = list(images)
    for k, e in b.word:
        for _ in range(abs(e)):
            g, h = out[k - 1], out[k]
            if desc and e > 0:
                out[k - 1], out[k] = h, mul(mul(h, g), inv(h))
            elif desc:
                out[k - 1], out[k] = mul(mul(inv(g), h), g), g
            elif e > 0:
                out[k - 1], out[k] = mul(mul(g, h), inv(g)), g
            else:
                out[k - 1], out[k] = h, mul(mul(inv(h), g), h)
    return out
