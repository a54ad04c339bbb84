"""Finitely presented groups: normalisation, Tietze simplification and rendering."""

from __future__ import annotations

import heapq
import json
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import (
    Word,
    canonical_relator,
    commutator,
    cyclic_reduce,
    format_word,
    is_proper_power,
    rotations,
    word_from_json,
    word_to_json,
)

DEFAULT_MAX_PASSES = 64
DEFAULT_MAX_LENGTH = 4096
_FULL_NORMAL_LENGTH = 128


class PresentationError(ValueError):
    pass


def _relator_key(w: Word):
    return (len(w), [(abs(a), a < 0) for a in w.letters])


def normalize_relators(relators: Iterable[Word]) -> tuple[Word, ...]:
    """Cyclically reduce, drop trivial ones, dedupe up to rotation/inversion, sort."""
    seen = {canonical_relator(r) for r in relators}
    seen.discard(Word())
    return tuple(sorted(seen, key=_relator_key))


@dataclass(frozen=True)
class Presentation:
    """``< generators | relators >``; relators are words over generator indices 1..n.

    ``projective`` optionally flags the product-of-meridians relator so that
    :func:`involution_transform` can find it.
    """

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)
    projective: Word | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        if len(set(gens)) != len(gens):
            raise PresentationError(f"duplicate generator names in {gens}")
        object.__setattr__(self, "generators", gens)
        rels = normalize_relators(self.relators)
        n = len(gens)
        for r in rels:
            if r.max_generator() > n:
                raise PresentationError(f"relator {r} uses a generator beyond the {n} declared")
        object.__setattr__(self, "relators", rels)

    @classmethod
    def free(cls, names: Sequence[str] | int, prefix: str = "a") -> "Presentation":
        if isinstance(names, int):
            names = [f"{prefix}{i}" for i in range(1, names + 1)]
        return cls(tuple(names))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name) + 1
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def with_relators(self, extra: Iterable[Word], **meta) -> "Presentation":
        return Presentation(self.generators, self.relators + tuple(extra),
                            {**self.meta, **meta}, self.projective)

    def without(self, drop: Iterable[Word]) -> "Presentation":
        gone = {canonical_relator(r) for r in drop}
        return Presentation(self.generators, tuple(r for r in self.relators if r not in gone),
                            dict(self.meta), self.projective)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)

    def __str__(self) -> str:
        return render_text(self)


def relabel(p: Presentation, prefix: str = "a", order: Sequence[int] | None = None) -> Presentation:
    """Rename generators to ``prefix1..prefixn``.

    ``order`` lists current generator indices in their new order; by default
    the existing order is kept.
    """
    n = p.rank
    order = list(order) if order is not None else list(range(1, n + 1))
    if sorted(order) != list(range(1, n + 1)):
        raise PresentationError(f"order must be a permutation of 1..{n}, got {order}")
    mapping = {old: new for new, old in enumerate(order, 1)}
    names = tuple(f"{prefix}{i}" for i in range(1, n + 1))
    meta = dict(p.meta)
    meta.setdefault("renamed_from", [p.generators[g - 1] for g in order])
    proj = p.projective.rename(mapping) if p.projective is not None else None
    return Presentation(names, tuple(r.rename(mapping) for r in p.relators), meta, proj)


def _product_square_order(p: Presentation) -> list[int] | None:
    # generator order read off a relator (g_{s1} ... g_{sn})^k using every generator once
    for r in p.relators:
        root, _ = is_proper_power(r)
        lets = root.letters
        if len(lets) == p.rank and all(a > 0 for a in lets) and len(set(lets)) == p.rank:
            return list(lets)
    return None


def canonical_labels(p: Presentation, prefix: str = "a") -> Presentation:
    """Relabel so a power of the product of all generators reads ``a1 a2 ... an``.

    The cyclic starting point is the generator with the most letter
    occurrences across all relators (first one on ties).  Presentations
    without such a relator are only renamed.
    """
    order = _product_square_order(p)
    if order is None:
        return relabel(p, prefix)
    weight = {g: sum(r.occurrences(g) for r in p.relators) for g in order}
    start = max(range(len(order)), key=lambda i: (weight[order[i]], -i))
    return relabel(p, prefix, order[start:] + order[:start])


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``a1 a2^-1 a3^2`` (also accepts ``*`` as separator); ``e`` or ``1`` is the identity."""
    index = {n: i + 1 for i, n in enumerate(names)}
    syl = []
    for tok in text.replace("*", " ").split():
        if tok in ("e", "1") and tok not in index:
            continue
        base, _, exp = tok.partition("^")
        if base not in index:
            raise PresentationError(f"unknown generator {base!r} in {text!r}")
        syl.append((index[base], int(exp) if exp else 1))
    return Word(syl)


# ------------------------------------------------------------------- simplify

def _solve(r: Word, g: int) -> Word:
    """``r`` contains ``g^(+-1)`` exactly once; return the word ``g`` equals."""
    s = r.letters
    pos = next(i for i, a in enumerate(s) if abs(a) == g)
    rot = s[pos:] + s[:pos]
    rest = Word.from_letters(rot[1:])
    return rest.inverse() if rot[0] > 0 else rest


def _drop_generator(p: Presentation, g: int, image: Word, relators: Sequence[Word]) -> Presentation:
    subbed = [r.substitute({g: image}) for r in relators]
    mapping = {h: h - 1 for h in range(g + 1, p.rank + 1)}
    gens = p.generators[:g - 1] + p.generators[g:]
    proj = None
    if p.projective is not None:
        proj = p.projective.substitute({g: image}).rename(mapping)
    return Presentation(gens, [r.rename(mapping) for r in subbed], p.meta, proj)


def _elimination_candidates(p: Presentation):
    for pos, r in enumerate(p.relators):
        once = [g for g in sorted(r.generators(), reverse=True) if r.occurrences(g) == 1]
        for g in once:
            yield pos, r, g


def eliminate_once(p: Presentation, max_length: int = DEFAULT_MAX_LENGTH) -> Presentation | None:
    """One Tietze elimination, or ``None`` if no generator can be removed.

    Among all (relator, generator occurring once) pairs, pick the one leaving
    the smallest total relator length; ties go to the shorter defining
    relator, then to the highest numbered generator so survivors keep low
    indices.
    """
    best = None
    tried = set()
    for pos, r, g in _elimination_candidates(p):
        image = _solve(r, g)
        if (g, image) in tried:
            continue
        tried.add((g, image))
        others = p.relators[:pos] + p.relators[pos + 1:]
        if any(len(o) + (len(image) - 1) * o.occurrences(g) > max_length for o in others):
            continue
        cand = _drop_generator(p, g, image, others)
        score = (cand.total_length(), len(r), -g)
        if best is None or score < best[0]:
            best = (score, cand)
    return None if best is None else best[1]


def _pieces(rule: Word) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Map each long piece ``u`` of ``rule`` (|u| > |rule|/2) to the shorter ``v`` with u = v."""
    n = len(rule)
    out: dict[tuple[int, ...], tuple[int, ...]] = {}
    for rot in rotations(rule) + rotations(rule.inverse()):
        for k in range(n // 2 + 1, n + 1):
            u = rot[:k]
            v = tuple(-a for a in reversed(rot[k:]))
            if u not in out or _relator_key(Word.from_letters(v)) < _relator_key(Word.from_letters(out[u])):
                out[u] = v
    return out


def _dehn_reduce(target: Word, pieces: dict, max_piece: int) -> Word:
    """Repeatedly replace long pieces inside the cyclic word ``target``."""
    cur = cyclic_reduce(target)
    changed = True
    while changed and cur:
        changed = False
        s = cur.letters
        n = len(s)
        doubled = s + s
        for k in range(min(max_piece, n), 0, -1):
            for start in range(n):
                u = doubled[start:start + k]
                v = pieces.get(u)
                if v is None:
                    continue
                rest = doubled[start + k:start + n]
                cur = cyclic_reduce(Word.from_letters(v + rest))
                changed = True
                break
            if changed:
                break
    return cur


def commuting_pairs(relators: Iterable[Word]) -> set[frozenset[int]]:
    """Generator pairs {x, y} for which [x, y] is one of the relators."""
    out = set()
    for r in relators:
        s = r.letters
        if len(s) == 4 and s[0] == -s[2] and s[1] == -s[3] and abs(s[0]) != abs(s[1]):
            out.add(frozenset((abs(s[0]), abs(s[1]))))
    return out


def _commutes(a: int, b: int, comm: set) -> bool:
    return abs(a) == abs(b) or frozenset((abs(a), abs(b))) in comm


def _lex_normal(s: tuple[int, ...], comm) -> tuple[int, ...]:
    """Least word in the commutation class of ``s`` (letters ordered as in canonical_relator).

    Topological sort of the dependency graph, always emitting the smallest
    available letter.
    """
    gens = {abs(a) for a in s}
    blockers = {g: [h for h in gens if h == g or frozenset((g, h)) not in comm] for g in gens}
    indeg = [0] * len(s)
    succ: list[list[int]] = [[] for _ in s]
    last: dict[int, int] = {}
    for j, a in enumerate(s):
        g = abs(a)
        for h in blockers[g]:
            i = last.get(h)
            if i is not None:
                succ[i].append(j)
                indeg[j] += 1
        last[g] = j
    heap = [(abs(a), a < 0, j) for j, a in enumerate(s) if not indeg[j]]
    heapq.heapify(heap)
    out = []
    while heap:
        _, _, i = heapq.heappop(heap)
        out.append(s[i])
        for j in succ[i]:
            indeg[j] -= 1
            if not indeg[j]:
                heapq.heappush(heap, (abs(s[j]), s[j] < 0, j))
    return tuple(out)


def commutation_normal(r: Word, comm: set) -> Word:
    """Shorten a cyclic word using the commutation relators, then pick a stable representative."""
    if not comm:
        return r
    return _commutation_normal(r, frozenset(comm))


def _cyclic_trace_reduce(s: tuple[int, ...], comm) -> tuple[int, ...]:
    """Cancel x ... x^-1 around the cycle whenever everything in between commutes with x."""
    s = list(s)
    i = 0
    while i < len(s):
        a, n = s[i], len(s)
        for d in range(1, n):
            j = (i + d) % n
            if s[j] == -a:
                for k in sorted((i, j), reverse=True):
                    del s[k]
                i = -1
                break
            if not _commutes(a, s[j], comm):
                break
        i += 1
    return tuple(s)


@lru_cache(maxsize=8192)
def _commutation_normal(r: Word, comm: frozenset) -> Word:
    s = _cyclic_trace_reduce(cyclic_reduce(r).letters, comm)
    cur = canonical_relator(Word.from_letters(s))
    if len(cur) > _FULL_NORMAL_LENGTH:
        # all rotations would be quadratic; one pass is stable enough for long words
        return canonical_relator(Word.from_letters(_lex_normal(cur.letters, comm)))
    while True:
        cands = []
        for w in (cur, cur.inverse()):
            for rot in rotations(w):
                cands.append(_lex_normal(rot, comm))
        best = canonical_relator(Word.from_letters(min(cands, key=lambda t: [(abs(a), a < 0) for a in t])))
        if best == cur:
            return cur
        cur = best


def commutation_pass(p: Presentation) -> Presentation | None:
    comm = commuting_pairs(p.relators)
    if not comm:
        return None
    keep = {r for r in p.relators if len(r) == 4 and frozenset(r.generators()) in comm}
    rels = [r if r in keep else commutation_normal(r, comm) for r in p.relators]
    new = Presentation(p.generators, rels, p.meta, p.projective)
    return None if new.relators == p.relators else new


def rewrite_pass(p: Presentation) -> Presentation | None:
    """Shorten relators with the other relators read as rewriting rules u -> v (|v| < |u|)."""
    rels = list(p.relators)
    changed = False
    for i in range(len(rels)):
        rule = rels[i]
        if not rule:
            continue
        pieces = _pieces(rule)
        maxk = len(rule)
        for j in range(len(rels)):
            if i == j or not rels[j]:
                continue
            new = _dehn_reduce(rels[j], pieces, maxk)
            if len(new) < len(rels[j]):
                rels[j] = new
                changed = True
        if changed:
            # rebuild so duplicates and trivial relators vanish before the next rule
            break
    if not changed:
        return None
    return Presentation(p.generators, rels, p.meta, p.projective)


def _reduce(p: Presentation, limit: int = 10_000) -> Presentation:
    """Commutation and rewriting passes until nothing changes."""
    for _ in range(limit):
        for step in (commutation_pass, rewrite_pass):
            nxt = step(p)
            if nxt is not None:
                p = nxt
                break
        else:
            return p
    return p


def simplify(p: Presentation, max_passes: int = DEFAULT_MAX_PASSES,
             max_length: int = DEFAULT_MAX_LENGTH) -> Presentation:
    """Deterministic Tietze simplification.

    Relators are first shortened as far as the rewriting steps allow, then one
    generator is eliminated; each such round is a pass.  Stops when no
    generator can be eliminated or after ``max_passes``; hitting a cap is
    recorded in ``meta``, not raised.
    """
    cur = Presentation(p.generators, p.relators, dict(p.meta), p.projective)
    capped = False
    passes = 0
    while True:
        cur = _reduce(cur)
        if passes >= max_passes:
            capped = eliminate_once(cur, max_length) is not None
            break
        nxt = eliminate_once(cur, max_length)
        if nxt is None:
            break
        cur = nxt
        passes += 1
    if any(len(r) > max_length for r in cur.relators):
        capped = True
    meta = dict(cur.meta)
    meta["simplified"] = True
    meta["passes"] = passes
    if capped:
        meta["simplify_capped"] = True
    return Presentation(cur.generators, cur.relators, meta, cur.projective)


# ---------------------------------------------------------- group operations

def projective_relator(p: Presentation) -> Word:
    """The flagged projective relator, else x_1 x_2 ... x_n if present among the relators."""
    if p.projective is not None:
        if canonical_relator(p.projective) not in p.relators:
            raise PresentationError("flagged projective relator is not among the relators")
        return p.projective
    prod = Word.product(range(1, p.rank + 1))
    if canonical_relator(prod) in p.relators:
        return prod
    raise PresentationError("presentation has no projective relator (product of all meridians)")


def involution_transform(p: Presentation) -> Presentation:
    """Replace the projective relator P by ``[mu_i, P]`` for all i and ``P^2``.

    Turns a line-arrangement presentation into the one for the quadric arrangement
    obtained by the standard Cremona involution; the new group is a central
    extension of the old one by Z/2, with P central of order 2.
    """
    prod = projective_relator(p)
    keep = [r for r in p.relators if r != canonical_relator(prod)]
    extra = [commutator(Word.gen(i), prod) for i in range(1, p.rank + 1)] + [prod ** 2]
    meta = {**p.meta, "transform": "involution"}
    return Presentation(p.generators, keep + extra, meta, None)


def quotient_kill(p: Presentation, gens_to_kill: Iterable[str | int], simplify_result: bool = True,
                  **kwargs) -> Presentation:
    kill = []
    for g in gens_to_kill:
        idx = g if isinstance(g, int) else p.index(g)
        if not 1 <= idx <= p.rank:
            raise PresentationError(f"unknown generator {g!r}")
        kill.append(Word.gen(idx))
    q = p.with_relators(kill, killed=[p.generators[w.max_generator() - 1] for w in kill])
    return simplify(q, **kwargs) if simplify_result else q


# -------------------------------------------------------------------- render

def _as_equal_powers(r: Word) -> tuple[Word, Word, int] | None:
    """Recognise ``u^k v^-k`` with ``v`` a rotation of ``u`` (a tangency-type relation)."""
    for cand in rotations(r) + rotations(r.inverse()):
        n = len(cand)
        if n % 2:
            continue
        a = Word.from_letters(cand[:n // 2])
        b = Word.from_letters(cand[n // 2:]).inverse()
        if len(a) != n // 2 or len(b) != n // 2 or a == b:
            continue
        ra, k = is_proper_power(a)
        rb, kb = is_proper_power(b)
        if k == kb and len(ra) == len(rb) and all(x > 0 for x in ra.letters) \
                and rb.letters in set(rotations(ra)):
            return ra, rb, k
    return None


def _power(w: Word, k: int, names) -> str:
    body = format_word(w, names)
    if k == 1:
        return body
    if len(w) == 1:
        return f"{body}^{k}"
    return f"({body})^{k}"


def render_relator(r: Word, names: Sequence[str]) -> str:
    """Render in the notation of hand computations, e.g. ``(a1 a2)^2 = e``."""
    root, k = is_proper_power(r)
    if k > 1:
        return f"{_power(root, k, names)} = e"
    s = r.letters
    if len(s) == 4 and s[0] == -s[2] and s[1] == -s[3] and abs(s[0]) != abs(s[1]) \
            and s[0] > 0 and s[1] > 0:
        return f"[{names[s[0] - 1]},{names[s[1] - 1]}] = e"
    eq = _as_equal_powers(r)
    if eq:
        a, b, k = eq
        return f"{_power(a, k, names)} = {_power(b, k, names)}"
    return f"{format_word(r, names)} = e"


def render_text(p: Presentation) -> str:
    gens = ", ".join(p.generators)
    if not p.relators:
        return f"< {gens} | >" if gens else "< | >"
    rels = ", ".join(render_relator(r, p.generators) for r in p.relators)
    return f"< {gens} | {rels} >"


def render_lines(p: Presentation) -> str:
    lines = [f"generators: {', '.join(p.generators) or '(none)'}"]
    lines += [f"  {render_relator(r, p.generators)}" for r in p.relators]
    return "\n".join(lines)


def to_json(p: Presentation) -> dict:
    out = {
        "generators": list(p.generators),
        "relators": [word_to_json(r, p.generators) for r in p.relators],
        "meta": p.meta,
    }
    if p.projective is not None:
        out["projective"] = word_to_json(p.projective, p.generators)
    return out


def from_json(data: dict) -> Presentation:
    gens = [str(g) for g in data["generators"]]
    rels = [word_from_json(r, gens) for r in data.get("relators", [])]
    proj = data.get("projective")
    return Presentation(tuple(gens), tuple(rels), dict(data.get("meta", {})),
                        word_from_json(proj, gens) if proj is not None else None)


def dumps(p: Presentation) -> str:
    return json.dumps(to_json(p), sort_keys=True)


def _gap_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "One(F)"
    return "*".join(names[g - 1] if e == 1 else f"{names[g - 1]}^{e}" for g, e in w.syllables)


def render_gap(p: Presentation) -> str:
    """GAP input defining ``G`` as ``F / [ ... ]``; see README for the exact layout."""
    quoted = ", ".join(f'"{g}"' for g in p.generators)
    lines = [f"F := FreeGroup({quoted or 0});;"]
    for i, g in enumerate(p.generators, 1):
        lines.append(f"{g} := F.{i};;")
    rels = ", ".join(_gap_word(r, p.generators) for r in p.relators)
    lines.append(f"G := F / [ {rels} ];;" if rels else "G := F / [ ];;")
    return "\n".join(lines)


# ------------------------------------------------------------- text parsing

_PUNCT = "()[],=^<>|"


def _lex(text: str) -> list[tuple[str, int]]:
    out, i = [], 0
    while i < len(text):
        c = text[i]
        if c.isspace() or c == "*":
            i += 1
        elif c in _PUNCT:
            out.append((c, i + 1))
            i += 1
        elif c == "-" or c.isdigit():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            out.append((text[i:j], i + 1))
            i = j
        elif c.isalpha() or c == "_":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append((text[i:j], i + 1))
            i = j
        else:
            raise PresentationError(f"unexpected character {c!r} at column {i + 1}")
    return out


class _WordParser:
    """Products of generators, ``(w)^k``, ``[u,v]`` and ``e``; ``u = v`` gives u v^-1."""

    def __init__(self, toks, names):
        self.toks, self.pos = toks, 0
        self.index = {n: i + 1 for i, n in enumerate(names)}

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self, want=None):
        if self.pos >= len(self.toks):
            raise PresentationError(f"unexpected end of input, expected {want or 'more'}")
        tok, col = self.toks[self.pos]
        if want is not None and tok != want:
            raise PresentationError(f"expected {want!r} at column {col}, got {tok!r}")
        self.pos += 1
        return tok

    def relator(self) -> Word:
        lhs = self.product()
        if self.peek() == "=":
            self.take("=")
            lhs = lhs * self.product().inverse()
        return lhs

    def product(self) -> Word:
        w = Word()
        while self.peek() not in (None, ")", "]", ",", "=", "|", ">"):
            w = w * self.factor()
        return w

    def factor(self) -> Word:
        tok = self.take()
        if tok == "(":
            base = self.product()
            self.take(")")
        elif tok == "[":
            u = self.product()
            self.take(",")
            v = self.product()
            self.take("]")
            base = commutator(u, v)
        elif tok in self.index:
            base = Word.gen(self.index[tok])
        elif tok in ("e", "1"):
            base = Word()
        else:
            raise PresentationError(f"unknown generator {tok!r}")
        if self.peek() == "^":
            self.take("^")
            exp = self.take()
            try:
                base = base ** int(exp)
            except ValueError:
                raise PresentationError(f"bad exponent {exp!r}") from None
        return base


def parse_presentation(text: str) -> Presentation:
    """Parse ``< a, b | (a b)^2 = e, [a,b] >``, the form printed by :func:`render_text`."""
    toks = _lex(text)
    if not toks or toks[0][0] != "<" or toks[-1][0] != ">":
        raise PresentationError("a presentation looks like < gens | relators >")
    body = toks[1:-1]
    bars = [i for i, (t, _) in enumerate(body) if t == "|"]
    if len(bars) != 1:
        raise PresentationError("expected exactly one '|' between generators and relators")
    names = [t for t, _ in body[:bars[0]] if t != ","]
    rel_toks = body[bars[0] + 1:]
    parser = _WordParser(rel_toks, names)
    rels = []
    while parser.peek() is not None:
        rels.append(parser.relator())
        if parser.peek() == ",":
            parser.take(",")
        elif parser.peek() is not None:
            raise PresentationError(f"unexpected {parser.peek()!r} in relator list")
    return Presentation(tuple(names), tuple(rels), {"source": "text"})
