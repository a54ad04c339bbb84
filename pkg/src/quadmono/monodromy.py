"""Braid monodromy tables: built-in cases, a small text/JSON format, and the
closed-form relation lists for the three arrangement families."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
import random
import re
from dataclasses import dataclass
from typing import Sequence

from .braids import (
    Braid,
    BraidError,
    FullTwistSpec,
    band_generator,
    braid_from_json,
    braid_to_json,
    format_braid,
    fulltwist,
    garside,
    hurwitz_apply,
    parse_braid_word,
    reduce_braid_word,
)
from .presentation import Presentation
from .words import Word, commutator

EPSILONS = (1, 2, 4, 8)
FAMILIES = ("A", "B", "C")
BUILTIN_CASES = ("A2", "A3", "B2", "B3", "C2", "C3", "C4")
RANGE = "range"


class TableError(ValueError):
    pass


class TableParseError(TableError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class SingularFactor:
    """One row of a table: ``conjugator * H^epsilon * conjugator^-1``.

    ``H`` is the band half-twist from ``i`` to ``j`` along ``path`` (``below``,
    ``above`` or a mixed ``a``/``b`` string), or with ``path == "range"`` the
    Garside half twist of the points ``i..j``, so that epsilon 4 is a double
    and 8 a quadruple full twist.
    """

    i: int
    j: int
    epsilon: int
    path: str = "below"
    conjugator: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.epsilon not in EPSILONS:
            raise TableError("epsilon must be 1,2,4,8")
        if not 1 <= self.i < self.j:
            raise TableError(f"skeleton needs i < j, got <{self.i},{self.j}>")
        object.__setattr__(self, "conjugator", reduce_braid_word(self.conjugator))

    @property
    def skeleton(self) -> tuple[int, int, str]:
        return (self.i, self.j, self.path)

    def core(self, p: int) -> Braid:
        if self.path == RANGE:
            return garside(p, self.i, self.j) ** self.epsilon
        return band_generator(p, self.i, self.j, self.path).to_braid(self.epsilon)

    def braid(self, p: int) -> Braid:
        c = Braid(p, self.conjugator)
        return c * self.core(p) * c.inverse()


@dataclass(frozen=True)
class MonodromyTable:
    points: int
    factors: tuple[SingularFactor, ...] = ()
    include_projective: bool = True
    name: str = ""
    reconstructed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.points < 1:
            raise TableError("a table needs at least one point")
        for f in self.factors:
            if f.j > self.points:
                raise TableError(f"skeleton <{f.i},{f.j}> exceeds {self.points} points")
            if f.conjugator and max(k for k, _ in f.conjugator) >= self.points:
                raise TableError(f"conjugator {f.conjugator} needs more than {self.points} points")
            try:
                f.core(self.points)
            except BraidError as exc:
                raise TableError(str(exc)) from None

    def braids(self) -> list[Braid]:
        return [f.braid(self.points) for f in self.factors]

    def product(self) -> Braid:
        """Product of the factors; listed first acts last, i.e. f_q ... f_2 f_1."""
        out = Braid.identity(self.points)
        for b in self.braids():
            out = b * out
        return out

    def exponent_sum(self) -> int:
        return sum(e for b in self.braids() for _, e in b.word)


# ------------------------------------------------------------- factorization

def _perm_mul(a: tuple, b: tuple) -> tuple:
    return tuple(a[x] for x in b)


def _perm_inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def full_twist_check(table: MonodromyTable, trials: int = 24, degree: int = 9,
                     seed: int = 0) -> bool:
    """Randomised test that the factors multiply to the full twist.

    The full twist acts on every tuple of group elements by simultaneous
    conjugation with the product g_p ... g_1; compare on random tuples of
    permutations.  A False answer is certain, True is evidence.
    """
    rng = random.Random(seed)
    braids = table.braids()
    p = table.points
    for _ in range(trials):
        tup = []
        for _ in range(p):
            perm = list(range(degree))
            rng.shuffle(perm)
            tup.append(tuple(perm))
        cur = tup
        for b in reversed(braids):
            cur = hurwitz_apply(b, cur, _perm_mul, _perm_inv)
        total = tuple(range(degree))
        for g in reversed(tup):
            total = _perm_mul(total, g)
        inv = _perm_inv(total)
        if cur != [_perm_mul(_perm_mul(total, g), inv) for g in tup]:
            return False
    return True


# ------------------------------------------------------------ built-in tables

def _f(i, j, eps, path="below", conj="", p=64) -> SingularFactor:
    word = parse_braid_word(conj, p).word if conj else ()
    return SingularFactor(i, j, eps, path, word)


def _twist_word(p: int, start: int, stop: int, power: int = 1) -> tuple:
    if stop <= start:
        return ()
    return fulltwist(FullTwistSpec(p, start, stop, power)).word


def family_a_table(n: int) -> MonodromyTable:
    """n quadrics with one common tangency point, fibred over 2n points.

    Right side: the common tangency (double full twist of points n+1..2n),
    then n branch points pairing n-k with n+k+1 below the axis, each seen
    through the full twist of the points right of n+k+1.  Left side mirrors it.
    """
    p = 2 * n
    fs = []
    if n >= 2:
        fs.append(SingularFactor(n + 1, p, 4, RANGE) if n > 2 else SingularFactor(n + 1, p, 4))
    for k in range(n):
        fs.append(SingularFactor(n - k, n + k + 1, 1, "below", _twist_word(p, n + k + 1, p)))
    if n >= 2:
        fs.append(SingularFactor(1, n, 4, RANGE) if n > 2 else SingularFactor(1, n, 4))
    for k in range(n):
        fs.append(SingularFactor(n - k, n + k + 1, 1, "above", _twist_word(p, 1, n - k)))
    return MonodromyTable(p, tuple(fs), name=f"A{n}", reconstructed=n > 2)


def family_b_table(n: int) -> MonodromyTable:
    """n quadrics pairwise tangent at a single point (quadruple full twist)."""
    p = 2 * n
    fs = []
    if n >= 2:
        fs.append(SingularFactor(n + 1, p, 8, RANGE) if n > 2 else SingularFactor(n + 1, p, 8))
    for k in range(n):
        conj = _twist_word(p, n + 1, p) + _twist_word(p, n + k + 1, p)
        fs.append(SingularFactor(n - k, n + k + 1, 1, "below", Braid(p, conj).word))
    for k in range(n):
        path = "a" * k + "b" * k if k else "below"
        fs.append(SingularFactor(n - k, n + k + 1, 1, path))
    return MonodromyTable(p, tuple(fs), name=f"B{n}", reconstructed=n > 2)


def _transcribed(case: str) -> MonodromyTable:
    if case == "A2":
        fs = [_f(3, 4, 4), _f(2, 3, 1, conj="s3^2"), _f(1, 4, 1, "below"),
              _f(1, 2, 4), _f(2, 3, 1, conj="s1^2"), _f(1, 4, 1, "above")]
        return MonodromyTable(4, tuple(fs), name="A2")
    if case == "B2":
        fs = [_f(3, 4, 8), _f(2, 3, 1, conj="s3^4"), _f(1, 4, 1, "below", "s3^2"),
              _f(2, 3, 1), _f(1, 4, 1, "below", "s2 s1^2 s2^-1")]
        return MonodromyTable(4, tuple(fs), name="B2")
    if case == "C2":
        fs = [_f(2, 3, 1), _f(1, 4, 1, "below", "s2 s1^2 s2^-1"),
              _f(1, 2, 8), _f(2, 3, 1, conj="s1^4"), _f(1, 4, 1, "above", "s1^2")]
        return MonodromyTable(4, tuple(fs), name="C2")
    if case == "C3":
        fs = [_f(3, 4, 2), _f(2, 4, 2, "below"), _f(3, 5, 2, "below", "s3^2"),
              _f(2, 5, 2, "below", "s3 s2^2 s3^-1"), _f(2, 3, 1), _f(4, 5, 1),
              _f(1, 6, 1, "aabb", "s3"),
              _f(1, 2, 8), _f(2, 3, 1, conj="s1^4"), _f(5, 6, 8), _f(4, 5, 1, conj="s5^4"),
              _f(1, 6, 1, "bbab", "s1^4 s5^2")]
        return MonodromyTable(6, tuple(fs), name="C3")
    raise TableError(f"no transcribed table {case!r}")


def builtin_table(case: str) -> MonodromyTable:
    """Tables of the worked cases; A3, B3 and C4 are reconstructions."""
    key = case.upper()
    if key in ("A2", "B2", "C2", "C3"):
        return _transcribed(key)
    if key == "A3":
        return family_a_table(3)
    if key == "B3":
        return family_b_table(3)
    if key == "C4":
        return _packaged("c4.table")
    raise TableError(f"unsupported table {case!r}; choose from {', '.join(BUILTIN_CASES)}")


@lru_cache(maxsize=None)
def _packaged(filename: str) -> MonodromyTable:
    text = resources.files("quadmono").joinpath("data").joinpath(filename).read_text()
    return parse_table(text)


# ------------------------------------------------------------------ text form

_TOKEN = re.compile(r"\S+")


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


_BOOL = {"yes": True, "on": True, "true": True, "no": False, "off": False, "false": False}


def _int(tok: tuple[str, int], lineno: int, what: str) -> int:
    try:
        return int(tok[0])
    except ValueError:
        raise TableParseError(f"expected integer {what}, got {tok[0]!r}", lineno, tok[1]) from None


def _parse_factor(toks, lineno: int, points: int) -> SingularFactor:
    pos = 1
    end_col = toks[-1][1] + len(toks[-1][0])

    def need(what: str):
        nonlocal pos
        if pos >= len(toks):
            raise TableParseError(f"expected {what}", lineno, end_col)
        tok = toks[pos]
        pos += 1
        return tok

    kw = need("'skeleton'")
    if kw[0] != "skeleton":
        raise TableParseError(f"expected 'skeleton', got {kw[0]!r}", lineno, kw[1])
    ti, tj = need("skeleton start"), need("skeleton end")
    i, j = _int(ti, lineno, "skeleton start"), _int(tj, lineno, "skeleton end")
    if not 1 <= i < j:
        raise TableParseError(f"skeleton needs 1 <= i < j, got <{i},{j}>", lineno, ti[1])
    if j > points:
        raise TableParseError(f"index {j} out of range for {points} points", lineno, tj[1])
    path = "below"
    tok = need("'eps'")
    if tok[0] != "eps":
        path = tok[0]
        if path not in ("below", "above", RANGE) and (set(path) - {"a", "b"}
                                                      or len(path) != j - i - 1):
            raise TableParseError(f"bad path decoration {path!r}", lineno, tok[1])
        tok = need("'eps'")
        if tok[0] != "eps":
            raise TableParseError(f"expected 'eps', got {tok[0]!r}", lineno, tok[1])
    te = need("epsilon value")
    eps = _int(te, lineno, "epsilon")
    if eps not in EPSILONS:
        raise TableParseError("epsilon must be 1,2,4,8", lineno, te[1])
    conj: tuple = ()
    if pos < len(toks):
        tc = toks[pos]
        if tc[0] != "conj":
            raise TableParseError(f"unexpected {tc[0]!r}", lineno, tc[1])
        if pos + 1 >= len(toks):
            raise TableParseError("expected a braid word after 'conj'", lineno, end_col)
        words = toks[pos + 1:]
        for text, col in words:
            try:
                parse_braid_word(text, points)
            except BraidError as exc:
                raise TableParseError(str(exc), lineno, col) from None
        conj = parse_braid_word(" ".join(t for t, _ in words), points).word
    return SingularFactor(i, j, eps, path, conj)


def parse_table(text: str) -> MonodromyTable:
    """Parse the line format (or its JSON form, detected by a leading ``{``)."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TableParseError(exc.msg, exc.lineno, exc.colno) from None
        return table_from_json(data)
    points = None
    factors = []
    projective, name, recon = True, "", False
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        head, col = toks[0]
        if head == "points":
            if len(toks) != 2:
                raise TableParseError("usage: points <p>", lineno, col)
            if points is not None:
                raise TableParseError("points given twice", lineno, col)
            points = _int(toks[1], lineno, "point count")
            if points < 1:
                raise TableParseError("point count must be positive", lineno, toks[1][1])
        elif head in ("projective", "reconstructed"):
            if len(toks) != 2 or toks[1][0].lower() not in _BOOL:
                raise TableParseError(f"usage: {head} yes|no", lineno, col)
            if head == "projective":
                projective = _BOOL[toks[1][0].lower()]
            else:
                recon = _BOOL[toks[1][0].lower()]
        elif head == "name":
            name = " ".join(t for t, _ in toks[1:])
        elif head == "factor":
            if points is None:
                raise TableParseError("'points' must come before the first factor", lineno, col)
            try:
                factors.append(_parse_factor(toks, lineno, points))
            except TableError as exc:
                if isinstance(exc, TableParseError):
                    raise
                raise TableParseError(str(exc), lineno, col) from None
        else:
            raise TableParseError(f"unknown directive {head!r}", lineno, col)
    if points is None:
        raise TableParseError("missing 'points' line", 1, 1)
    try:
        return MonodromyTable(points, tuple(factors), projective, name, recon)
    except TableError as exc:
        raise TableParseError(str(exc)) from None


def table_to_text(t: MonodromyTable) -> str:
    lines = []
    if t.name:
        lines.append(f"name {t.name}")
    lines.append(f"points {t.points}")
    if not t.include_projective:
        lines.append("projective no")
    if t.reconstructed:
        lines.append("reconstructed yes")
    for f in t.factors:
        line = f"factor skeleton {f.i} {f.j}"
        if f.path != "below":
            line += f" {f.path}"
        line += f" eps {f.epsilon}"
        if f.conjugator:
            line += " conj " + format_braid(Braid(t.points, f.conjugator))
        lines.append(line)
    return "\n".join(lines) + "\n"


def table_to_json(t: MonodromyTable) -> dict:
    return {
        "name": t.name,
        "points": t.points,
        "projective": t.include_projective,
        "reconstructed": t.reconstructed,
        "factors": [
            {"skeleton": [f.i, f.j, f.path], "epsilon": f.epsilon,
             "conjugator": braid_to_json(Braid(t.points, f.conjugator))}
            for f in t.factors
        ],
    }


def table_from_json(data: dict) -> MonodromyTable:
    try:
        p = int(data["points"])
        factors = []
        for k, fd in enumerate(data.get("factors", []), 1):
            sk = fd["skeleton"]
            path = sk[2] if len(sk) > 2 else "below"
            eps = int(fd["epsilon"])
            if eps not in EPSILONS:
                raise TableParseError(f"factor {k}: epsilon must be 1,2,4,8")
            conj = braid_from_json(fd.get("conjugator", []), p).word
            factors.append(SingularFactor(int(sk[0]), int(sk[1]), eps, path, conj))
        return MonodromyTable(p, tuple(factors), bool(data.get("projective", True)),
                              str(data.get("name", "")), bool(data.get("reconstructed", False)))
    except TableParseError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise TableParseError(f"bad table JSON: {exc}") from None


# ---------------------------------------------------------- formula relations

def tangency_relations(gens: Sequence[Word], multiplicity: int) -> list[Word]:
    """Relators equating the m-th powers of all rotations of g_k ... g_1.

    Multiplicity m is what the m-fold full twist on the strands produces
    (a double full twist gives squares, a quadruple one fourth powers).
    """
    if multiplicity < 1:
        raise ValueError("multiplicity must be positive")
    k = len(gens)
    if k < 2:
        return []
    desc = list(reversed(gens))
    base = _prod(desc) ** multiplicity
    out = []
    for r in range(1, k):
        rot = desc[k - r:] + desc[:k - r]
        out.append(base * (_prod(rot) ** multiplicity).inverse())
    return out


def _prod(ws: Sequence[Word]) -> Word:
    out = Word()
    for w in ws:
        out = out * w
    return out


def _a(i: int) -> Word:
    return Word.gen(i)


def _desc(hi: int, lo: int) -> Word:
    """a_hi a_{hi-1} ... a_lo (identity when hi < lo)."""
    return Word.product(range(hi, lo - 1, -1))


def _eq(lhs: Word, rhs: Word) -> Word:
    return lhs * rhs.inverse()


def _family_a(n: int) -> dict[str, list[Word]]:
    p = 2 * n
    right = [_a(i) for i in range(n + 1, p + 1)]
    left = [_a(i) for i in range(1, n + 1)]
    g = {"an1": tangency_relations(right, 2), "an2-an4": [], "an5": tangency_relations(left, 2),
         "an6-an8": [], "an9": [_desc(p, 1)]}
    for k in range(n):
        w = _desc(p, n + k + 2)
        g["an2-an4"].append(_eq(_a(n - k), _a(n + k + 1).conjugate(w)))
        v = _desc(n + k, 1)
        g["an6-an8"].append(_eq(_a(n + 1 + k), _a(n - k).conjugate(v)))
    return g


def _family_b(n: int) -> dict[str, list[Word]]:
    p = 2 * n
    right = [_a(i) for i in range(n + 1, p + 1)]
    u = _desc(p, n + 1)
    g = {"bn1": tangency_relations(right, 4), "bn2-bn4": [], "bn5-bn7": [], "bn8": [_desc(p, 1)]}
    for k in range(n):
        w = _desc(p, n + k + 2)
        g["bn2-bn4"].append(_eq(_a(n - k), _a(n + k + 1).conjugate(w).conjugate(u)))
        t = _desc(n + k, n + 1)
        g["bn5-bn7"].append(_eq(_a(n - k), _a(n + 1 + k).conjugate(t.inverse())))
    return g


def _parse_digits(text: str) -> Word:
    # fiber-generator shorthand used for the small hand-computed lists: "3^-1 4 3"
    syl = []
    for tok in text.split():
        base, _, exp = tok.partition("^")
        syl.append((int(base), int(exp) if exp else 1))
    return Word(syl)


def _rel(lhs: str, rhs: str = "") -> Word:
    return _eq(_parse_digits(lhs), _parse_digits(rhs))


def _family_c(n: int) -> dict[str, list[Word]]:
    p = 2 * n
    if n == 1:
        return {"branch": [_rel("1", "2")], "projective": [_desc(2, 1)]}
    if n == 2:
        return {
            "branch": [_rel("2", "3"), _rel("1", "3^-1 4 3"),
                       _rel("3", "2 1 2 1 2 1^-1 2^-1 1^-1 2^-1"),
                       _rel("3^-1 4 3", "2 1 2 1 2^-1 1^-1 2^-1")],
            "tangency": [_rel("1 2 1 2 1 2 1 2", "2 1 2 1 2 1 2 1")],
            "projective": [_desc(4, 1)],
        }
    if n == 3:
        return {
            "node": [commutator(_a(3), _a(4)), commutator(_a(2), _a(4)),
                     commutator(_parse_digits("4^-1 3 4"), _a(5)),
                     commutator(_a(2), _parse_digits("4^-1 5 4"))],
            "branch": [_rel("2", "3"), _rel("4", "5"),
                       _rel("6", "5 4 3 4^-1 1 4 3^-1 4^-1 5^-1"),
                       _rel("3", "2 1 2 1 2 1^-1 2^-1 1^-1 2^-1"),
                       _rel("4", "6 5 6 5 6^-1 5^-1 6^-1"),
                       _rel("3 2 1 2 1 2^-1 1^-1 2^-1 3^-1", "6 5 6 5^-1 6^-1")],
            "tangency": [_rel("1 2 1 2 1 2 1 2", "2 1 2 1 2 1 2 1"),
                         _rel("5 6 5 6 5 6 5 6", "6 5 6 5 6 5 6 5")],
            "projective": [_desc(6, 1)],
        }
    # n >= 4: odd-even branch identifications, then the collected relations
    evens = [_a(2 * i) for i in range(1, n)]
    top = _a(p)
    pw = _prod(list(reversed(evens)))
    g = {
        "branch": [_eq(_a(2 * i), _a(2 * i + 1)) for i in range(1, n)],
        "pa1": [_eq(top, _a(1).conjugate(pw))],
        "node": [commutator(evens[i], evens[j])
                 for i in range(len(evens)) for j in range(i + 1, len(evens))],
        "tangency": [_eq((_a(1) * _a(2)) ** 2, (_a(2) * _a(1)) ** 2)]
        + [_eq((evens[i] * top) ** 2, (top * evens[i]) ** 2) for i in range(len(evens) - 1, 0, -1)],
    }
    if n == 4:
        g["projective"] = [_parse_digits("8 6^2 4^2 2^2 1")]
    else:
        g["projective"] = [_desc(p, 1)]
    return g


def formula_relation_groups(family: str, n: int) -> dict[str, list[Word]]:
    """Labelled relator lists for the family on generators a_1..a_{2n}."""
    fam = family.upper()
    if n < 1:
        raise ValueError("n must be at least 1")
    if fam == "A":
        return _family_a(n)
    if fam == "B":
        return _family_b(n)
    if fam == "C":
        return _family_c(n)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def formula_relations(family: str, n: int, drop: Sequence[str] = ()) -> Presentation:
    groups = formula_relation_groups(family, n)
    unknown = set(drop) - set(groups)
    if unknown:
        raise ValueError(f"unknown relation groups {sorted(unknown)}; have {list(groups)}")
    rels = [r for label, rs in groups.items() if label not in drop for r in rs]
    gens = tuple(f"a{i}" for i in range(1, 2 * n + 1))
    meta = {"source": "formula", "family": family.upper(), "n": n}
    if family.upper() == "C" and n >= 5:
        meta["reconstructed"] = True
    proj = _desc(2 * n, 1)
    return Presentation(gens, tuple(rels), meta, proj if proj in rels else None)


def target_presentation(family: str, n: int) -> Presentation:
    """The closed-form presentation on the n quadric meridians a_1..a_n."""
    fam = family.upper()
    if fam not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    rels = [Word.product(range(1, n + 1)) ** 2]
    if fam == "C":
        for i in range(2, n + 1):
            for j in range(i + 1, n + 1):
                rels.append(commutator(_a(i), _a(j)))
        for k in range(2, n + 1):
            rels.append(_eq((_a(1) * _a(k)) ** 2, (_a(k) * _a(1)) ** 2))
    return Presentation(tuple(f"a{i}" for i in range(1, n + 1)), tuple(rels),
                        {"source": "target", "family": fam, "n": n})
