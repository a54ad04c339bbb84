"""Computable group invariants: abelianization and homomorphism counts."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .presentation import Presentation, quotient_kill, simplify
from .words import Word, commutator

DEFAULT_CAP = 10 ** 8
DEFAULT_BATTERY = ("s3", "s4", "a4", "d4", "z6")


class CapExceeded(RuntimeError):
    pass


# --------------------------------------------------------------- Smith form

def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Diagonal of the Smith normal form (d1 | d2 | ...) and the rank."""
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < rows and t < cols:
        # pivot: smallest nonzero absolute value in the remaining block
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                # the pivot must also divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remainder into the pivot position
            cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
            _, i, j = min(cand)
            if j == t:
                a[t], a[i] = a[i], a[t]
            else:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag, len(diag)


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = ["Z" if self.free_rank == 1 else f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def exponent_matrix(p: Presentation) -> list[list[int]]:
    return [[r.exponent_sum(g) for g in range(1, p.rank + 1)] for r in p.relators]


def abelianization(p: Presentation) -> AbelianInvariants:
    diag, rank = smith_normal_form(exponent_matrix(p))
    return AbelianInvariants(p.rank - rank, tuple(d for d in diag if d > 1))


# ------------------------------------------------------------ finite groups

@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group given by its Cayley table on elements 0..order-1."""

    name: str
    table: np.ndarray
    identity: int = 0

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise ValueError(f"{self.name}: table must be square with entries in 0..{n - 1}")
        e = self.identity
        if not (np.array_equal(t[e], np.arange(n)) and np.array_equal(t[:, e], np.arange(n))):
            raise ValueError(f"{self.name}: element {e} is not an identity")
        for row in t:
            if sorted(row.tolist()) != list(range(n)):
                raise ValueError(f"{self.name}: table is not a Latin square")
        inv = np.argmax(t == e, axis=1)
        if not np.all(t[np.arange(n), inv] == e):
            raise ValueError(f"{self.name}: missing inverses")
        if not self._associative(t):
            raise ValueError(f"{self.name}: table is not associative")
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "inverse", inv)

    @staticmethod
    def _associative(t: np.ndarray) -> bool:
        # (ab)c == a(bc): every triple for small tables, a fixed random sample otherwise
        n = len(t)
        if n <= 64:
            return bool(np.array_equal(t[t], t[np.arange(n)[:, None, None], t[None, :, :]]))
        a, b, c = np.random.default_rng(0).integers(0, n, size=(3, 20000))
        return bool(np.array_equal(t[t[a, b], c], t[a, t[b, c]]))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def element_orders(self) -> list[int]:
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != self.identity:
                x = self.mul(x, g)
                k += 1
            out.append(k)
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "identity": self.identity, "table": self.table.tolist()}


def group_from_permutations(name: str, gens: Sequence[Sequence[int]]) -> FiniteGroup:
    """Close a set of permutations under composition and tabulate."""
    deg = len(gens[0])
    e = tuple(range(deg))
    elems = [e]
    seen = {e: 0}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[i] for i in g)
                if y not in seen:
                    seen[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = seen[tuple(x[k] for k in y)]
    return FiniteGroup(name, table, 0)


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup(f"z{n}", (idx[:, None] + idx[None, :]) % n)


@lru_cache(maxsize=None)
def builtin_group(name: str) -> FiniteGroup:
    key = name.lower()
    if key == "s3":
        return group_from_permutations("s3", [(1, 0, 2), (1, 2, 0)])
    if key == "s4":
        return group_from_permutations("s4", [(1, 0, 2, 3), (1, 2, 3, 0)])
    if key == "a4":
        return group_from_permutations("a4", [(1, 2, 0, 3), (0, 2, 3, 1)])
    if key == "d4":
        return group_from_permutations("d4", [(1, 2, 3, 0), (3, 2, 1, 0)])
    if key in ("trivial", "z1"):
        return FiniteGroup("trivial", np.zeros((1, 1), dtype=np.int64))
    if key.startswith("z") and key[1:].isdigit():
        return cyclic_group(int(key[1:]))
    raise ValueError(f"unknown group {name!r}; built-ins are s3, s4, a4, d4, zN")


def load_group(spec: str) -> FiniteGroup:
    """A built-in name, or a path to ``{"name": ..., "table": [[...]], "identity": 0}``."""
    if spec.endswith(".json"):
        with open(spec) as fh:
            data = json.load(fh)
        return FiniteGroup(data.get("name", spec), np.asarray(data["table"]),
                           int(data.get("identity", 0)))
    return builtin_group(spec)


def parse_battery(text: str | None) -> list[FiniteGroup]:
    names = [s.strip() for s in (text or "").split(",") if s.strip()]
    return [load_group(n) for n in (names or DEFAULT_BATTERY)]


# ------------------------------------------------------------ hom counting

@lru_cache(maxsize=None)
def _pair_orbits(group: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    """Representatives of G x G under simultaneous conjugation, with orbit sizes."""
    n = group.order
    t, inv = group.table, group.inverse
    conj = t[t[np.arange(n)[:, None], np.arange(n)[None, :]], inv[:, None]]  # conj[c, x] = c x c^-1
    seen = np.zeros((n, n), dtype=bool)
    reps, sizes = [], []
    for a in range(n):
        for b in range(n):
            if seen[a, b]:
                continue
            orbit = set(zip(conj[:, a].tolist(), conj[:, b].tolist()))
            for x, y in orbit:
                seen[x, y] = True
            reps.append((a, b))
            sizes.append(len(orbit))
    return np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)


@lru_cache(maxsize=None)
def _class_reps(group: FiniteGroup) -> tuple[np.ndarray, np.ndarray]:
    n = group.order
    t, inv = group.table, group.inverse
    seen = np.zeros(n, dtype=bool)
    reps, sizes = [], []
    for a in range(n):
        if seen[a]:
            continue
        orbit = {int(t[t[c, a], inv[c]]) for c in range(n)}
        seen[list(orbit)] = True
        reps.append(a)
        sizes.append(len(orbit))
    return np.array(reps, dtype=np.int64)[:, None], np.array(sizes, dtype=np.int64)


def enumeration_size(p: Presentation, group: FiniteGroup) -> int:
    """Number of candidate assignments :func:`count_homs` will examine."""
    k = p.rank
    if k == 0:
        return 1
    if k == 1:
        return len(_class_reps(group)[1])
    return len(_pair_orbits(group)[1]) * group.order ** (k - 2)


_CHUNK = 1 << 18


def count_homs(p: Presentation, group: FiniteGroup, cap: int = DEFAULT_CAP) -> int:
    """Number of homomorphisms from the presented group to ``group``.

    Assignments are built generator by generator; each relator is checked as
    soon as its last generator is assigned.  The first one or two generators
    run over representatives of simultaneous conjugation, weighted by orbit size.
    """
    k = p.rank
    if k == 0:
        return 1
    size = enumeration_size(p, group)
    if size > cap:
        raise CapExceeded(f"{size} assignments into {group.name} exceed the cap {cap}")
    n = group.order
    t, inv = group.table, group.inverse
    by_last: dict[int, list[Word]] = {}
    for r in p.relators:
        by_last.setdefault(r.max_generator(), []).append(r)
    if k == 1:
        rows, weights = _class_reps(group)
    else:
        rows, weights = _pair_orbits(group)
    start = min(k, 2)

    def check(rows: np.ndarray, upto: int) -> np.ndarray:
        ok = np.ones(len(rows), dtype=bool)
        for g in range(1, upto + 1):
            for r in by_last.get(g, ()):
                acc = np.full(len(rows), group.identity, dtype=np.int64)
                for a in r.letters:
                    col = rows[:, abs(a) - 1]
                    acc = t[acc, col if a > 0 else inv[col]]
                ok &= acc == group.identity
        return ok

    ok = check(rows, start)
    rows, weights = rows[ok], weights[ok]

    def extend(rows: np.ndarray, weights: np.ndarray, g: int) -> int:
        if g > k:
            return int(weights.sum())
        total = 0
        step = max(1, _CHUNK // n)
        for lo in range(0, len(rows), step):
            block = rows[lo:lo + step]
            w = weights[lo:lo + step]
            new = np.concatenate([np.repeat(block, n, axis=0),
                                  np.tile(np.arange(n), len(block))[:, None]], axis=1)
            nw = np.repeat(w, n)
            keep = np.ones(len(new), dtype=bool)
            for r in by_last.get(g, ()):
                acc = np.full(len(new), group.identity, dtype=np.int64)
                for a in r.letters:
                    col = new[:, abs(a) - 1]
                    acc = t[acc, col if a > 0 else inv[col]]
                keep &= acc == group.identity
            total += extend(new[keep], nw[keep], g + 1)
        return total

    return extend(rows, weights, start + 1)


# -------------------------------------------------------------- fingerprint

@dataclass(frozen=True)
class Fingerprint:
    abelian: AbelianInvariants
    counts: tuple[tuple[str, int], ...] = ()

    def consistent_with(self, other: "Fingerprint") -> bool:
        """Equal invariants: consistent with isomorphism (never a proof of it)."""
        return self == other

    def diff(self, other: "Fingerprint") -> list[str]:
        out = []
        if self.abelian != other.abelian:
            out.append(f"abelianization: {self.abelian} vs {other.abelian}")
        mine, theirs = dict(self.counts), dict(other.counts)
        for name in sorted(set(mine) | set(theirs)):
            if mine.get(name) != theirs.get(name):
                out.append(f"homs to {name}: {mine.get(name)} vs {theirs.get(name)}")
        return out

    def to_json(self) -> dict:
        return {"abelianization": self.abelian.to_json(), "hom_counts": dict(self.counts)}

    def __str__(self) -> str:
        counts = ", ".join(f"{k}:{v}" for k, v in self.counts)
        return f"{self.abelian}; homs {counts}"


_FP_CACHE: dict = {}


def fingerprint(p: Presentation, battery: Iterable[FiniteGroup] | None = None,
                cap: int = DEFAULT_CAP, presimplify: bool = True) -> Fingerprint:
    groups = list(battery) if battery is not None else parse_battery(None)
    q = simplify(p) if presimplify else p
    key = (q.rank, q.relators, tuple(id(g) for g in groups), cap)
    if key in _FP_CACHE:
        return _FP_CACHE[key]
    counts = tuple((g.name, count_homs(q, g, cap)) for g in groups)
    fp = Fingerprint(abelianization(q), counts)
    _FP_CACHE[key] = fp
    return fp


# ---------------------------------------------------------------- bigness

ZZ2 = Presentation(("a", "b"), (Word.product([1, 2]) ** 2,), {"name": "Z * Z2"})


class CertificateError(ValueError):
    pass


@dataclass
class BignessCertificate:
    ok: bool
    pair: tuple[str, str]
    killed: tuple[str, ...]
    quotient: Presentation
    fingerprint: Fingerprint
    reference: Fingerprint
    reason: str = ""

    def to_json(self) -> dict:
        from .presentation import to_json
        return {
            "ok": self.ok,
            "pair": list(self.pair),
            "killed": list(self.killed),
            "quotient": to_json(self.quotient),
            "fingerprint": self.fingerprint.to_json(),
            "reference": self.reference.to_json(),
            "reason": self.reason,
        }


def bigness_certificate(p: Presentation, pair: tuple[str, str] | None = None,
                        battery: Iterable[FiniteGroup] | None = None,
                        cap: int = DEFAULT_CAP) -> BignessCertificate:
    """Kill every generator outside ``pair`` and compare with Z * Z2.

    The quotient only adds relators, so if it is Z * Z2 (which contains a free
    subgroup of rank 2) the original group is big.  Matching fingerprints make
    the identification plausible, they do not prove it.
    """
    if p.rank < 2:
        raise CertificateError("a bigness certificate needs at least two generators")
    pair = tuple(pair) if pair else p.generators[:2]
    for g in pair:
        p.index(g)
    if len(set(pair)) != 2:
        raise CertificateError("the meridian pair must name two different generators")
    groups = list(battery) if battery is not None else parse_battery(None)
    killed = tuple(g for g in p.generators if g not in pair)
    quotient = quotient_kill(p, killed)
    fp = fingerprint(quotient, groups, cap, presimplify=False)
    ref = fingerprint(ZZ2, groups, cap, presimplify=False)
    ok = fp.consistent_with(ref)
    reason = "" if ok else "; ".join(fp.diff(ref))
    return BignessCertificate(ok, pair, killed, quotient, fp, ref, reason)


# ------------------------------------------------------- candidate groups

def free_times_z2(k: int) -> Presentation:
    """F_k * Z2 = < b1..bk, c | c^2 >."""
    names = tuple(f"b{i}" for i in range(1, k + 1)) + ("c",)
    return Presentation(names, (Word.gen(k + 1, 2),), {"name": f"F{k} * Z2"})


def free_abelian_times_z2(k: int) -> Presentation:
    """Z^k * Z2 = < b1..bk, c | [bi, bj], c^2 >."""
    names = tuple(f"b{i}" for i in range(1, k + 1)) + ("c",)
    rels = [commutator(Word.gen(i), Word.gen(j)) for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    return Presentation(names, tuple(rels) + (Word.gen(k + 1, 2),), {"name": f"Z^{k} * Z2"})


def compare_candidates(p: Presentation, candidates: Mapping[str, Presentation],
                       battery: Iterable[FiniteGroup] | None = None,
                       cap: int = DEFAULT_CAP) -> dict[str, tuple[bool, list[str]]]:
    """For each candidate: (consistent?, list of differing invariants)."""
    groups = list(battery) if battery is not None else parse_battery(None)
    fp = fingerprint(p, groups, cap)
    out = {}
    for name, q in candidates.items():
        other = fingerprint(q, groups, cap)
        out[name] = (fp.consistent_with(other), fp.diff(other))
    return out
