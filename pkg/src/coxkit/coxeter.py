"""Exact arithmetic in the Coxeter system of type (4,4,4).

Generators are the letters r < s < t (that order fixes ShortLex).  Every
element is carried as its ShortLex-least reduced word, so words compare
and hash as plain strings and the empty string is the identity.

Normalization is Tits' solution to the word problem: the braid-move
closure of a reduced word is the complete set of its reduced expressions,
and a product ws is shorter than w exactly when some reduced expression
of w ends with s.  Closures are memoized per element, which makes the
whole kernel a growing set of lookup tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from coxkit import wordops

GENS = "rst"
DEFAULT_MAX_RADIUS = 10


class ResourceLimit(RuntimeError):
    """A ball/sweep radius exceeded the configured maximum."""


def _check_letters(word: str) -> None:
    for ch in word:
        if ch not in GENS:
            raise ValueError(f"unknown generator {ch!r}")


@dataclass(frozen=True)
class Residue:
    """Spherical residue of the Coxeter building, keyed by type and gate."""

    types: frozenset
    gate: str

    @property
    def rank(self) -> int:
        return len(self.types)

    def __repr__(self) -> str:
        return f"Residue({''.join(sorted(self.types))!r} at {self.gate!r})"


@dataclass(frozen=True)
class Gallery:
    """Minimal gallery from the identity, recorded by its (reduced) type word."""

    type_word: str

    def __len__(self) -> int:
        return len(self.type_word)

    def __repr__(self) -> str:
        return f"Gallery({self.type_word!r})"


class Coxeter:
    def __init__(self, max_radius: int = DEFAULT_MAX_RADIUS):
        self.max_radius = max_radius
        self._canon: dict[str, str] = {"": ""}
        self._closure: dict[str, frozenset] = {"": frozenset([""])}
        self._mult_gen: dict[tuple[str, str], str] = {}
        self._balls: list[tuple[str, ...]] = [("",)]

    # -- canonical forms ------------------------------------------------

    def canon_reduced(self, word: str) -> str:
        """Canonical form of a word known to be reduced."""
        c = self._canon.get(word)
        if c is None:
            closure = wordops.braid_closure(word)
            c = min(closure)
            for v in closure:
                self._canon[v] = c
            self._closure[c] = closure
        return c

    def reduced_words(self, w: str) -> frozenset:
        """All reduced expressions of w (given in canonical form).

        Computed on demand even when the canonical form arrived from the
        advisory cache, which only seeds the word-to-canonical table."""
        got = self._closure.get(w)
        if got is None:
            got = wordops.braid_closure(w)
            least = min(got)
            if least != w:
                raise ValueError(f"{w!r} is not canonical")
            for v in got:
                self._canon.setdefault(v, least)
            self._closure[least] = got
        return got

    def mult_gen(self, w: str, g: str) -> str:
        """Canonical form of w*g for a single generator g."""
        key = (w, g)
        out = self._mult_gen.get(key)
        if out is None:
            for e in self.reduced_words(w):
                if e.endswith(g):
                    out = self.canon_reduced(e[:-1])
                    break
            else:
                out = self.canon_reduced(w + g)
            self._mult_gen[key] = out
        return out

    def normalize(self, letters) -> str:
        """Canonical form of an arbitrary product of generators."""
        word = "".join(letters)
        _check_letters(word)
        c = ""
        for ch in word:
            c = self.mult_gen(c, ch)
        return c

    def mult(self, *words: str) -> str:
        out = ""
        for w in words:
            _check_letters(w)
            for ch in w:
                out = self.mult_gen(out, ch)
        return out

    def inv(self, w: str) -> str:
        if not w:
            return w
        return self.canon_reduced(self.normalize(w)[::-1])

    @staticmethod
    def length(w: str) -> int:
        return len(w)

    def is_reduced(self, word: str) -> bool:
        _check_letters(word)
        return len(self.normalize(word)) == len(word)

    # -- descents -------------------------------------------------------

    def has_right_descent(self, w: str, g: str) -> bool:
        return len(self.mult_gen(w, g)) < len(w)

    def has_left_descent(self, w: str, g: str) -> bool:
        return any(e.startswith(g) for e in self.reduced_words(w))

    def last_letters(self, w: str) -> set:
        return {e[-1] for e in self.reduced_words(w) if e}

    def first_letters(self, w: str) -> set:
        return {e[0] for e in self.reduced_words(w) if e}

    # -- balls ------------------------------------------------------------

    def ball(self, radius: int) -> tuple[str, ...]:
        """All elements of length <= radius, sorted by (length, ShortLex)."""
        if radius > self.max_radius:
            raise ResourceLimit(
                f"radius {radius} exceeds configured maximum {self.max_radius}")
        while len(self._balls) <= radius:
            frontier_len = len(self._balls) - 1
            prev = self._balls[-1]
            sphere = {w for w in prev if len(w) == frontier_len}
            nxt = set()
            for w in sphere:
                for g in GENS:
                    v = self.mult_gen(w, g)
                    if len(v) == frontier_len + 1:
                        nxt.add(v)
            self._balls.append(prev + tuple(sorted(nxt)))
        return self._balls[radius]

    def sphere(self, radius: int) -> tuple[str, ...]:
        ball = self.ball(radius)
        return tuple(w for w in ball if len(w) == radius)

    def ball_oracle_size(self, radius: int) -> int:
        """Independent ball count: enumerate every word, dedupe by normalize."""
        seen = {""}
        for k in range(1, radius + 1):
            for letters in itertools.product(GENS, repeat=k):
                seen.add(self.normalize(letters))
        return sum(1 for w in seen if len(w) <= radius)

    # -- parabolic subgroups and residues ---------------------------------

    @lru_cache(maxsize=None)
    def _parabolic(self, types: frozenset) -> tuple[str, ...]:
        if len(types) >= 3:
            raise ValueError("full parabolic is not spherical in type (4,4,4)")
        elems = {""}
        frontier = [""]
        while frontier:
            w = frontier.pop()
            for g in sorted(types):
                v = self.mult_gen(w, g)
                if v not in elems:
                    elems.add(v)
                    frontier.append(v)
        return tuple(sorted(elems, key=lambda x: (len(x), x)))

    def parabolic(self, types) -> tuple[str, ...]:
        return self._parabolic(frozenset(types))

    def longest(self, types) -> str:
        """r_J, the longest element of the spherical parabolic <J>."""
        elems = self.parabolic(types)
        top = max(len(w) for w in elems)
        (w0,) = [w for w in elems if len(w) == top]
        return w0

    def residue(self, types, x: str) -> Residue:
        types = frozenset(types)
        members = [self.mult(x, u) for u in self.parabolic(types)]
        gate = min(members, key=len)
        assert sum(1 for m in members if len(m) == len(gate)) == 1
        return Residue(types, gate)

    def chambers(self, res: Residue) -> tuple[str, ...]:
        return tuple(self.mult(res.gate, u) for u in self.parabolic(res.types))

    def proj(self, res: Residue, x: str) -> str:
        """Gate of res seen from x: the unique chamber minimizing distance."""
        best = None
        best_len = None
        ties = 0
        xi = self.inv(x)
        for z in self.chambers(res):
            d = len(self.mult(xi, z))
            if best_len is None or d < best_len:
                best, best_len, ties = z, d, 1
            elif d == best_len:
                ties += 1
        assert ties == 1, "projection minimizer must be unique"
        return best

    def gate(self, res: Residue) -> str:
        return res.gate

    # -- prefix order -----------------------------------------------------

    def prefix_leq(self, w1: str, w2: str) -> bool:
        a = self.normalize(w1)
        b = self.normalize(w2)
        return len(a) + len(self.mult(self.inv(a), b)) == len(b)

    def prefix_set(self, w: str) -> frozenset:
        """C(w): all prefixes of all reduced expressions of w."""
        w = self.normalize(w)
        out = set()
        for e in self.reduced_words(w):
            for i in range(len(e) + 1):
                out.add(self.canon_reduced(e[:i]))
        return frozenset(out)

    # -- minimal galleries --------------------------------------------------

    def gallery(self, type_word: str) -> Gallery:
        if not self.is_reduced(type_word):
            raise ValueError(f"gallery type {type_word!r} is not reduced")
        return Gallery(type_word)

    def min_galleries(self, w: str) -> tuple[Gallery, ...]:
        w = self.normalize(w)
        return tuple(Gallery(e) for e in sorted(self.reduced_words(w)))

    def min_galleries_s(self, w: str, s: str) -> tuple[Gallery, ...]:
        """Min_s(w): galleries of type starting with s if s is a left descent."""
        gals = self.min_galleries(w)
        if self.has_left_descent(w, s):
            return tuple(g for g in gals if g.type_word.startswith(s))
        return gals

    def gallery_chambers(self, g: Gallery) -> tuple[str, ...]:
        out = [""]
        for ch in g.type_word:
            out.append(self.mult_gen(out[-1], ch))
        return tuple(out)

    def gallery_shift(self, s: str, g: Gallery) -> Gallery:
        """The gallery sG; g must lie in Min_s of its endpoint."""
        w = self.normalize(g.type_word)
        if self.has_left_descent(w, s):
            if not g.type_word.startswith(s):
                raise ValueError("gallery not in Min_s: type must start with s")
            return Gallery(g.type_word[1:])
        return Gallery(s + g.type_word)


_STANDARD: dict[int, Coxeter] = {}


def standard_coxeter(max_radius: int = DEFAULT_MAX_RADIUS) -> Coxeter:
    """Shared kernel instance (the memo tables are expensive to rebuild)."""
    ctx = _STANDARD.get(max_radius)
    if ctx is None:
        ctx = Coxeter(max_radius)
        _STANDARD[max_radius] = ctx
    return ctx
