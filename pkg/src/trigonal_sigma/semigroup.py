"""Weierstrass semigroups <3, 2r+s, r+2s> and their combinatorics.

Everything here is exact integer arithmetic: gap sequences, Young
diagrams, Schubert indices, Frobenius characteristics of truncated
diagrams and the binomial relations of the monomial ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from functools import reduce


class SemigroupError(ValueError):
    pass


def _generated_upto(generators, bound):
    """Boolean membership table of the semigroup spanned by `generators` on [0, bound]."""
    member = [False] * (bound + 1)
    member[0] = True
    for n in range(1, bound + 1):
        member[n] = any(n >= a and member[n - a] for a in generators)
    return member


def in_semigroup(n, generators):
    if n < 0:
        return False
    return _generated_upto(generators, n)[n]


@dataclass(frozen=True)
class NumericalSemigroup:
    r: int
    s: int
    generators: tuple
    gaps: tuple

    @property
    def genus(self) -> int:
        return len(self.gaps)

    @property
    def r_hat(self) -> int:
        return 2 * self.r + self.s

    @property
    def s_hat(self) -> int:
        return self.r + 2 * self.s

    def contains(self, n: int) -> bool:
        return n >= 0 and n not in self.gaps

    def elements(self, bound: int) -> list:
        return [n for n in range(bound + 1) if self.contains(n)]

    @property
    def conductor(self) -> int:
        return self.gaps[-1] + 1 if self.gaps else 0


def build_semigroup(r: int, s: int) -> NumericalSemigroup:
    """Semigroup generated by {3, 2r+s, r+2s} for s > r >= 0.

    For r = 0 the generating set collapses to {3, s}.  Triples that are not
    minimal generating sets (r = s mod 3 with r > 0) are rejected.
    """
    if not (isinstance(r, int) and isinstance(s, int)):
        raise SemigroupError("r and s must be integers")
    if r < 0 or s <= r:
        raise SemigroupError(f"need s > r >= 0, got r={r}, s={s}")
    if r == 0:
        if s % 3 == 0:
            raise SemigroupError(f"r=0 requires gcd(3, s) = 1, got s={s}")
        gens = (3, s) if s > 3 else (s, 3)
        if s == 1:
            raise SemigroupError("s=1, r=0 gives genus 0")
    else:
        if (r - s) % 3 == 0:
            raise SemigroupError(
                f"(r, s)=({r}, {s}): 3 divides 2r+s, generators are not minimal")
        gens = (3, 2 * r + s, r + 2 * s)
    g = r + s - 1
    member = _generated_upto(gens, 2 * g + 2)
    gaps = tuple(n for n in range(1, 2 * g + 1) if not member[n])
    if len(gaps) != g:
        raise SemigroupError(f"gap count {len(gaps)} != r+s-1 = {g}")
    return NumericalSemigroup(r=r, s=s, generators=tuple(sorted(gens)), gaps=gaps)


@dataclass(frozen=True)
class YoungDiagram:
    rows: tuple
    schubert: tuple

    @property
    def size(self) -> int:
        return sum(self.rows)

    def conjugate(self) -> tuple:
        if not self.rows:
            return ()
        return tuple(sum(1 for row in self.rows if row > j) for j in range(self.rows[0]))

    def is_symmetric(self) -> bool:
        return tuple(x for x in self.rows if x) == self.conjugate()


def young_diagram(H: NumericalSemigroup) -> YoungDiagram:
    g = H.genus
    alpha = tuple(ell - i - 1 for i, ell in enumerate(H.gaps))
    rows = tuple(alpha[g - i] + 1 for i in range(1, g + 1))
    return YoungDiagram(rows=rows, schubert=alpha)


def gaps_from_diagram(rows) -> tuple:
    """Invert `young_diagram`: rows -> Schubert index -> gap sequence."""
    g = len(rows)
    alpha = [rows[g - 1 - i] - 1 for i in range(g)]
    return tuple(a + i + 1 for i, a in enumerate(alpha))


def u_weights(rows) -> tuple:
    """Weight of the coordinate u_i, i.e. Lambda_i + g - i (the gaps in decreasing order)."""
    g = len(rows)
    return tuple(rows[i - 1] + g - i for i in range(1, g + 1))


def is_telescopic(seq) -> bool:
    """Telescopic test for the sequence in the given order."""
    seq = list(seq)
    if not seq or any(w <= 0 for w in seq) or reduce(gcd, seq) != 1:
        return False
    d_prev = seq[0]
    for i in range(1, len(seq)):
        d_i = gcd(d_prev, seq[i])
        target = seq[i] // d_i
        sub = [w // d_prev for w in seq[:i]]
        if not in_semigroup(target, sub):
            return False
        d_prev = d_i
    return True


def is_telescopic_any_order(seq) -> bool:
    return any(is_telescopic(p) for p in itertools.permutations(seq))


def is_symmetric(H: NumericalSemigroup) -> bool:
    return (2 * H.genus - 1) in H.gaps


@dataclass(frozen=True)
class FrobeniusData:
    k: int
    arms: tuple   # a_i: boxes below the i-th diagonal box
    legs: tuple   # b_i: boxes to the right of the i-th diagonal box
    sharp: tuple  # u-indices L^{[k]}(a_i, b_i), 1-based

    @property
    def rank(self) -> int:
        return len(self.arms)

    @property
    def N(self) -> int:
        return sum(a + b + 1 for a, b in zip(self.arms, self.legs))

    def sharp_i(self, i: int) -> tuple:
        """Index set with the first entry replaced by i (1 <= i <= k+1)."""
        if not 1 <= i <= self.k + 1:
            raise ValueError(f"i must lie in 1..{self.k + 1}")
        if not self.sharp:
            return ()
        return (i,) + self.sharp[1:]


def frobenius_data(diagram: YoungDiagram, k: int) -> FrobeniusData:
    rows = diagram.rows
    g = len(rows)
    if not 0 <= k <= g:
        raise ValueError(f"k must lie in 0..{g}, got {k}")
    trunc = [x for x in rows[k:] if x > 0]
    conj = [sum(1 for x in trunc if x > j) for j in range(trunc[0])] if trunc else []
    rank = sum(1 for i, x in enumerate(trunc) if x > i)
    legs = tuple(trunc[i] - i - 1 for i in range(rank))
    arms = tuple(conj[i] - i - 1 for i in range(rank))
    hooks = {rows[ell - 1] + g - ell: ell for ell in range(k + 1, g + 1)}
    sharp = []
    for a, b in zip(arms, legs):
        h = a + b + 1
        if h not in hooks:
            raise ValueError(f"no row index for hook length {h} in truncation k={k}")
        sharp.append(hooks[h])
    return FrobeniusData(k=k, arms=arms, legs=legs, sharp=tuple(sharp))


@dataclass(frozen=True)
class MonomialRelation:
    weight: int
    # each term: (coefficient, (exp Z_3, exp Z_rhat, exp Z_shat))
    terms: tuple

    def weights_of_terms(self, r_hat, s_hat):
        return [3 * e[0] + r_hat * e[1] + s_hat * e[2] for _, e in self.terms]

    def evaluate(self, z3, zr, zs):
        return sum(c * z3 ** e[0] * zr ** e[1] * zs ** e[2] for c, e in self.terms)


def monomial_relations(r: int, s: int) -> tuple:
    """Generators of the kernel of Z_a -> t^a for the triple (3, r_hat, s_hat)."""
    r_hat, s_hat = 2 * r + s, r + 2 * s
    return (
        MonomialRelation(2 * r_hat, ((1, (0, 2, 0)), (-1, (r, 0, 1)))),
        MonomialRelation(r_hat + s_hat, ((1, (0, 1, 1)), (-1, (r + s, 0, 0)))),
        MonomialRelation(2 * s_hat, ((1, (0, 0, 2)), (-1, (s, 1, 0)))),
    )
