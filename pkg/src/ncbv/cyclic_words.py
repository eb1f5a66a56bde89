"""Cyclic words, the Lie bialgebra h[V] and the dg Lie algebra Lambda[V].

Letters are indices into the basis of the symplectic space.  A word is a
tuple of letters read cyclically; its canonical form is the minimal
rotation.  A monomial of Lambda is ``(g, b, words)``: gamma^g nu^b times a
product of nonempty canonical words, ``nu`` sitting in front.

Each factor of a product carries a chain parity.  For an odd form the
chain parity of a word is the parity of its letters and ``nu`` is even.
For an even form words live in ``S(Pi h)``, so the chain parity is shifted
by one and ``nu`` is odd (``nu^2 = 0``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .graded_linear import EVEN, ODD, BilinearForm, GradedBasis, invert_form, to_fraction

ODD_SYMPLECTIC = "odd_symplectic"
EVEN_SYMPLECTIC = "even_symplectic"

Word = Tuple[int, ...]
Mono = Tuple[int, int, Tuple[Word, ...]]


class SymplecticSpace:
    """A graded space with a nondegenerate form, seen through its letters.

    ``inverse[i, j]`` is the Gram inverse ``G^{-1}``.  ``omega[i, j]`` is the
    inverse form evaluated on the letters ``i, j``, which carries the sign
    ``(-1)^{|i|}`` from passing the dualisation past the first letter.
    """

    def __init__(self, form: BilinearForm):
        self.form = form
        self.basis: GradedBasis = form.basis
        self.par = self.basis.parities
        self.odd = form.form_parity == ODD
        self.eps = 0 if self.odd else 1
        self.inverse: Dict[Tuple[int, int], Fraction] = dict(invert_form(form).coefficients)
        self.omega: Dict[Tuple[int, int], Fraction] = {
            (i, j): (-c if self.par[i] else c) for (i, j), c in self.inverse.items()
        }
        self._canon_cache: Dict[Word, Tuple[int, Word]] = {}

    @property
    def convention(self) -> str:
        return ODD_SYMPLECTIC if self.odd else EVEN_SYMPLECTIC

    @property
    def names(self):
        return self.basis.names

    def letter(self, name: str) -> int:
        return self.basis.index(name)

    def wpar(self, word: Sequence[int]) -> int:
        par = self.par
        return sum(par[x] for x in word) % 2

    def cpar(self, word: Sequence[int]) -> int:
        """Chain parity of a word as a factor of a Lambda monomial."""
        return (self.wpar(word) + self.eps) % 2

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and self.form == other.form

    def __hash__(self):
        return hash((self.basis, tuple(sorted(self.form.matrix.items()))))

    # words ---------------------------------------------------------------
    def canonicalize(self, word: Sequence[int]) -> Tuple[int, Word]:
        """``(sign, canonical word)``; sign 0 when the word is zero in the coinvariants."""
        word = tuple(word)
        hit = self._canon_cache.get(word)
        if hit is not None:
            return hit
        n = len(word)
        if n == 0:
            return 1, ()
        par = self.par
        best = None
        signs = set()
        prefix = 0
        total = self.wpar(word)
        for r in range(n):
            rot = word[r:] + word[:r]
            # moving the first r letters to the back
            s = -1 if prefix * (total - prefix) % 2 else 1
            if best is None or rot < best:
                best, signs = rot, {s}
            elif rot == best:
                signs.add(s)
            prefix = (prefix + par[word[r]]) % 2
        result = (0, best) if len(signs) > 1 else (signs.pop(), best)
        self._canon_cache[word] = result
        return result

    def render_word(self, word: Word) -> str:
        return "w[%s]" % ",".join(self.names[x] for x in word)


def xi_line_space() -> SymplecticSpace:
    """``Pi R`` with one odd letter ``t`` and ``<t, t> = 1``."""
    b = GradedBasis(("t",), (ODD,))
    return SymplecticSpace(BilinearForm(b, {(0, 0): 1}, EVEN, "skew"))


def odd_line_space(n: int = 1) -> SymplecticSpace:
    """``Pi R^n`` with odd letters ``t1..tn`` and ``<ti, tj> = delta_ij``."""
    if n == 1:
        return xi_line_space()
    b = GradedBasis(tuple("t%d" % (i + 1) for i in range(n)), (ODD,) * n)
    return SymplecticSpace(BilinearForm(b, {(i, i): 1 for i in range(n)}, EVEN, "skew"))


def darboux_odd_space(n: int = 1) -> SymplecticSpace:
    """``W^1_{n|n}``: even ``x_i`` paired with odd ``p_i`` by an odd skew form."""
    names = tuple("x%d" % (i + 1) for i in range(n)) + tuple("p%d" % (i + 1) for i in range(n))
    b = GradedBasis(names, (EVEN,) * n + (ODD,) * n)
    m = {}
    for i in range(n):
        m[i, n + i] = 1
        m[n + i, i] = -1
    return SymplecticSpace(BilinearForm(b, m, ODD, "skew"))


def darboux_even_space(n: int = 1, m: int = 0) -> SymplecticSpace:
    """``W^0_{2n|m}``: even pairs ``p_i, q_i`` and odd ``e_j`` with ``<e_j, e_j> = 1``."""
    names = []
    for i in range(n):
        names += ["p%d" % (i + 1), "q%d" % (i + 1)]
    names += ["e%d" % (j + 1) for j in range(m)]
    b = GradedBasis(tuple(names), (EVEN,) * (2 * n) + (ODD,) * m)
    mat = {}
    for i in range(n):
        mat[2 * i, 2 * i + 1] = 1
        mat[2 * i + 1, 2 * i] = -1
    for j in range(m):
        mat[2 * n + j, 2 * n + j] = 1
    return SymplecticSpace(BilinearForm(b, mat, EVEN, "skew"))


# ---------------------------------------------------------------------------
# the Lie bialgebra on single words

def _p(par, word) -> int:
    return sum(par[x] for x in word) % 2


def bracket_words(S: SymplecticSpace, a: Word, b: Word) -> Dict[Word, Fraction]:
    """``{a, b}`` in h[V], as raw (uncanonicalized) words with coefficients."""
    par = S.par
    om = S.omega
    out: Dict[Word, Fraction] = {}
    Pa = _p(par, a)
    for i, ai in enumerate(a):
        Pa_lt = _p(par, a[:i])
        Pa_gt = _p(par, a[i + 1:])
        for j, bj in enumerate(b):
            c = om.get((ai, bj))
            if not c:
                continue
            Pb_lt = _p(par, b[:j])
            Pb_gt = _p(par, b[j + 1:])
            if S.odd:
                p = par[ai] * Pa_lt + par[bj] * (Pa + Pb_lt)
            else:
                p = par[ai] * (Pa_gt + Pb_lt)
            # the cyclic rotations z^{i-1}, z^{j-1}
            p += Pa_lt * Pa_gt + Pb_lt * Pb_gt
            w = a[i + 1:] + a[:i] + b[j + 1:] + b[:j]
            v = out.get(w, 0) + (-c if p % 2 else c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def cobracket_word(S: SymplecticSpace, a: Word) -> List[Tuple[Fraction, Word, Word]]:
    """Terms ``(c, u, v)`` of the cobracket of ``a``, read as ``c * u.v`` in Lambda."""
    par = S.par
    om = S.omega
    n = len(a)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            c = om.get((a[i], a[j]))
            if not c:
                continue
            lt = _p(par, a[:i])
            mid = _p(par, a[i + 1:j])
            gt = _p(par, a[j + 1:])
            u = a[i + 1:j]
            v = a[j + 1:] + a[:i]
            if S.odd:
                p = par[a[i]] * (lt + par[a[i]]) + par[a[j]] * (lt + par[a[i]] + mid + par[a[j]])
                p += lt * (mid + gt)
                # (1/2)[1 + (12)] u (x) v is u.v in S(h); the overall sign is
                # reversed so that flattening intertwines it with the Laplacian
                p += 1
            else:
                p = lt * (mid + gt) + par[a[j]] * mid
                # (1/2)[1 - (12)] u (x) v is u ^ v, written (-1)^|u| Pi u Pi v
                p += _p(par, u)
            out.append((-c if p % 2 else c, u, v))
    return out


# ---------------------------------------------------------------------------
# Lambda elements

def _sort_factors(S: SymplecticSpace, b: int, words: Sequence[Word]):
    """Sort the factors of ``nu^b w_1 ... w_n`` (all canonical, nonempty).

    Returns ``(sign, b, sorted words)`` with sign 0 when the product vanishes.
    """
    if b > 1 and not S.odd:
        return 0, b, ()
    ws = list(words)
    cps = [S.cpar(w) for w in ws]
    sign = 1
    # insertion sort keeps the Koszul sign simple
    for k in range(1, len(ws)):
        j = k
        while j > 0 and (len(ws[j - 1]), ws[j - 1]) > (len(ws[j]), ws[j]):
            if cps[j - 1] and cps[j]:
                sign = -sign
            ws[j - 1], ws[j] = ws[j], ws[j - 1]
            cps[j - 1], cps[j] = cps[j], cps[j - 1]
            j -= 1
    for k in range(1, len(ws)):
        if ws[k] == ws[k - 1] and cps[k]:
            return 0, b, ()
    return sign, b, tuple(ws)


class LambdaElement:
    """Sparse combination of monomials ``gamma^g nu^b w_1 ... w_n``.

    Pure scalars (no nonempty word) are the ideal ``R[gamma, nu]`` and are
    dropped when ``keep_scalars`` is false, which is the default.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: SymplecticSpace, terms: Optional[Mapping[Mono, Fraction]] = None):
        self.space = space
        self.terms: Dict[Mono, Fraction] = {k: to_fraction(v) for k, v in (terms or {}).items() if v}

    # construction ----------------------------------------------------------
    @classmethod
    def word(cls, space: SymplecticSpace, letters: Sequence, coef=1, g=0, b=0):
        ids = [space.letter(x) if isinstance(x, str) else x for x in letters]
        return cls.product(space, [ids], coef, g, b)

    @classmethod
    def product(cls, space: SymplecticSpace, words: Iterable[Sequence[int]], coef=1, g=0, b=0):
        """``coef * gamma^g nu^b w_1 ... w_n`` from raw words (empty words become ``nu``)."""
        acc = LambdaBuilder(space)
        acc.add(g, b, [tuple(w) for w in words], to_fraction(coef))
        return acc.build()

    @classmethod
    def zero(cls, space):
        return cls(space)

    def copy_with(self, terms):
        return LambdaElement(self.space, terms)

    # arithmetic ------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not other:
            return not self.terms
        return isinstance(other, LambdaElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self.copy_with(out)

    def __neg__(self):
        return self.copy_with({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = to_fraction(c)
        return self.copy_with({k: c * v for k, v in self.terms.items()} if c else {})

    __rmul__ = scale

    def __mul__(self, other):
        if not isinstance(other, LambdaElement):
            return self.scale(other)
        acc = LambdaBuilder(self.space)
        S = self.space
        for (g1, b1, w1), c1 in self.terms.items():
            p1 = mono_words_parity(S, w1)
            for (g2, b2, w2), c2 in other.terms.items():
                # nu^{b2} moves left past the words of the first factor
                s = -1 if (S.eps * b2 * p1) % 2 else 1
                acc.add_sorted(g1 + g2, b1 + b2, w1 + w2, s * c1 * c2)
        return acc.build()

    # gradings ----------------------------------------------------------------
    def parity(self) -> Optional[int]:
        ps = {mono_parity(self.space, m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def homogeneous_parts(self):
        parts: Dict[int, Dict[Mono, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(mono_parity(self.space, m), {})[m] = c
        return {p: self.copy_with(t) for p, t in sorted(parts.items())}

    def weights(self):
        return sorted({mono_weight(m) for m in self.terms})

    def min_weight(self) -> int:
        return min((mono_weight(m) for m in self.terms), default=0)

    def truncate(self, max_weight: int):
        return self.copy_with({m: c for m, c in self.terms.items() if mono_weight(m) <= max_weight})

    def drop_nu(self):
        """Projection to Lambda_gamma: set ``nu = 0``."""
        return self.copy_with({m: c for m, c in self.terms.items() if m[1] == 0})

    def render(self) -> str:
        return render_lambda(self)

    def __repr__(self):
        return "LambdaElement(%s)" % self.render()


def mono_words_parity(S: SymplecticSpace, words: Sequence[Word]) -> int:
    return sum(S.cpar(w) for w in words) % 2


def mono_parity(S: SymplecticSpace, m: Mono) -> int:
    g, b, words = m
    return (S.eps * b + mono_words_parity(S, words)) % 2


def mono_weight(m: Mono) -> int:
    g, b, words = m
    return 2 * g + b + sum(len(w) for w in words)


class LambdaBuilder:
    """Accumulates raw monomials into a canonical LambdaElement."""

    def __init__(self, space: SymplecticSpace, keep_scalars: bool = False):
        self.space = space
        self.keep_scalars = keep_scalars
        self.terms: Dict[Mono, Fraction] = {}

    def add(self, g: int, b: int, words: Sequence[Word], coef: Fraction):
        """Add ``coef * gamma^g nu^b w_1...w_n`` for raw words in the given order."""
        if not coef:
            return
        S = self.space
        sign = 1
        canon = []
        for w in words:
            if not w:
                # an empty word is nu; move it to the front
                p = mono_words_parity(S, canon)
                if S.eps * p % 2:
                    sign = -sign
                b += 1
                continue
            s, cw = S.canonicalize(w)
            if not s:
                return
            sign *= s
            canon.append(cw)
        self.add_sorted(g, b, canon, sign * coef)

    def add_sorted(self, g, b, canon_words, coef):
        if not coef:
            return
        s, b, ws = _sort_factors(self.space, b, canon_words)
        if not s:
            return
        if not ws and not self.keep_scalars:
            return
        key = (g, b, ws)
        v = self.terms.get(key, 0) + s * coef
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def build(self) -> LambdaElement:
        return LambdaElement(self.space, self.terms)


# ---------------------------------------------------------------------------
# bracket, cobracket and differential on Lambda

def bracket_h(S: SymplecticSpace, f: Mapping[Word, Fraction], g: Mapping[Word, Fraction]) -> Dict[Word, Fraction]:
    """Bracket of two elements of h[V] given as ``{word: coef}``; canonical output."""
    out: Dict[Word, Fraction] = {}
    for a, ca in f.items():
        for b, cb in g.items():
            for w, c in bracket_words(S, a, b).items():
                s, cw = S.canonicalize(w)
                if s:
                    v = out.get(cw, 0) + s * c * ca * cb
                    if v:
                        out[cw] = v
                    else:
                        out.pop(cw, None)
    return out


def helement(S: SymplecticSpace, words: Mapping[Sequence, Fraction]) -> Dict[Word, Fraction]:
    """Canonical ``{word: coef}`` from raw words (letter indices or names)."""
    out: Dict[Word, Fraction] = {}
    for w, c in words.items():
        ids = tuple(S.letter(x) if isinstance(x, str) else x for x in w)
        s, cw = S.canonicalize(ids)
        if s:
            v = out.get(cw, 0) + s * to_fraction(c)
            if v:
                out[cw] = v
            else:
                out.pop(cw, None)
    return out


def _word_bracket_chain(S: SymplecticSpace, u: Word, v: Word):
    """``{u, v}`` between two chain factors, as ``[(coef, word)]``.

    For an odd form this is the bracket of h[V].  For an even form the
    factors are ``Pi u, Pi v`` and ``{Pi u, Pi v} = (-1)^|u| Pi {u, v}``.
    """
    res = bracket_words(S, u, v)
    if not S.odd and S.wpar(u):
        return [(-c, w) for w, c in res.items()]
    return [(c, w) for w, c in res.items()]


def _factors(S: SymplecticSpace, b: int, ws: Sequence[Word]):
    """Factor list with ``nu`` written as empty words in front, and chain parities."""
    fl = [()] * b + list(ws)
    return fl, [S.cpar(w) for w in fl]


def ce_bracket(F: LambdaElement, G: LambdaElement) -> LambdaElement:
    """Leibniz extension of the word bracket to products of words."""
    S = F.space
    acc = LambdaBuilder(S)
    for (g1, b1, ws1), c1 in F.terms.items():
        fl1, cp1 = _factors(S, b1, ws1)
        P1 = sum(cp1) % 2
        for (g2, b2, ws2), c2 in G.terms.items():
            fl2, cp2 = _factors(S, b2, ws2)
            for i in range(b1, len(fl1)):
                lt1 = sum(cp1[:i]) % 2
                for j in range(b2, len(fl2)):
                    lt2 = sum(cp2[:j]) % 2
                    p = cp1[i] * lt1 + cp2[j] * (P1 + lt2) + cp1[i] * cp2[j]
                    rest = fl1[:i] + fl1[i + 1:] + fl2[:j] + fl2[j + 1:]
                    for c, w in _word_bracket_chain(S, fl1[i], fl2[j]):
                        coef = c * c1 * c2 * (-1 if p % 2 else 1)
                        acc.add(g1 + g2, 0, [w] + rest, coef)
    return acc.build()


def _cobracket_chain(S: SymplecticSpace, w: Word):
    """Cobracket of one chain factor as ``[(coef, u, v)]`` meaning ``coef * u.v``."""
    return cobracket_word(S, w)


def cobracket(S: SymplecticSpace, f: Mapping[Word, Fraction]) -> LambdaElement:
    """Cobracket of an element of h[V], projected into Lambda."""
    acc = LambdaBuilder(S)
    for w, c in f.items():
        for k, u, v in _cobracket_chain(S, w):
            acc.add(0, 0, [u, v], k * c)
    return acc.build()


def delta_laplacian(F: LambdaElement) -> LambdaElement:
    """The cobracket extended to products by the Leibniz rule."""
    S = F.space
    acc = LambdaBuilder(S)
    for (g, b, ws), c in F.terms.items():
        fl, cps = _factors(S, b, ws)
        for i in range(b, len(fl)):
            q = cps[i] * (sum(cps[:i]) % 2)
            rest = fl[:i] + fl[i + 1:]
            for k, u, v in _cobracket_chain(S, fl[i]):
                acc.add(g, 0, [u, v] + rest, (-k if q % 2 else k) * c)
    return acc.build()


def delta_ce(F: LambdaElement) -> LambdaElement:
    """Chevalley-Eilenberg differential of the word bracket (no gamma)."""
    S = F.space
    acc = LambdaBuilder(S)
    for (g, b, ws), c in F.terms.items():
        fl, cps = _factors(S, b, ws)
        for i, j in combinations(range(b, len(fl)), 2):
            p = cps[i] * (sum(cps[:i]) % 2) + cps[j] * (sum(cps[:j]) % 2) + cps[i] * cps[j]
            rest = [w for k, w in enumerate(fl) if k != i and k != j]
            for k, w in _word_bracket_chain(S, fl[i], fl[j]):
                acc.add(g, 0, [w] + rest, (-k if p % 2 else k) * c)
    return acc.build()


def raise_gamma(F: LambdaElement, k: int = 1) -> LambdaElement:
    return F.copy_with({(g + k, b, ws): c for (g, b, ws), c in F.terms.items()})


def differential(F: LambdaElement) -> LambdaElement:
    """``d = gamma * delta + Delta``."""
    return raise_gamma(delta_ce(F)) + delta_laplacian(F)


def qme_residual(x: LambdaElement, max_weight: int, with_nu: bool = False, check_order: bool = True) -> LambdaElement:
    """``d x + (1/2){x, x}`` truncated at ``max_weight``.

    With ``with_nu`` false the computation is projected to Lambda_gamma.
    """
    if check_order and x.terms and x.min_weight() < 3:
        raise ValueError("QME input must have order at least 3, got %d" % x.min_weight())
    if not with_nu:
        x = x.drop_nu()
    x = x.truncate(max_weight)
    r = differential(x) + ce_bracket(x, x).scale(Fraction(1, 2))
    r = r.truncate(max_weight)
    return r if with_nu else r.drop_nu()


# ---------------------------------------------------------------------------
# chains of Lambda elements

@dataclass
class Chain:
    """A finite combination of products ``x_1 ... x_k`` of homogeneous Lambda elements."""

    space: SymplecticSpace
    terms: List[Tuple[Fraction, Tuple[LambdaElement, ...]]] = field(default_factory=list)

    def add(self, coef, factors):
        coef = to_fraction(coef)
        if coef and all(f for f in factors):
            self.terms.append((coef, tuple(factors)))

    def __add__(self, other):
        return Chain(self.space, self.terms + other.terms)

    def scale(self, c):
        c = to_fraction(c)
        return Chain(self.space, [(c * k, fs) for k, fs in self.terms])


def ch_character(x: LambdaElement, max_weight: int) -> Chain:
    """``exp(x) = 1 + x + x.x/2 + ...`` truncated by weight."""
    out = Chain(x.space)
    out.add(1, ())
    if not x:
        return out
    w = x.min_weight()
    if w <= 0:
        raise ValueError("characteristic class needs positive weight")
    x = x.truncate(max_weight)
    n = 1
    fact = Fraction(1)
    while n * w <= max_weight:
        fact *= n
        out.add(1 / fact, (x,) * n)
        n += 1
    return out


def ce_differential_chain(c: Chain) -> Chain:
    """Chevalley-Eilenberg differential of ``C(Lambda)`` on a chain."""
    out = Chain(c.space)
    for coef, fs in c.terms:
        ps = []
        for f in fs:
            p = f.parity()
            if p is None:
                raise ValueError("chain factors must be homogeneous")
            ps.append(p)
        for i, j in combinations(range(len(fs)), 2):
            p = ps[i] * (sum(ps[:i]) % 2) + ps[j] * (sum(ps[:j]) % 2) + ps[i] * ps[j]
            rest = [f for k, f in enumerate(fs) if k != i and k != j]
            out.add(-coef if p % 2 else coef, [ce_bracket(fs[i], fs[j])] + rest)
        for i in range(len(fs)):
            q = ps[i] * (sum(ps[:i]) % 2)
            rest = [f for k, f in enumerate(fs) if k != i]
            out.add(-coef if q % 2 else coef, [differential(fs[i])] + rest)
    return out


# ---------------------------------------------------------------------------
# text syntax

_TERM = re.compile(r"\s*([+-]?)\s*")


def render_lambda(F: LambdaElement) -> str:
    if not F.terms:
        return "0"
    S = F.space
    parts = []
    for (g, b, ws), c in sorted(F.terms.items(), key=lambda kv: (mono_weight(kv[0]), kv[0])):
        factors = []
        if g:
            factors.append("g^%d" % g)
        if b:
            factors.append("n^%d" % b)
        factors += [S.render_word(w) for w in ws]
        parts.append("(%s)*%s" % (c, "*".join(factors)))
    return " + ".join(parts)


def parse_lambda(S: SymplecticSpace, text: str) -> LambdaElement:
    """Parse sums like ``(-1)*w[t,t,t] + 3/2*g^1*n^1*w[x1,p1]*w[t]``.

    Factors are a rational coefficient (optionally parenthesised),
    ``g^k`` for gamma, ``n^k`` for nu and ``w[...]`` for words.
    """
    text = text.strip()
    if text in ("", "0"):
        return LambdaElement(S)
    acc = LambdaBuilder(S)
    for term in _split_terms(text):
        sign, body = term
        coef = Fraction(sign)
        g = b = 0
        words = []
        for factor in _split_factors(body):
            if factor.startswith("w["):
                if not factor.endswith("]"):
                    raise ValueError("malformed word %r" % factor)
                inner = factor[2:-1].strip()
                names = [x.strip() for x in inner.split(",")] if inner else []
                try:
                    words.append(tuple(S.letter(x) for x in names))
                except KeyError as e:
                    raise ValueError("unknown letter in %r" % factor) from e
            elif factor[0] in "gn" and (len(factor) == 1 or factor[1] == "^"):
                k = int(factor[2:]) if len(factor) > 1 else 1
                if factor[0] == "g":
                    g += k
                else:
                    b += k
            else:
                f = factor
                if f.startswith("(") and f.endswith(")"):
                    f = f[1:-1]
                try:
                    coef *= Fraction(f.replace(" ", ""))
                except (ValueError, ZeroDivisionError) as e:
                    raise ValueError("bad coefficient %r" % factor) from e
        if not words:
            raise ValueError("term without words: %r" % body)
        acc.add(g, b, words, coef)
    return acc.build()


def _split_terms(text: str):
    """Split at top-level + and - signs."""
    terms = []
    depth = 0
    cur = ""
    sign = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("*", "/", "^")):
            terms.append((sign, cur.strip()))
            cur = ""
            sign = 1 if ch == "+" else -1
        elif depth == 0 and ch in "+-" and not cur.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
        i += 1
    if cur.strip():
        terms.append((sign, cur.strip()))
    return terms


def _split_factors(body: str):
    out = []
    depth = 0
    cur = ""
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


# ---------------------------------------------------------------------------
# the example potential

def odd_power_potential(S: SymplecticSpace, coeffs: Mapping[int, Fraction], letter: str = "t") -> LambdaElement:
    """``sum_i a_i t^{2i+1}``."""
    out = LambdaElement(S)
    t = S.letter(letter)
    for i, a in sorted(coeffs.items()):
        if i < 1:
            raise ValueError("coefficient indices start at 1")
        out = out + LambdaElement.word(S, [t] * (2 * i + 1), a)
    return out


def closure_violations(F: LambdaElement) -> List[Mono]:
    """Monomials of order below 2 (outside the span of order >= 2 terms)."""
    return [m for m in F.terms if mono_weight(m) < 2]
