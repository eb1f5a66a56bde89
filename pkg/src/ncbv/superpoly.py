"""Polynomial superfunctions with Laurent coefficients in h.

A monomial is a tuple of ``(variable, power)`` pairs sorted by variable
index, with odd variables to the first power only.  The sign of a
product is the Koszul sign of merging the odd variables into sorted
order.  Terms are keyed by ``(h exponent, monomial)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .graded_linear import GradedBasis, to_fraction

Mono = Tuple[Tuple[int, int], ...]
Key = Tuple[int, Mono]


def mono_mul(par, m1: Mono, m2: Mono):
    """``(sign, monomial)`` of ``m1 * m2``; sign 0 when an odd variable repeats."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    powers = dict(m1)
    sign = 1
    odd1 = [v for v, _ in m1 if par[v]]
    for v, k in m2:
        if par[v]:
            if v in powers:
                return 0, ()
            # v moves left past the odd variables of m1 with larger index
            if sum(1 for u in odd1 if u > v) % 2:
                sign = -sign
        powers[v] = powers.get(v, 0) + k
    return sign, tuple(sorted(powers.items()))


def mono_parity(par, m: Mono) -> int:
    return sum(k for v, k in m if par[v]) % 2


def mono_degree(m: Mono) -> int:
    return sum(k for _, k in m)


def _odd_before(par, m: Mono, v) -> int:
    return sum(k for u, k in m if u < v and par[u])


def _odd_after(par, m: Mono, v) -> int:
    return sum(k for u, k in m if u > v and par[u])


def _drop(m: Mono, v) -> Mono:
    out = []
    for u, k in m:
        if u == v:
            if k > 1:
                out.append((u, k - 1))
        else:
            out.append((u, k))
    return tuple(out)


class SuperPolynomial:
    """Sparse element of ``R[h, 1/h] (x) S(W*)`` over a graded coordinate basis."""

    __slots__ = ("coords", "terms")

    def __init__(self, coords: GradedBasis, terms: Optional[Mapping[Key, Fraction]] = None):
        self.coords = coords
        clean = {}
        for key, c in (terms or {}).items():
            c = to_fraction(c)
            if c:
                clean[key] = c
        self.terms: Dict[Key, Fraction] = clean

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, coords):
        return cls(coords)

    @classmethod
    def constant(cls, coords, c=1, hexp=0):
        return cls(coords, {(hexp, ()): to_fraction(c)})

    @classmethod
    def var(cls, coords, name_or_index, c=1):
        i = coords.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return cls(coords, {(0, ((i, 1),)): to_fraction(c)})

    @classmethod
    def monomial(cls, coords, variables: Iterable[int], c=1, hexp=0):
        """Product of the listed variables in the given order."""
        out = cls.constant(coords, c, hexp)
        for v in variables:
            out = out * cls.var(coords, v)
        return out

    # basic arithmetic -------------------------------------------------------
    @property
    def par(self):
        return self.coords.parities

    def copy_with(self, terms):
        return SuperPolynomial(self.coords, terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not other:
            return not self.terms
        return isinstance(other, SuperPolynomial) and self.coords == other.coords and self.terms == other.terms

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

    def scale(self, c, hshift=0):
        c = to_fraction(c)
        if not c:
            return self.copy_with({})
        return self.copy_with({(e + hshift, m): c * x for (e, m), x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        par = self.par
        out: Dict[Key, Fraction] = {}
        for (e1, m1), c1 in self.terms.items():
            for (e2, m2), c2 in other.terms.items():
                s, m = mono_mul(par, m1, m2)
                if s:
                    k = (e1 + e2, m)
                    out[k] = out.get(k, 0) + s * c1 * c2
        return self.copy_with(out)

    __rmul__ = scale

    def power(self, n: int):
        out = SuperPolynomial.constant(self.coords)
        for _ in range(n):
            out = out * self
        return out

    # gradings ----------------------------------------------------------------
    def parity(self) -> Optional[int]:
        ps = {mono_parity(self.par, m) for (_, m) in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def homogeneous_parts(self):
        parts = {}
        for (e, m), c in self.terms.items():
            parts.setdefault(mono_parity(self.par, m), {})[(e, m)] = c
        return {p: self.copy_with(t) for p, t in parts.items()}

    def hexponents(self):
        return sorted({e for e, _ in self.terms})

    def max_degree(self) -> int:
        return max((mono_degree(m) for _, m in self.terms), default=0)

    def degree_part(self, deg: int):
        return self.copy_with({(e, m): c for (e, m), c in self.terms.items() if mono_degree(m) == deg})

    # derivatives -------------------------------------------------------------
    def dleft(self, v: int):
        """Left derivative: move ``x_v`` to the front, then differentiate."""
        par = self.par
        out = {}
        for (e, m), c in self.terms.items():
            k = dict(m).get(v, 0)
            if not k:
                continue
            s = -1 if par[v] and _odd_before(par, m, v) % 2 else 1
            key = (e, _drop(m, v))
            out[key] = out.get(key, 0) + s * k * c
        return self.copy_with(out)

    def dright(self, v: int):
        """Right derivative: move ``x_v`` to the back, then differentiate."""
        par = self.par
        out = {}
        for (e, m), c in self.terms.items():
            k = dict(m).get(v, 0)
            if not k:
                continue
            s = -1 if par[v] and _odd_after(par, m, v) % 2 else 1
            key = (e, _drop(m, v))
            out[key] = out.get(key, 0) + s * k * c
        return self.copy_with(out)

    # substitution ------------------------------------------------------------
    def substitute(self, images: Mapping[int, "SuperPolynomial"], coords: GradedBasis):
        """Replace each variable by a polynomial of the same parity in ``coords``.

        Variables missing from ``images`` are set to zero.
        """
        out = SuperPolynomial(coords)
        cache = {}
        for (e, m), c in self.terms.items():
            acc = SuperPolynomial.constant(coords, c, e)
            for v, k in m:
                img = images.get(v)
                if img is None:
                    acc = SuperPolynomial(coords)
                    break
                key = (v, k)
                if key not in cache:
                    cache[key] = img.power(k)
                acc = acc * cache[key]
                if not acc:
                    break
            out = out + acc
        return out

    # display -----------------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        names = self.coords.names
        parts = []
        for (e, m), c in sorted(self.terms.items()):
            factors = []
            if e:
                factors.append("h" if e == 1 else "h^%d" % e)
            for v, k in m:
                factors.append(names[v] if k == 1 else "%s^%d" % (names[v], k))
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append("%s*%s" % (c, body))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return "SuperPolynomial(%s)" % self.render()


class PoissonStructure:
    """Odd Poisson bracket and BV Laplacian on ``S(W*)`` from an inverse form.

    ``omega[a, b]`` is the inverse form on coordinates.  The bracket is
    ``{f, g} = (-1)^|f| sum omega[a, b] (f d/dx_a)(d/dx_b g)`` with a right
    derivative on ``f`` and a left derivative on ``g``.  With this sign it
    is graded symmetric, ``{f, g} = (-1)^{|f||g|} {g, f}``, and the
    Laplacian fixed by ``Delta(x_a) = 0`` satisfies the BV identity
    ``Delta(fg) = Delta(f) g + (-1)^|f| f Delta(g) + {f, g}``.
    """

    def __init__(self, coords: GradedBasis, omega: Mapping[Tuple[int, int], Fraction]):
        self.coords = coords
        self.omega = {k: to_fraction(v) for k, v in omega.items() if v}
        self._rows: Dict[int, list] = {}
        for (a, b), c in sorted(self.omega.items()):
            self._rows.setdefault(a, []).append((b, c))
        self._lap_cache: Dict[Mono, Dict[Mono, Fraction]] = {}

    def bracket(self, f: SuperPolynomial, g: SuperPolynomial) -> SuperPolynomial:
        par = self.coords.parities
        out = SuperPolynomial(self.coords)
        for pf, fp in f.homogeneous_parts().items():
            for a, row in self._rows.items():
                fa = fp.dright(a)
                if not fa:
                    continue
                s = -1 if pf else 1
                for b, c in row:
                    gb = g.dleft(b)
                    if gb:
                        out = out + (fa * gb).scale(s * c)
        return out

    def _lap_mono(self, m: Mono) -> Dict[Mono, Fraction]:
        if m in self._lap_cache:
            return self._lap_cache[m]
        par = self.coords.parities
        result: Dict[Mono, Fraction] = {}
        if len(m) and mono_degree(m) >= 2:
            a = m[0][0]
            rest = _drop(m, a)
            # Delta(x_a rest) = (-1)^|a| (x_a Delta(rest) + sum omega[a, b] d_b rest)
            sa = -1 if par[a] else 1
            for mm, c in self._lap_mono(rest).items():
                s, prod = mono_mul(par, ((a, 1),), mm)
                if s:
                    result[prod] = result.get(prod, 0) + sa * s * c
            restp = SuperPolynomial(self.coords, {(0, rest): Fraction(1)})
            for b, c in self._rows.get(a, []):
                for (_, mm), x in restp.dleft(b).terms.items():
                    result[mm] = result.get(mm, 0) + sa * c * x
        result = {k: v for k, v in result.items() if v}
        self._lap_cache[m] = result
        return result

    def laplacian(self, f: SuperPolynomial) -> SuperPolynomial:
        out: Dict[Key, Fraction] = {}
        for (e, m), c in f.terms.items():
            for mm, x in self._lap_mono(m).items():
                k = (e, mm)
                out[k] = out.get(k, 0) + c * x
        return f.copy_with(out)
