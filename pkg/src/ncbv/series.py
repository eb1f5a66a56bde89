"""Truncated power series in h with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Mapping, Tuple

from .graded_linear import to_fraction


class TruncationMismatch(UserWarning):
    pass


class TruncatedHSeries:
    """``c_0 + c_1 h + ... + c_order h^order`` (mod ``h^{order+1}``).

    ``mixed`` is set when an operation combined series of different orders;
    the result then carries the smaller order.
    """

    __slots__ = ("coeffs", "order", "mixed")

    def __init__(self, coeffs: Iterable = (), order: int = 0, mixed: bool = False):
        if order < 0:
            raise ValueError("order must be nonnegative")
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        c = [Fraction(0)] * (order + 1)
        for k, v in items:
            if k < 0:
                if to_fraction(v):
                    raise ValueError("negative power of h in a power series")
                continue
            if k <= order:
                c[k] += to_fraction(v)
        self.coeffs: List[Fraction] = c
        self.order = order
        self.mixed = mixed

    # construction ------------------------------------------------------------
    @classmethod
    def zero(cls, order):
        return cls((), order)

    @classmethod
    def one(cls, order):
        return cls([1], order)

    @classmethod
    def h(cls, order):
        return cls({1: 1}, order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k <= self.order else Fraction(0)

    def truncate(self, order: int) -> "TruncatedHSeries":
        return TruncatedHSeries(self.coeffs, min(order, self.order), self.mixed)

    # ring operations ---------------------------------------------------------
    def _common(self, other):
        if not isinstance(other, TruncatedHSeries):
            other = TruncatedHSeries([to_fraction(other)], self.order)
            return other, self.order, self.mixed
        return other, min(self.order, other.order), self.mixed or other.mixed or self.order != other.order

    def __add__(self, other):
        other, n, mixed = self._common(other)
        return TruncatedHSeries([self[k] + other[k] for k in range(n + 1)], n, mixed)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedHSeries([-c for c in self.coeffs], self.order, self.mixed)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other, n, mixed = self._common(other)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other[j]
        return TruncatedHSeries(out, n, mixed)

    __rmul__ = __mul__

    def scale(self, c):
        c = to_fraction(c)
        return TruncatedHSeries([c * x for x in self.coeffs], self.order, self.mixed)

    def __eq__(self, other):
        if isinstance(other, TruncatedHSeries):
            n = min(self.order, other.order)
            return all(self[k] == other[k] for k in range(n + 1))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # exp and log -------------------------------------------------------------
    def ln1p(self) -> "TruncatedHSeries":
        """``ln(1 + s)`` for ``s`` with zero constant term."""
        if self[0]:
            raise ValueError("ln1p needs a series with zero constant term")
        n = self.order
        out = TruncatedHSeries.zero(n)
        power = TruncatedHSeries.one(n)
        for k in range(1, n + 1):
            power = power * self
            if power.is_zero():
                break
            out = out + power.scale(Fraction((-1) ** (k + 1), k))
        out.mixed = self.mixed
        return out

    def exp0(self) -> "TruncatedHSeries":
        """``exp(s)`` for ``s`` with zero constant term."""
        if self[0]:
            raise ValueError("exp0 needs a series with zero constant term")
        n = self.order
        out = TruncatedHSeries.one(n)
        term = TruncatedHSeries.one(n)
        for k in range(1, n + 1):
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            out = out + term
        out.mixed = self.mixed
        return out

    def log(self) -> "TruncatedHSeries":
        """``ln`` of a series with constant term 1."""
        if self[0] != 1:
            raise ValueError("log needs constant term 1, got %s" % self[0])
        return (self - 1).ln1p()

    # display -----------------------------------------------------------------
    def pairs(self) -> List[Tuple[int, Fraction]]:
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    def render(self) -> str:
        parts = []
        for k, c in self.pairs():
            if k == 0:
                parts.append(str(c))
                continue
            hp = "h" if k == 1 else "h^%d" % k
            if c == 1:
                parts.append(hp)
            elif c == -1:
                parts.append("-" + hp)
            else:
                parts.append("%s*%s" % (c, hp))
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def machine(self) -> str:
        """One ``exponent<TAB>numerator/denominator`` line per nonzero coefficient."""
        return "".join("%d\t%d/%d\n" % (k, c.numerator, c.denominator) for k, c in self.pairs())

    def __repr__(self):
        return "TruncatedHSeries(%s, order=%d)" % (self.render(), self.order)


def ln1p(s: TruncatedHSeries) -> TruncatedHSeries:
    return s.ln1p()


def exp0(s: TruncatedHSeries) -> TruncatedHSeries:
    return s.exp0()


def from_exponent_map(coeffs: Mapping[int, Fraction], order: int) -> TruncatedHSeries:
    """Series from ``{exponent: coefficient}``; negative exponents are an error."""
    neg = sorted(k for k, v in coeffs.items() if k < 0 and v)
    if neg:
        raise ValueError("negative powers of h did not cancel: %s" % neg)
    return TruncatedHSeries(dict(coeffs), order)
