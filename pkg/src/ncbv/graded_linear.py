"""Z/2-graded linear algebra over the rationals.

Bases carry a parity per element; every sign computed elsewhere in the
package is measured against the order of the basis it refers to.  Forms
are stored as sparse rational matrices, ``matrix[i, j] = <e_i, e_j>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

import sympy

EVEN = 0
ODD = 1

SYMMETRIC = "symmetric"
SKEW = "skew"


class NondegeneracyError(ValueError):
    pass


def parity_name(p: int) -> str:
    return "odd" if p % 2 else "even"


def koszul_sign(permutation: Sequence[int], parities: Sequence[int]) -> int:
    """Sign of rearranging graded objects.

    ``permutation[k]`` is the index of the object that ends up in slot
    ``k``.  Each pair of odd objects whose relative order is reversed
    contributes a factor of -1.

    >>> koszul_sign([1, 0], [1, 1])
    -1
    >>> koszul_sign([2, 0, 1], [1, 1, 1])
    1
    """
    n = len(parities)
    if len(permutation) != n:
        raise ValueError("permutation and parities differ in length")
    if sorted(permutation) != list(range(n)):
        raise ValueError("not a permutation: %r" % (permutation,))
    odd = [permutation[k] for k in range(n) if parities[permutation[k]] % 2]
    inversions = 0
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if odd[a] > odd[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, sympy.Basic):
        r = sympy.Rational(x)
        return Fraction(int(r.p), int(r.q))
    return Fraction(x)


@dataclass(frozen=True)
class GradedBasis:
    names: Tuple[str, ...]
    parities: Tuple[int, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        parities = tuple(int(p) % 2 for p in self.parities)
        if len(names) != len(parities):
            raise ValueError("names and parities differ in length")
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "parities", parities)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, *items: Tuple[str, int]) -> "GradedBasis":
        return cls(tuple(n for n, _ in items), tuple(p for _, p in items))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown basis element %r" % name) from None

    def parity(self, i) -> int:
        if isinstance(i, str):
            i = self.index(i)
        return self.parities[i]

    def to_dict(self):
        return [{"name": n, "parity": p} for n, p in zip(self.names, self.parities)]

    @classmethod
    def from_dict(cls, items) -> "GradedBasis":
        return cls(tuple(d["name"] for d in items), tuple(int(d["parity"]) for d in items))


def product_basis(left: GradedBasis, right: GradedBasis, sep: str = ":") -> GradedBasis:
    """Basis ``l_i (x) r_j`` in row-major order, named ``"l:r"``."""
    names = []
    parities = []
    for ln, lp in zip(left.names, left.parities):
        for rn, rp in zip(right.names, right.parities):
            names.append(ln + sep + rn)
            parities.append((lp + rp) % 2)
    return GradedBasis(tuple(names), tuple(parities))


def dense(matrix: Mapping[Tuple[int, int], Fraction], n: int, m: int | None = None):
    m = n if m is None else m
    return [[matrix.get((i, j), Fraction(0)) for j in range(m)] for i in range(n)]


def sparse(rows) -> Dict[Tuple[int, int], Fraction]:
    out = {}
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            v = to_fraction(v)
            if v:
                out[i, j] = v
    return out


def mat_inverse(rows):
    """Exact inverse of a square rational matrix given as lists."""
    n = len(rows)
    if n == 0:
        return []
    M = sympy.Matrix(n, n, lambda i, j: sympy.Rational(rows[i][j].numerator, rows[i][j].denominator))
    if M.det() == 0:
        raise NondegeneracyError("matrix is singular")
    inv = M.inv()
    return [[to_fraction(inv[i, j]) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                oi = out[i]
                for j in range(m):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    M = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows])
    return M.rank()


def nullspace(rows):
    """Basis of the kernel of a rational matrix, as lists of Fractions."""
    n = len(rows[0]) if rows else 0
    if not rows:
        return [identity(n)[i] for i in range(n)]
    M = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows])
    return [[to_fraction(x) for x in vec] for vec in M.nullspace()]


def column_space(rows):
    """Basis of the image of a rational matrix (columns of the pivot set)."""
    if not rows:
        return []
    M = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows])
    return [[to_fraction(x) for x in vec] for vec in M.columnspace()]


@dataclass(frozen=True)
class BilinearForm:
    basis: GradedBasis
    matrix: Mapping[Tuple[int, int], Fraction]
    form_parity: int
    symmetry: str = SYMMETRIC

    def __post_init__(self):
        clean = {}
        for (i, j), v in dict(self.matrix).items():
            v = to_fraction(v)
            if v:
                clean[int(i), int(j)] = v
        object.__setattr__(self, "matrix", clean)
        object.__setattr__(self, "form_parity", int(self.form_parity) % 2)
        if self.symmetry not in (SYMMETRIC, SKEW):
            raise ValueError("symmetry must be 'symmetric' or 'skew'")
        par = self.basis.parities
        for (i, j) in clean:
            if (par[i] + par[j]) % 2 != self.form_parity:
                raise ValueError(
                    "entry <%s,%s> violates form parity" % (self.basis.names[i], self.basis.names[j])
                )

    def __call__(self, i: int, j: int) -> Fraction:
        return self.matrix.get((i, j), Fraction(0))

    def pair(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for i, a in u.items():
            for j, b in v.items():
                c = self.matrix.get((i, j))
                if c:
                    total += a * b * c
        return total

    def dense(self):
        return dense(self.matrix, len(self.basis))

    def is_zero(self) -> bool:
        return not self.matrix

    def symmetry_defects(self):
        """Pairs (i, j) where the declared (super)symmetry fails."""
        sgn = 1 if self.symmetry == SYMMETRIC else -1
        par = self.basis.parities
        bad = []
        n = len(self.basis)
        for i in range(n):
            for j in range(i, n):
                lhs = self(i, j)
                rhs = sgn * (-1) ** (par[i] * par[j]) * self(j, i)
                if lhs != rhs:
                    bad.append((i, j))
        return bad

    def is_nondegenerate(self) -> bool:
        return rank(self.dense()) == len(self.basis)

    def to_dict(self):
        return {
            "basis": self.basis.to_dict(),
            "parity": self.form_parity,
            "symmetry": self.symmetry,
            "entries": [[i, j, str(v)] for (i, j), v in sorted(self.matrix.items())],
        }

    @classmethod
    def from_dict(cls, d) -> "BilinearForm":
        basis = GradedBasis.from_dict(d["basis"])
        entries = {(int(i), int(j)): Fraction(v) for i, j, v in d["entries"]}
        return cls(basis, entries, int(d["parity"]), d.get("symmetry", SYMMETRIC))


@dataclass(frozen=True)
class InverseFormTensor:
    """The inverse form written as ``sum c * e_i (x) e_j``.

    ``coefficients[i, j] = c`` records the term ``c * x_i (x) y^i`` with
    ``x_i = e_i`` and ``y^i = e_j``.  The defining property is the pair of
    contraction identities checked by :func:`contraction_defects`.
    """

    basis: GradedBasis
    coefficients: Mapping[Tuple[int, int], Fraction]
    form_parity: int

    @property
    def pairs(self):
        return [(i, j, c) for (i, j), c in sorted(self.coefficients.items())]

    def dense(self):
        return dense(self.coefficients, len(self.basis))


def invert_form(form: BilinearForm) -> InverseFormTensor:
    """Inverse form characterised by ``sum_i x_i <y^i, b> = b``.

    Writing the inverse as ``C = sum c_ij e_i (x) e_j`` and ``G`` for the
    Gram matrix this says ``C G = 1``, so ``C = G^{-1}``.  The companion
    identity on the other slot, ``sum_i (-1)^{|x_i||b|+...}<b, x_i> y^i = b``,
    then follows from the (super)symmetry of ``G`` and is tested.
    """
    n = len(form.basis)
    rows = form.dense()
    try:
        inv = mat_inverse(rows)
    except NondegeneracyError:
        raise NondegeneracyError("bilinear form is degenerate") from None
    return InverseFormTensor(form.basis, sparse(inv), form.form_parity)


def contraction_defects(form: BilinearForm, inv: InverseFormTensor):
    """Basis vectors on which the inverse fails to act as the identity.

    Checks ``sum c_ij e_i <e_j, b> = b`` and ``sum c_ij <b, e_i> e_j = b``,
    i.e. that the coefficient matrix is a two-sided inverse of the Gram matrix.
    """
    n = len(form.basis)
    bad = []
    for b in range(n):
        right = {}
        left = {}
        for (i, j), c in inv.coefficients.items():
            g = form(j, b)
            if g:
                right[i] = right.get(i, 0) + c * g
            g = form(b, i)
            if g:
                left[j] = left.get(j, 0) + c * g
        right = {k: v for k, v in right.items() if v}
        left = {k: v for k, v in left.items() if v}
        if right != {b: 1}:
            bad.append(("right", b))
        if left != {b: 1}:
            bad.append(("left", b))
    return bad


@dataclass(frozen=True)
class QuadraticFunction:
    """A quadratic superfunction ``sum q_ij z_i z_j`` (coinvariant tensor).

    Stored canonically with ``i <= j``; for odd ``z_i`` the diagonal is zero.
    """

    basis: GradedBasis
    terms: Mapping[Tuple[int, int], Fraction]

    def __post_init__(self):
        par = self.basis.parities
        clean = {}
        for (i, j), v in dict(self.terms).items():
            v = to_fraction(v)
            if not v:
                continue
            if i > j:
                # z_i z_j = (-1)^{|i||j|} z_j z_i
                v = v * (-1) ** (par[i] * par[j])
                i, j = j, i
            if i == j and par[i]:
                continue
            clean[i, j] = clean.get((i, j), Fraction(0)) + v
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if v})

    def parity(self):
        ps = {(self.basis.parities[i] + self.basis.parities[j]) % 2 for (i, j) in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def scaled(self, c) -> "QuadraticFunction":
        c = to_fraction(c)
        return QuadraticFunction(self.basis, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticFunction)
            and self.basis == other.basis
            and self.terms == other.terms
        )


def quadratic_to_form(q: QuadraticFunction) -> BilinearForm:
    """Symmetrise: ``x y -> x (x) y + (-1)^{|x||y|} y (x) x``."""
    par = q.basis.parities
    m: Dict[Tuple[int, int], Fraction] = {}
    for (i, j), v in q.terms.items():
        m[i, j] = m.get((i, j), Fraction(0)) + v
        m[j, i] = m.get((j, i), Fraction(0)) + v * (-1) ** (par[i] * par[j])
    p = q.parity()
    return BilinearForm(q.basis, m, EVEN if p is None else p, SYMMETRIC)


def form_to_quadratic(form: BilinearForm) -> QuadraticFunction:
    """Inverse of :func:`quadratic_to_form` on symmetric forms."""
    if form.symmetry != SYMMETRIC:
        raise ValueError("only symmetric forms correspond to quadratic functions")
    terms = {}
    for (i, j), v in form.matrix.items():
        if i < j:
            terms[i, j] = v
        elif i == j:
            terms[i, i] = v / 2
    return QuadraticFunction(form.basis, terms)


def tensor_form(fV: BilinearForm, fA: BilinearForm) -> BilinearForm:
    """``<v1 (x) a1, v2 (x) a2> = (-1)^{|a1||v2|} <v1, v2> <a1, a2>``."""
    bV, bA = fV.basis, fA.basis
    nA = len(bA)
    basis = product_basis(bV, bA)
    m = {}
    for (v1, v2), cv in fV.matrix.items():
        for (a1, a2), ca in fA.matrix.items():
            s = -1 if bA.parities[a1] * bV.parities[v2] % 2 else 1
            m[v1 * nA + a1, v2 * nA + a2] = s * cv * ca
    parity = (fV.form_parity + fA.form_parity) % 2
    # (-1)^{|x||y|} symmetry type of the product: skew x symmetric -> skew
    sym = SYMMETRIC if (fV.symmetry == fA.symmetry) else SKEW
    return BilinearForm(basis, m, parity, sym)
