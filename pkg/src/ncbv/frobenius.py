"""Differential graded Frobenius algebras and their open-TFT tensors.

Elements are sparse dicts ``{basis index: Fraction}``.  The structure
constants ``mult[i, j]`` give ``e_i e_j`` as such a dict and ``diff[i]``
gives ``d(e_i)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .graded_linear import (
    EVEN,
    ODD,
    SYMMETRIC,
    BilinearForm,
    GradedBasis,
    InverseFormTensor,
    NondegeneracyError,
    column_space,
    invert_form,
    mat_inverse,
    mat_mul,
    nullspace,
    product_basis,
    rank,
    tensor_form,
    to_fraction,
)

Vec = Dict[int, Fraction]


class ContractibilityError(ValueError):
    pass


def vadd(u: Vec, v: Vec, c=1) -> Vec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(u: Vec, c) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in u.items()}


def _clean(d):
    return {k: to_fraction(v) for k, v in d.items() if v}


@dataclass(frozen=True)
class DgFrobeniusAlgebra:
    basis: GradedBasis
    mult: Mapping[Tuple[int, int], Vec]
    unit: int
    diff: Mapping[int, Vec]
    form: BilinearForm
    name: str = "A"
    _inverse: list = field(default_factory=list, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(
            self, "mult", {(int(i), int(j)): _clean(v) for (i, j), v in dict(self.mult).items() if _clean(v)}
        )
        object.__setattr__(self, "diff", {int(i): _clean(v) for i, v in dict(self.diff).items() if _clean(v)})
        if self.form.basis != self.basis:
            raise ValueError("form is defined on a different basis")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def form_parity(self) -> int:
        return self.form.form_parity

    def e(self, name) -> Vec:
        i = self.basis.index(name) if isinstance(name, str) else name
        return {i: Fraction(1)}

    def vec(self, **coeffs) -> Vec:
        return {self.basis.index(k): Fraction(v) for k, v in coeffs.items() if v}

    def parity_of(self, u: Vec) -> Optional[int]:
        ps = {self.basis.parities[k] for k in u}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else EVEN

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                prod = self.mult.get((i, j))
                if prod:
                    ab = a * b
                    for k, c in prod.items():
                        out[k] = out.get(k, 0) + ab * c
        return {k: x for k, x in out.items() if x}

    def product(self, vecs: Sequence[Vec]) -> Vec:
        acc = {self.unit: Fraction(1)}
        for v in vecs:
            acc = self.mul(acc, v)
            if not acc:
                break
        return acc

    def d(self, u: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for k, c in self.diff.get(i, {}).items():
                out[k] = out.get(k, 0) + a * c
        return {k: x for k, x in out.items() if x}

    def pair(self, u: Vec, v: Vec) -> Fraction:
        return self.form.pair(u, v)

    def inverse(self) -> InverseFormTensor:
        if not self._inverse:
            self._inverse.append(invert_form(self.form))
        return self._inverse[0]

    def casimir(self):
        """Terms ``(x_i, y^i)`` of the inverse form, coefficients folded into ``x_i``."""
        return [({i: c}, {j: Fraction(1)}) for i, j, c in self.inverse().pairs]

    def matrix_of(self, op) -> List[List[Fraction]]:
        """Column ``j`` holds ``op(e_j)``."""
        n = self.dim
        cols = [op({j: Fraction(1)}) for j in range(n)]
        return [[cols[j].get(i, Fraction(0)) for j in range(n)] for i in range(n)]

    def diff_matrix(self):
        return self.matrix_of(self.d)


# ---------------------------------------------------------------------------
# validation


@dataclass
class AxiomReport:
    failures: List[Tuple[str, tuple]] = field(default_factory=list)
    checked: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, axiom, witness):
        self.failures.append((axiom, witness))

    def count(self, axiom):
        self.checked[axiom] = self.checked.get(axiom, 0) + 1

    def failed_axioms(self):
        return sorted({a for a, _ in self.failures})

    def lines(self):
        out = []
        for axiom in self.checked:
            bad = [w for a, w in self.failures if a == axiom]
            status = "FAIL" if bad else "ok"
            extra = "  e.g. %s" % (bad[0],) if bad else ""
            out.append("%-16s %s (%d checks)%s" % (axiom, status, self.checked[axiom], extra))
        return out


def validate(A: DgFrobeniusAlgebra) -> AxiomReport:
    """Check every Frobenius axiom exhaustively on basis elements."""
    rep = AxiomReport()
    n = A.dim
    names = A.basis.names
    par = A.basis.parities
    E = [{i: Fraction(1)} for i in range(n)]

    for (i, j), prod in A.mult.items():
        rep.count("grading")
        if any(par[k] != (par[i] + par[j]) % 2 for k in prod):
            rep.fail("grading", (names[i], names[j]))
    for i, img in A.diff.items():
        rep.count("grading")
        if any(par[k] != (par[i] + 1) % 2 for k in img):
            rep.fail("grading", ("d", names[i]))

    for i, j, k in itertools.product(range(n), repeat=3):
        rep.count("associativity")
        if A.mul(A.mul(E[i], E[j]), E[k]) != A.mul(E[i], A.mul(E[j], E[k])):
            rep.fail("associativity", (names[i], names[j], names[k]))

    u = E[A.unit]
    if par[A.unit] != EVEN:
        rep.fail("unit", ("odd unit",))
    for i in range(n):
        rep.count("unit")
        if A.mul(u, E[i]) != E[i] or A.mul(E[i], u) != E[i]:
            rep.fail("unit", (names[i],))

    for i in range(n):
        rep.count("d_squared")
        if A.d(A.d(E[i])):
            rep.fail("d_squared", (names[i],))

    for i, j in itertools.product(range(n), repeat=2):
        rep.count("leibniz")
        lhs = A.d(A.mul(E[i], E[j]))
        rhs = vadd(A.mul(A.d(E[i]), E[j]), A.mul(E[i], A.d(E[j])), (-1) ** par[i])
        if lhs != rhs:
            rep.fail("leibniz", (names[i], names[j]))

    for i, j, k in itertools.product(range(n), repeat=3):
        rep.count("invariance")
        if A.pair(A.mul(E[i], E[j]), E[k]) != A.pair(E[i], A.mul(E[j], E[k])):
            rep.fail("invariance", (names[i], names[j], names[k]))

    for i, j in itertools.product(range(n), repeat=2):
        rep.count("d_invariance")
        if A.pair(A.d(E[i]), E[j]) + (-1) ** par[i] * A.pair(E[i], A.d(E[j])) != 0:
            rep.fail("d_invariance", (names[i], names[j]))

    rep.count("symmetry")
    if A.form.symmetry != SYMMETRIC:
        rep.fail("symmetry", ("declared skew",))
    for w in A.form.symmetry_defects():
        rep.fail("symmetry", tuple(names[k] for k in w))

    rep.count("nondegenerate")
    if not A.form.is_nondegenerate():
        rep.fail("nondegenerate", ())
    return rep


# ---------------------------------------------------------------------------
# constructions


def xi_algebra() -> DgFrobeniusAlgebra:
    """The contractible 1|1-dimensional algebra: a^2 = 1, d(a) = 1, <a, 1> = 1."""
    basis = GradedBasis(("1", "a"), (EVEN, ODD))
    one = Fraction(1)
    mult = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}, (1, 1): {0: one}}
    diff = {1: {0: one}}
    form = BilinearForm(basis, {(0, 1): one, (1, 0): one}, ODD, SYMMETRIC)
    return DgFrobeniusAlgebra(basis, mult, 0, diff, form, name="xi")


def matrix_algebra(n: int) -> DgFrobeniusAlgebra:
    """M_n over the rationals with the trace form and zero differential."""
    if n < 1:
        raise ValueError("matrix size must be positive")
    names = tuple("E%d%d" % (i + 1, j + 1) if n < 10 else "E%d_%d" % (i + 1, j + 1)
                  for i in range(n) for j in range(n))
    basis = GradedBasis(names, (EVEN,) * (n * n))
    one = Fraction(1)
    idx = lambda i, j: i * n + j
    mult = {}
    form = {}
    for i, j, l in itertools.product(range(n), repeat=3):
        mult[idx(i, j), idx(j, l)] = {idx(i, l): one}
    for i, j in itertools.product(range(n), repeat=2):
        form[idx(i, j), idx(j, i)] = one
    if n == 1:
        names = ("1",)
        basis = GradedBasis(names, (EVEN,))
    unit_vec = {idx(i, i): one for i in range(n)}
    A = DgFrobeniusAlgebra(basis, mult, 0, {}, BilinearForm(basis, form, EVEN, SYMMETRIC),
                           name="matrix:%d" % n)
    if n == 1:
        return A
    return _with_unit_vector(A, unit_vec)


def _with_unit_vector(A: DgFrobeniusAlgebra, unit_vec: Vec) -> DgFrobeniusAlgebra:
    """Algebras whose unit is not a basis vector are rewritten in a basis that contains it."""
    if len(unit_vec) == 1 and list(unit_vec.values())[0] == 1:
        return DgFrobeniusAlgebra(A.basis, A.mult, list(unit_vec)[0], A.diff, A.form, A.name)
    n = A.dim
    # new basis: replace the first basis vector appearing in unit_vec by the unit
    pivot = min(unit_vec)
    cols = [{j: Fraction(1)} for j in range(n)]
    cols[pivot] = dict(unit_vec)
    names = list(A.basis.names)
    names[pivot] = "1"
    return change_basis(A, cols, GradedBasis(tuple(names), A.basis.parities), unit=pivot)


def change_basis(A: DgFrobeniusAlgebra, cols: List[Vec], basis: GradedBasis, unit: int) -> DgFrobeniusAlgebra:
    """Re-express ``A`` in the basis whose ``k``-th vector is ``cols[k]`` (old coordinates)."""
    n = A.dim
    P = [[cols[k].get(i, Fraction(0)) for k in range(n)] for i in range(n)]
    Pinv = mat_inverse(P)

    def to_new(v: Vec) -> Vec:
        out = {}
        for i, x in v.items():
            for k in range(n):
                c = Pinv[k][i]
                if c:
                    out[k] = out.get(k, 0) + c * x
        return {k: x for k, x in out.items() if x}

    mult = {}
    for a in range(n):
        for b in range(n):
            prod = to_new(A.mul(cols[a], cols[b]))
            if prod:
                mult[a, b] = prod
    diff = {a: to_new(A.d(cols[a])) for a in range(n)}
    form = {}
    for a in range(n):
        for b in range(n):
            v = A.pair(cols[a], cols[b])
            if v:
                form[a, b] = v
    f = BilinearForm(basis, form, A.form.form_parity, A.form.symmetry)
    return DgFrobeniusAlgebra(basis, mult, unit, diff, f, A.name)


def tensor_algebras(A: DgFrobeniusAlgebra, B: DgFrobeniusAlgebra) -> DgFrobeniusAlgebra:
    """Graded tensor product with Koszul signs; form as in :func:`tensor_form`."""
    basis = product_basis(A.basis, B.basis)
    nB = B.dim
    pA, pB = A.basis.parities, B.basis.parities
    mult = {}
    for (a1, a2), pa in A.mult.items():
        for (b1, b2), pb in B.mult.items():
            s = -1 if pB[b1] * pA[a2] % 2 else 1
            out = {}
            for k, x in pa.items():
                for l, y in pb.items():
                    out[k * nB + l] = s * x * y
            mult[a1 * nB + b1, a2 * nB + b2] = out
    diff = {}
    for a in range(A.dim):
        for b in range(nB):
            img = {}
            for k, x in A.diff.get(a, {}).items():
                img[k * nB + b] = img.get(k * nB + b, 0) + x
            s = (-1) ** pA[a]
            for l, y in B.diff.get(b, {}).items():
                img[a * nB + l] = img.get(a * nB + l, 0) + s * y
            img = {k: v for k, v in img.items() if v}
            if img:
                diff[a * nB + b] = img
    form = tensor_form(A.form, B.form)
    form = BilinearForm(basis, form.matrix, form.form_parity, SYMMETRIC)
    return DgFrobeniusAlgebra(basis, mult, A.unit * nB + B.unit, diff, form,
                              name="tensor:%s,%s" % (A.name, B.name))


# ---------------------------------------------------------------------------
# Hodge decompositions


@dataclass(frozen=True)
class HodgeDecomposition:
    s: Tuple[Tuple[Fraction, ...], ...]
    pi: Tuple[Tuple[Fraction, ...], ...]

    def apply_s(self, u: Vec) -> Vec:
        return _apply(self.s, u)

    def apply_pi(self, u: Vec) -> Vec:
        return _apply(self.pi, u)

    def image_of_s(self):
        """Basis of im(s), as sparse vectors."""
        rows = [list(r) for r in self.s]
        return [{i: x for i, x in enumerate(v) if x} for v in column_space(rows)]


def _apply(M, u: Vec) -> Vec:
    out = {}
    for j, x in u.items():
        for i in range(len(M)):
            c = M[i][j]
            if c:
                out[i] = out.get(i, 0) + c * x
    return {k: v for k, v in out.items() if v}


def homology_classes(A: DgFrobeniusAlgebra):
    """Representatives of a basis of H(A, d) (empty iff contractible)."""
    D = A.diff_matrix()
    n = A.dim
    ker = nullspace(D)
    r_im = rank(D)
    reps = []
    current = column_space(D) if r_im else []
    for v in ker:
        trial = current + [v]
        cols = [[vec[i] for vec in trial] for i in range(n)]
        if rank(cols) > len(current):
            current = trial
            reps.append({i: x for i, x in enumerate(v) if x})
    return reps


def hodge_for(A: DgFrobeniusAlgebra, complement: Optional[List[Vec]] = None) -> HodgeDecomposition:
    """A Hodge decomposition with pi = 0 for a contractible algebra.

    ``complement`` optionally fixes im(s): it must be a homogeneous basis of a
    subspace that is isotropic and complementary to im(d).  By default the
    complement is assembled from basis vectors, as for ``s(1) = a`` on xi.
    """
    classes = homology_classes(A)
    if classes:
        names = A.basis.names
        rep = " + ".join("%s*%s" % (c, names[i]) for i, c in sorted(classes[0].items()))
        raise ContractibilityError("algebra is not contractible; nonzero homology class %s" % rep)
    n = A.dim
    D = A.diff_matrix()
    image = [{i: x for i, x in enumerate(v) if x} for v in column_space(D)]
    if complement is None:
        complement = _isotropic_complement(A, image)
    L = [dict(v) for v in complement]
    if len(L) + len(image) != n:
        raise ValueError("complement has the wrong dimension")
    # s is zero on im(s) and inverts d : im(s) -> im(d) on im(d)
    dL = [A.d(v) for v in L]
    cols = L + dL
    P = [[cols[k].get(i, Fraction(0)) for k in range(n)] for i in range(n)]
    try:
        Pinv = mat_inverse(P)
    except NondegeneracyError:
        raise ValueError("complement is not transverse to im(d)") from None
    S_new = [[Fraction(0)] * n for _ in range(n)]
    m = len(L)
    for k in range(m):
        S_new[k][m + k] = Fraction(1)  # s(d l_k) = l_k
    # s = P S_new P^{-1}
    S = mat_mul(mat_mul(P, S_new), Pinv)
    zero = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    return HodgeDecomposition(tuple(tuple(r) for r in S), zero)


def _isotropic_complement(A: DgFrobeniusAlgebra, image: List[Vec]) -> List[Vec]:
    n = A.dim
    chosen: List[Vec] = []
    span = list(image)
    for i in range(n):
        v = {i: Fraction(1)}
        trial = span + [v]
        cols = [[vec.get(r, Fraction(0)) for vec in trial] for r in range(n)]
        if rank(cols) == len(trial):
            if all(A.pair(v, w) == 0 and A.pair(w, v) == 0 for w in chosen + [v]):
                chosen.append(v)
                span = trial
    if len(chosen) + len(image) != n:
        raise ValueError("no isotropic complement spanned by basis vectors; pass one explicitly")
    return chosen


def hodge_defects(A: DgFrobeniusAlgebra, H: HodgeDecomposition):
    """Names of the Hodge axioms that fail (empty list when all seven hold)."""
    n = A.dim
    E = [{i: Fraction(1)} for i in range(n)]
    par = A.basis.parities
    s, p, d = H.apply_s, H.apply_pi, A.d
    bad = set()
    for i in range(n):
        lhs = vadd(d(s(E[i])), s(d(E[i])))
        if lhs != vadd(E[i], p(E[i]), -1):
            bad.add("ds+sd=1-pi")
        if s(s(E[i])):
            bad.add("s^2=0")
        if p(p(E[i])) != p(E[i]):
            bad.add("pi^2=pi")
        if d(p(E[i])) or p(d(E[i])):
            bad.add("d pi=pi d=0")
        if p(s(E[i])) or s(p(E[i])):
            bad.add("pi s=s pi=0")
        for j in range(n):
            if A.pair(s(E[i]), E[j]) != (-1) ** par[i] * A.pair(E[i], s(E[j])):
                bad.add("<s a,b>=(-1)^a<a,s b>")
            if A.pair(p(E[i]), E[j]) != A.pair(E[i], p(E[j])):
                bad.add("<pi a,b>=<a,pi b>")
    return sorted(bad)


# ---------------------------------------------------------------------------
# beta, gamma and the tensors t_n, alpha


def _par(A: DgFrobeniusAlgebra, u: Vec) -> int:
    return A.basis.parities[next(iter(u))] if u else EVEN


def beta(A: DgFrobeniusAlgebra, u: Vec) -> Vec:
    """``beta(a) = x_i y^i a``, with an extra ``(-1)^{|y^i|}`` when the form is odd.

    The twist is what closing up a boundary interval produces in the
    same-boundary gluing identity; without it that identity fails on xi.
    """
    f = A.form_parity
    out: Vec = {}
    for x, y in A.casimir():
        out = vadd(out, A.product([x, y, u]), (-1) ** (f * _par(A, y)))
    return out


def gamma_op(A: DgFrobeniusAlgebra, u: Vec) -> Vec:
    """``gamma(a) = (-1)^{|x_j||y^i|} x_i x_j y^i y^j a``."""
    cas = A.casimir()
    out: Vec = {}
    for xi, yi in cas:
        for xj, yj in cas:
            s = (-1) ** (_par(A, xj) * _par(A, yi))
            out = vadd(out, A.product([xi, xj, yi, yj, u]), s)
    return out


def counit(A: DgFrobeniusAlgebra, u: Vec) -> Fraction:
    """``u -> <u, 1>``."""
    return A.pair(u, {A.unit: Fraction(1)})


def t_tensor(A: DgFrobeniusAlgebra, *args: Vec) -> Fraction:
    """``t_n(a_1, ..., a_n) = <a_1 ... a_{n-1}, a_n>``; the empty product is the unit."""
    if not args:
        raise ValueError("t_n needs at least one argument")
    return A.pair(A.product(args[:-1]), args[-1])


@dataclass(frozen=True)
class TftTensorSpec:
    g: int
    b: int
    profile: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "profile", tuple(self.profile))
        if self.g < 0 or self.b < 0:
            raise ValueError("genus and boundary count must be nonnegative")
        if len(self.profile) < 1 or any(k < 0 for k in self.profile):
            raise ValueError("profile must be a nonempty list of nonnegative lengths")

    @property
    def n(self):
        return len(self.profile)


def alpha00(A: DgFrobeniusAlgebra, blocks: Sequence[Sequence[Vec]]) -> Fraction:
    """``alpha_n^{0,0}`` on ``n`` cyclic blocks of homogeneous elements.

    Sums ``(-1)^p t_n(x_{i_n},...,x_{i_1}) t_{K+n}(y^{i_1},B_1,...,y^{i_n},B_n)``
    with ``p = sum_r |y^{i_{r+1}}| (|B_1|+...+|B_r| + f r)``, ``f`` the form
    parity.  Both ``t`` factors are evaluated as the counit of a product,
    which equals the pairing by invariance.
    """
    n = len(blocks)
    if n == 0:
        raise ValueError("alpha needs at least one block")
    f = A.form_parity
    cas = A.casimir()
    bprod = [A.product(B) for B in blocks]
    bpar = [sum(_par(A, a) for a in B) % 2 for B in blocks]
    one = {A.unit: Fraction(1)}
    total = Fraction(0)

    def rec(r, left, right, sign, acc):
        # left: y^{i_1} B_1 ... y^{i_r} B_r; right: x_{i_r} ... x_{i_1}
        nonlocal total
        if r == n:
            c = counit(A, left)
            if c:
                total += sign * c * counit(A, right)
            return
        for x, y in cas:
            s = sign
            if r:
                s = -s if _par(A, y) * (acc + f * r) % 2 else s
            nl = A.mul(A.mul(left, y), bprod[r])
            if not nl:
                continue
            rec(r + 1, nl, A.mul(x, right), s, acc + bpar[r])

    rec(0, one, one, 1, 0)
    return total


def alpha(A: DgFrobeniusAlgebra, spec: TftTensorSpec, args: Sequence[Sequence[Vec]], position=None) -> Fraction:
    """``alpha_n^{g,b}``: ``alpha_n^{0,0}`` with ``beta^b gamma^g`` applied to one argument.

    ``position`` is ``(block, slot)``; by default the first letter of the first
    nonempty block.  If every block is empty the operator acts on a unit
    inserted into the first block, which does not change ``alpha^{0,0}``.
    """
    blocks = [list(B) for B in args]
    if len(blocks) != spec.n or tuple(len(B) for B in blocks) != spec.profile:
        raise ValueError("arguments do not match the profile %s" % (spec.profile,))
    if spec.g == 0 and spec.b == 0:
        return alpha00(A, blocks)
    if position is None:
        nonempty = [r for r, B in enumerate(blocks) if B]
        if nonempty:
            position = (nonempty[0], 0)
        else:
            blocks[0] = [{A.unit: Fraction(1)}]
            position = (0, 0)
    r, c = position
    u = blocks[r][c]
    for _ in range(spec.g):
        u = gamma_op(A, u)
    for _ in range(spec.b):
        u = beta(A, u)
    total = Fraction(0)
    for k, coeff in sorted(u.items()):
        blocks[r][c] = {k: Fraction(1)}
        total += coeff * alpha00(A, blocks)
    return total


def alpha_of(A: DgFrobeniusAlgebra, g: int, b: int, blocks, position=None) -> Fraction:
    """Convenience wrapper that reads the profile off ``blocks``."""
    return alpha(A, TftTensorSpec(g, b, tuple(len(B) for B in blocks)), blocks, position)


# ---------------------------------------------------------------------------
# the six open-TFT identities


IDENTITY_NAMES = {
    "1": "block permutation",
    "2": "cyclic rotation",
    "3": "same-boundary gluing",
    "4": "cross-boundary gluing",
    "5": "two-surface gluing",
    "6": "d-closedness",
}


@dataclass
class IdentityReport:
    seed: int
    trials: int
    passed: Dict[str, int] = field(default_factory=dict)
    failed: Dict[str, int] = field(default_factory=dict)
    witnesses: Dict[str, tuple] = field(default_factory=dict)

    def record(self, item, ok, witness=None):
        bucket = self.passed if ok else self.failed
        bucket[item] = bucket.get(item, 0) + 1
        if not ok and item not in self.witnesses:
            self.witnesses[item] = witness

    @property
    def ok(self):
        return not any(self.failed.values())

    def lines(self):
        out = ["seed %d, %d trials" % (self.seed, self.trials)]
        for item in sorted(IDENTITY_NAMES):
            p, f = self.passed.get(item, 0), self.failed.get(item, 0)
            status = "ok" if not f else "FAIL"
            line = "(%s) %-22s %s  passed %d failed %d" % (item, IDENTITY_NAMES[item], status, p, f)
            if f:
                line += "  e.g. %s" % (self.witnesses[item],)
            out.append(line)
        return out


def check_otft_identities(A: DgFrobeniusAlgebra, trial_count=100, rng_seed=0, max_len=2, max_genus=1):
    """Check the six gluing identities on random basis-element inputs.

    Every trial draws fresh blocks and a fresh ``(g, b)`` and instantiates
    all six identities, comparing both sides as exact rationals.  Item 3
    also covers the degenerate case of an empty interval, which produces an
    extra boundary (``alpha_{n+1}[() ...] = alpha_n^{g,b+1}[...]``).
    """
    rng = random.Random(rng_seed)
    f = A.form_parity
    n = A.dim
    names = A.basis.names
    cas = A.casimir()
    rep = IdentityReport(rng_seed, trial_count)

    def block(lo):
        return [rng.randrange(n) for _ in range(rng.randrange(lo, max_len + 1))]

    def vecs(bs):
        return [[{i: Fraction(1)} for i in B] for B in bs]

    def show(bs):
        return tuple(tuple(names[i] for i in B) for B in bs)

    def al(g, b, bs):
        return alpha_of(A, g, b, bs)

    def bp(B):
        return sum(A.basis.parities[i] for i in B) % 2

    for _ in range(trial_count):
        g, b = rng.randrange(max_genus + 1), rng.randrange(2)

        # (1) and (2)
        bs = [block(1) for _ in range(rng.randrange(2, 4))]
        v = vecs(bs)
        a0 = al(g, b, v)
        i = rng.randrange(len(bs) - 1)
        sw = v[:i] + [v[i + 1], v[i]] + v[i + 2:]
        sign = (-1) ** ((bp(bs[i]) + f) * (bp(bs[i + 1]) + f))
        rep.record("1", a0 == sign * al(g, b, sw), (g, b, show(bs), i))
        j = rng.randrange(len(bs))
        B = bs[j]
        rot = v[:j] + [[v[j][-1]] + v[j][:-1]] + v[j + 1:]
        sign = (-1) ** (A.basis.parities[B[-1]] * bp(B[:-1]))
        rep.record("2", a0 == sign * al(g, b, rot), (g, b, show(bs), j))

        # (3): split one boundary into two
        B1, B2, rest = block(0), block(0), [block(1) for _ in range(rng.randrange(0, 2))]
        V1, V2, R = vecs([B1, B2, *rest])[0], vecs([B2])[0], vecs(rest)
        lhs = Fraction(0)
        for x, y in cas:
            s = (-1) ** (_par(A, y) * (bp(B1) + f))
            lhs += s * al(g, b, [[x] + V1 + [y] + V2] + R)
        rhs = al(g, b, [V1, V2] + R)
        rep.record("3", lhs == rhs, (g, b, show([B1, B2] + rest)))
        rest = [block(1) for _ in range(rng.randrange(1, 3))]
        ok = al(g, b, [[]] + vecs(rest)) == al(g, b + 1, vecs(rest))
        rep.record("3", ok, (g, b, "empty interval", show(rest)))

        # (4): join two boundaries, raising the genus
        B1, B2, rest = block(0), block(0), [block(1) for _ in range(rng.randrange(0, 2))]
        V1, V2, R = vecs([B1])[0], vecs([B2])[0], vecs(rest)
        lhs = sum((al(g, b, [V1 + [x], [y] + V2] + R) for x, y in cas), Fraction(0))
        rep.record("4", lhs == al(g + 1, b, [V1 + V2] + R), (g, b, show([B1, B2] + rest)))

        # (5): glue two surfaces along an interval
        g2, b2 = rng.randrange(max_genus + 1), rng.randrange(2)
        P = [block(1) for _ in range(rng.randrange(0, 2))] + [block(0)]
        Q = [block(0)] + [block(1) for _ in range(rng.randrange(0, 2))]
        VP, VQ = vecs(P), vecs(Q)
        lhs = Fraction(0)
        for x, y in cas:
            lhs += al(g, b, VP[:-1] + [VP[-1] + [x]]) * al(g2, b2, [[y] + VQ[0]] + VQ[1:])
        merged = VP[:-1] + [VP[-1] + VQ[0]] + VQ[1:]
        rep.record("5", lhs == al(g + g2, b + b2, merged), (g, b, g2, b2, show(P), show(Q)))

        # (6): alpha vanishes on d-boundaries
        tot = Fraction(0)
        before = 0
        for r, B in enumerate(bs):
            for c, k in enumerate(B):
                for kk, coeff in A.d({k: Fraction(1)}).items():
                    w = [list(X) for X in v]
                    w[r][c] = {kk: Fraction(1)}
                    tot += (-1) ** before * coeff * al(g, b, w)
                before += A.basis.parities[k]
        rep.record("6", tot == 0, (g, b, show(bs)))
    return rep
