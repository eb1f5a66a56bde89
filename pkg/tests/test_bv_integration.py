import itertools
import random
from fractions import Fraction
from math import factorial

import pytest

from ncbv.bv_integration import (
    LITERAL,
    PAPER,
    ParityMismatchError,
    TruncationError,
    gaussian_from_quadratic,
    gaussian_spec,
    lagrangian,
    lagrangian_potential,
    map_M,
    map_N,
    matrix_algebra_xi,
    matrix_pairing_series,
    pairing_series,
    partition_function,
    phi_A,
    poisson_structure,
    q_cocycle_eval,
    quadratic_polynomial,
    restrict,
    restrict_quadratic,
    sigma_d,
    tensor_space,
    wick_bruteforce,
    wick_moment,
    WickEngine,
)
from ncbv.cyclic_words import (
    Chain,
    LambdaElement,
    ce_bracket,
    ce_differential_chain,
    darboux_even_space,
    darboux_odd_space,
    differential,
    odd_line_space,
    odd_power_potential,
    xi_line_space,
)
from ncbv.frobenius import hodge_for, matrix_algebra, tensor_algebras, xi_algebra
from ncbv.graded_linear import GradedBasis, QuadraticFunction
from ncbv.series import TruncatedHSeries, ln1p
from ncbv.superpoly import SuperPolynomial

F = Fraction

CASES = {
    "PiR2_xi": (lambda: odd_line_space(2), xi_algebra),
    "W0_xi": (lambda: darboux_even_space(1, 1), xi_algebra),
    "W1_M2": (lambda: darboux_odd_space(1), lambda: matrix_algebra(2)),
    "W1_xixi": (lambda: darboux_odd_space(1), lambda: tensor_algebras(xi_algebra(), xi_algebra())),
    "PiR_M2xi": (xi_line_space, lambda: matrix_algebra_xi(2)),
}


def rword(S, rng, lo=1, hi=4):
    return tuple(rng.randrange(len(S.basis)) for _ in range(rng.randint(lo, hi)))


def rlam(S, rng, nterms=2, maxf=2, hi=4, g=0):
    out = LambdaElement(S)
    for _ in range(nterms):
        ws = [rword(S, rng, 1, hi) for _ in range(rng.randint(1, maxf))]
        out = out + LambdaElement.product(S, ws, rng.randint(-3, 3) or 1, rng.randrange(g + 1))
    return out


def double_factorial(n):
    return 1 if n <= 0 else n * double_factorial(n - 2)


@pytest.mark.parametrize("name", sorted(CASES))
def test_phi_is_a_dg_lie_map(name):
    S, A = (f() for f in CASES[name])
    T = tensor_space(S, A)
    rng = random.Random(4)
    hi = 3 if A.dim > 4 else 4
    for _ in range(6):
        x = rlam(S, rng, 2, 2, hi, g=1)
        assert phi_A(differential(x), A, T) == differential(phi_A(x, A, T))
        a, c = rlam(S, rng, 1, 2, hi - 1), rlam(S, rng, 1, 2, hi - 1)
        assert phi_A(ce_bracket(a, c), A, T) == ce_bracket(phi_A(a, A, T), phi_A(c, A, T))


@pytest.mark.parametrize("name", sorted(CASES))
def test_sigma_is_closed_and_commutes_with_images(name):
    S, A = (f() for f in CASES[name])
    T = tensor_space(S, A)
    P = poisson_structure(T)
    sig = quadratic_polynomial(sigma_d(S.form, A))
    assert not P.laplacian(sig)
    assert not P.bracket(sig, sig)
    rng = random.Random(8)
    for _ in range(6):
        x = rlam(S, rng, 2, 2, 3, g=1)
        assert not P.bracket(sig, map_N(phi_A(x, A, T)))


@pytest.mark.parametrize("name", ["PiR2_xi", "W0_xi", "W1_xixi", "PiR_M2xi"])
def test_direct_lagrangian_contraction_matches_full_map(name):
    S, A = (f() for f in CASES[name])
    lag = lagrangian(S, A)
    rng = random.Random(1)
    for _ in range(8):
        x = rlam(S, rng, 2, 2, 3, g=1)
        assert lagrangian_potential(x, A, lag) == restrict(map_N(phi_A(x, A)), lag)


def test_parity_mismatch():
    with pytest.raises(ParityMismatchError):
        tensor_space(darboux_odd_space(1), xi_algebra())


def test_nu_terms_die_on_contractible_algebras():
    S = xi_line_space()
    for A in (xi_algebra(), matrix_algebra_xi(2)):
        for n in (1, 3):
            x = LambdaElement.product(S, [(), (0,) * n])
            assert x
            assert not phi_A(x, A)


def test_map_M():
    b = GradedBasis(("y",), (0,))
    y = SuperPolynomial.var(b, 0)
    assert map_M([y, y]) == SuperPolynomial.monomial(b, [0, 0], 1, -2)
    assert map_M([], b) == SuperPolynomial.constant(b)
    with pytest.raises(ValueError):
        map_M([])


def test_sigma_on_xi_lagrangian():
    # L = span(a), sigma(t (x) a) = <t,t><a, d a> = 1, so sigma|_L = z^2
    lag = lagrangian(xi_line_space(), xi_algebra())
    assert lag.coords.names == ("t:a",)
    q = restrict_quadratic(sigma_d(xi_line_space().form, xi_algebra()), lag)
    assert q.terms == {(0, 0): 1}
    assert wick_moment([0, 0], gaussian_spec(lag)) == (1, 1)
    assert wick_moment([0, 0], gaussian_spec(lag, LITERAL)) == (F(1, 2), 1)
    assert wick_moment([0] * 6, gaussian_spec(lag)) == (15, 3)
    assert wick_moment([0] * 5, gaussian_spec(lag)) == (0, 2)


def test_wick_recursion_matches_matchings():
    b = GradedBasis(("x", "y", "p", "q"), (0, 0, 1, 1))
    q = QuadraticFunction(b, {(0, 0): 1, (0, 1): F(1, 3), (1, 1): 2, (2, 3): 1})
    for conv in (PAPER, LITERAL):
        spec = gaussian_from_quadratic(q, conv)
        nonzero = 0
        for d in range(0, 9, 2):
            for mono in itertools.combinations_with_replacement(range(4), d):
                if mono.count(2) > 1 or mono.count(3) > 1:
                    continue
                got = wick_moment(mono, spec)
                assert got == wick_bruteforce(mono, spec)
                nonzero += bool(got[0])
        assert nonzero > 20
        rng = random.Random(0)
        for _ in range(100):
            letters = [rng.randrange(4) for _ in range(rng.choice([2, 4, 6]))]
            assert wick_moment(letters, spec) == wick_bruteforce(letters, spec)


def test_odd_pair_moment_is_antisymmetric():
    b = GradedBasis(("p", "q"), (1, 1))
    spec = gaussian_from_quadratic(QuadraticFunction(b, {(0, 1): 1}))
    c, k = wick_moment([0, 1], spec)
    assert k == 1 and c
    assert wick_moment([1, 0], spec) == (-c, 1)


def closed_form_series(kappas, order):
    """ln <exp(sum_i kappa_i z^{2i+1} / h)> for <z^2> = h, by Wick's formula.

    A product of m_i copies of z^{2i+1} contributes
    prod kappa_i^{m_i} / m_i! * h^{-sum m_i} * (k-1)!! h^{k/2}, k = sum (2i+1) m_i.
    """
    z = [F(0)] * (order + 1)
    idx = sorted(kappas)
    ranges = [range(0, 2 * order + 2) for _ in idx]
    for ms in itertools.product(*ranges):
        k = sum((2 * i + 1) * m for i, m in zip(idx, ms))
        if k % 2:
            continue
        e = k // 2 - sum(ms)
        if e > order:
            continue
        c = F(double_factorial(k - 1))
        for i, m in zip(idx, ms):
            c *= F(kappas[i]) ** m / factorial(m)
        z[e] += c
    assert z[0] == 1
    z[0] = F(0)
    return ln1p(TruncatedHSeries(z, order))


def kappa(S, A, i):
    """Coefficient of z^{2i+1} in the Lagrangian potential of t^{2i+1} on xi."""
    lag = lagrangian(S, A)
    p = lagrangian_potential(LambdaElement.word(S, ["t"] * (2 * i + 1)), A, lag)
    (key, c), = p.terms.items()
    return c


def test_xi_kappas_are_units():
    S, A = xi_line_space(), xi_algebra()
    assert [abs(kappa(S, A, i)) for i in (1, 2, 3)] == [1, 1, 1]


def test_xi_series_for_cubic():
    S, A = xi_line_space(), xi_algebra()
    Q = pairing_series(odd_power_potential(S, {1: -1}), A, 3)
    assert Q == TruncatedHSeries([0, F(15, 2), 405, F(89505, 2)], 3)
    assert Q == closed_form_series({1: -kappa(S, A, 1)}, 3)


def test_xi_series_for_quintic():
    S, A = xi_line_space(), xi_algebra()
    Q = pairing_series(odd_power_potential(S, {2: 1}), A, 3)
    assert Q == TruncatedHSeries([0, 0, 0, F(945, 2)], 3)


def test_xi_series_mixed_matches_closed_form():
    S, A = xi_line_space(), xi_algebra()
    Q = pairing_series(odd_power_potential(S, {1: -1, 2: 1}), A, 2)
    k = {1: -kappa(S, A, 1), 2: kappa(S, A, 2)}
    assert Q == closed_form_series(k, 2)
    assert Q[2] == 510


def test_literal_propagator_scales_by_one_half_per_contraction():
    S, A = xi_line_space(), xi_algebra()
    Q = pairing_series(odd_power_potential(S, {1: -1}), A, 1, convention=LITERAL)
    assert Q == TruncatedHSeries([0, F(15, 16)], 1)


def test_matrix_size_one_is_xi():
    assert matrix_pairing_series(1, {1: -1}, 2) == pairing_series(
        odd_power_potential(xi_line_space(), {1: -1}), xi_algebra(), 2)


def gue_two_cubes(n):
    """<(Tr X^3)^2> for a Gaussian matrix with <X_ij X_kl> = delta_il delta_jk."""
    def matchings(idx):
        if not idx:
            yield []
            return
        for k in range(1, len(idx)):
            for m in matchings(idx[1:k] + idx[k + 1:]):
                yield [(idx[0], idx[k])] + m

    total = 0
    for i0, i1, i2, j0, j1, j2 in itertools.product(range(n), repeat=6):
        lets = [(i0, i1), (i1, i2), (i2, i0), (j0, j1), (j1, j2), (j2, j0)]
        for m in matchings(list(range(6))):
            if all(lets[a] == lets[b][::-1] for a, b in m):
                total += 1
    return total


def test_matrix_series_against_gaussian_matrices():
    # the h coefficient is <(Tr X^3)^2> / 2!; for n = 1 it is 15 / 2
    assert gue_two_cubes(1) == 15
    for n in (1, 2):
        Q = matrix_pairing_series(n, {1: -1}, 1)
        assert Q[1] == F(gue_two_cubes(n), 2)


def test_matrix_size_guard():
    with pytest.raises(ValueError):
        matrix_algebra_xi(0)


def test_truncation_guards():
    S, A = xi_line_space(), xi_algebra()
    x = odd_power_potential(S, {1: 1})
    with pytest.raises(TruncationError):
        pairing_series(x, A, 2, weight=4)
    assert pairing_series(x, A, 2, weight=6) == pairing_series(x, A, 2)
    lag = lagrangian(S, A)
    eng = WickEngine(gaussian_spec(lag))
    bad = SuperPolynomial.monomial(lag.coords, [0], 1, -1)
    with pytest.raises(TruncationError):
        partition_function(bad, eng, 2)


def test_qme_check_in_pairing():
    S = odd_line_space(2)
    x = LambdaElement.word(S, [0, 1, 0, 1])
    with pytest.raises(ValueError, match="master equation"):
        pairing_series(x, xi_algebra(), 1, check_qme=True)
    assert pairing_series(odd_power_potential(xi_line_space(), {1: 2}), xi_algebra(), 1, check_qme=True)[1] == 30


def homog(S, rng, hi):
    while True:
        x = rlam(S, rng, rng.randint(1, 2), 2, hi, g=1)
        parts = x.homogeneous_parts()
        if parts:
            return parts[rng.choice(sorted(parts))]


@pytest.mark.parametrize("name", ["PiR_xi", "W0_xi", "PiR2_xi"])
def test_q_is_a_cocycle(name):
    S = {"PiR_xi": xi_line_space, "W0_xi": lambda: darboux_even_space(1, 1),
         "PiR2_xi": lambda: odd_line_space(2)}[name]()
    A = xi_algebra()
    rng = random.Random(5)
    # the cube of the last (odd) letter always reaches the Gaussian
    cube = LambdaElement.product(S, [(len(S.basis) - 1,) * 3], 1, g=0)
    nonzero = 0
    for _ in range(12):
        c = Chain(S)
        for _ in range(rng.randint(1, 2)):
            fs = [homog(S, rng, 4) if rng.random() < 0.6 else cube for _ in range(rng.randint(1, 2))]
            c.add(rng.randint(1, 3), fs)
        assert q_cocycle_eval(ce_differential_chain(c), A) == {}
        nonzero += bool(q_cocycle_eval(c, A))
    assert nonzero


def test_q_on_empty_chain_is_one():
    c = Chain(xi_line_space())
    c.add(1, ())
    assert q_cocycle_eval(c, xi_algebra()) == {0: 1}


def test_m2xi_hodge_is_forced_and_series_basis_independent():
    A = matrix_algebra_xi(2)
    H = hodge_for(A)
    # any homogeneous complement of im(d) = M_2 (x) 1 is the odd part M_2 (x) a
    rebased = [{1: F(1), 3: F(1)}, {3: F(2)}, {5: F(1), 1: F(-1)}, {7: F(3), 5: F(1)}]
    H2 = hodge_for(A, rebased)
    assert H2.s == H.s
    x = odd_power_potential(xi_line_space(), {1: -1})
    assert pairing_series(x, A, 1, hodge=H2) == pairing_series(x, A, 1)
    with pytest.raises(ValueError):
        hodge_for(A, rebased[:3])
