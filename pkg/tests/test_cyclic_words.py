import random
from fractions import Fraction

import pytest

from ncbv.bv_integration import map_N, poisson_structure
from ncbv.cyclic_words import (
    Chain,
    LambdaElement,
    bracket_h,
    ce_bracket,
    ch_character,
    closure_violations,
    darboux_even_space,
    darboux_odd_space,
    delta_laplacian,
    differential,
    helement,
    odd_line_space,
    odd_power_potential,
    parse_lambda,
    qme_residual,
    render_lambda,
    xi_line_space,
)

SPACES = {
    "PiR": xi_line_space,
    "PiR2": lambda: odd_line_space(2),
    "W1_11": lambda: darboux_odd_space(1),
    "W1_22": lambda: darboux_odd_space(2),
    "W0_21": lambda: darboux_even_space(1, 1),
    "W0_20": lambda: darboux_even_space(1, 0),
}


def rword(S, rng, lo=1, hi=4):
    return tuple(rng.randrange(len(S.basis)) for _ in range(rng.randint(lo, hi)))


def rlam(S, rng, nterms=2, maxf=2, hi=4, g=0):
    out = LambdaElement(S)
    for _ in range(nterms):
        ws = [rword(S, rng, 1, hi) for _ in range(rng.randint(1, maxf))]
        out = out + LambdaElement.product(S, ws, rng.randint(-3, 3), rng.randrange(g + 1))
    return out


def rhom(S, rng, **kw):
    """A random homogeneous nonzero element."""
    while True:
        x = rlam(S, rng, **kw)
        if x:
            return next(iter(x.homogeneous_parts().values()))


def sgn(pa, pb):
    return -1 if (pa + 1) * (pb + 1) % 2 else 1


def std(a, b):
    """The odd bracket [a, b] = (-1)^|a| {a, b}; ``ce_bracket`` is graded symmetric."""
    return ce_bracket(a, b).scale(-1 if a.parity() else 1)


def test_canonical_rotation_signs():
    P = odd_line_space(2)
    assert P.canonicalize((1, 0)) == (-1, (0, 1))
    assert P.canonicalize((0, 0)) == (0, (0, 0))
    assert P.canonicalize((0, 0, 0)) == (1, (0, 0, 0))
    W = darboux_odd_space(1)
    # moving the even x1 to the back costs nothing
    assert W.canonicalize((1, 0)) == (1, (0, 1))
    assert W.canonicalize((1, 1)) == (0, (1, 1))
    assert W.canonicalize((0, 0)) == (1, (0, 0))


def test_odd_powers_of_t():
    S = xi_line_space()
    for n in range(1, 10):
        x = LambdaElement.word(S, ["t"] * n)
        assert bool(x) == (n % 2 == 1)


def test_odd_chain_factor_squares_to_zero():
    W = darboux_odd_space(1)
    p = LambdaElement.word(W, ["p1"])
    x = LambdaElement.word(W, ["x1"])
    assert not p * p
    assert x * x
    # for an even form nu is odd
    S = darboux_even_space(1, 0)
    nu_w = LambdaElement.product(S, [(), (0, 1)])
    assert not nu_w * nu_w


@pytest.mark.parametrize("name", sorted(SPACES))
def test_bracket_antisymmetry_and_jacobi(name):
    S = SPACES[name]()
    rng = random.Random(11)
    for _ in range(25):
        a, b, c = (rhom(S, rng, nterms=1, maxf=2, hi=3) for _ in range(3))
        pa, pb = a.parity(), b.parity()
        assert ce_bracket(a, b) == ce_bracket(b, a).scale(-1 if pa * pb else 1)
        assert std(a, b) == std(b, a).scale(-sgn(pa, pb))
        lhs = std(a, std(b, c))
        rhs = std(std(a, b), c) + std(b, std(a, c)).scale(sgn(pa, pb))
        assert lhs == rhs


@pytest.mark.parametrize("name", sorted(SPACES))
def test_differential_squares_to_zero_and_derives_bracket(name):
    S = SPACES[name]()
    rng = random.Random(5)
    for _ in range(25):
        x = rlam(S, rng, nterms=2, maxf=3, hi=4, g=1)
        assert not differential(differential(x))
        a, b = rhom(S, rng, nterms=1, maxf=2, hi=3), rhom(S, rng, nterms=1, maxf=2, hi=3)
        s = -1 if a.parity() == 0 else 1
        lhs = differential(std(a, b))
        rhs = std(differential(a), b) + std(a, differential(b)).scale(s)
        assert lhs == rhs


@pytest.mark.parametrize("name", sorted(SPACES))
def test_cobracket_squares_to_zero(name):
    S = SPACES[name]()
    rng = random.Random(2)
    for _ in range(40):
        x = LambdaElement.product(S, [rword(S, rng, 2, 7)])
        assert not delta_laplacian(delta_laplacian(x))


@pytest.mark.parametrize("n", [1, 2])
def test_flattening_intertwines_with_polynomials(n):
    # N sends the bracket to the Poisson bracket and d to h * Laplacian,
    # up to constants, which Lambda does not keep
    S = darboux_odd_space(n)
    P = poisson_structure(S)
    rng = random.Random(n)
    for _ in range(30):
        a, b = rlam(S, rng, 1, 2, 4), rlam(S, rng, 1, 2, 4)
        assert map_N(ce_bracket(a, b)) == P.bracket(map_N(a), map_N(b))
        y = rlam(S, rng, 2, 3, 4, g=1)
        d = map_N(differential(y)) - P.laplacian(map_N(y)).scale(1, 1)
        assert all(not m for (_, m) in d.terms)


def test_map_N_exponents():
    S = darboux_odd_space(1)
    y = LambdaElement.product(S, [(0, 1), (0,)], 1, g=2, b=1)
    (e, _), = map_N(y).terms
    assert e == 2 * 2 + 1 + 2 - 1
    with pytest.raises(ValueError):
        map_N(LambdaElement.word(xi_line_space(), ["t", "t", "t"]))


def test_h_bracket_examples():
    S = darboux_odd_space(1)
    # {p1, x1 x1}: p1 meets either x1, leaving x1 twice
    r = bracket_h(S, helement(S, {("p1",): 1}), helement(S, {("x1", "x1"): 1}))
    assert list(r) == [(0,)] and abs(r[0, ]) == 2
    # no letter of x1 x1 pairs with x1
    assert bracket_h(S, helement(S, {("x1",): 1}), helement(S, {("x1", "x1"): 1})) == {}
    # {t, t t t} on Pi R lands on t t, which vanishes
    P = xi_line_space()
    assert bracket_h(P, helement(P, {("t",): 1}), helement(P, {("t",) * 3: 1})) == {}


@pytest.mark.parametrize("seed", range(5))
def test_qme_holds_for_every_odd_power_potential_on_PiR(seed):
    rng = random.Random(seed)
    S = xi_line_space()
    coeffs = {i: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for i in range(1, 6)}
    x = odd_power_potential(S, coeffs)
    assert not qme_residual(x, 12)
    # with nu kept, only terms carrying nu survive
    r = qme_residual(x, 12, with_nu=True)
    assert all(b > 0 for (_, b, _) in r.terms)


def test_qme_residual_nonzero_example():
    S = odd_line_space(2)
    x = parse_lambda(S, "w[t1,t2,t1,t2]")
    r = qme_residual(x, 8)
    assert render_lambda(r) == "(1)*w[t1]*w[t1] + (-1)*w[t2]*w[t2]"


def test_qme_rejects_low_order():
    S = xi_line_space()
    with pytest.raises(ValueError, match="order"):
        qme_residual(LambdaElement.word(S, ["t"]), 6)
    # the guard can be switched off; {t, t} lands on the empty word, so only nu remains
    r = qme_residual(LambdaElement.word(S, ["t"]), 6, with_nu=True, check_order=False)
    assert all(b > 0 for (_, b, _) in r.terms)


def test_odd_power_potential_indices():
    S = xi_line_space()
    x = odd_power_potential(S, {1: 2, 2: -1})
    assert render_lambda(x) == "(2)*w[t,t,t] + (-1)*w[t,t,t,t,t]"
    with pytest.raises(ValueError):
        odd_power_potential(S, {0: 1})


def test_characteristic_class_coefficients():
    S = xi_line_space()
    x = odd_power_potential(S, {1: 1})
    ch = ch_character(x, 9)
    assert [(c, len(fs)) for c, fs in ch.terms] == [
        (1, 0), (1, 1), (Fraction(1, 2), 2), (Fraction(1, 6), 3)]
    assert len(ch_character(x, 8).terms) == 3
    assert ch_character(LambdaElement(S), 5).terms == [(1, ())]


def test_chain_scale_and_sum():
    S = xi_line_space()
    x = odd_power_potential(S, {1: 1})
    c = Chain(S)
    c.add(2, (x,))
    c.add(0, (x,))
    c.add(1, (LambdaElement(S),))
    assert len(c.terms) == 1
    assert (c + c.scale(3)).terms == [(2, (x,)), (6, (x,))]


@pytest.mark.parametrize("name", sorted(SPACES))
def test_parse_render_round_trip(name):
    S = SPACES[name]()
    rng = random.Random(9)
    for _ in range(20):
        x = rlam(S, rng, 3, 3, 4, g=2)
        assert parse_lambda(S, render_lambda(x)) == x


def test_parse_examples_and_errors():
    S = darboux_odd_space(1)
    x = parse_lambda(S, "3/2*g^1*n^1*w[x1,p1]*w[x1] - (-1/3)*w[p1,x1]")
    assert x == (LambdaElement.product(S, [(0, 1), (0,)], Fraction(3, 2), g=1, b=1)
                 + LambdaElement.word(S, ["x1", "p1"], Fraction(1, 3)))
    assert parse_lambda(S, "0") == 0
    for bad in ("w[x1,q]", "2*g^1", "abc*w[x1]", "w[x1"):
        with pytest.raises(ValueError):
            parse_lambda(S, bad)


def test_closure_violations():
    S = darboux_odd_space(1)
    assert closure_violations(parse_lambda(S, "w[x1]")) == [(0, 0, ((0,),))]
    assert closure_violations(parse_lambda(S, "w[x1,p1] + n^1*w[x1]")) == []
