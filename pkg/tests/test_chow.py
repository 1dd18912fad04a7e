"""Chow decompositions: expansion, certificates, rank bounds, compilation."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from diffcomp.chow import (
    ChowDecomposition,
    chow_rank_non_overlapping,
    compile_functional,
    degree2_chow_lower_bound,
    exact_rank,
    expand,
    functional_product_decomposition,
    homogenize,
    is_totally_non_overlapping,
    pm_polynomial,
    pm_relabelling,
    pm_restriction_to_p2,
    symmetric_matrix_of,
    trivial_decomposition,
    verify,
)
from diffcomp.cyclotomic import CycloRational, root_of_unity
from diffcomp.engine import DifferentialComputer, run_functional
from diffcomp.errors import (
    FormatError,
    NotApplicableError,
    NotHomogeneousError,
)
from diffcomp.listings import (
    FunctionTable,
    all_function_tables,
    listing_constant_functions,
    listing_cyclic_group,
    listing_functional_graphs,
)
from diffcomp.multipoly import Monomial, MultiPoly

ZERO = CycloRational.zero()
ONE = CycloRational.one()


def x(v, n=None):
    return MultiPoly.variable(v, n)


def form(n, coeffs, const=0):
    """Entry row for a linear form given {var: coeff} plus a constant."""
    row = [ZERO] * (n + 1)
    for v, c in coeffs.items():
        row[v] = CycloRational.from_rational(c) if not isinstance(c, CycloRational) else c
    row[n] = CycloRational.from_rational(const)
    return tuple(row)


def test_shape_validation():
    with pytest.raises(ValueError):
        ChowDecomposition(1, 1, 1, ())  # no summands
    with pytest.raises(ValueError):
        ChowDecomposition(1, 2, 1, ((form(1, {0: 1}),),))  # one form, degree 2
    with pytest.raises(ValueError):
        ChowDecomposition(1, 1, 2, ((form(1, {0: 1}),),))  # short row
    c = ChowDecomposition(1, 1, 1, ((form(1, {0: 1}),),))
    assert c.is_homogeneous()


def test_expand_subset_product():
    # (1 + a0)(1 + a1) -> 1 + a0 + a1 + a0 a1
    c = ChowDecomposition(
        1, 2, 2, ((form(2, {0: 1}, const=1), form(2, {1: 1}, const=1)),)
    )
    got = expand(c)
    assert got == (1 + x(0, 2)) * (1 + x(1, 2))
    assert not c.is_homogeneous()


def test_expand_row_sum_product_is_functional_listing():
    c = functional_product_decomposition(2)
    assert expand(c) == listing_functional_graphs(2)
    assert c.rho == 1 and c.degree == 2 and c.nvars == 4


def test_expand_zero_hypermatrix():
    c = ChowDecomposition(2, 2, 3, tuple(
        (form(3, {}), form(3, {})) for _ in range(2)
    ))
    assert expand(c).is_zero()


def test_verify_accepts_and_rejects():
    target = listing_functional_graphs(3)
    cert = functional_product_decomposition(3)
    assert verify(cert, target)
    # corrupt one entry
    bad_entries = [list(map(list, summand)) for summand in cert.entries]
    bad_entries[0][1][2] = CycloRational.from_rational(5)
    bad = ChowDecomposition(
        cert.rho, cert.degree, cert.nvars,
        tuple(tuple(tuple(f) for f in s) for s in bad_entries),
    )
    assert not verify(bad, target)


def test_expand_scales_linearly_in_one_form():
    rng = random.Random(8)
    for _ in range(10):
        n = 3
        c = ChowDecomposition(
            2,
            2,
            n,
            tuple(
                tuple(
                    form(
                        n,
                        {v: rng.randint(-2, 2) for v in range(n)},
                        const=rng.randint(-1, 1),
                    )
                    for _ in range(2)
                )
                for _ in range(2)
            ),
        )
        lam = Fraction(rng.randint(2, 5))
        scaled_entries = [list(map(tuple, summand)) for summand in c.entries]
        scaled_entries[0][0] = tuple(
            e * CycloRational.from_rational(lam) for e in scaled_entries[0][0]
        )
        scaled = ChowDecomposition(
            2, 2, n, tuple(tuple(s) for s in scaled_entries)
        )
        # summand 0 scales by lambda, summand 1 unchanged
        s0 = ChowDecomposition(1, 2, n, (c.entries[0],))
        s1 = ChowDecomposition(1, 2, n, (c.entries[1],))
        assert expand(scaled) == lam * expand(s0) + expand(s1)


# -- homogenization -----------------------------------------------------------


def test_homogenize_fixed_point():
    c = functional_product_decomposition(2)
    assert homogenize(c, expand(c)) == c


def test_homogenize_hand_built_inhomogeneous():
    # a0 a1 = (1 + a0) a1 + (-1) a1 ... as two summands with constant slots
    target = x(0, 2) * x(1, 2)
    c = ChowDecomposition(
        2,
        2,
        2,
        (
            (form(2, {0: 1}, const=1), form(2, {1: 1})),
            (form(2, {}, const=-1), form(2, {1: 1})),
        ),
    )
    assert verify(c, target)
    h = homogenize(c, target)
    assert h.is_homogeneous()
    assert verify(h, target)


def test_homogenize_random_cancelling_paddings():
    rng = random.Random(42)
    for _ in range(30):
        n = rng.randint(2, 4)
        d = rng.randint(2, 3)
        rho = rng.randint(1, 3)
        # random homogeneous decomposition defines the target
        core = ChowDecomposition(
            rho,
            d,
            n,
            tuple(
                tuple(
                    form(n, {v: rng.randint(-2, 2) for v in range(n)})
                    for _ in range(d)
                )
                for _ in range(rho)
            ),
        )
        target = expand(core)
        if not target.is_homogeneous(d):
            continue
        # pad with cancelling inhomogeneous pairs: s and s with one form negated
        pad = tuple(
            form(n, {v: rng.randint(-2, 2) for v in range(n)}, const=rng.randint(-2, 2))
            for _ in range(d)
        )
        negated = (tuple(-e for e in pad[0]),) + pad[1:]
        padded = ChowDecomposition(
            rho + 2, d, n, core.entries + (pad, negated)
        )
        assert verify(padded, target)
        h = homogenize(padded, target)
        assert h.is_homogeneous()
        assert verify(h, target)


def test_homogenize_rejects_inhomogeneous_target():
    target = 1 + x(0, 1)
    c = ChowDecomposition(1, 1, 1, ((form(1, {0: 1}, const=1),),))
    with pytest.raises(NotHomogeneousError):
        homogenize(c, target)


def test_homogenize_rejects_non_verifying_decomposition():
    c = ChowDecomposition(1, 2, 2, ((form(2, {0: 1}), form(2, {1: 1})),))
    with pytest.raises(ValueError):
        homogenize(c, 2 * x(0, 2) * x(1, 2))


# -- the degree-2 bound ---------------------------------------------------------


def test_symmetric_matrix_examples():
    A = symmetric_matrix_of(x(0, 2) * x(1, 2))
    half = CycloRational.from_rational(Fraction(1, 2))
    assert A == [[ZERO, half], [half, ZERO]]
    sq = MultiPoly(1, {Monomial.make({0: 2}): 1})
    assert symmetric_matrix_of(sq) == [[ONE]]
    p = 2 * x(0, 4) * x(1, 4) + 3 * x(2, 4) * x(3, 4)
    A = symmetric_matrix_of(p)
    th = CycloRational.from_rational(Fraction(3, 2))
    assert A[0][1] == ONE and A[1][0] == ONE
    assert A[2][3] == th and A[3][2] == th
    assert A[0][2] == ZERO


def test_symmetric_matrix_rejects_wrong_degrees():
    with pytest.raises(NotHomogeneousError):
        symmetric_matrix_of(x(0, 1))
    with pytest.raises(NotHomogeneousError):
        symmetric_matrix_of(1 + x(0, 2) * x(1, 2))
    with pytest.raises(NotHomogeneousError):
        symmetric_matrix_of(MultiPoly(1, {Monomial.make({0: 3}): 1}))


def test_exact_rank_small_cases():
    one = ONE
    assert exact_rank([]) == 0
    assert exact_rank([[ZERO, ZERO], [ZERO, ZERO]]) == 0
    assert exact_rank([[one, one], [one, one]]) == 1
    assert exact_rank([[one, ZERO], [ZERO, one]]) == 2
    # rank needs column pivoting past a zero column
    assert exact_rank([[ZERO, one], [ZERO, ZERO]]) == 1


def test_exact_rank_matches_known_values_random():
    # build matrices of known rank r as products of random r-column factors
    rng = random.Random(6)
    for _ in range(20):
        n = rng.randint(2, 5)
        r = rng.randint(0, n)
        # generic rank-r: sum of r outer products; repeat until generic
        while True:
            u = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(r)]
            v = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(r)]
            M = [
                [
                    CycloRational.from_rational(
                        sum(u[k][i] * v[k][j] for k in range(r))
                    )
                    for j in range(n)
                ]
                for i in range(n)
            ]
            got = exact_rank(M)
            assert got <= r
            if got == r:
                break
    # cyclotomic entries too: [[1, w], [w, w^2]] has rank 1
    w = root_of_unity(5)
    assert exact_rank([[ONE, w], [w, w * w]]) == 1


def test_degree2_bound_examples():
    assert degree2_chow_lower_bound(x(0, 2) * x(1, 2)) == 1
    # triangle x0x1 + x0x2 + x1x2: symmetric matrix has rank 3 -> bound 2
    tri = x(0, 3) * x(1, 3) + x(0, 3) * x(2, 3) + x(1, 3) * x(2, 3)
    assert degree2_chow_lower_bound(tri) == 2
    for n in range(1, 6):
        assert degree2_chow_lower_bound(pm_polynomial(n, 2)) == n


# -- totally non-overlapping machinery -----------------------------------------


def test_is_totally_non_overlapping():
    assert is_totally_non_overlapping(listing_constant_functions(3))
    assert is_totally_non_overlapping(listing_cyclic_group(3))
    assert not is_totally_non_overlapping(listing_functional_graphs(2))
    assert is_totally_non_overlapping(MultiPoly.zero(2))
    with pytest.raises(ValueError):
        is_totally_non_overlapping(MultiPoly(1, {Monomial.make({0: 2}): 1}))


def test_pm_polynomial_shape():
    p = pm_polynomial(3, 3)
    assert p == (
        x(0, 9) * x(1, 9) * x(2, 9)
        + x(3, 9) * x(4, 9) * x(5, 9)
        + x(6, 9) * x(7, 9) * x(8, 9)
    )
    withcoeffs = pm_polynomial(2, 2, alphas=[2, rootish := Fraction(1, 3)])
    assert withcoeffs.coefficient(Monomial.of_vars([0, 1])) == CycloRational.from_rational(2)
    assert withcoeffs.coefficient(Monomial.of_vars([2, 3])) == CycloRational.from_rational(rootish)
    with pytest.raises(ValueError):
        pm_polynomial(2, 1)
    with pytest.raises(ValueError):
        pm_polynomial(2, 2, alphas=[1, 0])


def test_pm_relabelling_recovers_canonical_form():
    rng = random.Random(13)
    for _ in range(15):
        n = rng.randint(1, 4)
        m = rng.randint(2, 4)
        # scramble the canonical P_m through a random permutation of variables
        perm = list(range(m * n))
        rng.shuffle(perm)
        scrambled = pm_polynomial(n, m).restrict_and_relabel(
            relabel=dict(enumerate(perm)), nvars=m * n
        )
        witness = pm_relabelling(scrambled)
        back = scrambled.restrict_and_relabel(relabel=witness, nvars=m * n)
        # coefficients may land on different terms, but the support is canonical
        assert back.support_sets() == pm_polynomial(n, m).support_sets()


def test_pm_relabelling_rejections():
    with pytest.raises(NotApplicableError):
        pm_relabelling(listing_functional_graphs(2))  # overlapping
    mixed = x(0, 5) * x(1, 5) + x(2, 5) * x(3, 5) * x(4, 5)
    with pytest.raises(NotApplicableError):
        pm_relabelling(mixed)  # degrees differ
    with pytest.raises(NotApplicableError):
        pm_relabelling(x(0, 2) + x(1, 2))  # degree 1


def test_pm_restriction_reaches_p2():
    for n in range(1, 5):
        for m in (2, 3, 4):
            fixings, relabel, nvars = pm_restriction_to_p2(n, m)
            restricted = pm_polynomial(n, m).restrict_and_relabel(
                fixings, relabel, nvars
            )
            assert restricted == pm_polynomial(n, 2)
            assert degree2_chow_lower_bound(restricted) == n


def test_trivial_decomposition_round_trip():
    rng = random.Random(404)
    for _ in range(15):
        nvars = rng.randint(1, 4)
        terms = {}
        for _ in range(rng.randint(1, 4)):
            mono = Monomial.make(
                {v: rng.randint(0, 2) for v in range(nvars)}
            )
            terms[mono] = CycloRational.from_rational(rng.randint(-3, 3))
        p = MultiPoly(nvars, terms)
        if p.is_zero() or p.degree() < 1:
            continue
        c = trivial_decomposition(p)
        assert c.rho == len(p.terms)
        assert verify(c, p)


def test_trivial_decomposition_needs_degree_one():
    with pytest.raises(NotApplicableError):
        trivial_decomposition(MultiPoly.constant(3, 1))


def test_chow_rank_non_overlapping_examples():
    count, cert = chow_rank_non_overlapping(pm_polynomial(3, 3))
    assert count == 3
    assert verify(cert, pm_polynomial(3, 3))
    count, _ = chow_rank_non_overlapping(x(0, 2) * x(1, 2))
    assert count == 1
    count, cert = chow_rank_non_overlapping(listing_cyclic_group(4))
    assert count == 4
    assert verify(cert, listing_cyclic_group(4))


def test_chow_rank_non_overlapping_rejections():
    with pytest.raises(NotApplicableError):
        chow_rank_non_overlapping(listing_functional_graphs(2))
    with pytest.raises(NotApplicableError):
        chow_rank_non_overlapping(x(0, 2) + x(1, 2))  # degree-1 terms
    with pytest.raises(NotApplicableError):
        chow_rank_non_overlapping(MultiPoly.zero(2))


def test_sandwich_for_degree_two_non_overlapping():
    rng = random.Random(77)
    for _ in range(10):
        n = rng.randint(1, 5)
        alphas = [rng.choice([1, 2, -1, Fraction(1, 2)]) for _ in range(n)]
        p = pm_polynomial(n, 2, alphas)
        count, cert = chow_rank_non_overlapping(p)
        assert count == n == cert.rho
        assert degree2_chow_lower_bound(p) == n


# -- functional compilation -------------------------------------------------------


def test_compile_functional_constants():
    p = listing_constant_functions(2)
    _, cert = chow_rank_non_overlapping(p)
    X, scalar = compile_functional(cert, FunctionTable.constant(2, 0))
    assert scalar == ONE
    _, scalar_id = compile_functional(cert, FunctionTable.identity(2))
    assert scalar_id == ZERO


def test_compile_functional_product_form():
    cert = functional_product_decomposition(2)
    for g in all_function_tables(2):
        _, scalar = compile_functional(cert, g)
        assert scalar == ONE  # every g is functional


def test_compile_agrees_with_run_functional():
    for n in (1, 2, 3):
        for listing in (listing_constant_functions(n), listing_cyclic_group(n)):
            if n == 1:
                cert = trivial_decomposition(listing)
            else:
                _, cert = chow_rank_non_overlapping(listing)
            dc = DifferentialComputer(listing, n, 1, "functional")
            for g in all_function_tables(n):
                _, scalar = compile_functional(cert, g)
                bit = run_functional(dc, g).bit
                assert (not scalar.is_zero()) == (bit == 1)
                # stronger: the compiled scalar IS the pre-power scalar
                assert scalar == run_functional(dc, g).scalar


def test_compile_functional_rejections():
    cert = functional_product_decomposition(2)
    with pytest.raises(ValueError):
        compile_functional(cert, FunctionTable.constant(3, 0))  # degree mismatch
    inhomog = ChowDecomposition(
        1, 2, 4, ((form(4, {0: 1}, const=1), form(4, {2: 1})),)
    )
    with pytest.raises(NotHomogeneousError):
        compile_functional(inhomog, FunctionTable.constant(2, 0))
    # row misalignment: form 0 touching row-1 variables
    misaligned = ChowDecomposition(
        1, 2, 4, ((form(4, {2: 1}), form(4, {0: 1})),)
    )
    with pytest.raises(ValueError):
        compile_functional(misaligned, FunctionTable.constant(2, 0))


# -- serialization ------------------------------------------------------------------


def test_chow_text_round_trip():
    rng = random.Random(2020)
    for _ in range(10):
        rho, d, n = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 3)
        entries = tuple(
            tuple(
                tuple(
                    CycloRational.from_rational(
                        Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                    )
                    for _ in range(n + 1)
                )
                for _ in range(d)
            )
            for _ in range(rho)
        )
        c = ChowDecomposition(rho, d, n, entries)
        parsed, order = ChowDecomposition.from_text(c.to_text())
        assert parsed == c
        assert order >= 1


def test_chow_text_with_cyclotomic_entries():
    w = root_of_unity(3)
    c = ChowDecomposition(1, 1, 1, (((w, w * w),),))
    parsed, order = ChowDecomposition.from_text(c.to_text())
    assert parsed == c
    assert order == 3


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "1 1\n",
        "1 1 1 0\n1:[0] 1:[0]\n",
        "1 1 1 1\n1:[0]\n",  # short line
        "2 1 1 1\n1:[0] 1:[0]\n",  # missing lines
        "1 1 1 1\n1:[0] nope\n",
    ],
)
def test_chow_text_rejects_garbage(bad):
    with pytest.raises(FormatError):
        ChowDecomposition.from_text(bad)
