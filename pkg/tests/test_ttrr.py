import random
from fractions import Fraction

import pytest

from quadlattice import families as fam
from quadlattice import ttrr
from quadlattice.exactfield import GaussianRational
from quadlattice.fbasis import MPoly, h_closed_1
from quadlattice.matrix import ExactMatrix, exact_inverse, solve_stacked
from quadlattice.pdeverify import coefficients

PTS2 = [(Fraction(8, 7), Fraction(16, 7)), (Fraction(15, 7), Fraction(23, 7))]


# -- exact matrices ---------------------------------------------------------------

def test_exact_inverse_examples():
    assert exact_inverse(ExactMatrix.identity(3)) == ExactMatrix.identity(3)
    d = ExactMatrix.diagonal([Fraction(2), Fraction(3)])
    assert exact_inverse(d) == ExactMatrix.diagonal([Fraction(1, 2), Fraction(1, 3)])
    rng = random.Random(61)
    m = ExactMatrix(
        [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)] for _ in range(4)]
    )
    assert m * exact_inverse(m) == ExactMatrix.identity(4)


def test_exact_inverse_singular_names_pivot():
    singular = ExactMatrix([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]])
    with pytest.raises(ValueError, match="column 1"):
        exact_inverse(singular)


def test_solve_stacked_detects_inconsistency():
    a = ExactMatrix([[Fraction(1)], [Fraction(1)]])
    assert solve_stacked(a, [Fraction(3), Fraction(3)]) == [Fraction(3)]
    with pytest.raises(ValueError):
        solve_stacked(a, [Fraction(3), Fraction(4)])


def test_gaussian_matrix_inverse():
    i = GaussianRational(0, 1)
    m = ExactMatrix([[i, 1], [0, i]])
    inv = exact_inverse(m)
    assert m * inv == ExactMatrix.identity(2)


# -- S_n / T_n ---------------------------------------------------------------------

ALT_PARAMS = {
    fam.RACAH: {"beta0": Fraction(2, 7), "beta1": Fraction(5, 4), "beta2": Fraction(10, 3),
                "beta3": Fraction(21, 4), "N": Fraction(23, 3)},
    fam.WILSON: {"a": Fraction(3, 7), "b": Fraction(5, 8), "c": Fraction(9, 7),
                 "d": Fraction(13, 11), "e2": Fraction(3, 8)},
    fam.CDH: {"a": Fraction(3, 7), "b": Fraction(5, 8), "c": Fraction(9, 7), "e2": Fraction(3, 8)},
    fam.CH: {"a1": Fraction(2, 5), "e2": Fraction(3, 11), "a3": Fraction(5, 7),
             "b1": Fraction(7, 9), "b3": Fraction(5, 13)},
}


def test_printed_st_match_derivation_route():
    # the cross-validation that arbitrates the long printed closed forms,
    # run at two unrelated generic parameter sets
    for name in ttrr.TTRR_FAMILIES:
        for params in (None, ALT_PARAMS[ttrr._st_key(name)]):
            spec = fam.FamilySpec(name, params=params)
            for n in range(1, 5):
                sd, td = ttrr.sn_tn_derived(spec, n)
                sp, tp = ttrr.sn_tn(name, spec.params, n)
                assert sd == sp, (name, n)
                if n >= 2:
                    assert td == tp, (name, n)


def test_st_shapes_and_band_patterns():
    spec = fam.FamilySpec(fam.RACAH)
    s3, t3 = ttrr.sn_tn(fam.RACAH, spec.params, 3)
    assert (s3.rows, s3.cols) == (4, 3)
    assert (t3.rows, t3.cols) == (4, 2)
    for i in range(4):
        for j in range(3):
            if j not in (i, i - 1):
                assert s3.data[i][j] == 0
    for i in range(4):
        for j in range(2):
            if j not in (i, i - 1, i - 2):
                assert t3.data[i][j] == 0


def test_ch_s21_entry_is_half_i_times_bracket():
    spec = fam.FamilySpec(fam.CH)
    p = spec.params
    s1, _ = ttrr.sn_tn(fam.CH, spec.params, 1)
    k, n = 1, 1
    bracket = (
        p["a3"] * (-2 * p["b1"] - 2 * p["e2"] + k - 2 * n + 1)
        + p["a1"] * (2 * p["b3"] + k - 1)
        + 2 * p["b3"] * p["e2"]
        - p["b1"] * k
        - p["b3"] * k
        + 2 * p["b3"] * n
        + p["b1"]
        - p["b3"]
    )
    assert s1.data[1][0] == GaussianRational(0, Fraction(1, 2)) * k * bracket


def test_racah_s11_at_n1_matches_printed_formula():
    spec = fam.FamilySpec(fam.RACAH)
    s1, _ = ttrr.sn_tn(fam.RACAH, spec.params, 1)
    derived = ttrr.sn_tn_derived(spec, 1)[0]
    assert s1.data[0][0] == derived.data[0][0]


# -- G' and G chains ------------------------------------------------------------------

def test_g_primes_n1_and_z_scalar():
    spec = fam.FamilySpec(fam.RACAH)
    table = coefficients(spec)
    lam = lambda k: table.eigenvalue((k, 0))
    s1 = ttrr.sn_tn_derived(spec, 1)[0]
    g1, g2 = ttrr.g_primes(ExactMatrix.identity(2), spec, 1, table=table)
    assert g2 is None
    assert g1 == s1.scale(1 / (lam(0) - lam(1)))
    # Z_2(lambda_0) for the default Racah parameters is (53/5) I_3
    assert lam(2) - lam(0) == Fraction(53, 5)


def test_eigenvalue_collision_rejected():
    # beta3 - beta0 = -2 collides lambda_2 with lambda_1
    bad = fam.FamilySpec(
        fam.RACAH,
        params={"beta0": Fraction(1, 5), "beta3": Fraction(1, 5) - 2},
    )
    with pytest.raises(fam.DegenerateParameterError):
        ttrr.g_primes(ExactMatrix.identity(3), bad, 2)


def test_g_corrections_use_u_matrices():
    spec = fam.FamilySpec(fam.RACAH)
    table = coefficients(spec)
    gnn = ExactMatrix.identity(3)
    gp1, gp2 = ttrr.g_primes(gnn, spec, 2, table=table)
    gn1, gn2 = ttrr.g_corrections(gnn, gp1, gp2, spec, 2, table=table)
    # top-left of U_{2,1} is H^(1)_{2,1}
    b1 = spec.params["beta1"]
    assert gn1.data[0][0] - gp1.data[0][0] == h_closed_1(2, b1)
    # n = 1 has no G_{n,n-2} path
    gp1_only, _ = ttrr.g_primes(ExactMatrix.identity(2), spec, 1, table=table)
    gn1_only, gn2_only = ttrr.g_corrections(
        ExactMatrix.identity(2), gp1_only, None, spec, 1, table=table
    )
    assert gn2_only is None


def test_wilson_chain_has_no_u_corrections():
    # monomial working basis: U matrices vanish, so G == G'
    spec = fam.FamilySpec(fam.WILSON)
    table = coefficients(spec)
    gnn = ExactMatrix.identity(3)
    gp1, gp2 = ttrr.g_primes(gnn, spec, 2, table=table)
    gn1, gn2 = ttrr.g_corrections(gnn, gp1, gp2, spec, 2, table=table)
    assert gn1 == gp1 and gn2 == gp2


# -- A/B/C matrices and generation ------------------------------------------------------

def test_monic_abc_shapes_and_l_selection():
    spec = fam.FamilySpec(fam.RACAH)
    chain = ttrr.GChain(spec, 4, leading="monic")
    for n in range(3):
        for j in (1, 2):
            a, b, c = ttrr.abc_matrices(chain, n, j)
            assert (a.rows, a.cols) == (n + 1, n + 2)
            assert (b.rows, b.cols) == (n + 1, n + 1)
            assert a == ttrr.l_matrix(n, j)  # monic case: A_{n,j} = L_{n,j}
            if n >= 1:
                assert (c.rows, c.cols) == (n + 1, n)
    # B_{0,j} = -A_{0,j} G_{1,0} G_{0,0}^{-1}
    a0, b0, _ = ttrr.abc_matrices(chain, 0, 1)
    expect = (a0 * chain.g(1, 0)).scale(-1) * exact_inverse(chain.g(0, 0))
    assert b0 == expect


def test_rank_conditions_at_default_parameters():
    for name in (fam.RACAH, fam.WILSON, fam.CH):
        spec = fam.FamilySpec(name)
        chain = ttrr.GChain(spec, 3, leading="family")
        for n in range(2):
            a1, _, c1 = ttrr.abc_matrices(chain, n, 1)
            a2, _, c2 = ttrr.abc_matrices(chain, n, 2)
            assert a1.rank() == n + 1 and a2.rank() == n + 1
            assert a1.vstack(a2).rank() == n + 2
            if c1 is not None:
                assert c1.rank() == n and c2.rank() == n
                assert c1.hstack(c2).rank() == n + 1


def test_monic_generation_unit_leading():
    for name in ttrr.TTRR_FAMILIES:
        spec = fam.FamilySpec(name)
        vectors = ttrr.generate(spec, 3, leading="monic")
        assert vectors[0].entries == [MPoly.const(2, Fraction(1))]
        for n, vec in enumerate(vectors):
            for k, p in enumerate(vec.entries):
                assert p.coeff((n - k, k)) == 1
                for c in range(n + 1):
                    if c != k:
                        assert p.coeff((n - c, c)) == 0


def test_family_generation_matches_hypergeometric_construction():
    for name in (fam.RACAH, fam.WILSON_BAR, fam.CH):
        spec = fam.FamilySpec(name)
        vectors = ttrr.generate(spec, 3, leading="family")
        for n in range(4):
            oracle = ttrr.family_poly_vector(spec, n)
            for k in range(n + 1):
                assert (vectors[n][k] - oracle[k]).is_zero(), (name, n, k)


def test_recurrence_is_an_exact_polynomial_identity():
    spec = fam.FamilySpec(fam.RACAH)
    chain = ttrr.GChain(spec, 4, leading="family")
    vectors = ttrr.generate(spec, 4, leading="family")
    xvar = MPoly.var(0, 2)
    yvar = MPoly.var(1, 2)
    for n in range(1, 4):
        for j, var in ((1, xvar), (2, yvar)):
            a, b, c = ttrr.abc_matrices(chain, n, j)
            lhs = [var * p for p in vectors[n].entries]
            rhs = a.apply_rows(vectors[n + 1].entries)
            rhs = [r + s for r, s in zip(rhs, b.apply_rows(vectors[n].entries))]
            rhs = [r + s for r, s in zip(rhs, c.apply_rows(vectors[n - 1].entries))]
            for l, r in zip(lhs, rhs):
                assert (l - r).is_zero()


def test_monic_family_relation_p_equals_gnn_phat():
    # P_n = G_{n,n} Phat_n for the Racah family
    spec = fam.FamilySpec(fam.RACAH)
    monic = ttrr.generate(spec, 3, leading="monic")
    for n in range(4):
        gnn = ttrr.leading_matrix(fam.RACAH, spec.params, n)
        oracle = ttrr.family_poly_vector(spec, n)
        combined = gnn.apply_rows(monic[n].entries)
        for k in range(n + 1):
            assert (combined[k] - oracle[k]).is_zero()


# -- leading matrices ----------------------------------------------------------------

def test_leading_matrices_match_interpolation_oracle():
    for name in ttrr.TTRR_FAMILIES:
        for params in (None, ALT_PARAMS[ttrr._st_key(name)]):
            spec = fam.FamilySpec(name, params=params)
            for n in range(4):
                closed = ttrr.leading_matrix(name, spec.params, n)
                assert closed == ttrr.leading_matrix_oracle(spec, n), (name, n)


def test_leading_matrix_base_and_triangularity():
    spec = fam.FamilySpec(fam.RACAH)
    assert ttrr.leading_matrix(fam.RACAH, spec.params, 0) == ExactMatrix.identity(1).scale(
        Fraction(1)
    )
    # first families carry their weight above the diagonal, second families
    # below, matching the factor structure of the products
    n = 3
    g = ttrr.leading_matrix(fam.RACAH, spec.params, n)
    gbar = ttrr.leading_matrix(fam.RACAH_BAR, spec.params, n)
    for i in range(n + 1):
        for j in range(n + 1):
            if j < i:
                assert g.data[i][j] == 0
            if j > i:
                assert gbar.data[i][j] == 0
    cdh = ttrr.leading_matrix(fam.CDH, fam.FamilySpec(fam.CDH).params, 2)
    assert cdh.data[0] == [1, -2, 1]  # signed binomials (-1)^(n-r-s) C(n-r, s-r)
    assert cdh.data[1] == [0, 1, -1]
    assert cdh.data[2] == [0, 0, 1]


# -- connection problem ---------------------------------------------------------------

def test_connection_identity_and_pointwise_mapping():
    rspec = fam.FamilySpec(fam.RACAH)
    bspec = fam.FamilySpec(fam.RACAH_BAR)
    for n in range(4):
        g = ttrr.leading_matrix(fam.RACAH, rspec.params, n)
        gbar = ttrr.leading_matrix(fam.RACAH_BAR, rspec.params, n)
        c = ttrr.connection(g, gbar)
        cback = ttrr.connection(gbar, g)
        assert c * cback == ExactMatrix.identity(n + 1)
        for pt in PTS2:
            pvals = [fam.eval_family(rspec, (n - k, k), pt) for k in range(n + 1)]
            bvals = [fam.eval_family(bspec, (n - k, k), pt) for k in range(n + 1)]
            assert c.apply_rows(bvals) == pvals


def test_connection_same_matrix_is_identity():
    g = ttrr.leading_matrix(fam.RACAH, fam.FamilySpec(fam.RACAH).params, 2)
    assert ttrr.connection(g, g) == ExactMatrix.identity(3)
