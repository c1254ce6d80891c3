from fractions import Fraction

import pytest

from quadlattice import families as fam
from quadlattice import pdeverify as pv
from quadlattice.exactfield import GaussianRational
from quadlattice.latticeops import SingularPointError

PTS2 = [(Fraction(8, 7), Fraction(16, 7)), (Fraction(15, 7), Fraction(23, 7))]
PTS3 = [(Fraction(8, 7), Fraction(16, 7), Fraction(9, 7)),
        (Fraction(15, 7), Fraction(23, 7), Fraction(12, 7))]


# -- table structure -----------------------------------------------------------

def test_mixed_index_validation():
    assert pv.validate_mixed_index((1, 2), 2) == (1, 2)
    with pytest.raises(ValueError):
        pv.validate_mixed_index((3, 0), 2)
    with pytest.raises(ValueError):
        pv.validate_mixed_index((1,), 2)


def test_coefficient_degree_and_dependence_pattern():
    for name in (fam.RACAH, fam.WILSON, fam.CDH, fam.CH, fam.CH_TRI):
        table = pv.coefficients(fam.FamilySpec(name))
        for fi, lind in zip(table.coeffs, table.lindices):
            assert fi.total_degree() <= sum(lind)
            for var, l in enumerate(lind):
                if l == 0:
                    assert not fi.depends_on(var)


def test_printed_coefficient_spot_values():
    rspec = fam.FamilySpec(fam.RACAH)
    p = rspec.params
    table = pv.coefficients(rspec)
    zero = (Fraction(0), Fraction(0))
    assert table.coeffs[7].eval(zero) == -p["N"] * (p["beta0"] - p["beta2"]) * (p["beta3"] + p["N"])
    assert table.coeffs[6].eval(zero) == -p["N"] * (p["beta0"] - p["beta1"]) * (p["beta3"] + p["N"])
    assert pv.coefficients(fam.FamilySpec(fam.CDH)).eigenvalue((2, 1)) == 3
    ch = fam.FamilySpec(fam.CH)
    q = ch.params
    assert pv.coefficients(ch).coeffs[3].eval(zero) == q["a1"] * q["b3"] + q["b1"] * q["a3"]
    tri = fam.FamilySpec(fam.CH_TRI)
    r = tri.params
    f7_at_origin = pv.coefficients(tri).coeffs[6].eval((Fraction(0),) * 3)
    expect = Fraction(1, 2) * (
        r["b4"] * r["a1"] + r["b1"] * r["a4"] + r["e2"] * r["a4"]
        + r["e3"] * r["a4"] + r["b4"] * r["e2"] + r["b4"] * r["e3"]
    )
    assert f7_at_origin == expect


def test_ch_printed_equal_coefficient_pairs_are_genuinely_equal():
    # f2 = f3 bivariate; f17 = f18 = f19 and f23 = f24 = f25 trivariate: the
    # printed tables show them identical and the residuals below confirm
    # those equalities are consistent, not typesetting collapse
    ch = pv.coefficients(fam.FamilySpec(fam.CH))
    assert (ch.coeffs[1] - ch.coeffs[2]).is_zero()
    tri = pv.coefficients(fam.FamilySpec(fam.CH_TRI))
    assert (tri.coeffs[16] - tri.coeffs[17]).is_zero()
    assert (tri.coeffs[17] - tri.coeffs[18]).is_zero()
    assert (tri.coeffs[22] - tri.coeffs[23]).is_zero()
    assert (tri.coeffs[23] - tri.coeffs[24]).is_zero()


# -- residuals ------------------------------------------------------------------

def test_fourth_order_residuals_vanish_spotwise():
    for name in (fam.RACAH, fam.WILSON, fam.CDH, fam.CH):
        spec = fam.FamilySpec(name)
        table = pv.coefficients(spec)
        for label in [(0, 0), (1, 1), (2, 1)]:
            for pt in PTS2:
                assert pv.residual(table, spec, label, pt) == 0


def test_bar_families_solve_the_same_equation():
    for base, bar in ((fam.RACAH, fam.RACAH_BAR), (fam.WILSON, fam.WILSON_BAR),
                      (fam.CH, fam.CH_BAR)):
        table = pv.coefficients(fam.FamilySpec(base))
        spec = fam.FamilySpec(bar)
        for label in [(1, 1), (2, 1)]:
            for pt in PTS2:
                assert pv.residual(table, spec, label, pt) == 0


def test_residuals_vanish_at_a_second_parameter_set():
    # guards the tables against typos that would cancel only at the fixtures
    alt = {
        fam.RACAH: {"beta0": Fraction(2, 7), "beta1": Fraction(5, 4),
                    "beta2": Fraction(10, 3), "beta3": Fraction(21, 4), "N": Fraction(23, 3)},
        fam.WILSON: {"a": Fraction(3, 7), "b": Fraction(5, 8), "c": Fraction(9, 7),
                     "d": Fraction(13, 11), "e2": Fraction(3, 8)},
        fam.CDH: {"a": Fraction(3, 7), "b": Fraction(5, 8), "c": Fraction(9, 7),
                  "e2": Fraction(3, 8)},
        fam.CH: {"a1": Fraction(2, 5), "e2": Fraction(3, 11), "a3": Fraction(5, 7),
                 "b1": Fraction(7, 9), "b3": Fraction(5, 13)},
        fam.CH_TRI: {"a1": Fraction(2, 5), "e2": Fraction(3, 11), "b1": Fraction(7, 9),
                     "e3": Fraction(4, 7), "a4": Fraction(2, 9), "b4": Fraction(6, 13)},
    }
    for name, params in alt.items():
        spec = fam.FamilySpec(name, params=params)
        table = pv.coefficients(spec)
        pts = PTS3 if spec.nvars == 3 else PTS2
        labels = [(1, 1, 0), (1, 0, 1)] if spec.nvars == 3 else [(1, 1), (2, 1)]
        for label in labels:
            for pt in pts:
                assert pv.residual(table, spec, label, pt) == 0, (name, label, pt)


def test_zero_label_residual_trivial():
    spec = fam.FamilySpec(fam.RACAH)
    table = pv.coefficients(spec)
    assert table.eigenvalue((0, 0)) == 0
    assert pv.residual(table, spec, (0, 0), PTS2[0]) == 0


def test_trivariate_residual_spotwise():
    spec = fam.FamilySpec(fam.CH_TRI)
    for label in [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 0, 0)]:
        for pt in PTS3:
            assert pv.trivariate_residual(spec, label, pt) == 0
    with pytest.raises(ValueError):
        pv.trivariate_residual(fam.FamilySpec(fam.CH), (1, 1), PTS2[0])


def test_mixed_operator_commutativity_spot_check():
    # x-then-y equals y-then-x for the cross term
    spec = fam.FamilySpec(fam.RACAH)
    lattices = spec.lattices()
    f = fam.family_function(spec, (2, 1))
    for pt in PTS2:
        w_xy = pv.stencil_weights(lattices, (1, 1), pt)
        # apply in the opposite order by transposing the lattice/variable roles
        g = lambda q: f((q[1], q[0]))
        swapped = (lattices[1], lattices[0])
        w_yx = pv.stencil_weights(swapped, (1, 1), (pt[1], pt[0]))
        val_xy = sum(w * f(q) for q, w in w_xy.items())
        val_yx = sum(w * g(q) for q, w in w_yx.items())
        assert val_xy == val_yx


def test_residual_raises_on_singular_point():
    spec = fam.FamilySpec(fam.RACAH)
    table = pv.coefficients(spec)
    bad_s = -spec.params["beta1"] / 2
    with pytest.raises(SingularPointError):
        pv.residual(table, spec, (1, 1), (bad_s, Fraction(16, 7)))


# -- derived tables --------------------------------------------------------------

def test_derived_tables_annihilate_derivatives():
    spec = fam.FamilySpec(fam.RACAH)
    base = pv.coefficients(spec)
    for direction in ("x", "y", "xy"):
        table = pv.derived_coefficients(base, direction)
        for label in [(1, 1), (2, 1)]:
            dfun = pv.derivative_function(spec, label, direction)
            for pt in PTS2:
                assert pv.table_residual_on(table, dfun, label, pt) == 0


def test_derived_tables_equal_parameter_shifted_tables():
    spec = fam.FamilySpec(fam.RACAH)
    base = pv.coefficients(spec)
    b1, b2 = spec.params["beta1"], spec.params["beta2"]
    dx = pv.derived_coefficients(base, "x")
    shifted = pv.coefficients(spec.shifted(beta1=1, beta2=2, beta3=2, N=-1))
    for i in range(8):
        expect = shifted.coeffs[i].shift_var(0, -(2 * b1 + 1) / 4).shift_var(1, -(b2 + 1))
        assert (dx.coeffs[i] - expect).is_zero()
    dy = pv.derived_coefficients(base, "y")
    shifted2 = pv.coefficients(spec.shifted(beta2=1, beta3=2, N=-1))
    for i in range(8):
        expect = shifted2.coeffs[i].shift_var(1, -(2 * b2 + 1) / 4)
        assert (dy.coeffs[i] - expect).is_zero()


def test_wilson_derived_tables_are_pure_parameter_shifts():
    spec = fam.FamilySpec(fam.WILSON)
    base = pv.coefficients(spec)
    half = Fraction(1, 2)
    dx = pv.derived_coefficients(base, "x")
    for i, fi in enumerate(pv.coefficients(spec.shifted(a=half, b=half, e2=half)).coeffs):
        assert (dx.coeffs[i] - fi).is_zero()
    dy = pv.derived_coefficients(base, "y")
    for i, fi in enumerate(pv.coefficients(spec.shifted(c=half, d=half, e2=half)).coeffs):
        assert (dy.coeffs[i] - fi).is_zero()


def test_eigenvalue_shift_laws():
    spec = fam.FamilySpec(fam.RACAH)
    base = pv.coefficients(spec)
    b0, b3 = spec.params["beta0"], spec.params["beta3"]
    dx = pv.derived_coefficients(base, "x")
    dy = pv.derived_coefficients(base, "y")
    dxy = pv.derived_coefficients(base, "xy")
    n, m = 2, 1
    assert dx.eigenvalue((n, m)) - base.eigenvalue((n, m)) == pv.eigenvalue_shift(base, "x")
    assert dy.eigenvalue((n, m)) - base.eigenvalue((n, m)) == pv.eigenvalue_shift(base, "y")
    assert dx.eigenvalue((n, m)) == (m + n - 1) * (b3 - b0 + m + n)
    assert dxy.eigenvalue((n, m)) == (m + n - 2) * (b3 - b0 + m + n + 1)
    assert pv.eigenvalue_shift(base, "x") == b0 - b3


def test_f_i3_two_derivation_routes_agree():
    base = pv.coefficients(fam.FamilySpec(fam.RACAH))
    via_y_then_x = pv.derived_coefficients(base, "xy")
    via_x_then_y = pv.derived_coefficients(pv.derived_coefficients(base, "x"), "y")
    for i in range(8):
        assert (via_y_then_x.coeffs[i] - via_x_then_y.coeffs[i]).is_zero()


# -- second-order equations --------------------------------------------------------

def test_second_order_residuals():
    cases = (
        ("racah-x", fam.RACAH),
        ("wilson-x", fam.WILSON),
        ("wilson-bar-y", fam.WILSON_BAR),
        ("cdh-x", fam.CDH),
    )
    for kind, name in cases:
        spec = fam.FamilySpec(name)
        for label in [(1, 0), (1, 1), (2, 1)]:
            for pt in PTS2:
                assert pv.second_order_residual(kind, spec, label, pt) == 0


def test_second_order_zero_degree_is_trivial():
    spec = fam.FamilySpec(fam.RACAH)
    for m in (0, 1, 2):
        assert pv.second_order_residual("racah-x", spec, (0, m), PTS2[0]) == 0


def test_second_order_wrong_family_rejected():
    with pytest.raises(ValueError):
        pv.second_order_residual("racah-x", fam.FamilySpec(fam.WILSON), (1, 0), PTS2[0])


# -- difference (stencil) forms ------------------------------------------------------

def test_difference_forms_vanish():
    cases = (("racah-gi", fam.RACAH), ("wilson-f", fam.WILSON), ("ch-f", fam.CH))
    for kind, name in cases:
        spec = fam.FamilySpec(name)
        for label in [(1, 0), (1, 1), (2, 1)]:
            for pt in PTS2:
                assert pv.difference_form_residual(kind, spec, label, pt) == 0


def test_printed_stencils_match_operator_expansion():
    # the printed nine-term coefficients agree with the stencil weights
    # produced by expanding the divided-difference operators directly
    for name, builder in ((fam.WILSON, pv.wilson_f_stencil), (fam.CH, pv.ch_f_stencil)):
        spec = fam.FamilySpec(name)
        table = pv.coefficients(spec)
        label = (1, 1)
        for pt in PTS2:
            printed = builder(spec.params, label, *pt)
            derived = {}
            latpt = table.lattice_point(pt)
            lam = table.eigenvalue(label)
            for fi, lind in zip(table.coeffs, table.lindices):
                ci = fi.eval(latpt)
                if not ci:
                    continue
                for q, w in pv.stencil_weights(table.lattices, lind, pt).items():
                    off = tuple(
                        int((qv - pv_).im if isinstance(qv - pv_, GaussianRational) else qv - pv_)
                        for qv, pv_ in zip(q, (Fraction(p) for p in pt))
                    )
                    derived[off] = derived.get(off, 0) + ci * w
            derived[(0, 0)] = derived.get((0, 0), 0) + lam
            for off, val in printed.items():
                assert derived.get(off, Fraction(0)) == val, (name, off)


def test_gi_form_applies_to_second_family_too():
    spec = fam.FamilySpec(fam.RACAH_BAR)
    for pt in PTS2:
        assert pv.difference_form_residual("racah-gi", spec, (1, 1), pt) == 0


def test_difference_form_singular_point_error():
    spec = fam.FamilySpec(fam.RACAH)
    bad_s = -spec.params["beta1"] / 2
    with pytest.raises(SingularPointError):
        pv.difference_form_residual("racah-gi", spec, (1, 1), (bad_s, Fraction(16, 7)))
    with pytest.raises(SingularPointError):
        pv.difference_form_residual("wilson-f", fam.FamilySpec(fam.WILSON), (1, 1), (Fraction(0), Fraction(1)))


# -- coefficient recovery -------------------------------------------------------------

def test_recovered_table_matches_printed_table():
    spec = fam.FamilySpec(fam.RACAH)
    recovered, eig = pv.recover_coefficients(spec.params, label=(1, 1))
    printed = pv.coefficients(spec)
    assert pv.compare_tables(recovered, printed) == []
    assert eig == 2 * (spec.params["beta3"] - spec.params["beta0"] + 1)
    # the recovered f7 as a polynomial
    p = spec.params
    f7 = recovered.coeffs[6]
    assert f7.coeff((1, 0)) == p["beta0"] - p["beta3"]
    assert f7.coeff((0, 0)) == -p["N"] * (p["beta0"] - p["beta1"]) * (p["beta3"] + p["N"])
    # closing the loop: the recovered table annihilates R_{2,2}
    for pt in PTS2:
        assert pv.residual(recovered, spec, (2, 2), pt) == 0


def test_coefficient_table_json():
    table = pv.coefficients(fam.FamilySpec(fam.CDH))
    blob = table.to_json()
    assert blob["order"] == "fourth"
    assert set(blob["coefficients"]) == {f"f{i}" for i in range(1, 9)}
    assert blob["operators"][0] == [2, 2]
