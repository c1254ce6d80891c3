import random
from fractions import Fraction

import pytest

from quadlattice import families as fam
from quadlattice import latticeops as lo
from quadlattice.exactfield import GaussianRational, demote, gauss, imag_part
from quadlattice.fbasis import interpolate_univariate

RACAH_ARGS = (Fraction(1, 5), Fraction(2, 3), Fraction(7, 3), Fraction(9, 2))
PTS2 = [(Fraction(8, 7), Fraction(16, 7)), (Fraction(15, 7), Fraction(23, 7)),
        (Fraction(22, 7), Fraction(30, 11))]


def rnd_fraction(rng, lo_=-6, hi=6, den=9):
    return Fraction(rng.randint(lo_, hi), rng.randint(1, den))


# -- univariate factors ------------------------------------------------------

def test_racah_uni_zero_order_and_oracle():
    a, b, g, d = RACAH_ARGS
    assert fam.racah_uni(0, a, b, g, d, Fraction(8, 7)) == 1
    rng = random.Random(41)
    for _ in range(6):
        n = rng.randint(1, 4)
        args = tuple(rnd_fraction(rng) for _ in range(4))
        s = rnd_fraction(rng, 1, 9, 7)
        try:
            primary = fam.racah_uni(n, *args, s)
        except fam.DegenerateParameterError:
            continue
        assert primary == fam.racah_uni_oracle(n, *args, s)


def test_racah_uni_degrees_by_interpolation():
    a, b, g, d = RACAH_ARGS
    n = 3
    # degree 2n in s
    pts = [Fraction(k, 7) + 3 for k in range(2 * n + 2)]
    vals = [fam.racah_uni(n, a, b, g, d, s) for s in pts]
    coeffs = interpolate_univariate(pts, vals)
    assert coeffs[2 * n] != 0
    # degree n in the lattice s(s + g + d + 1)
    spec = lo.quadratic(g + d + 1)
    pts = lo.grid_points(spec, n + 2)
    xs = [lo.lattice_value(spec, s) for s in pts]
    coeffs = interpolate_univariate(xs, [fam.racah_uni(n, a, b, g, d, s) for s in pts])
    assert coeffs[n] != 0 and all(c == 0 for c in coeffs[n + 1:])


def test_wilson_cdh_ch_oracles_and_base_cases():
    rng = random.Random(43)
    x = Fraction(8, 7)
    e2 = Fraction(2, 5)
    iy = GaussianRational(0, 1) * gauss(Fraction(9, 7))
    assert fam.wilson_uni(0, Fraction(1, 2), Fraction(3, 4), Fraction(5, 4), Fraction(7, 6), x) == 1
    assert fam.cdh_uni(0, Fraction(1, 2), Fraction(3, 4), Fraction(5, 4), x) == 1
    assert fam.ch_uni(0, Fraction(1, 3), Fraction(5, 6), Fraction(4, 9), Fraction(3, 5), x) == 1
    for _ in range(5):
        n = rng.randint(1, 4)
        a, b = rnd_fraction(rng, 1, 5), rnd_fraction(rng, 1, 5)
        c, d = gauss(e2) + iy, gauss(e2) - iy
        assert fam.wilson_uni(n, a, b, c, d, x) == fam.wilson_uni_oracle(n, a, b, c, d, x)
        assert fam.cdh_uni(n, a, c, d, x) == fam.cdh_uni_oracle(n, a, c, d, x)
        assert fam.ch_uni(n, a, b, c, d, x) == fam.ch_uni_oracle(n, a, b, c, d, x)


def test_wilson_even_in_x():
    args = (Fraction(1, 2), Fraction(3, 4), Fraction(5, 4), Fraction(7, 6))
    for n in (1, 2, 3):
        assert fam.wilson_uni(n, *args, Fraction(8, 7)) == fam.wilson_uni(n, *args, -Fraction(8, 7))


def test_h1_value_from_oracle():
    # explicit spec-style cross-check of a degree-one continuous Hahn value
    a, b, c, d, x = Fraction(1, 3), Fraction(5, 6), Fraction(4, 9), Fraction(3, 5), Fraction(8, 7)
    assert fam.ch_uni(1, a, b, c, d, x) == fam.ch_uni_oracle(1, a, b, c, d, x)
    sigma = a + b + c + d
    expect = GaussianRational(0, 1) * (
        gauss((a + b) * (a + d)) - sigma * (gauss(a) + GaussianRational(0, 1) * x)
    )
    assert fam.ch_uni(1, a, b, c, d, x) == demote(expect)


def test_degenerate_parameters_raise():
    with pytest.raises(fam.DegenerateParameterError):
        fam.racah_uni(3, Fraction(-2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(8, 7))
    with pytest.raises(fam.DegenerateParameterError):
        fam.wilson_uni(2, Fraction(1), Fraction(-1), Fraction(2), Fraction(2), Fraction(8, 7))
    with pytest.raises(fam.DegenerateParameterError):
        fam.hyper_series_oracle([Fraction(-3)], [Fraction(-1)], 4)


# -- bivariate / trivariate evaluation ---------------------------------------

def test_all_families_are_one_at_zero_label():
    for name in fam.ALL_FAMILIES:
        spec = fam.FamilySpec(name)
        pt = (Fraction(8, 7),) * spec.nvars
        assert fam.eval_family(spec, (0,) * spec.nvars, pt) == 1


def test_eval_agrees_with_univariate_oracles():
    rng = random.Random(47)
    spec = fam.FamilySpec(fam.RACAH)
    p = spec.params
    for _ in range(5):
        n, m = rng.randint(0, 2), rng.randint(0, 2)
        s, t = rnd_fraction(rng, 1, 9, 7), rnd_fraction(rng, 1, 9, 7)
        direct = fam.racah_uni_oracle(
            n, p["beta1"] - p["beta0"] - 1, p["beta2"] - p["beta1"] - 1, -t - 1, p["beta1"] + t, s
        ) * fam.racah_uni_oracle(
            m, 2 * n + p["beta2"] - p["beta0"] - 1, p["beta3"] - p["beta2"] - 1,
            n - p["N"] - 1, n + p["beta2"] + p["N"], t - n,
        )
        assert fam.eval_family(spec, (n, m), (s, t)) == direct


def test_every_family_agrees_with_brute_force_oracle():
    rng = random.Random(59)
    for name in fam.ALL_FAMILIES:
        spec = fam.FamilySpec(name)
        checked = 0
        while checked < 5:
            label = tuple(rng.randint(0, 2) for _ in range(spec.nvars))
            point = tuple(rnd_fraction(rng, 1, 9, 7) for _ in range(spec.nvars))
            primary = fam.eval_family(spec, label, point)
            oracle = fam.eval_family_oracle(spec, label, point)
            assert primary == oracle, (name, label, point)
            checked += 1


def test_bivariate_total_degree_by_interpolation():
    spec = fam.FamilySpec(fam.RACAH)
    lx, ly = spec.lattices()
    n, m = 2, 1
    svals = lo.grid_points(lx, n + m + 2)
    tvals = lo.grid_points(ly, n + m + 2, origin=2)
    from quadlattice.fbasis import interpolate_bivariate

    xn = [lo.lattice_value(lx, s) for s in svals]
    yn = [lo.lattice_value(ly, t) for t in tvals]
    poly = interpolate_bivariate(
        xn, yn, lambda i, j: fam.eval_family(spec, (n, m), (svals[i], tvals[j]))
    )
    assert poly.total_degree() == n + m


def test_realness_asserted_for_wilson_and_cdh():
    for name in (fam.WILSON, fam.WILSON_BAR, fam.CDH):
        spec = fam.FamilySpec(name)
        val = fam.eval_family(spec, (2, 1), (Fraction(8, 7), Fraction(9, 7)))
        assert not isinstance(val, GaussianRational)


def test_ch_values_are_gaussian_in_general():
    spec = fam.FamilySpec(fam.CH)
    val = fam.eval_family(spec, (1, 0), (Fraction(8, 7), Fraction(9, 7)))
    assert imag_part(val) != 0


def test_label_and_point_arity_errors():
    spec = fam.FamilySpec(fam.RACAH)
    with pytest.raises(ValueError):
        fam.eval_family(spec, (1, 1, 1), (Fraction(1), Fraction(2)))
    with pytest.raises(ValueError):
        fam.eval_family(spec, (1, 1), (Fraction(1),))
    with pytest.raises(ValueError):
        fam.eval_family(spec, (-1, 0), (Fraction(1), Fraction(2)))
    with pytest.raises(ValueError):
        fam.FamilySpec("no-such-family")
    with pytest.raises(ValueError):
        fam.FamilySpec(fam.RACAH, params={"zeta": Fraction(1)})


# -- derivative ladders -------------------------------------------------------

def test_all_printed_ladders_vanish():
    for name in fam.LADDER_DIRECTION:
        spec = fam.FamilySpec(name)
        for label in [(1, 0), (0, 1), (1, 1), (2, 1)]:
            for pt in PTS2:
                assert fam.derivative_ladder_check(spec, label, pt) == 0


def test_zero_order_ladder_is_trivially_zero():
    spec = fam.FamilySpec(fam.RACAH)
    assert fam.derivative_ladder_check(spec, (0, 2), PTS2[0]) == 0
    bar = fam.FamilySpec(fam.RACAH_BAR)
    assert fam.derivative_ladder_check(bar, (2, 0), PTS2[0]) == 0


def test_univariate_wilson_ladder():
    a, b, c, d = Fraction(1, 2), Fraction(3, 4), Fraction(5, 4), Fraction(7, 6)
    spec = lo.wilson_square()
    half = Fraction(1, 2)
    for n in range(1, 4):
        for x in (Fraction(8, 7), Fraction(15, 7)):
            lhs = lo.apply_D(spec, lambda v: fam.wilson_uni(n, a, b, c, d, v), x)
            rhs = -n * (n + a + b + c + d - 1) * fam.wilson_uni(
                n - 1, a + half, b + half, c + half, d + half, x
            )
            assert lhs == rhs


def test_univariate_ladder_and_second_order_equation():
    a, b, g, d = RACAH_ARGS
    eta = lo.quadratic(g + d + 1)
    for n in range(1, 4):
        for s in (Fraction(8, 7), Fraction(15, 7)):
            lhs = lo.apply_D(eta, lambda v: fam.racah_uni(n, a, b, g, d, v), s)
            rhs = n * (n + a + b + 1) * fam.racah_uni(n - 1, a + 1, b + 1, g + 1, d, s - Fraction(1, 2))
            assert lhs == rhs
    for n in range(4):
        lam = n * (a + b + n + 1)
        for s in (Fraction(8, 7), Fraction(15, 7)):
            et = s * (s + g + d + 1)
            phi = (
                -et * et
                + Fraction(1, 2)
                * (-a * (2 * b + d + g + 3) + b * (d - g - 3) - 2 * (d * g + d + g + 2))
                * et
                - Fraction(1, 2) * (a + 1) * (g + 1) * (b + d + 1) * (d + g + 1)
            )
            tau = -(a + b + 2) * et - (a + 1) * (g + 1) * (b + d + 1)
            rn = lambda v: fam.racah_uni(n, a, b, g, d, v)
            d2 = lo.apply_D(eta, lambda v: lo.apply_D(eta, rn, v), s)
            sd = lo.apply_S(eta, lambda v: lo.apply_D(eta, rn, v), s)
            assert phi * d2 + tau * sd + lam * rn(s) == 0


# -- parameter maps ------------------------------------------------------------

def test_tratnik_round_trip():
    rng = random.Random(53)
    for _ in range(10):
        args = {k: rnd_fraction(rng) for k in ("a1", "a2", "a3", "gamma", "eta")}
        internal = fam.tratnik_to_internal(**args)
        back = fam.internal_to_tratnik(**internal)
        assert back == args
        betas = {k: rnd_fraction(rng) for k in ("beta0", "beta1", "beta2", "beta3", "N")}
        assert fam.tratnik_to_internal(**fam.internal_to_tratnik(**betas)) == betas


def test_racah_to_wilson_substitution_is_exact():
    wspec = fam.FamilySpec(fam.WILSON)
    betas, point_map = fam.racah_to_wilson_map(**wspec.params)
    rspec = fam.FamilySpec(fam.RACAH, params=betas)
    for label in [(1, 0), (0, 1), (1, 1), (2, 1)]:
        for x, y in PTS2[:2]:
            st = point_map(x, y)
            racah_val = fam._eval_cached(rspec.key(), label, st)
            assert demote(racah_val) == fam.eval_family(wspec, label, (x, y))


def test_spec_json_echo():
    spec = fam.FamilySpec(fam.CDH)
    blob = spec.to_json()
    assert blob["family"] == "cdh"
    assert blob["params"]["e2"] == "2/5"
