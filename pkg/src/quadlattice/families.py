"""Hypergeometric construction of the univariate, bivariate and trivariate
polynomial families, together with their derivative ladders.

Each bivariate family is a product of two univariate factors whose
parameters and arguments are coupled through the degrees; the exact
couplings implemented here are:

  racah      R_{n,m}(s,t)   = r_n(b1-b0-1, b2-b1-1, -t-1, b1+t; s)
                              * r_m(2n+b2-b0-1, b3-b2-1, n-N-1, n+b2+N; t-n)
  racah-bar  Rb_{n,m}(s,t)  = r_n(2m-b1+b3-1, b1-b0-1, m-N-1, m-N-b1; N-m-s)
                              * r_m(b3-b2-1, b2-b1-1, s-N-1, -b2-N-s; N-t)
  wilson     W_{n,m}(x,y)   = w_n(a, b, e2+iy, e2-iy; x)
                              * w_m(n+a+e2, n+b+e2, c, d; y)
  wilson-bar Wb_{n,m}(x,y)  = w_n(m+c+e2, m+d+e2, a, b; x)
                              * w_m(c, d, e2+ix, e2-ix; y)
  cdh        D_{n,m}(x,y)   = d_n(a, e2+iy, e2-iy; x) * d_m(n+a+e2, b, c; y)
  ch         H_{n,m}(x,y)   = h_n(a1, b1, e2-iy, e2+iy; x)
                              * h_m(n+a1+e2, n+b1+e2, b3, a3; y)
  ch-bar     Hb_{n,m}(x,y)  = h_n(m+e2+b3, m+e2+a3, a1, b1; x)
                              * h_m(b3, a3, e2-ix, e2+ix; y)
  ch-tri     three continuous Hahn factors chained through n, m, r.

Every univariate factor has a second, independent implementation (plain
term-by-term series summation) used as a brute-force oracle by the tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exactfield import GaussianRational, demote, gauss, imag_part, pochhammer, rat
from .latticeops import apply_D, linear, quadratic, wilson_square

HALF = Fraction(1, 2)


class DegenerateParameterError(ValueError):
    """A hypergeometric denominator Pochhammer vanishes before truncation."""


def _check_lower(pairs, n):
    for name, a in pairs:
        for j in range(n):
            if not (a + j):
                raise DegenerateParameterError(
                    f"denominator parameter {name} = {a} hits zero at shift {j}"
                )


# ---------------------------------------------------------------------------
# univariate factors: cancellation-free primaries
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def racah_uni(n, alpha, beta, gamma, delta, s):
    """Univariate Racah polynomial r_n(alpha,beta,gamma,delta;s).

    Degree 2n in s and degree n in the lattice s(s+gamma+delta+1).
    """
    a1, bd1, g1 = alpha + 1, beta + delta + 1, gamma + 1
    _check_lower([("alpha+1", a1), ("beta+delta+1", bd1), ("gamma+1", g1)], n)
    total = Fraction(0)
    for k in range(n + 1):
        num = (
            pochhammer(Fraction(-n), k)
            * pochhammer(n + alpha + beta + 1, k)
            * pochhammer(-s, k)
            * pochhammer(s + gamma + delta + 1, k)
        )
        if not num:
            continue
        tail = (
            pochhammer(a1 + k, n - k)
            * pochhammer(bd1 + k, n - k)
            * pochhammer(g1 + k, n - k)
        )
        total = total + num * tail / _fact(k)
    return demote(total)


@lru_cache(maxsize=None)
def wilson_uni(n, a, b, c, d, x):
    """Wilson polynomial w_n(x^2; a, b, c, d); an even function of x."""
    ab, ac, ad = a + b, a + c, a + d
    _check_lower([("a+b", ab), ("a+c", ac), ("a+d", ad)], n)
    aix = gauss(a) + GaussianRational(0, 1) * gauss(x)
    amx = gauss(a) - GaussianRational(0, 1) * gauss(x)
    total = gauss(0)
    for k in range(n + 1):
        num = (
            pochhammer(Fraction(-n), k)
            * pochhammer(n + a + b + c + d - 1, k)
            * pochhammer(aix, k)
            * pochhammer(amx, k)
        )
        if not num:
            continue
        tail = (
            pochhammer(ab + k, n - k)
            * pochhammer(ac + k, n - k)
            * pochhammer(ad + k, n - k)
        )
        total = total + num * tail / _fact(k)
    return demote(total)


@lru_cache(maxsize=None)
def cdh_uni(n, a, b, c, x):
    """Continuous dual Hahn polynomial d_n(a, b, c | x), even in x."""
    ab, ac = a + b, a + c
    _check_lower([("a+b", ab), ("a+c", ac)], n)
    aix = gauss(a) + GaussianRational(0, 1) * gauss(x)
    amx = gauss(a) - GaussianRational(0, 1) * gauss(x)
    total = gauss(0)
    for k in range(n + 1):
        num = pochhammer(Fraction(-n), k) * pochhammer(aix, k) * pochhammer(amx, k)
        if not num:
            continue
        tail = pochhammer(ab + k, n - k) * pochhammer(ac + k, n - k)
        total = total + num * tail / _fact(k)
    return demote(total)


@lru_cache(maxsize=None)
def ch_uni(n, a, b, c, d, x):
    """Continuous Hahn polynomial h_n(a, b, c, d | x) with the i^n prefactor."""
    ab, ad = a + b, a + d
    _check_lower([("a+b", ab), ("a+d", ad)], n)
    aix = gauss(a) + GaussianRational(0, 1) * gauss(x)
    total = gauss(0)
    for k in range(n + 1):
        num = (
            pochhammer(Fraction(-n), k)
            * pochhammer(n + a + b + c + d - 1, k)
            * pochhammer(aix, k)
        )
        if not num:
            continue
        tail = pochhammer(ab + k, n - k) * pochhammer(ad + k, n - k)
        total = total + num * tail / _fact(k)
    return demote(GaussianRational(0, 1) ** n * total)


@lru_cache(maxsize=None)
def _fact(k):
    out = 1
    for j in range(2, k + 1):
        out *= j
    return Fraction(out)


# ---------------------------------------------------------------------------
# brute-force series oracles (independent code path: prefactor times a
# running-ratio sum, with explicit division at every term)
# ---------------------------------------------------------------------------

def hyper_series_oracle(numerators, denominators, terms):
    """Sum_{k=0}^{terms-1} prod (num_j)_k / (prod (den_j)_k * k!) at unit
    argument, via term ratios."""
    term = gauss(1) if any(isinstance(v, GaussianRational) for v in numerators) else Fraction(1)
    total = term
    for k in range(terms - 1):
        for nu in numerators:
            term = term * (nu + k)
        for de in denominators:
            dval = de + k
            if not dval:
                raise DegenerateParameterError(
                    f"series denominator {de} + {k} vanished mid-sum"
                )
            term = term / dval
        term = term / (k + 1)
        total = total + term
    return demote(total)


def racah_uni_oracle(n, alpha, beta, gamma, delta, s):
    pre = (
        pochhammer(alpha + 1, n)
        * pochhammer(beta + delta + 1, n)
        * pochhammer(gamma + 1, n)
    )
    series = hyper_series_oracle(
        [Fraction(-n), n + alpha + beta + 1, -s, s + gamma + delta + 1],
        [alpha + 1, beta + delta + 1, gamma + 1],
        n + 1,
    )
    return demote(pre * series)


def wilson_uni_oracle(n, a, b, c, d, x):
    pre = pochhammer(a + b, n) * pochhammer(a + c, n) * pochhammer(a + d, n)
    ix = GaussianRational(0, 1) * gauss(x)
    series = hyper_series_oracle(
        [gauss(Fraction(-n)), gauss(n + a + b + c + d - 1), gauss(a) + ix, gauss(a) - ix],
        [a + b, a + c, a + d],
        n + 1,
    )
    return demote(pre * series)


def cdh_uni_oracle(n, a, b, c, x):
    pre = pochhammer(a + b, n) * pochhammer(a + c, n)
    ix = GaussianRational(0, 1) * gauss(x)
    series = hyper_series_oracle(
        [gauss(Fraction(-n)), gauss(a) + ix, gauss(a) - ix],
        [a + b, a + c],
        n + 1,
    )
    return demote(pre * series)


def ch_uni_oracle(n, a, b, c, d, x):
    pre = GaussianRational(0, 1) ** n * pochhammer(a + b, n) * pochhammer(a + d, n)
    ix = GaussianRational(0, 1) * gauss(x)
    series = hyper_series_oracle(
        [gauss(Fraction(-n)), gauss(n + a + b + c + d - 1), gauss(a) + ix],
        [a + b, a + d],
        n + 1,
    )
    return demote(pre * series)


# ---------------------------------------------------------------------------
# family specifications
# ---------------------------------------------------------------------------

RACAH = "racah"
RACAH_BAR = "racah-bar"
WILSON = "wilson"
WILSON_BAR = "wilson-bar"
CDH = "cdh"
CH = "ch"
CH_BAR = "ch-bar"
CH_TRI = "ch-tri"

PARAM_NAMES = {
    RACAH: ("beta0", "beta1", "beta2", "beta3", "N"),
    RACAH_BAR: ("beta0", "beta1", "beta2", "beta3", "N"),
    WILSON: ("a", "b", "c", "d", "e2"),
    WILSON_BAR: ("a", "b", "c", "d", "e2"),
    CDH: ("a", "b", "c", "e2"),
    CH: ("a1", "e2", "a3", "b1", "b3"),
    CH_BAR: ("a1", "e2", "a3", "b1", "b3"),
    CH_TRI: ("a1", "e2", "e3", "a4", "b1", "b4"),
}

# generic fixtures: chosen so every Pochhammer denominator and operator
# denominator stays nonzero over the standard test grids
DEFAULT_PARAMS = {
    RACAH: {
        "beta0": Fraction(1, 5),
        "beta1": Fraction(2, 3),
        "beta2": Fraction(7, 3),
        "beta3": Fraction(9, 2),
        "N": Fraction(17, 2),
    },
    WILSON: {
        "a": Fraction(1, 2),
        "b": Fraction(3, 4),
        "c": Fraction(5, 4),
        "d": Fraction(7, 6),
        "e2": Fraction(2, 5),
    },
    CDH: {
        "a": Fraction(1, 2),
        "b": Fraction(3, 4),
        "c": Fraction(5, 4),
        "e2": Fraction(2, 5),
    },
    CH: {
        "a1": Fraction(1, 3),
        "e2": Fraction(2, 7),
        "a3": Fraction(3, 5),
        "b1": Fraction(5, 6),
        "b3": Fraction(4, 9),
    },
    CH_TRI: {
        "a1": Fraction(1, 3),
        "e2": Fraction(2, 7),
        "b1": Fraction(5, 6),
        "e3": Fraction(1, 2),
        "a4": Fraction(3, 7),
        "b4": Fraction(5, 11),
    },
}
DEFAULT_PARAMS[RACAH_BAR] = DEFAULT_PARAMS[RACAH]
DEFAULT_PARAMS[WILSON_BAR] = DEFAULT_PARAMS[WILSON]
DEFAULT_PARAMS[CH_BAR] = DEFAULT_PARAMS[CH]

ALL_FAMILIES = tuple(PARAM_NAMES)


class FamilySpec:
    """A family name plus a complete exact parameter set."""

    __slots__ = ("family", "params")

    def __init__(self, family, params=None, **overrides):
        if family not in PARAM_NAMES:
            raise ValueError(f"unknown family {family!r}")
        base = dict(DEFAULT_PARAMS[family])
        if params:
            base.update({k: rat(v) for k, v in params.items()})
        base.update({k: rat(v) for k, v in overrides.items()})
        unknown = set(base) - set(PARAM_NAMES[family])
        if unknown:
            raise ValueError(f"parameters {sorted(unknown)} do not belong to {family}")
        missing = set(PARAM_NAMES[family]) - set(base)
        if missing:
            raise ValueError(f"missing parameters {sorted(missing)} for {family}")
        self.family = family
        self.params = base

    def __getitem__(self, name):
        return self.params[name]

    def key(self):
        return (self.family,) + tuple(self.params[k] for k in PARAM_NAMES[self.family])

    def __eq__(self, other):
        return isinstance(other, FamilySpec) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"FamilySpec({self.family}; {body})"

    @property
    def nvars(self):
        return 3 if self.family == CH_TRI else 2

    def shifted(self, **deltas):
        params = dict(self.params)
        for k, dv in deltas.items():
            params[k] = params[k] + rat(dv)
        return FamilySpec(self.family, params)

    def lattices(self):
        if self.family in (RACAH, RACAH_BAR):
            return (
                quadratic(self.params["beta1"], "x"),
                quadratic(self.params["beta2"], "y"),
            )
        if self.family in (WILSON, WILSON_BAR, CDH):
            return (wilson_square("x"), wilson_square("y"))
        if self.family == CH_TRI:
            return (linear("x"), linear("y"), linear("z"))
        return (linear("x"), linear("y"))

    def to_json(self):
        from .exactfield import rat_str

        return {
            "family": self.family,
            "params": {k: rat_str(v) for k, v in self.params.items()},
        }


def check_label(spec, label):
    label = tuple(int(v) for v in label)
    if len(label) != spec.nvars:
        raise ValueError(
            f"label {label} has wrong arity for {spec.family} ({spec.nvars} variables)"
        )
    if any(v < 0 for v in label):
        raise ValueError(f"label {label} has a negative degree")
    return label


def check_point(spec, point):
    if len(point) != spec.nvars:
        raise ValueError(
            f"point {point} has wrong arity for {spec.family} ({spec.nvars} variables)"
        )
    return tuple(point)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def eval_family(spec: FamilySpec, label, point):
    """Exact value of the family member at the point.

    Wilson and continuous dual Hahn values are real for real inputs; this is
    asserted, not assumed.  Continuous Hahn values live in Q(i).
    """
    label = check_label(spec, label)
    point = check_point(spec, point)
    return _eval_cached(spec.key(), label, point)


@lru_cache(maxsize=None)
def _eval_cached(spec_key, label, point):
    family = spec_key[0]
    p = dict(zip(PARAM_NAMES[family], spec_key[1:]))
    real_families = (RACAH, RACAH_BAR, WILSON, WILSON_BAR, CDH)

    if family == RACAH:
        n, m = label
        s, t = point
        value = racah_uni(
            n, p["beta1"] - p["beta0"] - 1, p["beta2"] - p["beta1"] - 1, -t - 1, p["beta1"] + t, s
        ) * racah_uni(
            m,
            2 * n + p["beta2"] - p["beta0"] - 1,
            p["beta3"] - p["beta2"] - 1,
            n - p["N"] - 1,
            n + p["beta2"] + p["N"],
            t - n,
        )
    elif family == RACAH_BAR:
        n, m = label
        s, t = point
        value = racah_uni(
            n,
            2 * m - p["beta1"] + p["beta3"] - 1,
            p["beta1"] - p["beta0"] - 1,
            m - p["N"] - 1,
            m - p["N"] - p["beta1"],
            p["N"] - m - s,
        ) * racah_uni(
            m,
            p["beta3"] - p["beta2"] - 1,
            p["beta2"] - p["beta1"] - 1,
            s - p["N"] - 1,
            -p["beta2"] - p["N"] - s,
            p["N"] - t,
        )
    elif family == WILSON:
        n, m = label
        x, y = point
        iy = GaussianRational(0, 1) * gauss(y)
        value = wilson_uni(
            n, p["a"], p["b"], gauss(p["e2"]) + iy, gauss(p["e2"]) - iy, x
        ) * wilson_uni(m, n + p["a"] + p["e2"], n + p["b"] + p["e2"], p["c"], p["d"], y)
    elif family == WILSON_BAR:
        n, m = label
        x, y = point
        ix = GaussianRational(0, 1) * gauss(x)
        value = wilson_uni(
            n, m + p["c"] + p["e2"], m + p["d"] + p["e2"], p["a"], p["b"], x
        ) * wilson_uni(m, p["c"], p["d"], gauss(p["e2"]) + ix, gauss(p["e2"]) - ix, y)
    elif family == CDH:
        n, m = label
        x, y = point
        iy = GaussianRational(0, 1) * gauss(y)
        value = cdh_uni(
            n, p["a"], gauss(p["e2"]) + iy, gauss(p["e2"]) - iy, x
        ) * cdh_uni(m, n + p["a"] + p["e2"], p["b"], p["c"], y)
    elif family == CH:
        n, m = label
        x, y = point
        iy = GaussianRational(0, 1) * gauss(y)
        value = ch_uni(
            n, p["a1"], p["b1"], gauss(p["e2"]) - iy, gauss(p["e2"]) + iy, x
        ) * ch_uni(m, n + p["a1"] + p["e2"], n + p["b1"] + p["e2"], p["b3"], p["a3"], y)
    elif family == CH_BAR:
        n, m = label
        x, y = point
        ix = GaussianRational(0, 1) * gauss(x)
        value = ch_uni(
            n, m + p["e2"] + p["b3"], m + p["e2"] + p["a3"], p["a1"], p["b1"], x
        ) * ch_uni(m, p["b3"], p["a3"], gauss(p["e2"]) - ix, gauss(p["e2"]) + ix, y)
    elif family == CH_TRI:
        n, m, r = label
        x, y, z = point
        iy = GaussianRational(0, 1) * gauss(y)
        iz = GaussianRational(0, 1) * gauss(z)
        value = (
            ch_uni(n, p["a1"], p["b1"], gauss(p["e2"]) - iy, gauss(p["e2"]) + iy, x)
            * ch_uni(
                m,
                n + p["a1"] + p["e2"],
                n + p["b1"] + p["e2"],
                gauss(p["e3"]) - iz,
                gauss(p["e3"]) + iz,
                y,
            )
            * ch_uni(
                r,
                n + m + p["a1"] + p["e2"] + p["e3"],
                n + m + p["b1"] + p["e2"] + p["e3"],
                p["b4"],
                p["a4"],
                z,
            )
        )
    else:  # pragma: no cover
        raise ValueError(family)

    value = demote(value)
    if family in real_families and all(imag_part(v) == 0 for v in point):
        if imag_part(value) != 0:
            raise ArithmeticError(
                f"{family} value at {point} came out non-real: {value}"
            )
        value = value.re if isinstance(value, GaussianRational) else value
    return value


def eval_family_oracle(spec: FamilySpec, label, point):
    """Brute-force evaluation: the same factor couplings, but every
    univariate factor summed term-by-term by the series oracles."""
    label = check_label(spec, label)
    point = check_point(spec, point)
    p = spec.params
    family = spec.family
    ii = GaussianRational(0, 1)

    if family == RACAH:
        n, m = label
        s, t = point
        return demote(
            racah_uni_oracle(
                n, p["beta1"] - p["beta0"] - 1, p["beta2"] - p["beta1"] - 1, -t - 1, p["beta1"] + t, s
            )
            * racah_uni_oracle(
                m,
                2 * n + p["beta2"] - p["beta0"] - 1,
                p["beta3"] - p["beta2"] - 1,
                n - p["N"] - 1,
                n + p["beta2"] + p["N"],
                t - n,
            )
        )
    if family == RACAH_BAR:
        n, m = label
        s, t = point
        return demote(
            racah_uni_oracle(
                n,
                2 * m - p["beta1"] + p["beta3"] - 1,
                p["beta1"] - p["beta0"] - 1,
                m - p["N"] - 1,
                m - p["N"] - p["beta1"],
                p["N"] - m - s,
            )
            * racah_uni_oracle(
                m,
                p["beta3"] - p["beta2"] - 1,
                p["beta2"] - p["beta1"] - 1,
                s - p["N"] - 1,
                -p["beta2"] - p["N"] - s,
                p["N"] - t,
            )
        )
    if family == WILSON:
        n, m = label
        x, y = point
        iy = ii * gauss(y)
        return demote(
            wilson_uni_oracle(n, p["a"], p["b"], gauss(p["e2"]) + iy, gauss(p["e2"]) - iy, x)
            * wilson_uni_oracle(m, n + p["a"] + p["e2"], n + p["b"] + p["e2"], p["c"], p["d"], y)
        )
    if family == WILSON_BAR:
        n, m = label
        x, y = point
        ix = ii * gauss(x)
        return demote(
            wilson_uni_oracle(n, m + p["c"] + p["e2"], m + p["d"] + p["e2"], p["a"], p["b"], x)
            * wilson_uni_oracle(m, p["c"], p["d"], gauss(p["e2"]) + ix, gauss(p["e2"]) - ix, y)
        )
    if family == CDH:
        n, m = label
        x, y = point
        iy = ii * gauss(y)
        return demote(
            cdh_uni_oracle(n, p["a"], gauss(p["e2"]) + iy, gauss(p["e2"]) - iy, x)
            * cdh_uni_oracle(m, n + p["a"] + p["e2"], p["b"], p["c"], y)
        )
    if family == CH:
        n, m = label
        x, y = point
        iy = ii * gauss(y)
        return demote(
            ch_uni_oracle(n, p["a1"], p["b1"], gauss(p["e2"]) - iy, gauss(p["e2"]) + iy, x)
            * ch_uni_oracle(m, n + p["a1"] + p["e2"], n + p["b1"] + p["e2"], p["b3"], p["a3"], y)
        )
    if family == CH_BAR:
        n, m = label
        x, y = point
        ix = ii * gauss(x)
        return demote(
            ch_uni_oracle(n, m + p["e2"] + p["b3"], m + p["e2"] + p["a3"], p["a1"], p["b1"], x)
            * ch_uni_oracle(m, p["b3"], p["a3"], gauss(p["e2"]) - ix, gauss(p["e2"]) + ix, y)
        )
    n, m, r = label
    x, y, z = point
    iy = ii * gauss(y)
    iz = ii * gauss(z)
    return demote(
        ch_uni_oracle(n, p["a1"], p["b1"], gauss(p["e2"]) - iy, gauss(p["e2"]) + iy, x)
        * ch_uni_oracle(
            m,
            n + p["a1"] + p["e2"],
            n + p["b1"] + p["e2"],
            gauss(p["e3"]) - iz,
            gauss(p["e3"]) + iz,
            y,
        )
        * ch_uni_oracle(
            r,
            n + m + p["a1"] + p["e2"] + p["e3"],
            n + m + p["b1"] + p["e2"] + p["e3"],
            p["b4"],
            p["a4"],
            z,
        )
    )


def family_function(spec, label):
    """The family member as a stencil function of its grid coordinates."""
    label = check_label(spec, label)

    def f(*point):
        if len(point) == 1 and isinstance(point[0], tuple):
            point = point[0]
        return _eval_cached(spec.key(), label, tuple(point))

    return f


# ---------------------------------------------------------------------------
# derivative ladders
# ---------------------------------------------------------------------------

LADDER_DIRECTION = {
    RACAH: 0,
    RACAH_BAR: 1,
    WILSON: 0,
    WILSON_BAR: 1,
    CDH: 0,
    CH: 0,
    CH_BAR: 1,
}


def ladder_parts(spec: FamilySpec, label):
    """(direction, factor, shifted spec, shifted label, point transform) of
    the family's printed difference-derivative identity."""
    label = check_label(spec, label)
    p = spec.params
    family = spec.family
    if family == RACAH:
        n, m = label
        factor = n * (n - p["beta0"] + p["beta2"] - 1)
        shifted = spec.shifted(beta1=1, beta2=2, beta3=2, N=-1)
        new_label = (max(n - 1, 0), m)
        transform = lambda pt: (pt[0] - HALF, pt[1] - 1)
    elif family == RACAH_BAR:
        n, m = label
        factor = m * (m + p["beta3"] - p["beta1"] - 1)
        shifted = spec.shifted(beta2=1, beta3=2, N=-1)
        new_label = (n, max(m - 1, 0))
        transform = lambda pt: (pt[0], pt[1] - HALF)
    elif family == WILSON:
        n, m = label
        factor = -n * (n + p["a"] + p["b"] + 2 * p["e2"] - 1)
        shifted = spec.shifted(a=HALF, b=HALF, e2=HALF)
        new_label = (max(n - 1, 0), m)
        transform = lambda pt: pt
    elif family == WILSON_BAR:
        n, m = label
        factor = -m * (m + p["c"] + p["d"] + 2 * p["e2"] - 1)
        shifted = spec.shifted(c=HALF, d=HALF, e2=HALF)
        new_label = (n, max(m - 1, 0))
        transform = lambda pt: pt
    elif family == CDH:
        n, m = label
        factor = Fraction(-n)
        shifted = spec.shifted(a=HALF, e2=HALF)
        new_label = (max(n - 1, 0), m)
        transform = lambda pt: pt
    elif family == CH:
        n, m = label
        factor = n * (n + p["a1"] + p["b1"] + 2 * p["e2"] - 1)
        shifted = spec.shifted(a1=HALF, e2=HALF, b1=HALF)
        new_label = (max(n - 1, 0), m)
        transform = lambda pt: pt
    elif family == CH_BAR:
        n, m = label
        factor = m * (m + p["a3"] + p["b3"] + 2 * p["e2"] - 1)
        shifted = spec.shifted(e2=HALF, a3=HALF, b3=HALF)
        new_label = (n, max(m - 1, 0))
        transform = lambda pt: pt
    else:
        raise ValueError(f"no printed ladder for family {family}")
    return LADDER_DIRECTION[family], factor, shifted, new_label, transform


def derivative_ladder_check(spec: FamilySpec, label, point):
    """LHS - RHS of the printed ladder identity at the point; exactly 0."""
    label = check_label(spec, label)
    point = check_point(spec, point)
    direction, factor, shifted, new_label, transform = ladder_parts(spec, label)
    lattice = spec.lattices()[direction]
    f = family_function(spec, label)

    def slice_f(v):
        args = list(point)
        args[direction] = v
        return f(tuple(args))

    lhs = apply_D(lattice, slice_f, point[direction])
    if label[direction] == 0:
        rhs = 0 * lhs
    else:
        rhs = factor * eval_family(shifted, new_label, transform(point))
    return demote(lhs - rhs)


# ---------------------------------------------------------------------------
# parameter maps
# ---------------------------------------------------------------------------

def tratnik_to_internal(a1, a2, a3, gamma, eta):
    """Map the five Tratnik parameters to (beta0..beta3, N)."""
    a1, a2, a3, gamma, eta = map(rat, (a1, a2, a3, gamma, eta))
    return {
        "beta0": a1 - eta - 1,
        "beta1": a1,
        "beta2": a1 + a2,
        "beta3": a1 + a2 + a3,
        "N": -gamma - 1,
    }


def internal_to_tratnik(beta0, beta1, beta2, beta3, N):
    beta0, beta1, beta2, beta3, N = map(rat, (beta0, beta1, beta2, beta3, N))
    return {
        "a1": beta1,
        "a2": beta2 - beta1,
        "a3": beta3 - beta2,
        "gamma": -N - 1,
        "eta": beta1 - beta0 - 1,
    }


def racah_to_wilson_map(a, b, c, d, e2):
    """The corrected change of variables carrying Racah data to Wilson data:
    beta values, truncation parameter, and the grid substitution
    s = -a + ix, t = -a - e2 + iy."""
    a, b, c, d, e2 = map(rat, (a, b, c, d, e2))
    betas = {
        "beta0": a - b,
        "beta1": 2 * a,
        "beta2": 2 * a + 2 * e2,
        "beta3": 2 * a + 2 * e2 + c + d,
        "N": -a - d - e2,
    }

    def point_map(x, y):
        ii = GaussianRational(0, 1)
        return (-a + ii * gauss(x), -a - e2 + ii * gauss(y))

    return betas, point_map
