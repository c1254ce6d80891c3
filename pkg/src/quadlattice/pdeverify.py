"""Coefficient tables of the divided-difference equations, mixed-operator
application, exact residual verification, and the coefficient-recovery
oracle.

A fourth-order bivariate table lists eight polynomials f1..f8 paired with
the mixed operators

    f1 E(2,2)  f2 E(1,2)  f3 E(2,1)  f4 E(1,1)
    f5 E(2,0)  f6 E(0,2)  f7 E(1,0)  f8 E(0,1)

where the entry 2 stands for D^2 in that variable and the entry 1 for SD;
the sixth-order trivariate table lists twenty-six such polynomials over the
cube {0,1,2}^3.  A table's residual on a family member must vanish at every
nonsingular grid point, and a grid of (d+3)^2 points of distinct lattice
values promotes the pointwise zeros to a polynomial identity.
"""

from __future__ import annotations

from fractions import Fraction

from .exactfield import GaussianRational, demote, gauss
from .families import (
    CDH,
    CH,
    CH_BAR,
    CH_TRI,
    RACAH,
    RACAH_BAR,
    WILSON,
    WILSON_BAR,
    FamilySpec,
    check_label,
    check_point,
    family_function,
)
from .fbasis import MPoly, interpolate_bivariate, poly_D, poly_S
from .latticeops import (
    LatticeSpec,
    SingularPointError,
    apply_D,
    apply_S,
    grid_points,
    lattice_value,
)
from .matrix import ExactMatrix, exact_inverse

HALF = Fraction(1, 2)
II = GaussianRational(0, 1)

# ordering of the mixed-operator indices attached to f1..f8
BIVARIATE_OPS = ((2, 2), (1, 2), (2, 1), (1, 1), (2, 0), (0, 2), (1, 0), (0, 1))

# f1..f26 of the trivariate equation, same encoding over (x, y, z)
TRIVARIATE_OPS = (
    (0, 0, 1), (0, 1, 0), (1, 0, 0),
    (0, 1, 1), (1, 0, 1), (1, 1, 0),
    (0, 0, 2), (0, 2, 0), (2, 0, 0),
    (1, 1, 1),
    (0, 1, 2), (2, 1, 0), (0, 2, 1), (2, 0, 1), (1, 2, 0), (1, 0, 2),
    (1, 1, 2), (1, 2, 1), (2, 1, 1),
    (0, 2, 2), (2, 2, 0), (2, 0, 2),
    (1, 2, 2), (2, 1, 2), (2, 2, 1),
    (2, 2, 2),
)


def validate_mixed_index(lindex, nvars):
    lindex = tuple(int(v) for v in lindex)
    if len(lindex) != nvars or any(v not in (0, 1, 2) for v in lindex):
        raise ValueError(f"bad mixed-operator index {lindex}")
    return lindex


class CoeffTable:
    """An ordered coefficient list plus the eigenvalue closure of one
    divided-difference equation."""

    __slots__ = ("family", "order", "coeffs", "lindices", "eigenvalue", "lattices", "epsilon")

    def __init__(self, family, coeffs, lindices, eigenvalue, lattices, epsilon):
        self.family = family
        self.order = "sixth" if len(lindices) == 26 else "fourth"
        self.coeffs = list(coeffs)
        self.lindices = [validate_mixed_index(l, len(lattices)) for l in lindices]
        self.eigenvalue = eigenvalue
        self.lattices = tuple(lattices)
        self.epsilon = epsilon
        self._check_structure()

    @property
    def nvars(self):
        return len(self.lattices)

    def _check_structure(self):
        # degree bounded by l1+...+lp, and no dependence on a variable whose
        # operator entry is zero
        for fi, lind in zip(self.coeffs, self.lindices):
            if fi.total_degree() > sum(lind):
                raise AssertionError(
                    f"coefficient for E{lind} exceeds degree {sum(lind)}: {fi.coeffs}"
                )
            for var, l in enumerate(lind):
                if l == 0 and fi.depends_on(var):
                    raise AssertionError(
                        f"coefficient for E{lind} depends on inactive variable {var}"
                    )

    def lattice_point(self, point):
        return tuple(lattice_value(l, v) for l, v in zip(self.lattices, point))

    def to_json(self):
        from .exactfield import field_str

        return {
            "order": self.order,
            "coefficients": {
                f"f{i + 1}": fi.to_json() for i, fi in enumerate(self.coeffs)
            },
            "operators": [list(l) for l in self.lindices],
        }


# ---------------------------------------------------------------------------
# pointwise mixed-operator application
# ---------------------------------------------------------------------------

def _fix_var(g, point, var):
    def h(v):
        args = list(point)
        args[var] = v
        return g(tuple(args))

    return h


def _op_in_var(lattice, var, g, kind):
    if kind == "D":
        return lambda pt: apply_D(lattice, _fix_var(g, pt, var), pt[var])
    return lambda pt: apply_S(lattice, _fix_var(g, pt, var), pt[var])


def apply_mixed(lattices, lindex, f, point):
    """(E_{lindex} f)(point): per variable, entry 1 applies S D and entry 2
    applies D^2; entry 0 leaves the variable alone."""
    lindex = validate_mixed_index(lindex, len(lattices))
    g = f
    for var in range(len(lattices) - 1, -1, -1):
        l = lindex[var]
        if l == 0:
            continue
        g = _op_in_var(lattices[var], var, g, "D")
        g = _op_in_var(lattices[var], var, g, "D" if l == 2 else "S")
    return g(tuple(point))


def stencil_weights(lattices, lindex, point):
    """The exact weights w with (E_{lindex} f)(point) = sum w[q] f(q).

    Points q are absolute evaluation points (integer real shifts on
    quadratic lattices, integer imaginary shifts otherwise).
    """
    lindex = validate_mixed_index(lindex, len(lattices))

    def base(pt):
        return {tuple(pt): Fraction(1)}

    builder = base
    for var in range(len(lattices) - 1, -1, -1):
        l = lindex[var]
        if l == 0:
            continue
        builder = _weights_op(lattices[var], var, builder, "D")
        builder = _weights_op(lattices[var], var, builder, "D" if l == 2 else "S")
    return builder(tuple(point))


def _weights_op(lattice, var, inner, kind):
    from .latticeops import d_denominator, shifted_points

    def out(pt):
        up, down = shifted_points(lattice, pt[var])
        pt_up = tuple(v if i != var else up for i, v in enumerate(pt))
        pt_down = tuple(v if i != var else down for i, v in enumerate(pt))
        wu = inner(pt_up)
        wd = inner(pt_down)
        acc = {}
        if kind == "D":
            den = d_denominator(lattice, pt[var])
            if not den:
                raise SingularPointError(
                    f"stencil denominator vanishes at {pt[var]} on {lattice!r}"
                )
            for q, w in wu.items():
                acc[q] = acc.get(q, 0) + w / den
            for q, w in wd.items():
                acc[q] = acc.get(q, 0) - w / den
        else:
            for q, w in wu.items():
                acc[q] = acc.get(q, 0) + w * HALF
            for q, w in wd.items():
                acc[q] = acc.get(q, 0) + w * HALF
        return {q: w for q, w in acc.items() if w}

    return out


# ---------------------------------------------------------------------------
# the printed coefficient tables
# ---------------------------------------------------------------------------

def _xy():
    return MPoly.var(0, 2), MPoly.var(1, 2)


def racah_table(params) -> CoeffTable:
    b0, b1, b2, b3, N = (params[k] for k in ("beta0", "beta1", "beta2", "beta3", "N"))
    x, y = _xy()
    h = HALF
    q = Fraction(1, 4)

    f8 = (b0 - b3) * y - N * (b0 - b2) * (b3 + N)
    f7 = (b0 - b3) * x - N * (b0 - b1) * (b3 + N)
    f6 = (
        -(y ** 2)
        + h * (2 * N * N + 2 * b3 * (b0 + N) - b2 * (b3 + b0)) * y
        - h * N * b2 * (b0 - b2) * (b3 + N)
    )
    f5 = (
        -(x ** 2)
        + h * (2 * b3 * (N + b0) + 2 * N * N - b1 * (b3 + b0)) * x
        - h * N * b1 * (b0 - b1) * (b3 + N)
    )
    f4 = (
        -2 * x * y
        + (2 * N * N + b2 * (1 - b0) + b3 * (b0 - 1 + 2 * N)) * x
        + (b0 - b1) * (b3 + 1) * y
        - N * (b0 - b1) * (b2 + 1) * (b3 + N)
    )
    f3 = (
        (b2 - b3) * x ** 2
        + x
        * (
            -(1 + b1 + b3 - 2 * b0) * y
            + (1 + b1 - 2 * b0 + b2) * N * N
            - b3 * (-b1 - b2 - 1 + 2 * b0) * N
            + h * (b2 - b3) * (b1 * b0 - 2 * b0 + b1)
        )
        + h * b1 * (b3 + 1) * (b0 - b1) * y
        - h * b1 * N * (b2 + 1) * (b3 + N) * (b0 - b1)
    )
    f2 = (
        (b0 - b1) * y ** 2
        + x
        * (
            (b0 + b2 - 2 * b3 - 1) * y
            + (1 - b0 + b2) * N * N
            - b3 * (-1 + b0 - b2) * N
            + h * b2 * (b2 - b3) * (b0 - 1)
        )
        - h * (b0 - b1) * (2 * b3 * N - b3 * b2 + 2 * N * N - 2 * b3 + b2) * y
        - h * (b0 - b1) * N * b2 * (b2 + 1) * (b3 + N)
    )
    f1 = (
        -(x ** 2) * y
        - x * y ** 2
        + (N * N + b3 * N - h * b2 * (b2 - b3)) * x ** 2
        + h * b1 * (b0 - b1) * y ** 2
        + (
            (h * b1 + h - h * b3 - b0) * b2
            - b3
            - h * b1
            + 2 * b0 * b3
            + b0
            + N * N
            - b1 * b3
            + b3 * N
            - h * b1 * b0
        )
        * x
        * y
        + (
            (h * b1 * b0 + h * b2 * b2 + h * b1 * b2 + h * b2 - b0 * b2 + h * b1 - b0)
            * N
            * N
            + h
            * b3
            * (b1 * b0 + b2 * b2 + b1 * b2 + b2 - 2 * b0 * b2 + b1 - 2 * b0)
            * N
            - q * b2 * (b2 - b3) * (b1 * b0 + b1 - 2 * b0)
        )
        * x
        - q * b1 * (b2 - 2 * b3 + 2 * b3 * N + 2 * N * N - b2 * b3) * (b0 - b1) * y
        - q * N * b1 * b2 * (b2 + 1) * (b0 - b1) * (b3 + N)
    )

    lam = lambda label: (label[0] + label[1]) * (b3 - b0 + label[0] + label[1] - 1)
    lattices = (
        LatticeSpec(LatticeSpec.QUADRATIC, b1, "x"),
        LatticeSpec(LatticeSpec.QUADRATIC, b2, "y"),
    )
    return CoeffTable(
        RACAH, [f1, f2, f3, f4, f5, f6, f7, f8], BIVARIATE_OPS, lam, lattices, +1
    )


def wilson_table(params) -> CoeffTable:
    a, b, c, d, e2 = (params[k] for k in ("a", "b", "c", "d", "e2"))
    # lattice variables: u = x^2, v = y^2
    u, v = _xy()

    f8 = (
        (-a - b - 2 * e2 - c - d) * v
        + (c + d) * e2 * e2
        + (a * d + c * a + d * b + b * c + 2 * d * c) * e2
        + a * d * c + d * b * a + b * a * c + d * b * c
    )
    f7 = (
        (-a - b - 2 * e2 - c - d) * u
        + (a + b) * e2 * e2
        + (b * c + d * b + a * d + 2 * b * a + c * a) * e2
        + b * a * c + d * b * c + a * d * c + d * b * a
    )
    f6 = (
        -(v ** 2)
        + (
            b * e2 + b * a + 2 * c * e2 + c * a + a * e2 + e2 * e2
            + b * c + d * c + d * b + 2 * e2 * d + a * d
        )
        * v
        - d * c * (e2 + b) * (e2 + a)
    )
    f5 = (
        -(u ** 2)
        + (
            e2 * e2 + 2 * a * e2 + e2 * d + a * d + 2 * b * e2 + b * a
            + b * c + c * e2 + d * c + d * b + c * a
        )
        * u
        - b * a * (e2 + d) * (e2 + c)
    )
    f4 = (
        -2 * u * v
        + (d + c + 2 * c * e2 + c * a + b * c + 2 * d * c + d * b + 2 * e2 * d + a * d) * u
        + (2 * a * e2 + c * a + a * d + a + 2 * b * e2 + 2 * b * a + b * c + d * b + b) * v
        - (c + d) * (a + b) * e2 * e2
        + (
            -2 * d * b * a - 2 * a * d * c - a * d - 2 * d * b * c - c * a - d * b
            - b * c - 2 * b * a * c
        )
        * e2
        - 2 * d * b * a * c - a * d * c - d * b * a - b * a * c - d * b * c
    )
    f3 = (
        (c + d) * u ** 2
        - b * a * (2 * e2 + d + c + 1) * v
        + (1 + 2 * a + 2 * e2 + c + d + 2 * b) * u * v
        + b * a * ((c + d) * e2 * e2 + (d + c + 2 * d * c) * e2 + d * c)
        + (
            (-c - d) * e2 * e2
            + (-2 * a * d - 2 * b * c - 2 * c * a - 2 * d * b - c - d - 2 * d * c) * e2
            - d * b - c * a - b * c - 2 * a * d * c - d * c - d * b * a - b * a * c
            - a * d - 2 * d * b * c
        )
        * u
    )
    f2 = (
        (a + b) * v ** 2
        - d * c * (1 + a + b + 2 * e2) * u
        + (a + b + 2 * e2 + 2 * c + 2 * d + 1) * u * v
        + d * c * ((a + b) * e2 * e2 + (2 * b * a + a + b) * e2 + b * a)
        + (
            (-a - b) * e2 * e2
            + (-a - 2 * b * a - 2 * a * d - 2 * b * c - b - 2 * c * a - 2 * d * b) * e2
            - d * b * c - b * a - c * a - a * d - 2 * d * b * a - b * c - a * d * c
            - 2 * b * a * c - d * b
        )
        * v
    )
    f1 = (
        u ** 2 * v
        + u * v ** 2
        - c * d * u ** 2
        - a * b * v ** 2
        + (
            (-2 * c - 2 * b - 2 * d - 1 - 2 * a) * e2
            - e2 * e2 - a - b - d - c - d * c - b * a
            - 2 * c * a - 2 * d * b - 2 * b * c - 2 * a * d
        )
        * u
        * v
        + d * c * (e2 * e2 + (2 * b + 2 * a + 1) * e2 + b + b * a + a) * u
        + b * a * (e2 * e2 + (2 * c + 2 * d + 1) * e2 + c + d + d * c) * v
        - a * d * b * e2 * c * (1 + e2)
    )

    sigma = 2 * e2 + a + b + c + d
    lam = lambda label: (label[0] + label[1]) * (sigma + label[0] + label[1] - 1)
    lattices = (
        LatticeSpec(LatticeSpec.WILSON, None, "x"),
        LatticeSpec(LatticeSpec.WILSON, None, "y"),
    )
    return CoeffTable(
        WILSON, [f1, f2, f3, f4, f5, f6, f7, f8], BIVARIATE_OPS, lam, lattices, -1
    )


def cdh_table(params) -> CoeffTable:
    a, b, c, e2 = (params[k] for k in ("a", "b", "c", "e2"))
    u, v = _xy()

    f8 = -v + (c + b) * e2 + c * b + a * b + c * a
    f7 = -u + e2 * e2 + (c + 2 * a + b) * e2 + c * a + c * b + a * b
    f6 = -c * b * (a + e2) + (c + b + e2 + a) * v
    f5 = -a * (e2 + c) * (e2 + b) + (2 * e2 + a + b + c) * u
    f4 = (
        (-b - c) * e2 * e2
        + (-2 * c * a - 2 * a * b - b - 2 * c * b - c) * e2
        - c * a - 2 * b * a * c - c * b - a * b
        + (1 + 2 * e2 + 2 * a + b + c) * v
        + (c + b) * u
    )
    f3 = (
        a * (e2 * b + 2 * b * e2 * c + c * e2 + c * b + c * e2 * e2 + b * e2 * e2)
        + 2 * u * v
        - a * (2 * e2 + c + 1 + b) * v
        + (-b - a * b - 2 * e2 * b - 2 * c * b - c - 2 * c * e2 - c * a) * u
    )
    f2 = (
        c * b * (2 * a * e2 + a + e2 + e2 * e2)
        + u * v
        - u * c * b
        + v ** 2
        + (
            -e2 - a - b - e2 * e2 - 2 * e2 * b - 2 * a * e2
            - 2 * c * a - c - 2 * c * e2 - c * b - 2 * a * b
        )
        * v
    )
    f1 = (
        -b * e2 * c * a * (1 + e2)
        + (-1 - 2 * c - 2 * e2 - 2 * b - a) * u * v
        + c * b * (1 + 2 * e2 + a) * u
        - a * v ** 2
        + a * (c * b + e2 + b + 2 * e2 * b + e2 * e2 + 2 * c * e2 + c) * v
    )

    lam = lambda label: Fraction(label[0] + label[1])
    lattices = (
        LatticeSpec(LatticeSpec.WILSON, None, "x"),
        LatticeSpec(LatticeSpec.WILSON, None, "y"),
    )
    return CoeffTable(
        CDH, [f1, f2, f3, f4, f5, f6, f7, f8], BIVARIATE_OPS, lam, lattices, -1
    )


def ch_table(params) -> CoeffTable:
    a1, e2, a3, b1, b3 = (params[k] for k in ("a1", "e2", "a3", "b1", "b3"))
    x, y = _xy()
    h = HALF
    q = Fraction(1, 4)

    f8 = II * (a1 * b3 + e2 * b3 - e2 * a3 - b1 * a3) + (-a1 - b1 - 2 * e2 - b3 - a3) * y
    f7 = II * (a1 * b3 - b1 * a3 - b1 * e2 + a1 * e2) + (-a1 - b1 - 2 * e2 - b3 - a3) * x
    f6 = (
        h * a1 * b3 + h * e2 * b3 + h * e2 * a3 + h * b1 * a3
        - y ** 2
        + h * II * (a1 + b3 - a3 - b1) * y
    )
    f5 = (
        h * a1 * b3 + h * b1 * a3 + h * a1 * e2 + h * b1 * e2
        + h * II * (a1 + b3 - a3 - b1) * x
        - x ** 2
    )
    f4 = (
        a1 * b3 + b1 * a3
        - 2 * x * y
        - II * (-b3 + a3) * x
        + II * (-b1 + a1) * y
    )
    f3 = -h * II * (a1 * b3 - b1 * a3) + (h * b3 + h * a3) * x + (h * a1 + h * b1) * y
    f2 = -h * II * (a1 * b3 - b1 * a3) + (h * b3 + h * a3) * x + (h * a1 + h * b1) * y
    f1 = (
        -q * a1 * b3 - q * b1 * a3
        + h * x * y
        + q * II * (-b3 + a3) * x
        - q * II * (-b1 + a1) * y
    )

    sigma = a1 - 1 + 2 * e2 + b3 + a3 + b1
    lam = lambda label: (label[0] + label[1]) * (sigma + label[0] + label[1])
    lattices = (
        LatticeSpec(LatticeSpec.LINEAR, None, "x"),
        LatticeSpec(LatticeSpec.LINEAR, None, "y"),
    )
    return CoeffTable(
        CH, [f1, f2, f3, f4, f5, f6, f7, f8], BIVARIATE_OPS, lam, lattices, 0
    )


def ch_tri_table(params) -> CoeffTable:
    a1, e2, e3, a4, b1, b4 = (
        params[k] for k in ("a1", "e2", "e3", "a4", "b1", "b4")
    )
    x = MPoly.var(0, 3)
    y = MPoly.var(1, 3)
    z = MPoly.var(2, 3)
    h = HALF
    q = Fraction(1, 4)
    o = Fraction(1, 8)
    ssum = -a1 - 2 * e2 - 2 * e3 - b1 - b4 - a4

    f1 = ssum * z - II * (-b4 * a1 + b1 * a4 + e3 * a4 - b4 * e3 + e2 * a4 - b4 * e2)
    f2 = ssum * y - II * (-a1 * e3 + b1 * e3 - b4 * e2 - b4 * a1 + b1 * a4 + e2 * a4)
    f3 = (
        II * (-b1 * e2 + b4 * a1 - b1 * a4 + a1 * e3 - b1 * e3 + a1 * e2) + ssum * x
    )
    f4 = (
        (-2 * z - II * (-b4 + a4)) * y
        + II * (a1 - b1) * z
        + b1 * a4 + e2 * a4 + b4 * a1 + b4 * e2
    )
    f5 = (-2 * z - II * (-b4 + a4)) * x + II * (a1 - b1) * z + b1 * a4 + b4 * a1
    f6 = (
        (-2 * y - II * (-b4 + a4)) * x
        + II * (a1 - b1) * y
        + a1 * e3 + b1 * e3 + b4 * a1 + b1 * a4
    )
    f7 = (
        h * b4 * a1 + h * b1 * a4 + h * e2 * a4 + h * e3 * a4 + h * b4 * e2 + h * b4 * e3
        + h * II * (a1 - b1 - a4 + b4) * z
        - z ** 2
    )
    f8 = (
        h * b4 * a1 + h * a1 * e3 + h * b1 * e3 + h * b1 * a4 + e2 * e3
        + h * e2 * a4 + h * b4 * e2
        + h * II * (a1 - b1 - a4 + b4) * y
        - y ** 2
    )
    f9 = (
        h * a1 * e2 + h * b4 * a1 + h * a1 * e3 + h * b1 * e2 + h * b1 * e3 + h * b1 * a4
        + h * II * (a1 - b1 - a4 + b4) * x
        - x ** 2
    )
    f10 = (a4 + b4) * x + (a1 + b1) * z - II * (b4 * a1 - b1 * a4)
    f11 = (
        (h * b4 + h * a4) * y
        + (h * a1 + e2 + h * b1) * z
        + h * II * (b1 * a4 + e2 * a4 - b4 * a1 - b4 * e2)
    )
    f12 = (
        (h * a1 + h * b1) * y
        + (h * a4 + h * b4 + e3) * x
        - h * II * (-b1 * e3 + b4 * a1 - b1 * a4 + a1 * e3)
    )
    f13 = (
        (h * b4 + h * a4) * y
        + (h * a1 + e2 + h * b1) * z
        + h * II * (b1 * a4 + e2 * a4 - b4 * a1 - b4 * e2)
    )
    f14 = (h * a1 + h * b1) * z + (h * b4 + h * a4) * x - h * II * (b4 * a1 - b1 * a4)
    f15 = (
        (h * a1 + h * b1) * y
        + (h * a4 + h * b4 + e3) * x
        - h * II * (-b1 * e3 + b4 * a1 - b1 * a4 + a1 * e3)
    )
    f16 = (h * a1 + h * b1) * z + (h * b4 + h * a4) * x - h * II * (b4 * a1 - b1 * a4)
    f17 = (
        (h * II * (-b4 + a4) + z) * x
        - h * b1 * a4 - h * II * (a1 - b1) * z - h * b4 * a1
    )
    f18 = (
        (h * II * (-b4 + a4) + z) * x
        - h * b1 * a4 - h * II * (a1 - b1) * z - h * b4 * a1
    )
    f19 = (
        (h * II * (-b4 + a4) + z) * x
        - h * b1 * a4 - h * II * (a1 - b1) * z - h * b4 * a1
    )
    f20 = (
        (h * z + q * II * (-b4 + a4)) * y
        - q * e2 * a4 - q * b1 * a4
        - q * II * (a1 - b1) * z
        - q * b4 * a1 - q * b4 * e2
    )
    f21 = (
        (h * y + q * II * (-b4 + a4)) * x
        - q * a1 * e3 - q * II * (a1 - b1) * y
        - q * b1 * a4 - q * b4 * a1 - q * b1 * e3
    )
    f22 = (
        (h * z + q * II * (-b4 + a4)) * x
        - q * b1 * a4 - q * II * (a1 - b1) * z - q * b4 * a1
    )
    f23 = (
        (-q * a4 - q * b4) * x + (-q * a1 - q * b1) * z + q * II * (b4 * a1 - b1 * a4)
    )
    f24 = (
        (-q * a4 - q * b4) * x + (-q * a1 - q * b1) * z + q * II * (b4 * a1 - b1 * a4)
    )
    f25 = (
        (-q * a4 - q * b4) * x + (-q * a1 - q * b1) * z + q * II * (b4 * a1 - b1 * a4)
    )
    f26 = (
        (-o * II * (-b4 + a4) - q * z) * x
        + o * b4 * a1 + o * b1 * a4 + o * II * (a1 - b1) * z
    )

    sigma = a1 + 2 * e2 + 2 * e3 + a4 + b1 + b4
    lam = lambda label: (label[0] + label[1] + label[2]) * (
        label[0] + label[1] + label[2] - 1 + sigma
    )
    lattices = (
        LatticeSpec(LatticeSpec.LINEAR, None, "x"),
        LatticeSpec(LatticeSpec.LINEAR, None, "y"),
        LatticeSpec(LatticeSpec.LINEAR, None, "z"),
    )
    coeffs = [
        f1, f2, f3, f4, f5, f6, f7, f8, f9, f10, f11, f12, f13,
        f14, f15, f16, f17, f18, f19, f20, f21, f22, f23, f24, f25, f26,
    ]
    return CoeffTable(CH_TRI, coeffs, TRIVARIATE_OPS, lam, lattices, 0)


_TABLE_BUILDERS = {
    RACAH: racah_table,
    RACAH_BAR: racah_table,
    WILSON: wilson_table,
    WILSON_BAR: wilson_table,
    CDH: cdh_table,
    CH: ch_table,
    CH_BAR: ch_table,
    CH_TRI: ch_tri_table,
}


def coefficients(spec: FamilySpec) -> CoeffTable:
    """The printed coefficient table of the equation the family solves."""
    return _TABLE_BUILDERS[spec.family](spec.params)


# ---------------------------------------------------------------------------
# derived tables (difference derivatives of solutions)
# ---------------------------------------------------------------------------

def _wsq_poly(lattice: LatticeSpec, var, nvars):
    (q0, q1), _ = lattice.shift_algebra()
    return q1 * MPoly.var(var, nvars) + MPoly.const(nvars, q0)


def derived_coefficients(base: CoeffTable, direction) -> CoeffTable:
    """Coefficient table annihilating the requested difference derivative of
    the base equation's solutions.

    direction "x" and "y" follow the printed combination rules; "xy" chains
    y first, then x.
    """
    if base.order != "fourth":
        raise ValueError("derived tables are defined for fourth-order tables")
    if direction == "xy":
        return derived_coefficients(derived_coefficients(base, "y"), "x")
    if direction not in ("x", "y"):
        raise ValueError(f"unknown direction {direction!r}")

    var = 0 if direction == "x" else 1
    eps = Fraction(base.epsilon, 2)
    lat = base.lattices[var]
    u2 = _wsq_poly(lat, var, 2)
    f1, f2, f3, f4, f5, f6, f7, f8 = base.coeffs
    D = lambda p: poly_D(p, var, lat)
    S = lambda p: poly_S(p, var, lat)

    if direction == "x":
        g8 = f8 + D(f4)
        g7 = S(f7) + eps * D(f7) + D(f5)
        g6 = f6 + D(f2)
        g5 = S(f5) + D(f7) * u2 + eps * S(f7)
        g4 = eps * D(f4) + D(f3) + S(f4)
        g3 = eps * S(f4) + S(f3) + D(f4) * u2
        g2 = eps * D(f2) + D(f1) + S(f2)
        g1 = eps * S(f2) + S(f1) + D(f2) * u2
        shift_poly = f7
    else:
        g8 = S(f8) + eps * D(f8) + D(f6)
        g7 = f7 + D(f4)
        g6 = D(f8) * u2 + eps * S(f8) + S(f6)
        g5 = f5 + D(f3)
        g4 = eps * D(f4) + D(f2) + S(f4)
        g3 = eps * D(f3) + D(f1) + S(f3)
        g2 = eps * S(f4) + S(f2) + D(f4) * u2
        g1 = eps * S(f3) + S(f1) + D(f3) * u2
        shift_poly = f8

    shift = D(shift_poly)
    if shift.total_degree() > 0:
        raise AssertionError("eigenvalue shift is not constant")
    shift_c = shift.coeff((0, 0))
    base_lam = base.eigenvalue
    lam = lambda label, _b=base_lam, _s=shift_c: _b(label) + _s

    return CoeffTable(
        base.family,
        [g1, g2, g3, g4, g5, g6, g7, g8],
        BIVARIATE_OPS,
        lam,
        base.lattices,
        base.epsilon,
    )


def eigenvalue_shift(base: CoeffTable, direction) -> Fraction:
    """D_x f7 (direction x) or D_y f8 (direction y), as a constant."""
    var = 0 if direction == "x" else 1
    p = base.coeffs[6] if direction == "x" else base.coeffs[7]
    shift = poly_D(p, var, base.lattices[var])
    return shift.coeff((0, 0))


# ---------------------------------------------------------------------------
# residual evaluation
# ---------------------------------------------------------------------------

def table_residual_on(table: CoeffTable, f, label, point):
    """Residual of the table's equation on an arbitrary stencil function."""
    point = tuple(point)
    latpt = table.lattice_point(point)
    total = table.eigenvalue(label) * f(point)
    for fi, lind in zip(table.coeffs, table.lindices):
        ci = fi.eval(latpt)
        if not ci:
            continue
        weights = stencil_weights(table.lattices, lind, point)
        term = sum((w * f(q) for q, w in weights.items()), start=Fraction(0))
        total = total + ci * term
    return demote(total)


def residual(table: CoeffTable, spec: FamilySpec, label, point):
    """Sum f_i (E_i P)(point) + lambda P(point); exactly 0 on family members."""
    label = check_label(spec, label)
    point = check_point(spec, point)
    f = family_function(spec, label)
    return table_residual_on(table, f, label, point)


def trivariate_residual(spec: FamilySpec, label, point):
    if spec.family != CH_TRI:
        raise ValueError("trivariate residual only applies to the ch-tri family")
    return residual(coefficients(spec), spec, label, point)


def derivative_function(spec: FamilySpec, label, direction):
    """The difference derivative of the family member, as a stencil function."""
    var = {"x": 0, "y": 1}.get(direction)
    f = family_function(spec, label)
    lattices = spec.lattices()
    if var is not None:
        lat = lattices[var]
        return lambda pt: apply_D(lat, _fix_var(f, pt, var), pt[var])

    if direction != "xy":
        raise ValueError(f"unknown direction {direction!r}")

    def dy(pt):
        return apply_D(lattices[1], _fix_var(f, pt, 1), pt[1])

    return lambda pt: apply_D(lattices[0], _fix_var(dy, pt, 0), pt[0])


# ---------------------------------------------------------------------------
# second-order equations
# ---------------------------------------------------------------------------

SECOND_ORDER_KINDS = ("racah-x", "wilson-x", "wilson-bar-y", "cdh-x")


def second_order_residual(kind, spec: FamilySpec, label, point):
    """LHS of the printed second-order divided-difference equation."""
    label = check_label(spec, label)
    point = check_point(spec, point)
    p = spec.params
    x, y = _xy()
    if kind == "racah-x":
        if spec.family != RACAH:
            raise ValueError("racah-x applies to the racah family")
        b0, b1, b2 = p["beta0"], p["beta1"], p["beta2"]
        phi = (
            -(x ** 2)
            + x * y
            + (b0 * b2 - b1 * (b2 + b0) / 2) * x
            + b1 * (b1 - b0) / 2 * y
        )
        tau = (b0 - b2) * x + (b1 - b0) * y
        lam = label[0] * (b2 - b0 + label[0] - 1)
        var = 0
    elif kind == "wilson-x":
        if spec.family != WILSON:
            raise ValueError("wilson-x applies to the wilson family")
        a, b, e2 = p["a"], p["b"], p["e2"]
        phi = (
            x ** 2
            - x * y
            + (-2 * a * e2 - b * a - 2 * b * e2 - e2 * e2) * x
            + a * b * y
            + MPoly.const(2, a * b * e2 * e2)
        )
        tau = (
            (a + 2 * e2 + b) * x
            - (a + b) * y
            - MPoly.const(2, 2 * b * a * e2 + b * e2 * e2 + a * e2 * e2)
        )
        lam = -label[0] * (label[0] - 1 + a + b + 2 * e2)
        var = 0
    elif kind == "wilson-bar-y":
        if spec.family != WILSON_BAR:
            raise ValueError("wilson-bar-y applies to the wilson-bar family")
        c, d, e2 = p["c"], p["d"], p["e2"]
        phi = (
            -x * y
            + y ** 2
            + c * d * x
            + (-2 * c * e2 - d * c - 2 * d * e2 - e2 * e2) * y
            + MPoly.const(2, c * d * e2 * e2)
        )
        tau = (
            (-c - d) * x
            + (c + 2 * e2 + d) * y
            - MPoly.const(2, d * e2 * e2 + 2 * d * c * e2 + c * e2 * e2)
        )
        lam = -label[1] * (label[1] - 1 + c + d + 2 * e2)
        var = 1
    elif kind == "cdh-x":
        if spec.family != CDH:
            raise ValueError("cdh-x applies to the cdh family")
        a, e2 = p["a"], p["e2"]
        phi = (-a - 2 * e2) * x + a * y + MPoly.const(2, a * e2 * e2)
        tau = x - y - MPoly.const(2, 2 * a * e2 + e2 * e2)
        lam = Fraction(-label[0])
        var = 0
    else:
        raise ValueError(f"unknown second-order kind {kind!r}")

    lattices = spec.lattices()
    f = family_function(spec, label)
    latpt = tuple(lattice_value(l, v) for l, v in zip(lattices, point))
    lindex_d2 = tuple(2 if i == var else 0 for i in range(2))
    lindex_sd = tuple(1 if i == var else 0 for i in range(2))
    d2 = apply_mixed(lattices, lindex_d2, f, point)
    sd = apply_mixed(lattices, lindex_sd, f, point)
    return demote(phi.eval(latpt) * d2 + tau.eval(latpt) * sd + lam * f(tuple(point)))


# ---------------------------------------------------------------------------
# difference (stencil) forms
# ---------------------------------------------------------------------------

DIFFERENCE_FORM_KINDS = ("racah-gi", "wilson-f", "ch-f")


def racah_gi_stencil(params, label, s, t):
    """Offset -> rational coefficient of the nine-term difference equation
    for the bivariate Racah family (identity parts folded into (0,0))."""
    b0, b1, b2, b3, N = (params[k] for k in ("beta0", "beta1", "beta2", "beta3", "N"))
    n, m = label
    den_s0 = (b1 + 2 * s) * (b1 + 2 * s + 1)
    den_s1 = (b1 + 2 * s - 1) * (b1 + 2 * s + 1)
    den_s2 = (b1 + 2 * s - 1) * (b1 + 2 * s)
    den_t0 = (b2 + 2 * t) * (b2 + 2 * t + 1)
    den_t1 = (b2 + 2 * t - 1) * (b2 + 2 * t + 1)
    den_t2 = (b2 + 2 * t - 1) * (b2 + 2 * t)
    for d in (den_s0, den_s1, den_s2, den_t0, den_t1, den_t2):
        if not d:
            raise SingularPointError(f"nine-term denominator vanishes at ({s}, {t})")

    c = {}

    def put(offset, value, reversed_sign):
        # reversed_sign: the printed group is (I - R(shifted)) instead of
        # (R(shifted) - I)
        sign = -1 if reversed_sign else 1
        c[offset] = c.get(offset, 0) + sign * value
        c[(0, 0)] = c.get((0, 0), 0) - sign * value

    t1 = (
        (N - t) * (b1 + s) * (-b0 + b1 + s) * (b3 + N + t)
        * (b2 + s + t) * (b2 + s + t + 1)
    ) / (den_s0 * den_t0)
    put((1, 1), t1, False)

    t2 = (
        (b1 + s) * (-b0 + b1 + s) * (t - s) * (b2 + s + t)
        * ((b2 + 1) * (b3 - 1) + 2 * N * (b3 + N) + 2 * t * (b2 + t))
    ) / (den_s0 * den_t1)
    put((1, 0), t2, False)

    t3 = (
        (N - t) * (b3 + N + t) * (b2 + s + t) * (-b1 + b2 - s + t)
        * ((b0 + 1) * (b1 - 1) + 2 * s * (b1 + s))
    ) / (den_s1 * den_t0)
    put((0, 1), t3, False)

    t4 = -(
        s * (N - t) * (b0 + s) * (b3 + N + t)
        * (b1 - b2 + s - t - 1) * (b1 - b2 + s - t)
    ) / (den_s2 * den_t0)
    put((-1, 1), t4, True)

    t5 = (
        (b1 + s) * (b1 - b0 + s) * (s - t) * (s - t + 1)
        * (b2 + N + t) * (b2 - b3 - N + t)
    ) / (den_s0 * den_t2)
    put((1, -1), t5, True)

    t6 = (
        s * (b0 + s) * (b2 + N + t) * (b2 - b3 - N + t)
        * (b1 + s + t - 1) * (b1 + s + t)
    ) / (den_s2 * den_t2)
    put((-1, -1), t6, True)

    t7 = (
        s * (b0 + s)
        * ((b2 + 1) * (b3 - 1) + 2 * N * N + 2 * b3 * N + 2 * t * t + 2 * b2 * t)
        * (b1 + s + t) * (b1 - b2 + s - t)
    ) / (den_s2 * den_t1)
    put((-1, 0), t7, True)

    t8 = -(
        ((b0 + 1) * (b1 - 1) + 2 * s * s + 2 * b1 * s)
        * (s - t) * (b2 + N + t) * (b2 - b3 - N + t) * (b1 + s + t)
    ) / (den_s1 * den_t2)
    put((0, -1), t8, True)

    c[(0, 0)] = c.get((0, 0), 0) + (m + n) * (b3 - b0 + m + n - 1)
    return c


def wilson_f_stencil(params, label, x, y):
    """Offset -> coefficient of the printed Wilson difference equation."""
    if not x or not y:
        raise SingularPointError("Wilson difference form needs x, y nonzero")
    table = wilson_table(params)
    f1, f2, f3, f4, f5, f6, f7, f8 = (
        gauss(fi.eval((x * x, y * y))) for fi in table.coeffs
    )
    n, m = label
    lam = table.eigenvalue(label)
    x = gauss(x)
    y = gauss(y)
    i = II

    F1 = (f1 - x * y * f4 + i * (x * f2 + y * f3)) / (
        4 * x * (2 * x + i) * y * (2 * y + i)
    )
    F2 = -(f1 + x * y * f4 + i * (x * f2 - y * f3)) / (
        4 * x * (2 * x + i) * y * (-2 * y + i)
    )
    F3 = (-f1 - x * y * f4 + i * (x * f2 - y * f3)) / (
        4 * x * (-2 * x + i) * y * (2 * y + i)
    )
    F4 = -(-f1 + i * f2 * x + i * f3 * y + f4 * y * x) / (
        4 * (-2 * y + i) * y * (-2 * x + i) * x
    )
    F5 = (
        -i
        * (
            i * f3 - 2 * f2 * x + 2 * i * f1 - 4 * f7 * x * y * y
            - f7 * x - f4 * x + 4 * i * f5 * y * y + i * f5
        )
        / (2 * (2 * x + i) * x * (2 * y + i) * (-2 * y + i))
    )
    F6 = (
        -i
        * (
            4 * i * f6 * x * x + i * f6 + i * f2 - 4 * f8 * y * x * x
            - f8 * y - f4 * y - 2 * f3 * y + 2 * i * f1
        )
        / (2 * (2 * y + i) * y * (2 * x + i) * (-2 * x + i))
    )
    F7 = (
        i
        * (
            2 * i * f1 + f4 * x + i * f3 + 4 * i * f5 * y * y + i * f5
            + 2 * f2 * x + 4 * f7 * x * y * y + f7 * x
        )
        / (2 * (-2 * x + i) * x * (2 * y + i) * (-2 * y + i))
    )
    F8 = (
        i
        * (
            2 * i * f1 + 4 * i * f6 * x * x + i * f6 + f4 * y
            + i * f2 + 2 * f3 * y + 4 * f8 * y * x * x + f8 * y
        )
        / (2 * (-2 * y + i) * y * (2 * x + i) * (-2 * x + i))
    )
    F9 = gauss(lam) + (
        4 * f1
        + f8 * (4 * x * x + 1)
        + f7 * (4 * y * y + 1)
        + f6 * (8 * x * x + 2)
        + f4
        + 2 * (f2 + f3)
        + f5 * (8 * y * y + 2)
    ) / ((2 * y + i) * (-2 * y + i) * (2 * x + i) * (-2 * x + i))

    return {
        (1, 1): F1,
        (1, -1): F2,
        (-1, 1): F3,
        (-1, -1): F4,
        (1, 0): F5,
        (0, 1): F6,
        (-1, 0): F7,
        (0, -1): F8,
        (0, 0): F9,
    }


def ch_f_stencil(params, label, x, y):
    """Offset -> coefficient of the printed continuous Hahn difference form."""
    table = ch_table(params)
    f1, f2, f3, f4, f5, f6, f7, f8 = (
        gauss(fi.eval((x, y))) for fi in table.coeffs
    )
    lam = table.eigenvalue(label)
    i = II
    half_i = i * HALF
    quarter = Fraction(1, 4)

    return {
        (1, 1): f1 + half_i * (f2 + f3) - quarter * f4,
        (1, -1): f1 + half_i * (f2 - f3) + quarter * f4,
        (-1, 1): f1 - half_i * (f2 - f3) + quarter * f4,
        (-1, -1): f1 - half_i * (f2 + f3) - quarter * f4,
        (1, 0): -2 * f1 - f5 - i * f2 - half_i * f7,
        (0, 1): -2 * f1 - i * f3 - f6 - half_i * f8,
        (-1, 0): -2 * f1 + i * f2 - f5 + half_i * f7,
        (0, -1): i * f3 - 2 * f1 - f6 + half_i * f8,
        (0, 0): 4 * f1 + 2 * f6 + 2 * f5 + gauss(lam),
    }


def difference_form_residual(kind, spec: FamilySpec, label, point):
    """The nine-term stencil sum at the point; exactly 0 on family members."""
    label = check_label(spec, label)
    point = check_point(spec, point)
    if kind == "racah-gi":
        if spec.family not in (RACAH, RACAH_BAR):
            raise ValueError("racah-gi applies to the racah families")
        stencil = racah_gi_stencil(spec.params, label, *point)
        step = Fraction(1)
    elif kind == "wilson-f":
        if spec.family not in (WILSON, WILSON_BAR):
            raise ValueError("wilson-f applies to the wilson families")
        stencil = wilson_f_stencil(spec.params, label, *point)
        step = II
    elif kind == "ch-f":
        if spec.family not in (CH, CH_BAR):
            raise ValueError("ch-f applies to the continuous Hahn families")
        stencil = ch_f_stencil(spec.params, label, *point)
        step = II
    else:
        raise ValueError(f"unknown difference form {kind!r}")

    f = family_function(spec, label)
    total = Fraction(0)
    for (o1, o2), coeff in stencil.items():
        q = (gauss(point[0]) + step * o1, gauss(point[1]) + step * o2)
        if step == 1:
            q = (point[0] + o1, point[1] + o2)
        total = total + coeff * f(q)
    return demote(total)


# ---------------------------------------------------------------------------
# coefficient recovery (the proof-route oracle)
# ---------------------------------------------------------------------------

OP_ORDER_WITH_IDENTITY = BIVARIATE_OPS + ((0, 0),)
OFFSETS_3X3 = tuple((o1, o2) for o1 in (-1, 0, 1) for o2 in (-1, 0, 1))


def operator_to_shift_matrix(lattices, point):
    """9 x 9 matrix M with (E_op f)(point) = sum_q M[op, q] f(point + q)."""
    rows = []
    for lind in OP_ORDER_WITH_IDENTITY:
        weights = stencil_weights(lattices, lind, point)
        row = []
        for off in OFFSETS_3X3:
            q = (point[0] + off[0], point[1] + off[1])
            row.append(weights.get(q, Fraction(0)))
        rows.append(row)
    return ExactMatrix(rows)


def recover_coefficients(params, label=(1, 1), degree_bound=4):
    """Re-derive the Racah coefficient table from the nine-term difference
    equation by expressing the shifted values through the mixed-operator
    expressions and interpolating the resulting polynomial coefficients.

    Returns (table, eigenvalue_constant).  The recovered table is the
    typo-arbitration oracle for the printed Theorem coefficients.
    """
    spec = FamilySpec(RACAH, params=params)
    lattices = spec.lattices()
    nodes_count = degree_bound + 2
    svals = grid_points(lattices[0], nodes_count, origin=1)
    tvals = grid_points(lattices[1], nodes_count, origin=2)
    xnodes = [lattice_value(lattices[0], s) for s in svals]
    ynodes = [lattice_value(lattices[1], t) for t in tvals]

    samples = {}
    for i, s in enumerate(svals):
        for j, t in enumerate(tvals):
            gi = racah_gi_stencil(spec.params, label, s, t)
            cvec = [gi.get(off, Fraction(0)) for off in OFFSETS_3X3]
            m = operator_to_shift_matrix(lattices, (s, t))
            # solve g^T M = c  <=>  M^T g = c
            g = exact_inverse(m.transpose()).apply_rows(cvec)
            samples[(i, j)] = g

    polys = []
    for idx in range(9):
        poly = interpolate_bivariate(
            xnodes, ynodes, lambda i, j, _k=idx: samples[(i, j)][_k]
        )
        polys.append(poly)

    lam_poly = polys[8]
    if lam_poly.total_degree() > 0:
        raise AssertionError("recovered eigenvalue term is not constant")
    eig = lam_poly.coeff((0, 0))

    lam = lambda lbl: (lbl[0] + lbl[1]) * (
        params["beta3"] - params["beta0"] + lbl[0] + lbl[1] - 1
    )
    table = CoeffTable(RACAH, polys[:8], BIVARIATE_OPS, lam, lattices, +1)
    return table, eig


def compare_tables(table_a: CoeffTable, table_b: CoeffTable):
    """Coefficient-by-coefficient diff; empty when the tables agree."""
    diffs = []
    for i, (fa, fb) in enumerate(zip(table_a.coeffs, table_b.coeffs)):
        delta = fa - fb
        if not delta.is_zero():
            diffs.append((f"f{i + 1}", delta))
    return diffs


# ---------------------------------------------------------------------------
# verification sweeps
# ---------------------------------------------------------------------------

def residual_grid(spec: FamilySpec, label, size=None, offset=Fraction(1, 7)):
    """Tensor grid of nonsingular points sized (d+3) per axis, where d is
    the residual's total degree bound (family degree + 2)."""
    d = sum(check_label(spec, label)) + 2
    size = size if size is not None else d + 3
    lattices = spec.lattices()
    axes = [
        grid_points(lat, size, origin=1 + k, offset=offset)
        for k, lat in enumerate(lattices)
    ]
    return axes


def verify_table(spec: FamilySpec, max_total_degree, grid_size=None, table=None):
    """Residual sweep over all labels with total degree <= the bound.

    Returns a list of {label, points, pass} reports; residuals are exact
    zeros or the sweep reports failure with a witness.
    """
    if table is None:
        table = coefficients(spec)
    reports = []
    labels = _labels_up_to(spec.nvars, max_total_degree)
    for label in labels:
        axes = residual_grid(spec, label, size=grid_size)
        checked = 0
        witness = None
        for point in _tensor_points(axes):
            value = residual(table, spec, label, point)
            checked += 1
            if value:
                witness = (point, value)
                break
        record = {"label": list(label), "points": checked, "pass": witness is None}
        if witness is not None:
            from .exactfield import field_str

            record["point"] = [field_str(v) for v in witness[0]]
            record["value"] = field_str(witness[1])
        reports.append(record)
    return reports


def _labels_up_to(nvars, bound):
    out = []
    if nvars == 2:
        for n in range(bound + 1):
            for m in range(bound + 1 - n):
                out.append((n, m))
    else:
        for n in range(bound + 1):
            for m in range(bound + 1 - n):
                for r in range(bound + 1 - n - m):
                    out.append((n, m, r))
    return sorted(out, key=lambda l: (sum(l), l))


def _tensor_points(axes):
    if len(axes) == 2:
        for s in axes[0]:
            for t in axes[1]:
                yield (s, t)
    else:
        for s in axes[0]:
            for t in axes[1]:
                for u in axes[2]:
                    yield (s, t, u)
