"""Closed-form predictions for stable structure constants — the proved
two-reflection and column-union tables and the conjectured union/merge
formulas — plus a harness comparing every prediction against direct
computation, and exact polynomial fitting in q and in [n]_q.

Proved formulas are safe to assert; conjectured ones carry
status "conjectural" so a disagreement is a reportable finding, never a
silent assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from . import polyalg
from .classcalc import stable_constant, structure_constant_at
from .errors import ClassEmptyError
from .field import field_of_order
from .gltype import (GLType, det_of_type, enumerate_plain_types, gltype_make,
                     min_rank, norm, q_binomial, q_int)

if TYPE_CHECKING:
    from .field import Field

__all__ = [
    "Prediction", "FitResult", "CheckReport",
    "predict_reflection_product", "predict_union", "check_case",
    "sweep_two_reflections", "sweep_union_distinct", "sweep_union_equal",
    "sweep_merge_irreducible",
    "fit_polynomial_in_q", "fit_polynomial_in_n",
    "FIT_FAMILIES", "fit_family_in_q",
    "UNION_CASES",
]

PROVED = "proved"
CONJECTURAL = "conjectural"
ZERO_BY_GRADING = "zero-by-grading"


# ---------------------------------------------------------------------------
# result containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Prediction:
    """A closed-form value with its trust level and a descriptive source."""

    value: int
    status: str
    source: str

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("predicted structure constants are nonnegative")


@dataclass(frozen=True)
class FitResult:
    """Exact interpolation through (abscissa, value) points.

    `coefficients` are in the standard basis (low degree first);
    `shifted` are the coefficients of p(x+1), i.e. the expansion around
    q−1, whose conjectured nonnegativity is worth reporting.
    """

    variable: str
    points: tuple
    coefficients: tuple
    shifted: tuple
    all_integer: bool
    all_nonnegative_shifted: bool
    warning: str | None = None

    def evaluate(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class CheckReport:
    """One prediction-versus-computation comparison."""

    case: str
    params: str
    lam: GLType
    mu: GLType
    nu: GLType
    computed: int
    predicted: Prediction
    match: bool

    @property
    def is_failure(self) -> bool:
        """True only when a *proved* formula disagrees with the computation."""
        return (not self.match) and self.predicted.status != CONJECTURAL


# ---------------------------------------------------------------------------
# type-building helpers
# ---------------------------------------------------------------------------

def _reflection(field: "Field", xi: int) -> GLType:
    if xi == 0:
        raise ValueError("reflection eigenvalue must be a unit")
    return gltype_make(field, {polyalg.t_minus(field, xi): (1,)})


def _column_type(field: "Field", entries) -> GLType:
    """{poly: column height c} as the type {poly: (1,…,1)}, dropping c = 0."""
    return gltype_make(field, {f: (1,) * c for f, c in entries if c})


def _union(a: GLType, b: GLType) -> GLType:
    merged = {f: list(parts) for f, parts in a.entries}
    for f, parts in b.entries:
        merged.setdefault(f, []).extend(parts)
    return gltype_make(
        a.field,
        {f: tuple(sorted(parts, reverse=True)) for f, parts in merged.items()})


def _linear_root(field: "Field", f) -> int | None:
    return field.neg(f[0]) if len(f) == 2 else None


# ---------------------------------------------------------------------------
# the proved two-reflection table
# ---------------------------------------------------------------------------

def predict_reflection_product(field: "Field", xi: int, eta: int,
                               nu: GLType) -> Prediction:
    """The complete norm-2 coefficient table for a product of two
    reflection class sums with eigenvalues ξ and η."""
    if xi not in field.units() or eta not in field.units():
        raise ValueError("reflection eigenvalues must be units")
    if norm(nu) != 2:
        raise ValueError(f"the table covers ‖ν‖ = 2 only, got {norm(nu)}")
    q = field.q
    if det_of_type(nu) != field.mul(xi, eta):
        return Prediction(0, ZERO_BY_GRADING, "determinant grading")
    entries = nu.entries
    if len(entries) == 2:  # two distinct eigenvalue columns (1) ∪ (1)
        roots = {_linear_root(field, f) for f, _ in entries}
        value = 2 * q - 1 if roots == {xi, eta} else q - 1
        return Prediction(value, PROVED, "two-reflection product table")
    (f, parts), = entries
    root = _linear_root(field, f)
    if parts == (1, 1):
        value = q * q + q if root == xi == eta else 0
        return Prediction(value, PROVED, "two-reflection product table")
    if parts == (2,):
        value = 2 * q if root in (xi, eta) else q
        return Prediction(value, PROVED, "two-reflection product table")
    assert parts == (1,) and len(f) == 3, "norm-2 shapes are exhausted"
    return Prediction(q + 1, PROVED, "two-reflection product table")


# ---------------------------------------------------------------------------
# union and merge predictors
# ---------------------------------------------------------------------------

def _predict_union_distinct(field: "Field", xs) -> Prediction:
    xs = tuple(xs)
    if len(set(xs)) != len(xs) or any(x not in field.units() for x in xs):
        raise ValueError("eigenvalues must be distinct units")
    return Prediction((2 * field.q - 1) ** (len(xs) - 1), PROVED,
                      "union of distinct eigenvalue columns")


def _predict_union_equal(field: "Field", xi: int, c: int, d: int) -> Prediction:
    if xi in (0, 1):
        raise ValueError("the column-merge formula needs an eigenvalue ≠ 0, 1")
    if c < 1 or d < 1:
        raise ValueError("column heights must be positive")
    q = field.q
    return Prediction(q ** (c * d) * q_binomial(q, c + d, c), PROVED,
                      "equal-eigenvalue column merge")


def _predict_union_mixed(field: "Field", xs, cs) -> Prediction:
    xs, cs = tuple(xs), tuple(cs)
    if len(xs) != len(cs):
        raise ValueError("one column height per eigenvalue")
    if len(set(xs)) != len(xs) or any(x not in field.units() for x in xs):
        raise ValueError("eigenvalues must be distinct units")
    if cs[0] < 0 or any(c < 1 for c in cs[1:]):
        raise ValueError("column heights must be positive (the first may be 0)")
    q = field.q
    value = q ** cs[0] * q_int(q, cs[0] + 1)
    for c in cs[1:]:
        value *= 2 * q ** c - 1
    return Prediction(value, CONJECTURAL, "mixed union with a repeated eigenvalue")


def _predict_union_poly(field: "Field", xi: int, f) -> Prediction:
    f = tuple(f)
    if xi not in field.units():
        raise ValueError("the reflection eigenvalue must be a unit")
    if f == polyalg.t_minus(field, xi):
        raise ValueError("the factor must differ from the reflection's own")
    if not polyalg.is_irreducible(field, f) or f[0] == 0:
        raise ValueError("the factor must be irreducible and prime to t")
    return Prediction(2 * field.q ** (len(f) - 1) - 1, CONJECTURAL,
                      "reflection joined to an irreducible factor")


def _predict_union_poly_mixed(field: "Field", xi: int, c1: int,
                              factors) -> Prediction:
    if xi not in field.units():
        raise ValueError("the reflection eigenvalue must be a unit")
    if c1 < 0:
        raise ValueError("the repeated column height may not be negative")
    q = field.q
    value = q ** c1 * q_int(q, c1 + 1)
    seen = set()
    for f, c in factors:
        f = tuple(f)
        if f == polyalg.t_minus(field, xi) or f in seen:
            raise ValueError("factors must be distinct and differ from the "
                             "reflection's own")
        if not polyalg.is_irreducible(field, f) or f[0] == 0 or c < 1:
            raise ValueError("factors must be irreducible, prime to t, with "
                             "positive column heights")
        seen.add(f)
        value *= 2 * q ** ((len(f) - 1) * c) - 1
    return Prediction(value, CONJECTURAL, "mixed union with irreducible factors")


def _predict_merge_irreducible(field: "Field", xi: int, fprime, f) -> Prediction:
    """Coefficient of a single irreducible factor one degree up: the q-integer
    [d] when the constant terms are compatible, zero by grading otherwise."""
    fprime, f = tuple(fprime), tuple(f)
    if xi not in field.units():
        raise ValueError("the reflection eigenvalue must be a unit")
    for g in (fprime, f):
        if not polyalg.is_irreducible(field, g) or g[0] == 0:
            raise ValueError("both factors must be irreducible and prime to t")
    if len(f) != len(fprime) + 1:
        raise ValueError("the target factor must be one degree higher")
    d = len(f) - 1
    if d < 3:
        raise ValueError("the merge formula applies from degree 3 up")
    if f[0] != field.neg(field.mul(xi, fprime[0])):
        return Prediction(0, ZERO_BY_GRADING, "determinant grading")
    return Prediction(q_int(field.q, d), CONJECTURAL,
                      "reflection merging into one irreducible factor")


UNION_CASES = {
    "union-distinct": _predict_union_distinct,
    "union-equal": _predict_union_equal,
    "union-mixed": _predict_union_mixed,
    "union-poly": _predict_union_poly,
    "union-poly-mixed": _predict_union_poly_mixed,
    "merge-irreducible": _predict_merge_irreducible,
}


def predict_union(field: "Field", case: str, **params) -> Prediction:
    """Dispatch to one closed-form union/merge predictor by case name."""
    try:
        fn = UNION_CASES[case]
    except KeyError:
        raise ValueError(
            f"unknown case {case!r}; choose from {sorted(UNION_CASES)}") from None
    return fn(field, **params)


# ---------------------------------------------------------------------------
# prediction-versus-computation checks
# ---------------------------------------------------------------------------

def _case_triple(field: "Field", case: str, params: dict):
    """The (λ, μ, ν) triple a case describes; ν is always λ ∪ μ except for
    the merge case, whose target is the given irreducible factor."""
    if case == "two-reflections":
        lam = _reflection(field, params["xi"])
        mu = _reflection(field, params["eta"])
        return lam, mu, params["nu"]
    if case == "union-distinct":
        xs = tuple(params["xs"])
        lam = _reflection(field, xs[0])
        mu = _column_type(field, [(polyalg.t_minus(field, x), 1)
                                  for x in xs[1:]])
        return lam, mu, _union(lam, mu)
    if case == "union-equal":
        lam = _column_type(
            field, [(polyalg.t_minus(field, params["xi"]), params["c"])])
        mu = _column_type(
            field, [(polyalg.t_minus(field, params["xi"]), params["d"])])
        return lam, mu, _union(lam, mu)
    if case == "union-mixed":
        xs, cs = tuple(params["xs"]), tuple(params["cs"])
        lam = _reflection(field, xs[0])
        mu = _column_type(field, [(polyalg.t_minus(field, x), c)
                                  for x, c in zip(xs, cs)])
        return lam, mu, _union(lam, mu)
    if case == "union-poly":
        lam = _reflection(field, params["xi"])
        mu = _column_type(field, [(tuple(params["f"]), 1)])
        return lam, mu, _union(lam, mu)
    if case == "union-poly-mixed":
        lam = _reflection(field, params["xi"])
        entries = [(polyalg.t_minus(field, params["xi"]), params["c1"])]
        entries += [(tuple(f), c) for f, c in params["factors"]]
        mu = _column_type(field, entries)
        return lam, mu, _union(lam, mu)
    if case == "merge-irreducible":
        lam = _reflection(field, params["xi"])
        mu = _column_type(field, [(tuple(params["fprime"]), 1)])
        nu = _column_type(field, [(tuple(params["f"]), 1)])
        return lam, mu, nu
    raise ValueError(f"unknown case {case!r}")


def _render_params(field: "Field", params: dict) -> str:
    def show(key, value):
        if key in ("f", "fprime"):
            return polyalg.format_poly(field, tuple(value))
        if key == "factors":
            return "(" + ",".join(
                f"{polyalg.format_poly(field, tuple(f))}^{c}"
                for f, c in value) + ")"
        return str(value)

    return " ".join(f"{k}={show(k, v)}" for k, v in params.items())


def check_case(field: "Field", case: str, jobs: int = 1, **params) -> CheckReport:
    """Compute the stable coefficient directly and compare it with the
    matching closed form; the prediction is never trusted."""
    lam, mu, nu = _case_triple(field, case, params)
    if case == "two-reflections":
        predicted = predict_reflection_product(
            field, params["xi"], params["eta"], nu)
    else:
        predicted = predict_union(
            field, case, **{k: v for k, v in params.items() if k != "nu"})
    computed = stable_constant(lam, mu, nu, field, jobs=jobs)
    return CheckReport(case=case, params=_render_params(field, params),
                       lam=lam, mu=mu, nu=nu, computed=computed,
                       predicted=predicted, match=computed == predicted.value)


def sweep_two_reflections(field: "Field", jobs: int = 1) -> list:
    """Every (ξ, η, ν) with ‖ν‖ = 2 — the table's entire domain at this q."""
    reports = []
    for xi in field.units():
        for eta in field.units():
            for nu in enumerate_plain_types(field, 2):  # read as modified
                reports.append(check_case(field, "two-reflections",
                                          jobs=jobs, xi=xi, eta=eta, nu=nu))
    return reports


def sweep_union_distinct(field: "Field", d: int, jobs: int = 1) -> list:
    """All ordered tuples of d distinct unit eigenvalues (possibly none)."""
    import itertools
    return [check_case(field, "union-distinct", jobs=jobs, xs=xs)
            for xs in itertools.permutations(field.units(), d)]


def sweep_union_equal(field: "Field", pairs=((1, 1), (1, 2), (2, 1)),
                      jobs: int = 1) -> list:
    reports = []
    for xi in field.units():
        if xi == 1:
            continue
        for c, d in pairs:
            reports.append(check_case(field, "union-equal", jobs=jobs,
                                      xi=xi, c=c, d=d))
    return reports


def sweep_merge_irreducible(field: "Field", xi: int, fprime,
                            jobs: int = 1) -> list:
    """One report per monic irreducible target one degree above f′ — both the
    compatible constant terms (predicted [d]) and the graded zeros."""
    fprime = tuple(fprime)
    d = len(fprime)  # degree of the targets = deg f′ + 1
    targets = [f for f in polyalg.enumerate_phi(field, d) if len(f) == d + 1]
    return [check_case(field, "merge-irreducible", jobs=jobs,
                       xi=xi, fprime=fprime, f=f) for f in targets]


# ---------------------------------------------------------------------------
# exact polynomial fitting
# ---------------------------------------------------------------------------

def _poly_add(a: list, b: list) -> list:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_scale(a: list, s: Fraction) -> list:
    return [c * s for c in a]


def _poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(a: list) -> tuple:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(a)


def _shift_by_one(coeffs) -> tuple:
    """Coefficients of p(x+1) from those of p(x), by Horner in (x+1)."""
    n = len(coeffs)
    out = [Fraction(0)] * n
    for c in reversed(coeffs):
        for i in range(n - 1, 0, -1):  # out ← out·(x+1), in place
            out[i] += out[i - 1]
        out[0] += c
    return tuple(out)


def fit_polynomial_in_q(points) -> FitResult:
    """Lagrange interpolation through exact integer points (q_i, value_i)."""
    pts = [(Fraction(a), Fraction(v)) for a, v in points]
    if len(pts) < 2:
        raise ValueError("at least two points are required")
    if len({a for a, _ in pts}) != len(pts):
        raise ValueError("duplicate abscissae")
    coeffs = [Fraction(0)]
    for i, (xi, yi) in enumerate(pts):
        basis = [yi]
        for j, (xj, _) in enumerate(pts):
            if j == i:
                continue
            basis = _poly_mul(basis, [-xj, Fraction(1)])
            basis = _poly_scale(basis, Fraction(1, 1) / (xi - xj))
        coeffs = _poly_add(coeffs, basis)
    coefficients = _trim(coeffs)
    shifted = _shift_by_one(coefficients)
    result = FitResult(
        variable="q",
        points=tuple((int(a), int(v)) for a, v in pts),
        coefficients=coefficients,
        shifted=shifted,
        all_integer=all(c.denominator == 1 for c in coefficients),
        all_nonnegative_shifted=all(c >= 0 for c in shifted),
    )
    for a, v in pts:
        assert result.evaluate(a) == v, "interpolation must reproduce inputs"
    return result


def fit_polynomial_in_n(lam: GLType, mu: GLType, nu: GLType,
                        field: "Field" = None, n_list=(None,),
                        jobs: int = 1) -> FitResult:
    """Interpolate a^ν_λμ(n) in the variable x = [n]_q over the given ranks."""
    F = field if field is not None else lam.field
    ns = tuple(n_list)
    if len(ns) < 2 or len(set(ns)) != len(ns):
        raise ValueError("at least two distinct ranks are required")
    k = min_rank(nu)
    if any(n is None or n < k for n in ns):
        raise ValueError(f"every rank must be at least k = {k}")
    pts = []
    for n in ns:
        try:
            a = structure_constant_at(lam, mu, nu, n, F, jobs=jobs)
        except ClassEmptyError:
            a = 0
        pts.append((q_int(F.q, n), a))
    base = fit_polynomial_in_q(pts)
    result = FitResult(
        variable="x", points=base.points, coefficients=base.coefficients,
        shifted=base.shifted, all_integer=base.all_integer,
        all_nonnegative_shifted=base.all_nonnegative_shifted,
        warning=f"degree is determined only up to {len(pts) - 1}; "
                "more ranks could reveal higher terms")
    return result


# ---------------------------------------------------------------------------
# cross-q families (integer polynomial labels, reduced modulo each q)
# ---------------------------------------------------------------------------

def _reduce_label(field: "Field", label) -> tuple | None:
    """An integer-coefficient monic label as a polynomial over F_q, or None
    when reduction degenerates (becomes t, drops degree, or turns reducible)."""
    f = tuple(c % field.p for c in label)
    if field.e != 1:
        raise ValueError("integer labels reduce into prime fields only")
    if f[-1] != 1 or f[0] == 0:
        return None
    if len(f) > 2 and not polyalg.is_irreducible(field, f):
        return None
    return f


#: label → (description, builder); the builder returns case parameters for
#: check_case from reduced labels, or None when this q must be skipped.
FIT_FAMILIES = {
    "pair-same-eigenvalue": (
        "two reflections with one shared eigenvalue merging into a column",
        lambda field: _family_union_mixed(field, ((-2, 1),), (1,))),
    "pair-distinct-eigenvalues": (
        "two reflections with distinct eigenvalues joining up",
        lambda field: _family_union_mixed(field, ((-2, 1), (-1, 1)), (0, 1))),
    "column-two-distinct": (
        "a reflection joining a two-column class of another eigenvalue",
        lambda field: _family_union_mixed(field, ((-1, 1), (-2, 1)), (0, 2))),
    "quadratic-join": (
        "a reflection joining an irreducible quadratic factor",
        lambda field: _family_union_poly(field, (-2, 1), (-4, 1, 1))),
}


def _family_union_mixed(field: "Field", labels, cs):
    reduced = []
    for label in labels:
        f = _reduce_label(field, label)
        if f is None:
            return None
        reduced.append(f)
    if len(set(reduced)) != len(reduced):
        return None  # labels collided after reduction
    xs = tuple(field.neg(f[0]) for f in reduced)
    if any(x == 0 for x in xs):
        return None
    return {"case": "union-mixed", "xs": xs, "cs": tuple(cs)}


def _family_union_poly(field: "Field", xi_label, f_label):
    lin = _reduce_label(field, xi_label)
    f = _reduce_label(field, f_label)
    if lin is None or f is None or len(f) != 3:
        return None
    xi = field.neg(lin[0])
    if xi == 0 or f == polyalg.t_minus(field, xi):
        return None
    return {"case": "union-poly", "xi": xi, "f": f}


def fit_family_in_q(name: str, q_list=(3, 5, 7), jobs: int = 1):
    """Run one labeled family at several q and fit the results in q.

    Returns (FitResult or None, reports, skipped) where `reports` holds the
    per-q CheckReports and `skipped` the q values whose label reduction
    degenerated.
    """
    try:
        description, builder = FIT_FAMILIES[name]
    except KeyError:
        raise ValueError(
            f"unknown family {name!r}; choose from {sorted(FIT_FAMILIES)}"
        ) from None
    points, reports, skipped = [], [], []
    for q in q_list:
        field = field_of_order(q)
        params = builder(field)
        if params is None:
            skipped.append(q)
            continue
        case = params.pop("case")
        report = check_case(field, case, jobs=jobs, **params)
        reports.append(report)
        points.append((q, report.computed))
    fit = fit_polynomial_in_q(points) if len(points) >= 2 else None
    return fit, reports, skipped
