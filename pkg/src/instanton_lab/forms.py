"""Homogeneous polynomials over Q, determinants of linear matrices, binary forms."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from .exact import ExactError, Matrix, as_rational, det, has_full_column_rank, rational_str, solve


class ZeroForm(ExactError):
    pass


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total ``degree`` in lexicographically decreasing order."""
    if degree < 0:
        return []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def num_monomials(nvars: int, degree: int) -> int:
    if degree < 0:
        return 0
    from math import comb

    return comb(degree + nvars - 1, nvars - 1)


class HomogeneousForm:
    """A homogeneous polynomial stored as ``{exponent tuple: Fraction}``."""

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int, terms: dict | None = None):
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            c = as_rational(c)
            if len(e) != nvars or sum(e) != degree or any(x < 0 for x in e):
                raise ExactError(f"exponent {e} does not fit a degree-{degree} form in {nvars} vars")
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    @classmethod
    def variable(cls, nvars: int, i: int) -> HomogeneousForm:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, 1, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> HomogeneousForm:
        n = len(coeffs)
        return cls(n, 1, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def constant(cls, nvars: int, c) -> HomogeneousForm:
        return cls(nvars, 0, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def coefficient_vector(self) -> tuple[Fraction, ...]:
        return tuple(self.coefficient(e) for e in monomials(self.nvars, self.degree))

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and not isinstance(point[0], (int, Fraction, str)):
            point = tuple(point[0])
        pt = [as_rational(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def _compatible(self, other: HomogeneousForm):
        if self.nvars != other.nvars:
            raise ExactError("forms in different numbers of variables")

    def __add__(self, other: HomogeneousForm) -> HomogeneousForm:
        self._compatible(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ExactError("sum of forms of different degree")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return HomogeneousForm(self.nvars, self.degree, terms)

    def __neg__(self) -> HomogeneousForm:
        return HomogeneousForm(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: HomogeneousForm) -> HomogeneousForm:
        return self + (-other)

    def __mul__(self, other) -> HomogeneousForm:
        if not isinstance(other, HomogeneousForm):
            c = as_rational(other)
            return HomogeneousForm(self.nvars, self.degree, {e: c * v for e, v in self.terms.items()})
        self._compatible(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return HomogeneousForm(self.nvars, self.degree + other.degree, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> HomogeneousForm:
        out = HomogeneousForm.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogeneousForm) or self.nvars != other.nvars:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    def derivative(self, i: int) -> HomogeneousForm:
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return HomogeneousForm(self.nvars, max(self.degree - 1, 0), terms)

    def compose_linear(self, images: Sequence[HomogeneousForm]) -> HomogeneousForm:
        """Substitute variable i by the linear form ``images[i]``."""
        if len(images) != self.nvars:
            raise ExactError("need one image per variable")
        target = images[0].nvars
        out = HomogeneousForm(target, self.degree, {})
        for e, c in self.terms.items():
            term = HomogeneousForm.constant(target, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img**k
            out = out + term
        return out

    def restrict_to_line(self, p: Sequence, q: Sequence) -> HomogeneousForm:
        """Binary form (s, t) -> f(s p + t q)."""
        images = [HomogeneousForm.linear((p[i], q[i])) for i in range(self.nvars)]
        return self.compose_linear(images)

    def scalar_multiple_of(self, other: HomogeneousForm) -> Fraction | None:
        """Return c with self == c * other, or None."""
        if other.is_zero():
            return Fraction(1) if self.is_zero() else None
        if self.nvars != other.nvars or (not self.is_zero() and self.degree != other.degree):
            return None
        e0, c0 = next(iter(other.terms.items()))
        c = self.coefficient(e0) / c0
        return c if self == other * c else None

    def primitive(self) -> HomogeneousForm:
        """Scale so the leading (lexicographically first) coefficient is 1."""
        if self.is_zero():
            return self
        lead = self.terms[max(self.terms)]
        return self * (1 / lead)

    def to_json(self) -> dict:
        return {
            "vars": self.nvars,
            "degree": self.degree,
            "terms": [{"exp": list(e), "coef": rational_str(self.terms[e])} for e in sorted(self.terms, reverse=True)],
        }

    @classmethod
    def from_json(cls, data: dict) -> HomogeneousForm:
        return cls(int(data["vars"]), int(data["degree"]), {tuple(t["exp"]): t["coef"] for t in data["terms"]})

    def __repr__(self) -> str:
        return f"HomogeneousForm({self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        names = "xyz" if self.nvars <= 3 else [f"x{i}" for i in range(self.nvars)]
        if self.nvars == 2:
            names = "xy"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(rational_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{rational_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# determinants of matrices of linear forms


def _lattice_points(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Principal lattice {(e_1..e_{k-1}, 1) : sum e_i <= degree}, unisolvent for the chart."""
    pts = []
    for total in range(degree + 1):
        for e in monomials(nvars - 1, total) if nvars > 1 else [()]:
            pts.append(tuple(e) + (1,))
        if nvars == 1:
            break
    return pts


def interpolate_form(nvars: int, degree: int, evaluate, check_points: int = 3) -> HomogeneousForm:
    """Recover a degree-``degree`` form from exact evaluations on a fixed grid.

    The grid is the principal lattice on the chart x_last = 1, which determines
    a form uniquely. ``check_points`` extra points off the grid guard against a
    wrong degree.
    """
    monos = monomials(nvars, degree)
    pts = _lattice_points(nvars, degree)
    if nvars == 1:
        pts = [(1,)]
    rows = []
    rhs = []
    for p in pts:
        rows.append([_mono_value(e, p) for e in monos])
        rhs.append(evaluate(p))
    coeffs = solve(Matrix(rows), rhs)
    if coeffs is None:
        raise ExactError("interpolation system is inconsistent")
    f = HomogeneousForm(nvars, degree, dict(zip(monos, coeffs)))
    for k in range(check_points):
        p = tuple(Fraction(2 * k + 3 + 5 * i * (k + 1), 7 + i) for i in range(nvars))
        if f(p) != evaluate(p):
            raise ExactError("interpolated form fails verification at an extra point")
    return f


def _mono_value(e, p) -> Fraction:
    v = Fraction(1)
    for x, k in zip(p, e):
        if k:
            v *= Fraction(x) ** k
    return v


def linear_matrix_at(mats: Sequence[Matrix], point: Sequence) -> Matrix:
    acc = mats[0].scale(point[0])
    for m, x in zip(mats[1:], point[1:]):
        acc = acc + m.scale(x)
    return acc


def det_of_linear_matrix(*mats: Matrix) -> HomogeneousForm:
    """The form det(x_1 M_1 + ... + x_k M_k), degree = size of the matrices."""
    if len(mats) == 1 and isinstance(mats[0], (list, tuple)):
        mats = tuple(mats[0])
    n = mats[0].rows
    if any(m.shape != (n, n) for m in mats):
        raise ExactError("det_of_linear_matrix needs square matrices of equal size")
    return interpolate_form(len(mats), n, lambda p: det(linear_matrix_at(mats, p)))


def det_by_cofactors(mats: Sequence[Matrix]) -> HomogeneousForm:
    """Symbolic Laplace expansion; exponential cost, kept for small cross-checks."""
    k = len(mats)
    n = mats[0].rows
    entries = [[HomogeneousForm.linear([m[i, j] for m in mats]) for j in range(n)] for i in range(n)]

    def expand(rows: tuple[int, ...], cols: tuple[int, ...]) -> HomogeneousForm:
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        out = HomogeneousForm(k, len(rows), {})
        for idx, c in enumerate(cols):
            minor = expand(rows[1:], cols[:idx] + cols[idx + 1:])
            term = entries[rows[0]][c] * minor
            out = out + (term if idx % 2 == 0 else -term)
        return out

    if n == 0:
        return HomogeneousForm.constant(k, 1)
    return expand(tuple(range(n)), tuple(range(n)))


def minors_gcd(mats: Sequence[Matrix], size: int) -> HomogeneousForm:
    """gcd of all size x size minors of the binary linear matrix s M_1 + t M_2."""
    if len(mats) != 2:
        raise ExactError("minors_gcd is implemented for pencils (two matrices)")
    rows, cols = mats[0].shape
    g = HomogeneousForm(2, 0, {})
    for r in itertools.combinations(range(rows), size):
        for c in itertools.combinations(range(cols), size):
            minor = det_of_linear_matrix(*(m.submatrix(r, c) for m in mats))
            if minor.is_zero():
                continue
            g = minor if g.is_zero() else binary_gcd(g, minor)
            if g.degree == 0:
                return HomogeneousForm.constant(2, 1)
    return g


def spans_degree(forms: Sequence[HomogeneousForm], degree: int) -> bool:
    """True iff the ideal generated by ``forms`` contains every form of ``degree``."""
    nvars = forms[0].nvars
    target = monomials(nvars, degree)
    index = {e: i for i, e in enumerate(target)}
    rows = []
    for f in forms:
        if f.is_zero() or f.degree > degree:
            continue
        for m in monomials(nvars, degree - f.degree):
            row = [Fraction(0)] * len(target)
            for e, c in f.terms.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] += c
            rows.append(row)
    return bool(rows) and has_full_column_rank(Matrix(rows, cols=len(target)))


def no_common_zero(forms: Sequence[HomogeneousForm], seed: int = 0) -> bool:
    """Exact: the forms (one degree d, k variables) have no common projective
    zero over the algebraic closure.

    With no common zero, k generic combinations form a regular sequence and
    generate everything in degree k(d - 1) + 1 (Macaulay); a common zero
    prevents that in every degree. A few random combinations are tried first
    since they give the same certificate far more cheaply.
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return False
    d, k = forms[0].degree, forms[0].nvars
    if any(f.degree != d for f in forms):
        raise ExactError("no_common_zero expects forms of one degree")
    D = k * (d - 1) + 1
    if len(forms) > k + 2:
        rng = random.Random(seed)
        combos = []
        for _ in range(k + 2):
            acc = HomogeneousForm(k, d, {})
            for f in forms:
                acc = acc + f * rng.randint(-9, 9)
            combos.append(acc)
        if spans_degree(combos, D):
            return True
    return spans_degree(forms, D)


# ---------------------------------------------------------------------------
# binary forms via univariate polynomials (coefficient lists, constant term first)


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _udivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        _trim(a)
    return _trim(q), a


def _ugcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def _uderiv(a: list) -> list:
    return _trim([i * c for i, c in enumerate(a)][1:])


def _y_valuation(f: HomogeneousForm) -> int:
    # f = sum c_k x^k y^(d-k); y divides f to order d - max{k : c_k != 0}
    return f.degree - max(e[0] for e in f.terms)


def _dehomogenize(f: HomogeneousForm) -> list:
    p = [Fraction(0)] * (f.degree + 1)
    for (i, _), c in f.terms.items():
        p[i] = c
    return _trim(p)


def _homogenize(p: list, degree: int) -> HomogeneousForm:
    return HomogeneousForm(2, degree, {(i, degree - i): c for i, c in enumerate(p) if c != 0})


def binary_gcd(f: HomogeneousForm, g: HomogeneousForm) -> HomogeneousForm:
    """Monic-normalized gcd of two binary forms (zero forms act as identity)."""
    if f.nvars != 2 or g.nvars != 2:
        raise ExactError("binary_gcd needs binary forms")
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    vy = min(_y_valuation(f), _y_valuation(g))
    u = _ugcd(_dehomogenize(f), _dehomogenize(g))
    du = len(u) - 1
    return _homogenize(u, du + vy) if du + vy else HomogeneousForm.constant(2, 1)


def binary_divide(f: HomogeneousForm, g: HomogeneousForm) -> HomogeneousForm:
    """Exact quotient f / g of binary forms; raises if g does not divide f."""
    if g.is_zero():
        raise ZeroForm("division by the zero form")
    if f.is_zero():
        return HomogeneousForm(2, 0, {})
    vf, vg = _y_valuation(f), _y_valuation(g)
    q, r = _udivmod(_dehomogenize(f), _dehomogenize(g))
    if r or vf < vg:
        raise ExactError("binary form does not divide")
    return _homogenize(q, f.degree - g.degree)


def squarefree_decomposition(f: HomogeneousForm) -> dict[int, HomogeneousForm]:
    """Yun decomposition f = c * prod_k P_k^k with P_k squarefree and pairwise coprime.

    Returns {k: P_k} for the nonconstant P_k. The y-part is split off first so the
    univariate algorithm only sees the affine roots.
    """
    if f.nvars != 2:
        raise ExactError("squarefree_decomposition needs a binary form")
    if f.is_zero():
        raise ZeroForm("the zero form has no squarefree decomposition")
    out: dict[int, HomogeneousForm] = {}
    vy = _y_valuation(f)
    if vy:
        out[vy] = HomogeneousForm(2, 1, {(0, 1): 1})
    a = _dehomogenize(f)
    a = [c / a[-1] for c in a]
    if len(a) > 1:
        b = _uderiv(a)
        c = _ugcd(a, b)
        w, _ = _udivmod(a, c)
        k = 1
        while len(w) > 1:
            y = _ugcd(w, c)
            z, _ = _udivmod(w, y)
            if len(z) > 1:
                factor = _homogenize(z, len(z) - 1)
                out[k] = factor * out[k] if k in out else factor
            w = y
            c, _ = _udivmod(c, y)
            k += 1
    return dict(sorted(out.items()))


def binary_form_squarefree(f: HomogeneousForm) -> tuple[bool, dict[int, HomogeneousForm]]:
    """(squarefree?, {multiplicity: product of factors with that multiplicity})."""
    if f.nvars != 2:
        raise ExactError("binary_form_squarefree needs a binary form")
    if f.is_zero():
        raise ZeroForm("zero binary form")
    g = binary_gcd(binary_gcd(f, f.derivative(0)), f.derivative(1))
    squarefree = g.degree == 0
    profile = squarefree_decomposition(f)
    return squarefree, profile


def rational_roots(f: HomogeneousForm) -> list[tuple[Fraction, Fraction]]:
    """Rational points (x : y) where a binary form vanishes, normalized y = 1 or (1 : 0)."""
    if f.is_zero():
        raise ZeroForm("every point is a root of the zero form")
    roots = []
    if _y_valuation(f):
        roots.append((Fraction(1), Fraction(0)))
    p = _dehomogenize(f)
    while p and p[0] == 0:
        p = p[1:]
        roots.append((Fraction(0), Fraction(1)))
    if len(p) <= 1:
        return _dedupe(roots)
    from math import lcm

    den = lcm(*(c.denominator for c in p))
    ip = [int(c * den) for c in p]
    lead, const = abs(ip[-1]), abs(ip[0])
    for num in _divisors(const):
        for d in _divisors(lead):
            for sgn in (1, -1):
                r = Fraction(sgn * num, d)
                if sum(c * r**i for i, c in enumerate(ip)) == 0:
                    roots.append((r, Fraction(1)))
    return _dedupe(roots)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _dedupe(pts):
    seen, out = set(), []
    for p in pts:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def resultant(f: HomogeneousForm, g: HomogeneousForm) -> Fraction:
    """Sylvester resultant of two binary forms (as forms, so roots at infinity count)."""
    m, n = f.degree, g.degree
    fc = [f.coefficient((m - i, i)) for i in range(m + 1)]
    gc = [g.coefficient((n - i, i)) for i in range(n + 1)]
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    return det(Matrix(rows))
