"""The quintic del Pezzo threefold Y5 cut out of Gr(2, 5) by a net of skew forms.

A point of Y5 is a plane U = span(u1, u2) in V = Q^5 on which the three skew
forms A_i all vanish. A form a in A of rank 4 determines a line of Y5: with
e = ker(a) and W = {w : A_i(e, w) = 0 for all i} (3-dimensional), the line is
the pencil of planes e in U in W.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import (
    ExactError,
    Matrix,
    Vector,
    coordinates,
    cross,
    dot,
    kernel_basis,
    rank,
    solve,
    span_rank,
    vec,
)

DIM_V = 5
SAMPLING_ATTEMPTS = 100
RANK_PROBES = 20


class Y5Error(ExactError):
    pass


class NotSkew(Y5Error):
    pass


class DependentForms(Y5Error):
    pass


class SamplingFailed(Y5Error):
    pass


class RankNotFour(Y5Error):
    pass


class FlagDegenerate(Y5Error):
    pass


class ZeroParameter(Y5Error):
    pass


class NotOnThreefold(Y5Error):
    pass


class CalibrationInconsistent(Y5Error):
    pass


@dataclass(frozen=True)
class SkewTriple:
    A1: Matrix
    A2: Matrix
    A3: Matrix

    def __post_init__(self):
        if any(m.shape != (DIM_V, DIM_V) for m in self.mats):
            raise Y5Error("skew forms must be 5x5")

    @property
    def mats(self) -> tuple[Matrix, Matrix, Matrix]:
        return (self.A1, self.A2, self.A3)

    def combo(self, a: Sequence) -> Matrix:
        a = vec(a)
        return self.A1.scale(a[0]) + self.A2.scale(a[1]) + self.A3.scale(a[2])

    def scaled(self, c) -> SkewTriple:
        return SkewTriple(*(m.scale(c) for m in self.mats))

    def change_basis(self, g: Matrix) -> SkewTriple:
        """New basis A'_j = sum_i g[i, j] A_i of the same space A."""
        return SkewTriple(*(self.combo(g.col(j)) for j in range(3)))

    def to_json(self) -> dict:
        return {"A1": self.A1.to_json(), "A2": self.A2.to_json(), "A3": self.A3.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> SkewTriple:
        return cls(*(Matrix.from_json(data[k]) for k in ("A1", "A2", "A3")))


def bilinear(m: Matrix, u: Sequence, v: Sequence) -> Fraction:
    return dot(u, m @ tuple(v))


@dataclass(frozen=True)
class PointOnY5:
    """A plane U = span(u1, u2) with A_i(u1, u2) = 0 for i = 1, 2, 3."""

    u1: Vector
    u2: Vector

    @property
    def basis(self) -> Matrix:
        """5 x 2 matrix with columns u1, u2."""
        return Matrix.from_columns([self.u1, self.u2])

    def plucker(self) -> Vector:
        u, v = self.u1, self.u2
        return tuple(u[i] * v[j] - u[j] * v[i] for i in range(DIM_V) for j in range(i + 1, DIM_V))

    def same_plane(self, other: PointOnY5) -> bool:
        return span_rank([self.u1, self.u2, other.u1, other.u2]) == 2

    def perp_basis(self) -> list[Vector]:
        """Basis of the annihilator of U in V* (three covectors)."""
        return kernel_basis(Matrix([self.u1, self.u2]))

    def to_json(self) -> dict:
        from .exact import rational_str

        return {"u1": [rational_str(x) for x in self.u1], "u2": [rational_str(x) for x in self.u2]}


def make_point(t: SkewTriple, u1: Sequence, u2: Sequence) -> PointOnY5:
    p = PointOnY5(vec(u1), vec(u2))
    if span_rank([p.u1, p.u2]) != 2:
        raise NotOnThreefold("u1 and u2 are dependent")
    if any(bilinear(a, p.u1, p.u2) != 0 for a in t.mats):
        raise NotOnThreefold("plane is not isotropic for all three forms")
    return p


@dataclass
class ValidationReport:
    skew: bool = True
    independent: bool = True
    rank_probes: int = 0
    rank_failures: list = field(default_factory=list)
    sampling_ok: bool = True
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "skew": self.skew,
            "independent": self.independent,
            "rank_probes": self.rank_probes,
            "rank_failures": [list(map(str, a)) for a in self.rank_failures],
            "sampling_ok": self.sampling_ok,
            "failures": list(self.failures),
        }


def probe_forms(count: int = RANK_PROBES) -> list[Vector]:
    """Deterministic combinations a in A used as genericity probes."""
    out = []
    i = 1
    while len(out) < count:
        a = vec(1, i, i * i - 3 * i + 1) if i % 2 else vec(i, -1, 2 * i + 1)
        out.append(a)
        i += 1
    return out


def check_well_formed(t: SkewTriple) -> None:
    if not all(m.is_skew() for m in t.mats):
        raise NotSkew("form is not skew-symmetric")
    flat = [[x for r in m.tolist() for x in r] for m in t.mats]
    if span_rank(flat) < 3:
        raise DependentForms("the three skew forms are linearly dependent")


def validate_skew_triple(t: SkewTriple, seed: int = 0) -> ValidationReport:
    """Raise on malformed triples, then run the genericity probes.

    Probe failures are collected in the report rather than raised.
    """
    check_well_formed(t)
    report = ValidationReport()
    probes = probe_forms()
    report.rank_probes = len(probes)
    for a in probes:
        if rank(t.combo(a)) != 4:
            report.rank_failures.append(a)
    if report.rank_failures:
        report.failures.append(f"{len(report.rank_failures)} probe forms have rank != 4")
    try:
        sample_point(t, random.Random(seed))
    except SamplingFailed as exc:
        report.sampling_ok = False
        report.failures.append(str(exc))
    return report


def random_vector(rng: random.Random, n: int = DIM_V, bound: int = 9) -> Vector:
    while True:
        v = vec([rng.randint(-bound, bound) for _ in range(n)])
        if any(v):
            return v


def sample_point(t: SkewTriple, rng: random.Random) -> PointOnY5:
    """Random rational point: U = {v : A_i(u, v) = 0} for a random u."""
    for _ in range(SAMPLING_ATTEMPTS):
        u = random_vector(rng)
        ker = kernel_basis(Matrix([tuple(a.T @ u) for a in t.mats]))
        if len(ker) != 2:
            continue
        # u lies in ker by skewness; complete it to a basis of ker
        other = next((k for k in ker if span_rank([u, k]) == 2), None)
        if other is None:
            continue
        return make_point(t, u, other)
    raise SamplingFailed(f"no point found in {SAMPLING_ATTEMPTS} attempts; triple looks degenerate")


# ---------------------------------------------------------------------------
# lines


def pfaffian4(m: Matrix, idx: Sequence[int]) -> Fraction:
    i, j, k, l = idx
    return m[i, j] * m[k, l] - m[i, k] * m[j, l] + m[i, l] * m[j, k]


def pfaffian_kernel(m: Matrix) -> Vector:
    """Kernel vector of a 5x5 skew matrix from its 4x4 sub-Pfaffians.

    Component j is (-1)^j Pf(m without row/col j); quadratic in the entries,
    which is what makes the intersection-form calibration bilinear.
    """
    out = []
    for j in range(DIM_V):
        rest = [i for i in range(DIM_V) if i != j]
        out.append(pfaffian4(m, rest) * (-1) ** j)
    return tuple(out)


@dataclass(frozen=True)
class LineOnY5:
    a: Vector
    e: Vector
    W: tuple[Vector, Vector, Vector]  # (e, w1, w2)

    @property
    def w1(self) -> Vector:
        return self.W[1]

    @property
    def w2(self) -> Vector:
        return self.W[2]

    def to_json(self) -> dict:
        from .exact import rational_str

        enc = lambda v: [rational_str(x) for x in v]  # noqa: E731
        return {"a": enc(self.a), "e": enc(self.e), "W": [enc(w) for w in self.W]}


def line_from_form(t: SkewTriple, a: Sequence) -> LineOnY5:
    a = vec(a)
    m = t.combo(a)
    if rank(m) != 4:
        raise RankNotFour(f"form {a} does not have rank 4")
    e = pfaffian_kernel(m)
    assert any(e) and not any(m @ e)
    W = kernel_basis(Matrix([tuple(ai @ e) for ai in t.mats]))
    if len(W) != 3:
        raise FlagDegenerate(f"flag space has dimension {len(W)}, expected 3")
    rest = [w for w in W]
    w_pair = []
    for w in rest:
        if span_rank([e] + w_pair + [w]) == len(w_pair) + 2:
            w_pair.append(w)
        if len(w_pair) == 2:
            break
    return LineOnY5(a, e, (e, w_pair[0], w_pair[1]))


def point_on_line(t: SkewTriple, line: LineOnY5, lam, mu) -> PointOnY5:
    lam, mu = Fraction(lam), Fraction(mu)
    if lam == 0 and mu == 0:
        raise ZeroParameter("(0, 0) is not a point of P^1")
    w = tuple(lam * x + mu * y for x, y in zip(line.w1, line.w2))
    return make_point(t, line.e, w)


def line_through(t: SkewTriple, line: LineOnY5, p: PointOnY5) -> bool:
    """Does the plane p belong to the line?"""
    return span_rank([p.u1, p.u2, line.e]) == 2 and span_rank(list(line.W) + [p.u1, p.u2]) == 3


# ---------------------------------------------------------------------------
# the evaluation map A (x) U -> U^perp


def alpha_at_point(t: SkewTriple, p: PointOnY5) -> Matrix:
    """3 x 6 matrix of a (x) u -> a(u, .) with column index 2*i + j for A_i u_j,
    expressed in the basis ``p.perp_basis()`` of U^perp."""
    perp = p.perp_basis()
    cols = []
    for a in t.mats:
        for u in (p.u1, p.u2):
            img = a.T @ u  # covector v -> a(u, v)
            assert dot(img, p.u1) == 0 and dot(img, p.u2) == 0
            cols.append(coordinates(perp, img))
    return Matrix.from_columns(cols)


# ---------------------------------------------------------------------------
# the symmetric form on A governing incidence of lines


def incidence_scalar(t: SkewTriple, a: Sequence, b: Sequence) -> Fraction:
    """theta with k(a)^T A_i k(b) = theta * (a x b)_i, k = Pfaffian kernel."""
    ka = pfaffian_kernel(t.combo(a))
    kb = pfaffian_kernel(t.combo(b))
    tv = tuple(bilinear(m, ka, kb) for m in t.mats)
    c = cross(a, b)
    j = next((i for i, x in enumerate(c) if x != 0), None)
    if j is None:
        raise Y5Error("forms are proportional")
    theta = tv[j] / c[j]
    if any(x != theta * y for x, y in zip(tv, c)):
        raise CalibrationInconsistent("pairing vector is not proportional to a x b")
    return theta


_SYM_INDEX = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]


def _sym_row(a, b) -> list[Fraction]:
    row = []
    for k, l in _SYM_INDEX:
        row.append(a[k] * b[l] if k == l else a[k] * b[l] + a[l] * b[k])
    return row


def intersection_form(t: SkewTriple, seed: int = 0, pairs: int = 12, held_out: int = 10) -> Matrix:
    """Symmetric form B on A with L_a, L_b meeting iff B(a, b) = 0.

    Calibrated from sampled pairs and normalized so that its first nonzero
    entry (row-major) is 1.
    """
    rng = random.Random(seed)

    def rank4_form():
        for _ in range(SAMPLING_ATTEMPTS):
            a = random_vector(rng, 3)
            if rank(t.combo(a)) == 4:
                return a
        raise SamplingFailed("no rank-4 form found")

    def sample_pairs(k):
        out = []
        while len(out) < k:
            a, b = rank4_form(), rank4_form()
            if any(cross(a, b)):
                out.append((a, b, incidence_scalar(t, a, b)))
        return out

    train = sample_pairs(pairs)
    rows = [_sym_row(a, b) for a, b, _ in train]
    rhs = [th for _, _, th in train]
    if rank(Matrix(rows)) < 6:
        raise CalibrationInconsistent("calibration pairs do not determine the form")
    x = solve(Matrix(rows), rhs)
    if x is None:
        raise CalibrationInconsistent("incidence scalars are not bilinear on the training pairs")
    B = _sym_matrix(x)
    for a, b, th in sample_pairs(held_out):
        if bilinear(B, a, b) != th:
            raise CalibrationInconsistent("held-out pair violates bilinearity")
    return normalize_projective(B)


def _sym_matrix(x) -> Matrix:
    m = [[Fraction(0)] * 3 for _ in range(3)]
    for (k, l), v in zip(_SYM_INDEX, x):
        m[k][l] = m[l][k] = v
    return Matrix(m)


def normalize_projective(m: Matrix) -> Matrix:
    first = next((x for r in m.tolist() for x in r if x != 0), None)
    if first is None:
        return m
    return m.scale(1 / first)


def lines_meet(t: SkewTriple, l1: LineOnY5, l2: LineOnY5) -> bool:
    """Direct incidence: some plane contains both kernel vectors and is on Y5."""
    if span_rank([l1.e, l2.e]) < 2:
        return True
    return all(bilinear(m, l1.e, l2.e) == 0 for m in t.mats)


def random_skew_triple(seed: int, bound: int = 9) -> SkewTriple:
    from .exact import random_skew

    rng = random.Random(seed)
    while True:
        t = SkewTriple(*(random_skew(rng, DIM_V, bound) for _ in range(3)))
        try:
            if validate_skew_triple(t, seed).ok:
                return t
        except DependentForms:
            continue
