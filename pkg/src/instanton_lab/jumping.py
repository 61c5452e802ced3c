"""Jumping lines of an instanton net.

The jumping curve lives in P(A*): the point f jumps to order corank(gamma(f)).
Two independent views are implemented here:

* the discriminant side: det(x G1 + y G2 + z G3), coranks and the graded
  theta-characteristic module coker(H (x) O(-2) -> H* (x) O(-1));
* the geometric side: the splitting type of E restricted to an explicit line
  of Y5, computed from the monad alone (``splitting_type_on_line``).

They are linked through the intersection form B of ``y5``: the line L_a
jumps to the order of the point B a.
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
    det,
    kernel_basis,
    left_kernel_basis,
    random_invertible,
    rank,
    solve,
    span_rank,
    vec,
)
from .forms import (
    HomogeneousForm,
    binary_form_squarefree,
    det_of_linear_matrix,
    linear_matrix_at,
    monomials,
    num_monomials,
    spans_degree,
)
from .monad import NetOfQuadrics, cokernel_projection, gamma_hat
from .y5 import DIM_V, LineOnY5, NotOnThreefold, SkewTriple, bilinear

# E|_L is read off from sections in degrees 0..bound; 2n + 4 exceeds the
# largest splitting index a corank-bounded net can produce (i <= n - 2)
# with room for the one extra degree needed to see the top generator.
SPLITTING_DEGREE_SLACK = 4
SMOOTHNESS_MAX_CHARGE = 6
REDUCEDNESS_LINES = 6


class JumpingError(ExactError):
    pass


class ZeroPoint(JumpingError):
    pass


class DegenerateNet(JumpingError):
    pass


class TorsionStrippingFailed(JumpingError):
    pass


# ---------------------------------------------------------------------------
# the discriminant curve


@dataclass
class JumpingCurve:
    form: HomogeneousForm
    net: NetOfQuadrics
    flags: dict = field(default_factory=dict)

    @property
    def degree(self) -> int | None:
        return None if self.form.is_zero() else self.form.degree

    def to_dict(self) -> dict:
        return {"form": self.form.to_json(), "degree": self.degree, "flags": dict(self.flags)}


def _partials(f: HomogeneousForm) -> list[HomogeneousForm]:
    return [f.derivative(i) for i in range(f.nvars)]


def is_cone(f: HomogeneousForm) -> bool:
    """True when f depends on fewer than three linear forms (partials dependent)."""
    if f.degree == 0:
        return True
    return span_rank([p.coefficient_vector() for p in _partials(f)]) < 3


def reducedness(f: HomogeneousForm, lines: int = REDUCEDNESS_LINES, seed: int = 0) -> bool | None:
    """True if some line section is squarefree (a certificate of reducedness).

    Returns False when every sampled section has a repeated root; that answer
    is probabilistic (a reduced curve has squarefree generic sections).
    """
    rng = random.Random(seed)
    for _ in range(lines):
        p = [rng.randint(-20, 20) for _ in range(3)]
        q = [rng.randint(-20, 20) for _ in range(3)]
        g = f.restrict_to_line(p, q)
        if g.is_zero() or g.degree != f.degree:
            continue
        ok, _ = binary_form_squarefree(g)
        if ok:
            return True
    return False


def is_smooth(f: HomogeneousForm) -> bool:
    """Exact: a plane curve of degree n >= 2 is smooth iff its partials have no
    common zero, iff they generate every form of degree 3n - 5 (Macaulay)."""
    if f.degree < 2:
        return True
    return spans_degree(_partials(f), 3 * (f.degree - 1) - 2)


def conic_gram_rank(f: HomogeneousForm) -> int:
    """Rank of the symmetric 3x3 Gram matrix of a ternary quadratic form."""
    if f.degree != 2:
        raise JumpingError("Gram matrix is only defined for conics")
    g = [[Fraction(0)] * 3 for _ in range(3)]
    for e, c in f.terms.items():
        idx = [i for i in range(3) for _ in range(e[i])]
        i, j = idx
        if i == j:
            g[i][i] += c
        else:
            g[i][j] += c / 2
            g[j][i] += c / 2
    return rank(Matrix(g))


def jumping_curve(net: NetOfQuadrics, seed: int = 0) -> JumpingCurve:
    f = det_of_linear_matrix(*net.mats)
    flags: dict = {"zero": f.is_zero()}
    if f.is_zero():
        flags.update(cone=None, reduced=None, smooth=None, smoothness_checked=False)
        return JumpingCurve(f, net, flags)
    flags["cone"] = is_cone(f)
    flags["reduced"] = reducedness(f, seed=seed)
    flags["reduced_certain"] = flags["reduced"]
    if net.n <= SMOOTHNESS_MAX_CHARGE:
        flags["smooth"] = is_smooth(f)
        flags["smoothness_checked"] = True
    else:
        flags["smooth"] = None
        flags["smoothness_checked"] = False
    if net.n == 2:
        flags["gram_rank"] = conic_gram_rank(f)
    return JumpingCurve(f, net, flags)


def jumping_order(net: NetOfQuadrics, f: Sequence) -> int:
    f = vec(f)
    if not any(f):
        raise ZeroPoint("(0 : 0 : 0) is not a point of P(A*)")
    return net.n - rank(net.quadric(f))


def pencil_multiplicity_check(net: NetOfQuadrics, seed: int = 0) -> HomogeneousForm:
    """The curve restricted to a random line of P(A*): a binary form of degree n."""
    rng = random.Random(seed)
    curve = det_of_linear_matrix(*net.mats)
    while True:
        p = [rng.randint(-9, 9) for _ in range(3)]
        q = [rng.randint(-9, 9) for _ in range(3)]
        g = curve.restrict_to_line(p, q)
        if not g.is_zero():
            return g


# ---------------------------------------------------------------------------
# the theta-characteristic as a graded module


def _mult_matrix(net: NetOfQuadrics, k: int) -> Matrix:
    """Matrix of sum x_i G_i : H (x) S_{k-2} -> H* (x) S_{k-1}.

    Index h * dim S + (monomial position), monomials in ``forms.monomials`` order.
    """
    n = net.n
    src = monomials(3, k - 2)
    dst = monomials(3, k - 1)
    dst_index = {e: i for i, e in enumerate(dst)}
    nd = len(dst)
    rows = [[Fraction(0)] * (n * len(src)) for _ in range(n * nd)]
    for col_m, e in enumerate(src):
        for i, g in enumerate(net.mats):
            e2 = list(e)
            e2[i] += 1
            r_m = dst_index[tuple(e2)]
            for hp in range(n):
                for h in range(n):
                    if g[hp, h]:
                        rows[hp * nd + r_m][h * len(src) + col_m] += g[hp, h]
    return Matrix(rows, cols=n * len(src))


@dataclass
class ThetaDegree:
    k: int
    matrix: Matrix
    rank: int
    dim: int


@dataclass
class ThetaModule:
    n: int
    degrees: list  # ThetaDegree for k = 0..kmax

    def dims(self) -> list[int]:
        return [d.dim for d in self.degrees]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "degrees": [{"k": d.k, "rank": d.rank, "dim": d.dim} for d in self.degrees],
        }


def theta_module(net: NetOfQuadrics, kmax: int = 4) -> ThetaModule:
    if det_of_linear_matrix(*net.mats).is_zero():
        raise DegenerateNet("every quadric of the net is degenerate")
    n = net.n
    out = []
    for k in range(kmax + 1):
        m = _mult_matrix(net, k)
        r = rank(m) if m.rows and m.cols else 0
        if r != n * num_monomials(3, k - 2):
            raise DegenerateNet(f"multiplication map not injective in degree {k}")
        out.append(ThetaDegree(k, m, r, n * num_monomials(3, k - 1) - r))
    return ThetaModule(n, out)


def adjugate_check(net: NetOfQuadrics, k: int, samples: int = 2, seed: int = 0) -> bool:
    """det * v lies in the image in degree k + n for random v in H* (x) S_{k-1}."""
    n = net.n
    rng = random.Random(seed)
    curve = det_of_linear_matrix(*net.mats)
    big = _mult_matrix(net, k + n)
    src = monomials(3, k - 1)
    dst = monomials(3, k + n - 1)
    dst_index = {e: i for i, e in enumerate(dst)}
    for _ in range(samples):
        v = [[rng.randint(-5, 5) for _ in src] for _ in range(n)]
        target = [Fraction(0)] * (n * len(dst))
        for hp in range(n):
            for j, e in enumerate(src):
                if not v[hp][j]:
                    continue
                for ed, c in curve.terms.items():
                    target[hp * len(dst) + dst_index[tuple(a + b for a, b in zip(e, ed))]] += c * v[hp][j]
        if solve(big, target) is None:
            return False
    return True


# ---------------------------------------------------------------------------
# reconstruction of the net from the module


@dataclass
class ScrambledPresentation:
    """The module seen only through its degree-1 generators and degree-2 part.

    ``quotient`` maps H* (x) S_1 (generator index h * 3 + i for g_h * x_i, in
    scrambled generator coordinates) onto an abstract basis of M_2; ``degree3``
    does the same for H* (x) S_2 onto M_3.
    """

    n: int
    quotient: Matrix
    degree3: Matrix


def scramble(module: ThetaModule, seed: int = 0) -> ScrambledPresentation:
    n = module.n
    rng = random.Random(seed)
    P = random_invertible(rng, n, 2)
    out = []
    for k in (2, 3):
        T = module.degrees[k].matrix
        N = Matrix(left_kernel_basis(T), cols=T.rows)  # M_k = rows of N
        Z = random_invertible(rng, N.rows, 2)
        s = num_monomials(3, k - 1)
        # generators g'_h = sum_j P[j, h] g_j, i.e. coordinates transform by P^{-T}
        change = Matrix([[P[hp, h] if a == b else 0 for h in range(n) for b in range(s)]
                         for hp in range(n) for a in range(s)])
        out.append(Z @ N @ change)
    return ScrambledPresentation(n, out[0], out[1])


def reconstruct_net(pres: ScrambledPresentation, seed: int = 0) -> NetOfQuadrics:
    """Recover a symmetric net with the same module, up to congruence."""
    n = pres.n
    rel = kernel_basis(pres.quotient)
    if len(rel) != n:
        raise JumpingError(f"expected {n} relations in degree 2, found {len(rel)}")
    # R_i[h, r] = coefficient of g_h x_i in relation r
    R = [Matrix([[rel[r][h * 3 + i] for r in range(n)] for h in range(n)]) for i in range(3)]
    # X with X R_i symmetric for all i: linear in the n^2 entries of X
    eqs = []
    for Ri in R:
        for a in range(n):
            for b in range(a + 1, n):
                row = [Fraction(0)] * (n * n)
                for c in range(n):
                    row[a * n + c] += Ri[c, b]
                    row[b * n + c] -= Ri[c, a]
                eqs.append(row)
    sols = kernel_basis(Matrix(eqs, cols=n * n))
    rng = random.Random(seed)
    for _ in range(50):
        coeffs = [rng.randint(-5, 5) for _ in sols]
        x = [sum(c * s[j] for c, s in zip(coeffs, sols)) for j in range(n * n)]
        X = Matrix([x[a * n:(a + 1) * n] for a in range(n)])
        if det(X) != 0:
            _check_degree3(R, pres)
            return NetOfQuadrics(n, *(X @ Ri for Ri in R))
    raise JumpingError("no invertible symmetrizer found")


def _check_degree3(R: list[Matrix], pres: ScrambledPresentation) -> None:
    """Degree-2 relations must generate all relations in degree 3 (minimality)."""
    n = pres.n
    rel3 = kernel_basis(pres.degree3)
    # multiples x_j * (relation), in generator coordinates h * 6 + monomial
    deg2 = monomials(3, 2)
    index = {e: i for i, e in enumerate(deg2)}
    gens = []
    for c in range(n):
        for j in range(3):
            v = [Fraction(0)] * (6 * n)
            for i, g in enumerate(R):
                e = [0, 0, 0]
                e[i] += 1
                e[j] += 1
                for h in range(n):
                    v[h * 6 + index[tuple(e)]] += g[h, c]
            gens.append(v)
    if span_rank(gens) != len(rel3):
        raise JumpingError("degree-3 relations are not generated in degree 2")
    if any(any(x for x in pres.degree3 @ v) for v in gens):
        raise JumpingError("degree-2 relations do not vanish in degree 3")


def curves_proportional(a: NetOfQuadrics, b: NetOfQuadrics) -> bool:
    fa = det_of_linear_matrix(*a.mats)
    fb = det_of_linear_matrix(*b.mats)
    c = fb.scalar_multiple_of(fa)
    return c is not None and c != 0


# ---------------------------------------------------------------------------
# splitting type of E on a line of Y5, from the monad alone


@dataclass
class SplittingType:
    i: int
    generator_degrees: list  # minimal generators of H^0_{>=0}(E|_L) by degree
    hilbert: list  # dim H^0(E|_L(m)) for m = 0..len - 1

    def to_dict(self) -> dict:
        return {"i": self.i, "generator_degrees": list(self.generator_degrees), "hilbert": list(self.hilbert)}


def check_line(t: SkewTriple, line: LineOnY5) -> None:
    e, w1, w2 = line.W
    for m in t.mats:
        if bilinear(m, e, w1) or bilinear(m, e, w2):
            raise NotOnThreefold("the line does not lie on Y5")
    if span_rank(line.W) != 3:
        raise NotOnThreefold("degenerate line data")


class _LineModule:
    """Sections of E|_L(m), m >= 0, as subquotients of H* (x) V* (x) S_m.

    S_m has basis s^(m - j) t^j, j = 0..m; a section has coordinate
    (h * 5 + v) * (m + 1) + j. U|_L = O e + O(-1) w(s, t), w = s w1 + t w2,
    and U^perp|_L is cut out by psi(e) = psi(w(s, t)) = 0.
    """

    def __init__(self, net: NetOfQuadrics, t: SkewTriple, line: LineOnY5):
        self.n = net.n
        self.line = line
        self.gh = gamma_hat(net, t)
        self.pi = cokernel_projection(self.gh)
        self.cache: dict = {}

    def ambient(self, m: int) -> int:
        return self.n * DIM_V * (m + 1)

    def kernel(self, m: int) -> list[Vector]:
        """H^0 of K'(m), K' = ker(H* (x) U^perp -> C)."""
        if ("K", m) in self.cache:
            return self.cache[("K", m)]
        n, e, w1, w2 = self.n, self.line.e, self.line.w1, self.line.w2
        size = self.ambient(m)

        def idx(hv, j):
            return hv * (m + 1) + j

        rows = []
        for hp in range(n):
            for j in range(m + 1):
                row = [Fraction(0)] * size
                for v in range(DIM_V):
                    row[idx(hp * DIM_V + v, j)] = e[v]
                rows.append(row)
            for j in range(m + 2):
                row = [Fraction(0)] * size
                for v in range(DIM_V):
                    if j <= m:
                        row[idx(hp * DIM_V + v, j)] += w1[v]
                    if j >= 1:
                        row[idx(hp * DIM_V + v, j - 1)] += w2[v]
                rows.append(row)
        for r in range(self.pi.rows):
            for j in range(m + 1):
                row = [Fraction(0)] * size
                for hv in range(n * DIM_V):
                    row[idx(hv, j)] = self.pi[r, hv]
                rows.append(row)
        out = kernel_basis(Matrix(rows, cols=size))
        self.cache[("K", m)] = out
        return out

    def image(self, m: int) -> list[Vector]:
        """gamma_hat applied to H^0(H (x) U(m))."""
        n, e, w1, w2 = self.n, self.line.e, self.line.w1, self.line.w2
        size = self.ambient(m)
        out = []
        for h in range(n):
            ge = self._apply(h, e)
            g1 = self._apply(h, w1)
            g2 = self._apply(h, w2)
            for j in range(m + 1):
                v = [Fraction(0)] * size
                for hv, c in enumerate(ge):
                    v[hv * (m + 1) + j] = c
                out.append(v)
            for j in range(m):  # w(s, t) * s^(m - 1 - j) t^j
                v = [Fraction(0)] * size
                for hv in range(n * DIM_V):
                    v[hv * (m + 1) + j] += g1[hv]
                    v[hv * (m + 1) + j + 1] += g2[hv]
                out.append(v)
        return out

    def _apply(self, h: int, u: Vector) -> Vector:
        x = [Fraction(0)] * (self.n * DIM_V)
        for v in range(DIM_V):
            x[h * DIM_V + v] = u[v]
        return self.gh @ x

    def shifted(self, vs: list[Vector], m: int) -> list[Vector]:
        """s * v and t * v for v in degree m - 1."""
        out = []
        for v in vs:
            for shift in (0, 1):
                new = [Fraction(0)] * self.ambient(m)
                for hv in range(self.n * DIM_V):
                    for j in range(m):
                        new[hv * (m + 1) + j + shift] = v[hv * m + j]
                out.append(new)
        return out


def splitting_type_on_line(net: NetOfQuadrics, t: SkewTriple, line: LineOnY5) -> SplittingType:
    """i with E|_L = O(i) + O(-i), read from the monad restricted to L.

    For m >= 0 the sections of H (x) U(m) on L have no H^1, so
    H^0(E|_L(m)) = H^0(K'(m)) / gamma(H^0(H (x) U(m))) exactly; no torsion
    survives in nonnegative degrees. O(i) + O(-i) then has i + 1 minimal
    generators in degree 0 and one in degree i (two in degree 0 if i = 0).
    """
    check_line(t, line)
    mod = _LineModule(net, t, line)
    bound = 2 * net.n + SPLITTING_DEGREE_SLACK
    gens: list[int] = []
    hilbert: list[int] = []
    prev: list[Vector] = []
    for m in range(bound + 1):
        K = mod.kernel(m)
        im = mod.image(m)
        r_im = span_rank(im) if im else 0
        hilbert.append(len(K) - r_im)
        below = mod.shifted(prev, m) if m else []
        r_below = span_rank(below + im) if below or im else 0
        gens.append(len(K) - r_below)
        prev = K
        top = max((d for d, g in enumerate(gens) if g and d > 0), default=0)
        if top:
            break
        # h0 = i + 1 for i >= 1, so h0 <= 2 leaves only i in {0, 1}
        if m >= 1 and hilbert[0] <= 2:
            break
    gen_degrees = [d for d, g in enumerate(gens) for _ in range(g)]
    top = max(gen_degrees, default=0)
    i = top
    expected = [0] * (i + 1) + [i] if i else [0, 0]
    if gen_degrees != expected:
        raise TorsionStrippingFailed(
            f"sections do not look like O({i}) + O({-i}): generator degrees {gen_degrees}, hilbert {hilbert}"
        )
    return SplittingType(i, gen_degrees, hilbert)


def jumping_order_of_line(net: NetOfQuadrics, line: LineOnY5, B: Matrix) -> int:
    return jumping_order(net, B @ line.a)


def line_for_point(t: SkewTriple, f: Sequence, B: Matrix) -> LineOnY5:
    """The line L_a with B a proportional to f."""
    from .exact import inverse
    from .y5 import line_from_form

    a = inverse(B) @ vec(f)
    return line_from_form(t, a)


def linear_matrix(net: NetOfQuadrics, f: Sequence) -> Matrix:
    return linear_matrix_at(net.mats, vec(f))
