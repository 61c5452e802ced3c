"""Nets of quadrics as monad data for instantons on Y5.

A net is gamma = sum_i A_i (x) G_i with G_i symmetric n x n. It induces

* gamma_hat = sum_i G_i (x) A_i : H (x) V -> H* (x) V*, skew of size 5n;
* at a point U of Y5, gamma' : H (x) U -> H* (x) U^perp.

Index conventions: H (x) V is flattened as h * 5 + v, H* (x) U^perp as
h * 3 + k in the basis ``PointOnY5.perp_basis()``, H (x) U as h * 2 + j.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from . import chow
from .exact import (
    ExactError,
    Matrix,
    Vector,
    column_space_basis,
    complete_basis,
    coordinates,
    det,
    integer_kernel,
    kernel_basis,
    kronecker,
    random_symmetric,
    rank,
    vec,
)
from .forms import HomogeneousForm, binary_gcd, det_of_linear_matrix, minors_gcd, no_common_zero, rational_roots
from .y5 import (
    DIM_V,
    PointOnY5,
    SkewTriple,
    Y5Error,
    alpha_at_point,
    make_point,
    sample_point,
)

MAX_CHARGE = 8
GENERATION_TRIES = 200
DEFAULT_SAMPLES = 50
INJECTIVE, NOT_INJECTIVE, UNDECIDED = "certified", "fails", "undecided"


class MonadError(ExactError):
    pass


class SingularTransform(MonadError):
    pass


class RankConditionFailed(MonadError):
    pass


class GenerationFailed(MonadError):
    pass


@dataclass(frozen=True)
class NetOfQuadrics:
    n: int
    G1: Matrix
    G2: Matrix
    G3: Matrix

    def __post_init__(self):
        if self.n < 2:
            raise MonadError("charge must be at least 2")
        for g in self.mats:
            if g.shape != (self.n, self.n):
                raise MonadError(f"quadric has shape {g.shape}, expected {self.n}x{self.n}")
            if not g.is_symmetric():
                raise MonadError("quadrics of a net must be symmetric")

    @property
    def mats(self) -> tuple[Matrix, Matrix, Matrix]:
        return (self.G1, self.G2, self.G3)

    def quadric(self, f: Sequence) -> Matrix:
        """gamma(f) = sum f_i G_i for a covector f on A."""
        f = vec(f)
        return self.G1.scale(f[0]) + self.G2.scale(f[1]) + self.G3.scale(f[2])

    def to_json(self) -> dict:
        return {"n": self.n, "G1": self.G1.to_json(), "G2": self.G2.to_json(), "G3": self.G3.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> NetOfQuadrics:
        return cls(int(data["n"]), *(Matrix.from_json(data[k]) for k in ("G1", "G2", "G3")))

    @classmethod
    def zero(cls, n: int) -> NetOfQuadrics:
        z = Matrix.zeros(n, n)
        return cls(n, z, z, z)


def gamma_hat(net: NetOfQuadrics, t: SkewTriple) -> Matrix:
    out = kronecker(net.G1, t.A1) + kronecker(net.G2, t.A2) + kronecker(net.G3, t.A3)
    assert out.is_skew()
    return out


def _perp_matrix(p: PointOnY5) -> Matrix:
    return Matrix.from_columns(p.perp_basis())


def gamma_prime_at_point(net: NetOfQuadrics, t: SkewTriple, p: PointOnY5) -> Matrix:
    """3n x 2n matrix of h (x) u -> sum_i G_i h (x) A_i u."""
    alpha = alpha_at_point(t, p)
    n = net.n
    rows = []
    for hp in range(n):
        for k in range(3):
            row = []
            for h in range(n):
                for j in range(2):
                    row.append(sum(net.mats[i][hp, h] * alpha[k, 2 * i + j] for i in range(3)))
            rows.append(row)
    return Matrix(rows)


def cokernel_projection(gh: Matrix) -> Matrix:
    """Rows span the annihilator of im(gamma_hat); the projection onto C."""
    ker = kernel_basis(gh.T)
    return Matrix(ker, cols=gh.rows) if ker else Matrix.zeros(0, gh.rows)


@dataclass
class MonadFiber:
    dimension: int
    basis: list  # lifts in H* (x) U^perp coordinates
    gamma_prime_rank: int


def monad_fiber(net: NetOfQuadrics, t: SkewTriple, p: PointOnY5, pi: Matrix | None = None) -> MonadFiber:
    """ker(H* (x) U^perp -> C) / im(gamma'_p) at one point."""
    n = net.n
    if pi is None:
        pi = cokernel_projection(gamma_hat(net, t))
    incl = kronecker(Matrix.identity(n), _perp_matrix(p))  # 5n x 3n
    gp = gamma_prime_at_point(net, t, p)
    if pi.rows:
        to_c = pi @ incl
        assert (to_c @ gp).is_zero()
        ker = kernel_basis(to_c)
    else:
        ker = [tuple(Fraction(int(i == j)) for j in range(3 * n)) for i in range(3 * n)]
    img = column_space_basis(gp)
    lifted = complete_basis(img, ker)
    return MonadFiber(len(ker) - len(img), lifted, len(img))


@dataclass
class InstantonReport:
    n: int
    rank_gamma_hat: int
    corank: int
    rank_ok: bool
    fiberwise_injective_sampled: tuple  # (bool, samples)
    monad_fiber_rank_ok: tuple  # (bool, samples)
    injectivity: str | None = None  # exact status when computed, see injectivity_status
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        sampled = self.rank_ok and self.fiberwise_injective_sampled[0] and self.monad_fiber_rank_ok[0]
        return sampled and self.injectivity != NOT_INJECTIVE

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fiberwise_injective_sampled"] = {
            "ok": self.fiberwise_injective_sampled[0],
            "samples": self.fiberwise_injective_sampled[1],
        }
        d["monad_fiber_rank_ok"] = {"ok": self.monad_fiber_rank_ok[0], "samples": self.monad_fiber_rank_ok[1]}
        d["ok"] = self.ok
        return d


def check_instanton(
    net: NetOfQuadrics,
    t: SkewTriple,
    num_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    points: Sequence[PointOnY5] | None = None,
    exact: bool = True,
) -> InstantonReport:
    """Rank of gamma_hat plus injectivity and fiber rank at sampled points.

    With ``exact`` and the rank condition met, the exact injectivity status
    is added; a net failing it is not ok even if every sample passed, and
    its witness point, when rational, is reported.
    """
    n = net.n
    gh = gamma_hat(net, t)
    r = rank(gh)
    rank_ok = r == 4 * n + 2
    pi = cokernel_projection(gh)
    if points is None:
        rng = random.Random(seed)
        points = [sample_point(t, rng) for _ in range(num_samples)]
    injective = True
    fibers_ok = True
    witnesses = []
    for idx, p in enumerate(points):
        fib = monad_fiber(net, t, p, pi)
        if fib.gamma_prime_rank != 2 * n:
            injective = False
            witnesses.append({"sample": idx, "point": p.to_json(), "gamma_prime_rank": fib.gamma_prime_rank})
        if fib.dimension != 2:
            fibers_ok = False
            witnesses.append({"sample": idx, "point": p.to_json(), "fiber_dimension": fib.dimension})
    status = None
    if exact and rank_ok:
        status, p = injectivity_status(net, t, seed)
        if p is not None:
            witnesses.append({"exact": True, "point": p.to_json(), "gamma_prime_rank": rank(gamma_prime_at_point(net, t, p))})
    return InstantonReport(
        n=n,
        rank_gamma_hat=r,
        corank=5 * n - r,
        rank_ok=rank_ok,
        fiberwise_injective_sampled=(injective, len(points)),
        monad_fiber_rank_ok=(fibers_ok, len(points)),
        injectivity=status,
        witnesses=witnesses,
    )


def _point_containing(t: SkewTriple, rows: list) -> PointOnY5 | None:
    """A point of Y5 whose U contains the row space of an n x 5 matrix."""
    basis = column_space_basis(Matrix(rows, cols=DIM_V).T)
    if len(basis) == 1:
        v = basis[0]
        cons = Matrix([[sum(v[a] * A[a, b] for a in range(DIM_V)) for b in range(DIM_V)] for A in t.mats])
        others = [u for u in kernel_basis(cons) if rank(Matrix([list(v), list(u)])) == 2]
        if not others:
            return None
        basis = [v, others[0]]
    if len(basis) != 2:
        return None
    try:
        return make_point(t, basis[0], basis[1])
    except Y5Error:
        return None


def _pencil_candidates(t: SkewTriple, X: Matrix, Y: Matrix) -> list[Matrix]:
    """Members s X + u Y of rank 1, or with isotropic row space when n = 2."""
    conditions = [minors_gcd([X, Y], 2)]
    if X.rows == 2:
        s, u = HomogeneousForm.variable(2, 0), HomogeneousForm.variable(2, 1)
        w = [[s * X[h, j] + u * Y[h, j] for j in range(DIM_V)] for h in range(2)]
        g = HomogeneousForm(2, 0, {})
        for A in t.mats:
            q = HomogeneousForm(2, 2, {})
            for a in range(DIM_V):
                for b in range(DIM_V):
                    if A[a, b]:
                        q = q + w[0][a] * w[1][b] * A[a, b]
            if not q.is_zero():
                g = q if g.is_zero() else binary_gcd(g, q)
        conditions.append(g)
    out = []
    for g in conditions:
        if g.is_zero() or g.degree == 0:
            continue
        for a, b in rational_roots(g):
            out.append(X.scale(a) + Y.scale(b))
    return out


def kernel_as_matrices(net: NetOfQuadrics, t: SkewTriple) -> list[Matrix]:
    """Basis of ker gamma_hat, each vector reshaped to an n x 5 matrix."""
    n = net.n
    return [Matrix([list(k[h * DIM_V:(h + 1) * DIM_V]) for h in range(n)]) for k in kernel_basis(gamma_hat(net, t))]


def kernel_has_rank_at_most(net: NetOfQuadrics, t: SkewTriple, r: int, seed: int = 0) -> bool:
    """Exact: does ker gamma_hat contain a nonzero tensor of rank <= r (over the
    algebraic closure)? Decided by whether the (r + 1)-minors of a generic
    kernel element have a common projective zero."""
    K = kernel_as_matrices(net, t)
    if not K:
        return False
    if net.n <= r:
        return True
    minors = []
    for rows in itertools.combinations(range(net.n), r + 1):
        for cols in itertools.combinations(range(DIM_V), r + 1):
            minors.append(det_of_linear_matrix(*(X.submatrix(rows, cols) for X in K)))
    return not no_common_zero(minors, seed)



def injectivity_status(net: NetOfQuadrics, t: SkewTriple, seed: int = 0) -> tuple[str, PointOnY5 | None]:
    """Is gamma' injective at every point of Y5, not just at samples?

    gamma'_p is gamma_hat on H (x) U_p, so it fails exactly when a kernel
    vector has its row space inside some U_p, which forces tensor rank <= 2.
    A kernel free of such tensors certifies injectivity everywhere; the same
    condition makes H* (x) U^perp -> C surjective, so the monad is exact with
    rank-2 cohomology at every point. A rank-1 kernel tensor always fails;
    a rational witness point is reported when one is found, and a
    one-dimensional kernel of rank 2 is decided by its row space.
    """
    if not kernel_has_rank_at_most(net, t, 2, seed):
        return INJECTIVE, None
    p = degeneracy_witness(net, t)
    if p is not None or kernel_has_rank_at_most(net, t, 1, seed):
        # h (x) v lies in H (x) U_p for the point p spanned by v and any u
        # with A_i(v, u) = 0, which always exists
        return NOT_INJECTIVE, p
    K = kernel_as_matrices(net, t)
    if len(K) == 1 and rank(K[0]) == 2 and _point_containing(t, K[0].tolist()) is None:
        return INJECTIVE, None
    return UNDECIDED, None


def degeneracy_witness(net: NetOfQuadrics, t: SkewTriple) -> PointOnY5 | None:
    """A point of Y5 where gamma' is not injective, read off from ker gamma_hat.

    gamma'_p is gamma_hat restricted to H (x) U_p, so it drops rank exactly
    when a kernel vector, as an n x 5 matrix, has its row space inside U_p.
    Candidates are the kernel basis and the rational members of pencils of
    basis vectors that have rank 1 (or, for n = 2, an isotropic row space).
    None means no witness was found, not that gamma' is injective everywhere.
    """
    K = kernel_as_matrices(net, t)
    candidates = list(K)
    for i in range(len(K)):
        for j in range(i + 1, len(K)):
            candidates += _pencil_candidates(t, K[i], K[j])
    for X in candidates:
        p = _point_containing(t, X.tolist())
        if p is not None and rank(gamma_prime_at_point(net, t, p)) < 2 * net.n:
            return p
    return None


@dataclass
class SelfDualMonad:
    K_basis: Matrix  # 5n x (4n + 2), columns span im(gamma_hat)
    to_K: Matrix  # H (x) U -> K in K-coordinates
    from_K: Matrix  # K -> H* (x) U*
    cohomology_dimension: int


def selfdual_monad(net: NetOfQuadrics, t: SkewTriple, p: PointOnY5) -> SelfDualMonad:
    """H (x) U -> K -> H* (x) U* with K = im(gamma_hat), evaluated at p."""
    n = net.n
    gh = gamma_hat(net, t)
    kb = column_space_basis(gh)
    if len(kb) != 4 * n + 2:
        raise RankConditionFailed(f"rank of gamma_hat is {len(kb)}, expected {4 * n + 2}")
    K = Matrix.from_columns(kb)
    ub = kronecker(Matrix.identity(n), p.basis)  # 5n x 2n
    images = gh @ ub
    to_K = Matrix.from_columns([coordinates(kb, c) for c in images.columns()])
    restrict = kronecker(Matrix.identity(n), p.basis.T)  # 2n x 5n
    from_K = restrict @ K
    assert (from_K @ to_K).is_zero()
    assert (restrict @ gh @ ub).is_zero()
    h = len(kernel_basis(from_K)) - rank(to_K)
    return SelfDualMonad(K, to_K, from_K, h)


def congruate(net: NetOfQuadrics, f: Matrix) -> NetOfQuadrics:
    if f.shape != (net.n, net.n) or det(f) == 0:
        raise SingularTransform("congruence by a singular matrix")
    return NetOfQuadrics(net.n, *(f.T @ g @ f for g in net.mats))


def chern_character(net_or_charge) -> tuple[chow.ChowClass, chow.ChowClass]:
    """(class of E, class of its acyclic extension) assembled from the monad."""
    n = net_or_charge.n if isinstance(net_or_charge, NetOfQuadrics) else int(net_or_charge)
    u = chow.tautological_sub(5)
    up = chow.tautological_perp(5)
    o = chow.ChowClass.structure_sheaf(5)
    e = up * n - u * n - o * (n - 2)
    te = e + o * (n - 2)
    return e, te


def _kernel_conditions(n: int, t: SkewTriple, tensors: Sequence[Sequence[Sequence]]) -> Matrix:
    """Linear conditions gamma_hat x = 0 for each n x 5 tensor x, in the
    unknowns G_i[a, b] (a <= b) ordered by i, then (a, b) lexicographically."""
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    rows = []
    for x in tensors:
        ax = [[t.mats[i] @ x[h] for h in range(n)] for i in range(3)]
        for hp in range(n):
            for out in range(DIM_V):
                row = []
                for i in range(3):
                    for a, b in pairs:
                        c = ax[i][b][out] if hp == a else 0
                        if hp == b and a != b:
                            c += ax[i][a][out]
                        row.append(c)
                rows.append(row)
    return Matrix(rows, cols=3 * len(pairs))


def _net_from_coordinates(n: int, v: Sequence) -> NetOfQuadrics:
    pairs = [(a, b) for a in range(n) for b in range(a, n)]
    mats = []
    for i in range(3):
        g = [[0] * n for _ in range(n)]
        for (a, b), c in zip(pairs, v[i * len(pairs):(i + 1) * len(pairs)]):
            g[a][b] = g[b][a] = c
        mats.append(Matrix(g))
    return NetOfQuadrics(n, *mats)


PRESCRIBED_CHARGES = (4, 5)


def prescribed_kernel_net(n: int, t: SkewTriple, rng: random.Random) -> NetOfQuadrics | None:
    """Candidate net with n - 3 prescribed kernel vectors in H (x) W.

    Random nets of charge n >= 4 never have corank n - 2, so the kernel is
    imposed: tensors x_j with rows in a coordinate hyperplane W of V, x_j
    supported on the first 4 + j rows, make gamma_hat x_j = 0 a solvable
    linear system for n = 4, 5. gamma_hat is skew of size 5n, so parity
    lifts the corank from n - 3 to n - 2. The net is a small combination
    of an LLL-reduced basis of the integer solutions. None when this draw
    has no nonzero solution; the caller still has to certify the result.
    """
    if n not in PRESCRIBED_CHARGES:
        raise GenerationFailed(f"no construction for charge {n}; supported: {PRESCRIBED_CHARGES}")
    skip = rng.randrange(DIM_V)

    def row():
        return [0 if j == skip else rng.choice((-1, 0, 0, 1)) for j in range(DIM_V)]

    tensors = [[row() if h < 4 + j else [0] * DIM_V for h in range(n)] for j in range(n - 3)]
    basis = integer_kernel(_kernel_conditions(n, t, tensors))
    if not basis:
        return None
    coeffs = [0] * len(basis)
    while not any(coeffs):
        coeffs = [rng.randint(-1, 1) for _ in basis]
    return _net_from_coordinates(n, [sum(c * b[k] for c, b in zip(coeffs, basis)) for k in range(len(basis[0]))])


def random_net(
    n: int,
    t: SkewTriple,
    seed: int = 0,
    bound: int = 3,
    num_samples: int = 10,
    max_tries: int = GENERATION_TRIES,
) -> tuple[NetOfQuadrics, int]:
    """An instanton net; returns (net, tries used).

    Accepted nets pass ``check_instanton`` and have exactly certified
    fiberwise injectivity. n <= 3: uniform symmetric integer matrices in
    [-bound, bound]. n = 4, 5: ``prescribed_kernel_net``, whose entries are
    not bounded by ``bound``. Larger charges raise GenerationFailed.
    """
    if n < 2:
        raise MonadError("charge must be at least 2")
    if n > MAX_CHARGE:
        raise MonadError(f"charge {n} exceeds the supported limit {MAX_CHARGE}")
    rng = random.Random(seed)
    for tries in range(1, max_tries + 1):
        if n <= 3:
            net = NetOfQuadrics(n, *(random_symmetric(rng, n, bound) for _ in range(3)))
        else:
            net = prescribed_kernel_net(n, t, rng)
            if net is None:
                continue
        rep = check_instanton(net, t, num_samples, seed=rng.randrange(2**32))
        if rep.ok and rep.injectivity == INJECTIVE:
            return net, tries
    raise GenerationFailed(f"no instanton net of charge {n} after {max_tries} tries")
