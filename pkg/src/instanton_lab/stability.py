"""GIT instability of nets of quadrics.

A net is unstable iff there are subspaces H1, H2 of H with
dim H1 + dim H2 > n and h1^T G_i h2 = 0 for all i. Certificates are checked
exactly; the search for them is heuristic and never claims semistability.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import ExactError, Matrix, Vector, inverse, kernel_basis, rank, span_rank, vec
from .forms import det_of_linear_matrix, minors_gcd, rational_roots
from .monad import NetOfQuadrics
from .y5 import bilinear

COORDINATE_SEARCH_MAX = 5
DEFAULT_BUDGET = 10000


class StabilityError(ExactError):
    pass


class BadCertificate(StabilityError):
    pass


class ZeroPencil(StabilityError):
    pass


@dataclass
class InstabilityCertificate:
    H1: list
    H2: list
    source: str = ""

    def __post_init__(self):
        self.H1 = [vec(h) for h in self.H1]
        self.H2 = [vec(h) for h in self.H2]

    def to_json(self) -> dict:
        from .exact import rational_str

        enc = lambda vs: [[rational_str(x) for x in v] for v in vs]  # noqa: E731
        return {"H1": enc(self.H1), "H2": enc(self.H2), "source": self.source}

    @classmethod
    def from_json(cls, data: dict) -> InstabilityCertificate:
        return cls(data["H1"], data["H2"], data.get("source", ""))


def _check_shape(net: NetOfQuadrics, c: InstabilityCertificate) -> None:
    for space in (c.H1, c.H2):
        if any(len(h) != net.n for h in space):
            raise BadCertificate("certificate vectors have the wrong length")
        if span_rank(space) != len(space):
            raise BadCertificate("certificate vectors are linearly dependent")
    if len(c.H1) + len(c.H2) <= net.n:
        raise BadCertificate(f"dim H1 + dim H2 = {len(c.H1) + len(c.H2)} does not exceed n = {net.n}")


def verify_certificate(net: NetOfQuadrics, c: InstabilityCertificate) -> bool:
    _check_shape(net, c)
    return all(bilinear(g, h1, h2) == 0 for g in net.mats for h1 in c.H1 for h2 in c.H2)


def transport_certificate(c: InstabilityCertificate, f: Matrix) -> InstabilityCertificate:
    """Certificate for congruate(net, f) from one for net: H_j -> f^{-1} H_j."""
    fi = inverse(f)
    return InstabilityCertificate([fi @ h for h in c.H1], [fi @ h for h in c.H2], c.source)


def best_partner(net: NetOfQuadrics, H1: Sequence[Vector]) -> list[Vector]:
    """The largest H2 with H1 and H2 orthogonal for every quadric."""
    images = [g @ h for g in net.mats for h in H1]
    if not images:
        return [tuple(Fraction(int(i == j)) for j in range(net.n)) for i in range(net.n)]
    return kernel_basis(Matrix(images, cols=net.n))


def _try(net: NetOfQuadrics, H1: Sequence[Vector], source: str) -> InstabilityCertificate | None:
    H1 = [vec(h) for h in H1]
    if not H1 or span_rank(H1) != len(H1):
        return None
    H2 = best_partner(net, H1)
    if len(H1) + len(H2) > net.n:
        cert = InstabilityCertificate(H1, H2, source)
        assert verify_certificate(net, cert)
        return cert
    return None


def _unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(i == j)) for j in range(n))


# ---------------------------------------------------------------------------
# pencils


@dataclass
class PencilAnalysis:
    factor_degrees: list  # degrees of the invariant factors d_1 | d_2 | ...
    rank: int
    a: int  # image = O^a + O(-1)^b as a subsheaf of H* (x) O
    b: int
    certificate: InstabilityCertificate | None = None

    def to_dict(self) -> dict:
        return {
            "factor_degrees": list(self.factor_degrees),
            "rank": self.rank,
            "a": self.a,
            "b": self.b,
            "certificate": self.certificate.to_json() if self.certificate else None,
        }


def _pencil_image(Q1: Matrix, Q2: Matrix, m: int) -> Matrix:
    """Matrix of s Q1 + t Q2 : H (x) S_{m-1} -> H* (x) S_m, index h * (deg + 1) + j."""
    n = Q1.rows
    rows = [[Fraction(0)] * (n * m) for _ in range(n * (m + 1))]
    for h in range(n):
        for j in range(m):
            for hp in range(n):
                rows[hp * (m + 1) + j][h * m + j] += Q1[hp, h]
                rows[hp * (m + 1) + j + 1][h * m + j] += Q2[hp, h]
    return Matrix(rows, cols=n * m)


def pencil_invariant_factors(Q1: Matrix, Q2: Matrix) -> PencilAnalysis:
    """Invariant factors of s Q1 + t Q2, the splitting of its image and, when
    the image has fewer than n summands, the induced destabilizing pair."""
    n = Q1.rows
    if Q1.is_zero() and Q2.is_zero():
        raise ZeroPencil("both matrices of the pencil vanish")
    degrees = []
    prev = 0
    for k in range(1, n + 1):
        g = minors_gcd([Q1, Q2], k)
        if g.is_zero():
            break
        degrees.append(g.degree - prev)
        prev = g.degree
    r = len(degrees)
    m = n + 1
    b = r * (m + 1) - rank(_pencil_image(Q1, Q2, m))
    a = r - b
    cert = None
    if a + b < n:
        cert = _pencil_destabilizer(Q1, Q2, m)
    return PencilAnalysis(degrees, r, a, b, cert)


def _pencil_destabilizer(Q1: Matrix, Q2: Matrix, m: int) -> InstabilityCertificate:
    n = Q1.rows
    img = _pencil_image(Q1, Q2, m)
    # A' = {v : v (x) s^(m-j) t^j in the image for every j}
    conditions = None
    for j in range(m + 1):
        embed = Matrix([[1 if hp * (m + 1) + j == row else 0 for hp in range(n)] for row in range(n * (m + 1))])
        big = Matrix([list(embed.row(i)) + [-x for x in img.row(i)] for i in range(img.rows)])
        sols = kernel_basis(big)
        proj = [s[:n] for s in sols]
        space = [tuple(v) for v in proj if any(v)]
        conditions = space if conditions is None else _intersect(conditions, space, n)
    A_prime = _basis(conditions or [])
    ann = kernel_basis(Matrix(A_prime, cols=n)) if A_prime else [_unit(n, i) for i in range(n)]
    if ann:
        N = Matrix(ann, cols=n)
        H1 = kernel_basis(Matrix(list((N @ Q1).tolist()) + list((N @ Q2).tolist()), cols=n))
    else:
        H1 = [_unit(n, i) for i in range(n)]
    cert = InstabilityCertificate(H1, ann, "pencil")
    if not H1 or len(H1) + len(ann) <= n:
        raise StabilityError("pencil construction did not produce a destabilizing pair")
    return cert


def _basis(vs: list) -> list[Vector]:
    out: list = []
    for v in vs:
        if span_rank(out + [v]) > len(out):
            out.append(vec(v))
    return out


def _intersect(U: list, W: list, n: int) -> list[Vector]:
    U, W = _basis(U), _basis(W)
    if not U or not W:
        return []
    M = Matrix.from_columns(U + [tuple(-x for x in w) for w in W], rows=n)
    out = []
    for s in kernel_basis(M):
        out.append(tuple(sum(s[i] * U[i][k] for i in range(len(U))) for k in range(n)))
    return _basis(out)


def pencil_certificate_for_net(net: NetOfQuadrics, f1: Sequence, f2: Sequence) -> InstabilityCertificate | None:
    """Run the pencil construction on the line through f1, f2 and lift to the net."""
    Q1, Q2 = net.quadric(f1), net.quadric(f2)
    if Q1.is_zero() and Q2.is_zero():
        return None
    analysis = pencil_invariant_factors(Q1, Q2)
    if analysis.certificate is None:
        return None
    return _try(net, analysis.certificate.H1, "pencil")


# ---------------------------------------------------------------------------
# search


def rational_curve_points(net: NetOfQuadrics, rng: random.Random, lines: int) -> list[Vector]:
    """Rational points of the jumping curve met by coordinate and random lines."""
    curve = det_of_linear_matrix(*net.mats)
    units = [_unit(3, i) for i in range(3)]
    pts = [u for u in units if rank(net.quadric(u)) < net.n]
    if curve.is_zero():
        return pts
    pairs = list(itertools.combinations(units, 2))
    for _ in range(lines):
        pairs.append((tuple(rng.randint(-3, 3) for _ in range(3)), tuple(rng.randint(-3, 3) for _ in range(3))))
    for p, q in pairs:
        if span_rank([p, q]) < 2:
            continue
        g = curve.restrict_to_line(p, q)
        if g.is_zero():
            continue
        for s, t in rational_roots(g):
            pts.append(tuple(s * a + t * b for a, b in zip(p, q)))
    return _basis_points(pts)


def _basis_points(pts: list) -> list[Vector]:
    out = []
    for p in pts:
        if any(span_rank([p, q]) < 2 for q in out):
            continue
        out.append(vec(p))
    return out


@dataclass
class SearchLog:
    budget: int
    used: int = 0
    strategies: list = field(default_factory=list)

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.budget


def search_destabilizer(
    net: NetOfQuadrics, budget: int = DEFAULT_BUDGET, seed: int = 0, log: SearchLog | None = None
) -> InstabilityCertificate | None:
    """Heuristic search; returns a verified certificate or None.

    Strategies in order: (a) coordinate subspaces (n <= 5), (b) kernels of
    gamma(f) at rational points f of the jumping curve, (c) common kernels and
    intersections of such kernels, (d) pencil analysis along random lines.
    ``budget`` caps the number of candidate H1 tried.
    """
    n = net.n
    rng = random.Random(seed)
    log = log if log is not None else SearchLog(budget)

    # (a)
    log.strategies.append("coordinate")
    if n <= COORDINATE_SEARCH_MAX:
        for k in range(1, n + 1):
            for S in itertools.combinations(range(n), k):
                if not log.spend():
                    return None
                cert = _try(net, [_unit(n, i) for i in S], "coordinate")
                if cert:
                    return cert

    # (b)
    log.strategies.append("curve-kernels")
    kernels = []
    for f in rational_curve_points(net, rng, lines=8):
        K = kernel_basis(net.quadric(f))
        if not K:
            continue
        kernels.append(K)
        for H1 in [K] + [[v] for v in K]:
            if not log.spend():
                return None
            cert = _try(net, H1, "curve-kernel")
            if cert:
                return cert

    # (c)
    log.strategies.append("common-kernels")
    common = kernel_basis(Matrix([r for g in net.mats for r in g.tolist()], cols=n))
    if common:
        if log.spend():
            cert = _try(net, common, "common-kernel")
            if cert:
                return cert
    for K1, K2 in itertools.combinations(kernels, 2):
        if not log.spend():
            return None
        meet = _intersect(K1, K2, n)
        span = _basis(K1 + K2)
        for H1 in (meet, span):
            cert = _try(net, H1, "kernel-pair")
            if cert:
                return cert

    # (d)
    log.strategies.append("pencil")
    units = [_unit(3, i) for i in range(3)]
    lines = list(itertools.combinations(units, 2))
    for _ in range(8):
        lines.append((tuple(rng.randint(-3, 3) for _ in range(3)), tuple(rng.randint(-3, 3) for _ in range(3))))
    for f1, f2 in lines:
        if span_rank([f1, f2]) < 2:
            continue
        if not log.spend():
            return None
        cert = pencil_certificate_for_net(net, f1, f2)
        if cert:
            return cert
    return None
