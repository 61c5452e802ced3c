import random
from fractions import Fraction

import pytest

from instanton_lab import y5
from instanton_lab.exact import Matrix, cross, random_invertible, rank, span_rank
from instanton_lab.y5 import (
    DependentForms,
    NotSkew,
    SkewTriple,
    ZeroParameter,
    alpha_at_point,
    bilinear,
    intersection_form,
    line_from_form,
    lines_meet,
    pfaffian_kernel,
    point_on_line,
    sample_point,
    validate_skew_triple,
)


def rank4_forms(t, rng, count):
    out = []
    while len(out) < count:
        a = y5.random_vector(rng, 3)
        if rank(t.combo(a)) == 4:
            out.append(a)
    return out


def projective_key(v):
    first = next(x for x in v if x != 0)
    return tuple(x / first for x in v)


def test_validate_rejects_dependent_and_nonskew(space):
    with pytest.raises(DependentForms):
        validate_skew_triple(SkewTriple(space.A1, space.A1, space.A3))
    sym = Matrix([[1 if i == j else 0 for j in range(5)] for i in range(5)])
    with pytest.raises(NotSkew):
        validate_skew_triple(SkewTriple(sym, space.A2, space.A3))


def test_random_triples_pass_probes():
    for seed in range(3):
        report = validate_skew_triple(y5.random_skew_triple(seed), seed=seed)
        assert report.ok and report.rank_probes >= 20


def test_sampled_points_are_on_y5_and_reproducible(space):
    p = sample_point(space, random.Random(4))
    q = sample_point(space, random.Random(4))
    assert p == q
    for m in space.mats:
        assert bilinear(m, p.u1, p.u2) == 0


def test_hundred_samples_give_distinct_planes(space):
    rng = random.Random(11)
    keys = {projective_key(sample_point(space, rng).plucker()) for _ in range(100)}
    assert len(keys) == 100


def test_line_points_are_valid_and_contain_kernel(space):
    rng = random.Random(2)
    for a in rank4_forms(space, rng, 3):
        line = line_from_form(space, a)
        assert not any(space.combo(a) @ line.e)
        assert y5.pfaffian_kernel(space.combo(a)) == line.e
        ker = y5.kernel_basis(space.combo(a))
        assert len(ker) == 1 and span_rank([ker[0], line.e]) == 1
        for _ in range(10):
            lam, mu = rng.randint(-9, 9), rng.randint(-9, 9)
            if lam == mu == 0:
                continue
            p = point_on_line(space, line, lam, mu)
            assert span_rank([p.u1, p.u2, line.e]) == 2
        p, q = point_on_line(space, line, 1, 0), point_on_line(space, line, 0, 1)
        assert not p.same_plane(q)
        with pytest.raises(ZeroParameter):
            point_on_line(space, line, 0, 0)


def test_line_plucker_images_are_collinear(space):
    line = line_from_form(space, rank4_forms(space, random.Random(3), 1)[0])
    pts = [point_on_line(space, line, lam, 1) for lam in range(5)]
    assert rank(Matrix([p.plucker() for p in pts])) == 2


def test_flag_model_matches_degeneracy_locus(space):
    """a : U -> U^perp drops rank exactly on the points of L_a."""
    rng = random.Random(5)
    a = rank4_forms(space, rng, 1)[0]
    m = space.combo(a)
    line = line_from_form(space, a)

    def rank_on(p):
        return span_rank([m.T @ p.u1, m.T @ p.u2])

    for lam in range(-3, 4):
        assert rank_on(point_on_line(space, line, lam, 1)) == 1
    for _ in range(20):
        p = sample_point(space, rng)
        on_line = span_rank([p.u1, p.u2, line.e]) == 2
        assert rank_on(p) == (1 if on_line else 2)


def test_alpha_is_surjective_with_3_dim_kernel(space):
    rng = random.Random(6)
    for _ in range(10):
        p = sample_point(space, rng)
        alpha = alpha_at_point(space, p)
        assert alpha.shape == (3, 6)
        assert rank(alpha) == 3
        assert len(y5.kernel_basis(alpha)) == 3


def test_intersection_form_detects_meeting_lines(space, B):
    rng = random.Random(8)
    assert B.is_symmetric()
    forms = rank4_forms(space, rng, 10)
    for a in forms:
        assert bilinear(B, a, a) != 0
    for a, b in zip(forms, forms[1:]):
        la, lb = line_from_form(space, a), line_from_form(space, b)
        assert lines_meet(space, la, lb) == (bilinear(B, a, b) == 0)
    # constructed meeting pairs: b orthogonal to a
    for a in forms[:5]:
        while True:
            b = cross(B @ a, y5.random_vector(rng, 3))
            if any(b) and rank(space.combo(b)) == 4 and span_rank([a, b]) == 2:
                break
        assert bilinear(B, a, b) == 0
        la, lb = line_from_form(space, a), line_from_form(space, b)
        assert lines_meet(space, la, lb)
        common = y5.make_point(space, la.e, lb.e)
        assert y5.line_through(space, la, common) and y5.line_through(space, lb, common)


def test_intersection_form_invariances(space, B):
    assert intersection_form(space.scaled(Fraction(-3, 2))) == B
    g = random_invertible(random.Random(1), 3, 2)
    B2 = intersection_form(space.change_basis(g))
    assert B2 == y5.normalize_projective(g.T @ B @ g)


def test_flag_vector_is_proportional_to_Ba(space, B):
    """A_i(w1, w2) along L_a is proportional to B a: the evaluation of the
    tautological section pairs lines with points of P(A*)."""
    rng = random.Random(12)
    for a in rank4_forms(space, rng, 5):
        line = line_from_form(space, a)
        c = tuple(bilinear(m, line.w1, line.w2) for m in space.mats)
        assert span_rank([c, B @ a]) == 1
