"""Degree-4 threefolds as pencils of quadrics in P^5: the discriminant sextic."""

from __future__ import annotations

from dataclasses import dataclass

from .exact import ExactError, Matrix
from .forms import HomogeneousForm, binary_form_squarefree, det_of_linear_matrix, minors_gcd

DIM = 6


class Y4Error(ExactError):
    pass


class ZeroSextic(Y4Error):
    pass


class SingularPencil(Y4Error):
    pass


@dataclass(frozen=True)
class PencilOfQuadrics:
    Q1: Matrix
    Q2: Matrix

    def __post_init__(self):
        for q in (self.Q1, self.Q2):
            if q.shape != (DIM, DIM):
                raise Y4Error(f"pencil quadrics must be {DIM}x{DIM}, got {q.shape}")
            if not q.is_symmetric():
                raise Y4Error("pencil quadrics must be symmetric")
        if self.Q1.is_zero() and self.Q2.is_zero():
            raise Y4Error("both quadrics of the pencil vanish")

    def congruate(self, S: Matrix) -> PencilOfQuadrics:
        return PencilOfQuadrics(S.T @ self.Q1 @ S, S.T @ self.Q2 @ S)

    def reparametrize(self, g: Matrix) -> PencilOfQuadrics:
        """New generators Q'_j = sum_i g[i, j] Q_i."""
        q = (self.Q1, self.Q2)
        return PencilOfQuadrics(*(q[0].scale(g[0, j]) + q[1].scale(g[1, j]) for j in range(2)))

    def to_json(self) -> dict:
        return {"Q1": self.Q1.to_json(), "Q2": self.Q2.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> PencilOfQuadrics:
        return cls(Matrix.from_json(data["Q1"]), Matrix.from_json(data["Q2"]))


@dataclass
class BranchData:
    sextic: HomogeneousForm
    squarefree: bool
    profile: dict  # multiplicity -> product of the factors with that multiplicity
    max_corank: int

    def multiplicities(self) -> dict[int, int]:
        """multiplicity -> number of branch points (over the algebraic closure)."""
        return {k: f.degree for k, f in self.profile.items() if f.degree}

    def to_dict(self) -> dict:
        return {
            "sextic": self.sextic.to_json(),
            "squarefree": self.squarefree,
            "multiplicities": {str(k): v for k, v in self.multiplicities().items()},
            "max_corank": self.max_corank,
        }


def max_corank(Q1: Matrix, Q2: Matrix) -> int:
    """Largest corank over the pencil: n - k0 + 1, where k0 is the least size
    whose minors have a nonconstant gcd (the pencil is generically regular)."""
    n = Q1.rows
    for k in range(1, n + 1):
        g = minors_gcd([Q1, Q2], k)
        if g.is_zero():
            raise ZeroSextic("minors vanish identically")
        if g.degree > 0:
            return n - k + 1
    return 0


def discriminant_sextic(p: PencilOfQuadrics) -> BranchData:
    f = det_of_linear_matrix(p.Q1, p.Q2)
    if f.is_zero():
        raise ZeroSextic("every quadric of the pencil is degenerate")
    squarefree, profile = binary_form_squarefree(f)
    return BranchData(f, squarefree, profile, max_corank(p.Q1, p.Q2))


def smoothness_check(p: PencilOfQuadrics) -> bool:
    try:
        data = discriminant_sextic(p)
    except ZeroSextic:
        return False
    return data.squarefree and data.max_corank == 1


@dataclass
class Genus2Data:
    sextic: HomogeneousForm
    genus: int
    branch_points: dict  # multiplicity -> count

    def to_dict(self) -> dict:
        return {
            "sextic": self.sextic.to_json(),
            "genus": self.genus,
            "branch_points": {str(k): v for k, v in self.branch_points.items()},
        }


def genus2_data(p: PencilOfQuadrics) -> Genus2Data:
    """The double cover y^2 = sextic of P^1, genus 2 when the sextic is squarefree."""
    if not smoothness_check(p):
        raise SingularPencil("the pencil does not define a smooth threefold")
    data = discriminant_sextic(p)
    return Genus2Data(data.sextic, (data.sextic.degree - 2) // 2, data.multiplicities())
