"""Regenerate the bundled fixture corpus (deterministic)."""

import random
from fractions import Fraction
from pathlib import Path

from instanton_lab import io, jumping, monad, y5
from instanton_lab.exact import Matrix, random_invertible, random_symmetric
from instanton_lab.y4 import PencilOfQuadrics

OUT = Path(__file__).resolve().parent.parent / "src" / "instanton_lab" / "fixtures"
FIXTURE_CANDIDATES = 24


def height(net) -> int:
    return max(abs(x.numerator) for g in net.mats for row in g.tolist() for x in row)


def singular_symmetric(rng, n, rank, bound=3):
    m = [[Fraction(0)] * n for _ in range(n)]
    for _ in range(rank):
        v = [rng.randint(-bound, bound) for _ in range(n)]
        c = rng.choice([1, -1, 2, -2])
        for i in range(n):
            for j in range(n):
                m[i][j] += c * v[i] * v[j]
    return Matrix(m)


def jumping_net(t, B, n, ranks, rng):
    """Instanton net whose quadrics G_i have the given ranks, so the three
    coordinate points of P(A*) lie on the jumping curve."""
    while True:
        net = monad.NetOfQuadrics(n, *(singular_symmetric(rng, n, r) for r in ranks))
        if [n - r for r in ranks] != [jumping.jumping_order(net, e) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]:
            continue
        if jumping.det_of_linear_matrix(*net.mats).is_zero():
            continue
        net = monad.congruate(net, random_invertible(rng, n, 1))
        if not monad.check_instanton(net, t, 50, seed=rng.randrange(2**32)).ok:
            continue
        try:
            for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                jumping.line_for_point(t, e, B)
        except y5.Y5Error:
            continue
        return net


def block_unstable(n, k, rng):
    """Quadrics vanish on the first k x k block, so H1 = H2 = <e_1..e_k> with 2k > n."""
    mats = []
    for _ in range(3):
        r = random_symmetric(rng, n, 3).tolist()
        mats.append(Matrix([[0 if i < k and j < k else r[i][j] for j in range(n)] for i in range(n)]))
    return monad.congruate(monad.NetOfQuadrics(n, *mats), random_invertible(rng, n, 1))


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20240531)
    t = y5.random_skew_triple(1)
    assert y5.validate_skew_triple(t, seed=0).ok
    B = y5.intersection_form(t)
    files = {"space": t.to_json()}
    files["net_n2"] = jumping_net(t, B, 2, (1, 1, 1), rng).to_json()
    files["net_n3"] = jumping_net(t, B, 3, (1, 2, 2), rng).to_json()
    for n in (4, 5):
        # constructed nets have unbounded entries; keep the smallest of a few
        nets = [monad.random_net(n, t, seed=100 * n + s)[0] for s in range(FIXTURE_CANDIDATES)]
        files[f"net_n{n}"] = min(nets, key=height).to_json()
    files["unstable_n3"] = block_unstable(3, 2, rng).to_json()
    files["unstable_n4"] = block_unstable(4, 3, rng).to_json()
    files["unstable_pencil_n3"] = monad.NetOfQuadrics(
        3,
        Matrix([[1, 1, 0], [1, 0, 0], [0, 0, 0]]),
        Matrix([[0, 0, 1], [0, 0, 0], [1, 0, 0]]),
        Matrix.zeros(3, 3),
    ).to_json()
    files["pencil_smooth"] = PencilOfQuadrics(Matrix.identity(6), Matrix.diag([1, 2, 3, 4, 5, 6])).to_json()
    files["pencil_corank2"] = PencilOfQuadrics(
        Matrix.diag([1, 1, 1, 1, 0, 0]), Matrix.diag([1, 2, 3, 4, 1, 1])
    ).to_json()
    jordan = [[0] * 6 for _ in range(6)]
    jordan2 = [[0] * 6 for _ in range(6)]
    jordan[0][1] = jordan[1][0] = 1
    jordan2[0][1] = jordan2[1][0] = 2
    jordan2[1][1] = 1
    for i, mu in zip(range(2, 6), (3, 4, 5, 6)):
        jordan[i][i] = 1
        jordan2[i][i] = mu
    files["pencil_double_root"] = PencilOfQuadrics(Matrix(jordan), Matrix(jordan2)).to_json()
    kill = Matrix.diag([1, 1, 1, 1, 1, 0])
    files["pencil_degenerate"] = PencilOfQuadrics(kill, Matrix.diag([1, 2, 3, 4, 5, 0])).to_json()
    for name, data in files.items():
        (OUT / f"{name}.json").write_text(io.dumps(data))
        print("wrote", name)


if __name__ == "__main__":
    main()
