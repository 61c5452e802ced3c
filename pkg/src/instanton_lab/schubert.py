"""Schubert calculus on Gr(2, 5), used to pin the tautological Chern classes on Y5.

Y5 is a codimension-3 linear section of Gr(2, 5), so [Y5] = sigma_1^3 and the
degree of a class c restricted to Y5 is the degree of c * sigma_1^3 on the
Grassmannian.
"""

from __future__ import annotations

from collections import Counter

ROWS, COLS = 2, 3  # partitions fit in a 2 x 3 box for Gr(2, 5)


def _valid(p) -> bool:
    return len(p) == ROWS and COLS >= p[0] >= p[1] >= 0


def pieri(k: int, cls: Counter) -> Counter:
    """sigma_k * cls: add a horizontal strip of k boxes."""
    out: Counter = Counter()
    for (a, b), coef in cls.items():
        for da in range(k + 1):
            db = k - da
            new = (a + da, b + db)
            # horizontal strip: the second row may not pass the old first row
            if _valid(new) and b + db <= a:
                out[new] += coef
    return Counter({p: c for p, c in out.items() if c})


def product(x: Counter, y: Counter) -> Counter:
    """Product via Giambelli: sigma_{a,b} = sigma_a sigma_b - sigma_{a+1} sigma_{b-1}."""
    out: Counter = Counter()
    for (a, b), coef in y.items():
        term = Counter()
        for p, c in _giambelli_apply(a, b, x).items():
            term[p] += c
        for p, c in term.items():
            out[p] += coef * c
    return Counter({p: c for p, c in out.items() if c})


def _giambelli_apply(a: int, b: int, x: Counter) -> Counter:
    first = pieri(a, pieri(b, x)) if b else pieri(a, x) if a else Counter(x)
    if b == 0:
        return first
    second = pieri(a + 1, pieri(b - 1, x)) if b - 1 else pieri(a + 1, x)
    out = Counter(first)
    for p, c in second.items():
        out[p] -= c
    return Counter({p: c for p, c in out.items() if c})


def sigma(a: int, b: int = 0) -> Counter:
    return Counter({(a, b): 1})


def degree(cls: Counter) -> int:
    return cls.get((COLS, COLS), 0) if ROWS == 2 else 0


def degree_on_y5(cls: Counter) -> int:
    """Integral over Y5 of cls times the power of H completing it to a point."""
    total = 0
    for (a, b), coef in cls.items():
        codim = a + b
        rest = 6 - 3 - codim
        if rest < 0:
            continue
        c = sigma(a, b)
        for _ in range(3 + rest):
            c = pieri(1, c)
        total += coef * degree(c)
    return total


def tautological_chern_on_y5() -> dict:
    """(rank, c1, c2, c3) of U and U^perp on Y5 in units of H, L, P.

    c(U) = 1 - sigma_1 + sigma_11, and U^perp = Q* with c(Q) = 1 + sigma_1 +
    sigma_2 + sigma_3. Codimension 2 and 3 classes restrict to (degree on Y5)
    times L resp. P since H.L = P; a divisor restricts to (degree / 5) H.
    """
    h = degree_on_y5(sigma(1))
    deg = degree_on_y5(sigma(0))
    return {
        "U": (2, -h // deg, degree_on_y5(sigma(1, 1)), 0),
        "U_perp": (3, -h // deg, degree_on_y5(sigma(2)), -degree_on_y5(sigma(3))),
        "degree": deg,
    }
