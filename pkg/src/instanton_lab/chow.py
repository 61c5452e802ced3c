"""Numerical Chow ring of an index-2 Fano threefold Y_d and Riemann-Roch.

Classes live in the basis {1, H, L, P} with H^2 = d L, H L = P, H^3 = d P.
A :class:`ChowClass` stores the Chern character (ch0, ch1, ch2, ch3); Chern
classes are derived on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import ExactError, rational_str

DEGREES = (1, 2, 3, 4, 5)


class ChowError(ExactError):
    pass


class NonIntegralChi(ChowError):
    pass


class ZeroRank(ChowError):
    pass


class BadCharge(ChowError):
    pass


def _q(x) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class ChowClass:
    d: int
    ch0: Fraction
    ch1: Fraction
    ch2: Fraction
    ch3: Fraction

    def __post_init__(self):
        if self.d not in DEGREES:
            raise ChowError(f"degree {self.d} is not in 1..5")
        for name in ("ch0", "ch1", "ch2", "ch3"):
            object.__setattr__(self, name, _q(getattr(self, name)))

    # constructors ---------------------------------------------------------
    @classmethod
    def from_chern(cls, d: int, r, c1, c2, c3) -> ChowClass:
        """Chern character of a class with rank r and Chern classes c1 H, c2 L, c3 P."""
        r, c1, c2, c3 = map(_q, (r, c1, c2, c3))
        ch2 = d * c1 * c1 / 2 - c2
        ch3 = (d * c1**3 - 3 * c1 * c2 + 3 * c3) / 6
        return cls(d, r, c1, ch2, ch3)

    @classmethod
    def structure_sheaf(cls, d: int) -> ChowClass:
        return cls(d, 1, 0, 0, 0)

    @classmethod
    def line_bundle(cls, d: int, t: int) -> ChowClass:
        return cls.structure_sheaf(d).twist(t)

    # Chern classes --------------------------------------------------------
    @property
    def rank(self) -> Fraction:
        return self.ch0

    @property
    def c1(self) -> Fraction:
        return self.ch1

    @property
    def c2(self) -> Fraction:
        return self.d * self.ch1**2 / 2 - self.ch2

    @property
    def c3(self) -> Fraction:
        return 2 * self.ch3 - self.d * self.ch1**3 / 3 + self.ch1 * self.c2

    def chern(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.rank, self.c1, self.c2, self.c3)

    # ring structure ------------------------------------------------------
    def _check(self, other: ChowClass):
        if self.d != other.d:
            raise ChowError("classes on different threefolds")

    def __add__(self, other: ChowClass) -> ChowClass:
        self._check(other)
        return ChowClass(self.d, self.ch0 + other.ch0, self.ch1 + other.ch1, self.ch2 + other.ch2, self.ch3 + other.ch3)

    def __neg__(self) -> ChowClass:
        return ChowClass(self.d, -self.ch0, -self.ch1, -self.ch2, -self.ch3)

    def __sub__(self, other: ChowClass) -> ChowClass:
        return self + (-other)

    def __mul__(self, other) -> ChowClass:
        if not isinstance(other, ChowClass):
            c = _q(other)
            return ChowClass(self.d, c * self.ch0, c * self.ch1, c * self.ch2, c * self.ch3)
        self._check(other)
        a, b, d = self, other, self.d
        return ChowClass(
            d,
            a.ch0 * b.ch0,
            a.ch0 * b.ch1 + a.ch1 * b.ch0,
            a.ch0 * b.ch2 + a.ch2 * b.ch0 + d * a.ch1 * b.ch1,
            a.ch0 * b.ch3 + a.ch3 * b.ch0 + a.ch1 * b.ch2 + a.ch2 * b.ch1,
        )

    __rmul__ = __mul__

    def dual(self) -> ChowClass:
        return ChowClass(self.d, self.ch0, -self.ch1, self.ch2, -self.ch3)

    def twist(self, t: int) -> ChowClass:
        """ch(F(t)) = ch(F) * exp(tH)."""
        d = self.d
        t = _q(t)
        return self * ChowClass(d, 1, t, d * t * t / 2, d * t**3 / 6)

    def degree3(self) -> Fraction:
        """Coefficient of P (the integral over Y)."""
        return self.ch3

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "ch": [rational_str(x) for x in (self.ch0, self.ch1, self.ch2, self.ch3)],
            "chern": [rational_str(x) for x in self.chern()],
        }

    def __str__(self) -> str:
        parts = []
        for coef, sym in zip((self.ch0, self.ch1, self.ch2, self.ch3), ("", "H", "L", "P")):
            if coef:
                parts.append(f"{rational_str(coef)}{'*' + sym if sym else ''}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


# ---------------------------------------------------------------------------
# Todd class and Riemann-Roch


@lru_cache(maxsize=None)
def todd(d: int) -> ChowClass:
    """td(Y_d) = 1 + H + tau L + P.

    td_1 = c_1(Y)/2 = H and td_3 = P from chi(O) = 1; the remaining unknown tau
    is solved from chi(O(-1)) = 0 (O(-1) = omega (x) O(1) is acyclic), which
    is linear in tau.
    """
    def chi_with(tau):
        td = ChowClass(d, 1, 1, tau, 1)
        return (ChowClass.line_bundle(d, -1) * td).degree3()

    c0 = chi_with(Fraction(0))
    slope = chi_with(Fraction(1)) - c0
    tau = -c0 / slope
    return ChowClass(d, 1, 1, tau, 1)


def chi(c: ChowClass, check: bool = True) -> Fraction:
    value = (c * todd(c.d)).degree3()
    if check and value.denominator != 1:
        raise NonIntegralChi(f"Euler characteristic {value} is not an integer")
    return value


# ---------------------------------------------------------------------------
# named classes


def instanton(d: int, n: int) -> ChowClass:
    return ChowClass.from_chern(d, 2, 0, n, 0)


def acyclic_extension(d: int, n: int) -> ChowClass:
    return ChowClass.from_chern(d, n, 0, n, 0)


# Chern classes of the tautological bundles on Y5, in units of (H, L, P).
# Pinned from Schubert calculus on Gr(2, 5) against [Y5] = sigma_1^3, see
# ``schubert.tautological_chern_on_y5``; the test suite re-derives them.
Y5_TAUTOLOGICAL_SUB = (2, -1, 2, 0)  # U: rank, c1, c2, c3
Y5_TAUTOLOGICAL_PERP = (3, -1, 3, -1)  # U^perp = ker(V* -> U*)


def tautological_sub(d: int = 5) -> ChowClass:
    if d != 5:
        raise ChowError("the tautological bundle is only modelled on Y5")
    return ChowClass.from_chern(5, *Y5_TAUTOLOGICAL_SUB)


def tautological_perp(d: int = 5) -> ChowClass:
    if d != 5:
        raise ChowError("the tautological bundle is only modelled on Y5")
    return ChowClass.from_chern(5, *Y5_TAUTOLOGICAL_PERP)


# ---------------------------------------------------------------------------
# slopes


def slope(c: ChowClass) -> Fraction:
    if c.rank == 0:
        raise ZeroRank("slope of a rank-zero class")
    return c.c1 / c.rank


def normalize(c: ChowClass) -> tuple[ChowClass, int]:
    """Twist so the slope lies in (-1, 0]; returns (class, twist used)."""
    k = -math.ceil(slope(c))
    return c.twist(k), k


# ---------------------------------------------------------------------------
# cohomology table of an instanton


STAR = "*"


@dataclass
class CohomologyTable:
    d: int
    n: int
    twists: list
    entries: dict  # (i, t) -> int or STAR
    chis: dict  # t -> chi(E(t))

    def column(self, t: int) -> list:
        return [self.entries[(i, t)] for i in range(4)]

    def constraint(self, t: int) -> str:
        col = self.column(t)
        terms = []
        known = 0
        for i, v in enumerate(col):
            sign = 1 if i % 2 == 0 else -1
            if v == STAR:
                terms.append(("+" if sign > 0 else "-") + f" h{i}")
            else:
                known += sign * v
        rhs = self.chis[t] - known
        if not terms:
            return f"{known} = {self.chis[t]}"
        lhs = " ".join(terms).lstrip("+ ").strip()
        return f"{lhs} = {rhs}"

    def consistent(self) -> bool:
        for t in self.twists:
            col = self.column(t)
            if STAR in col:
                continue
            if sum((-1) ** i * v for i, v in enumerate(col)) != self.chis[t]:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "degree": self.d,
            "charge": self.n,
            "twists": list(self.twists),
            "rows": {f"h{i}": [self.entries[(i, t)] for t in self.twists] for i in range(4)},
            "chi": [int(self.chis[t]) for t in self.twists],
            "constraints": {str(t): self.constraint(t) for t in self.twists if STAR in self.column(t)},
        }

    def render(self) -> str:
        width = max(6, max(len(str(t)) for t in self.twists) + 2)
        lines = ["t".ljust(10) + "".join(str(t).rjust(width) for t in self.twists)]
        for i in (3, 2, 1, 0):
            lines.append(f"h{i}(E(t))".ljust(10) + "".join(str(self.entries[(i, t)]).rjust(width) for t in self.twists))
        lines.append("chi".ljust(10) + "".join(str(self.chis[t]).rjust(width) for t in self.twists))
        stars = [f"  t={t}: {self.constraint(t)}" for t in self.twists if STAR in self.column(t)]
        if stars:
            lines.append("constraints:")
            lines.extend(stars)
        return "\n".join(lines)


def cohomology_table(d: int, n: int, twists) -> CohomologyTable:
    if n < 2:
        raise BadCharge("instanton charge must be at least 2")
    if d not in DEGREES:
        raise ChowError(f"degree {d} is not in 1..5")
    twists = list(twists)
    e = instanton(d, n)
    entries = {}
    chis = {}
    for t in twists:
        chis[t] = chi(e.twist(t))
        col = [STAR] * 4
        if t <= 0:
            col[0] = 0
        if t <= -1:
            col[1] = 0
        if t >= -1:
            col[2] = 0
        if t >= -2:
            col[3] = 0
        if t == 0:
            col[1] = n - 2
        if t == -2:
            col[2] = n - 2
        entries.update({(i, t): col[i] for i in range(4)})
    return CohomologyTable(d, n, twists, entries, chis)


# ---------------------------------------------------------------------------
# degree-4 Fourier-Mukai image


def grr_y4(r, deg) -> ChowClass:
    """Chern character of the image of a sheaf of rank r and degree deg on the
    genus-2 curve: (2 deg - r) - deg H + r L + (deg / 3) P."""
    r, deg = _q(r), _q(deg)
    return ChowClass(4, 2 * deg - r, -deg, r, deg / 3)
