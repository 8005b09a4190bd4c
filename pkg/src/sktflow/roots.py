"""Root systems of the simple compact Lie algebras.

Positive roots are stored as integer coefficient vectors over the simple
roots and generated by Cartan-matrix closure; no Euclidean embedding is
exposed. Inner products are exact rationals under a selectable
normalization of the invariant bilinear form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConsistencyError, DynkinTypeError, RootStringError

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}
_EXACT_RANK = {"F": 4, "G": 2}


@dataclass(frozen=True)
class SimpleType:
    """A simple Dynkin type such as SimpleType("D", 4)."""

    family: str
    rank: int

    def __post_init__(self):
        fam = self.family
        if not (isinstance(fam, str) and len(fam) == 1 and fam in "ABCDEFG"):
            raise DynkinTypeError(f"unknown family {fam!r}; expected one of A..G")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise DynkinTypeError(f"rank must be a positive integer, got {self.rank!r}")
        if fam == "E":
            if self.rank not in (6, 7, 8):
                raise DynkinTypeError("E requires rank ∈ {6, 7, 8}")
        elif fam in _EXACT_RANK:
            if self.rank != _EXACT_RANK[fam]:
                raise DynkinTypeError(f"{fam} requires rank {_EXACT_RANK[fam]}")
        elif self.rank < _MIN_RANK[fam]:
            raise DynkinTypeError(f"{fam} requires rank ≥ {_MIN_RANK[fam]}")

    def __str__(self):
        return f"{self.family}{self.rank}"


class Normalization(str, enum.Enum):
    """Scaling convention for the invariant inner product on roots.

    long2: long roots have squared length 2 (default).
    short2: short roots have squared length 2.
    killing: the exact dual Killing form, computed rather than table-driven.
    """

    LONG2 = "long2"
    SHORT2 = "short2"
    KILLING = "killing"

    @classmethod
    def parse(cls, text: str) -> "Normalization":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(
                f"unknown normalization {text!r}; expected long2, short2 or killing"
            ) from None


@dataclass(frozen=True)
class Root:
    """A root as its integer coefficient vector over the simple roots.

    Negative roots carry nonpositive coefficients and sign -1, so coeffs is
    always the root itself rather than its positive representative.
    """

    coeffs: tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if all(c == 0 for c in self.coeffs) or any(c * self.sign < 0 for c in self.coeffs):
            raise ValueError(f"coefficients {self.coeffs} do not match sign {self.sign:+d}")

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coeffs), -self.sign)

    @property
    def positive(self) -> "Root":
        return self if self.sign > 0 else -self

    @property
    def label(self) -> str:
        terms = []
        for i, c in enumerate(self.positive.coeffs):
            if c:
                terms.append(f"a{i + 1}" if c == 1 else f"{c}a{i + 1}")
        body = "+".join(terms)
        return body if self.sign > 0 else f"-({body})"

    def __str__(self):
        return self.label


class RootString(NamedTuple):
    """Extent of the arithmetic progression beta + n*alpha inside the root set."""

    p: int  # lowest n, always <= 0
    q: int  # highest n, always >= 0


class ModuliDimensions(NamedTuple):
    """Dimension counts of the invariant-structure moduli, rank = 2d."""

    metrics: int
    complex_structures: int
    hermitian_for_fixed_complex: int
    complex_for_fixed_metric: int
    hermitian_pairs: int


def moduli_dimensions(d: int, nposroots: int) -> ModuliDimensions:
    if d < 1 or nposroots < 0:
        raise ValueError("need d >= 1 and nposroots >= 0")
    return ModuliDimensions(
        metrics=d * (d + 1) // 2 + nposroots,
        complex_structures=2 * d * d,
        hermitian_for_fixed_complex=d * d + nposroots,
        complex_for_fixed_metric=d * (d - 1),
        hermitian_pairs=3 * d * d + nposroots,
    )


def _diagram(stype: SimpleType):
    """Squared lengths (long roots = 2) and weighted edges of the Dynkin diagram."""
    n = stype.rank
    two = Fraction(2)
    one = Fraction(1)
    if stype.family == "A":
        return [two] * n, [(i, i + 1, 1) for i in range(n - 1)]
    if stype.family == "B":
        # last node short
        return [two] * (n - 1) + [one], [(i, i + 1, 1) for i in range(n - 2)] + [(n - 2, n - 1, 2)]
    if stype.family == "C":
        # last node long
        return [one] * (n - 1) + [two], [(i, i + 1, 1) for i in range(n - 2)] + [(n - 2, n - 1, 2)]
    if stype.family == "D":
        # fork at node n-3 (0-based)
        return [two] * n, [(i, i + 1, 1) for i in range(n - 2)] + [(n - 3, n - 1, 1)]
    if stype.family == "E":
        # Bourbaki numbering: node 1 is the branch, attached to node 3
        chain = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)][: n - 2]
        return [two] * n, [(i, j, 1) for i, j in chain] + [(1, 3, 1)]
    if stype.family == "F":
        return [two, two, one, one], [(0, 1, 1), (1, 2, 2), (2, 3, 1)]
    # G2, first node short
    return [Fraction(2, 3), two], [(0, 1, 3)]


def _sqrt_fraction(q: Fraction) -> Fraction:
    num, den = isqrt(q.numerator), isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ConsistencyError(f"expected {q} to be a perfect rational square")
    return Fraction(num, den)


def _gram_long2(stype: SimpleType) -> list[list[Fraction]]:
    lengths, edges = _diagram(stype)
    n = stype.rank
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = lengths[i]
    for i, j, mult in edges:
        # <a_i,a_j> = -sqrt(mult * |a_i|^2 |a_j|^2) / 2, rational on every valid diagram
        val = -_sqrt_fraction(Fraction(mult) * lengths[i] * lengths[j] / 4)
        gram[i][j] = gram[j][i] = val
    return gram


def _enumerate_positives(stype: SimpleType, gram) -> list[tuple[int, ...]]:
    """Closure of the simple roots under root-string extension."""
    n = stype.rank

    def pairing(coeffs, j):
        return sum(Fraction(c) * gram[i][j] for i, c in enumerate(coeffs) if c)

    simples = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    known = set(simples)
    level = list(simples)
    out = list(simples)
    while level:
        nxt = []
        for coeffs in level:
            for j in range(n):
                down, depth = list(coeffs), 0
                while True:
                    down[j] -= 1
                    if down[j] < 0 or tuple(down) not in known:
                        break
                    depth += 1
                cartan = 2 * pairing(coeffs, j) / gram[j][j]
                if cartan.denominator != 1:
                    raise ConsistencyError(f"non-integer Cartan pairing for {coeffs}")
                # alpha + alpha_j is a root iff the string extends upward
                if depth - int(cartan) >= 1:
                    up = list(coeffs)
                    up[j] += 1
                    cand = tuple(up)
                    if cand not in known:
                        known.add(cand)
                        nxt.append(cand)
        out.extend(nxt)
        level = nxt
    return out


_POSITIVE_COUNTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


@dataclass(frozen=True, eq=False)
class RootSystem:
    stype: SimpleType
    normalization: Normalization
    simples: tuple[Root, ...]
    positives: tuple[Root, ...]  # sorted by (height, coefficients)
    gram: tuple[tuple[Fraction, ...], ...]
    maximal_root: Root

    def __post_init__(self):
        index = {r.coeffs: i for i, r in enumerate(self.positives)}
        object.__setattr__(self, "_pos_index", index)
        object.__setattr__(self, "_gram_np", np.array(self.gram, dtype=float))
        object.__setattr__(
            self, "_kmat", np.array([r.coeffs for r in self.positives], dtype=float)
        )

    @property
    def rank(self) -> int:
        return self.stype.rank

    @property
    def npositive(self) -> int:
        return len(self.positives)

    @property
    def gram_float(self) -> np.ndarray:
        return self._gram_np

    @property
    def coefficient_matrix(self) -> np.ndarray:
        """Positive-root coefficients as an (npositive x rank) float matrix."""
        return self._kmat

    def inner(self, a, b) -> Fraction:
        ca = a.coeffs if isinstance(a, Root) else tuple(a)
        cb = b.coeffs if isinstance(b, Root) else tuple(b)
        total = Fraction(0)
        for i, x in enumerate(ca):
            if x:
                row = self.gram[i]
                total += x * sum(row[j] * y for j, y in enumerate(cb) if y)
        return total

    def cartan_integer(self, a, b) -> int:
        val = 2 * self.inner(a, b) / self.inner(b, b)
        if val.denominator != 1:
            raise ConsistencyError(f"non-integer Cartan number for {a}, {b}")
        return int(val)

    def is_root(self, coeffs: Sequence[int]) -> bool:
        coeffs = tuple(coeffs)
        if all(c >= 0 for c in coeffs):
            return coeffs in self._pos_index
        if all(c <= 0 for c in coeffs):
            return tuple(-c for c in coeffs) in self._pos_index
        return False

    def root(self, coeffs: Sequence[int]) -> Root:
        coeffs = tuple(coeffs)
        if not self.is_root(coeffs):
            raise ValueError(f"{coeffs} is not a root of {self.stype}")
        return Root(coeffs, 1 if sum(coeffs) > 0 else -1)

    def positive_index(self, root: Root) -> int:
        return self._pos_index[root.positive.coeffs]

    def all_roots(self) -> tuple[Root, ...]:
        return self.positives + tuple(-r for r in self.positives)


def build_root_system(stype: SimpleType, norm: Normalization = Normalization.LONG2) -> RootSystem:
    """Enumerate the positive roots of stype and attach the requested gram matrix."""
    gram2 = _gram_long2(stype)
    coeff_list = _enumerate_positives(stype, gram2)
    expected = _POSITIVE_COUNTS[stype.family](stype.rank)
    if len(coeff_list) != expected:
        raise ConsistencyError(
            f"{stype}: enumerated {len(coeff_list)} positive roots, expected {expected}"
        )
    coeff_list.sort(key=lambda c: (sum(c), c))
    positives = tuple(Root(c) for c in coeff_list)
    top_height = positives[-1].height
    if sum(1 for r in positives if r.height == top_height) != 1:
        raise ConsistencyError(f"{stype}: maximal root is not unique")

    if norm is Normalization.SHORT2:
        scale = Fraction(2) / min(gram2[i][i] for i in range(stype.rank))
    elif norm is Normalization.KILLING:
        scale = _killing_constant(gram2, coeff_list)
    else:
        scale = Fraction(1)
    gram = tuple(tuple(scale * v for v in row) for row in gram2)
    return RootSystem(
        stype=stype,
        normalization=norm,
        simples=tuple(
            Root(tuple(int(i == j) for i in range(stype.rank)))
            for j in range(stype.rank)
        ),
        positives=positives,
        gram=gram,
        maximal_root=positives[-1],
    )


def _killing_constant(gram, coeff_list) -> Fraction:
    """c with c*gram the dual Killing form, from <a,a> = sum_g <g,a>^2 self-consistency."""
    n = len(gram)

    def pair(ca, cb):
        return sum(
            Fraction(x) * gram[i][j] * y
            for i, x in enumerate(ca)
            if x
            for j, y in enumerate(cb)
            if y
        )

    values = []
    for j in range(n):
        simple = tuple(int(i == j) for i in range(n))
        total = 2 * sum(pair(c, simple) ** 2 for c in coeff_list)  # both root signs
        values.append(gram[j][j] / total)
    if any(v != values[0] for v in values[1:]):
        raise ConsistencyError("normalization constant differs across simple roots")
    return values[0]


def killing_normalization_constant(rs: RootSystem) -> Fraction:
    """The exact c such that c * rs.gram is the dual Killing inner product.

    Computed from the self-consistency identity, never from tables; equals 1
    when rs is already in killing normalization.
    """
    return _killing_constant(rs.gram, [r.coeffs for r in rs.positives])


def root_string(rs: RootSystem, alpha: Root, beta: Root) -> RootString:
    """The maximal progression beta + n*alpha inside the root set, p <= n <= q."""
    if beta.coeffs == alpha.coeffs or beta.coeffs == (-alpha).coeffs:
        raise RootStringError(f"string through {beta.label} along {alpha.label} is undefined")

    def extent(direction: int) -> int:
        k = 0
        while True:
            cand = tuple(b + (k + 1) * direction * a for a, b in zip(alpha.coeffs, beta.coeffs))
            if not rs.is_root(cand):
                return k
            k += 1

    q, down = extent(+1), extent(-1)
    if down - q != rs.cartan_integer(beta, alpha):
        raise ConsistencyError(f"string length mismatch for ({alpha.label}, {beta.label})")
    return RootString(p=-down, q=q)
