"""Structure constants of the complexified Lie algebra in a Chevalley-style basis.

Brackets are E_a coefficients N(a,b) with exactly rational squares; signs are
fixed by choosing the extraspecial decomposition of each positive root to be
positive and propagating everything else through the four-term cocycle. All
values are exact Surds, so the identity suite below compares without tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError
from .roots import Root, RootSystem, root_string
from .surd import Surd

_ZERO = Surd.of(0)


def _coeffs(x) -> tuple[int, ...]:
    return x.coeffs if isinstance(x, Root) else tuple(x)


def _neg(c: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-v for v in c)


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Signed table N(a,b) over all ordered root pairs whose sum is a root."""

    system: RootSystem
    table: dict[tuple[tuple[int, ...], tuple[int, ...]], Surd] = field(repr=False)

    def value(self, a, b) -> Surd:
        return self.table.get((_coeffs(a), _coeffs(b)), _ZERO)

    def squared(self, a, b) -> Fraction:
        return self.value(a, b).squared()

    def as_float(self, a, b) -> float:
        return float(self.value(a, b))


def _string_square(rs: RootSystem, a: Root, b: Root) -> Fraction:
    """N(a,b)^2 from the a-string through b; requires a+b to be a root."""
    p, q = root_string(rs, a, b)
    return Fraction(q * (1 - p), 2) * rs.inner(a, a)


def structure_constants(rs: RootSystem) -> StructureConstants:
    """Build the full signed table by height recursion over positive roots."""
    table: dict[tuple[tuple[int, ...], tuple[int, ...]], Surd] = {}

    def insert_closure(eta: tuple[int, ...], rho: tuple[int, ...], w: Surd):
        # all entries the single positive-pair value w = N(eta, rho) determines
        xi = tuple(a + b for a, b in zip(eta, rho))
        neta, nrho, nxi = _neg(eta), _neg(rho), _neg(xi)
        for key, val in (
            ((eta, rho), w),
            ((rho, eta), -w),
            ((neta, nrho), -w),
            ((nrho, neta), w),
            ((xi, neta), -w),
            ((neta, xi), w),
            ((eta, nxi), -w),
            ((nxi, eta), w),
            ((xi, nrho), w),
            ((nrho, xi), -w),
            ((rho, nxi), w),
            ((nxi, rho), -w),
        ):
            table[key] = val

    for gamma in rs.positives:
        if gamma.height == 1:
            continue
        pairs = []
        for a in rs.positives:
            if a.height >= gamma.height:
                break
            bc = tuple(g - c for g, c in zip(gamma.coeffs, a.coeffs))
            if any(c < 0 for c in bc) or not rs.is_root(bc):
                continue
            b = rs.root(bc)
            if rs.positive_index(b) > rs.positive_index(a):
                pairs.append((a, b))
        if not pairs:
            raise ConsistencyError(f"{gamma.label} has no decomposition into positive roots")

        a1, b1 = pairs[0]  # extraspecial pair: canonically first component
        w1 = Surd.sqrt(_string_square(rs, a1, b1))
        insert_closure(a1.coeffs, b1.coeffs, w1)

        for a, b in pairs[1:]:
            na, nb = _neg(a.coeffs), _neg(b.coeffs)
            # cocycle on (a1, b1, -a, -b): every referenced sum is lower height
            num = table.get((a1.coeffs, nb), _ZERO) * table.get((b1.coeffs, na), _ZERO) - table.get(
                (a1.coeffs, na), _ZERO
            ) * table.get((b1.coeffs, nb), _ZERO)
            val = num / w1
            if val.squared() != _string_square(rs, a, b):
                raise ConsistencyError(
                    f"derived |N({a.label},{b.label})| disagrees with the string formula"
                )
            insert_closure(a.coeffs, b.coeffs, val)

    return StructureConstants(system=rs, table=table)


@dataclass
class IdentityReport:
    """Outcome of the exact identity suite for one structure-constant table."""

    system: str
    counts: dict[str, int]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_identities(
    rs: RootSystem,
    sc: StructureConstants,
    *,
    cocycle_limit: int | None = None,
    seed: int = 0,
) -> IdentityReport:
    """Check the defining identities of the table, exactly.

    cocycle_limit caps how many index triples the four-term check visits; the
    full enumeration is cubic in the number of roots, so large systems pass a
    limit and get a uniform random sample instead.
    """
    counts = {
        "antisymmetry": 0,
        "negation_symmetry": 0,
        "cyclic_rotation": 0,
        "string_square": 0,
        "four_term_cocycle": 0,
        "sign_flip_square": 0,
    }
    failures: list[str] = []
    table = sc.table

    for (r, s), v in table.items():
        counts["antisymmetry"] += 1
        if table.get((s, r)) != -v:
            failures.append(f"antisymmetry at ({r}, {s})")
        counts["negation_symmetry"] += 1
        if table.get((_neg(r), _neg(s))) != -v:
            failures.append(f"negation symmetry at ({r}, {s})")
        counts["cyclic_rotation"] += 1
        g = tuple(-(x + y) for x, y in zip(r, s))
        if sc.value(s, g) != v or sc.value(g, r) != v:
            failures.append(f"cyclic rotation at ({r}, {s})")
        counts["string_square"] += 1
        if v.squared() != _string_square(rs, rs.root(r), rs.root(s)):
            failures.append(f"string square at ({r}, {s})")

    roots = rs.all_roots()
    nroots = len(roots)
    index_of = {r.coeffs: i for i, r in enumerate(roots)}

    def quad_holds(ca, cb, cc, cd) -> bool:
        acc: dict[int, Fraction] = {}
        for t, sgn in (
            (sc.value(ca, cb) * sc.value(cc, cd), 1),
            (sc.value(ca, cc) * sc.value(cb, cd), -1),
            (sc.value(ca, cd) * sc.value(cb, cc), 1),
        ):
            if not t.is_zero:
                acc[t.core] = acc.get(t.core, Fraction(0)) + sgn * t.coeff
        return all(val == 0 for val in acc.values())

    if cocycle_limit is not None and nroots >= 3:
        rng = np.random.default_rng(seed)
        draws = (
            tuple(sorted(rng.choice(nroots, size=3, replace=False)))
            for _ in range(cocycle_limit)
        )
        triples = iter(draws)
    else:
        triples = itertools.combinations(range(nroots), 3)

    for ia, ib, ic in triples:
        ca, cb, cc = roots[ia].coeffs, roots[ib].coeffs, roots[ic].coeffs
        cd = tuple(-(x + y + z) for x, y, z in zip(ca, cb, cc))
        idx = index_of.get(cd)
        if idx is None or idx <= ic:
            continue
        # a pair summing to zero makes the identity degenerate; skip those quads
        if ca == _neg(cb) or ca == _neg(cc) or cb == _neg(cc):
            continue
        counts["four_term_cocycle"] += 1
        if not quad_holds(ca, cb, cc, cd):
            failures.append(f"four-term cocycle at ({ca}, {cb}, {cc}, {cd})")

    pos = rs.positives
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            a, b = pos[i], pos[j]
            counts["sign_flip_square"] += 1
            lhs = sc.squared(a.coeffs, _neg(b.coeffs))
            rhs = sc.squared(a.coeffs, b.coeffs) + rs.inner(a, b)
            if lhs != rhs:
                failures.append(f"sign flip square at ({a.label}, {b.label})")

    return IdentityReport(system=str(rs.stype), counts=counts, failures=failures)
