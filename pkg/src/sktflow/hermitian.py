"""Invariant Hermitian structures on products of compact simple groups.

A structure is a product of simple factors, a positive metric on the shared
maximal torus, one positive fiber value per positive root, and optionally a
complex structure on the torus. Torus vectors are coefficient vectors over
the complex basis elements H_a throughout this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import (
    ConsistencyError,
    MissingComplexStructureError,
    PositivityError,
)
from .forms import ChevalleyBasis, InvariantForm, exterior_derivative
from .roots import Normalization, Root, RootSystem, SimpleType, build_root_system
from .structure import StructureConstants, structure_constants


@dataclass(frozen=True)
class FactorSpec:
    """One simple factor: type, inner-product normalization, scale z."""

    stype: SimpleType
    normalization: Normalization = Normalization.LONG2
    z: float = 1.0

    def __post_init__(self):
        if not self.z > 0:
            raise ValueError(f"factor scale z must be positive, got {self.z}")


class GroupSpec:
    """Product of simple factors with cached root data.

    Structure constants and the basis are built lazily; closed-form metric
    computations on large types never pay for them.
    """

    def __init__(self, factors: Sequence[FactorSpec]):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("a group needs at least one factor")
        self.systems: tuple[RootSystem, ...] = tuple(
            build_root_system(f.stype, f.normalization) for f in self.factors
        )
        self.rank_offsets = []
        r = 0
        for rs in self.systems:
            self.rank_offsets.append(r)
            r += rs.rank
        self.total_rank = r
        self._constants: tuple[StructureConstants, ...] | None = None
        self._basis: ChevalleyBasis | None = None

    @property
    def constants(self) -> tuple[StructureConstants, ...]:
        if self._constants is None:
            self._constants = tuple(structure_constants(rs) for rs in self.systems)
        return self._constants

    @property
    def basis(self) -> ChevalleyBasis:
        if self._basis is None:
            self._basis = ChevalleyBasis(list(zip(self.systems, self.constants)))
        return self._basis

    def embed(self, factor: int, coeffs) -> np.ndarray:
        v = np.zeros(self.total_rank)
        off = self.rank_offsets[factor]
        v[off : off + self.systems[factor].rank] = coeffs
        return v

    def gram_blockdiag(self, scales: Sequence[float] | None = None) -> np.ndarray:
        out = np.zeros((self.total_rank, self.total_rank))
        for f, rs in enumerate(self.systems):
            off = self.rank_offsets[f]
            s = 1.0 if scales is None else scales[f]
            out[off : off + rs.rank, off : off + rs.rank] = s * rs.gram_float
        return out

    def build(self, x=None, torus="killing", jt=None) -> "HermitianStructure":
        return HermitianStructure(self, fiber=x, torus=torus, jt=jt)


def _as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class TorusMetric:
    matrix: np.ndarray
    is_killing: bool = False

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.T).max() > 1e-10 * scale:
            raise ValueError("torus metric must be symmetric")
        if np.linalg.eigvalsh(m).min() <= 0:
            raise ValueError("torus metric must be positive definite")

    @staticmethod
    def killing(group: GroupSpec) -> "TorusMetric":
        scales = [f.z for f in group.factors]
        return TorusMetric(group.gram_blockdiag(scales), is_killing=True)

    @staticmethod
    def from_blocks(blocks: Sequence) -> "TorusMetric":
        mats = [_as_matrix(b) for b in blocks]
        n = sum(m.shape[0] for m in mats)
        out = np.zeros((n, n))
        off = 0
        for m in mats:
            out[off : off + m.shape[0], off : off + m.shape[0]] = m
            off += m.shape[0]
        return TorusMetric(out)


@dataclass(frozen=True, eq=False)
class TorusComplexStructure:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if np.abs(m @ m + np.eye(m.shape[0])).max() > 1e-10:
            raise ValueError("torus complex structure must square to -identity")


@dataclass(frozen=True)
class FiberMetric:
    """Raw positive value per positive root, per factor, in canonical order."""

    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        vals = tuple(tuple(float(v) for v in row) for row in self.values)
        object.__setattr__(self, "values", vals)
        for f, row in enumerate(vals):
            for t, v in enumerate(row):
                if not v > 0:
                    raise PositivityError(
                        f"fiber value {v:.6g} at factor {f}, root position {t} is not positive",
                        value=v,
                    )


class HermitianStructure:
    """Torus metric + fiber metric (+ optional torus complex structure)."""

    def __init__(self, group: GroupSpec, fiber=None, torus="killing", jt=None):
        self.group = group
        if fiber is None:
            fiber = FiberMetric(tuple(tuple(1.0 for _ in rs.positives) for rs in group.systems))
        elif not isinstance(fiber, FiberMetric):
            rows = fiber
            if len(group.factors) == 1 and np.ndim(rows[0]) == 0:
                rows = [rows]
            fiber = FiberMetric(tuple(tuple(float(v) for v in row) for row in rows))
        self.fiber = fiber
        if len(fiber.values) != len(group.factors):
            raise ValueError("fiber metric factor count does not match the group")
        for rs, row in zip(group.systems, fiber.values):
            if len(row) != rs.npositive:
                raise ValueError(
                    f"{rs.stype} needs {rs.npositive} fiber values, got {len(row)}"
                )

        if isinstance(torus, TorusMetric):
            self.torus = torus
        elif isinstance(torus, str) and torus == "killing":
            self.torus = TorusMetric.killing(group)
        else:
            self.torus = TorusMetric(_as_matrix(torus))
        if self.torus.matrix.shape[0] != group.total_rank:
            raise ValueError("torus metric size does not match the total rank")

        if jt is None or isinstance(jt, TorusComplexStructure):
            self.jt = jt
        else:
            self.jt = TorusComplexStructure(_as_matrix(jt))
        if self.jt is not None:
            j, g = self.jt.matrix, self.torus.matrix
            if j.shape != g.shape:
                raise ValueError("jt size does not match the total rank")
            if np.abs(j.T @ g @ j - g).max() > 1e-8 * max(1.0, np.abs(g).max()):
                raise ValueError("jt is not compatible with the torus metric")

        # effective fiber values: factor scale applied once, here
        self.xhat = tuple(
            spec.z * np.asarray(row, dtype=float)
            for spec, row in zip(group.factors, fiber.values)
        )
        self.gt = self.torus.matrix
        self.q_full = group.gram_blockdiag()

    def xhat_of(self, factor: int, root: Root) -> float:
        rs = self.group.systems[factor]
        return float(self.xhat[factor][rs.positive_index(root)])

    def y(self, factor: int, root: Root) -> complex:
        return -1j * root.sign * self.xhat_of(factor, root)

    def parse_argument(self, arg):
        """Root (single factor), (factor, Root), or a torus vector over H_a."""
        if isinstance(arg, Root):
            if len(self.group.factors) != 1:
                raise ValueError("bare Root argument is ambiguous on a product; pass (factor, Root)")
            return ("t0", 0, arg)
        if (
            isinstance(arg, tuple)
            and len(arg) == 2
            and isinstance(arg[0], int)
            and isinstance(arg[1], Root)
        ):
            f, root = arg
            if not 0 <= f < len(self.group.factors):
                raise ValueError(f"factor index {f} out of range")
            return ("t0", f, root)
        v = np.asarray(arg, dtype=complex)
        if v.shape != (self.group.total_rank,):
            raise ValueError(
                f"torus vector must have length {self.group.total_rank}, got shape {v.shape}"
            )
        return ("torus", v)


def _split_args(h: HermitianStructure, args):
    parsed = [h.parse_argument(a) for a in args]
    torus = [p[1] for p in parsed if p[0] == "torus"]
    roots = [(p[1], p[2]) for p in parsed if p[0] == "t0"]
    positions = [i for i, p in enumerate(parsed) if p[0] == "torus"]
    return torus, roots, positions


def d_omega(h: HermitianStructure, a, b, c) -> complex:
    """Exterior derivative of the fundamental form on three arguments."""
    torus, roots, tpos = _split_args(h, (a, b, c))
    if len(torus) >= 2:
        return 0j
    if len(torus) == 1:
        if h.jt is None:
            raise MissingComplexStructureError(
                "d_omega with a torus argument needs a torus complex structure"
            )
        (f1, r1), (f2, r2) = roots
        if f1 != f2 or r1.coeffs != tuple(-v for v in r2.coeffs):
            return 0j
        sign = -1.0 if tpos[0] % 2 else 1.0
        k = h.group.embed(f1, r1.coeffs)
        return sign * -((h.jt.matrix @ torus[0]) @ h.gt @ k)
    (f1, r1), (f2, r2), (f3, r3) = roots
    if not (f1 == f2 == f3):
        return 0j
    if any(x + y + z for x, y, z in zip(r1.coeffs, r2.coeffs, r3.coeffs)):
        return 0j
    n = h.group.constants[f1].as_float(r1, r2)
    return n * (h.y(f1, r1) + h.y(f1, r2) + h.y(f1, r3))


def dc_omega(h: HermitianStructure, a, b, c) -> complex:
    """The conjugated derivative; never needs the torus complex structure."""
    torus, roots, tpos = _split_args(h, (a, b, c))
    if len(torus) >= 2:
        return 0j
    if len(torus) == 1:
        (f1, r1), (f2, r2) = roots
        if f1 != f2 or r1.coeffs != tuple(-v for v in r2.coeffs):
            return 0j
        sign = -1.0 if tpos[0] % 2 else 1.0
        k = h.group.embed(f1, r1.coeffs)
        return sign * -(torus[0] @ h.gt @ k)
    (f1, r1), (f2, r2), (f3, r3) = roots
    if not (f1 == f2 == f3):
        return 0j
    if any(x + y + z for x, y, z in zip(r1.coeffs, r2.coeffs, r3.coeffs)):
        return 0j
    n = h.group.constants[f1].as_float(r1, r2)
    eps = r1.sign * r2.sign * r3.sign
    return 1j * eps * n * (h.y(f1, r1) + h.y(f1, r2) + h.y(f1, r3))


def _pair_level_value(h: HermitianStructure, fa: int, alpha: Root, fb: int, beta: Root) -> float:
    """dd^c on (E_a, E_-a, E_b, E_-b), a and b distinct positive roots."""
    ka = h.group.embed(fa, alpha.coeffs)
    kb = h.group.embed(fb, beta.coeffs)
    val = 2.0 * float(ka @ h.gt @ kb)
    if fa != fb:
        return val
    rs, sc = h.group.systems[fa], h.group.constants[fa]
    up = tuple(x + y for x, y in zip(alpha.coeffs, beta.coeffs))
    if rs.is_root(up):
        n2 = float(sc.squared(alpha, beta))
        val -= 2.0 * n2 * (h.xhat_of(fa, rs.root(up)) - h.xhat_of(fa, alpha) - h.xhat_of(fa, beta))
    down = tuple(x - y for x, y in zip(alpha.coeffs, beta.coeffs))
    if rs.is_root(down):
        eps = 1.0 if sum(down) > 0 else -1.0
        n2 = float(sc.squared(alpha, -beta))
        val -= (
            2.0
            * eps
            * n2
            * (eps * h.xhat_of(fa, rs.root(down)) - h.xhat_of(fa, alpha) + h.xhat_of(fa, beta))
        )
    return val


def _quad_level_value(
    h: HermitianStructure, f: int, alpha: Root, beta: Root, gamma: Root, delta: Root
) -> float:
    """dd^c on (E_a, E_b, E_c, E_d): a, b positive, c, d negative, sum zero,
    no opposite pair."""
    rs, sc = h.group.systems[f], h.group.constants[f]
    xa, xb = h.xhat_of(f, alpha), h.xhat_of(f, beta)
    xg, xd = h.xhat_of(f, gamma), h.xhat_of(f, delta)
    val = 0.0
    up = tuple(x + y for x, y in zip(alpha.coeffs, beta.coeffs))
    if rs.is_root(up):
        val += (
            sc.as_float(alpha, beta)
            * sc.as_float(gamma, delta)
            * (xa + xb + xg + xd - 2.0 * h.xhat_of(f, rs.root(up)))
        )
    ag = tuple(x + y for x, y in zip(alpha.coeffs, gamma.coeffs))
    if rs.is_root(ag):
        eps = 1.0 if sum(ag) > 0 else -1.0
        val -= (
            eps
            * sc.as_float(alpha, gamma)
            * sc.as_float(beta, delta)
            * (-xa + xb + xg - xd + 2.0 * eps * h.xhat_of(f, rs.root(ag)))
        )
    ad = tuple(x + y for x, y in zip(alpha.coeffs, delta.coeffs))
    if rs.is_root(ad):
        eps = 1.0 if sum(ad) > 0 else -1.0
        val += (
            eps
            * sc.as_float(alpha, delta)
            * sc.as_float(beta, gamma)
            * (-xa + xb - xg + xd + 2.0 * eps * h.xhat_of(f, rs.root(ad)))
        )
    return val


def _perm_sign(src: list, dst: list) -> float:
    perm = [dst.index(k) for k in src]
    inv = sum(
        1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]
    )
    return -1.0 if inv % 2 else 1.0


def ddc_omega(h: HermitianStructure, a, b, c, d) -> float:
    """dd^c of the fundamental form on four arguments; real-valued."""
    torus, roots, _ = _split_args(h, (a, b, c, d))
    if torus:
        return 0.0
    keys = [(f, r.coeffs) for f, r in roots]
    if len(set(keys)) != 4:
        return 0.0
    nfac = len(h.group.factors)
    sums = [None] * nfac
    for f, r in roots:
        cur = sums[f]
        sums[f] = r.coeffs if cur is None else tuple(x + y for x, y in zip(cur, r.coeffs))
    if any(s is not None and any(s) for s in sums):
        return 0.0

    # opposite pair present: pair-level branch
    for i in range(4):
        for j in range(i + 1, 4):
            fi, ri = roots[i]
            fj, rj = roots[j]
            if fi == fj and ri.coeffs == tuple(-v for v in rj.coeffs):
                k, l = [m for m in range(4) if m not in (i, j)]
                fa, alpha = fi, ri.positive
                fb, betaroot = roots[k][0], roots[k][1].positive
                if fa == fb and alpha.coeffs == betaroot.coeffs:
                    return 0.0
                dst = [
                    (fa, alpha.coeffs),
                    (fa, tuple(-v for v in alpha.coeffs)),
                    (fb, betaroot.coeffs),
                    (fb, tuple(-v for v in betaroot.coeffs)),
                ]
                return _perm_sign(keys, dst) * _pair_level_value(h, fa, alpha, fb, betaroot)

    f = roots[0][0]
    pos = sorted(
        (r for g, r in roots if r.sign > 0),
        key=lambda r: h.group.systems[f].positive_index(r),
    )
    neg = sorted(
        (r for g, r in roots if r.sign < 0),
        key=lambda r: h.group.systems[f].positive_index(r),
    )
    if len(pos) != 2:
        return 0.0
    dst = [(f, r.coeffs) for r in pos + neg]
    return _perm_sign(keys, dst) * _quad_level_value(h, f, pos[0], pos[1], neg[0], neg[1])


def omega_form(h: HermitianStructure, basis: ChevalleyBasis | None = None) -> InvariantForm:
    """The fundamental 2-form on the full basis; needs jt for the torus block."""
    if h.jt is None:
        raise MissingComplexStructureError("the fundamental form needs a torus complex structure")
    basis = basis or h.group.basis
    comps: dict[tuple[int, ...], complex] = {}
    m = -(h.jt.matrix.T @ h.gt)
    r = h.group.total_rank
    for a in range(r):
        for b in range(a + 1, r):
            if m[a, b]:
                comps[(a, b)] = complex(m[a, b])
    for f, rs in enumerate(h.group.systems):
        for root in rs.positives:
            comps[(basis.root_index(f, root), basis.root_index(f, -root))] = -1j * h.xhat_of(
                f, root
            )
    return InvariantForm(basis=basis, degree=2, components=comps)


def dc_form(h: HermitianStructure, basis: ChevalleyBasis | None = None) -> InvariantForm:
    """The 3-form d^c of the fundamental form, assembled componentwise."""
    basis = basis or h.group.basis
    comps: dict[tuple[int, ...], complex] = {}
    for f, rs in enumerate(h.group.systems):
        for root in rs.positives:
            gk = h.gt @ h.group.embed(f, root.coeffs)
            ip, im = basis.root_index(f, root), basis.root_index(f, -root)
            for a in range(h.group.total_rank):
                if gk[a]:
                    comps[(a, ip, im)] = complex(-gk[a])
        for i, eta in enumerate(rs.positives):
            for theta in rs.positives[i + 1 :]:
                up = tuple(x + y for x, y in zip(eta.coeffs, theta.coeffs))
                if not rs.is_root(up):
                    continue
                xi = rs.root(up)
                for triple in ((eta, theta, -xi), (-eta, -theta, xi)):
                    idx = sorted(
                        (basis.root_index(f, r), r) for r in triple
                    )
                    rts = [r for _, r in idx]
                    eps = rts[0].sign * rts[1].sign * rts[2].sign
                    n = h.group.constants[f].as_float(rts[0], rts[1])
                    total_y = sum(h.y(f, r) for r in rts)
                    comps[tuple(k for k, _ in idx)] = 1j * eps * n * total_y
    return InvariantForm(basis=basis, degree=3, components=comps)


def theta_form(h: HermitianStructure, x, basis: ChevalleyBasis | None = None) -> InvariantForm:
    """Metric-dual 1-form of an algebra element."""
    basis = basis or h.group.basis
    comps: dict[tuple[int, ...], complex] = {}
    parsed = h.parse_argument(x)
    if parsed[0] == "torus":
        gv = h.gt @ parsed[1]
        for a in range(h.group.total_rank):
            if gv[a]:
                comps[(a,)] = complex(-gv[a])
    else:
        _, f, root = parsed
        comps[(basis.root_index(f, -root),)] = complex(-h.xhat_of(f, root))
    return InvariantForm(basis=basis, degree=1, components=comps)


def sigma_form(h: HermitianStructure, x, basis: ChevalleyBasis | None = None) -> InvariantForm:
    """2-form pairing brackets against x through the invariant form."""
    basis = basis or h.group.basis
    parsed = h.parse_argument(x)
    comps: dict[tuple[int, ...], complex] = {}
    for (i, j), terms in basis.nonzero_brackets():
        val = 0j
        for m, cm in terms:
            desc = basis.descriptors[m]
            if parsed[0] == "torus" and desc[0] == "H":
                a = basis.torus_index(desc[1], desc[2])
                val += cm * (h.q_full[a] @ parsed[1])
            elif parsed[0] == "t0" and desc[0] == "E":
                _, f, root = parsed
                if desc[1] == f and desc[2].coeffs == tuple(-v for v in root.coeffs):
                    val += cm
        if val:
            comps[(i, j)] = val
    return InvariantForm(basis=basis, degree=2, components=comps)


def d_star_omega(h: HermitianStructure) -> np.ndarray:
    """Codifferential of the fundamental form as the torus vector it is dual to."""
    out = np.zeros(h.group.total_rank)
    for f, rs in enumerate(h.group.systems):
        for t, root in enumerate(rs.positives):
            out -= h.group.embed(f, root.coeffs) / h.xhat[f][t]
    return out


@dataclass
class PluriclosedReport:
    verdict: bool
    max_residual: float
    witness: str | None
    skt1_max: float
    skt2_max: float
    mode: str
    tol: float


def _closed_form_scan(h: HermitianStructure) -> tuple[float, str | None, float, float]:
    best = (0.0, None)
    skt1_max = 0.0
    skt2_max = 0.0
    nfac = len(h.group.factors)
    for f in range(nfac):
        rs = h.group.systems[f]
        pos = rs.positives
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                r = abs(_pair_level_value(h, f, pos[i], f, pos[j])) / 2.0
                if r > skt1_max:
                    skt1_max = r
                if r > best[0]:
                    best = (r, f"pair ({pos[i].label}, {pos[j].label}) in factor {f}")
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                alpha, beta = pos[i], pos[j]
                ab = tuple(x + y for x, y in zip(alpha.coeffs, beta.coeffs))
                for im, mu in enumerate(pos):
                    nu_c = tuple(s - m for s, m in zip(ab, mu.coeffs))
                    if any(v < 0 for v in nu_c) or not any(nu_c) or not rs.is_root(nu_c):
                        continue
                    nu = rs.root(nu_c)
                    if rs.positive_index(nu) <= im:
                        continue
                    if mu.coeffs in (alpha.coeffs, beta.coeffs) or nu.coeffs in (
                        alpha.coeffs,
                        beta.coeffs,
                    ):
                        continue
                    r = abs(_quad_level_value(h, f, alpha, beta, -mu, -nu)) / 2.0
                    if r > skt2_max:
                        skt2_max = r
                    if r > best[0]:
                        best = (
                            r,
                            f"quad ({alpha.label}, {beta.label}, -{mu.label}, -{nu.label})"
                            f" in factor {f}",
                        )
    for fa in range(nfac):
        for fb in range(fa + 1, nfac):
            for alpha in h.group.systems[fa].positives:
                ka = h.group.embed(fa, alpha.coeffs)
                for beta in h.group.systems[fb].positives:
                    kb = h.group.embed(fb, beta.coeffs)
                    r = abs(float(ka @ h.gt @ kb))
                    if r > skt1_max:
                        skt1_max = r
                    if r > best[0]:
                        best = (
                            r,
                            f"pair (factor {fa}: {alpha.label}, factor {fb}: {beta.label})",
                        )
    return best[0], best[1], skt1_max, skt2_max


def _brute_force_scan(h: HermitianStructure) -> tuple[float, str | None, float, float]:
    basis = h.group.basis
    four = exterior_derivative(dc_form(h, basis))
    best = (0.0, None)
    skt1_max = 0.0
    skt2_max = 0.0
    for key, val in four.components.items():
        r = abs(val) / 2.0
        descs = [basis.descriptors[i] for i in key]
        if all(dd[0] == "E" for dd in descs):
            pairs: dict[tuple, int] = {}
            for dd in descs:
                pk = (dd[1], dd[2].positive.coeffs)
                pairs[pk] = pairs.get(pk, 0) + 1
            bucket = "skt1" if len(pairs) == 2 and all(v == 2 for v in pairs.values()) else "skt2"
        else:
            bucket = "mixed"
        if bucket == "skt1" and r > skt1_max:
            skt1_max = r
        if bucket == "skt2" and r > skt2_max:
            skt2_max = r
        if r > best[0]:
            names = ", ".join(
                f"H_{dd[2] + 1}" if dd[0] == "H" else f"factor {dd[1]}: {dd[2].label}"
                for dd in descs
            )
            best = (r, f"{bucket} ({names})")
    return best[0], best[1], skt1_max, skt2_max


def is_pluriclosed(
    h: HermitianStructure, mode: str = "closed_form", tol: float = 1e-8
) -> PluriclosedReport:
    """Scan dd^c of the fundamental form and report the worst component / 2."""
    if mode == "closed_form":
        max_res, witness, skt1_max, skt2_max = _closed_form_scan(h)
    elif mode == "brute_force":
        max_res, witness, skt1_max, skt2_max = _brute_force_scan(h)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected closed_form or brute_force")
    return PluriclosedReport(
        verdict=max_res < tol,
        max_residual=max_res,
        witness=witness,
        skt1_max=skt1_max,
        skt2_max=skt2_max,
        mode=mode,
        tol=tol,
    )


def family_bound(rs: RootSystem) -> float:
    """Simple values at or above this make every induced fiber value positive."""
    return 1.0 - 1.0 / rs.maximal_root.height


def family_values(rs: RootSystem, simple_values) -> np.ndarray:
    """Fiber values induced by values on the simple roots, affinely through 1."""
    s = np.asarray(simple_values, dtype=float)
    if s.shape != (rs.rank,):
        raise ValueError(f"{rs.stype} needs {rs.rank} simple values, got shape {s.shape}")
    return 1.0 + rs.coefficient_matrix @ (s - 1.0)


def pluriclosed_family(group: GroupSpec, simple_values) -> HermitianStructure:
    """The pluriclosed structure determined by values on the simple roots.

    Raises PositivityError naming the first root whose induced value fails.
    """
    rows = simple_values
    if len(group.factors) == 1 and np.ndim(rows[0]) == 0:
        rows = [rows]
    if len(rows) != len(group.factors):
        raise ValueError("need one tuple of simple values per factor")
    xs = []
    for f, rs in enumerate(group.systems):
        vals = family_values(rs, rows[f])
        for t, v in enumerate(vals):
            if not v > 0:
                bound = family_bound(rs)
                raise PositivityError(
                    f"induced value for root {rs.positives[t].label} in factor {f} is "
                    f"{v:.6g} <= 0; simple values above {bound:.6g} stay positive",
                    root_label=rs.positives[t].label,
                    value=float(v),
                    bound=bound,
                )
        xs.append(tuple(float(v) for v in vals))
    return HermitianStructure(group, fiber=FiberMetric(tuple(xs)), torus="killing")


def kahler_flag_residual(h: HermitianStructure) -> float:
    """Worst additivity defect of the fiber values over root sums."""
    worst = 0.0
    for f, rs in enumerate(h.group.systems):
        pos = rs.positives
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                up = tuple(x + y for x, y in zip(pos[i].coeffs, pos[j].coeffs))
                if rs.is_root(up):
                    gap = abs(
                        h.xhat_of(f, rs.root(up))
                        - h.xhat_of(f, pos[i])
                        - h.xhat_of(f, pos[j])
                    )
                    worst = max(worst, gap)
    return worst


@dataclass
class CompatibilityCone:
    """Solutions z of J^T G(z) J = G(z) over per-factor scalings z."""

    dimension: int
    basis: np.ndarray
    representative: np.ndarray | None


def biinvariant_compatible(group: GroupSpec, jt, tol: float = 1e-10) -> CompatibilityCone:
    """Which block scalings of the torus metric the given jt preserves."""
    j = _as_matrix(jt.matrix if isinstance(jt, TorusComplexStructure) else jt)
    r = group.total_rank
    if j.shape != (r, r):
        raise ValueError(f"jt must be {r}x{r} for this group")
    nfac = len(group.factors)
    cols = []
    for f in range(nfac):
        d = np.zeros((r, r))
        off = group.rank_offsets[f]
        rk = group.systems[f].rank
        d[off : off + rk, off : off + rk] = group.systems[f].gram_float
        cols.append((j.T @ d @ j - d).ravel())
    m = np.array(cols).T
    _, svals, vt = np.linalg.svd(m)
    smax = svals.max(initial=0.0)
    null = [vt[i] for i in range(nfac) if (svals[i] if i < len(svals) else 0.0) <= tol * max(smax, 1.0)]
    basis = np.array(null).T if null else np.zeros((nfac, 0))
    rep = None
    if basis.shape[1]:
        res = linprog(
            c=np.zeros(basis.shape[1]),
            A_ub=-basis,
            b_ub=-np.ones(nfac),
            bounds=[(None, None)] * basis.shape[1],
            method="highs",
        )
        if res.success:
            rep = basis @ res.x
    return CompatibilityCone(dimension=basis.shape[1], basis=basis, representative=rep)


def is_irreducible(group: GroupSpec, jt, tol: float = 1e-12) -> bool:
    """False when jt keeps the torus of some proper set of factors invariant."""
    j = _as_matrix(jt.matrix if isinstance(jt, TorusComplexStructure) else jt)
    nfac = len(group.factors)
    if nfac == 1:
        return True
    if nfac > 20:
        raise ValueError(f"subset scan over {nfac} factors is not tractable")
    spans = []
    for f in range(nfac):
        off = group.rank_offsets[f]
        spans.append(list(range(off, off + group.systems[f].rank)))
    for mask in range(1, 2**nfac - 1):
        inside = [i for f in range(nfac) if mask >> f & 1 for i in spans[f]]
        outside = [i for f in range(nfac) if not mask >> f & 1 for i in spans[f]]
        if np.abs(j[np.ix_(outside, inside)]).max() <= tol:
            return False
    return True


def canonical_jt(gt: np.ndarray) -> np.ndarray:
    """A complex structure compatible with the given torus metric."""
    g = _as_matrix(gt)
    r = g.shape[0]
    if r % 2:
        raise ValueError(f"torus complex structures need even rank, got {r}")
    w, v = np.linalg.eigh(g)
    if w.min() <= 0:
        raise ValueError("torus metric must be positive definite")
    half = v @ np.diag(np.sqrt(w)) @ v.T
    inv_half = v @ np.diag(1.0 / np.sqrt(w)) @ v.T
    j0 = np.zeros((r, r))
    for a in range(0, r, 2):
        j0[a, a + 1] = -1.0
        j0[a + 1, a] = 1.0
    return inv_half @ j0 @ half


def structure_to_dict(h: HermitianStructure) -> dict:
    factors = []
    for f, spec in enumerate(h.group.factors):
        factors.append(
            {
                "family": spec.stype.family,
                "rank": spec.stype.rank,
                "normalization": spec.normalization.value,
                "z": spec.z,
                "x": list(h.fiber.values[f]),
            }
        )
    out: dict = {"factors": factors}
    if h.torus.is_killing:
        out["torus"] = "killing"
    else:
        blocks = []
        probe = h.gt.copy()
        for f, rs in enumerate(h.group.systems):
            off = h.group.rank_offsets[f]
            blocks.append(h.gt[off : off + rs.rank, off : off + rs.rank].tolist())
            probe[off : off + rs.rank, off : off + rs.rank] = 0.0
        if np.abs(probe).max() > 0:
            raise ValueError(
                "torus metric couples different factors; only block-diagonal metrics serialize"
            )
        out["torus"] = {"blocks": blocks}
    if h.jt is not None:
        out["jt"] = h.jt.matrix.tolist()
    return out


def structure_from_dict(data: dict) -> HermitianStructure:
    try:
        rows = data["factors"]
        specs = []
        xs = []
        for row in rows:
            stype = SimpleType(str(row["family"]).upper(), int(row["rank"]))
            norm = Normalization.parse(str(row.get("normalization", "long2")))
            specs.append(FactorSpec(stype, norm, float(row.get("z", 1.0))))
            xs.append(row.get("x"))
        group = GroupSpec(specs)
        fiber = tuple(
            tuple(float(v) for v in x) if x is not None else tuple(1.0 for _ in rs.positives)
            for x, rs in zip(xs, group.systems)
        )
        torus = data.get("torus", "killing")
        if isinstance(torus, dict):
            torus = TorusMetric.from_blocks(torus["blocks"])
        elif torus != "killing":
            raise ValueError(f"unknown torus entry {torus!r}")
        jt = data.get("jt")
        if jt is not None:
            jt = TorusComplexStructure(np.asarray(jt, dtype=float))
        return HermitianStructure(group, fiber=FiberMetric(fiber), torus=torus, jt=jt)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"invalid structure data: {exc!r}") from exc


def save_structure(h: HermitianStructure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(structure_to_dict(h), fh, indent=2)
        fh.write("\n")


def load_structure(path) -> HermitianStructure:
    with open(path, encoding="utf-8") as fh:
        return structure_from_dict(json.load(fh))
