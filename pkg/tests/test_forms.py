"""Basis brackets and the exterior derivative on invariant forms."""

import numpy as np
import pytest

from sktflow import (
    ChevalleyBasis,
    FactorSpec,
    GroupSpec,
    InvariantForm,
    SimpleType,
    exterior_derivative,
)


def _basis(*tokens):
    group = GroupSpec([FactorSpec(SimpleType(t[0], int(t[1:]))) for t in tokens])
    return group.basis


def test_layout_single_factor():
    basis = _basis("A2")
    assert basis.dim == 2 + 2 * 3
    i = basis.root_index(0, basis.factors[0][0].positives[0])
    j = basis.root_index(0, -basis.factors[0][0].positives[0])
    assert j == i + 1


def test_bracket_antisymmetry():
    basis = _basis("B2")
    for i in range(basis.dim):
        for j in range(basis.dim):
            left = dict(basis.bracket(i, j))
            right = {k: -v for k, v in basis.bracket(j, i)}
            assert left == right


def test_cross_factor_brackets_vanish():
    basis = _basis("A1", "A2")
    rs0, rs1 = basis.factors[0][0], basis.factors[1][0]
    i = basis.root_index(0, rs0.positives[0])
    j = basis.root_index(1, rs1.positives[0])
    assert basis.bracket(i, j) == ()
    assert basis.bracket(basis.torus_index(0, 0), j) == ()


def test_jacobi_identity_sampled():
    basis = _basis("G2")
    rng = np.random.default_rng(0)
    dim = basis.dim

    def ad(i, vec):
        out = np.zeros(dim, dtype=complex)
        for j in np.nonzero(vec)[0]:
            for k, c in basis.bracket(i, int(j)):
                out[k] += c * vec[j]
        return out

    for _ in range(40):
        i, j, k = (int(v) for v in rng.integers(0, dim, 3))
        ek = np.zeros(dim, dtype=complex)
        ek[k] = 1.0
        jac = ad(i, ad(j, ek)) - ad(j, ad(i, ek))
        for m, c in basis.bracket(i, j):
            jac -= c * ad(m, ek)
        assert np.abs(jac).max() < 1e-12


def test_form_value_parity():
    basis = _basis("A2")
    f = InvariantForm(basis, 2, {})
    f.set((0, 3), 2.5)
    assert f.value(0, 3) == 2.5
    assert f.value(3, 0) == -2.5
    assert f.value(3, 3) == 0.0
    assert f.max_abs() == 2.5


def test_exterior_derivative_degree_and_d_squared():
    basis = _basis("B2")
    rng = np.random.default_rng(1)
    f = InvariantForm(basis, 2, {})
    idx = [tuple(sorted(rng.choice(basis.dim, 2, replace=False))) for _ in range(8)]
    for key in idx:
        f.set(key, complex(rng.normal(), rng.normal()))
    df = exterior_derivative(f)
    assert df.degree == 3
    ddf = exterior_derivative(df)
    assert ddf.max_abs() < 1e-12


def test_d_squared_on_three_forms():
    basis = _basis("A2")
    rng = np.random.default_rng(2)
    f = InvariantForm(basis, 3, {})
    for _ in range(10):
        key = tuple(sorted(int(v) for v in rng.choice(basis.dim, 3, replace=False)))
        f.set(key, complex(rng.normal(), rng.normal()))
    assert exterior_derivative(exterior_derivative(f)).max_abs() < 1e-12


def test_exterior_derivative_of_killing_dual_is_closed():
    # B(x, [y, z]) as a 3-form component pattern: d of invariant 0-forms is 0,
    # and d applied twice to any stored form vanishes; spot a 1-form too.
    basis = _basis("A2")
    f = InvariantForm(basis, 1, {})
    f.set((0,), 1.0)
    f.set((2,), 0.5 + 0.25j)
    ddf = exterior_derivative(exterior_derivative(f))
    assert ddf.max_abs() < 1e-12
