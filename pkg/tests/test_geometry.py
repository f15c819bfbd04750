import numpy as np
import pytest

from cotkahler import CotangentPoint, LambdaFamily, NaturalStructure, SpaceFormChart
from cotkahler.errors import DomainError
from cotkahler.geometry import (bracket_oracle, connection_coeffs, curvature_blocks, curvature_oracle,
                                dphi_closed_form, dphi_numeric, dphi_residual, einstein_residual,
                                frame_connection, holomorphic_sectional_curvature, horizontal_energy_residual,
                                koszul_oracle, nabla_K_residual, nijenhuis_closed_form, nijenhuis_oracle,
                                parallel_residuals, ricci_blocks, structure_constants, torsion_residual)
from cotkahler.geometry.curvature import curvature_symmetry_residual
from cotkahler.geometry.forms import theorem_three_form
from cotkahler.geometry.frame import base_curvature_contracted

from conftest import flat, negative, positive

X0 = np.array([0.2, -0.1, 0.3])
P0 = np.array([0.5, 0.4, -0.3])


def point(s, x=X0, p=P0):
    return CotangentPoint(x[: s.n], p[: s.n])


def linear():
    return NaturalStructure(SpaceFormChart(3, -1.0), LambdaFamily.power(1, 1.0))


# frame

def test_brackets_against_coordinate_oracle(structure):
    bp = structure.at(point(structure))
    np.testing.assert_allclose(structure_constants(bp), bracket_oracle(structure, bp), atol=1e-8)


def test_horizontal_fields_preserve_energy(structure):
    assert horizontal_energy_residual(structure, structure.at(point(structure))) < 1e-8


def test_contracted_base_curvature_antisymmetric():
    bp = negative().at(point(negative()))
    R0 = base_curvature_contracted(bp)
    assert np.max(np.abs(R0 + np.swapaxes(R0, 1, 2))) < 1e-12


# Nijenhuis tensor

def test_integrable_structures(structure):
    pt = point(structure)
    assert nijenhuis_closed_form(structure, pt).max_abs() < 1e-9
    assert nijenhuis_oracle(structure, pt).max_abs() < 1e-7


def test_flat_oracle_exact():
    s = flat(3)
    assert nijenhuis_oracle(s, point(s)).max_abs() < 1e-10


def test_forced_b1_breaks_integrability():
    s = NaturalStructure(SpaceFormChart(3, 0.0), LambdaFamily.constant(1.0), b1_offset=1.0)
    pt = point(s)
    closed, oracle = nijenhuis_closed_form(s, pt), nijenhuis_oracle(s, pt)
    assert closed.max_abs() > 1e-3
    for a, b in [(closed.hh, oracle.hh), (closed.hv, oracle.hv), (closed.vv, oracle.vv)]:
        assert np.max(np.abs(a - b)) < 1e-6 * closed.max_abs()


def test_zero_fiber_nijenhuis_vanishes():
    s = NaturalStructure(SpaceFormChart(3, 1.0), LambdaFamily.inverse_sqrt(1.0, 1.0), b1_offset=0.3)
    assert nijenhuis_closed_form(s, CotangentPoint(X0, np.zeros(3))).max_abs() == 0.0


# connection

def test_flat_connection_vanishes():
    s = flat(3)
    c = connection_coeffs(s, CotangentPoint(np.zeros(3), P0))
    assert not (c.Q.any() or c.P.any() or c.S.any())
    assert np.max(np.abs(koszul_oracle(s, CotangentPoint(np.zeros(3), P0)))) < 1e-10


def test_space_form_p_s_match_generic():
    s = linear()
    pt = CotangentPoint([0.3, 0.1, -0.2], [1.0, -0.5, 0.7])
    sp, gen = connection_coeffs(s, pt), connection_coeffs(s, pt, "generic")
    np.testing.assert_allclose(sp.P, gen.P, atol=1e-9)
    np.testing.assert_allclose(sp.S, gen.S, atol=1e-9)


def test_koszul_oracle_agreement(structure):
    pt = point(structure)
    conn = frame_connection(structure, structure.at(pt))
    assert np.max(np.abs(conn - koszul_oracle(structure, pt))) < 1e-6


def test_torsion_free(structure):
    assert torsion_residual(structure, point(structure)) < 1e-10


def test_metric_and_complex_structure_parallel(structure):
    dG, dJ = parallel_residuals(structure, point(structure))
    assert dG < 1e-6 and dJ < 1e-6


def test_vertical_q_closed_form():
    # Q from the metric fiber derivatives, decomposed onto J2 (x) p, delta (x) g0 and g0 (x) g0 (x) p
    s = negative(A=2.0)
    bp = s.at(point(s))
    k = bp.coeffs
    lam, dlam, ddlam, t, A, c = k.lambda_, k.lambda_prime, s.family.second_derivative(bp.t), bp.t, s.A, s.c
    m = lam + 2 * t * dlam
    g0, p, eye = bp.frame.g0, bp.pt.p, np.eye(3)
    expected = ((c * lam**3 + A**2 * dlam) / (A * lam * m) * np.einsum("ij,h->ijh", bp.st.J2, p)
                + dlam / lam * (np.einsum("hi,j->ijh", eye, g0) + np.einsum("hj,i->ijh", eye, g0))
                + (lam * ddlam - 3 * dlam**2) / (lam * m) * np.einsum("i,j,h->ijh", g0, g0, p))
    np.testing.assert_allclose(connection_coeffs(s, bp).Q, expected, atol=1e-12)
    assert np.max(np.abs(connection_coeffs(s, bp, "literal").Q - expected)) > 1e-3


def test_unknown_path():
    with pytest.raises(ValueError):
        connection_coeffs(flat(), point(flat()), "nope")


# curvature

def test_flat_curvature_zero():
    s = flat(3)
    kb = curvature_blocks(s, point(s))
    assert not kb.full().any()
    assert np.max(np.abs(curvature_oracle(s, point(s)).full())) < 1e-10


@pytest.mark.parametrize("make", [positive, negative])
def test_curvature_against_composition_oracle(make):
    s = make()
    pt = point(s)
    K, oracle = curvature_blocks(s, pt).full(), curvature_oracle(s, pt).full()
    assert np.max(np.abs(K - oracle)) < 1e-6 * np.max(np.abs(K))


def test_zero_fiber_horizontal_block():
    s = negative(A=2.0)
    bp = s.at(CotangentPoint(X0, np.zeros(3)))
    g, eye = bp.ms.g, np.eye(3)
    expected = s.c * (np.einsum("hi,jk->ijkh", eye, g) - np.einsum("hj,ik->ijkh", eye, g))
    np.testing.assert_allclose(curvature_blocks(s, bp).hh_h, expected, atol=1e-15)


def test_curvature_antisymmetry_and_pair_symmetry(structure):
    bp = structure.at(point(structure))
    K = curvature_oracle(structure, bp.pt).full()
    assert np.max(np.abs(K + np.swapaxes(K, 2, 3))) < 1e-8
    assert curvature_symmetry_residual(structure, bp) < 1e-9


def test_ricci_examples():
    s = positive(n=2)
    bp = s.at(point(s))
    rb = ricci_blocks(curvature_blocks(s, bp), bp.st)
    np.testing.assert_allclose(rb.ric_hh, 2.0 * bp.st.G1, atol=1e-9)
    s = negative(n=3, A=2.0)
    bp = s.at(point(s))
    rb = ricci_blocks(curvature_blocks(s, bp), bp.st)
    np.testing.assert_allclose(rb.ric_vv, -1.5 * bp.st.G2, atol=1e-9)
    assert not ricci_blocks(curvature_blocks(flat(), point(flat()))).ric_hh.any()


def test_einstein(structure):
    assert einstein_residual(structure, point(structure)) < 1e-9


def test_locally_symmetric(rng):
    s = positive()
    for _ in range(3):
        x = rng.uniform(-0.4, 0.4, 3)
        assert nabla_K_residual(s, CotangentPoint(x, rng.normal(size=3) * 0.6)) < 1e-5
    assert nabla_K_residual(flat(3), point(flat(3))) == 0.0


def test_perturbed_metric_not_symmetric():
    s = NaturalStructure(SpaceFormChart(3, 1.0), LambdaFamily.inverse_sqrt(1.0, 1.0), d2_offset=0.1)
    assert nabla_K_residual(s, point(s)) > 1e-3


# holomorphic sectional curvature

def test_hsc_flat(rng):
    s = flat(3)
    for X in rng.normal(size=(10, 6)):
        assert holomorphic_sectional_curvature(s, point(s), X) == 0.0


@pytest.mark.parametrize("make", [positive, lambda: negative(A=2.0)])
def test_hsc_pure_directions(make, rng):
    # purely horizontal or vertical X all give c / A
    s = make()
    bp = s.at(point(s))
    for u in rng.normal(size=(5, 3)):
        for X in (np.r_[u, np.zeros(3)], np.r_[np.zeros(3), u]):
            assert holomorphic_sectional_curvature(s, bp, X) == pytest.approx(s.c / s.A, abs=1e-12)


def test_hsc_mixed_direction():
    # frozen from the composition-oracle curvature at the same point
    s = positive()
    X = np.array([1.0, 1.0, 0.0, 0.0, 0.0, 1.0])
    H = holomorphic_sectional_curvature(s, point(s), X)
    assert H == pytest.approx(1.8583918680536506, abs=1e-8)
    assert holomorphic_sectional_curvature(s, point(s), 2 * X) == pytest.approx(H, abs=1e-10)


def test_hsc_zero_vector():
    with pytest.raises(DomainError):
        holomorphic_sectional_curvature(positive(), point(positive()), np.zeros(6))


# fundamental form

def test_kahler(structure):
    assert dphi_residual(structure, point(structure)) < 1e-7


def test_flat_constant_form_closed():
    s = flat(3)
    assert dphi_residual(s, point(s)) == 0.0


@pytest.mark.parametrize("make", [flat, positive, negative])
def test_injected_mu_three_form(make):
    base = make()
    s = NaturalStructure(base.chart, base.family, mu_offset=1.0)
    pt = point(s)
    numeric = dphi_numeric(s, pt)
    closed = dphi_closed_form(s, pt, factor=1.0)
    assert np.max(np.abs(numeric - closed)) < 1e-6 * np.max(np.abs(closed))


def test_three_form_alternating():
    bp = negative().at(point(negative()))
    T = theorem_three_form(bp)
    np.testing.assert_allclose(T, -np.swapaxes(T, 0, 1), atol=1e-15)
    np.testing.assert_allclose(T, -np.swapaxes(T, 1, 2), atol=1e-15)
