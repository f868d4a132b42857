import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockforge import oneparticle as op
from fockforge.oneparticle import LowestWeightIrrep

TWO_PI = 2 * math.pi


@pytest.mark.parametrize(
    "n,d,expected",
    [
        (1, 3, [TWO_PI, 2 * TWO_PI, 3 * TWO_PI]),
        (1, 1, [TWO_PI]),
        (2, 2, [2 * TWO_PI, 3 * TWO_PI]),
    ],
)
def test_rotation_spectrum(n, d, expected):
    np.testing.assert_allclose(op.rotation_spectrum(LowestWeightIrrep(n, d)), expected, rtol=1e-15)


def test_spectrum_floor_matches_gibbs_series():
    # lowest weight 2 puts the floor at 4 pi; a long truncated series reproduces the trace
    beta = 0.3
    spec = op.rotation_spectrum(LowestWeightIrrep(2, 200))
    assert spec[0] == pytest.approx(4 * math.pi)
    assert math.fsum(np.exp(-beta * spec)) == pytest.approx(op.one_particle_gibbs_trace(2, beta), rel=1e-14)


def test_invalid_irrep():
    with pytest.raises(ValueError):
        LowestWeightIrrep(0, 3)
    with pytest.raises(ValueError):
        LowestWeightIrrep(1, 0)


def test_ladder_examples():
    lp, lm, _ = op.ladder_operators(LowestWeightIrrep(1, 2))
    assert lp[1, 0] == pytest.approx(math.sqrt(2))
    lp, lm, _ = op.ladder_operators(LowestWeightIrrep(1, 5))
    np.testing.assert_array_equal(lm[:, 0], 0)
    lp, _, _ = op.ladder_operators(LowestWeightIrrep(2, 3))
    assert lp[2, 1] == pytest.approx(math.sqrt(10))


@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("d", [2, 4, 9])
def test_ladder_commutation(n, d):
    lp, lm, l0 = op.ladder_operators(LowestWeightIrrep(n, d))
    assert np.max(np.abs(l0 @ lp - lp @ l0 - lp)) <= 1e-12
    assert np.max(np.abs(l0 @ lm - lm @ l0 + lm)) <= 1e-12
    c = lm @ lp - lp @ lm - 2 * l0
    assert np.max(np.abs(c[: d - 1, : d - 1])) <= 1e-12
    # the cutoff band really is broken
    assert abs(c[d - 1, d - 1]) > 1


def test_ladder_needs_two_states():
    with pytest.raises(ValueError):
        op.ladder_operators(LowestWeightIrrep(1, 1))


def test_gibbs_trace_examples():
    assert op.one_particle_gibbs_trace(1, math.log(2) / TWO_PI) == pytest.approx(1.0, rel=1e-14)
    assert op.one_particle_gibbs_trace(1, math.log(4) / TWO_PI) == pytest.approx(1 / 3, rel=1e-14)
    assert op.one_particle_gibbs_trace(1, 50.0) == pytest.approx(0.0, abs=1e-100)
    with pytest.raises(ValueError):
        op.one_particle_gibbs_trace(1, 0.0)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 6),
    beta=st.floats(0.01, 2.0),
    K=st.integers(0, 80),
)
def test_gibbs_trace_tail_bound(n, beta, K):
    x = math.exp(-TWO_PI * beta)
    total = op.one_particle_gibbs_trace(n, beta)
    partial = math.fsum(x ** (n + k) for k in range(K + 1))
    bound = x**K / (1 - x)
    assert abs(total - partial) / total <= bound + 1e-14


def test_cayley_fixed_points_and_orientation():
    assert op.cayley(0.0) == pytest.approx(1.0)
    assert op.cayley(1.0) == pytest.approx(1j)
    assert op.cayley(math.inf) == -1
    assert op.inverse_cayley(-1.0) == math.inf
    xs = np.geomspace(1e-3, 1e3, 50)
    assert np.all(op.cayley(xs).imag > 0)
    assert np.all(op.cayley(-xs).imag < 0)


def test_cayley_round_trip(rng):
    z = np.exp(1j * rng.uniform(-math.pi, math.pi, 100))
    np.testing.assert_allclose(op.cayley(op.inverse_cayley(z)), z, atol=1e-12)
    x = rng.standard_normal(100) * 10
    np.testing.assert_allclose(op.inverse_cayley(op.cayley(x)), x, rtol=1e-12)


@pytest.mark.parametrize("t", [1.0, -1.0, 5.0, -5.0])
def test_dilation_preserves_upper_semicircle(t):
    g = op.dilation(t)
    theta = np.linspace(0.01, math.pi - 0.01, 41)
    w = g.on_circle(np.exp(1j * theta))
    assert np.all(w.imag > 0)
    np.testing.assert_allclose(np.abs(w), 1.0, atol=1e-12)
    # circle action agrees with conjugating the line action
    for x in (0.3, 2.0, -4.0):
        assert g.on_circle(op.cayley(x)) == pytest.approx(op.cayley(math.exp(t) * x), abs=1e-12)
    assert g.on_circle(1.0) == pytest.approx(1.0, abs=1e-12)


def test_flow_group_laws(rng):
    assert op.dilation(0.0).allclose(op.IDENTITY)
    assert (op.translation(1.0) @ op.translation(-1.0)).allclose(op.IDENTITY)
    for s, t in rng.uniform(-5, 5, size=(1000, 2)):
        assert np.max(np.abs((op.dilation(s) @ op.dilation(t)).matrix - op.dilation(s + t).matrix)) <= 1e-12
        assert (op.translation(s) @ op.translation(t)).allclose(op.translation(s + t))


def test_moebius_requires_unit_determinant():
    with pytest.raises(ValueError):
        op.MoebiusElement(2.0, 0.0, 0.0, 1.0)
    g = op.MoebiusElement(2.0, 1.0, 1.0, 1.0)
    assert (g @ g.inverse()).allclose(op.IDENTITY)
    assert g.on_line(math.inf) == 2.0
    assert g.on_line(-1.0) == math.inf


@pytest.mark.parametrize("x", [0.0, 1.0, -3.0])
def test_reflection_acts_as_sign_flip(x):
    # conjugation on the circle is x -> -x on the line; only 0 and inf are fixed
    assert op.reflect(op.cayley(x)) == pytest.approx(op.cayley(-x), abs=1e-12)
    assert (op.reflect(op.cayley(x)) == pytest.approx(op.cayley(x))) == (x == 0.0)


@pytest.mark.parametrize("t", [-2.0, 0.5, 3.0])
def test_reflection_conjugation(t):
    z = np.exp(1j * np.linspace(-3, 3, 13))
    # r is an involution
    np.testing.assert_allclose(op.reflect(op.reflect(z)), z)
    # dilations commute with r, translations are reversed
    assert op.conjugate_by_reflection(op.dilation(t)).allclose(op.dilation(t))
    assert op.conjugate_by_reflection(op.translation(t)).allclose(op.translation(-t))
    g = op.translation(t)
    np.testing.assert_allclose(
        op.reflect(g.on_circle(op.reflect(z))), op.translation(-t).on_circle(z), atol=1e-12
    )
    # reflection swaps the upper and lower semicircles
    assert op.reflect(op.cayley(2.0)).imag < 0


def test_twist_unitary():
    u = np.diag([1.0, -1.0, 1.0])
    z = op.twist_unitary(u)
    np.testing.assert_allclose(z @ z.conj().T, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(np.diag(z), [1, -1j, 1], atol=1e-15)
    np.testing.assert_allclose(op.twist_unitary(np.eye(2)), np.eye(2))
    with pytest.raises(ValueError):
        op.twist_unitary(np.diag([1.0, 2.0]))
