import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from qdchoice.elements import BS, HWP, PBS, PHASE, QBS, element_unitary
from qdchoice.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidModeError,
    NotUnitaryError,
)
from qdchoice.statecore import (
    BasisLabel,
    DensityMatrix,
    Pol,
    PureState,
    apply_unitary,
    basis_labels,
    inner,
    overlap,
    partial_trace_pol,
    particle_state,
    pol_vector,
    source_state,
    tensor,
    to_density,
    wave_state,
)

angles = st.floats(-20, 20, allow_nan=False)


def random_state(rng, d):
    v = rng.normal(size=2 * d) + 1j * rng.normal(size=2 * d)
    return PureState.normalized(d, v)


def random_unitary(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / abs(np.diag(r)))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_label_index_bijection(d):
    labels = list(basis_labels(d))
    assert [lab.index() for lab in labels] == list(range(2 * d))
    assert all(BasisLabel.from_index(lab.index()) == lab for lab in labels)
    assert BasisLabel(1, Pol.V).index() == 3


def test_source_state_examples():
    np.testing.assert_allclose(source_state(0, 0, 2).amplitudes, [0, 1, 0, 0])
    np.testing.assert_allclose(source_state(math.pi / 2, 0, 2).amplitudes, [1, 0, 0, 0], atol=1e-16)
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(source_state(math.pi / 4, 1, 2).amplitudes, [0, 0, r, r])


def test_source_state_rejects_bad_mode():
    with pytest.raises(InvalidModeError):
        source_state(0.3, 2, 2)
    with pytest.raises(InvalidModeError):
        source_state(0.3, -1, 2)


def test_purestate_invariants():
    with pytest.raises(ValueError):
        PureState(2, [1, 1, 0, 0])
    with pytest.raises(DimensionMismatchError):
        PureState(2, [1, 0, 0])
    with pytest.raises(InvalidDimensionError):
        PureState(1, [1, 0])
    s = PureState.basis(2, 0, Pol.H)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0


@pytest.mark.parametrize(
    "theta, expected",
    [
        (0.0, [1, 1]),
        (math.pi, [1, -1]),
        (math.pi / 2, [1, 1j]),
    ],
)
def test_particle_state(theta, expected):
    np.testing.assert_allclose(particle_state(theta), np.array(expected) / math.sqrt(2), atol=1e-15)


def test_particle_state_pads_extra_modes():
    v = particle_state(0.4, d=4)
    assert v.shape == (4,) and np.all(v[2:] == 0)
    with pytest.raises(InvalidDimensionError):
        particle_state(0.4, d=1)
    with pytest.raises(InvalidDimensionError):
        wave_state(0.4, d=1)


def test_wave_state_values():
    np.testing.assert_allclose(wave_state(0.0), [1, 0])
    # e^{i pi/2} * (-i) = 1 on |1>
    np.testing.assert_allclose(wave_state(math.pi), [0, 1], atol=1e-15)


@pytest.mark.parametrize("theta", [0.0, math.pi / 2, math.pi])
def test_particle_wave_overlap_against_brute_force(theta):
    expected = oracles.braket(oracles.particle(theta), oracles.wave(theta))
    got = np.vdot(particle_state(theta), wave_state(theta))
    assert abs(got - expected) < 1e-15
    assert abs(got - math.cos(theta) / math.sqrt(2)) < 1e-15


def test_particle_wave_overlap_grid():
    for theta in np.linspace(0, 2 * math.pi, 100):
        got = np.vdot(particle_state(theta), wave_state(theta))
        assert abs(got - math.cos(theta) / math.sqrt(2)) < 1e-12


def test_apply_unitary_examples():
    s = PureState.basis(2, 0, Pol.H)
    assert overlap(apply_unitary(s, np.eye(4)), s) == pytest.approx(1, abs=1e-15)
    out = apply_unitary(s, element_unitary(BS(0, 1), 2))
    np.testing.assert_allclose(out.amplitudes, np.array([1, 0, 1, 0]) / math.sqrt(2))


def test_apply_unitary_errors():
    s = PureState.basis(2, 0, Pol.H)
    with pytest.raises(NotUnitaryError):
        apply_unitary(s, 2 * np.eye(4))
    with pytest.raises(DimensionMismatchError):
        apply_unitary(s, np.eye(6))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_norm_preserved_random_unitary(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        out = apply_unitary(random_state(rng, d), random_unitary(rng, 2 * d))
        assert abs(out.norm() - 1) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_norm_preserved_by_every_element(d):
    rng = np.random.default_rng(10 + d)
    elements = [BS(0, 1), PBS(1, 0), QBS(0, d - 1), PHASE(d - 1, 1.3), HWP(0, 22.5), HWP(1, 17.0)]
    for e in elements:
        s = random_state(rng, d)
        assert abs(apply_unitary(s, element_unitary(e, d)).norm() - 1) < 1e-12


def test_inner():
    rng = np.random.default_rng(1)
    a, b = random_state(rng, 2), random_state(rng, 2)
    assert inner(a, a) == pytest.approx(1, abs=1e-12)
    assert inner(PureState.basis(2, 0, Pol.H), PureState.basis(2, 0, Pol.V)) == 0
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)))
    assert abs(inner(a, b)) <= 1 + 1e-12
    # conjugate-linear in the first slot
    c = PureState(2, 1j * a.amplitudes)
    assert inner(c, b) == pytest.approx(-1j * inner(a, b))
    with pytest.raises(DimensionMismatchError):
        inner(a, random_state(rng, 3))


def test_inner_particle_wave_tensored():
    h = pol_vector(Pol.H)
    a = PureState(2, tensor(particle_state(0), h))
    b = PureState(2, tensor(wave_state(0), h))
    assert inner(a, b) == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_to_density():
    rho = to_density(PureState.basis(2, 0, Pol.H))
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    np.testing.assert_array_equal(rho.entries, expected)
    rng = np.random.default_rng(2)
    for _ in range(10):
        r = to_density(random_state(rng, 3))
        assert r.trace() == pytest.approx(1, abs=1e-12)
        assert r.purity() == pytest.approx(1, abs=1e-12)
        assert np.linalg.matrix_rank(r.entries, tol=1e-10) == 1


def test_density_matrix_invariants():
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(ValueError):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_partial_trace_of_product():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho_path = a @ a.conj().T
    rho_path /= np.trace(rho_path)
    rho_pol = np.array([[0.3, 0.2j], [-0.2j, 0.7]])
    out = partial_trace_pol(DensityMatrix(np.kron(rho_path, rho_pol)))
    np.testing.assert_allclose(out.entries, rho_path, atol=1e-14)
    assert out.trace() == pytest.approx(1)


def test_partial_trace_hyperentangled_state():
    # frozen from the dict-based oracle at alpha=pi/4, theta=0
    psi = PureState(2, oracles.vec(oracles.fig2_base(math.pi / 4, 0.0), 2))
    out = partial_trace_pol(to_density(psi))
    np.testing.assert_allclose(out.entries, [[0.75, 0.25], [0.25, 0.25]], atol=1e-15)


def test_partial_trace_rejects_odd_dimension():
    with pytest.raises(DimensionMismatchError):
        partial_trace_pol(DensityMatrix(np.eye(3) / 3))


@given(alpha=angles, theta=angles)
def test_mixture_consistency(alpha, theta):
    psi = PureState(2, oracles.vec(oracles.fig2_base(alpha, theta), 2))
    rho = partial_trace_pol(to_density(psi)).entries
    p, w = particle_state(theta), wave_state(theta)
    expected = math.cos(alpha) ** 2 * np.outer(p, p.conj()) + math.sin(alpha) ** 2 * np.outer(w, w.conj())
    assert np.max(np.abs(rho - expected)) < 1e-12
