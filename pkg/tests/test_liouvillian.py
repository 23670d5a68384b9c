import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import linalg

from dce_ladder import liouvillian as lv
from dce_ladder.baths import BathSet, build_dissipators
from dce_ladder.hilbert import basis_state, build_space, projector
from dce_ladder.model import ModelParams, hamiltonian_rotating
from dce_ladder.system import build_system

from conftest import random_density_matrix, random_matrix


def _pieces(Om=0.8, Ocav=0.1, n_max=2, baths=None, rwa=False):
    space = build_space(n_max)
    params = ModelParams.resonant(Om, Ocav, rwa_coupling=rwa)
    H = hamiltonian_rotating(params, space)
    D = build_dissipators(H, space, baths, rwa=rwa)
    return space, H, D, lv.assemble(H, D)


def test_vec_roundtrip_and_sandwich(rng):
    A, B, X = (random_matrix(rng, 4) for _ in range(3))
    assert np.array_equal(lv.unvec(lv.vec(X)), X)
    assert np.allclose(lv.sandwich(A, B) @ lv.vec(X), lv.vec(A @ X @ B), atol=1e-13)
    assert np.allclose(lv.spre(A) @ lv.vec(X), lv.vec(A @ X), atol=1e-13)
    assert np.allclose(lv.spost(B) @ lv.vec(X), lv.vec(X @ B), atol=1e-13)


@pytest.mark.parametrize("rwa", [False, True])
def test_assembly_matches_operator_form(rng, rwa):
    space, H, D, L = _pieces(rwa=rwa)
    for _ in range(20):
        rho = random_density_matrix(rng, space.dim)
        direct = -1j * (H @ rho - rho @ H) + D.apply(rho)
        assert np.abs(lv.apply(L, rho) - direct).max() <= 1e-12


def test_zero_rates_give_commutator():
    zero = BathSet.default(gamma_eg=0.0, gamma_fe=0.0, gamma_cav=0.0)
    _, H, _, L = _pieces(baths=zero)
    assert np.allclose(L, lv.commutator_super(H), atol=1e-15)


def test_trace_preservation():
    space, _, _, L = _pieces()
    trace_row = lv.vec(np.eye(space.dim)) @ L
    assert np.abs(trace_row).max() <= 1e-13


def test_dimension_mismatch():
    space, H, D, _ = _pieces()
    with pytest.raises(ValueError):
        lv.assemble(H[:-1, :-1], D)


@pytest.mark.parametrize("Ocav", [0.0, 0.1])
def test_undriven_steady_state_is_ground(Ocav):
    space, _, _, L = _pieces(Om=0.0, Ocav=Ocav)
    rho = lv.steady_state(L)
    g0 = projector(basis_state(space, "g", 0))
    assert np.abs(rho - g0).max() <= 1e-10


def test_closed_system_has_degenerate_kernel():
    zero = BathSet.default(gamma_eg=0.0, gamma_fe=0.0, gamma_cav=0.0)
    _, _, _, L = _pieces(baths=zero)
    with pytest.raises(lv.KernelDimensionError):
        lv.steady_state(L)


@pytest.mark.parametrize("Om", [0.3, 0.99, 2.0])
def test_steady_state_properties(Om):
    space, _, _, L = _pieces(Om=Om, n_max=4)
    rho = lv.steady_state(L)
    assert np.trace(rho) == pytest.approx(1.0, abs=1e-13)
    assert np.allclose(rho, rho.conj().T, atol=1e-15)
    assert np.linalg.eigvalsh(rho)[0] >= -lv.POSITIVITY_TOL
    assert lv.residual(L, rho) <= 1e-10


def test_spectrum_of_generator():
    _, _, D, L = _pieces(Om=1.3, n_max=3)
    lam = linalg.eigvals(L)
    assert lam.real.max() <= 1e-10
    assert np.sum(np.abs(lam) < 1e-9) == 1


def test_hermitian_basis_is_unitary():
    T = lv.hermitian_basis(5).toarray()
    assert np.allclose(T.conj().T @ T, np.eye(25), atol=1e-14)
    for k in range(25):
        B = lv.unvec(T[:, k])
        assert np.allclose(B, B.conj().T)


def test_to_real_rejects_non_hermiticity_preserving():
    L = lv.spre(np.diag([1j, 0.0]))
    with pytest.raises(ValueError):
        lv.to_real(L, lv.hermitian_basis(2))


def test_modes_reconstruct_generator():
    _, _, _, L = _pieces(n_max=2)
    m = lv.decompose(L)
    T = m.basis.toarray()
    rebuilt = T @ m.right @ np.diag(m.eigenvalues) @ m.left @ T.conj().T
    assert np.abs(rebuilt - L).max() <= 1e-10 * np.abs(L).max()


def test_propagate_basic_properties(rng):
    space, _, _, L = _pieces(Om=0.9, n_max=2)
    rho0 = random_density_matrix(rng, space.dim)
    out = lv.propagate(L, rho0, [0.0, 1.0, 5.0])
    assert np.array_equal(out[0], rho0)
    ref = lv.unvec(linalg.expm(L * 5.0) @ lv.vec(rho0))
    assert np.abs(out[2] - ref).max() <= 1e-10
    assert np.trace(out[1]) == pytest.approx(1.0, abs=1e-12)
    rho_ss = lv.steady_state(L)
    fixed = lv.propagate(L, rho_ss, [3.0, 30.0])
    assert np.abs(fixed[1] - rho_ss).max() <= 1e-10


def test_propagate_eigenmode():
    space, _, _, L = _pieces(Om=0.5, n_max=1)
    m = lv.decompose(L)
    k = int(np.argmax(-m.eigenvalues.real))
    X = lv.unvec(m.basis @ m.right[:, k])
    out = lv.propagate(L, X, [2.0], modes=m)[0]
    assert np.abs(out - np.exp(m.eigenvalues[k] * 2.0) * X).max() <= 1e-10


def test_propagate_expm_fallback_agrees(rng, monkeypatch):
    space, _, _, L = _pieces(Om=1.1, n_max=2)
    rho0 = random_density_matrix(rng, space.dim)
    taus = np.linspace(0, 4, 9)
    modal = lv.propagate(L, rho0, taus)
    monkeypatch.setattr(lv, "MAX_CONDITION", 0.0)
    stepped = lv.propagate(L, rho0, taus)
    for a, b in zip(modal, stepped):
        assert np.abs(a - b).max() <= 1e-10


def test_propagate_rejects_bad_grid():
    _, _, _, L = _pieces(n_max=1)
    with pytest.raises(ValueError):
        lv.propagate(L, np.eye(6) / 6, [1.0, 0.5])
    with pytest.raises(ValueError):
        lv.propagate(L, np.eye(6) / 6, [-1.0])


def test_relaxation_reaches_steady_state():
    system = build_system(ModelParams.resonant(0.7), 3)
    space = system.space
    rho0 = projector(basis_state(space, "g", 0))
    T = 50 / min(b.gamma for b in (system.baths.eg, system.baths.fe, system.baths.cav))
    final = lv.propagate(system.L, rho0, [T], modes=system.modes)[0]
    assert np.abs(final - system.rho_ss).max() <= 1e-6


@settings(max_examples=15, deadline=None)
@given(Om=st.floats(0.0, 2.5), seed=st.integers(0, 2**31))
def test_generator_preserves_trace_and_hermiticity(Om, seed):
    rng = np.random.default_rng(seed)
    space, _, _, L = _pieces(Om=Om, n_max=1)
    rho = random_density_matrix(rng, space.dim)
    d = lv.apply(L, rho)
    assert abs(np.trace(d)) <= 1e-13
    assert np.abs(d - d.conj().T).max() <= 1e-13


def test_steady_state_norm_is_spectral_norm():
    _, _, _, L = _pieces(Om=1.1, n_max=2)
    rho, norm = lv.steady_state(L, return_norm=True)
    assert norm == pytest.approx(np.linalg.norm(L, 2), rel=1e-12)
    assert lv.residual(L, rho, norm) == pytest.approx(lv.residual(L, rho), rel=1e-12)
