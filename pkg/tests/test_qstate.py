"""Core linear-algebra layer: frozen examples plus algebraic properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gnpb.bases import comp, eta, xi
from gnpb.qstate import (
    CompositeSpace,
    Ket,
    LabelCollisionError,
    Operator,
    Subsystem,
    apply_effect,
    basis_ket,
    inner,
    pairwise_max_overlap,
    schmidt_ebits,
    single_ket,
    tensor,
)


def qutrit(name, vec, owner=None):
    return single_ket(name, 3, vec, owner)


def test_tensor_basis_case():
    # |0> x |0> -> amplitude 1 at flat index 0
    k = tensor([single_ket("A", 2, [1, 0]), single_ket("B", 2, [1, 0])])
    assert k.amplitudes[0] == 1.0
    assert np.count_nonzero(k.amplitudes) == 1


def test_tensor_eta_xi_positions():
    # |eta+> x |xi+>: four amplitudes of 1/2 at (0,1),(0,2),(1,1),(1,2)
    k = tensor([qutrit("A", eta(1)), qutrit("B", xi(1))])
    expected = np.zeros(9)
    for i, j in [(0, 1), (0, 2), (1, 1), (1, 2)]:
        expected[3 * i + j] = 0.5
    assert np.allclose(k.amplitudes, expected)


def test_tensor_norm_multiplicative():
    factors = [qutrit("A", eta(1)), qutrit("B", xi(-1)), qutrit("C", comp(2, 3))]
    assert abs(tensor(factors).norm - 1.0) < 1e-12


def test_tensor_label_collision():
    with pytest.raises(LabelCollisionError):
        tensor([qutrit("A", eta(1)), qutrit("A", xi(1))])


def test_inner_eta_pair_orthogonal():
    a, b = qutrit("A", eta(1)), qutrit("A", eta(-1))
    assert abs(inner(a, b)) < 1e-12


def test_inner_eta_xi_half():
    # expand ((<0|+<1|)/sqrt2)((|1>+|2>)/sqrt2) = 1/2
    assert inner(qutrit("A", eta(1)), qutrit("A", xi(1))) == pytest.approx(0.5)


def test_inner_self_is_one():
    psi = qutrit("A", xi(-1))
    assert inner(psi, psi) == pytest.approx(1.0)


def test_inner_requires_same_space():
    with pytest.raises(ValueError):
        inner(qutrit("A", eta(1)), single_ket("A", 2, [1, 0]))


def _proj(vec):
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def test_apply_effect_eigenstate():
    space = CompositeSpace([Subsystem("A", 4, "A"), Subsystem("B", 4, "B"),
                            Subsystem("C", 4, "C")])
    state = basis_ket(space, (3, 0, 0))
    e = Operator(("A",), _proj([0, 0, 0, 1]))
    p, post = apply_effect(e, state)
    assert p == pytest.approx(1.0)
    assert abs(inner(post, state)) == pytest.approx(1.0)


def test_apply_effect_annihilated():
    space = CompositeSpace([Subsystem("A", 4, "A"), Subsystem("B", 4, "B"),
                            Subsystem("C", 4, "C")])
    state = basis_ket(space, (2, 0, 0))
    e = Operator(("A",), _proj([0, 0, 0, 1]))
    p, post = apply_effect(e, state)
    assert p == 0.0 and post is None


def test_apply_effect_twist_break_on_epr():
    # M = P[(0,1)_B; 0_b1] + P[2_B; 1_b1] applied to |eta+>_B x |phi+>_{a1 b1}
    # keeps the |00> tag component: probability 1/2, post = |eta+>|00>
    space = CompositeSpace([Subsystem("B", 3, "B"), Subsystem("a1", 2, "A"),
                            Subsystem("b1", 2, "B")])
    phi = np.zeros(4, dtype=complex)
    phi[[0, 3]] = 1 / np.sqrt(2)
    joint = Ket(space, np.kron(eta(1), phi))
    m = np.kron(_proj([1, 0, 0]) + _proj([0, 1, 0]), _proj([1, 0])) \
        + np.kron(_proj([0, 0, 1]), _proj([0, 1]))
    p, post = apply_effect(Operator(("B", "b1"), m), joint)
    expected = np.kron(eta(1), np.array([1, 0, 0, 0]))
    assert p == pytest.approx(0.5)
    assert abs(np.vdot(expected, post.amplitudes)) == pytest.approx(1.0)


def test_apply_effect_rejects_non_projector():
    space = CompositeSpace([Subsystem("A", 2, "A")])
    state = basis_ket(space, (0,))
    with pytest.raises(ValueError):
        apply_effect(Operator(("A",), [[2, 0], [0, 0]]), state)


def test_apply_effect_idempotent():
    space = CompositeSpace([Subsystem("A", 3, "A"), Subsystem("B", 3, "B")])
    state = Ket(space, np.kron(eta(1), xi(-1)))
    e = Operator(("A",), _proj(eta(1)))
    p, post = apply_effect(e, state)
    p2, post2 = apply_effect(e, post)
    assert p == pytest.approx(1.0) and p2 == pytest.approx(1.0)
    assert abs(inner(post, post2)) == pytest.approx(1.0)


def test_schmidt_epr_is_one_ebit():
    space = CompositeSpace([Subsystem("x", 2, "A"), Subsystem("y", 2, "B")])
    phi = np.zeros(4)
    phi[[0, 3]] = 1 / np.sqrt(2)
    assert schmidt_ebits(Ket(space, phi), ("x",)) == pytest.approx(1.0)


def test_schmidt_qutrit_pair():
    space = CompositeSpace([Subsystem("x", 3, "A"), Subsystem("y", 3, "B")])
    phi = np.zeros(9)
    phi[[0, 4, 8]] = 1 / np.sqrt(3)
    assert schmidt_ebits(Ket(space, phi), ("y",)) == pytest.approx(np.log2(3), abs=1e-9)


def test_schmidt_product_state_zero():
    k = tensor([qutrit("A", eta(1)), qutrit("B", xi(1)), qutrit("C", comp(0, 3))])
    assert schmidt_ebits(k, ("A",)) == pytest.approx(0.0, abs=1e-9)
    assert schmidt_ebits(k, ("A", "B")) == pytest.approx(0.0, abs=1e-9)


def test_schmidt_w_state_single_cut():
    space = CompositeSpace([Subsystem(n, 2, n) for n in "xyz"])
    w = np.zeros(8)
    w[[1, 2, 4]] = 1 / np.sqrt(3)
    expected = np.log2(3) - 2 / 3
    for cut in ("x", "y", "z"):
        assert schmidt_ebits(Ket(space, w), (cut,)) == pytest.approx(expected, abs=1e-9)


def test_schmidt_symmetric_under_cut_swap():
    space = CompositeSpace([Subsystem("x", 2, "A"), Subsystem("y", 3, "B"),
                            Subsystem("z", 2, "C")])
    rng = np.random.default_rng(7)
    amps = rng.normal(size=12) + 1j * rng.normal(size=12)
    k = Ket(space, amps / np.linalg.norm(amps))
    assert schmidt_ebits(k, ("x",)) == pytest.approx(schmidt_ebits(k, ("y", "z")), abs=1e-9)


@st.composite
def random_kets(draw, dim=6):
    res = draw(st.lists(st.tuples(
        st.floats(-1, 1, allow_nan=False), st.floats(-1, 1, allow_nan=False)),
        min_size=dim, max_size=dim))
    vec = np.array([complex(re, im) for re, im in res])
    norm = np.linalg.norm(vec)
    if norm < 1e-3:
        vec = np.ones(dim, dtype=complex)
        norm = np.linalg.norm(vec)
    return vec / norm


@settings(max_examples=40, deadline=None)
@given(random_kets(), random_kets())
def test_inner_conjugate_symmetry(u, v):
    space = CompositeSpace([Subsystem("x", 2, "A"), Subsystem("y", 3, "B")])
    a, b = Ket(space, u), Ket(space, v)
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)))
    assert inner(a, a).imag == pytest.approx(0.0, abs=1e-12)
    assert inner(a, a).real >= 0.0


@settings(max_examples=30, deadline=None)
@given(random_kets(dim=6), st.integers(0, 1000))
def test_complete_measurement_probabilities_sum_to_one(u, seed):
    space = CompositeSpace([Subsystem("x", 2, "A"), Subsystem("y", 3, "B")])
    state = Ket(space, u)
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    q, _ = np.linalg.qr(g)
    effects = [Operator(("y",), _proj(q[:, k])) for k in range(3)]
    total = sum(apply_effect(e, state)[0] for e in effects)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_pairwise_max_overlap():
    vecs = [comp(0, 3), comp(1, 3), eta(1)]
    assert pairwise_max_overlap(vecs) == pytest.approx(1 / np.sqrt(2))
