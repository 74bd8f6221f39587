"""Solution spaces, eliminating measurements, classification, and the
brute-force oracle for the nullspace solver."""

import numpy as np
import pytest

from gnpb.bases import OrthoProductBasis, ProductState, get_basis
from gnpb.opm import (
    classify,
    find_eliminating_opm,
    group_factorization,
    is_locally_irreducible,
    opm_solution_space,
)

# ---------------------------------------------------------------------------
# independent oracle: full-space embedding, all pairs, no overlap gating

def _hermitian_basis_dense(d):
    mats = []
    for k in range(d):
        m = np.zeros((d, d), dtype=complex)
        m[k, k] = 1
        mats.append(m)
    for k in range(d):
        for l in range(k + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[k, l] = m[l, k] = 1
            mats.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[k, l] = 1j
            m[l, k] = -1j
            mats.append(m)
    return mats


def _apply_on_group(h, psi, dims, group_positions):
    """(H on the group axes x identity elsewhere) |psi>, by tensor reshape."""
    tensor = psi.reshape(dims)
    rest = [i for i in range(len(dims)) if i not in group_positions]
    moved = np.transpose(tensor, list(group_positions) + rest)
    dg = int(np.prod([dims[i] for i in group_positions]))
    flat = moved.reshape(dg, -1)
    out = (h @ flat).reshape([dims[i] for i in group_positions] + [dims[i] for i in rest])
    inverse = np.argsort(list(group_positions) + rest)
    return np.transpose(out, inverse).reshape(-1)


def oracle_solution_dim(basis, group):
    """Dimension of the OPM effect space, via full-space constraint rows."""
    dims = [d for _, d in basis.parties]
    names = [p for p, _ in basis.parties]
    pos = sorted(names.index(p) for p in group)
    dg = int(np.prod([dims[i] for i in pos]))
    hbasis = _hermitian_basis_dense(dg)
    vectors = basis.joint_matrix()
    rows = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            vals = np.array([
                np.vdot(vectors[i], _apply_on_group(h, vectors[j], dims, pos))
                for h in hbasis
            ])
            rows.append(vals.real)
            rows.append(vals.imag)
    mat = np.array(rows)
    rank = int(np.linalg.matrix_rank(mat, tol=1e-8))
    return dg * dg - rank


def oracle_sweep_dim(basis, group, n_samples=60, seed=11):
    """Sample random Hermitians, project onto the constraint nullspace, and
    measure the dimension the projections span."""
    dims = [d for _, d in basis.parties]
    names = [p for p, _ in basis.parties]
    pos = sorted(names.index(p) for p in group)
    dg = int(np.prod([dims[i] for i in pos]))
    hbasis = _hermitian_basis_dense(dg)
    vectors = basis.joint_matrix()
    rows = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            vals = np.array([
                np.vdot(vectors[i], _apply_on_group(h, vectors[j], dims, pos))
                for h in hbasis
            ])
            rows.append(vals.real)
            rows.append(vals.imag)
    mat = np.array(rows)
    _, svals, vt = np.linalg.svd(mat)
    rank = int(np.sum(svals > 1e-8 * (svals[0] if len(svals) and svals[0] > 0 else 1)))
    null = vt[rank:]  # rows span the nullspace (orthonormal)
    rng = np.random.default_rng(seed)
    projected = []
    for _ in range(n_samples):
        coeffs = rng.normal(size=dg * dg)
        proj = null.T @ (null @ coeffs)
        projected.append(proj)
        h = sum(c * b for c, b in zip(proj, hbasis))
        # every projected matrix must satisfy every constraint
        for i in range(len(vectors)):
            for j in range(i + 1, len(vectors)):
                val = np.vdot(vectors[i], _apply_on_group(h, vectors[j], dims, pos))
                assert abs(val) < 1e-7
    return int(np.linalg.matrix_rank(np.array(projected), tol=1e-8))


# ---------------------------------------------------------------------------
# random orthogonal product sets in 2x2x2

def _random_unitary2(rng):
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_product_basis_222(rng):
    """A full product basis of three qubits built by recursive splitting."""
    states = []

    def split(fixed, free):
        if not free:
            states.append(ProductState(f"s{len(states)}", tuple(fixed)))
            return
        p = rng.integers(len(free))
        u = _random_unitary2(rng)
        rest = free[:p] + free[p + 1:]
        for col in range(2):
            assign = list(fixed)
            assign[free[p]] = u[:, col]
            split(assign, rest)

    split([None, None, None], [0, 1, 2])
    return states


def random_orthogonal_product_set(rng):
    if rng.random() < 0.25:
        # the shift completion, twirled by local unitaries
        base = get_basis("shift_222")
        us = [_random_unitary2(rng) for _ in range(3)]
        pool = [ProductState(st.label, tuple(u @ f for u, f in zip(us, st.factors)))
                for st in base.states]
    else:
        pool = random_product_basis_222(rng)
    n = int(rng.integers(4, 9))
    idx = rng.permutation(len(pool))[:n]
    chosen = [pool[i] for i in sorted(idx)]
    return OrthoProductBasis("random", [("A", 2), ("B", 2), ("C", 2)],
                             [ProductState(f"s{k}", st.factors)
                              for k, st in enumerate(chosen)])


GROUPS_222 = [("A",), ("B",), ("C",), ("A", "B"), ("B", "C"), ("A", "C")]


def test_oracle_equivalence_on_random_sets():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 100:
        basis = random_orthogonal_product_set(rng)
        group = GROUPS_222[checked % len(GROUPS_222)]
        solver_dim = opm_solution_space(basis, group).dim
        assert solver_dim == oracle_solution_dim(basis, group)
        checked += 1


def test_oracle_sweep_matches_on_sample():
    rng = np.random.default_rng(5)
    for k in range(6):
        basis = random_orthogonal_product_set(rng)
        group = GROUPS_222[k]
        assert opm_solution_space(basis, group).dim == oracle_sweep_dim(basis, group)


# ---------------------------------------------------------------------------
# named-basis facts

def test_identity_always_a_solution():
    for name in ("B_I_43", "B_II_33", "B_IIb_33"):
        basis = get_basis(name)
        for p, _ in basis.parties:
            space = opm_solution_space(basis, (p,))
            assert space.dim >= 1
            assert space.contains_identity()


def test_basis_I_alice_space_contains_three_projector():
    basis = get_basis("B_I_43")
    space = opm_solution_space(basis, ("A",))
    assert space.dim == 2
    p3 = np.zeros((4, 4), dtype=complex)
    p3[3, 3] = 1.0
    assert space.satisfies(p3)
    # |3><3| lies in the span of the returned basis matrices
    stack = np.array([m.reshape(-1) for m in space.basis_matrices])
    coeff, res, _, _ = np.linalg.lstsq(stack.T, p3.reshape(-1), rcond=None)
    recon = (stack.T @ coeff).reshape(4, 4)
    assert np.max(np.abs(recon - p3)) < 1e-8


@pytest.mark.parametrize("name", ["B_II_43", "B_II_33", "B_IIb_33"])
def test_single_party_spaces_trivial(name):
    basis = get_basis(name)
    for p, _ in basis.parties:
        assert opm_solution_space(basis, (p,)).dim == 1


def test_IIb_merged_spaces_trivial():
    basis = get_basis("B_IIb_33")
    for g in (("A", "B"), ("A", "C"), ("B", "C")):
        assert opm_solution_space(basis, g).dim == 1
    assert is_locally_irreducible(basis, (("A", "B"), ("C",)))


def test_irreducibility_by_partition():
    separated = (("A",), ("B",), ("C",))
    assert not is_locally_irreducible(get_basis("B_I_43"), separated)
    assert is_locally_irreducible(get_basis("B_II_43"), separated)
    assert is_locally_irreducible(get_basis("B_II_33"), separated)
    with pytest.raises(ValueError):
        is_locally_irreducible(get_basis("B_II_33"), (("A",), ("B",)))


def test_II_43_has_nontrivial_merge():
    basis = get_basis("B_II_43")
    dims = {g: opm_solution_space(basis, g).dim for g in
            (("A", "B"), ("A", "C"), ("B", "C"))}
    assert any(d > 1 for d in dims.values())
    witness = find_eliminating_opm(basis, ("A", "B"))
    assert witness is not None
    assert any(e for e in witness.eliminated if e)


def test_solution_space_phase_invariant():
    basis = get_basis("B_II_33")
    phased = OrthoProductBasis(
        "phased", basis.parties,
        [ProductState(st.label,
                      (st.factors[0] * np.exp(1j * (0.3 + k)),) + st.factors[1:])
         for k, st in enumerate(basis.states)])
    for g in (("A",), ("B", "C")):
        assert opm_solution_space(phased, g).dim == opm_solution_space(basis, g).dim


def test_classify_verdicts():
    assert classify(get_basis("B_I_43")).verdict == "TypeI"
    assert classify(get_basis("B_II_43")).verdict == "TypeIIa"
    assert classify(get_basis("B_IIb_33")).verdict == "TypeIIb"


def test_classify_B_I_witness_is_three_vs_rest():
    cert = classify(get_basis("B_I_43"))
    assert cert.witness is not None and cert.witness.group == ("A",)
    effects = cert.witness.effects
    assert len(effects) == 2
    p3 = np.zeros((4, 4), dtype=complex)
    p3[3, 3] = 1.0
    deltas = [np.max(np.abs(e - p3)) for e in effects]
    k = int(np.argmin(deltas))
    assert deltas[k] < 1e-8
    assert np.max(np.abs(effects[1 - k] - (np.eye(4) - p3))) < 1e-8
    surv = set(cert.witness.survivors[k])
    expected = {f"3_{n}" for n in
                ("0ep", "0em", "ep2", "em2", "2xp", "2xm", "xp0", "xm0", "11")}
    expected |= {"303", "313", "323", "330", "331", "332", "333"}
    assert surv == expected


def test_find_eliminating_opm_none_when_trivial():
    basis = get_basis("B_IIb_33")
    assert find_eliminating_opm(basis, ("A",)) is None


def test_classify_stable_under_party_permutation():
    basis = get_basis("B_II_43")
    # cyclic relabeling A->B->C->A applied consistently to parties and factors
    permuted = OrthoProductBasis(
        "permuted", basis.parties,
        [ProductState(st.label, (st.factors[2], st.factors[0], st.factors[1]))
         for st in basis.states])
    assert classify(permuted).verdict == classify(basis).verdict


def test_group_factorization_orders_by_party():
    basis = get_basis("B_II_33")
    fac = group_factorization(basis, ("C", "A"))  # order must not matter
    joint = basis.joint_matrix()
    # a_i (x) r_i reproduces the state up to axis ordering; check norms only
    for (a, r), vec in zip(fac, joint):
        assert np.linalg.norm(a) * np.linalg.norm(r) == pytest.approx(1.0)
