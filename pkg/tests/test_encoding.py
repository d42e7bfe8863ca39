import numpy as np
import pytest
import scipy.sparse as sp

from fragmenta import config as cm
from fragmenta import encoding as enc
from fragmenta.fragmentation import code_states
from fragmenta.lattice import build_lattice


@pytest.fixture(scope="module")
def lat():
    return build_lattice(4)


@pytest.fixture(scope="module")
def blocks(lat):
    return enc.enumerate_blocks(lat)


def toggle_matrix(lat, mask):
    """Permutation matrix of a sublattice toggle."""
    dim = 1 << lat.n_sites
    idx = np.arange(dim, dtype=np.int64)
    return sp.csr_matrix(
        (np.ones(dim), (idx ^ mask, idx)), shape=(dim, dim), dtype=complex
    )


def projector(lat, cfg):
    dim = 1 << lat.n_sites
    return sp.csr_matrix(([1.0], ([cfg], [cfg])), shape=(dim, dim), dtype=complex)


def oracle_operator(block, sublattice, kind):
    """Literal projector/toggle construction of the logical operators.

    The single-qubit operator for sublattice s uses the projector summed
    over the partner sublattice's toggle orbit, then the anticommutator /
    commutator / conjugation forms.
    """
    lat = block.lattice
    mask_s = lat.mask_a if sublattice == "A" else lat.mask_b
    mask_other = lat.mask_b if sublattice == "A" else lat.mask_a
    x_s = toggle_matrix(lat, mask_s)
    x_other = toggle_matrix(lat, mask_other)
    p = projector(lat, block.alpha)
    p = p + x_other @ p @ x_other
    if kind == "I":
        return p + x_s @ p @ x_s
    if kind == "Z":
        return p - x_s @ p @ x_s
    if kind == "X":
        return p @ x_s + x_s @ p
    if kind == "Y":
        return -1j * (p @ x_s - x_s @ p)
    raise ValueError(kind)


def test_symmetry_orbit_examples(lat):
    states = code_states(lat)
    for cfg in states.tolist():
        orbit = enc.symmetry_orbit(cfg, lat)
        assert len(orbit) == 4
        for member in orbit:
            assert cm.is_code_state(member, lat)
        # involution and group action
        assert cfg ^ lat.mask_a ^ lat.mask_a == cfg
        assert enc.symmetry_orbit(cfg ^ lat.mask_b, lat) == orbit


def test_symmetry_orbit_rejects_non_code(lat):
    with pytest.raises(ValueError):
        enc.symmetry_orbit(0, lat)


def test_block_counts(lat, blocks):
    n_code, n_blocks, n_qubits = enc.qubit_count(lat)
    assert (n_code, n_blocks, n_qubits) == (56, 14, 28)
    assert len(blocks) == 14


def test_blocks_partition_code_states(lat, blocks):
    states = set(code_states(lat).tolist())
    seen = []
    for b in blocks:
        assert b.alpha == min(b.members)
        assert len(set(b.members)) == 4
        seen.extend(b.members)
    assert sorted(seen) == sorted(states)
    assert len(seen) == len(set(seen))


def test_member_order(lat, blocks):
    b = blocks[0]
    assert b.member(0, 0) == b.alpha
    assert b.member(1, 0) == b.alpha ^ lat.mask_a
    assert b.member(0, 1) == b.alpha ^ lat.mask_b
    assert b.member(1, 1) == b.alpha ^ lat.mask_a ^ lat.mask_b


@pytest.mark.parametrize("sublattice", ["A", "B"])
@pytest.mark.parametrize("kind", ["I", "X", "Y", "Z"])
def test_logical_operator_matches_projector_oracle(blocks, sublattice, kind):
    block = blocks[0]
    mine = enc.logical_operator(block, sublattice, kind).matrix
    oracle = oracle_operator(block, sublattice, kind)
    diff = (mine - oracle).tocsr()
    diff.eliminate_zeros()
    assert diff.nnz == 0


def test_operator_nonzero_budget(blocks):
    for s in ("A", "B"):
        for kind in ("I", "X", "Y", "Z"):
            op = enc.logical_operator(blocks[0], s, kind).matrix
            assert op.nnz <= 4


def test_operator_examples(blocks, lat):
    block = blocks[0]
    z_a = enc.logical_operator(block, "A", "Z").matrix
    alpha = block.alpha
    flipped = alpha ^ lat.mask_a
    assert z_a[alpha, alpha] == 1.0
    assert z_a[flipped, flipped] == -1.0
    x_a = enc.logical_operator(block, "A", "X").matrix
    e_alpha = np.zeros(block.dimension, dtype=complex)
    e_alpha[alpha] = 1.0
    out = x_a @ e_alpha
    assert out[flipped] == 1.0 and np.count_nonzero(out) == 1


def test_pauli_algebra_all_blocks(blocks):
    for block in blocks:
        residuals = enc.verify_pauli_algebra(block)
        assert max(residuals.values()) <= 1e-12


def test_logical_state_and_tomography(blocks):
    block = blocks[0]
    state = enc.logical_state(block, (1.0, 0.0, 0.0, 0.0))
    tom = enc.logical_tomography(state, block)
    assert tom["Z_A"] == pytest.approx(1.0)
    assert tom["Z_B"] == pytest.approx(1.0)
    assert tom["population"] == pytest.approx(1.0)

    plus = enc.logical_state(block, (2 ** -0.5, 0.0, 2 ** -0.5, 0.0))
    tom = enc.logical_tomography(plus, block)
    assert tom["X_A"] == pytest.approx(1.0)
    assert tom["Z_A"] == pytest.approx(0.0)

    # distinct logical basis states are orthogonal
    other = enc.logical_state(block, (0.0, 1.0, 0.0, 0.0))
    assert np.vdot(state, other) == 0

    # fully out-of-block state reads zero on everything
    out = np.zeros(block.dimension, dtype=complex)
    out[12345] = 1.0
    tom = enc.logical_tomography(out, block)
    assert tom["population"] == 0.0
    assert all(tom[k] == 0.0 for k in ("X_A", "Y_A", "Z_A", "X_B", "Y_B", "Z_B"))


def test_logical_state_requires_normalization(blocks):
    with pytest.raises(ValueError):
        enc.logical_state(blocks[0], (1.0, 1.0, 0.0, 0.0))
