"""Logical blocks: symmetry orbits of code states and their Pauli algebra.

Toggling all spins of one sublattice maps code states to code states, so the
code manifold splits into orbits of four under the two commuting sublattice
toggles.  Each orbit is a LogicalBlock encoding two qubits: the block's
canonical representative alpha fixes the (0,0) corner and the member with
labels (sigma_A, sigma_B) is alpha with the corresponding sublattice masks
XORed in.

Logical operators are realized as sparse operators on the full 2^(L^2) space
built from rank-1 projectors and the sublattice toggle permutations.  For
sublattice s the anticommutator/commutator constructions are applied to the
orbit-summed projector P = |alpha><alpha| + X_sbar |alpha><alpha| X_sbar
(sbar the other sublattice); this extends each single-qubit operator over
the partner qubit's two states, which is what makes the A and B algebras
commute and gives every operator at most four nonzero matrix elements.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import config as cfgmod
from .fragmentation import code_states
from .lattice import Lattice

# member order inside a block: (sigma_A, sigma_B) lexicographic
MEMBER_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class OrbitDegeneracyError(RuntimeError):
    """A symmetry orbit failed to contain four distinct code states."""


@dataclass(frozen=True)
class LogicalBlock:
    """Symmetry orbit of four code states encoding two logical qubits."""

    lattice: Lattice
    alpha: int  # representative, lexicographic minimum of the orbit

    def member(self, sigma_a, sigma_b):
        cfg = self.alpha
        if sigma_a:
            cfg ^= self.lattice.mask_a
        if sigma_b:
            cfg ^= self.lattice.mask_b
        return cfg

    @property
    def members(self):
        """The four member configurations in MEMBER_LABELS order."""
        return tuple(self.member(sa, sb) for sa, sb in MEMBER_LABELS)

    @property
    def dimension(self):
        return 1 << self.lattice.n_sites


@dataclass(frozen=True)
class LogicalOperator:
    block: LogicalBlock
    sublattice: str  # "A" or "B"
    kind: str        # "I", "X", "Y" or "Z"
    matrix: sp.csr_matrix


def symmetry_orbit(cfg, lat):
    """The four symmetry-related code states {cfg, X_A cfg, X_B cfg, X_A X_B cfg}.

    Rejects non-code input; raises OrbitDegeneracyError if the orbit fails to
    have four distinct code states (this would break the two-qubit encoding
    and cannot happen for nonempty sublattice masks, but is checked anyway).
    """
    if not cfgmod.is_code_state(cfg, lat):
        raise ValueError(f"configuration {cfg:#x} is not a code state")
    orbit = (cfg, cfg ^ lat.mask_a, cfg ^ lat.mask_b, cfg ^ lat.mask_a ^ lat.mask_b)
    if len(set(orbit)) != 4:
        raise OrbitDegeneracyError(f"orbit of {cfg:#x} has fewer than 4 members")
    for member in orbit[1:]:
        if not cfgmod.is_code_state(member, lat):
            raise OrbitDegeneracyError(
                f"orbit member {member:#x} of {cfg:#x} is not a code state"
            )
    return set(orbit)


def enumerate_blocks(lat):
    """All logical blocks at this size, sorted by representative."""
    states = code_states(lat)
    seen = set()
    blocks = []
    for cfg in states.tolist():
        if cfg in seen:
            continue
        orbit = symmetry_orbit(cfg, lat)
        seen |= orbit
        blocks.append(LogicalBlock(lattice=lat, alpha=min(orbit)))
    blocks.sort(key=lambda b: b.alpha)
    return blocks


def qubit_count(lat):
    """(number of code states, number of blocks, number of logical qubits)."""
    n_code = len(code_states(lat))
    n_blocks = n_code // 4
    return n_code, n_blocks, n_code // 2


def _two_qubit_matrix(kind_a, kind_b):
    return np.kron(_PAULI[kind_a], _PAULI[kind_b])


def _block_op_matrix(block, kind_a, kind_b):
    """Sparse full-space operator acting as kind_a (x) kind_b on the block."""
    small = _two_qubit_matrix(kind_a, kind_b)
    members = block.members
    rows, cols, vals = [], [], []
    for r in range(4):
        for c in range(4):
            v = small[r, c]
            if v != 0:
                rows.append(members[r])
                cols.append(members[c])
                vals.append(v)
    dim = block.dimension
    return sp.csr_matrix(
        (np.array(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
    )


def logical_operator(block, sublattice, kind):
    """Logical I/X/Y/Z for one sublattice qubit as a sparse operator.

    I is the rank-4 block projector (independent of sublattice); X, Y, Z act
    on the chosen qubit and as identity on the partner qubit, so each matrix
    has at most four nonzero elements.
    """
    if sublattice not in ("A", "B"):
        raise ValueError(f"sublattice must be 'A' or 'B', got {sublattice!r}")
    if kind not in _PAULI:
        raise ValueError(f"kind must be one of I, X, Y, Z, got {kind!r}")
    if kind == "I":
        matrix = _block_op_matrix(block, "I", "I")
    elif sublattice == "A":
        matrix = _block_op_matrix(block, kind, "I")
    else:
        matrix = _block_op_matrix(block, "I", kind)
    return LogicalOperator(block=block, sublattice=sublattice, kind=kind, matrix=matrix)


def _max_abs(matrix):
    matrix = sp.csr_matrix(matrix)
    matrix.eliminate_zeros()
    return 0.0 if matrix.nnz == 0 else float(np.abs(matrix.data).max())


def verify_pauli_algebra(block):
    """Exact operator identities for one block; returns {check: residual}.

    All residuals are max-abs entries of sparse differences and are expected
    to be exactly zero: the operators have entries in {0, +-1, +-i} and the
    products stay exact in floating point.
    """
    ops = {
        (s, k): logical_operator(block, s, k).matrix
        for s in ("A", "B")
        for k in ("I", "X", "Y", "Z")
    }
    ident = ops[("A", "I")]
    residuals = {}

    members = block.members
    proj = sp.csr_matrix(
        (np.ones(4), (members, members)), shape=ident.shape, dtype=complex
    )
    residuals["identity_is_block_projector"] = _max_abs(ident - proj)
    residuals["identity_squares"] = _max_abs(ident @ ident - ident)
    residuals["identity_sublattice_independent"] = _max_abs(ident - ops[("B", "I")])

    for s in ("A", "B"):
        x, y, z = ops[(s, "X")], ops[(s, "Y")], ops[(s, "Z")]
        residuals[f"X_{s}_squared"] = _max_abs(x @ x - ident)
        residuals[f"Y_{s}_squared"] = _max_abs(y @ y - ident)
        residuals[f"Z_{s}_squared"] = _max_abs(z @ z - ident)
        residuals[f"XY_commutator_{s}"] = _max_abs(x @ y - y @ x - 2j * z)
        residuals[f"YZ_commutator_{s}"] = _max_abs(y @ z - z @ y - 2j * x)
        residuals[f"ZX_commutator_{s}"] = _max_abs(z @ x - x @ z - 2j * y)

    for ka in ("X", "Y", "Z"):
        for kb in ("X", "Y", "Z"):
            a, b = ops[("A", ka)], ops[("B", kb)]
            residuals[f"cross_{ka}A_{kb}B"] = _max_abs(a @ b - b @ a)

    return residuals


def logical_state(block, amplitudes):
    """Dense state vector sum_i amplitudes[i] |member_i> (MEMBER_LABELS order)."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (4,):
        raise ValueError("amplitudes must be 4 complex numbers")
    nrm = np.linalg.norm(amplitudes)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError(f"amplitudes not normalized: |c| = {nrm}")
    state = np.zeros(block.dimension, dtype=complex)
    for c, member in zip(amplitudes, block.members):
        state[member] = c
    return state


def block_amplitudes(state, block):
    """The four in-block amplitudes of a dense state."""
    return np.array([state[m] for m in block.members], dtype=complex)


def logical_tomography(state, block):
    """Logical expectation values of a normalized dense state.

    Returns the six single-qubit expectations, four two-qubit correlators
    and the block population <I>.  All operators vanish outside the block,
    so everything is computed from the four in-block amplitudes.
    """
    c = block_amplitudes(state, block)
    out = {"population": float(np.vdot(c, c).real)}
    singles = {
        "X_A": ("X", "I"), "Y_A": ("Y", "I"), "Z_A": ("Z", "I"),
        "X_B": ("I", "X"), "Y_B": ("I", "Y"), "Z_B": ("I", "Z"),
        "ZZ": ("Z", "Z"), "XX": ("X", "X"), "ZX": ("Z", "X"), "XZ": ("X", "Z"),
    }
    for key, (ka, kb) in singles.items():
        m = _two_qubit_matrix(ka, kb)
        out[key] = float(np.vdot(c, m @ c).real)
    return out
