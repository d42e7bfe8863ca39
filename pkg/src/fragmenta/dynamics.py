"""Sparse Hamiltonians and exact time evolution of logical superpositions.

Hamiltonians are assembled as scipy CSR matrices over the 2^(L^2) packed
basis (the packed configuration is the basis index).  The constrained model
has off-diagonal -h entries exactly between configuration pairs related by
a legal flip and annihilates every code state, row and column alike.  The
unconstrained plaquette model adds the diagonal -J * sum_p CZ_p and couples
all single-flip pairs.

Perturbations come in two symmetric kinds (commute with both sublattice
toggles exactly; verified at construction) and two symmetry-breaking kinds
(longitudinal random-sign fields and nearest-neighbor ZZ).  Random signs
are used for the breaking default because a uniform field can have a
vanishing first-order effect on sublattice-balanced code states.

Time evolution uses an adaptive Lanczos propagator: per substep a small
Krylov basis is built with full reorthogonalization, the tridiagonal
exponential is taken by dense diagonalization, and the step is accepted
when the standard residual estimate beta_m * |u_m| falls below the
tolerance; otherwise the step is halved.  An invariant starting vector
triggers the happy-breakdown path and is propagated exactly.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from . import config as cfgmod
from .encoding import logical_state, logical_tomography

PERTURBATION_KINDS = (
    "sym_transverse",
    "sym_zz_nnn",
    "break_longitudinal_random",
    "break_zz_nn",
)

_DYNAMICS_SITE_CAP = 24  # dense vectors of 2^24 amplitudes at most


@dataclass(frozen=True)
class SparseOperator:
    """CSR operator on the packed basis with a hermiticity tag."""

    matrix: sp.csr_matrix
    hermitian: bool = False

    @property
    def dimension(self):
        return self.matrix.shape[0]

    def apply(self, vec):
        return self.matrix @ vec

    def __add__(self, other):
        return SparseOperator(
            matrix=(self.matrix + other.matrix).tocsr(),
            hermitian=self.hermitian and other.hermitian,
        )


def _check_size(lat):
    if lat.n_sites > _DYNAMICS_SITE_CAP:
        raise ValueError(
            f"dynamics is capped at {_DYNAMICS_SITE_CAP} sites, got {lat.n_sites}"
        )


def _all_cfgs(lat):
    return np.arange(1 << lat.n_sites, dtype=np.uint32)


def build_heff(lat, h=1.0):
    """Constrained flip model: -h between pairs related by a legal flip."""
    _check_size(lat)
    cfgs = _all_cfgs(lat)
    rows = []
    cols = []
    for i in range(lat.n_sites):
        src = cfgs[cfgmod.flippable_mask(cfgs, lat, i)]
        rows.append(src.astype(np.int64))
        cols.append((src ^ np.uint32(1 << i)).astype(np.int64))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    data = np.full(len(rows), -h, dtype=np.float64)
    dim = 1 << lat.n_sites
    matrix = sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    return SparseOperator(matrix=matrix, hermitian=True)


def build_hczp(lat, J=1.0, h=1.0):
    """Unconstrained plaquette model: -J sum_p CZ_p - h sum_i X_i."""
    _check_size(lat)
    cfgs = _all_cfgs(lat)
    dim = 1 << lat.n_sites
    diag = -J * cfgmod.cz_signs(cfgs, lat).sum(axis=1).astype(np.float64)
    rows = [np.arange(dim, dtype=np.int64)]
    cols = [np.arange(dim, dtype=np.int64)]
    data = [diag]
    for i in range(lat.n_sites):
        rows.append(cfgs.astype(np.int64))
        cols.append((cfgs ^ np.uint32(1 << i)).astype(np.int64))
        data.append(np.full(dim, -h, dtype=np.float64))
    matrix = sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return SparseOperator(matrix=matrix, hermitian=True)


def _z_values(cfgs, site):
    return 1.0 - 2.0 * ((cfgs >> np.uint32(site)) & np.uint32(1)).astype(np.float64)


def _diagonal_operator(diag):
    dim = len(diag)
    return sp.csr_matrix(
        (diag, (np.arange(dim, dtype=np.int64), np.arange(dim, dtype=np.int64))),
        shape=(dim, dim),
    )


def _conjugate_by_xor(matrix, xor_mask, dim):
    coo = matrix.tocoo()
    rows = coo.row ^ xor_mask
    cols = coo.col ^ xor_mask
    return sp.csr_matrix((coo.data, (rows, cols)), shape=(dim, dim))


def _commutes_with_toggle(matrix, xor_mask, dim):
    diff = matrix - _conjugate_by_xor(matrix, xor_mask, dim)
    diff.eliminate_zeros()
    return diff.nnz == 0


def build_perturbation(lat, kind, lam, seed=0):
    """One of the four perturbation kinds, scaled by lam.

    Symmetry is verified at build time: the sym_ kinds must commute with
    both sublattice toggles exactly, the break_ kinds must not.
    """
    _check_size(lat)
    cfgs = _all_cfgs(lat)
    dim = 1 << lat.n_sites

    if kind == "sym_transverse":
        rows, cols = [], []
        for i in range(lat.n_sites):
            rows.append(cfgs.astype(np.int64))
            cols.append((cfgs ^ np.uint32(1 << i)).astype(np.int64))
        matrix = sp.csr_matrix(
            (
                np.full(dim * lat.n_sites, lam, dtype=np.float64),
                (np.concatenate(rows), np.concatenate(cols)),
            ),
            shape=(dim, dim),
        )
    elif kind == "sym_zz_nnn":
        # next-nearest (diagonal) pairs stay on one sublattice; two per site
        diag = np.zeros(dim, dtype=np.float64)
        L = lat.L
        for i in range(lat.n_sites):
            x, y = i % L, i // L
            for dx, dy in ((1, 1), (1, -1)):
                j = ((y + dy) % L) * L + (x + dx) % L
                diag += _z_values(cfgs, i) * _z_values(cfgs, j)
        matrix = _diagonal_operator(lam * diag)
    elif kind == "break_longitudinal_random":
        rng = np.random.default_rng(seed)
        signs = rng.choice(np.array([-1.0, 1.0]), size=lat.n_sites)
        diag = np.zeros(dim, dtype=np.float64)
        for i in range(lat.n_sites):
            diag += signs[i] * _z_values(cfgs, i)
        matrix = _diagonal_operator(lam * diag)
    elif kind == "break_zz_nn":
        diag = np.zeros(dim, dtype=np.float64)
        L = lat.L
        for i in range(lat.n_sites):
            x, y = i % L, i // L
            for dx, dy in ((1, 0), (0, 1)):
                j = ((y + dy) % L) * L + (x + dx) % L
                diag += _z_values(cfgs, i) * _z_values(cfgs, j)
        matrix = _diagonal_operator(lam * diag)
    else:
        raise ValueError(f"unknown perturbation kind {kind!r}")

    symmetric = _commutes_with_toggle(matrix, lat.mask_a, dim) and \
        _commutes_with_toggle(matrix, lat.mask_b, dim)
    expected = kind.startswith("sym_")
    if symmetric != expected:
        raise AssertionError(
            f"perturbation {kind} symmetry check failed (symmetric={symmetric})"
        )
    return SparseOperator(matrix=matrix, hermitian=True)


# ---------------------------------------------------------------------------
# Lanczos propagator


def _lanczos_step(H, psi, dt, max_krylov, breakdown_tol=1e-13):
    """One exp(-i H dt) substep.  Returns (new_state, error_estimate).

    After m iterations without breakdown, betas[:m-1] are the tridiagonal
    couplings and betas[m-1] is the coupling out of the subspace, which
    enters the standard residual estimate beta_out * |u_m|.
    """
    beta0 = np.linalg.norm(psi)
    V = [psi / beta0]
    alphas = []
    betas = []
    breakdown = False
    for j in range(max_krylov):
        w = H @ V[j]
        alpha = float(np.vdot(V[j], w).real)
        alphas.append(alpha)
        w = w - alpha * V[j]
        if j > 0:
            w = w - betas[j - 1] * V[j - 1]
        # full reorthogonalization: the basis is small, the cost negligible
        for u in V:
            w = w - np.vdot(u, w) * u
        beta = float(np.linalg.norm(w))
        if beta < breakdown_tol * max(1.0, abs(alpha)):
            breakdown = True
            break
        betas.append(beta)
        V.append(w / beta)

    m = len(alphas)
    if m == 1:
        u = np.array([np.exp(-1j * dt * alphas[0])])
    else:
        evals, evecs = eigh_tridiagonal(alphas, betas[: m - 1])
        u = evecs @ (np.exp(-1j * dt * evals) * evecs[0, :])
    new_state = beta0 * (np.column_stack(V[:m]) @ u)
    err = 0.0 if breakdown else float(abs(betas[m - 1] * u[m - 1]))
    return new_state, err


def evolve(state, op, t, tol=1e-10, max_krylov=40):
    """Propagate exp(-i H t)|state> with local error per substep <= tol.

    Raises RuntimeError when the adaptive step control fails to converge.
    """
    if tol < 1e-12:
        raise ValueError("tol must be >= 1e-12")
    psi = np.array(state, dtype=complex, copy=True)
    if t == 0:
        return psi
    H = op.matrix
    remaining = float(t)
    dt = remaining
    min_dt = abs(t) * 1e-12
    while remaining > 1e-15 * abs(t):
        dt = min(dt, remaining)
        while True:
            new_state, err = _lanczos_step(H, psi, dt, max_krylov)
            if err <= tol:
                break
            dt /= 2.0
            if dt < min_dt:
                raise RuntimeError(
                    f"propagator failed to converge (dt underflow at err={err:g})"
                )
        psi = new_state
        remaining -= dt
        if err < 0.1 * tol:
            dt *= 2.0
    return psi


# ---------------------------------------------------------------------------
# coherence experiments


@dataclass(frozen=True)
class CoherenceSeries:
    """Logical tomography along an exact-evolution trajectory."""

    times: np.ndarray
    tomography: tuple            # dict per grid point
    population: np.ndarray
    fidelity: np.ndarray         # |<psi(0)|psi(t)>|

    def coherence(self, sublattice="A"):
        """Complex qubit coherence <X_s> + i <Y_s> per grid point."""
        re = np.array([t[f"X_{sublattice}"] for t in self.tomography])
        im = np.array([t[f"Y_{sublattice}"] for t in self.tomography])
        return re + 1j * im

    def csv_rows(self):
        """Rows (t, reX, imX, population, fidelity) for the A qubit."""
        coh = self.coherence("A")
        for k, t in enumerate(self.times):
            yield (
                float(t),
                float(coh[k].real),
                float(coh[k].imag),
                float(self.population[k]),
                float(self.fidelity[k]),
            )


DEFAULT_PROBE = (1.0 / np.sqrt(2.0), 0.0, 1.0 / np.sqrt(2.0), 0.0)


def coherence_experiment(block, op, times, tol=1e-10, initial=None):
    """Evolve a logical superposition and record tomography on a time grid.

    The default initial state is (|alpha;00> + |alpha;10>)/sqrt(2), the
    +1 eigenstate of the logical X_A coherence probe.
    """
    times = np.asarray(times, dtype=float)
    if times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must start at 0 and increase strictly")
    psi0 = logical_state(block, DEFAULT_PROBE) if initial is None else initial
    psi = psi0.copy()
    tomography = [logical_tomography(psi, block)]
    population = [tomography[0]["population"]]
    fidelity = [abs(np.vdot(psi0, psi))]
    for k in range(1, len(times)):
        psi = evolve(psi, op, times[k] - times[k - 1], tol=tol)
        tom = logical_tomography(psi, block)
        tomography.append(tom)
        population.append(tom["population"])
        fidelity.append(abs(np.vdot(psi0, psi)))
    return CoherenceSeries(
        times=times,
        tomography=tuple(tomography),
        population=np.array(population),
        fidelity=np.array(fidelity),
    )
