"""Krylov-sector decomposition and frozen-state counting.

The constrained dynamics allows a spin flip only when the four neighbors of
the flipped site agree, so the move graph on packed configurations has an
edge between cfg and cfg^ (1<<i) exactly when flippable_mask holds.  Every
move conserves every plaquette CZ eigenvalue, which is what fragments the
configuration space into exponentially many disconnected sectors.

Three independent routes are provided and cross-checked by the tests:

* enumerate_frozen: vectorized brute-force scan of all 2^(L^2) configurations
  counting unflippable states and code states (unflippable with zero
  intersections), compared against the closed-form count 2^(L+2) - 8.
* krylov_decompose: full connected-component decomposition by union-find
  over packed indices.
* count_code_states_transfer: row transfer method that scales to L = 10.
  A transfer state is an ordered pair of adjacent rows that is "clean"
  (no plaquette between the rows has CZ = -1); a transition (a,b) -> (b,c)
  is admitted when every site of the middle row b is unflippable given its
  in-row neighbors and the rows a below and c above.  The number of code
  states is the trace of the L-fold transition composition: each closed
  walk of the pair chain corresponds to exactly one torus configuration in
  which every site row and every plaquette row has been checked once.
"""

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import config as cfgmod
from .lattice import Lattice

FORMULA_OFFSET = 8  # closed-form code-state count is 2^(L+2) - 8


def formula_count(L):
    return 2 ** (L + 2) - FORMULA_OFFSET


def _worker_count():
    env = os.environ.get("FRAGMENTA_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class KrylovSector:
    """One connected component of the constrained move graph."""

    representative: int        # lexicographically smallest member
    size: int
    syndrome: tuple            # per-plaquette CZ signs (conserved label)
    is_frozen_sector: bool     # singleton with no legal move


@dataclass(frozen=True)
class EnumerationReport:
    L: int
    method: str                           # "brute_force" or "transfer_matrix"
    count_unflippable: int | None         # None when not computed by the method
    count_code_states: int
    formula_value: int
    matches_unflippable: bool | None
    matches_code_states: bool

    def to_dict(self):
        return {
            "L": self.L,
            "method": self.method,
            "count_unflippable": self.count_unflippable,
            "count_code_states": self.count_code_states,
            "formula_value": self.formula_value,
            "matches": {
                "unflippable": self.matches_unflippable,
                "code_states": self.matches_code_states,
            },
        }


def _all_configs(L, chunk=None):
    """Yield numpy ranges covering all 2^(L^2) configurations."""
    n_bits = L * L
    total = 1 << n_bits
    dtype = np.uint32 if n_bits <= 32 else np.uint64
    if chunk is None:
        chunk = total if n_bits <= 28 else 1 << 22
    start = 0
    while start < total:
        stop = min(start + chunk, total)
        yield np.arange(start, stop, dtype=dtype)
        start = stop


def enumerate_frozen(lat: Lattice) -> EnumerationReport:
    """Brute-force scan: count unflippable states and code states."""
    if lat.n_sites > 36:
        raise ValueError("brute-force enumeration is capped at L*L <= 36")
    n_unflippable = 0
    n_code = 0
    for cfgs in _all_configs(lat.L):
        frozen = cfgmod.frozen_mask(cfgs, lat)
        n_unflippable += int(np.count_nonzero(frozen))
        if frozen.any():
            nint = cfgmod.intersection_counts(cfgs[frozen], lat)
            n_code += int(np.count_nonzero(nint == 0))
    formula = formula_count(lat.L)
    return EnumerationReport(
        L=lat.L,
        method="brute_force",
        count_unflippable=n_unflippable,
        count_code_states=n_code,
        formula_value=formula,
        matches_unflippable=(n_unflippable == formula),
        matches_code_states=(n_code == formula),
    )


def code_states(lat: Lattice) -> np.ndarray:
    """Sorted array of all code states (unflippable, zero intersections)."""
    if lat.n_sites > 28:
        raise ValueError("exhaustive code-state listing is capped at L*L <= 28")
    out = []
    for cfgs in _all_configs(lat.L):
        frozen = cfgmod.frozen_mask(cfgs, lat)
        cand = cfgs[frozen]
        nint = cfgmod.intersection_counts(cand, lat)
        out.append(cand[nint == 0])
    return np.sort(np.concatenate(out)).astype(np.int64)


# ---------------------------------------------------------------------------
# full decomposition by union-find over packed indices


class UnionFind:
    """Array-backed disjoint sets with path halving and union by size."""

    def __init__(self, n):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def roots(self):
        """Fully compressed root of every element (vectorized)."""
        parent = self.parent
        while True:
            grand = parent[parent]
            if np.array_equal(grand, parent):
                return parent
            parent = grand


def _move_edges(lat, site, cfgs):
    """Packed edge endpoints (cfg, cfg^bit) for legal flips of one site."""
    mask = cfgmod.flippable_mask(cfgs, lat, site)
    src = cfgs[mask]
    return src, src ^ np.uint32(1 << site)


def krylov_decompose(lat: Lattice):
    """Partition all configurations into Krylov sectors.

    Returns the sectors sorted by canonical representative, so repeated runs
    produce byte-identical output.
    """
    if lat.n_sites > 24:
        raise ValueError("full decomposition is capped at L*L <= 24")
    n = 1 << lat.n_sites
    cfgs = np.arange(n, dtype=np.uint32)

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        edge_lists = list(
            pool.map(lambda i: _move_edges(lat, i, cfgs), range(lat.n_sites))
        )

    uf = UnionFind(n)
    union = uf.union
    for src, dst in edge_lists:
        # each undirected edge appears twice (the reverse flip is also legal);
        # only process the ascending direction
        keep = src < dst
        for a, b in zip(src[keep].tolist(), dst[keep].tolist()):
            union(a, b)

    roots = uf.roots()
    reps = np.full(n, n, dtype=np.int64)
    np.minimum.at(reps, roots, np.arange(n, dtype=np.int64))
    sizes = np.bincount(roots, minlength=n)

    sector_roots = np.nonzero(sizes)[0]
    order = np.argsort(reps[sector_roots])
    sector_roots = sector_roots[order]

    rep_cfgs = reps[sector_roots]
    syndromes = cfgmod.cz_signs(rep_cfgs.astype(np.uint32), lat)

    sectors = []
    for k, root in enumerate(sector_roots):
        size = int(sizes[root])
        sectors.append(
            KrylovSector(
                representative=int(rep_cfgs[k]),
                size=size,
                syndrome=tuple(int(s) for s in syndromes[k]),
                is_frozen_sector=(size == 1),
            )
        )
    return sectors


def sector_of(cfg, lat, size_cap=1 << 22):
    """BFS the component of one configuration without a global decomposition."""
    seen = {int(cfg)}
    queue = deque([int(cfg)])
    while queue:
        c = queue.popleft()
        for i in range(lat.n_sites):
            if cfgmod.is_flippable(c, lat, i):
                nxt = c ^ (1 << i)
                if nxt not in seen:
                    if len(seen) >= size_cap:
                        raise RuntimeError(
                            f"component exceeded size cap {size_cap}"
                        )
                    seen.add(nxt)
                    queue.append(nxt)
    rep = min(seen)
    syndrome = tuple(
        int(s) for s in cfgmod.cz_signs(np.array([rep], dtype=np.uint64), lat)[0]
    )
    return KrylovSector(
        representative=rep,
        size=len(seen),
        syndrome=syndrome,
        is_frozen_sector=(len(seen) == 1),
    )


def sector_histogram(sectors):
    """Sorted (size, count) pairs over a sector list."""
    counts = {}
    for s in sectors:
        counts[s.size] = counts.get(s.size, 0) + 1
    return sorted(counts.items())


# ---------------------------------------------------------------------------
# transfer-matrix counting of code states


def _clean_row_pairs(L):
    """All ordered row pairs (below, above) with no CZ = -1 plaquette between.

    The plaquette between rows at column offset x couples the diagonals
    (a_x, b_{x+1}) and (a_{x+1}, b_x); CZ = -1 exactly when both diagonals
    disagree, independent of row parity.
    """
    n_rows = 1 << L
    a = np.repeat(np.arange(n_rows, dtype=np.uint32), n_rows)
    b = np.tile(np.arange(n_rows, dtype=np.uint32), n_rows)
    bad = np.zeros(a.shape, dtype=bool)
    for x in range(L):
        x1 = (x + 1) % L
        d1 = ((a >> x) ^ (b >> x1)) & 1
        d2 = ((a >> x1) ^ (b >> x)) & 1
        bad |= (d1 & d2).astype(bool)
    keep = ~bad
    return a[keep].astype(np.int64), b[keep].astype(np.int64)


def _row_unflippable(a, b, c, L):
    """Mask: every site of middle row b unflippable given rows a below, c above.

    Arrays broadcast; a site is flippable when its two in-row neighbors in b
    and its vertical neighbors in a and c all agree.
    """
    ok = np.ones(np.broadcast(a, b, c).shape, dtype=bool)
    for x in range(L):
        xl = (x - 1) % L
        xr = (x + 1) % L
        left = (b >> xl) & 1
        right = (b >> xr) & 1
        below = (a >> x) & 1
        above = (c >> x) & 1
        flippable = (left == right) & (below == above) & (left == below)
        ok &= ~flippable
    return ok


def count_code_states_transfer(L):
    """Exact code-state count by the row-pair transfer method (4 <= L <= 10)."""
    if L % 2 != 0 or not (4 <= L <= 10):
        raise ValueError("transfer counting requires even L with 4 <= L <= 10")
    a, b = _clean_row_pairs(L)
    n_states = len(a)
    index = {}
    for k in range(n_states):
        index[(int(a[k]), int(b[k]))] = k

    # group clean pairs by their first row for transition generation
    by_first = {}
    for k in range(n_states):
        by_first.setdefault(int(a[k]), []).append(k)

    rows_i = []
    cols_j = []
    for k in range(n_states):
        middle = int(b[k])
        cand = by_first.get(middle)
        if not cand:
            continue
        cand = np.asarray(cand, dtype=np.int64)
        top = b[cand]
        ok = _row_unflippable(np.int64(a[k]), np.int64(middle), top, L)
        good = cand[ok]
        rows_i.extend([k] * len(good))
        cols_j.extend(good.tolist())

    T = sp.csr_matrix(
        (np.ones(len(rows_i), dtype=np.int64), (rows_i, cols_j)),
        shape=(n_states, n_states),
    )
    # trace(T^L) via T^(L/2): path counts are small so int64 is exact
    P = T
    for _ in range(L // 2 - 1):
        P = P @ T
    total = int(P.multiply(P.T).sum())
    return total


def transfer_report(L):
    count = count_code_states_transfer(L)
    formula = formula_count(L)
    return EnumerationReport(
        L=L,
        method="transfer_matrix",
        count_unflippable=None,
        count_code_states=count,
        formula_value=formula,
        matches_unflippable=None,
        matches_code_states=(count == formula),
    )
