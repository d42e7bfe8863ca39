import numpy as np
import pytest

from fragmenta import config as cm
from fragmenta import fragmentation as fr
from fragmenta.lattice import build_lattice


@pytest.fixture(scope="module")
def lat():
    return build_lattice(4)


@pytest.fixture(scope="module")
def sectors(lat):
    return fr.krylov_decompose(lat)


def dfs_row_count(L):
    """Independent code-state counter: depth-first search over rows.

    Uses nothing from the transfer-matrix implementation; constraints are
    spelled out directly on row bit patterns.
    """
    n_rows = 1 << L

    def clean(a, b):
        for x in range(L):
            x1 = (x + 1) % L
            if ((a >> x ^ b >> x1) & 1) and ((a >> x1 ^ b >> x) & 1):
                return False
        return True

    def unflip(a, b, c):
        for x in range(L):
            left = (b >> ((x - 1) % L)) & 1
            right = (b >> ((x + 1) % L)) & 1
            if left == right == (a >> x) & 1 == (c >> x) & 1:
                return False
        return True

    count = 0

    def extend(rows):
        nonlocal count
        if len(rows) == L:
            if clean(rows[-1], rows[0]) and unflip(rows[-2], rows[-1], rows[0]) \
                    and unflip(rows[-1], rows[0], rows[1]):
                count += 1
            return
        for c in range(n_rows):
            if clean(rows[-1], c) and (len(rows) < 2 or unflip(rows[-2], rows[-1], c)):
                extend(rows + [c])

    for r0 in range(n_rows):
        for r1 in range(n_rows):
            if clean(r0, r1):
                extend([r0, r1])
    return count


def test_brute_force_counts(lat):
    report = fr.enumerate_frozen(lat)
    assert report.formula_value == 56
    assert report.count_code_states == 56
    assert report.matches_code_states
    # stripes witness strict inequality between unflippable and code counts
    assert report.count_unflippable > report.count_code_states
    assert report.count_unflippable == 13924  # regression anchor
    assert not report.matches_unflippable


def test_code_states_are_code_states(lat):
    states = fr.code_states(lat)
    assert len(states) == 56
    for cfg in states.tolist():
        assert cm.is_code_state(cfg, lat)


def test_transfer_equals_brute_force_at_L4(lat):
    assert fr.count_code_states_transfer(4) == fr.enumerate_frozen(lat).count_code_states


def test_transfer_against_independent_dfs():
    assert fr.count_code_states_transfer(4) == dfs_row_count(4) == 56
    assert fr.count_code_states_transfer(6) == dfs_row_count(6) == 0


def test_transfer_formula_comparisons():
    # the closed form holds for L divisible by 4; L=6 is a real discrepancy
    assert fr.transfer_report(4).matches_code_states
    assert fr.transfer_report(8).count_code_states == 1016
    r6 = fr.transfer_report(6)
    assert r6.formula_value == 248
    assert r6.count_code_states == 0
    assert not r6.matches_code_states


def test_transfer_L10_follows_the_parity_law():
    # close packing needs L/2 wall lines per sublattice with even parity,
    # so L = 2 (mod 4) admits no code states at all
    assert fr.count_code_states_transfer(10) == 0


def test_transfer_clean_pair_restriction_is_exact():
    # oracle: the transfer matrix over ALL ordered row pairs, with the
    # plaquette check on the transition instead of the state set, must give
    # the same trace
    L = 4
    n_rows = 1 << L
    n_pairs = n_rows * n_rows

    def clean(a, b):
        for x in range(L):
            x1 = (x + 1) % L
            if ((a >> x ^ b >> x1) & 1) and ((a >> x1 ^ b >> x) & 1):
                return False
        return True

    def unflip(a, b, c):
        for x in range(L):
            left = (b >> ((x - 1) % L)) & 1
            right = (b >> ((x + 1) % L)) & 1
            if left == right == (a >> x) & 1 == (c >> x) & 1:
                return False
        return True

    T = np.zeros((n_pairs, n_pairs), dtype=np.int64)
    for a in range(n_rows):
        for b in range(n_rows):
            if not clean(a, b):
                continue
            for c in range(n_rows):
                if clean(b, c) and unflip(a, b, c):
                    T[a * n_rows + b, b * n_rows + c] = 1
    full_trace = int(np.trace(np.linalg.matrix_power(T, L)))
    assert full_trace == fr.count_code_states_transfer(4) == 56


def test_transfer_guards():
    with pytest.raises(ValueError):
        fr.count_code_states_transfer(5)
    with pytest.raises(ValueError):
        fr.count_code_states_transfer(12)


def test_decomposition_partitions_everything(lat, sectors):
    assert sum(s.size for s in sectors) == 1 << 16
    reps = [s.representative for s in sectors]
    assert reps == sorted(reps)
    assert len(set(reps)) == len(reps)


def test_singleton_sectors_are_the_unflippable_states(lat, sectors):
    n_frozen = sum(1 for s in sectors if s.is_frozen_sector)
    assert n_frozen == fr.enumerate_frozen(lat).count_unflippable
    histogram = dict(fr.sector_histogram(sectors))
    assert histogram[1] == n_frozen
    for s in sectors[:50]:
        assert s.is_frozen_sector == (s.size == 1)
        if s.is_frozen_sector:
            assert cm.is_frozen(s.representative, lat)


def test_zero_sector_contains_single_flip_descendants(lat, sectors):
    zero_sector = fr.sector_of(0, lat)
    assert zero_sector.size > 1
    members = {0} | {1 << i for i in range(16)}
    component = _bfs_members(0, lat)
    assert members <= component


def _bfs_members(cfg, lat, cap=1 << 22):
    from collections import deque

    seen = {cfg}
    queue = deque([cfg])
    while queue:
        c = queue.popleft()
        for i in range(lat.n_sites):
            if cm.is_flippable(c, lat, i):
                nxt = c ^ (1 << i)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
                    if len(seen) > cap:
                        raise RuntimeError("cap")
    return seen


def test_sector_of_matches_decomposition(lat, sectors):
    by_rep = {s.representative: s for s in sectors}
    rng = np.random.default_rng(2)
    for cfg in rng.integers(0, 1 << 16, size=6).tolist():
        sec = fr.sector_of(cfg, lat)
        assert sec.representative in by_rep
        assert by_rep[sec.representative].size == sec.size


def test_sector_syndrome_is_constant(lat):
    rng = np.random.default_rng(9)
    for cfg in rng.integers(0, 1 << 16, size=4).tolist():
        members = np.array(sorted(_bfs_members(cfg, lat)), dtype=np.uint32)
        signs = cm.cz_signs(members, lat)
        assert np.all(signs == signs[0])


def test_move_legality_is_symmetric(lat):
    rng = np.random.default_rng(13)
    for cfg in rng.integers(0, 1 << 16, size=300).tolist():
        for i in range(lat.n_sites):
            if cm.is_flippable(cfg, lat, i):
                assert cm.is_flippable(cfg ^ (1 << i), lat, i)


def test_sublattice_toggle_maps_sectors_to_sectors(lat):
    rng = np.random.default_rng(17)
    for cfg in rng.integers(0, 1 << 16, size=4).tolist():
        sec = fr.sector_of(cfg, lat)
        for mask in (lat.mask_a, lat.mask_b):
            twin = fr.sector_of(cfg ^ mask, lat)
            assert twin.size == sec.size
            assert twin.syndrome == sec.syndrome


def test_sector_of_frozen_state_is_singleton(lat):
    states = fr.code_states(lat)
    sec = fr.sector_of(int(states[0]), lat)
    assert sec.size == 1 and sec.is_frozen_sector
    assert all(v == 1 for v in sec.syndrome)


def test_sector_of_size_cap(lat):
    with pytest.raises(RuntimeError):
        fr.sector_of(0, lat, size_cap=4)


def test_size_guards(lat):
    big = build_lattice(6)
    with pytest.raises(ValueError):
        fr.krylov_decompose(big)
    with pytest.raises(ValueError):
        fr.code_states(big)


def test_decomposition_deterministic(lat, sectors):
    again = fr.krylov_decompose(lat)
    assert [(s.representative, s.size, s.syndrome) for s in again] == [
        (s.representative, s.size, s.syndrome) for s in sectors
    ]


def test_worker_count_env_does_not_change_output(lat, sectors, monkeypatch):
    monkeypatch.setenv("FRAGMENTA_THREADS", "2")
    again = fr.krylov_decompose(lat)
    assert [(s.representative, s.size) for s in again] == [
        (s.representative, s.size) for s in sectors
    ]


def test_union_find_decomposition_matches_bfs_oracle(lat, sectors):
    # independent full decomposition: repeated scalar-predicate BFS sweeps
    unvisited = set(range(1 << 16))
    oracle = []
    while unvisited:
        root = min(unvisited)
        component = _bfs_members(root, lat)
        unvisited -= component
        oracle.append((root, len(component)))
    # BFS discovered components in ascending-representative order too
    assert oracle == [(s.representative, s.size) for s in sectors]
