"""m-state clock generalization: link colors under a zero-flux constraint.

Clock digits 0..m-1 live on the 2 L^2 links of an L x L torus.  Around every
face the links are path-ordered (bottom, right, top, left) and carry the
alternating signs (+,-,+,-); the flux of color kappa is the signed count of
kappa-colored boundary links and must vanish for every face and every color.
Valid configurations are exactly the coverings by monochromatic diagonal
staircase loops: around each face, the horizontal pair and the vertical pair
of boundary links realize the same color multiset.

The recoloring move acts on the plaquettes of the 45-degree diamond
geometry, i.e. the four links incident to one lattice vertex: when all four
carry the same color they may be recolored together.  Each face adjacent to
the vertex contains exactly one even-position and one odd-position link of
the star, so every face flux is conserved: moves acting on the faces
themselves would violate the constraint (flipping a uniform face at L = 2
breaks its neighbors), which is why the move cells are the dual plaquettes.

The topological sector label is extracted from the two diagonal winding
directions: the transverse sequence of colors of monochromatic staircase
tracks, with mixed tracks dropped and adjacent equal colors merged
cyclically.  A constant cycle leaves no protected color boundary and reduces
to the empty label.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np


@dataclass(frozen=True)
class ClockLattice:
    """Link-indexed torus geometry for the clock model.

    Horizontal link h(x,y) joins (x,y)-(x+1,y) and has index y*L + x;
    vertical link v(x,y) joins (x,y)-(x,y+1) and has index L^2 + y*L + x.
    """

    L: int
    n_links: int
    plaq_links: tuple       # per face: (bottom, right, top, left) path order
    star_links: tuple       # per vertex: (east, north, west, south) move cell
    tracks_plus: tuple      # per (1,1) diagonal track: its 2L links
    tracks_minus: tuple     # per (1,-1) diagonal track: its 2L links

    @property
    def n_plaquettes(self):
        return self.L * self.L


def _h(L, x, y):
    return (y % L) * L + (x % L)


def _v(L, x, y):
    return L * L + (y % L) * L + (x % L)


def build_clock_lattice(L):
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    plaq = []
    star = []
    for y in range(L):
        for x in range(L):
            plaq.append((_h(L, x, y), _v(L, x + 1, y), _h(L, x, y + 1), _v(L, x, y)))
            star.append((_h(L, x, y), _v(L, x, y), _h(L, x - 1, y), _v(L, x, y - 1)))
    plus = []
    minus = []
    for t in range(L):
        links = []
        for x in range(L):
            links.append(_v(L, x, x + t))
            links.append(_h(L, x, x + t + 1))
        plus.append(tuple(links))
        links = []
        for x in range(L):
            links.append(_v(L, x, t - x))
            links.append(_h(L, x, t - x))
        minus.append(tuple(links))
    return ClockLattice(
        L=L,
        n_links=2 * L * L,
        plaq_links=tuple(plaq),
        star_links=tuple(star),
        tracks_plus=tuple(plus),
        tracks_minus=tuple(minus),
    )


def flux_density(cfg, lat, p, kappa):
    """Signed count of kappa along the face's path-ordered boundary."""
    links = lat.plaq_links[p]
    return (
        (cfg[links[0]] == kappa)
        - (cfg[links[1]] == kappa)
        + (cfg[links[2]] == kappa)
        - (cfg[links[3]] == kappa)
    )


def is_valid(cfg, lat, m):
    """Zero flux for every face and every color."""
    for p in range(lat.n_plaquettes):
        for kappa in range(m):
            if flux_density(cfg, lat, p, kappa) != 0:
                return False
    return True


def global_shift(cfg, k, m):
    """Cycle every link color by +k mod m."""
    return tuple((d + k) % m for d in cfg)


def legal_moves(cfg, lat, m):
    """Recoloring moves: (cell, kappa, kappa') per monochromatic move cell.

    A cell is a plaquette of the diamond geometry, indexed by the lattice
    vertex whose four incident links form its boundary.
    """
    moves = []
    for cell, links in enumerate(lat.star_links):
        kappa = cfg[links[0]]
        if all(cfg[l] == kappa for l in links[1:]):
            for target in range(m):
                if target != kappa:
                    moves.append((cell, kappa, target))
    return moves


def apply_move(cfg, lat, cell, target):
    out = list(cfg)
    for l in lat.star_links[cell]:
        out[l] = target
    return tuple(out)


def enumerate_valid(L, m):
    """All valid configurations, lexicographically sorted."""
    lat = build_clock_lattice(L)
    raw = m ** (2 * L * L)
    if raw > 1 << 20:
        raise ValueError(f"exhaustive scan of {raw} link assignments is too large")
    return lat, [c for c in product(range(m), repeat=2 * L * L) if is_valid(c, lat, m)]


@dataclass(frozen=True)
class ClockSector:
    """Connected component of the recoloring-move graph on valid configs."""

    representative: tuple
    size: int
    members: tuple  # sorted


def krylov_decompose_quadflip(L, m=3):
    """Exhaustive sector decomposition of the valid configuration space."""
    lat, valid = enumerate_valid(L, m)
    unvisited = set(valid)
    sectors = []
    for cfg in valid:  # lexicographic order makes the output deterministic
        if cfg not in unvisited:
            continue
        component = {cfg}
        frontier = [cfg]
        while frontier:
            cur = frontier.pop()
            for cell, _, target in legal_moves(cur, lat, m):
                nxt = apply_move(cur, lat, cell, target)
                if nxt not in component:
                    component.add(nxt)
                    frontier.append(nxt)
        unvisited -= component
        members = tuple(sorted(component))
        sectors.append(
            ClockSector(representative=members[0], size=len(members), members=members)
        )
    sectors.sort(key=lambda s: s.representative)
    return lat, sectors


@dataclass(frozen=True)
class QuditMultiplet:
    """Shift orbit of sectors ordered so the global shift maps k to k+1."""

    sector_indices: tuple  # indices into the sector list, length = orbit size
    member_sets: tuple     # per orbit position: frozenset of config tuples


def find_multiplets(sectors, m):
    """Group sectors into shift orbits.

    Returns (multiplets, symmetric_sector_indices).  For prime m any orbit
    size other than 1 or m is a structural failure; for composite m the
    size must divide m.
    """
    member_to_sector = {}
    for k, s in enumerate(sectors):
        for c in s.members:
            member_to_sector[c] = k

    prime = m >= 2 and all(m % d for d in range(2, m))
    seen = set()
    multiplets = []
    symmetric = []
    for k, s in enumerate(sectors):
        if k in seen:
            continue
        orbit = [k]
        cur = k
        while True:
            shifted = global_shift(sectors[cur].representative, 1, m)
            nxt = member_to_sector[shifted]
            if nxt == k:
                break
            orbit.append(nxt)
            cur = nxt
        seen |= set(orbit)
        if len(orbit) == 1:
            symmetric.append(k)
            continue
        ok = (len(orbit) == m) if prime else (m % len(orbit) == 0)
        if not ok:
            raise RuntimeError(
                f"shift orbit of sector {k} has size {len(orbit)} "
                f"(m = {m}); representatives: "
                f"{[sectors[j].representative for j in orbit]}"
            )
        sizes = {sectors[j].size for j in orbit}
        if len(sizes) != 1:
            raise RuntimeError(f"orbit of sector {k} has unequal sizes {sizes}")
        member_sets = tuple(frozenset(sectors[j].members) for j in orbit)
        multiplets.append(
            QuditMultiplet(sector_indices=tuple(orbit), member_sets=member_sets)
        )
    return multiplets, symmetric


def qudit_logicals(multiplet, m, valid_configs):
    """Logical I, Z, X over the valid-config basis for one multiplet.

    Z applies the phase omega^k on the k-th orbit sector; X is the global
    shift permutation restricted to the multiplet support, which maps the
    k-th sector onto the (k+1)-st, so Z X = omega X Z and X^m = Z^m = I on
    the support.
    """
    index = {c: i for i, c in enumerate(valid_configs)}
    dim = len(valid_configs)
    omega = np.exp(2j * np.pi / m)
    ident = np.zeros((dim, dim), dtype=complex)
    zmat = np.zeros((dim, dim), dtype=complex)
    xmat = np.zeros((dim, dim), dtype=complex)
    n = len(multiplet.member_sets)
    for k, members in enumerate(multiplet.member_sets):
        for c in members:
            i = index[c]
            ident[i, i] = 1.0
            zmat[i, i] = omega ** k
            shifted = global_shift(c, 1, m)
            xmat[index[shifted], i] = 1.0
    return {"I": ident, "Z": zmat, "X": xmat}


def verify_qudit_algebra(multiplet, m, valid_configs):
    """Max-abs residuals of Z^m = X^m = I and ZX = omega XZ on the support."""
    ops = qudit_logicals(multiplet, m, valid_configs)
    omega = np.exp(2j * np.pi / m)
    zp = np.linalg.matrix_power(ops["Z"], m)
    xp = np.linalg.matrix_power(ops["X"], m)
    return {
        "Z_power": float(np.abs(zp - ops["I"]).max()),
        "X_power": float(np.abs(xp - ops["I"]).max()),
        "ZX_commutation": float(
            np.abs(ops["Z"] @ ops["X"] - omega * ops["X"] @ ops["Z"]).max()
        ),
    }


# ---------------------------------------------------------------------------
# loop-sequence topological label


def _track_color(cfg, links):
    colors = {cfg[l] for l in links}
    return colors.pop() if len(colors) == 1 else None


def _reduce_cyclic(colors):
    """Drop mixed tracks, merge adjacent equal colors cyclically.

    A cycle that ends up constant has no protected color boundary left and
    reduces to the empty label.
    """
    seq = [c for c in colors if c is not None]
    if not seq:
        return ()
    out = [seq[0]]
    for c in seq[1:]:
        if c != out[-1]:
            out.append(c)
    while len(out) > 1 and out[-1] == out[0]:
        out.pop()
    if len(out) == 1:
        return ()
    rotations = [tuple(out[k:] + out[:k]) for k in range(len(out))]
    return min(rotations)


def loop_invariant(cfg, lat):
    """Canonical pair of reduced diagonal loop-color sequences."""
    plus = _reduce_cyclic([_track_color(cfg, t) for t in lat.tracks_plus])
    minus = _reduce_cyclic([_track_color(cfg, t) for t in lat.tracks_minus])
    return (plus, minus)


# ---------------------------------------------------------------------------
# assembled report


def quadflip_report(L, m=3):
    """Full decomposition summary used by the command-line interface."""
    lat, sectors = krylov_decompose_quadflip(L, m)
    valid = sorted(set().union(*(s.members for s in sectors))) if sectors else []
    multiplets, symmetric = find_multiplets(sectors, m)

    labels = [loop_invariant(s.representative, lat) for s in sectors]
    violations = 0
    for s, label in zip(sectors, labels):
        for c in s.members:
            if loop_invariant(c, lat) != label:
                violations += 1

    residuals = {"Z_power": 0.0, "X_power": 0.0, "ZX_commutation": 0.0}
    entries = []
    for mult in multiplets:
        res = verify_qudit_algebra(mult, m, valid)
        for key in residuals:
            residuals[key] = max(residuals[key], res[key])
        entries.append(
            {
                "orbit_size": len(mult.sector_indices),
                "sector_sizes": [sectors[k].size for k in mult.sector_indices],
                "invariant_labels": [
                    _label_json(labels[k]) for k in mult.sector_indices
                ],
            }
        )
    return {
        "L": L,
        "m": m,
        "valid_count": len(valid),
        "sector_count": len(sectors),
        "symmetric_sector_count": len(symmetric),
        "multiplet_count": len(multiplets),
        "orbit_sizes": sorted(
            {len(mu.sector_indices) for mu in multiplets} | ({1} if symmetric else set())
        ),
        "multiplets": entries,
        "distinct_labels": len(set(labels)),
        "label_violations": violations,
        "algebra_residuals": residuals,
    }


def _label_json(label):
    return [list(part) for part in label]
