"""Twisted point counts for hyperplane and toric arrangements of root systems.

The production path is purely combinatorial: Mobius-weighted sums over
group-stable flats (linear case) or layers (toric case).  Enumerative
counting over finite fields exists only as an independent oracle.

Flats are encoded by the set of positive-root lines they contain (a packed
bitset); layers by (supporting flat, torsion character).  Mobius values
come from the ADE type of the content subsystem: the interval below any
flat or layer is the intersection lattice of its content arrangement, whose
characteristic polynomial factors over the exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lattice import (
    IntPoly,
    bareiss_det,
    det_pencil,
    hnf,
    mat_inverse_unimodular,
    mat_mul,
    mat_rank,
    poly_from_roots,
    saturation_basis,
    smith_normal_form,
)
from .rootsys import EXPONENTS, RootSystem


class PosetError(RuntimeError):
    pass


def _exponent_product(kind: str, rank: int) -> int:
    if kind == "A":
        return math.factorial(rank)
    if kind == "D":
        out = rank - 1
        for i in range(1, rank):
            out *= 2 * i - 1
        return out
    if kind == "E" and rank == 6:
        return 12320
    if kind == "E" and rank == 7:
        return 765765
    raise PosetError(f"no exponent data for type {kind}{rank}")


def _ade_type(rank: int, nlines: int):
    """Identify an irreducible simply-laced type from rank and line count."""
    if nlines == rank * (rank + 1) // 2:
        return ("A", rank)
    if rank >= 4 and nlines == rank * (rank - 1):
        return ("D", rank)
    if rank == 6 and nlines == 36:
        return ("E", 6)
    if rank == 7 and nlines == 63:
        return ("E", 7)
    raise PosetError(f"content with rank {rank} and {nlines} lines is not ADE")


def _int_adjugate(M):
    n = len(M)
    if n == 0:
        return []
    d = bareiss_det(M)
    assert d != 0
    from .lattice import mat_inverse_rational
    R = mat_inverse_rational(M)
    out = []
    for row in R:
        orow = []
        for x in row:
            v = x * d
            assert v.denominator == 1
            orow.append(int(v))
        out.append(orow)
    return out


@dataclass
class FlatPoset:
    """Intersection poset of the reflection arrangement of a root system."""

    system: RootSystem
    bits: np.ndarray          # (F,) uint64 content bitsets over positive-root lines
    ranks: np.ndarray         # (F,) int8
    mobius: np.ndarray        # (F,) int64
    basis_lines: list         # per flat, tuple of line indices forming a basis
    transitions: np.ndarray   # (F, L) int32: closure of flat + line
    content_bools: np.ndarray = field(default=None)  # (F, L) bool

    @property
    def n_flats(self):
        return len(self.bits)

    def char_poly(self) -> IntPoly:
        n = self.system.rank
        out = IntPoly()
        for mu, r in zip(self.mobius.tolist(), self.ranks.tolist()):
            out = out + IntPoly.const(int(mu)).shift(n - r)
        return out


def _component_mobius(system: RootSystem, lines, gram_lines: np.ndarray) -> int:
    """Mobius value of the top of the content arrangement, by ADE type."""
    lines = list(lines)
    rank_total = 0
    prod = 1
    unseen = set(lines)
    while unseen:
        comp = [unseen.pop()]
        queue = [comp[0]]
        while queue:
            a = queue.pop()
            for b in list(unseen):
                if gram_lines[a, b] != 0:
                    unseen.remove(b)
                    comp.append(b)
                    queue.append(b)
        sub = gram_lines[np.ix_(comp, comp)]
        r = mat_rank(sub.tolist())
        kind, rk = _ade_type(r, len(comp))
        rank_total += r
        prod *= _exponent_product(kind, rk)
    return (-1) ** rank_total * prod, rank_total


def build_flat_poset(system: RootSystem) -> FlatPoset:
    """All flats of the reflection arrangement, with type-derived Mobius data."""
    L = system.num_lines
    P = system.pos_roots
    G = P @ system.gram @ P.T  # pairwise root inner products
    pow2 = (np.uint64(1) << np.arange(L, dtype=np.uint64))

    bits_list = [np.uint64(0)]
    rank_list = [0]
    basis_list = [()]
    index = {0: 0}
    transitions = []
    frontier = [0]
    trans0 = np.full(L, -1, dtype=np.int64)
    transitions.append(trans0)

    while frontier:
        next_frontier = []
        for fid in frontier:
            basis = basis_list[fid]
            bset = int(bits_list[fid])
            r = rank_list[fid]
            if r == system.rank:
                transitions[fid][:] = fid
                continue
            if basis:
                idx = list(basis)
                M = G[np.ix_(idx, idx)]
                d = bareiss_det(M.tolist())
                adj = np.array(_int_adjugate(M.tolist()), dtype=np.int64)
                V = G[:, idx]
                Q = d * G - V @ adj @ V.T
            else:
                Q = G.copy()
            assert np.abs(Q).max() < 2**30
            # line j lies in span(basis + line b) iff Cauchy-Schwarz is tight
            diag = np.diag(Q)
            par = (Q.astype(np.int64) ** 2) == np.outer(diag, diag)
            keys = par @ pow2  # candidate content bitset per extending line
            tr = transitions[fid]
            for b in range(L):
                if (bset >> b) & 1:
                    tr[b] = fid
                    continue
                key = int(keys[b])
                nid = index.get(key)
                if nid is None:
                    nid = len(bits_list)
                    index[key] = nid
                    bits_list.append(np.uint64(key))
                    rank_list.append(r + 1)
                    basis_list.append(basis + (b,))
                    transitions.append(np.full(L, -1, dtype=np.int64))
                    next_frontier.append(nid)
                tr[b] = nid
        frontier = next_frontier

    F = len(bits_list)
    bits = np.array(bits_list, dtype=np.uint64)
    ranks = np.array(rank_list, dtype=np.int8)
    mobius = np.empty(F, dtype=np.int64)
    for fid in range(F):
        lines = [b for b in range(L) if (int(bits[fid]) >> b) & 1]
        if not lines:
            mobius[fid] = 1
            continue
        mu, rank_total = _component_mobius(system, lines, G)
        if rank_total != rank_list[fid]:
            raise PosetError("content rank disagrees with flat rank")
        mobius[fid] = mu
    poset = FlatPoset(
        system=system,
        bits=bits,
        ranks=ranks,
        mobius=mobius,
        basis_lines=basis_list,
        transitions=np.array(transitions, dtype=np.int32),
    )
    poset.content_bools = _bits_to_bools(bits, L)
    _check_char_poly(poset)
    return poset


def _bits_to_bools(bits: np.ndarray, L: int) -> np.ndarray:
    out = np.zeros((len(bits), L), dtype=bool)
    for j in range(L):
        out[:, j] = (bits >> np.uint64(j)) & np.uint64(1) != 0
    return out


def _check_char_poly(poset: FlatPoset):
    label = poset.system.label
    n = poset.system.rank
    if label.startswith("A"):
        exps = tuple(range(1, n + 1))
    else:
        exps = EXPONENTS[label]
    expected = poly_from_roots(exps)
    if poset.char_poly() != expected:
        raise PosetError(f"characteristic polynomial of {label} does not factor over exponents")


def twisted_flat_count(poset: FlatPoset, M) -> IntPoly:
    """Count polynomial of the complement under the q-power map twisted by M."""
    perm = poset.system.line_permutation(M)
    stable = (poset.content_bools[:, perm] == poset.content_bools).all(axis=1)
    n = poset.system.rank
    out = IntPoly()
    dims = n - poset.ranks[stable].astype(np.int64)
    mus = poset.mobius[stable]
    acc = np.zeros(n + 1, dtype=np.int64)
    np.add.at(acc, dims, mus)
    return IntPoly(acc.tolist())


# ---------------------------------------------------------------------------
# Toric layers


@dataclass
class Layer:
    flat: int
    zeta: tuple        # Fractions on the canonical saturated basis rows
    content: int       # bitset of vanishing lines
    mobius: int
    rank: int


@dataclass
class FlatLatticeData:
    """Saturated basis and coordinate data for one flat's support lattice."""

    sat: list            # r x n canonical HNF basis of the saturation
    full: np.ndarray     # n x n unimodular, first r rows = sat
    full_inv: np.ndarray
    content_roots: np.ndarray   # root vector per content line (k x n)
    content_lines: list
    content_coords: np.ndarray  # coordinates of content roots in sat basis (k x r)


@dataclass
class LayerPoset:
    system: RootSystem
    flats: FlatPoset
    layers: list
    flat_data: list
    torsion_lcm: int

    @property
    def n_layers(self):
        return len(self.layers)

    def layer_counts_by_rank(self):
        out = {}
        for lay in self.layers:
            out[lay.rank] = out.get(lay.rank, 0) + 1
        return out

    def content_bool_matrix(self) -> np.ndarray:
        bits = np.array([np.uint64(l.content) for l in self.layers], dtype=np.uint64)
        return _bits_to_bools(bits, self.system.num_lines)

    def checksum(self) -> str:
        import hashlib
        h = hashlib.sha256()
        h.update(self.system.label.encode())
        for lay in self.layers:
            h.update(str((lay.flat, lay.zeta and tuple((f.numerator, f.denominator) for f in lay.zeta), lay.content, lay.mobius)).encode())
        return h.hexdigest()


def _flat_lattice_data(system: RootSystem, poset: FlatPoset, fid: int) -> FlatLatticeData:
    n = system.rank
    lines = [b for b in range(system.num_lines) if (int(poset.bits[fid]) >> b) & 1]
    roots = system.pos_roots[lines] if lines else np.zeros((0, n), dtype=np.int64)
    basis_rows = system.pos_roots[list(poset.basis_lines[fid])] if poset.basis_lines[fid] else np.zeros((0, n), dtype=np.int64)
    sat, full = saturation_basis(basis_rows.tolist(), n)
    sat = hnf(sat) if sat else []
    r = len(sat)
    full_rows = [list(map(int, row)) for row in sat] + [list(map(int, row)) for row in full[r:]]
    assert abs(bareiss_det(full_rows)) == 1
    full_arr = np.array(full_rows, dtype=np.int64) if full_rows else np.eye(n, dtype=np.int64)
    finv = np.array(mat_inverse_unimodular(full_arr.tolist()), dtype=np.int64)
    if len(roots):
        coords = roots @ finv
        assert not coords[:, r:].any(), "content root outside the saturated support"
        coords = coords[:, :r]
    else:
        coords = np.zeros((0, 0), dtype=np.int64)
    return FlatLatticeData(
        sat=sat,
        full=full_arr,
        full_inv=finv,
        content_roots=roots,
        content_lines=lines,
        content_coords=coords,
    )


def build_layer_poset(system: RootSystem, flats: FlatPoset = None) -> LayerPoset:
    """All layers of the toric arrangement: one per flat plus torsion layers.

    Torsion-free layers mirror the flat poset (trivial character).  Torsion
    layers are found by intersecting one subtorus at a time; the character
    bookkeeping solves a small integer congruence system per extension.
    """
    if flats is None:
        flats = build_flat_poset(system)
    n = system.rank
    L = system.num_lines
    P = system.pos_roots
    flat_data = [None] * flats.n_flats

    def fdata(fid):
        if flat_data[fid] is None:
            flat_data[fid] = _flat_lattice_data(system, flats, fid)
        return flat_data[fid]

    layers = []
    index = {}

    def add_layer(fid, zeta, content_bits):
        key = (fid, tuple((f.numerator, f.denominator) for f in zeta))
        if key in index:
            return None
        lines = [b for b in range(L) if (content_bits >> b) & 1]
        G = P @ system.gram @ P.T
        mu, rank_total = _component_mobius(system, lines, G) if lines else (1, 0)
        if rank_total != flats.ranks[fid]:
            raise PosetError("layer content does not span its support")
        lay = Layer(flat=fid, zeta=tuple(zeta), content=content_bits,
                    mobius=mu, rank=int(flats.ranks[fid]))
        index[key] = len(layers)
        layers.append(lay)
        return lay

    # Seed the torsion-free skeleton: one trivial-character layer per flat.
    for fid in range(flats.n_flats):
        add_layer(fid, (), int(flats.bits[fid]))
    for i, lay in enumerate(layers):
        if lay.zeta == () and flats.ranks[lay.flat] > 0:
            r = int(flats.ranks[lay.flat])
            layers[i] = Layer(flat=lay.flat, zeta=tuple([Fraction(0)] * r),
                              content=lay.content, mobius=lay.mobius, rank=lay.rank)
    index.clear()
    for i, lay in enumerate(layers):
        index[(lay.flat, tuple((f.numerator, f.denominator) for f in lay.zeta))] = i

    # BFS by rank over layers, grouped by supporting flat.
    torsion_lcm = 1
    by_rank = {}
    for i, lay in enumerate(layers):
        by_rank.setdefault(lay.rank, []).append(i)
    rank = 0
    while rank < n:
        ids = by_rank.get(rank, [])
        by_flat = {}
        for i in ids:
            by_flat.setdefault(layers[i].flat, []).append(i)
        for fid, lids in sorted(by_flat.items()):
            fd = fdata(fid)
            r = int(flats.ranks[fid])
            span_bits = int(flats.bits[fid])
            for b in range(L):
                if (span_bits >> b) & 1:
                    continue
                nfid = int(flats.transitions[fid, b])
                nfd = fdata(nfid)
                rp = r + 1
                stack = np.vstack([np.array(fd.sat, dtype=np.int64).reshape(r, n),
                                   P[b][None]])
                coords = stack @ nfd.full_inv
                assert not coords[:, rp:].any()
                E = coords[:, :rp]
                detE = abs(bareiss_det(E.tolist()))
                assert detE >= 1
                if detE == 1:
                    sf = None
                else:
                    torsion_lcm = np.lcm(torsion_lcm, detE)
                    sf = smith_normal_form(E.tolist())
                for li in lids:
                    lay = layers[li]
                    if detE == 1 and not any(lay.zeta):
                        continue  # lands on the seeded trivial layer
                    rhs = [Fraction(z) for z in lay.zeta] + [Fraction(0)]
                    new_zetas = _extension_characters(E, sf, rhs, detE)
                    for zeta in new_zetas:
                        zeta = tuple(f - int(f) if f >= 0 else f - int(f) + (1 if f != int(f) else 0) for f in zeta)
                        zeta = tuple(Fraction(f.numerator % f.denominator, f.denominator) for f in zeta)
                        vals = nfd.content_coords @ np.array([0] * 0 + [0] * 0) if False else None
                        content = 0
                        for kk, line in enumerate(nfd.content_lines):
                            v = sum(int(nfd.content_coords[kk, t]) * zeta[t] for t in range(rp))
                            if v.denominator == 1:
                                content |= 1 << line
                        lay2 = add_layer(nfid, zeta, content)
                        if lay2 is not None:
                            by_rank.setdefault(lay2.rank, []).append(index[(nfid, tuple((f.numerator, f.denominator) for f in zeta))])
        rank += 1

    return LayerPoset(system=system, flats=flats, layers=layers,
                      flat_data=flat_data, torsion_lcm=int(torsion_lcm))


def _extension_characters(E, sf, rhs, detE):
    """All solutions zeta of E @ zeta = rhs (mod 1)."""
    rp = len(rhs)
    if detE == 1:
        inv = mat_inverse_unimodular(E.tolist()) if isinstance(E, np.ndarray) else mat_inverse_unimodular(E)
        zeta = [sum(Fraction(inv[i][j]) * rhs[j] for j in range(rp)) for i in range(rp)]
        return [tuple(zeta)]
    U = sf.U
    V = sf.V
    d = [sf.D[i][i] for i in range(rp)]
    s = [sum(Fraction(U[i][j]) * rhs[j] for j in range(rp)) for i in range(rp)]
    out = []

    def rec(i, ys):
        if i == rp:
            zeta = [sum(Fraction(V[a][b]) * ys[b] for b in range(rp)) for a in range(rp)]
            out.append(tuple(zeta))
            return
        for j in range(d[i]):
            rec(i + 1, ys + [(s[i] + j) / d[i]])

    rec(0, [])
    return out


def _quotient_action(fd: FlatLatticeData, M: np.ndarray, r: int) -> np.ndarray:
    """Induced integer action on the support quotient lattice."""
    Pmat = fd.full @ M.T @ fd.full_inv
    assert not Pmat[:r, r:].any(), "support lattice is not stable"
    return Pmat[r:, r:]


def _zeta_stable(fd: FlatLatticeData, Minv: np.ndarray, zeta, r: int) -> bool:
    """Check zeta(g^{-1} x) = zeta(x) on the saturated basis rows."""
    H = np.array(fd.sat, dtype=np.int64).reshape(r, -1)
    coords = H @ Minv.T @ fd.full_inv
    assert not coords[:, r:].any()
    C = coords[:, :r]
    for i in range(r):
        v = sum(int(C[i, t]) * zeta[t] for t in range(r))
        diff = v - zeta[i]
        if diff.denominator != 1:
            return False
    return True


def twisted_layer_count(poset: LayerPoset, M, content_bools=None) -> IntPoly:
    """Count polynomial of the toric complement twisted by the lattice map M.

    Terms are sign-normalized determinant pencils on stable layers: each
    stable layer contributes a nonnegative count for large q.
    """
    system = poset.system
    M = np.asarray(M, dtype=np.int64)
    perm = system.line_permutation(M)
    if content_bools is None:
        content_bools = poset.content_bool_matrix()
    stable_bits = (content_bools[:, perm] == content_bools).all(axis=1)
    Minv = np.array(mat_inverse_unimodular(M.tolist()), dtype=np.int64)
    n = system.rank
    out = IntPoly()
    eye_cache = {}
    pencil_cache = {}
    for li in np.nonzero(stable_bits)[0]:
        lay = poset.layers[li]
        r = lay.rank
        fd = poset.flat_data[lay.flat]
        if fd is None:
            fd = poset.flat_data[lay.flat] = _flat_lattice_data(system, poset.flats, lay.flat)
        if r and any(lay.zeta):
            if not _zeta_stable(fd, Minv, lay.zeta, r):
                continue
        key = lay.flat
        if key not in pencil_cache:
            Mq = _quotient_action(fd, M, r)
            m = n - r
            if np.array_equal(Mq, np.eye(m, dtype=np.int64)):
                poly = poly_from_roots([1] * m)
            elif np.array_equal(Mq, -np.eye(m, dtype=np.int64)):
                poly = poly_from_roots([-1] * m)
                if poly.coeffs and poly.coeffs[-1] < 0:
                    poly = poly * -1
            else:
                poly = det_pencil(Mq.tolist())
                if poly.coeffs and poly.coeffs[-1] < 0:
                    poly = poly * -1
            pencil_cache[key] = poly
        out = out + pencil_cache[key] * int(lay.mobius)
    return out


# ---------------------------------------------------------------------------
# Purity translation


def purity_traces(count: IntPoly, dim: int) -> list:
    """Graded traces from a count polynomial: trace on H^i is (-1)^i [q^(dim-i)]."""
    out = []
    for i in range(dim + 1):
        out.append((-1) ** i * count.coeff(dim - i))
    return out


def graded_traces_table(polys: list, dim: int, check_identity=None) -> list:
    """Per-degree trace vectors for a family of twisted count polynomials."""
    table = [purity_traces(p, dim) for p in polys]
    per_degree = [[row[i] for row in table] for i in range(dim + 1)]
    if check_identity is not None:
        betti = per_degree_betti = [per_degree[i][check_identity] for i in range(dim + 1)]
        for i, b in enumerate(betti):
            if b < 0:
                raise PosetError("negative Betti number from identity twist")
            for row in table:
                if abs(row[i]) > b:
                    raise PosetError("trace exceeds Betti bound")
    return per_degree


# ---------------------------------------------------------------------------
# Brute-force oracles and good primes


def good_prime(system: RootSystem, kind: str, q: int, torsion_lcm: int = 1) -> bool:
    """Structural goodness: mod-q reduction keeps lines distinct and planes flat.

    For toric arrangements the residue class of q must also fix every
    torsion character appearing in the layer poset, so that all layers are
    stable under the q-power map.
    """
    if q < 2 or not _is_prime_int(q):
        return False
    P = system.pos_roots % q
    L = system.num_lines
    if (P == 0).all(axis=1).any():
        return False
    for a in range(L):
        for b in range(a + 1, L):
            m = np.array([P[a], P[b]], dtype=np.int64)
            if _rank_mod(m, q) != 2 and system.rank >= 2:
                return False
    if kind == "toric" and (q - 1) % torsion_lcm != 0:
        return False
    return True


def _is_prime_int(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _rank_mod(M, q):
    A = (np.array(M, dtype=np.int64) % q).tolist()
    rows = len(A)
    cols = len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] % q), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], q - 2, q)
        A[r] = [(x * inv) % q for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                A[i] = [(x - A[i][c] * y) % q for x, y in zip(A[i], A[r])]
        r += 1
    return r


def brute_force_twisted_count(kind: str, system: RootSystem, M, q: int,
                              max_points: int = 50_000_000,
                              torsion_lcm: int = 1) -> int:
    """Enumerate fixed points of (twist o q-power) off the arrangement.

    Toric: the fixed subgroup is Z^n/(q*M^{-1} - 1)Z^n via Smith form, and
    each root character is tested as a rational residue.  Linear: the fixed
    points form an F_q-structure computed from the semilinear system.
    """
    if not good_prime(system, kind, q, torsion_lcm):
        raise ValueError(f"{q} is not a good prime for {system.label} {kind}")
    M = np.asarray(M, dtype=np.int64)
    if kind == "toric":
        return _brute_toric(system, M, q, max_points)
    if kind == "linear":
        return _brute_linear(system, M, q, max_points)
    raise ValueError(kind)


def _brute_toric(system, M, q, max_points):
    n = system.rank
    Minv = np.array(mat_inverse_unimodular(M.tolist()), dtype=np.int64)
    A = q * Minv - np.eye(n, dtype=np.int64)
    sf = smith_normal_form(A.tolist())
    d = [sf.D[i][i] for i in range(n)]
    total = 1
    for x in d:
        total *= x
    assert total == abs(bareiss_det(A.tolist()))
    if total > max_points:
        raise ValueError("toric oracle instance exceeds the size bound")
    U = np.array(sf.U, dtype=np.int64)
    W = (U @ system.pos_roots.T)  # rows indexed by smith coordinate
    m = d[-1]
    scale = np.array([m // di for di in d], dtype=np.int64)
    C = (W * scale[:, None]) % m  # (n, L)
    # enumerate tuples t with 0 <= t_i < d_i in chunks
    radix = np.array(d, dtype=np.int64)
    count = 0
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        T = np.empty((len(idx), n), dtype=np.int64)
        rem = idx.copy()
        for i in range(n - 1, -1, -1):
            T[:, i] = rem % radix[i]
            rem //= radix[i]
        vals = (T @ C) % m
        count += int((vals != 0).all(axis=1).sum())
    return count


def _poly_mul_mod(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return out


def _poly_mod(a, mod, q):
    a = list(a)
    dm = len(mod) - 1
    while len(a) > dm:
        c = a[-1] % q
        if c:
            shift = len(a) - 1 - dm
            for i, y in enumerate(mod):
                a[shift + i] = (a[shift + i] - c * y) % q
        a.pop()
    while a and a[-1] % q == 0:
        a.pop()
    return a


def _find_irreducible(q, s, rng):
    """A monic irreducible polynomial of degree s over F_q."""
    if s == 1:
        return [0, 1]
    while True:
        coeffs = [rng.randrange(q) for _ in range(s)] + [1]
        if _poly_is_irreducible(coeffs, q, s):
            return coeffs


def _poly_is_irreducible(mod, q, s):
    def powmod_x(e):
        # x^e mod (mod) by square and multiply over F_q[x]
        result = [1]
        base = [0, 1]
        while e:
            if e & 1:
                result = _poly_mod(_poly_mul_mod(result, base, q), mod, q)
            base = _poly_mod(_poly_mul_mod(base, base, q), mod, q)
            e >>= 1
        return result

    xqs = powmod_x(q ** s)
    if _poly_mod([(a - b) % q for a, b in
                  zip(xqs + [0] * 2, [0, 1] + [0] * max(0, len(xqs) - 0))][:max(len(xqs), 2)], mod, q):
        return False
    for p in set(_prime_factors(s)):
        xqe = powmod_x(q ** (s // p))
        diff = [(a - b) % q for a, b in zip(xqe + [0, 0], [0, 1] + [0] * len(xqe))][:max(len(xqe), 2)]
        if not diff or not any(diff):
            return False
        if len(_poly_gcd(diff, mod, q)) > 1:
            return False
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_gcd(a, b, q):
    a = [x % q for x in a]
    b = [x % q for x in b]
    while any(b):
        a = _poly_divmod_rem(a, b, q)
        a, b = b, a
    while a and a[-1] == 0:
        a.pop()
    return a if a else [0]


def _poly_divmod_rem(a, b, q):
    a = list(a)
    while a and a[-1] % q == 0:
        a.pop()
    bb = list(b)
    while bb and bb[-1] % q == 0:
        bb.pop()
    inv = pow(bb[-1], q - 2, q)
    while len(a) >= len(bb) and any(a):
        c = (a[-1] * inv) % q
        shift = len(a) - len(bb)
        for i, y in enumerate(bb):
            a[shift + i] = (a[shift + i] - c * y) % q
        while a and a[-1] % q == 0:
            a.pop()
    return a


def _brute_linear(system, M, q, max_points):
    import random
    n = system.rank
    if q ** n > max_points:
        raise ValueError("linear oracle instance exceeds the size bound")
    order = 1
    acc = M.copy()
    eye = np.eye(n, dtype=np.int64)
    while not np.array_equal(acc, eye):
        acc = acc @ M
        order += 1
        assert order <= 1000
    s = order
    if s == 1:
        # fixed field is F_q^n directly
        pts = _all_vectors(q, n, max_points)
        vals = (pts @ (system.pos_roots.T % q)) % q
        return int((vals != 0).all(axis=1).sum())
    rng = random.Random(12345)
    mod = _find_irreducible(q, s, rng)
    # Frobenius matrix on F_{q^s} over F_q in the power basis
    frob = np.zeros((s, s), dtype=np.int64)
    for i in range(s):
        # xi^(i*q) mod (mod)
        e = i * q
        col = [1]
        base = [0, 1]
        ee = e
        while ee:
            if ee & 1:
                col = _poly_mod(_poly_mul_mod(col, base, q), mod, q)
            base = _poly_mod(_poly_mul_mod(base, base, q), mod, q)
            ee >>= 1
        col = col + [0] * (s - len(col))
        frob[:, i] = col[:s]
    # L(x) = M ( x^(q) ): block matrix over F_q of size n*s
    big = np.zeros((n * s, n * s), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if M[a, b]:
                big[a * s:(a + 1) * s, b * s:(b + 1) * s] = (M[a, b] * frob) % q
    ker = _nullspace_mod((big - np.eye(n * s, dtype=np.int64)) % q, q)
    assert len(ker) == n, "twisted fixed space has wrong dimension"
    basis = np.array(ker, dtype=np.int64)  # (n, n*s)
    # evaluate every root form on every basis vector, in F_{q^s}
    root_vals = np.zeros((n, system.num_lines, s), dtype=np.int64)
    for k in range(n):
        x = basis[k].reshape(n, s)
        root_vals[k] = (system.pos_roots % q) @ x % q
    total = q ** n
    count = 0
    chunk = 1 << 14
    flat_vals = root_vals.reshape(n, -1)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        T = np.empty((len(idx), n), dtype=np.int64)
        rem = idx.copy()
        for i in range(n - 1, -1, -1):
            T[:, i] = rem % q
            rem //= q
        vals = (T @ flat_vals) % q
        vals = vals.reshape(len(idx), system.num_lines, s)
        nonzero = vals.any(axis=2)
        count += int(nonzero.all(axis=1).sum())
    return count


def _all_vectors(q, n, max_points):
    total = q ** n
    assert total <= max_points
    idx = np.arange(total, dtype=np.int64)
    T = np.empty((total, n), dtype=np.int64)
    rem = idx.copy()
    for i in range(n - 1, -1, -1):
        T[:, i] = rem % q
        rem //= q
    return T


def _nullspace_mod(M, q):
    A = (np.array(M, dtype=np.int64) % q).tolist()
    rows = len(A)
    cols = len(A[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] % q), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], q - 2, q)
        A[r] = [(x * inv) % q for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                A[i] = [(x - A[i][c] * y) % q for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i][f]) % q
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# Genus-zero configuration counts


def _closed_point_count(d: int) -> IntPoly:
    """Number of degree-d closed points of the projective line, exactly."""
    acc = IntPoly()
    for e in _divisors(d):
        mu = _moebius_int(d // e)
        if mu:
            acc = acc + IntPoly([1] + [0] * (e - 1) + [1]) * mu
    coeffs = [Fraction(c, d) for c in acc.coeffs]
    return IntPoly(coeffs)


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _moebius_int(n):
    out = 1
    for p in set(_prime_factors(n)):
        if n % (p * p) == 0:
            return 0
        out = -out
    return out


def m0n_twisted_count(cycle_type, n: int) -> IntPoly:
    """Count of configurations of n ordered points on the line twisted by a
    permutation of the given cycle type, divided by the automorphisms of the
    line; a polynomial of degree n - 3."""
    assert sum(cycle_type) == n
    mults = {}
    for d in cycle_type:
        mults[d] = mults.get(d, 0) + 1
    num = IntPoly.const(1)
    for d, m in mults.items():
        B = _closed_point_count(d)
        for t in range(m):
            num = num * (B - t)
        num = num * (d ** m)
    den = IntPoly((0, -1, 0, 1))  # q^3 - q
    try:
        out = num.exact_div(den)
    except ArithmeticError as exc:
        raise PosetError("configuration count is not polynomial") from exc
    out = out.as_int_poly()
    if out.degree != n - 3:
        raise PosetError("configuration count has wrong degree")
    return out
