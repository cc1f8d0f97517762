"""Root systems, Weyl groups as integer lattice automorphisms, and embeddings.

All root systems are realized in the simple-root basis with the (symmetric)
Cartan matrix as Gram form, so every Weyl element is an integer matrix and
all arithmetic is exact.  Large groups are enumerated with vectorized
breadth-first closure; W(E7) is never stored as matrices en masse, only its
compact (mod-2 image, determinant) keys plus one cached matrix witness per
rotation-class.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import bits
from .lattice import bareiss_det

_EDGES = {
    "A1": [],
    "A2": [(0, 1)],
    "A3": [(0, 1), (1, 2)],
    "E6": [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)],
    "E7": [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)],
}

_RANK = {"A1": 1, "A2": 2, "A3": 3, "E6": 6, "E7": 7}
_NUM_ROOTS = {"A1": 2, "A2": 6, "A3": 12, "E6": 72, "E7": 126}

WEYL_ORDERS = {"A1": 2, "A2": 6, "A3": 24, "E6": 51840, "E7": 2903040}
SP6_ORDER = 1451520
S8_ORDER = 40320

EXPONENTS = {"E6": (1, 4, 5, 7, 8, 11), "E7": (1, 5, 7, 9, 11, 13, 17)}


def cartan_matrix(label: str) -> np.ndarray:
    n = _RANK[label]
    C = 2 * np.eye(n, dtype=np.int64)
    for i, j in _EDGES[label]:
        C[i, j] = C[j, i] = -1
    return C


class RootSystem:
    """A simply-laced root system in the simple-root basis."""

    def __init__(self, label: str):
        if label not in _RANK:
            raise ValueError(f"unsupported root system label: {label!r}")
        self.label = label
        self.rank = _RANK[label]
        self.cartan = cartan_matrix(label)
        self.gram = self.cartan
        self.simple_reflections = [self._reflection(i) for i in range(self.rank)]
        self.roots = self._generate_roots()
        pos = [r for r in self.roots if next(x for x in r if x) > 0]
        self.pos_roots = np.array(sorted(pos), dtype=np.int64)
        self.num_lines = len(pos)
        self._line_of = {}
        for idx, r in enumerate(map(tuple, self.pos_roots)):
            self._line_of[r] = (idx, 1)
            self._line_of[tuple(-x for x in r)] = (idx, -1)
        assert len(self.roots) == _NUM_ROOTS[label]
        assert 2 * self.num_lines == len(self.roots)
        # Every root has Gram-square 2 and the root set is negation-closed.
        P = self.pos_roots
        assert (np.einsum("ri,ij,rj->r", P, self.gram, P) == 2).all()

    def _reflection(self, i: int) -> np.ndarray:
        n = self.rank
        M = np.eye(n, dtype=np.int64)
        M[i, :] -= self.cartan[i, :]
        return M

    def _generate_roots(self):
        frontier = {tuple(int(x) for x in row) for row in np.eye(self.rank, dtype=np.int64)}
        seen = set(frontier)
        while frontier:
            nxt = set()
            for r in frontier:
                v = np.array(r, dtype=np.int64)
                for s in self.simple_reflections:
                    img = tuple(int(x) for x in s @ v)
                    if img not in seen:
                        seen.add(img)
                        nxt.add(img)
            frontier = nxt
        seen |= {tuple(-x for x in r) for r in seen}
        return sorted(seen)

    def line_permutation(self, M) -> np.ndarray:
        """Permutation induced on the positive-root lines by a lattice map."""
        M = np.asarray(M, dtype=np.int64)
        perm = np.empty(self.num_lines, dtype=np.int64)
        for idx in range(self.num_lines):
            img = tuple(int(x) for x in M @ self.pos_roots[idx])
            entry = self._line_of.get(img)
            if entry is None:
                raise ValueError("matrix does not preserve the root set up to sign")
            perm[idx] = entry[0]
        return perm

    def preserves_structure(self, M) -> bool:
        M = np.asarray(M, dtype=np.int64)
        if not np.array_equal(M.T @ self.gram @ M, self.gram):
            return False
        try:
            self.line_permutation(M)
        except ValueError:
            return False
        return True


def build_root_system(label: str) -> RootSystem:
    return RootSystem(label)


class GroupEnumerationError(RuntimeError):
    pass


def _void_view(arr2d: np.ndarray) -> np.ndarray:
    arr2d = np.ascontiguousarray(arr2d)
    return arr2d.view(np.dtype((np.void, arr2d.dtype.itemsize * arr2d.shape[1]))).ravel()


class IntMatrixStore:
    """Full enumeration of a finite group of integer matrices.

    Elements are kept as an (N, n, n) int16 array sorted by byte key, so
    membership and class sweeps are vectorized.
    """

    def __init__(self, elements: np.ndarray, gens: np.ndarray):
        order = np.argsort(_void_view(elements.reshape(len(elements), -1)))
        self.elements = np.ascontiguousarray(elements[order])
        self._keys = _void_view(self.elements.reshape(len(elements), -1))
        self.gens = gens
        self.n = elements.shape[1]
        self.order = len(elements)
        self.identity_index = self.locate(np.eye(self.n, dtype=np.int16))

    @classmethod
    def from_generators(cls, gens, max_size=10_000_000, mode="full"):
        gens = np.array(gens, dtype=np.int16)
        n = gens.shape[1]
        eye = np.eye(n, dtype=np.int16)[None]
        acc = eye.reshape(1, n * n).copy()
        acc_keys = _void_view(acc)
        frontier = eye
        while len(frontier):
            cands = np.einsum("fij,gjk->fgik", frontier.astype(np.int32),
                              gens.astype(np.int32)).reshape(-1, n, n)
            assert np.abs(cands).max() < 30000, "entry growth beyond int16 guard"
            cands = cands.astype(np.int16).reshape(-1, n * n)
            ckeys = _void_view(cands)
            uniq, idx = np.unique(ckeys, return_index=True)
            pos = np.searchsorted(acc_keys, uniq)
            pos = np.clip(pos, 0, len(acc_keys) - 1)
            fresh = uniq != acc_keys[pos]
            new_rows = cands[idx[fresh]]
            if len(acc) + len(new_rows) > max_size:
                raise GroupEnumerationError("group enumeration exceeded the configured bound")
            if len(new_rows) == 0:
                break
            acc = np.concatenate([acc, new_rows])
            order = np.argsort(_void_view(acc))
            acc = np.ascontiguousarray(acc[order])
            acc_keys = _void_view(acc)
            frontier = new_rows.reshape(-1, n, n)
        elements = acc.reshape(-1, n, n)
        if mode == "rotation_only":
            dets = np.round(np.linalg.det(elements.astype(np.float64))).astype(np.int64)
            elements = elements[dets == 1]
        return cls(elements, gens)

    def locate(self, M) -> int:
        flat = np.ascontiguousarray(np.asarray(M, dtype=np.int16).reshape(1, -1))
        key = _void_view(flat)[0]
        i = int(np.searchsorted(self._keys, key))
        if i >= len(self._keys) or self._keys[i] != key:
            raise KeyError("element not in store")
        return i

    def locate_batch(self, Ms: np.ndarray) -> np.ndarray:
        flat = np.ascontiguousarray(Ms.astype(np.int16).reshape(len(Ms), -1))
        keys = _void_view(flat)
        pos = np.searchsorted(self._keys, keys)
        pos = np.clip(pos, 0, len(self._keys) - 1)
        if not (self._keys[pos] == keys).all():
            raise KeyError("batch contains elements outside the store")
        return pos

    def matrix(self, i: int) -> np.ndarray:
        return self.elements[i].astype(np.int64)


def enumerate_group(gens, mode="full", max_size=10_000_000) -> IntMatrixStore:
    """Closure of integer-matrix generators under multiplication."""
    assert mode in ("full", "rotation_only")
    return IntMatrixStore.from_generators(gens, max_size=max_size, mode=mode)


def minus_identity_membership(store: IntMatrixStore) -> bool:
    try:
        store.locate(-np.eye(store.n, dtype=np.int16))
        return True
    except KeyError:
        return False


# ---------------------------------------------------------------------------
# The mod-2 symplectic reduction of W(E7)


class SymplecticReduction:
    """Reduction of E7-lattice automorphisms to 6x6 symplectic matrices over F2.

    The mod-2 Gram form on the E7 lattice has a one-dimensional radical; the
    quotient carries a nondegenerate alternating form.  The kernel of the
    induced map on W(E7) is exactly {+I, -I}.
    """

    def __init__(self, system: RootSystem):
        assert system.label == "E7"
        self.system = system
        C2 = (system.gram % 2).astype(np.uint8)
        rad = bits.f2_nullspace(C2)
        assert len(rad) == 1, "mod-2 radical must be one-dimensional"
        self.radical = rad[0]
        self.drop = int(np.nonzero(self.radical)[0][0])
        keep = [i for i in range(7) if i != self.drop]
        self.keep = keep
        # Section: embed with 0 at the dropped coordinate.  Projection:
        # first add x[drop] * radical to kill the dropped coordinate.
        self.form = C2[np.ix_(keep, keep)]
        assert bits.f2_rank(self.form) == 6
        assert not self.form.diagonal().any()

    def reduce_matrix(self, M) -> np.ndarray:
        M2 = (np.asarray(M, dtype=np.int64) % 2).astype(np.uint8)
        cols = M2[:, self.keep].copy()
        # project each column: add col[drop] * radical, then drop the coordinate
        fix = np.outer(self.radical, cols[self.drop, :])
        cols = (cols ^ fix)[self.keep, :]
        return cols % 2

    def key_of(self, M) -> int:
        return bits.pack_matrix(self.reduce_matrix(M))

    def reduce_batch(self, Ms: np.ndarray) -> np.ndarray:
        """Keys of a batch of integer matrices."""
        M2 = (Ms % 2).astype(np.uint8)
        cols = M2[:, :, self.keep]
        fix = self.radical[None, :, None] * cols[:, self.drop, :][:, None, :]
        cols = (cols ^ fix)[:, self.keep, :] & 1
        # pack rows: row i of the reduced matrix is cols[:, i, :]
        keys = np.zeros(len(Ms), dtype=np.uint64)
        for i in range(6):
            row = np.zeros(len(Ms), dtype=np.uint64)
            for j in range(6):
                row |= cols[:, i, j].astype(np.uint64) << np.uint64(j)
            keys |= row << np.uint64(6 * i)
        return keys

    def check_symplectic(self, key: int) -> bool:
        m = bits.unpack_matrix(key, 6)
        return np.array_equal((m.T @ self.form @ m) % 2, self.form)


class BitGroupStore:
    """Enumerated group of n x n F2 matrices, elements as sorted uint64 keys."""

    def __init__(self, n: int, keys: np.ndarray, gen_keys):
        self.n = n
        self.keys = np.sort(np.asarray(keys, dtype=np.uint64))
        assert len(np.unique(self.keys)) == len(self.keys)
        self.gen_keys = [int(k) for k in gen_keys]
        self.order = len(self.keys)
        self.identity_key = bits.pack_matrix(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_generators(cls, n: int, gen_matrices, max_size=4_000_000):
        gens = [np.asarray(g, dtype=np.uint8) % 2 for g in gen_matrices]
        tables = [bits.right_mul_table(g) for g in gens]
        ident = bits.pack_matrix(np.eye(n, dtype=np.uint8))
        acc = np.array([ident], dtype=np.uint64)
        frontier = acc
        while len(frontier):
            rows = bits.keys_to_rows(frontier, n)
            cand = []
            for T in tables:
                cand.append(bits.rows_to_keys(bits.rows_right_mul(rows, T), n))
            cand = np.unique(np.concatenate(cand))
            pos = np.clip(np.searchsorted(acc, cand), 0, len(acc) - 1)
            new = cand[acc[pos] != cand]
            if len(acc) + len(new) > max_size:
                raise GroupEnumerationError("bit-group enumeration exceeded bound")
            if len(new) == 0:
                break
            acc = np.sort(np.concatenate([acc, new]))
            frontier = new
        return cls(n, acc, [bits.pack_matrix(g) for g in gens])

    def locate_keys(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.uint64)
        pos = np.clip(np.searchsorted(self.keys, keys), 0, self.order - 1)
        if not (self.keys[pos] == keys).all():
            raise KeyError("key outside the group store")
        return pos

    def matrix(self, key: int) -> np.ndarray:
        return bits.unpack_matrix(int(key), self.n)

    def right_mul_keys(self, keys: np.ndarray, z_key: int) -> np.ndarray:
        rows = bits.keys_to_rows(keys, self.n)
        T = bits.right_mul_table(bits.unpack_matrix(z_key, self.n))
        return bits.rows_to_keys(bits.rows_right_mul(rows, T), self.n)

    def left_mul_keys(self, z_key: int, keys: np.ndarray) -> np.ndarray:
        rows = bits.keys_to_rows(keys, self.n)
        G = bits.unpack_matrix(z_key, self.n)
        return bits.rows_to_keys(bits.rows_left_mul(G, rows), self.n)

    def conjugate_keys(self, g_key: int, keys: np.ndarray) -> np.ndarray:
        ginv = bits.f2_inverse(bits.unpack_matrix(g_key, self.n))
        rows = bits.keys_to_rows(keys, self.n)
        rows = bits.rows_left_mul(bits.unpack_matrix(g_key, self.n), rows)
        rows = bits.rows_right_mul(rows, bits.right_mul_table(ginv))
        return bits.rows_to_keys(rows, self.n)

    def inverse_key(self, key: int) -> int:
        return bits.pack_matrix(bits.f2_inverse(bits.unpack_matrix(int(key), self.n)))

    def element_order(self, key: int) -> int:
        m = bits.unpack_matrix(int(key), self.n)
        acc = m.copy()
        k = 1
        eye = np.eye(self.n, dtype=np.uint8)
        while not np.array_equal(acc, eye):
            acc = bits.f2_mat_mul(acc, m)
            k += 1
            assert k <= 64
        return k


def build_sp6_store(system: RootSystem, reduction: SymplecticReduction) -> BitGroupStore:
    """Enumerate Sp(6,F2) as the mod-2 images of the E7 simple reflections."""
    gens = [reduction.reduce_matrix(s) for s in system.simple_reflections]
    store = BitGroupStore.from_generators(6, gens)
    assert store.order == SP6_ORDER, f"Sp(6,F2) enumeration gave {store.order}"
    for k in store.gen_keys:
        assert reduction.check_symplectic(k)
    return store


class WeylE7Scan:
    """Streaming closure of W(E7) with compact-key bookkeeping.

    Matrices are deduplicated exactly (so the order 2903040 is derived, not
    assumed) but only the frontier is held; what survives is the set of
    (mod-2 key, det) compact keys, a det=+1 matrix witness for every
    requested class id, and summary invariants.
    """

    def __init__(self, system: RootSystem, reduction: SymplecticReduction,
                 class_of_keys=None, num_classes=0, max_size=4_000_000):
        gens = np.stack([s.astype(np.int32) for s in system.simple_reflections])
        n = system.rank
        eye = np.eye(n, dtype=np.int16).reshape(1, n * n)
        acc = eye.copy()
        acc_keys = _void_view(acc)
        compact = None
        witnesses = {}
        if class_of_keys is not None:
            ident_cls = int(class_of_keys(reduction.reduce_batch(
                np.eye(n, dtype=np.int16)[None]))[0])
            witnesses[ident_cls] = np.eye(n, dtype=np.int64)
        frontier = eye.reshape(1, n, n)
        max_abs = 1
        while len(frontier):
            cands = np.einsum("fij,gjk->gfik", frontier.astype(np.int32), gens)
            cands = cands.reshape(-1, n, n)
            m = int(np.abs(cands).max())
            max_abs = max(max_abs, m)
            assert m < 30000
            flat = cands.astype(np.int16).reshape(-1, n * n)
            ckeys = _void_view(flat)
            uniq, first = np.unique(ckeys, return_index=True)
            pos = np.clip(np.searchsorted(acc_keys, uniq), 0, len(acc_keys) - 1)
            fresh = uniq != acc_keys[pos]
            new_flat = flat[first[fresh]]
            if len(acc) + len(new_flat) > max_size:
                raise GroupEnumerationError("W(E7) enumeration exceeded bound")
            if len(new_flat) == 0:
                break
            new_mats = new_flat.reshape(-1, n, n)
            spkeys = reduction.reduce_batch(new_mats)
            dets = np.round(np.linalg.det(new_mats.astype(np.float64))).astype(np.int64)
            assert set(np.unique(dets)) <= {-1, 1}
            ck = (spkeys << np.uint64(1)) | (dets == 1).astype(np.uint64)
            compact = ck if compact is None else np.concatenate([compact, ck])
            if class_of_keys is not None:
                plus = np.nonzero(dets == 1)[0]
                if len(plus) and len(witnesses) < num_classes:
                    cls = class_of_keys(spkeys[plus])
                    for j, c in zip(plus, cls):
                        c = int(c)
                        if c not in witnesses:
                            witnesses[c] = new_mats[j].astype(np.int64)
            acc = np.concatenate([acc, new_flat])
            order = np.argsort(_void_view(acc))
            acc = np.ascontiguousarray(acc[order])
            acc_keys = _void_view(acc)
            frontier = new_mats
        self.order = len(acc)
        ident_ck = (reduction.reduce_batch(np.eye(n, dtype=np.int16)[None]) << np.uint64(1)) | np.uint64(1)
        compact = np.concatenate([compact, ident_ck])
        self.compact_keys = np.sort(compact)
        self.compact_injective = len(np.unique(self.compact_keys)) == self.order
        self.rotation_order = int((self.compact_keys & np.uint64(1)).sum())
        minus_ck = int(ident_ck[0]) ^ 1  # same mod-2 key, det flipped
        i = int(np.searchsorted(self.compact_keys, np.uint64(minus_ck)))
        self.minus_identity_present = i < len(self.compact_keys) and \
            int(self.compact_keys[i]) == minus_ck
        self.witnesses = witnesses
        self.max_abs_entry = max_abs


# ---------------------------------------------------------------------------
# Embeddings


def parabolic_e6_in_e7(e7: RootSystem, node: int = 6):
    """The E6 subsystem obtained by deleting one end node of the E7 diagram.

    Returns (e6_system, embedded_generators) where the generators are the
    corresponding simple reflections of W(E7) (7x7 matrices) and the E6
    system uses the matching internal numbering.
    """
    keep = [i for i in range(7) if i != node]
    sub_cartan = e7.cartan[np.ix_(keep, keep)]
    e6 = build_root_system("E6")
    if not np.array_equal(sub_cartan, e6.cartan):
        raise ValueError("deleted node does not leave an E6 subdiagram")
    gens = [e7.simple_reflections[i] for i in keep]
    return e6, gens


def restrict_to_block(M: np.ndarray, keep) -> np.ndarray:
    """Restrict a lattice map to the sublattice spanned by the kept coordinates."""
    M = np.asarray(M, dtype=np.int64)
    other = [i for i in range(M.shape[0]) if i not in keep]
    assert not M[np.ix_(other, keep)].any(), "map does not preserve the sublattice"
    return M[np.ix_(keep, keep)]


def find_inversion_witness(e7: RootSystem, e6_nodes) -> np.ndarray:
    """An element of W(E7) stabilizing the E6 sublattice and acting on it as -I.

    -I lies in W(E7) and restricts to -I on every sublattice; it is verified
    and returned.  Failure would invalidate the inversion-extended pipeline,
    so the checks are hard assertions.
    """
    sigma = -np.eye(7, dtype=np.int64)
    assert e7.preserves_structure(sigma)
    res = restrict_to_block(sigma, list(e6_nodes))
    assert np.array_equal(res, -np.eye(len(e6_nodes), dtype=np.int64))
    assert np.array_equal(sigma @ sigma, np.eye(7, dtype=np.int64))
    return sigma


def s8_matrix_on_quotient(perm) -> np.ndarray:
    """Action of a permutation of 8 sheets on even subsets mod complement, F2^6.

    Basis vectors are v_i = e_i + e_{i+1} (i = 0..5); v_6 is congruent to
    v_0 + v_2 + v_4.  The bilinear form |S ∩ T| mod 2 is preserved.
    """
    def interval(a, b):  # e_a + e_b as a sum of v_a..v_{b-1}, a < b
        v = np.zeros(7, dtype=np.uint8)
        v[a:b] ^= 1
        return v

    cols = []
    for i in range(6):
        a, b = perm[i], perm[i + 1]
        if a > b:
            a, b = b, a
        v = interval(a, b)
        if v[6]:
            v = v.copy()
            v[6] = 0
            v[0] ^= 1
            v[2] ^= 1
            v[4] ^= 1
        cols.append(v[:6])
    return np.array(cols, dtype=np.uint8).T


def s8_symplectic_embedding(sp_store: BitGroupStore, reduction: SymplecticReduction):
    """Conjugated embedding of S8 into the Sp(6,F2) store.

    Returns a function mapping a permutation tuple to a store key.  The
    intermediate matrices preserve the intersection-parity form; a change of
    symplectic basis carries them into the store's form.
    """
    B = np.zeros((6, 6), dtype=np.uint8)
    for i in range(6):
        for j in range(6):
            B[i, j] = 1 if abs(i - j) == 1 else 0
    U_b = bits.symplectic_basis(B)
    U_j = bits.symplectic_basis(reduction.form)
    P_b = U_b.T
    P_j = U_j.T
    phi = bits.f2_mat_mul(P_j, bits.f2_inverse(P_b))
    phi_inv = bits.f2_inverse(phi)

    def embed(perm) -> int:
        m = s8_matrix_on_quotient(perm)
        g = bits.f2_mat_mul(bits.f2_mat_mul(phi, m), phi_inv)
        key = bits.pack_matrix(g)
        sp_store.locate_keys(np.array([key], dtype=np.uint64))
        return key

    return embed


def weyl_order_formula(label: str) -> int:
    return WEYL_ORDERS[label]
