"""Conjugacy classes, character tables, and the class-function calculus.

Tables are computed by eigenvector splitting of class-multiplication
matrices over a prime field and lifted to exact integers; symmetric-group
tables come independently from the Murnaghan-Nakayama rule.  All downstream
algebra (induce, restrict, invariants, decompose) is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bits
from .rootsys import BitGroupStore, IntMatrixStore


class InconsistencyError(RuntimeError):
    """A class function failed an exactness or nonnegativity gate."""


# ---------------------------------------------------------------------------
# Conjugacy backends


class BitConjugacy:
    """Conjugacy data for a BitGroupStore, vectorized over packed keys."""

    def __init__(self, store: BitGroupStore):
        self.store = store
        self.order = store.order
        cls = np.full(store.order, -1, dtype=np.int16)
        reps = []
        while True:
            un = np.nonzero(cls < 0)[0]
            if not len(un):
                break
            cid = len(reps)
            seed = store.keys[un[0]]
            reps.append(int(seed))
            cls[un[0]] = cid
            frontier = np.array([seed], dtype=np.uint64)
            while len(frontier):
                conj = [store.conjugate_keys(g, frontier) for g in store.gen_keys]
                cand = np.unique(np.concatenate(conj))
                idx = store.locate_keys(cand)
                fresh = cls[idx] < 0
                cls[idx[fresh]] = cid
                frontier = cand[fresh]
        sizes = np.bincount(cls, minlength=len(reps))
        orders = [store.element_order(r) for r in reps]
        # canonical class order: element order, then size, then minimal key
        perm = sorted(range(len(reps)), key=lambda i: (orders[i], int(sizes[i]), reps[i]))
        relabel = np.empty(len(reps), dtype=np.int16)
        for new, old in enumerate(perm):
            relabel[old] = new
        self.class_id = relabel[cls]
        self.reps = [reps[i] for i in perm]
        self.sizes = [int(sizes[i]) for i in perm]
        self.orders = [orders[i] for i in perm]
        self.n_classes = len(self.reps)
        self.identity_class = self.class_of_keys(
            np.array([store.identity_key], dtype=np.uint64))[0]
        inv = []
        for r in self.reps:
            ik = store.inverse_key(r)
            inv.append(int(self.class_of_keys(np.array([ik], dtype=np.uint64))[0]))
        self.inverse_class = inv
        assert sum(self.sizes) == self.order
        assert all(self.order % s == 0 for s in self.sizes)

    def class_of_keys(self, keys: np.ndarray) -> np.ndarray:
        return self.class_id[self.store.locate_keys(keys)]

    def class_elements(self, j: int) -> np.ndarray:
        return self.store.keys[self.class_id == j]

    def sweep(self, j_star: int, z_rep) -> np.ndarray:
        prods = self.store.right_mul_keys(self.class_elements(j_star), z_rep)
        return np.bincount(self.class_of_keys(prods), minlength=self.n_classes)


class PermConjugacy:
    """Conjugacy data for the full symmetric group on n <= 8 points."""

    def __init__(self, n: int):
        self.n = n
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.uint8)
        keys = np.zeros(len(perms), dtype=np.uint64)
        for i in range(n):
            keys |= perms[:, i].astype(np.uint64) << np.uint64(3 * i)
        order = np.argsort(keys)
        self.elements = perms[order]
        self.keys = keys[order]
        self.order = len(perms)
        types = [self.cycle_type(p) for p in self.elements]
        uniq = sorted(set(types))
        tmap = {t: i for i, t in enumerate(uniq)}
        cls = np.array([tmap[t] for t in types], dtype=np.int16)
        sizes = np.bincount(cls)
        reps = [int(self.keys[np.nonzero(cls == i)[0][0]]) for i in range(len(uniq))]
        orders = [int(np.lcm.reduce(np.array(t))) for t in uniq]
        perm = sorted(range(len(uniq)), key=lambda i: (orders[i], int(sizes[i]), reps[i]))
        relabel = np.empty(len(uniq), dtype=np.int16)
        for new, old in enumerate(perm):
            relabel[old] = new
        self.class_id = relabel[cls]
        self.reps = [reps[i] for i in perm]
        self.sizes = [int(sizes[i]) for i in perm]
        self.orders = [orders[i] for i in perm]
        self.cycle_types = [uniq[i] for i in perm]
        self.n_classes = len(uniq)
        ident = tuple(range(n))
        self.identity_class = int(self.class_id[self.locate(np.array([self.key_of(ident)], dtype=np.uint64))[0]])
        self.inverse_class = list(range(self.n_classes))  # cycle type is inversion-invariant
        assert sum(self.sizes) == self.order

    @staticmethod
    def cycle_type(p) -> tuple:
        seen = [False] * len(p)
        out = []
        for i in range(len(p)):
            if not seen[i]:
                ln = 0
                j = i
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    ln += 1
                out.append(ln)
        return tuple(sorted(out, reverse=True))

    def key_of(self, perm) -> int:
        k = 0
        for i, v in enumerate(perm):
            k |= int(v) << (3 * i)
        return k

    def perm_of_key(self, key: int) -> tuple:
        return tuple((int(key) >> (3 * i)) & 7 for i in range(self.n))

    def locate(self, keys: np.ndarray) -> np.ndarray:
        pos = np.clip(np.searchsorted(self.keys, keys), 0, self.order - 1)
        assert (self.keys[pos] == keys).all()
        return pos

    def class_of_keys(self, keys: np.ndarray) -> np.ndarray:
        return self.class_id[self.locate(keys)]

    def class_elements(self, j: int) -> np.ndarray:
        return self.elements[self.class_id == j]

    def sweep(self, j_star: int, z_rep) -> np.ndarray:
        z = np.array(self.perm_of_key(z_rep), dtype=np.uint8)
        prods = self.class_elements(j_star)[:, z]
        keys = np.zeros(len(prods), dtype=np.uint64)
        for i in range(self.n):
            keys |= prods[:, i].astype(np.uint64) << np.uint64(3 * i)
        return np.bincount(self.class_of_keys(keys), minlength=self.n_classes)


class MatConjugacy:
    """Conjugacy data for an IntMatrixStore (exact integer matrices)."""

    def __init__(self, store: IntMatrixStore):
        self.store = store
        self.order = store.order
        n = store.n
        cls = np.full(store.order, -1, dtype=np.int16)
        reps = []
        gens = [g.astype(np.int64) for g in store.gens]
        from .lattice import mat_inverse_unimodular
        ginvs = [np.array(mat_inverse_unimodular(g.tolist()), dtype=np.int64) for g in gens]
        while True:
            un = np.nonzero(cls < 0)[0]
            if not len(un):
                break
            cid = len(reps)
            reps.append(int(un[0]))
            cls[un[0]] = cid
            frontier = store.elements[un[0]][None].astype(np.int64)
            while len(frontier):
                cand = []
                for g, gi in zip(gens, ginvs):
                    cand.append(np.einsum("ij,fjk,kl->fil", g, frontier, gi))
                cand = np.concatenate(cand)
                idx = np.unique(store.locate_batch(cand))
                fresh = cls[idx] < 0
                cls[idx[fresh]] = cid
                frontier = store.elements[idx[fresh]].astype(np.int64)
        sizes = np.bincount(cls, minlength=len(reps))
        orders = [self._element_order(store.matrix(r)) for r in reps]
        perm = sorted(range(len(reps)), key=lambda i: (orders[i], int(sizes[i]), reps[i]))
        relabel = np.empty(len(reps), dtype=np.int16)
        for new, old in enumerate(perm):
            relabel[old] = new
        self.class_id = relabel[cls]
        self.rep_indices = [reps[i] for i in perm]
        self.sizes = [int(sizes[i]) for i in perm]
        self.orders = [orders[i] for i in perm]
        self.n_classes = len(reps)
        self.identity_class = int(self.class_id[store.identity_index])
        from .lattice import mat_inverse_unimodular as inv_u
        self.inverse_class = [
            int(self.class_id[store.locate(np.array(inv_u(store.matrix(r).tolist())))])
            for r in self.rep_indices
        ]
        self.reps = [int(r) for r in self.rep_indices]
        assert sum(self.sizes) == self.order

    @staticmethod
    def _element_order(M: np.ndarray) -> int:
        acc = M.copy()
        eye = np.eye(len(M), dtype=np.int64)
        k = 1
        while not np.array_equal(acc, eye):
            acc = acc @ M
            k += 1
            assert k <= 10_000
        return k

    def rep_matrix(self, j: int) -> np.ndarray:
        return self.store.matrix(self.rep_indices[j])

    def class_of_matrices(self, Ms: np.ndarray) -> np.ndarray:
        return self.class_id[self.store.locate_batch(Ms)]

    def class_elements(self, j: int) -> np.ndarray:
        return self.store.elements[self.class_id == j]

    def sweep(self, j_star: int, z_rep) -> np.ndarray:
        z = self.rep_matrix(z_rep) if isinstance(z_rep, (int, np.integer)) else z_rep
        prods = np.einsum("fij,jk->fik", self.class_elements(j_star).astype(np.int64), z)
        return np.bincount(self.class_of_matrices(prods), minlength=self.n_classes)


def conjugacy_classes(store):
    """Conjugacy data for an enumerated store (dispatch on backend type)."""
    if isinstance(store, BitGroupStore):
        return BitConjugacy(store)
    if isinstance(store, IntMatrixStore):
        return MatConjugacy(store)
    raise TypeError(f"unsupported store type {type(store)!r}")


# ---------------------------------------------------------------------------
# Dixon-style character tables


@dataclass
class CharacterTable:
    conj: object
    rows: tuple          # rows[i][j] = chi_i on class j, exact ints
    labels: tuple        # canonical phi_{d}{letter} labels

    @property
    def dims(self):
        ident = self.conj.identity_class
        return tuple(r[ident] for r in self.rows)

    def row(self, i):
        return self.rows[i]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _choose_prime(exponent: int, min_value: int) -> int:
    p = exponent + 1
    while True:
        if p > min_value and _is_prime(p):
            return p
        p += exponent


def _charpoly_mod(R: np.ndarray, p: int) -> np.ndarray:
    """Characteristic polynomial of R mod p by Newton's identities."""
    d = len(R)
    traces = []
    acc = np.eye(d, dtype=np.int64)
    for _ in range(d):
        acc = (acc @ R) % p
        traces.append(int(np.trace(acc)) % p)
    e = [1]
    for k in range(1, d + 1):
        s = 0
        for i in range(1, k + 1):
            s += ((-1) ** (i - 1)) * e[k - i] * traces[i - 1]
        ek = (s * pow(k, p - 2, p)) % p
        e.append(ek % p)
    # det(xI - R) = x^d - e1 x^{d-1} + e2 x^{d-2} - ...
    coeffs = [(pow(-1, k, p) * e[k]) % p for k in range(d + 1)]
    return np.array(list(reversed(coeffs)), dtype=np.int64)  # lowest degree first


def _poly_roots_mod(coeffs: np.ndarray, p: int) -> list:
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        vals = (vals * xs + int(c)) % p
    return [int(x) for x in np.nonzero(vals == 0)[0]]


def _kernel_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Row basis of the left kernel-free right nullspace of M mod p."""
    M = M % p
    rows, cols = M.shape
    A = M.copy()
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        basis.append(v % p)
    return np.array(basis, dtype=np.int64) if basis else np.zeros((0, cols), dtype=np.int64)


def _solve_mod(S: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Solve X @ S = B mod p for full-row-rank S."""
    d, k = S.shape
    A = np.concatenate([S.T % p, B.T % p], axis=1)  # k x (d + rows(B))
    r = 0
    piv_cols = []
    for c in range(d):
        piv = None
        for i in range(r, k):
            if A[i, c] % p:
                piv = i
                break
        assert piv is not None, "basis not full rank"
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(k):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        piv_cols.append(c)
        r += 1
    assert not (A[r:, d:] % p).any(), "inconsistent restriction system"
    return A[:d, d:].T % p


def dixon_character_table(conj, progress=None) -> CharacterTable:
    """Exact integer character table via class-matrix eigenvector splitting.

    Works modulo a prime p = 1 mod exponent(G) with p bounded below so that
    balanced lifts are unambiguous, then verifies the orthogonality
    relations exactly over Z.
    """
    k = conj.n_classes
    order = conj.order
    exponent = 1
    for o in conj.orders:
        exponent = exponent * o // np.gcd(exponent, o)
    maxdim = int(np.sqrt(order)) + 1
    p = _choose_prime(int(exponent), 2 * maxdim + 1)
    sizes = np.array(conj.sizes, dtype=np.int64)
    ident = conj.identity_class

    subspaces = [np.eye(k, dtype=np.int64)]
    by_size = sorted(range(k), key=lambda j: (conj.sizes[j], j))
    for j in by_size:
        if j == ident:
            continue
        if all(len(S) == 1 for S in subspaces):
            break
        if progress:
            progress(f"class matrix {j} (size {conj.sizes[j]})")
        jstar = conj.inverse_class[j]
        A = np.zeros((k, k), dtype=np.int64)
        for kk in range(k):
            A[:, kk] = conj.sweep(jstar, conj.reps[kk])
        # A[i, kk] = #{(x, y) in C_j x C_i : xy = z_kk}
        A %= p
        new_subs = []
        for S in subspaces:
            if len(S) == 1:
                new_subs.append(S)
                continue
            img = (S @ A.T) % p
            R = _solve_mod(S, img, p)
            roots = _poly_roots_mod(_charpoly_mod(R, p), p)
            split = []
            for lam in roots:
                # rows c @ S with c @ R = lam c, i.e. left eigenvectors of R
                K = _kernel_mod((R.T - lam * np.eye(len(R), dtype=np.int64)) % p, p)
                if len(K):
                    split.append((K @ S) % p)
            assert sum(len(K) for K in split) == len(S), "eigen split lost dimensions"
            new_subs.extend(split)
        subspaces = new_subs
    assert all(len(S) == 1 for S in subspaces), "class matrices failed to split"

    rows = []
    for S in subspaces:
        v = S[0] % p
        assert v[ident] % p, "central character vanishes at the identity"
        v = (v * pow(int(v[ident]), p - 2, p)) % p
        # degree from the orthogonality of central characters
        s = 0
        for j in range(k):
            s += v[j] * v[conj.inverse_class[j]] * pow(int(sizes[j]), p - 2, p)
        s %= p
        rhs = (order * pow(int(s), p - 2, p)) % p
        deg = next((d for d in range(1, maxdim + 1) if (d * d) % p == rhs), None)
        assert deg is not None, "no valid degree lift"
        chi = []
        for j in range(k):
            val = (deg * v[j] * pow(int(sizes[j]), p - 2, p)) % p
            val = (val + p // 2) % p - p // 2
            chi.append(int(val))
        rows.append(tuple(chi))

    _verify_orthogonality(conj, rows)
    rows, labels = _canonical_labels(conj, rows)
    return CharacterTable(conj=conj, rows=tuple(rows), labels=tuple(labels))


def _verify_orthogonality(conj, rows):
    k = conj.n_classes
    order = conj.order
    sizes = conj.sizes
    ident = conj.identity_class
    for r in rows:
        assert r[ident] > 0, "non-positive degree"
    assert sum(r[ident] ** 2 for r in rows) == order
    for a in range(len(rows)):
        for b in range(len(rows)):
            s = sum(sizes[j] * rows[a][j] * rows[b][conj.inverse_class[j]] for j in range(k))
            assert s == (order if a == b else 0), "row orthogonality failed"
    for j1 in range(k):
        for j2 in range(k):
            s = sum(r[j1] * r[conj.inverse_class[j2]] for r in rows)
            want = order // sizes[j1] if j1 == j2 else 0
            assert s == want, "column orthogonality failed"


def _canonical_labels(conj, rows):
    """Order irreducibles by (dim, value row) and attach phi_{d}{letter} labels."""
    ident = conj.identity_class
    ordered = sorted(rows, key=lambda r: (r[ident], r))
    labels = []
    seen = {}
    for r in ordered:
        d = r[ident]
        letter = chr(ord("a") + seen.get(d, 0))
        seen[d] = seen.get(d, 0) + 1
        labels.append(f"phi_{d}{letter}")
    return ordered, labels


# ---------------------------------------------------------------------------
# Murnaghan-Nakayama (symmetric group oracle)


def partitions(n: int):
    """Partitions of n in descending-lex order, each a descending tuple."""
    if n == 0:
        return [()]
    out = []

    def rec(remaining, maxpart, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(remaining, maxpart), 0, -1):
            rec(remaining - part, part, prefix + [part])

    rec(n, n, [])
    return out


def _mn_value(shape: tuple, rho: tuple, _memo={}) -> int:
    """Border-strip recursion in beta-number form.

    Removing a strip of length k corresponds to lowering one beta number
    b -> b - k when b - k is unoccupied; the sign is (-1)^(leg length) with
    leg length the number of beta numbers strictly between b - k and b.
    """
    key = (shape, rho)
    if key in _memo:
        return _memo[key]
    if not rho:
        _memo[key] = 1 if sum(shape) == 0 else 0
        return _memo[key]
    if sum(shape) == 0:
        _memo[key] = 0
        return _memo[key]
    k = rho[0]
    rest = rho[1:]
    m = len(shape)
    beta = [shape[i] + (m - 1 - i) for i in range(m)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        leg = sum(1 for c in beta if nb < c < b)
        new_beta = sorted(bset - {b} | {nb}, reverse=True)
        new_shape = tuple(x - (m - 1 - j) for j, x in enumerate(new_beta))
        new_shape = tuple(v for v in new_shape if v > 0)
        total += (-1) ** leg * _mn_value(new_shape, rest)
    _memo[key] = total
    return total


def murnaghan_nakayama_table(n: int):
    """Character table of S_n from the border-strip recursion.

    Returns (partitions, rows) with rows[i][j] the character of the
    irreducible labeled by partition i at cycle type j, both in
    descending-lex partition order.
    """
    parts = partitions(n)
    rows = []
    for lam in parts:
        rows.append(tuple(_mn_value(lam, rho) for rho in parts))
    return parts, rows


# ---------------------------------------------------------------------------
# Class functions and the induction calculus


@dataclass(frozen=True)
class ClassFunction:
    conj: object
    values: tuple

    def __post_init__(self):
        assert len(self.values) == self.conj.n_classes

    def __add__(self, other):
        assert self.conj is other.conj
        return ClassFunction(self.conj, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other):
        assert self.conj is other.conj
        return ClassFunction(self.conj, tuple(a - b for a, b in zip(self.values, other.values)))

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            assert self.conj is other.conj
            return ClassFunction(self.conj, tuple(a * b for a, b in zip(self.values, other.values)))
        return ClassFunction(self.conj, tuple(a * other for a in self.values))

    @property
    def dim(self):
        return self.values[self.conj.identity_class]


def trivial_character(conj) -> ClassFunction:
    return ClassFunction(conj, (1,) * conj.n_classes)


def zero_function(conj) -> ClassFunction:
    return ClassFunction(conj, (0,) * conj.n_classes)


def class_fusion_check(fusion, sub_conj, big_conj):
    assert len(fusion) == sub_conj.n_classes
    assert all(0 <= f < big_conj.n_classes for f in fusion)
    assert fusion[sub_conj.identity_class] == big_conj.identity_class


def induce(f: ClassFunction, fusion, big_conj) -> ClassFunction:
    """Frobenius induction along a total class-fusion map."""
    H = f.conj
    out = [Fraction(0)] * big_conj.n_classes
    for j, val in enumerate(f.values):
        k = fusion[j]
        cent_g = Fraction(big_conj.order, big_conj.sizes[k])
        cent_h = Fraction(H.order, H.sizes[j])
        out[k] += (cent_g / cent_h) * val
    vals = []
    for x in out:
        x = Fraction(x)
        vals.append(int(x) if x.denominator == 1 else x)
    return ClassFunction(big_conj, tuple(vals))


def restrict(f: ClassFunction, fusion, sub_conj) -> ClassFunction:
    return ClassFunction(sub_conj, tuple(f.values[fusion[j]] for j in range(sub_conj.n_classes)))


def inner_product(f: ClassFunction, g: ClassFunction):
    conj = f.conj
    s = Fraction(0)
    for j in range(conj.n_classes):
        s += Fraction(conj.sizes[j]) * f.values[j] * g.values[conj.inverse_class[j]]
    return s / conj.order


def decompose(f: ClassFunction, table: CharacterTable) -> tuple:
    """Multiplicities of f over the irreducible rows; exact and nonnegative."""
    conj = table.conj
    mults = []
    for row in table.rows:
        chi = ClassFunction(conj, row)
        m = inner_product(f, chi)
        if m.denominator != 1 or m < 0:
            raise InconsistencyError(f"non-character multiplicity {m}")
        mults.append(int(m))
    total = sum(m * row[conj.identity_class] for m, row in zip(mults, table.rows))
    if total != f.dim:
        raise InconsistencyError("dimension mismatch in decomposition")
    return tuple(mults)
