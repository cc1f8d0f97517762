"""Exact integer linear algebra: normal forms, determinants, pencils, polynomials.

Everything here works with arbitrary-precision Python ints (or Fractions at
interpolation boundaries).  Matrices are lists of lists of ints; rows span
lattices.  numpy arrays are accepted and converted at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _to_rows(M):
    """Copy input into a list-of-lists of Python ints."""
    rows = [[int(x) for x in row] for row in M]
    if rows:
        n = len(rows[0])
        assert all(len(r) == n for r in rows), "ragged matrix"
    return rows


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    assert all(len(r) == k for r in A)
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def bareiss_det(M):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = _to_rows(M)
    n = len(A)
    assert n == 0 or len(A[0]) == n, "determinant of a non-square matrix"
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def mat_rank(M):
    """Rank over Q by fraction-free elimination."""
    A = _to_rows(M)
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, rows):
            if A[i][c] != 0:
                a, b = A[r][c], A[i][c]
                A[i] = [a * x - b * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def mat_inverse_rational(A):
    """Exact inverse of a nonsingular integer matrix, as Fraction entries."""
    n = len(A)
    d = bareiss_det(A)
    assert d != 0, "singular matrix"
    # Gauss-Jordan over Fractions; n is small everywhere we use this.
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if M[i][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def mat_inverse_unimodular(A):
    """Exact integer inverse of a unimodular matrix."""
    inv = mat_inverse_rational(A)
    out = []
    for row in inv:
        irow = []
        for x in row:
            assert x.denominator == 1, "matrix is not unimodular"
            irow.append(int(x))
        out.append(irow)
    return out


# ---------------------------------------------------------------------------
# Hermite / Smith normal forms


def hnf(M):
    """Row-style Hermite normal form of the row lattice of M.

    Returns the canonical full-row-rank basis: pivots positive, entries above
    a pivot reduced into [0, pivot).  Zero rows are dropped, so equal row
    lattices give identical output.
    """
    A = [row[:] for row in _to_rows(M) if any(row)]
    if not A:
        return []
    cols = len(A[0])
    basis = []
    for row in A:
        basis.append(row)
        basis = _hnf_reduce(basis, cols)
    return basis


def _hnf_reduce(rows, cols):
    # Incremental row echelon over Z with gcd pivots.
    rows = [r[:] for r in rows if any(r)]
    out = []
    for c in range(cols):
        rest = []
        pivot = None
        for r in rows:
            if r[c] != 0:
                if pivot is None:
                    pivot = r
                else:
                    # Euclidean steps until the incoming entry dies.
                    while r[c] != 0:
                        q = pivot[c] // r[c]
                        pivot = [a - q * b for a, b in zip(pivot, r)]
                        pivot, r = r, pivot
                    rest.append(r)
            else:
                rest.append(r)
        if pivot is not None:
            if pivot[c] < 0:
                pivot = [-x for x in pivot]
            out.append((c, pivot))
        rows = [r for r in rest if any(r)]
    # Reduce entries above each pivot, in ascending pivot order so later
    # reductions never disturb columns already cleaned.
    res = [p for _, p in out]
    for i in range(len(res)):
        c, _ = out[i]
        for j in range(i):
            if res[j][c] != 0:
                q = res[j][c] // res[i][c]
                if q:
                    res[j] = [a - q * b for a, b in zip(res[j], res[i])]
    return res


def hnf_canonical(generators):
    """Canonical HNF basis of the lattice generated by integer vectors."""
    gens = [list(map(int, g)) for g in generators]
    return hnf(gens)


@dataclass
class SmithForm:
    """U * M * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}."""

    D: list
    U: list
    V: list

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def smith_normal_form(M) -> SmithForm:
    """Smith normal form over Z with transformation matrices."""
    A = _to_rows(M)
    assert A, "empty matrix"
    n, m = len(A), len(A[0])
    U = identity_matrix(n)
    V = identity_matrix(m)

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(n):
            A[r][i] -= q * A[r][j]
        for r in range(m):
            V[r][i] -= q * V[r][j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in range(n):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(m):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    k = 0
    while k < min(n, m):
        # Find the minimal nonzero entry in the trailing block.
        best = None
        for i in range(k, n):
            for j in range(k, m):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(k, best[0])
        col_swap(k, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    q = A[i][k] // A[k][k]
                    row_op(i, k, q)
                    if A[i][k] != 0:
                        row_swap(k, i)
                        dirty = True
            for j in range(k + 1, m):
                if A[k][j] != 0:
                    q = A[k][j] // A[k][k]
                    col_op(j, k, q)
                    if A[k][j] != 0:
                        col_swap(k, j)
                        dirty = True
        # Enforce divisibility d_k | trailing block.
        fixed = False
        for i in range(k + 1, n):
            for j in range(k + 1, m):
                if A[i][j] % A[k][k] != 0:
                    row_op(k, i, -1)  # add row i to row k
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        if A[k][k] < 0:
            A[k] = [-x for x in A[k]]
            U[k] = [-x for x in U[k]]
        k += 1

    D = [[A[i][j] if i == j else 0 for j in range(m)] for i in range(n)]
    assert mat_mul(mat_mul(U, _to_rows(M)), V) == D
    diag = [D[i][i] for i in range(min(n, m))]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0 if a else b == 0
    assert abs(bareiss_det(U)) == 1 and abs(bareiss_det(V)) == 1
    return SmithForm(D=D, U=U, V=V)


def saturation_basis(rows, ambient_dim):
    """Basis of the saturation of the row lattice, plus a unimodular completion.

    Returns (sat, full) where sat is an r x n basis of the saturated lattice
    and full is an n x n unimodular matrix whose first r rows are sat.
    """
    rows = [list(map(int, r)) for r in rows if any(r)]
    n = ambient_dim
    if not rows:
        return [], identity_matrix(n)
    sf = smith_normal_form(rows)
    r = sum(1 for d in sf.diagonal if d != 0)
    # rowspace(M) = rowspace(D V^-1); saturation = first r rows of V^-1.
    Vinv = mat_inverse_unimodular(sf.V)
    full = Vinv[:r] + Vinv[r:]
    assert abs(bareiss_det(full)) == 1
    return Vinv[:r], full


def solve_in_row_basis(basis, vector):
    """Integer coordinates of vector in the given independent row basis, or None."""
    if not basis:
        return [] if not any(vector) else None
    return _generic_solve_left([list(b) for b in basis], list(map(int, vector)))


def _generic_solve_left(basis, v):
    """Solve x * basis = v exactly; return integer x or None."""
    r = len(basis)
    n = len(basis[0])
    # Transpose to solve basis^T x^T = v^T with r unknowns.
    A = [[Fraction(basis[i][j]) for i in range(r)] for j in range(n)]
    b = [Fraction(x) for x in v]
    rowi = 0
    for col in range(r):
        piv = next((i for i in range(rowi, n) if A[i][col] != 0), None)
        if piv is None:
            return None
        A[rowi], A[piv] = A[piv], A[rowi]
        b[rowi], b[piv] = b[piv], b[rowi]
        inv = 1 / A[rowi][col]
        A[rowi] = [t * inv for t in A[rowi]]
        b[rowi] *= inv
        for i in range(n):
            if i != rowi and A[i][col] != 0:
                f = A[i][col]
                A[i] = [t - f * s for t, s in zip(A[i], A[rowi])]
                b[i] -= f * b[rowi]
        rowi += 1
    for i in range(rowi, n):
        if b[i] != 0:
            return None
    out = []
    for i in range(r):
        if b[i].denominator != 1:
            return None
        out.append(int(b[i]))
    return out


# ---------------------------------------------------------------------------
# Integer polynomials in the field-size variable q


class IntPoly:
    """Dense exact polynomial, lowest-degree coefficient first.

    Coefficients are Python ints (or Fractions in intermediate computations).
    The zero polynomial has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, a):
        return cls((a,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == IntPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return IntPoly([-x for x in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return IntPoly([other * x for x in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1) if self and other else []
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by q**k."""
        if not self:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def __call__(self, q):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def exact_div(self, other):
        """Exact polynomial division; raises if the remainder is nonzero."""
        assert other, "division by the zero polynomial"
        rem = list(self.coeffs)
        d = other.coeffs
        out = [0] * max(0, len(rem) - len(d) + 1)
        for i in range(len(rem) - len(d), -1, -1):
            c = Fraction(rem[i + len(d) - 1], d[-1])
            out[i] = c
            for j, dj in enumerate(d):
                rem[i + j] -= c * dj
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
        norm = []
        for c in out:
            c = Fraction(c)
            if c.denominator != 1:
                raise ArithmeticError("non-integer quotient")
            norm.append(int(c))
        return IntPoly(norm)

    def as_int_poly(self):
        """Coerce Fraction coefficients to ints; raises if any is fractional."""
        out = []
        for c in self.coeffs:
            f = Fraction(c)
            if f.denominator != 1:
                raise ArithmeticError("non-integer coefficient")
            out.append(int(f))
        return IntPoly(out)

    def format(self, var="q"):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = var if i == 1 else f"{var}^{i}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}{mono}")
        out = "+".join(parts).replace("+-", "-")
        return out

    def __repr__(self):
        return f"IntPoly({self.format()})"


def poly_from_roots(roots):
    p = IntPoly.const(1)
    for r in roots:
        p = p * IntPoly((-r, 1))
    return p


def det_pencil(A) -> IntPoly:
    """Exact det(q*A - I) as a polynomial in q.

    Computed by interpolation at q = 0..n, each value an exact Bareiss
    determinant, so no polynomial-entry elimination is needed.
    """
    A = _to_rows(A)
    n = len(A)
    assert all(len(r) == n for r in A), "pencil of a non-square matrix"
    if n == 0:
        return IntPoly.const(1)
    points = list(range(n + 1))
    values = []
    for q in points:
        M = [[q * A[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        values.append(bareiss_det(M))
    # Lagrange interpolation over the integer nodes.
    total = IntPoly()
    for i, (xi, yi) in enumerate(zip(points, values)):
        num = IntPoly.const(Fraction(yi))
        for j, xj in enumerate(points):
            if j != i:
                num = num * IntPoly((Fraction(-xj, 1), Fraction(1)))
                num = num * Fraction(1, xi - xj)
        total = total + num
    out = total.as_int_poly()
    assert out.degree <= n
    dA = bareiss_det(A)
    if dA != 0:
        assert out.degree == n and out.coeffs[-1] == dA
    return out
