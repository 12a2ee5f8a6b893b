"""Linear algebra over a tower layer and projective-space enumeration.

Matrices are 2-D ``int64`` arrays of element codes together with the
:class:`~pseudoregulus.fields.GF` they live over.  Subspaces are stored by
their canonical reduced row-echelon basis, so equality of subspaces is
equality of basis grids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .config import check_cap
from .errors import AmbientMismatch
from .fields import GF


def _as_matrix(M, cols: int | None = None) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size or cols is None else A.reshape(0, cols)
    if A.size == 0 and cols is not None:
        A = A.reshape(0, cols)
    return A


def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form (same shape, zero rows last) and pivot columns."""
    A = _as_matrix(M).copy()
    rows, cols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = F.mul(A[r], F.inv(int(A[r, c])))
        col = A[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            A[idx] = F.sub(A[idx], F.mul(col[idx][:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(F: GF, M) -> int:
    return len(rref(F, M)[1])


def row_basis(F: GF, M, cols: int | None = None) -> np.ndarray:
    A = _as_matrix(M, cols)
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else (cols or 0))
    R, piv = rref(F, A)
    return R[: len(piv)]


def matmul(F: GF, A, B) -> np.ndarray:
    """(N, k) @ (k, r) over F."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for i in range(A.shape[-1]):
        out = F.add(out, F.mul(A[..., i, None], B[i]))
    return out


def det(F: GF, M) -> int:
    A = _as_matrix(M).copy()
    n = A.shape[0]
    acc = 1
    for c in range(n):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            A[[c, i]] = A[[i, c]]
            acc = F.neg(acc)
        piv = int(A[c, c])
        acc = F.mul(acc, piv)
        below = A[c + 1:, c]
        if below.any():
            f = F.mul(below, F.inv(piv))
            A[c + 1:] = F.sub(A[c + 1:], F.mul(f[:, None], A[c][None, :]))
    return int(acc)


def inverse(F: GF, M) -> np.ndarray:
    A = _as_matrix(M)
    n = A.shape[0]
    R, piv = rref(F, np.hstack([A, np.eye(n, dtype=np.int64)]))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return R[:, n:]


def left_kernel(F: GF, M) -> np.ndarray:
    """Basis (RREF) of {x : x M = 0}."""
    A = _as_matrix(M)
    m, c = A.shape
    R, piv = rref(F, np.hstack([A, np.eye(m, dtype=np.int64)]))
    zero = ~R[:, :c].any(axis=1)
    return row_basis(F, R[zero, c:], m)


def batch_rank(F: GF, mats) -> np.ndarray:
    """Ranks of a stack of matrices, shape (B, m, c), by masked elimination."""
    A = np.array(mats, dtype=np.int64)
    nb, m, c = A.shape
    used = np.zeros((nb, m), dtype=bool)
    ar = np.arange(nb)
    for col in range(c):
        colv = A[:, :, col]
        cand = (colv != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        pval = np.where(has, colv[ar, piv], 1)
        prow = F.mul(A[ar, piv], F.inv(pval)[:, None])
        prow = np.where(has[:, None], prow, 0)
        factors = colv.copy()
        factors[ar, piv] = 0
        factors = np.where(has[:, None], factors, 0)
        A = F.sub(A, F.mul(factors[:, :, None], prow[:, None, :]))
        A[ar[has], piv[has]] = prow[has]
        used[ar[has], piv[has]] = True
    return used.sum(axis=1)


def batch_rank_mod_p(mats, p: int) -> np.ndarray:
    """Ranks over the prime field F_p; the hot loop of every kernel sweep."""
    dt = np.int16 if p < 128 else np.int64
    A = np.array(mats, dtype=np.int64) % p
    A = A.astype(dt)
    nb, m, c = A.shape
    inv = np.array([0] + [pow(i, p - 2, p) for i in range(1, p)], dtype=dt)
    used = np.zeros((nb, m), dtype=bool)
    ar = np.arange(nb)
    for col in range(c):
        colv = A[:, :, col]
        cand = (colv != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = cand.argmax(axis=1)
        prow = A[ar, piv] * inv[colv[ar, piv]][:, None] % p
        prow[~has] = 0
        factors = colv.copy()
        factors[ar, piv] = 0
        factors[~has] = 0
        A = (A - factors[:, :, None] * prow[:, None, :]) % p
        A[ar[has], piv[has]] = prow[has]
        used[ar[has], piv[has]] = True
    return used.sum(axis=1)


def normalize_rows(F: GF, V) -> np.ndarray:
    """Scale each nonzero row so that its first nonzero entry is 1."""
    V = np.asarray(V, dtype=np.int64)
    nz = V != 0
    lead_idx = nz.argmax(axis=1)
    lead = V[np.arange(V.shape[0]), lead_idx]
    zero = ~nz.any(axis=1)
    lead = np.where(zero, 1, lead)
    out = F.mul(V, F.inv(lead)[:, None])
    return np.where(zero[:, None], 0, out)


def unique_rows(V: np.ndarray, return_counts: bool = False):
    """Distinct rows in lexicographic order."""
    if V.shape[0] == 0:
        return (V, np.zeros(0, dtype=np.int64)) if return_counts else V
    return np.unique(V, axis=0, return_counts=return_counts)


def gaussian_binomial(r: int, k: int, Q: int) -> int:
    if k < 0 or k > r:
        return 0
    num = den = 1
    for i in range(k):
        num *= Q ** (r - i) - 1
        den *= Q ** (i + 1) - 1
    return num // den


def all_tuples(order: int, k: int) -> np.ndarray:
    """All k-tuples over {0..order-1} in lexicographic order, shape (order^k, k)."""
    idx = np.arange(order**k, dtype=np.int64)
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack([(idx // order ** (k - 1 - i)) % order for i in range(k)], axis=-1).reshape(-1, k)


def projective_tuples(order: int, k: int) -> np.ndarray:
    """Nonzero k-tuples whose first nonzero entry is 1, in lexicographic order."""
    blocks = []
    for lead in range(k - 1, -1, -1):
        tail = all_tuples(order, k - 1 - lead)
        block = np.zeros((tail.shape[0], k), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = tail
        blocks.append(block)
    return np.concatenate(blocks) if blocks else np.zeros((0, k), dtype=np.int64)


def projective_tuple_chunks(order: int, k: int, chunk: int) -> Iterator[np.ndarray]:
    """The rows of :func:`projective_tuples` in order, in pieces of at most ``chunk``."""
    for lead in range(k - 1, -1, -1):
        width = k - 1 - lead
        total = order**width
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            block = np.zeros((idx.size, k), dtype=np.int64)
            block[:, lead] = 1
            for i in range(width):
                block[:, lead + 1 + i] = (idx // order ** (width - 1 - i)) % order
            yield block


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjSubspace:
    """Subspace of F^r (F any layer), stored by its canonical RREF basis."""

    field: GF
    ambient_dim: int
    basis: np.ndarray

    @classmethod
    def span_of(cls, F: GF, r: int, vectors) -> ProjSubspace:
        return cls(F, r, row_basis(F, vectors, r))

    @classmethod
    def whole(cls, F: GF, r: int) -> ProjSubspace:
        return cls(F, r, np.eye(r, dtype=np.int64))

    @classmethod
    def empty(cls, F: GF, r: int) -> ProjSubspace:
        return cls(F, r, np.zeros((0, r), dtype=np.int64))

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        """Projective dimension (rank - 1; -1 for the empty subspace)."""
        return self.rank - 1

    @property
    def key(self) -> tuple:
        return (self.ambient_dim, self.basis.shape[0], self.basis.tobytes())

    def __eq__(self, other):
        return (isinstance(other, ProjSubspace) and other.field is self.field
                and other.key == self.key)

    def __hash__(self):
        return hash((id(self.field), self.key))

    def __repr__(self) -> str:
        return f"ProjSubspace(r={self.ambient_dim}, rank={self.rank}, basis={self.basis.tolist()})"

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(1, -1)
        return rank(self.field, np.vstack([self.basis, v])) == self.rank

    def pivots(self) -> list[int]:
        return [int(np.flatnonzero(row)[0]) for row in self.basis]

    def points(self, cap: int | None = None) -> np.ndarray:
        return points_array(self, cap)

    def map(self, fn) -> ProjSubspace:
        """Image under an entrywise map of codes (e.g. a Frobenius)."""
        return ProjSubspace.span_of(self.field, self.ambient_dim, fn(self.basis))


def _check_same(a: ProjSubspace, b: ProjSubspace) -> None:
    if a.field is not b.field or a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"{a.field}^{a.ambient_dim} vs {b.field}^{b.ambient_dim}")


def _zassenhaus(F: GF, A: np.ndarray, B: np.ndarray, c: int) -> tuple[np.ndarray, np.ndarray]:
    Z = np.vstack([np.hstack([A, A]), np.hstack([B, np.zeros_like(B)])])
    if Z.shape[0] == 0:
        e = np.zeros((0, c), dtype=np.int64)
        return e, e
    R, piv = rref(F, Z)
    R = R[: len(piv)]
    first = R[:, :c].any(axis=1)
    return R[first, :c], row_basis(F, R[~first, c:], c)


def span(a: ProjSubspace, b: ProjSubspace) -> ProjSubspace:
    _check_same(a, b)
    return ProjSubspace.span_of(a.field, a.ambient_dim, np.vstack([a.basis, b.basis]))


sum_spaces = span


def intersect(a: ProjSubspace, b: ProjSubspace) -> ProjSubspace:
    _check_same(a, b)
    _, meet = _zassenhaus(a.field, a.basis, b.basis, a.ambient_dim)
    return ProjSubspace(a.field, a.ambient_dim, meet)


def span_all(spaces: Sequence[ProjSubspace]) -> ProjSubspace:
    F, r = spaces[0].field, spaces[0].ambient_dim
    return ProjSubspace.span_of(F, r, np.vstack([s.basis for s in spaces]))


def meets(a: ProjSubspace, b: ProjSubspace) -> bool:
    return a.rank + b.rank > span(a, b).rank


def points_array(s: ProjSubspace, cap: int | None = None) -> np.ndarray:
    """Normalized representatives of all points of s, lexicographically sorted."""
    F, k = s.field, s.rank
    check_cap((F.order**k - 1) // (F.order - 1), "points of subspace", cap)
    coeffs = projective_tuples(F.order, k)
    if coeffs.shape[0] == 0:
        return np.zeros((0, s.ambient_dim), dtype=np.int64)
    V = normalize_rows(F, matmul(F, coeffs, s.basis))
    return unique_rows(V)


def enumerate_points(s: ProjSubspace, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    for row in points_array(s, cap):
        yield tuple(int(x) for x in row)


def subspace_bases(F: GF, r: int, k: int, cap: int | None = None) -> np.ndarray:
    """RREF bases of all k-dimensional subspaces of F^r, shape (N, k, r).

    Sorted lexicographically by the flattened basis grid.
    """
    check_cap(gaussian_binomial(r, k, F.order), f"subspaces of rank {k} in F^{r}", cap)
    if k == 0:
        return np.zeros((1, 0, r), dtype=np.int64)
    blocks = []
    for piv in itertools.combinations(range(r), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, r) if j not in piv]
        vals = all_tuples(F.order, len(free))
        block = np.zeros((vals.shape[0], k, r), dtype=np.int64)
        for i, p in enumerate(piv):
            block[:, i, p] = 1
        for col, (i, j) in enumerate(free):
            block[:, i, j] = vals[:, col]
        blocks.append(block)
    out = np.concatenate(blocks)
    flat = out.reshape(out.shape[0], -1)
    order = np.lexsort(flat.T[::-1])
    return out[order]


def enumerate_subspaces(F: GF, r: int, proj_dim: int, cap: int | None = None) -> Iterator[ProjSubspace]:
    for B in subspace_bases(F, r, proj_dim + 1, cap):
        yield ProjSubspace(F, r, B)


def count_members(F: GF, vectors: np.ndarray, bases: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """For each RREF basis in ``bases`` (N, d, r), count rows of ``vectors`` inside its span."""
    vectors = np.asarray(vectors, dtype=np.int64)
    N, d, r = bases.shape
    m = vectors.shape[0]
    if d == 0:
        return (~vectors.any(axis=1)).sum() * np.ones(N, dtype=np.int64)
    piv = (bases != 0).argmax(axis=2)  # (N, d)
    out = np.zeros(N, dtype=np.int64)
    step = max(1, chunk // max(1, m * r))
    for s in range(0, N, step):
        B = bases[s: s + step]
        P = piv[s: s + step]
        coeff = vectors[:, P].transpose(1, 0, 2)  # (b, m, d)
        res = np.broadcast_to(vectors, (B.shape[0], m, r)).copy()
        for j in range(d):
            res = F.sub(res, F.mul(coeff[:, :, j, None], B[:, None, j, :]))
        out[s: s + step] = (~res.any(axis=2)).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# F_q-subspaces of F_{q^n}-spaces, in blown-up coordinates


def _degree(big: GF, small: GF) -> int:
    d, m = 0, big.order
    while m > 1:
        m //= small.order
        d += 1
    return d


def blowup(big: GF, small: GF, v) -> np.ndarray:
    """F_q coordinates of a vector over F_{q^n}: each entry becomes n digits."""
    v = np.asarray(v, dtype=np.int64)
    d = _degree(big, small)
    c = big.coords(v, small.order, d)
    return c.reshape(v.shape[:-1] + (v.shape[-1] * d,))


def blowdown(big: GF, small: GF, w) -> np.ndarray:
    w = np.asarray(w, dtype=np.int64)
    d = _degree(big, small)
    c = w.reshape(w.shape[:-1] + (w.shape[-1] // d, d))
    return big.from_coords(c, small.order)


@dataclass(frozen=True, eq=False)
class FqSubspace:
    """An F_q-subspace of F_{q^n}^r, basis in RREF over F_q in blown-up coordinates."""

    big: GF
    small: GF
    ambient_dim: int
    basis: np.ndarray

    @property
    def degree(self) -> int:
        return _degree(self.big, self.small)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def flat(self) -> ProjSubspace:
        return ProjSubspace(self.small, self.ambient_dim * self.degree, self.basis)

    @property
    def key(self) -> tuple:
        return self.flat.key

    def __eq__(self, other):
        return (isinstance(other, FqSubspace) and other.big is self.big
                and other.small is self.small and other.key == self.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self) -> str:
        return f"FqSubspace(r={self.ambient_dim}, dim={self.dim})"

    @classmethod
    def from_vectors(cls, big: GF, small: GF, r: int, vectors) -> FqSubspace:
        W = blowup(big, small, _as_matrix(vectors, r))
        return cls(big, small, r, row_basis(small, W, r * _degree(big, small)))

    @classmethod
    def from_flat(cls, big: GF, small: GF, r: int, flat: ProjSubspace) -> FqSubspace:
        return cls(big, small, r, flat.basis)

    @classmethod
    def of_subspace(cls, small: GF, w: ProjSubspace) -> FqSubspace:
        """The F_{q^n}-subspace w viewed as an F_q-subspace."""
        big = w.field
        d = _degree(big, small)
        scalars = np.array([small.order**j for j in range(d)], dtype=np.int64)
        rows = big.mul(scalars[:, None, None], w.basis[None, :, :]).reshape(-1, w.ambient_dim)
        return cls.from_vectors(big, small, w.ambient_dim, rows)

    def basis_vectors(self) -> np.ndarray:
        """Basis rows blown down to F_{q^n} coordinates."""
        return blowdown(self.big, self.small, self.basis)

    def vectors(self, cap: int | None = None) -> np.ndarray:
        """All q^k vectors (zero first) in F_{q^n} coordinates."""
        check_cap(self.small.order**self.dim, "vectors of F_q-subspace", cap)
        coeffs = all_tuples(self.small.order, self.dim)
        flat = matmul(self.small, coeffs, self.basis) if self.dim else np.zeros(
            (1, self.basis.shape[1]), dtype=np.int64)
        return blowdown(self.big, self.small, flat)


def _check_fq(a: FqSubspace, b: FqSubspace) -> None:
    if a.big is not b.big or a.small is not b.small or a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch("F_q-subspaces live in different ambients")


def fq_span(a: FqSubspace, b: FqSubspace) -> FqSubspace:
    _check_fq(a, b)
    return FqSubspace.from_flat(a.big, a.small, a.ambient_dim, span(a.flat, b.flat))


def fq_intersect(a: FqSubspace, b: FqSubspace) -> FqSubspace:
    _check_fq(a, b)
    return FqSubspace.from_flat(a.big, a.small, a.ambient_dim, intersect(a.flat, b.flat))


def fq_intersect_with_subspace(u: FqSubspace, w: ProjSubspace) -> FqSubspace:
    """U ∩ W for an F_{q^n}-subspace W; its dimension is the weight of PG(W)."""
    if w.field is not u.big or w.ambient_dim != u.ambient_dim:
        raise AmbientMismatch("subspace and F_q-subspace live in different ambients")
    return fq_intersect(u, FqSubspace.of_subspace(u.small, w))
