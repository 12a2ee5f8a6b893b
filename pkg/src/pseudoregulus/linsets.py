"""Linear sets of h-pseudoregulus type.

A linear set is carried by an F_q-subspace U of V = F_{q^n}^r, stored in
blown-up coordinates.  Two constructions are provided: from a tuple of
semilinear maps (the vectors (x, f_2(x), ..., f_{h+1}(x)) for x in
F_{q^{nt}}) and by projecting the subgeometry PG(nt-1, q) from a vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import check_cap
from .errors import (
    AmbientMismatch,
    DuplicateExponent,
    ExponentOutOfRange,
    NoValidTheta,
    NonInvertibleMap,
    NotMaximumHScattered,
    NotPseudoregulusType,
    SpreadAxiomViolation,
    TransversalCountMismatch,
)
from .fields import FieldTower, tower as make_tower
from .linalg import (
    FqSubspace,
    ProjSubspace,
    batch_rank,
    count_members,
    fq_intersect,
    fq_intersect_with_subspace,
    fq_span,
    gaussian_binomial,
    intersect,
    inverse,
    matmul,
    normalize_rows,
    points_array,
    projective_tuples,
    rank,
    span,
    span_all,
    subspace_bases,
    unique_rows,
)
from .moore import euler_phi, is_moore, progression, shift_orbit_census
from .rankcodes import monomial_equivalent
from .spreads import Spread, verify_director, verify_spread

DEFAULT_SEED = 20240607


# -- specs -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SemilinearMap:
    """x -> M · coords(x^{q^i}) on F_{q^{nt}} = F_{q^n}^t."""

    matrix: tuple[tuple[int, ...], ...]
    exponent: int

    @classmethod
    def identity(cls, t: int, exponent: int) -> SemilinearMap:
        return cls(tuple(tuple(int(i == j) for j in range(t)) for i in range(t)), exponent)

    def as_array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    def apply(self, tower: FieldTower, x: np.ndarray) -> np.ndarray:
        """Images of F_{q^{nt}} codes as (..., t) F_{q^n} coordinate vectors."""
        y = tower.frob(tower.Fqnt, x, self.exponent)
        c = tower.Fqnt.coords(y, tower.Q, tower.t)
        return matmul(tower.Fqn, c, self.as_array().T)


@dataclass(frozen=True, eq=False)
class LinearSetSpec:
    q: int
    n: int
    t: int
    h: int
    maps: tuple[SemilinearMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.maps) != self.h:
            raise ValueError(f"h={self.h} needs {self.h} maps f_2..f_{{h+1}}")
        if self.t < 1 or self.n < 1:
            raise ValueError("n and t must be positive")
        if self.n < self.h + 1:
            raise ValueError("n must be at least h+1")
        exps = self.exponents
        for i in exps:
            if not 0 <= i < self.n:
                raise ExponentOutOfRange(f"exponent {i} not in 0..{self.n - 1}")
        if len(set(exps)) != len(exps):
            raise DuplicateExponent(f"companion exponents {exps} are not pairwise distinct")
        T = self.tower
        for f in self.maps:
            M = f.as_array()
            if M.shape != (self.t, self.t):
                raise ValueError(f"map matrix must be {self.t}x{self.t}")
            if rank(T.Fqn, M) != self.t:
                raise NonInvertibleMap(f"matrix {M.tolist()} is singular")

    @property
    def tower(self) -> FieldTower:
        return make_tower(self.q, self.n, self.t)

    @property
    def exponents(self) -> tuple[int, ...]:
        """I_f = (0, i_2, ..., i_{h+1})."""
        return (0,) + tuple(f.exponent for f in self.maps)

    @property
    def monomial(self) -> bool:
        return all(np.array_equal(f.as_array(), np.eye(self.t, dtype=np.int64)) for f in self.maps)

    @classmethod
    def from_exponents(cls, q: int, n: int, t: int, exponents: Sequence[int]) -> LinearSetSpec:
        exps = [int(i) for i in exponents]
        if not exps or exps[0] != 0:
            raise ValueError("exponent list must start with 0 (f_1 is the identity)")
        return cls(q, n, t, len(exps) - 1, tuple(SemilinearMap.identity(t, i) for i in exps[1:]))

    @classmethod
    def from_dict(cls, d: dict) -> LinearSetSpec:
        q, n, t = int(d["q"]), int(d["n"]), int(d["t"])
        if "exponents" in d:
            spec = cls.from_exponents(q, n, t, d["exponents"])
            if "h" in d and int(d["h"]) != spec.h:
                raise ValueError("h does not match the exponent list")
            return spec
        maps = tuple(SemilinearMap(tuple(tuple(int(a) for a in row) for row in m["matrix"]),
                                   int(m["exponent"])) for m in d["maps"])
        return cls(q, n, t, int(d["h"]), maps)

    def to_dict(self) -> dict:
        return {
            "q": self.q, "n": self.n, "t": self.t, "h": self.h,
            "maps": [{"matrix": [list(r) for r in f.matrix], "exponent": f.exponent} for f in self.maps],
        }


# -- linear sets -----------------------------------------------------------


@dataclass(eq=False)
class LinearSet:
    """L_U in PG(r-1, q^n) with its point/weight data computed on demand."""

    tower: FieldTower
    h: int
    U: FqSubspace
    spec: LinearSetSpec | None = None
    transitive: bool = False  # some collineation group fixing L is transitive on U minus 0
    _vectors: np.ndarray | None = field(default=None, repr=False)
    _points: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def ambient_dim(self) -> int:
        return self.U.ambient_dim

    @property
    def rank(self) -> int:
        return self.U.dim

    def vectors(self, cap: int | None = None) -> np.ndarray:
        if self._vectors is None:
            self._vectors = self.U.vectors(cap)
        return self._vectors

    def point_data(self) -> tuple[np.ndarray, np.ndarray]:
        """Sorted normalised points of L and their weights."""
        if self._points is None:
            self._points = point_weights(self.tower.Fqn, self.tower.q, self.vectors())
        return self._points

    @property
    def points(self) -> np.ndarray:
        return self.point_data()[0]

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def weight_spectrum(self) -> dict[int, int]:
        w = self.point_data()[1]
        vals, counts = np.unique(w, return_counts=True)
        return {int(a): int(b) for a, b in zip(vals, counts)}

    def spans_ambient(self) -> bool:
        return rank(self.tower.Fqn, self.U.basis_vectors()) == self.ambient_dim


def point_weights(F, q: int, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalised points spanned by the nonzero rows of an F_q-subspace, with weights."""
    nz = vecs[vecs.any(axis=1)]
    if nz.shape[0] == 0:
        return np.zeros((0, vecs.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
    P, counts = unique_rows(normalize_rows(F, nz), return_counts=True)
    ladder = q ** np.arange(62 // q.bit_length(), dtype=np.int64) - 1
    return P, np.searchsorted(ladder, counts).astype(np.int64)


def build_from_spec(spec: LinearSetSpec, cap: int | None = None) -> LinearSet:
    """U_f = {(x, f_2(x), ..., f_{h+1}(x)) : x in F_{q^{nt}}}."""
    T = spec.tower
    check_cap(T.Q**T.t, "vectors of U_f", cap)
    xs = np.arange(T.Q**T.t, dtype=np.int64)
    vecs = _uf_vectors(spec, xs)
    basis_x = np.array([T.q**m for m in range(T.n * T.t)], dtype=np.int64)
    U = FqSubspace.from_vectors(T.Fqn, T.Fq, (spec.h + 1) * T.t, vecs[basis_x])
    if U.dim != T.n * T.t:
        raise NonInvertibleMap(f"U_f has rank {U.dim}, expected {T.n * T.t}")
    return LinearSet(T, spec.h, U, spec=spec, transitive=True, _vectors=vecs)


def _uf_vectors(spec: LinearSetSpec, xs: np.ndarray) -> np.ndarray:
    T = spec.tower
    blocks = [T.Fqnt.coords(xs, T.Q, T.t).reshape(xs.shape + (T.t,))]
    blocks += [f.apply(T, xs).reshape(xs.shape + (T.t,)) for f in spec.maps]
    return np.concatenate(blocks, axis=-1)


def weight(ls: LinearSet, omega: ProjSubspace) -> int:
    """dim_{F_q}(U ∩ W) for Ω = PG(W)."""
    return fq_intersect_with_subspace(ls.U, omega).dim


# -- heavy subspaces by quotienting ------------------------------------------


def _reduce(F, vecs: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Image of the vectors in V/<p>, realised on the coordinate hyperplane at p's pivot."""
    c = int(np.flatnonzero(p)[0])
    out = F.sub(vecs, F.mul(vecs[:, c, None], p[None, :]))
    return unique_rows(out)


def _complete(F, r: int, rows: list[np.ndarray], dim: int) -> np.ndarray:
    """Extend independent rows by unit vectors to the requested rank."""
    basis = [np.asarray(x, dtype=np.int64) for x in rows]
    for j in range(r):
        if len(basis) == dim:
            break
        e = np.zeros(r, dtype=np.int64)
        e[j] = 1
        if rank(F, np.vstack(basis + [e])) > len(basis):
            basis.append(e)
    return np.vstack(basis)


def _heavy(F, q: int, vecs: np.ndarray, d: int, m: int, lifted: list[np.ndarray],
           first_only: bool, out: dict, top: Sequence[int] | None, cap: int | None):
    """Subspaces W of dimension d (plus the lifted points) with dim(U ∩ W) >= m."""
    r = vecs.shape[1]
    P, w = point_weights(F, q, vecs)
    idxs = range(P.shape[0]) if top is None else top
    if d == 1 and top is None:
        idxs = np.flatnonzero(w >= m)
    for i in idxs:
        p, wp = P[i], int(w[i])
        if wp >= m:
            base = lifted + [p]
            if first_only:
                return _complete(F, r, base, len(base) + d - 1)
            used = [int(np.flatnonzero(x)[0]) for x in base]
            free = [j for j in range(r) if j not in used]
            for B in subspace_bases(F, len(free), d - 1, cap):
                ext = np.zeros((B.shape[0], r), dtype=np.int64)
                ext[:, free] = B
                W = ProjSubspace.span_of(F, r, np.vstack(base + [ext]))
                out.setdefault(W.key, W)
        elif d > 1:
            res = _heavy(F, q, _reduce(F, vecs, p), d - 1, m - wp, lifted + [p],
                         first_only, out, None, cap)
            if first_only and res is not None:
                return res
    return None


def heavy_subspaces(ls: LinearSet, d: int, m: int, cap: int | None = None) -> list[ProjSubspace]:
    """All F_{q^n}-subspaces of vector dimension d with weight at least m, sorted."""
    out: dict = {}
    _heavy(ls.tower.Fqn, ls.tower.q, ls.vectors(cap), d, m, [], False, out, None, cap)
    return sorted(out.values(), key=lambda W: W.basis.tobytes())


def find_heavy_subspace(ls: LinearSet, d: int, m: int, cap: int | None = None) -> ProjSubspace | None:
    """One subspace of vector dimension d and weight >= m, or None."""
    F = ls.tower.Fqn
    top = None
    if ls.transitive:
        # every point of L is an image of <u(1)>, so one starting point suffices
        P, _ = ls.point_data()
        start = normalize_rows(F, ls.vectors()[1:2])[0]
        top = [int(np.flatnonzero((P == start).all(axis=1))[0])]
    B = _heavy(F, ls.tower.q, ls.vectors(cap), d, m, [], True, {}, top, cap)
    return None if B is None else ProjSubspace.span_of(F, ls.ambient_dim, B)


@dataclass
class ScatteredResult:
    is_scattered: bool
    reason: str
    witness: ProjSubspace | None = None
    witness_weight: int | None = None

    def __bool__(self) -> bool:
        return self.is_scattered

    def to_dict(self) -> dict:
        return {
            "is_scattered": self.is_scattered,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.basis.tolist(),
            "witness_weight": self.witness_weight,
        }


def is_h_scattered(ls: LinearSet, h: int | None = None, method: str = "quotient",
                   cap: int | None = None) -> ScatteredResult:
    """L spans the ambient and every (h-1)-subspace has weight at most h.

    ``quotient`` searches for an over-weight subspace point by point, passing to
    the quotient by each point; ``subspaces`` scans the (h+1)-dimensional
    F_q-subspaces of U for a too-small F_{q^n}-span; ``direct`` weighs every
    (h-1)-subspace of the ambient.
    """
    h = ls.h if h is None else h
    if not ls.spans_ambient():
        return ScatteredResult(False, "not-spanning")
    if h == 0:
        return ScatteredResult(True, "ok")
    if method == "quotient":
        W = find_heavy_subspace(ls, h, h + 1, cap)
    elif method == "subspaces":
        W = _scattered_by_subspaces(ls, h, cap)
    elif method == "direct":
        W = _scattered_direct(ls, h, cap)
    else:
        raise ValueError(f"unknown method {method!r}")
    if W is None:
        return ScatteredResult(True, "ok")
    return ScatteredResult(False, "heavy-subspace", W, weight(ls, W))


def is_scattered(ls: LinearSet, **kw) -> ScatteredResult:
    return is_h_scattered(ls, 1, **kw)


def _scattered_by_subspaces(ls: LinearSet, h: int, cap: int | None,
                            chunk: int = 1 << 15) -> ProjSubspace | None:
    T = ls.tower
    F = T.Fqn
    k = ls.U.dim
    check_cap(gaussian_binomial(k, h + 1, T.q), "F_q-subspaces of U", cap)
    gens = ls.U.basis_vectors()
    C_all = subspace_bases(T.Fq, k, h + 1, cap)
    for s in range(0, C_all.shape[0], chunk):
        C = C_all[s: s + chunk]
        rows = np.zeros(C.shape[:2] + (gens.shape[1],), dtype=np.int64)
        for j in range(k):
            rows = F.add(rows, F.mul(C[:, :, j, None], gens[j][None, None, :]))
        bad = np.flatnonzero(batch_rank(F, rows) <= h)
        if bad.size:
            W = ProjSubspace.span_of(F, ls.ambient_dim, rows[bad[0]])
            return ProjSubspace.span_of(F, ls.ambient_dim,
                                        _complete(F, ls.ambient_dim, list(W.basis), h))
    return None


def _scattered_direct(ls: LinearSet, h: int, cap: int | None) -> ProjSubspace | None:
    T = ls.tower
    bases = subspace_bases(T.Fqn, ls.ambient_dim, h, cap)
    counts = count_members(T.Fqn, ls.vectors(cap), bases)
    bad = np.flatnonzero(counts >= T.q ** (h + 1))
    return ProjSubspace(T.Fqn, ls.ambient_dim, bases[bad[0]]) if bad.size else None


# -- pseudoregulus -----------------------------------------------------------


def pseudoregulus_elements_from_spec(spec: LinearSetSpec) -> list[ProjSubspace]:
    """Π_x spanned by the per-block images of x, one per point <x> of PG(t-1, q^n)."""
    T = spec.tower
    t, h = T.t, spec.h
    xs_coords = projective_tuples(T.Q, t)
    xs = T.Fqnt.from_coords(xs_coords, T.Q) if t > 1 else xs_coords[:, 0]
    xs = np.atleast_1d(xs)
    V = _uf_vectors(spec, xs)  # (N, (h+1)t)
    out = []
    for v in V:
        rows = np.zeros((h + 1, (h + 1) * t), dtype=np.int64)
        for j in range(h + 1):
            rows[j, j * t:(j + 1) * t] = v[j * t:(j + 1) * t]
        out.append(ProjSubspace.span_of(T.Fqn, (h + 1) * t, rows))
    return out


def pairwise_disjoint(spaces: Sequence[ProjSubspace]) -> bool:
    if len(spaces) < 2:
        return True
    F = spaces[0].field
    pairs = list(itertools.combinations(range(len(spaces)), 2))
    ranks = [s.rank for s in spaces]
    same = all(rk == ranks[0] for rk in ranks)
    if same:
        mats = np.stack([np.vstack([spaces[i].basis, spaces[j].basis]) for i, j in pairs])
        return bool((batch_rank(F, mats) == 2 * ranks[0]).all())
    return all(not intersect(spaces[i], spaces[j]).rank for i, j in pairs)


@dataclass
class PseudoregulusReport:
    elements: list[ProjSubspace]
    transversals: list[ProjSubspace]
    def_check: dict
    counts: dict
    branch: str = "unique"

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "counts": dict(self.counts),
            "def_check": dict(self.def_check),
            "elements": [e.basis.tolist() for e in self.elements],
            "transversals": [x.basis.tolist() for x in self.transversals],
        }


def find_transversals(ls: LinearSet, elements: Sequence[ProjSubspace], t: int,
                      cap: int | None = None) -> list[ProjSubspace]:
    """The (t-1)-subspaces meeting every element, found through one point per block."""
    F = ls.tower.Fqn
    r = ls.ambient_dim
    chosen: list[ProjSubspace] = []
    acc = ProjSubspace.empty(F, r)
    for E in elements:
        nxt = span(acc, E)
        if nxt.rank == acc.rank + E.rank:
            chosen.append(E)
            acc = nxt
        if len(chosen) == t:
            break
    if len(chosen) < t or acc.rank != r:
        raise TransversalCountMismatch("no t elements span the ambient space")
    pts = [points_array(E, cap) for E in chosen]
    ncand = int(np.prod([p.shape[0] for p in pts]))
    check_cap(ncand * len(elements), "transversal candidate tests", cap)
    idx = np.stack([g.reshape(-1) for g in np.meshgrid(*[np.arange(p.shape[0]) for p in pts],
                                                       indexing="ij")], axis=-1)
    cand = np.stack([pts[j][idx[:, j]] for j in range(t)], axis=1)  # (N, t, r)
    alive = np.ones(ncand, dtype=bool)
    for E in elements:
        sel = np.flatnonzero(alive)
        if sel.size == 0:
            break
        mats = np.concatenate([cand[sel], np.broadcast_to(E.basis, (sel.size,) + E.basis.shape)], axis=1)
        alive[sel] = batch_rank(F, mats) < t + E.rank
    found: dict = {}
    for c in cand[alive]:
        X = ProjSubspace.span_of(F, r, c)
        if X.rank == t:
            found.setdefault(X.key, X)
    return sorted(found.values(), key=lambda X: X.basis.tobytes())


def _misses_L(ls: LinearSet, K: ProjSubspace) -> bool:
    return weight(ls, K) == 0


def detect_pseudoregulus(ls: LinearSet, h: int | None = None, strict: bool = True,
                         cap: int | None = None) -> PseudoregulusReport:
    """Blind extraction of the weight-n h-subspaces and their transversal spaces."""
    T = ls.tower
    h = ls.h if h is None else h
    n, t = T.n, ls.ambient_dim // (h + 1)
    if t < 2:
        raise NotPseudoregulusType("pseudoregulus type needs t >= 2")
    expected = (T.Q**t - 1) // (T.Q - 1)
    if n == h + 1:
        # every Desarguesian h-spread of a subgeometry qualifies, so only the
        # constructed family can be checked and uniqueness is not claimed
        branch = "subgeometry"
        elements = pseudoregulus_elements_from_spec(ls.spec) if ls.spec is not None else []
        complete = True
    else:
        branch = "unique"
        heavy = heavy_subspaces(ls, h + 1, n, cap)
        elements = [W for W in heavy if weight(ls, W) == n]
        complete = len(heavy) == len(elements)
    a = (bool(elements) and complete and len(elements) == expected
         and all(weight(ls, W) == n for W in elements) and pairwise_disjoint(elements))
    transversals: list[ProjSubspace] = []
    b = False
    if a:
        try:
            transversals = find_transversals(ls, elements, t, cap)
        except TransversalCountMismatch:
            transversals = []
        if len(transversals) == h + 1:
            b = all(_misses_L(ls, span_all([X for j, X in enumerate(transversals) if j != i]))
                    for i in range(h + 1))
    report = PseudoregulusReport(elements, transversals, {"a": a, "b": b},
                                 {"elements": len(elements), "expected": expected,
                                  "transversals": len(transversals), "expected_transversals": h + 1},
                                 branch=branch)
    if strict and not (a and b):
        if a and len(transversals) != h + 1:
            raise TransversalCountMismatch(f"found {len(transversals)} transversals, expected {h + 1}")
        raise NotPseudoregulusType(f"definition check failed: {report.def_check}, counts {report.counts}")
    return report


def line_weights(ls: LinearSet, h: int | None = None, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Every h-subspace of the ambient (as RREF bases) with its weight."""
    T = ls.tower
    h = ls.h if h is None else h
    bases = subspace_bases(T.Fqn, ls.ambient_dim, h + 1, cap)
    counts = count_members(T.Fqn, ls.vectors(cap), bases)
    ladder = T.q ** np.arange(ls.rank + 1, dtype=np.int64)
    return bases, np.searchsorted(ladder, counts).astype(np.int64)


@dataclass
class OffPseudoregulusReport:
    max_weight: int
    bound: int
    swept: int
    weight_n_is_pseudoregulus: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def max_weight_offpseudoregulus(ls: LinearSet, h: int | None = None,
                                elements: Sequence[ProjSubspace] | None = None,
                                cap: int | None = None) -> OffPseudoregulusReport:
    """Largest weight of an h-subspace outside the pseudoregulus, from a full sweep."""
    T = ls.tower
    h = ls.h if h is None else h
    if elements is None:
        if ls.spec is None:
            raise ValueError("pass the pseudoregulus elements for a linear set without a spec")
        elements = pseudoregulus_elements_from_spec(ls.spec)
    keys = {E.basis.tobytes() for E in elements}
    bases, w = line_weights(ls, h, cap)
    inP = np.array([B.tobytes() in keys for B in bases])
    off = w[~inP]
    heavy = {bases[i].tobytes() for i in np.flatnonzero(w == T.n)}
    return OffPseudoregulusReport(int(off.max()) if off.size else 0, (h * T.n) // (h + 1) + 1,
                                  int(bases.shape[0]), heavy == keys)


# -- subgeometry projection ----------------------------------------------------


def _psi(tower: FieldTower, M: np.ndarray, i: int = 1) -> np.ndarray:
    return tower.frob(tower.Fqn, np.asarray(M, dtype=np.int64), i)


@dataclass(eq=False)
class SubgeometryFrame:
    tower: FieldTower
    I: tuple[int, ...]
    theta: ProjSubspace
    gamma: ProjSubspace
    lam: ProjSubspace
    lam_basis: np.ndarray  # rows: the conjugates Θ^{Ψ^i}, i in I, in order
    gamma_basis: np.ndarray
    seed: int
    theta_source: str

    @property
    def N(self) -> int:
        return self.tower.n * self.tower.t

    @property
    def h(self) -> int:
        return len(self.I) - 1

    def psi(self, M: np.ndarray, i: int = 1) -> np.ndarray:
        return _psi(self.tower, M, i)

    def conjugate(self, X: ProjSubspace, i: int) -> ProjSubspace:
        return ProjSubspace.span_of(X.field, X.ambient_dim, self.psi(X.basis, i))

    def conjugates(self, X: ProjSubspace | None = None) -> list[ProjSubspace]:
        X = self.theta if X is None else X
        return [self.conjugate(X, i) for i in range(self.tower.n)]

    def sigma(self) -> FqSubspace:
        """The F_q-span of the rational vectors, Fix(Ψ)."""
        T = self.tower
        return FqSubspace.from_vectors(T.Fqn, T.Fq, self.N, np.eye(self.N, dtype=np.int64))

    def lambda_coords(self, V: np.ndarray) -> np.ndarray:
        """Coordinates in the Λ-basis of the projection from Γ of rows of V."""
        T = self.tower
        B = np.vstack([self.lam_basis, self.gamma_basis])
        C = matmul(T.Fqn, np.asarray(V, dtype=np.int64), inverse(T.Fqn, B))
        return C[..., : self.lam_basis.shape[0]]

    def from_lambda(self, C: np.ndarray) -> np.ndarray:
        return matmul(self.tower.Fqn, np.asarray(C, dtype=np.int64), self.lam_basis)


def _theta_ok(T: FieldTower, B: np.ndarray) -> bool:
    stacked = np.vstack([_psi(T, B, i) for i in range(T.n)])
    return rank(T.Fqn, stacked) == T.n * T.t


def _vandermonde_theta(T: FieldTower) -> np.ndarray:
    """Row j carries (1, w, ..., w^{n-1}) on block j, w primitive; its conjugates are Vandermonde."""
    F = T.Fqn
    w = F.primitive if F.order > 2 else 1
    row = np.array([F.pow(w, k) for k in range(T.n)], dtype=np.int64)
    B = np.zeros((T.t, T.n * T.t), dtype=np.int64)
    for j in range(T.t):
        B[j, j * T.n:(j + 1) * T.n] = row
    return B


def build_subgeometry_frame(tower: FieldTower, I: Sequence[int], seed: int = DEFAULT_SEED,
                            tries: int = 64) -> SubgeometryFrame:
    T = tower
    I = tuple(sorted(set(int(i) for i in I)))
    if 0 not in I or any(not 0 <= i < T.n for i in I):
        raise ExponentOutOfRange(f"index set {I} must contain 0 and lie in 0..{T.n - 1}")
    if T.t < 2:
        raise ValueError("the frame needs t >= 2")
    N = T.n * T.t
    rng = np.random.default_rng(seed)
    B, source = None, "seeded"
    for _ in range(tries):
        cand = rng.integers(0, T.Q, size=(T.t, N))
        if rank(T.Fqn, cand) == T.t and _theta_ok(T, cand):
            B = cand
            break
    if B is None:
        B, source = _vandermonde_theta(T), "vandermonde"
        if not _theta_ok(T, B):
            raise NoValidTheta("no director candidate spans the space with its conjugates")
    theta = ProjSubspace.span_of(T.Fqn, N, B)
    conj = [_psi(T, theta.basis, i) for i in range(T.n)]
    lam_basis = np.vstack([conj[i] for i in I])
    rest = [conj[i] for i in range(T.n) if i not in I]
    gamma_basis = np.vstack(rest) if rest else np.zeros((0, N), dtype=np.int64)
    frame = SubgeometryFrame(T, I, theta, ProjSubspace.span_of(T.Fqn, N, gamma_basis),
                             ProjSubspace.span_of(T.Fqn, N, lam_basis), lam_basis, gamma_basis,
                             seed, source)
    if intersect(frame.gamma, frame.lam).rank:
        raise NoValidTheta("vertex and axis meet")
    if fq_intersect_with_subspace(frame.sigma(), frame.gamma).dim:
        raise NoValidTheta("vertex meets the subgeometry")
    return frame


def projected_U_ambient(frame: SubgeometryFrame) -> FqSubspace:
    """(S + H) ∩ V in coordinates of the whole space."""
    T = frame.tower
    S = frame.sigma()
    H = FqSubspace.of_subspace(T.Fq, frame.gamma)
    V = FqSubspace.of_subspace(T.Fq, frame.lam)
    return fq_intersect(fq_span(S, H), V)


def direct_U_ambient(frame: SubgeometryFrame) -> FqSubspace:
    """{Σ_{i in I} Ψ^i(u) : u in Θ} in coordinates of the whole space."""
    T = frame.tower
    betas = np.array(T.fq_basis(T.Fqn), dtype=np.int64)
    W = T.Fqn.mul(betas[:, None, None], frame.theta.basis[None, :, :]).reshape(-1, frame.N)
    img = np.zeros_like(W)
    for i in frame.I:
        img = T.Fqn.add(img, frame.psi(W, i))
    return FqSubspace.from_vectors(T.Fqn, T.Fq, frame.N, img)


def _to_lambda(frame: SubgeometryFrame, U: FqSubspace) -> FqSubspace:
    T = frame.tower
    C = frame.lambda_coords(U.basis_vectors())
    return FqSubspace.from_vectors(T.Fqn, T.Fq, frame.lam_basis.shape[0], C)


@dataclass(eq=False)
class Projection:
    linear_set: LinearSet
    U_ambient: FqSubspace
    cross_checked: bool


def project_subgeometry(frame: SubgeometryFrame, cap: int | None = None) -> Projection:
    """Project PG(nt-1, q) from Γ onto Λ; the result is given in Λ-coordinates."""
    T = frame.tower
    Ua = projected_U_ambient(frame)
    Ud = direct_U_ambient(frame)
    if Ua.dim != frame.N:
        raise NoValidTheta(f"projected subspace has rank {Ua.dim}, expected {frame.N}")
    ls = LinearSet(T, frame.h, _to_lambda(frame, Ua))
    if not ls.spans_ambient():
        raise NoValidTheta("projection does not span the axis")
    return Projection(ls, Ua, Ua == Ud)


def project_to_axis(frame: SubgeometryFrame, lam_basis: np.ndarray) -> FqSubspace:
    """(S + H) ∩ V' for another axis V' complementary to Γ, in the given basis of V'."""
    T = frame.tower
    lam2 = ProjSubspace.span_of(T.Fqn, frame.N, lam_basis)
    if intersect(lam2, frame.gamma).rank or lam2.rank + frame.gamma.rank != frame.N:
        raise AmbientMismatch("the new axis is not complementary to the vertex")
    S = frame.sigma()
    H = FqSubspace.of_subspace(T.Fq, frame.gamma)
    V = FqSubspace.of_subspace(T.Fq, lam2)
    U2 = fq_intersect(fq_span(S, H), V).basis_vectors()
    B = np.vstack([lam_basis, frame.gamma_basis])
    C = matmul(T.Fqn, U2, inverse(T.Fqn, B))[:, : lam_basis.shape[0]]
    return FqSubspace.from_vectors(T.Fqn, T.Fq, lam_basis.shape[0], C)


def axis_change_check(frame: SubgeometryFrame, seed: int = DEFAULT_SEED) -> tuple[bool, LinearSet]:
    """Project onto a second axis Λ' = {λ + φ(λ)}; ω(λ) = λ + φ(λ) must carry U onto U'.

    In the bases (b_k) of Λ and (b_k + φ(b_k)) of Λ' the map ω is the identity on
    coordinates, so the two subspaces must have equal canonical bases.
    """
    T = frame.tower
    rng = np.random.default_rng(seed)
    k, g = frame.lam_basis.shape[0], frame.gamma_basis.shape[0]
    if g:
        phi = rng.integers(0, T.Q, size=(k, g))
        lam2 = T.Fqn.add(frame.lam_basis, matmul(T.Fqn, phi, frame.gamma_basis))
    else:
        lam2 = frame.lam_basis
    U1 = _to_lambda(frame, projected_U_ambient(frame))
    U2 = project_to_axis(frame, lam2)
    return U1 == U2, LinearSet(T, frame.h, U2)


def desarguesian_spread(frame: SubgeometryFrame, theta: ProjSubspace | None = None,
                        cap: int | None = None) -> Spread:
    """X(P) = <P, P^Ψ, ..., P^{Ψ^{n-1}}> ∩ Σ for the points P of Θ."""
    T = frame.tower
    theta = frame.theta if theta is None else theta
    S = frame.sigma()
    elems = []
    for P in points_array(theta, cap):
        Xs = ProjSubspace.span_of(T.Fqn, frame.N, np.vstack([frame.psi(P[None, :], i) for i in range(T.n)]))
        elems.append(_rational_part(frame, Xs, S))
    return Spread(T.Fq, frame.N, T.n, tuple(sorted(elems, key=lambda X: X.basis.tobytes())))


def _rational_part(frame: SubgeometryFrame, X: ProjSubspace, S: FqSubspace) -> ProjSubspace:
    T = frame.tower
    R = fq_intersect_with_subspace(S, X).basis_vectors()  # entries lie in F_q
    return ProjSubspace.span_of(T.Fq, frame.N, R)


@dataclass
class SpreadRecovery:
    spread: Spread
    verified: bool
    matches_construction: bool
    director_conjugate: int | None
    ells: list[int] | None
    transversal_match: bool

    def to_dict(self) -> dict:
        return {
            "elements": len(self.spread.elements),
            "verified": self.verified,
            "matches_construction": self.matches_construction,
            "director_conjugate": self.director_conjugate,
            "ells": self.ells,
            "transversal_match": self.transversal_match,
        }


def recover_spread_from_linset(ls: LinearSet, frame: SubgeometryFrame,
                               report: PseudoregulusReport, cap: int | None = None) -> SpreadRecovery:
    """D_L = {<Γ, π> ∩ Σ : π in the pseudoregulus}, plus its director data."""
    T = frame.tower
    S = frame.sigma()
    elems = []
    for pi in report.elements:
        emb = ProjSubspace.span_of(T.Fqn, frame.N, frame.from_lambda(pi.basis))
        elems.append(_rational_part(frame, span(frame.gamma, emb), S))
    spread = Spread(T.Fq, frame.N, T.n, tuple(sorted(elems, key=lambda X: X.basis.tobytes())))
    ok, why = verify_spread(spread, cap)
    if not ok:
        raise SpreadAxiomViolation(why or "spread check failed")
    same = spread.same_as(desarguesian_spread(frame, cap=cap))
    trans = [ProjSubspace.span_of(T.Fqn, frame.N, frame.from_lambda(X.basis)) for X in report.transversals]
    a, ells = _director_search(frame, spread, trans)
    return SpreadRecovery(spread, ok, same, a, ells, ells is not None)


def _director_search(frame: SubgeometryFrame, spread: Spread,
                     trans: Sequence[ProjSubspace]) -> tuple[int | None, list[int] | None]:
    """Find a director Θ̄ among the conjugates of Θ and exponents ℓ_i, ℓ_1 = 0, with

    T_i = <Γ, Θ̄^{Ψ^{ℓ_i}}> ∩ Λ and Γ spanned by the remaining conjugates.
    """
    n = frame.tower.n
    if not trans:
        return None, None
    for a in range(n):
        tb = frame.conjugate(frame.theta, a)
        if not verify_director(spread, tb, frame.psi):
            continue
        conj = frame.conjugates(tb)
        meets = [intersect(span(frame.gamma, c), frame.lam) for c in conj]
        ells = []
        for Ti in trans:
            hits = [m for m in range(n) if meets[m] == Ti]
            if not hits:
                break
            ells.append(hits[0])
        if len(ells) != len(trans) or ells[0] != 0 or len(set(ells)) != len(ells):
            continue
        rest = [conj[j] for j in range(n) if j not in ells]
        G = span_all(rest) if rest else ProjSubspace.empty(frame.gamma.field, frame.N)
        if G == frame.gamma:
            return a, ells
    return None, None


# -- classification ------------------------------------------------------------


def invariant_profile(ls: LinearSet, h: int | None = None, cap: int | None = None) -> dict:
    h = ls.h if h is None else h
    rep = detect_pseudoregulus(ls, h, strict=False, cap=cap)
    return {
        "rank": ls.rank,
        "size": ls.size,
        "weights": {str(k): v for k, v in sorted(ls.weight_spectrum().items())},
        "pseudoregulus": len(rep.elements),
        "transversals": len(rep.transversals),
    }


def _require_moore(spec: LinearSetSpec, cap: int | None = None) -> None:
    T = make_tower(spec.q, spec.n)
    if not is_moore(spec.exponents, T, cap=cap).is_moore:
        raise NotMaximumHScattered(f"exponent set {spec.exponents} is not a Moore set")


def equivalent_pseudoregulus_type(spec1: LinearSetSpec, spec2: LinearSetSpec,
                                  cap: int | None = None) -> tuple[bool, int | None]:
    """Shift criterion I_f + s = I_g, valid once both sets are maximum h-scattered."""
    if (spec1.q, spec1.n, spec1.t, spec1.h) != (spec2.q, spec2.n, spec2.t, spec2.h):
        raise AmbientMismatch("specs live in different ambients")
    _require_moore(spec1, cap)
    _require_moore(spec2, cap)
    return monomial_equivalent(spec1.exponents, spec2.exponents, spec1.n)


def asymp_classify(spec: LinearSetSpec, cap: int | None = None) -> dict:
    _require_moore(spec, cap)
    prog = progression(spec.exponents, spec.n)
    rec = {
        "exps": list(spec.exponents),
        "n": spec.n,
        "q": spec.q,
        "h": spec.h,
        "is_progression": prog["is_progression"],
        "s": prog["d"],
        "shift": prog["shift"],
    }
    if spec.h == 1:
        rec["orbit_census"] = shift_orbit_census(spec.n, spec.q, cap)
        rec["phi_half"] = euler_phi(spec.n) // 2
    return rec
