"""F_{q^n}-linear rank-metric codes spanned by q-polynomials."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .config import check_cap
from .errors import CrossCheckError, DuplicateExponent, ExponentOutOfRange
from .fields import FieldTower, tower as make_tower
from .linalg import (
    batch_rank_mod_p,
    left_kernel,
    matmul,
    projective_tuple_chunks,
    rank as mat_rank,
    row_basis,
)
from .linpoly import QPoly, format_qpoly

DEFAULT_CHUNK = 1 << 17


@dataclass(frozen=True, eq=False)
class RankCode:
    """F_{q^n}-span of independent q-polynomials."""

    tower: FieldTower
    generators: tuple[QPoly, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if gens and mat_rank(self.tower.Fqn, self.coeff_matrix()) != len(gens):
            raise ValueError("generators are not F_{q^n}-independent")
        if len(gens) > self.tower.n:
            raise ValueError("a code in L_{n,q} has dimension at most n")

    @property
    def dim(self) -> int:
        return len(self.generators)

    def coeff_matrix(self) -> np.ndarray:
        return np.array([g.coeffs for g in self.generators], dtype=np.int64).reshape(-1, self.tower.n)

    def fq_basis(self) -> np.ndarray:
        """F_q-basis of the code in blown-up coefficient coordinates (n*n per polynomial)."""
        T = self.tower
        rows = [_blow_poly(g.scale(b)) for g in self.generators for b in T.fq_basis(T.Fqn)]
        return row_basis(T.Fq, np.array(rows, dtype=np.int64).reshape(-1, T.n * T.n), T.n * T.n)

    def contains(self, f: QPoly) -> bool:
        M = self.coeff_matrix()
        return mat_rank(self.tower.Fqn, np.vstack([M, f.coeffs])) == self.dim

    def same_code(self, other: RankCode) -> bool:
        return other.dim == self.dim and all(self.contains(g) for g in other.generators)

    def exponent_support(self) -> list[int]:
        return sorted({i for g in self.generators for i in g.support()})


def _blow_poly(f: QPoly) -> np.ndarray:
    T = f.tower
    return T.Fqn.coords(np.array(f.coeffs, dtype=np.int64), T.q, T.n).reshape(-1)


def _check_exponents(I: Iterable[int], n: int) -> tuple[int, ...]:
    I = [int(i) for i in I]
    if len(set(I)) != len(I):
        raise DuplicateExponent(f"repeated exponent in {I}")
    for i in I:
        if not 0 <= i < n:
            raise ExponentOutOfRange(f"exponent {i} not in 0..{n - 1}")
    return tuple(sorted(I))


def monomial_code(tower: FieldTower, I: Iterable[int]) -> RankCode:
    I = _check_exponents(I, tower.n)
    return RankCode(tower, tuple(QPoly.monomial(tower, i) for i in I))


@dataclass
class MrdReport:
    is_mrd: bool
    min_distance: int
    kernel_spectrum: list[int]
    witness: QPoly | None = None
    witness_coeffs: tuple[int, ...] | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "is_mrd": self.is_mrd,
            "min_distance": self.min_distance,
            "kernel_spectrum": list(self.kernel_spectrum),
            "witness": None if self.witness is None else format_qpoly(self.witness),
        }


def _scaled_tables(code: RankCode) -> list[np.ndarray]:
    """T_k[λ] = F_p-matrix of x -> λ·g_k(x), shape (Q, ne, ne), rows = images of the F_p-basis."""
    T = code.tower
    F = T.Fqn
    ne = F.ndigits
    basis = np.array([T.p**j for j in range(ne)], dtype=np.int64)
    lam = np.arange(T.Q, dtype=np.int64)
    tables = []
    for g in code.generators:
        img = g.eval_raw(basis)
        vals = F.mul(lam[:, None], img[None, :])
        tables.append(F.coords(vals, T.p, ne).astype(np.int16))
    return tables


def kernel_sweep(code: RankCode, *, cap: int | None = None, chunk: int = DEFAULT_CHUNK,
                 jobs: int = 1, stop_above: int | None = None, progress=None):
    """Kernel dimension of every codeword up to F_{q^n}-scalars, in lexicographic order.

    Returns ``(spectrum, witness_coeffs, complete)``.  The witness is the first
    codeword (coefficients w.r.t. the generators) whose kernel dimension exceeds
    ``dim - 1``.  With ``stop_above`` set, the sweep stops at the first codeword
    whose kernel dimension exceeds it and the spectrum is partial.
    ``progress(done, total)`` is called after every chunk.
    """
    T = code.tower
    r, n, e, p = code.dim, T.n, T.e, T.p
    total = (T.Q**r - 1) // (T.Q - 1)
    check_cap(total, "projective codewords", cap)
    tables = _scaled_tables(code)
    ne = n * e

    def work(C: np.ndarray):
        M = tables[0][C[:, 0]].astype(np.int16)
        for k in range(1, r):
            M = M + tables[k][C[:, k]]
        ranks = batch_rank_mod_p(M % p, p)
        kd = (ne - ranks) // e
        spec = np.bincount(kd, minlength=n + 1)
        bad = np.flatnonzero(kd > r - 1)
        wit = tuple(int(x) for x in C[bad[0]]) if bad.size else None
        stop = stop_above is not None and bool((kd > stop_above).any())
        return spec, wit, stop, C.shape[0]

    spectrum = np.zeros(n + 1, dtype=np.int64)
    witness = None
    complete = True
    done = 0
    chunks = projective_tuple_chunks(T.Q, r, chunk)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(work, chunks)
            for spec, wit, stop, size in results:
                spectrum += spec
                done += size
                if progress is not None:
                    progress(done, total)
                if witness is None and wit is not None:
                    witness = wit
                if stop:
                    complete = False
                    break
    else:
        for C in chunks:
            spec, wit, stop, size = work(C)
            spectrum += spec
            done += size
            if progress is not None:
                progress(done, total)
            if witness is None and wit is not None:
                witness = wit
            if stop:
                complete = False
                break
    return spectrum, witness, complete


def _combine(code: RankCode, coeffs: Sequence[int]) -> QPoly:
    acc = QPoly.zero(code.tower)
    for c, g in zip(coeffs, code.generators):
        if c:
            acc = acc + g.scale(int(c))
    return acc


def mrd_check(code: RankCode, *, cap: int | None = None, chunk: int = DEFAULT_CHUNK,
              jobs: int = 1, progress=None) -> MrdReport:
    """Full projective sweep: MRD iff every nonzero codeword has kernel dimension < dim."""
    spectrum, wit, _ = kernel_sweep(code, cap=cap, chunk=chunk, jobs=jobs, progress=progress)
    r, n = code.dim, code.tower.n
    kmax = int(np.flatnonzero(spectrum)[-1]) if spectrum.any() else 0
    is_mrd = kmax <= r - 1
    if is_mrd and r > 0 and not all(spectrum[i] > 0 for i in range(r)):
        raise CrossCheckError(f"MRD code with incomplete kernel spectrum {spectrum.tolist()}")
    report = MrdReport(is_mrd, n - kmax, [int(x) for x in spectrum])
    if wit is not None:
        report.witness = _combine(code, wit)
        report.witness_coeffs = wit
    return report


def adjoint_code(code: RankCode) -> RankCode:
    return RankCode(code.tower, tuple(g.adjoint() for g in code.generators))


# -- idealisers ----------------------------------------------------------


def _parity_check(code: RankCode) -> np.ndarray:
    """H with v ∈ C ⇔ v·H = 0 (v in blown-up coordinates)."""
    B = code.fq_basis()
    N = code.tower.n**2
    if B.shape[0] == 0:
        return np.eye(N, dtype=np.int64)
    return left_kernel(code.tower.Fq, B.T).T


def _fq_basis_maps(tower: FieldTower) -> list[QPoly]:
    """F_q-basis of L_{n,q}: β_m x^{q^i}, index i*n + m."""
    return [QPoly.monomial(tower, i, b) for i in range(tower.n) for b in tower.fq_basis(tower.Fqn)]


def _idealiser(code: RankCode, side: str) -> tuple[int, list[QPoly]]:
    T = code.tower
    H = _parity_check(code)
    # φ ↦ φ∘f is only F_q-linear, so impose it on an F_q-spanning set of C
    spanning = [g.scale(b) for g in code.generators for b in T.fq_basis(T.Fqn)]
    rows = []
    for phi in _fq_basis_maps(T):
        blocks = []
        for f in spanning:
            prod = phi.compose(f) if side == "left" else f.compose(phi)
            blocks.append(matmul(T.Fq, _blow_poly(prod)[None, :], H)[0])
        rows.append(np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64))
    A = np.array(rows, dtype=np.int64).reshape(T.n**2, -1)
    if A.shape[1] == 0:
        sol = np.eye(T.n**2, dtype=np.int64)
    else:
        sol = left_kernel(T.Fq, A)
    basis = []
    for v in sol:
        coeffs = T.Fqn.from_coords(v.reshape(T.n, T.n), T.q)
        basis.append(QPoly(T, tuple(int(c) for c in np.atleast_1d(coeffs))))
    return len(basis), basis


def left_idealiser(code: RankCode) -> tuple[int, list[QPoly]]:
    """F_q-dimension and basis of {φ : φ∘f ∈ C for all f ∈ C}."""
    return _idealiser(code, "left")


def right_idealiser(code: RankCode) -> tuple[int, list[QPoly]]:
    """F_q-dimension and basis of {φ : f∘φ ∈ C for all f ∈ C}."""
    return _idealiser(code, "right")


# -- monomial codes --------------------------------------------------------


def shift_set(I: Iterable[int], s: int, n: int) -> tuple[int, ...]:
    return tuple(sorted((i + s) % n for i in I))


def monomial_equivalent(I1: Iterable[int], I2: Iterable[int], n: int) -> tuple[bool, int | None]:
    """Whether the two sets differ by a cyclic shift; returns the least s with I1 + s = I2."""
    B = tuple(sorted(set(I2)))
    I1 = tuple(I1)
    for s in range(n):
        if shift_set(I1, s, n) == B:
            return True, s
    return False, None


def gabidulin_subprogression(I: Iterable[int], n: int) -> tuple[int, list[int]]:
    """Longest {a, a+d, ...} ⊆ I (mod n) with gcd(d, n) = 1.

    This lower-bounds the Gabidulin index of the monomial code.  Ties go to the
    least d, then the least start.
    """
    I = sorted(set(int(i) % n for i in I))
    if not I:
        return 0, []
    best: list[int] = [I[0]]
    S = set(I)
    for d in range(1, n):
        if gcd(d, n) != 1:
            continue
        for a in I:
            run = [a]
            while len(run) < n and (run[-1] + d) % n in S:
                run.append((run[-1] + d) % n)
            if len(run) > len(best):
                best = run
    return len(best), best


def complement(I: Iterable[int], n: int) -> tuple[int, ...]:
    S = set(I)
    return tuple(i for i in range(n) if i not in S)


@lru_cache(maxsize=None)
def validate_complement_reduction(max_n: int = 5, q: int = 2) -> bool:
    """Check exhaustively that I and its complement give MRD codes together."""
    for n in range(2, max_n + 1):
        T = make_tower(q, n)
        for k in range(1, n):
            for I in itertools.combinations(range(n), k):
                a = mrd_check(monomial_code(T, I)).is_mrd
                b = mrd_check(monomial_code(T, complement(I, n))).is_mrd
                if a != b:
                    return False
    return True


def mrd_check_monomial(tower: FieldTower, I: Iterable[int], *, use_complement: bool = True,
                       cap: int | None = None, jobs: int = 1) -> tuple[bool, str]:
    """MRD status of the monomial code on I, via the smaller of I and its complement.

    The complement route is taken only when it is cheaper and the reduction
    has passed :func:`validate_complement_reduction`.  Returns the verdict and
    the route taken (``"direct"`` or ``"complement"``).
    """
    I = _check_exponents(I, tower.n)
    J = complement(I, tower.n)
    if use_complement and 0 < len(J) < len(I) and validate_complement_reduction():
        return mrd_check(monomial_code(tower, J), cap=cap, jobs=jobs).is_mrd, "complement"
    return mrd_check(monomial_code(tower, I), cap=cap, jobs=jobs).is_mrd, "direct"
