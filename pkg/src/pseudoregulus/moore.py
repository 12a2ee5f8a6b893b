"""Moore exponent sets: determinant oracle, MRD criterion, search and progressions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .config import check_cap
from .errors import ArityMismatch, CrossCheckError, SizeCapExceeded
from .fields import FieldTower, tower as make_tower
from .linalg import batch_rank, batch_rank_mod_p, det, left_kernel
from .rankcodes import (
    _check_exponents,
    _combine,
    complement,
    kernel_sweep,
    monomial_code,
    validate_complement_reduction,
)

ORACLE_CAP = 1 << 22
DET_CHUNK = 1 << 15


@dataclass(frozen=True)
class ExponentSet:
    n: int
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", _check_exponents(self.exps, self.n))

    @classmethod
    def parse(cls, text: str, n: int) -> ExponentSet:
        return cls(n, tuple(int(x) for x in text.replace(" ", "").split(",") if x != ""))

    @property
    def k(self) -> int:
        return len(self.exps)

    def shift(self, s: int) -> ExponentSet:
        return ExponentSet(self.n, tuple((i + s) % self.n for i in self.exps))

    def normalized(self) -> ExponentSet:
        """Shift so that the least element is 0."""
        return self.shift(-self.exps[0]) if self.exps else self

    def canonical(self) -> ExponentSet:
        """Lexicographically least member of the shift class containing 0."""
        return min((self.shift(-i) for i in self.exps), key=lambda e: e.exps)


@dataclass
class MooreVerdict:
    exps: tuple[int, ...]
    n: int
    q: int
    is_moore: bool
    method: str
    witness: tuple[int, ...] | None
    progression: dict
    route: str = field(default="direct", repr=False)

    def to_dict(self) -> dict:
        return {
            "exps": list(self.exps),
            "n": self.n,
            "q": self.q,
            "is_moore": self.is_moore,
            "method": self.method,
            "witness": None if self.witness is None else list(self.witness),
            "progression": dict(self.progression),
        }


def _exps(I, n: int) -> tuple[int, ...]:
    return I.exps if isinstance(I, ExponentSet) else _check_exponents(I, n)


def moore_matrix(tower: FieldTower, A: Sequence[int], I) -> np.ndarray:
    """Entry (j, l) = α_j^{q^{i_l}}."""
    I = _exps(I, tower.n)
    if len(A) != len(I):
        raise ArityMismatch(f"{len(A)} elements for {len(I)} exponents")
    a = np.array(A, dtype=np.int64)
    return np.stack([tower.frob(tower.Fqn, a, i) for i in I], axis=-1).reshape(len(A), len(I))


def moore_det(tower: FieldTower, A: Sequence[int], I) -> int:
    return det(tower.Fqn, moore_matrix(tower, A, I))


def fq_independent(tower: FieldTower, tuples: np.ndarray) -> np.ndarray:
    """Row-wise F_q-independence of (B, k) tuples of F_{q^n} codes."""
    C = tower.Fqn.coords(tuples, tower.q, tower.n)  # (B, k, n)
    k = tuples.shape[1]
    if tower.e == 1:
        return batch_rank_mod_p(C, tower.p) == k
    return batch_rank(tower.Fq, C) == k


def det_oracle_count(tower: FieldTower, k: int) -> int:
    """Tuples visited by the oracle: α_0 is normalised to 1."""
    return tower.Q ** max(k - 1, 0)


def _det_sweep(tower: FieldTower, I: tuple[int, ...], cap: int | None):
    k = len(I)
    if k == 0:
        return None
    check_cap(det_oracle_count(tower, k), "Moore determinant oracle", cap)
    F = tower.Fqn
    total = det_oracle_count(tower, k)
    for start in range(0, total, DET_CHUNK):
        idx = np.arange(start, min(total, start + DET_CHUNK), dtype=np.int64)
        tails = np.stack([(idx // tower.Q ** (k - 2 - i)) % tower.Q for i in range(k - 1)],
                         axis=-1) if k > 1 else np.zeros((idx.size, 0), dtype=np.int64)
        A = np.hstack([np.ones((idx.size, 1), dtype=np.int64), tails])
        ok = fq_independent(tower, A)
        if not ok.any():
            continue
        A = A[ok]
        M = np.stack([tower.frob(F, A, i) for i in I], axis=-1)  # (B, k, k)
        bad = np.flatnonzero(batch_rank(F, M) < k)
        if bad.size:
            return tuple(int(x) for x in A[bad[0]])
    return None


def _kernel_witness(tower: FieldTower, f, k: int) -> tuple[int, ...]:
    """k F_q-independent roots of f; they make det M_{A,I} vanish."""
    K = left_kernel(tower.Fq, f.as_fq_matrix())
    return tuple(int(x) for x in tower.Fqn.from_coords(K[:k], tower.q))


def progression(I, n: int) -> dict:
    """Is I a shift of {0, d, ..., (k-1)d} with gcd(d, n) = 1?  Least d, then least shift."""
    I = tuple(sorted(set(I)))
    k = len(I)
    if k == 0:
        return {"is_progression": False, "d": None, "shift": None}
    for d in range(1, n if n > 1 else 2):
        if gcd(d, n) != 1:
            continue
        for s in range(n):
            if tuple(sorted((s + j * d) % n for j in range(k))) == I:
                return {"is_progression": True, "d": d, "shift": s}
    return {"is_progression": False, "d": None, "shift": None}


def is_moore_det(I, tower: FieldTower, cap: int | None = None) -> MooreVerdict:
    I = _exps(I, tower.n)
    wit = _det_sweep(tower, I, cap)
    return MooreVerdict(I, tower.n, tower.q, wit is None, "det-oracle", wit, progression(I, tower.n))


def is_moore_mrd(I, tower: FieldTower, cap: int | None = None, jobs: int = 1,
                 use_complement: bool = False, progress=None) -> MooreVerdict:
    I = _exps(I, tower.n)
    k = len(I)
    route = "direct"
    if use_complement:
        J = complement(I, tower.n)
        if 0 < len(J) < k and validate_complement_reduction():
            code = monomial_code(tower, J)
            _, wJ, _ = kernel_sweep(code, cap=cap, jobs=jobs, stop_above=len(J) - 1,
                                    progress=progress)
            if wJ is None:
                return MooreVerdict(I, tower.n, tower.q, True, "mrd-criterion", None,
                                    progression(I, tower.n), route="complement")
            route = "complement"
    code = monomial_code(tower, I)
    _, w, _ = kernel_sweep(code, cap=cap, jobs=jobs, stop_above=k - 1, progress=progress)
    witness = None
    if w is not None:
        witness = _kernel_witness(tower, _combine(code, w), k)
    return MooreVerdict(I, tower.n, tower.q, w is None, "mrd-criterion", witness,
                        progression(I, tower.n), route=route)


def is_moore(I, tower: FieldTower, method: str = "auto", *, cap: int | None = None,
             oracle_cap: int = ORACLE_CAP, jobs: int = 1, use_complement: bool = False,
             progress=None) -> MooreVerdict:
    """Verdict by the MRD criterion, cross-checked against the determinant oracle when small."""
    I = _exps(I, tower.n)
    k = len(I)
    if method == "det":
        return is_moore_det(I, tower, cap=min(oracle_cap, cap) if cap else oracle_cap)
    if method == "mrd":
        return is_moore_mrd(I, tower, cap, jobs, use_complement, progress)
    if method not in ("auto", "both"):
        raise ValueError(f"unknown method {method!r}")
    oracle_ok = det_oracle_count(tower, k) <= oracle_cap
    if method == "both" and not oracle_ok:
        raise SizeCapExceeded("determinant oracle over the oracle cap")
    try:
        m = is_moore_mrd(I, tower, cap, jobs, use_complement, progress)
    except SizeCapExceeded:
        if not oracle_ok:
            raise
        return is_moore_det(I, tower, cap=oracle_cap)
    if not oracle_ok:
        return m
    d = is_moore_det(I, tower, cap=oracle_cap)
    if d.is_moore != m.is_moore:
        raise CrossCheckError(f"criteria disagree on {I} (q={tower.q}, n={tower.n}): "
                              f"det={d.is_moore} mrd={m.is_moore}")
    return MooreVerdict(I, tower.n, tower.q, m.is_moore, "both", d.witness, m.progression, m.route)


def normalized_sets(n: int, k: int, up_to_shift: bool = False) -> list[tuple[int, ...]]:
    """Size-k subsets of {0..n-1} containing 0 (one per shift class if asked), sorted."""
    if k == 0 or k > n:
        return []
    out = [(0,) + c for c in itertools.combinations(range(1, n), k - 1)]
    if up_to_shift:
        out = sorted({ExponentSet(n, I).canonical().exps for I in out})
    return out


def search_all(tower: FieldTower, k: int, up_to_shift: bool = True, *, method: str = "auto",
               cap: int | None = None, jobs: int = 1) -> list[MooreVerdict]:
    sets = normalized_sets(tower.n, k, up_to_shift)
    check_cap(len(sets) * max(1, (tower.Q**k - 1) // (tower.Q - 1)), "exponent-set search", cap)
    return [is_moore(I, tower, method, cap=cap, jobs=jobs) for I in sets]


def check_fix_intersection(I: Iterable[int], n: int) -> bool:
    """gcd(I ∖ {0}, n) = 1: the fixed fields of the companion automorphisms meet in F_q."""
    I = set(I)
    if 0 not in I:
        raise ValueError("exponent set must contain 0")
    g = n
    for i in I - {0}:
        g = gcd(g, i)
    return g == 1


def check_gcd_pair(I: Iterable[int], n: int) -> bool:
    I = sorted(set(I))
    if len(I) != 3:
        raise ArityMismatch("expected an exponent set of size 3")
    if I[0] != 0:
        raise ValueError("exponent set must contain 0")
    return gcd(I[1], n) == 1 or gcd(I[2], n) == 1


def euler_phi(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if gcd(d, n) == 1)


def shift_orbit_census(n: int, q: int = 2, cap: int | None = None) -> int:
    """Number of shift classes of size-2 Moore sets, by the MRD criterion."""
    T = make_tower(q, n)
    return sum(is_moore(I, T, "mrd", cap=cap).is_moore for I in normalized_sets(n, 2, True))
