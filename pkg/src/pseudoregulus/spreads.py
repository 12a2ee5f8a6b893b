"""Spread axioms and director-space checks on point bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import check_cap
from .errors import DimensionMismatch
from .fields import GF
from .linalg import ProjSubspace, batch_rank, points_array, rank


@dataclass(frozen=True, eq=False)
class Spread:
    """Family of (n-1)-dimensional subspaces of PG(N-1, q), N = n*t."""

    field: GF
    ambient_dim: int
    n: int
    elements: tuple[ProjSubspace, ...]

    def keys(self) -> set:
        return {e.key for e in self.elements}

    def same_as(self, other: Spread) -> bool:
        return (self.ambient_dim == other.ambient_dim and len(self.elements) == len(other.elements)
                and self.keys() == other.keys())


def point_index(F: GF, pts: np.ndarray) -> np.ndarray:
    """Integer index of normalised points: the vector read as a base-|F| number."""
    weights = F.order ** np.arange(pts.shape[-1] - 1, -1, -1, dtype=np.int64)
    return (pts * weights).sum(axis=-1)


def verify_spread(s: Spread, cap: int | None = None) -> tuple[bool, str | None]:
    """Pairwise disjointness, cover of every point and element count."""
    F, N, n = s.field, s.ambient_dim, s.n
    check_cap(F.order**N, "spread point bitset", cap)
    covered = np.zeros(F.order**N, dtype=bool)
    for j, X in enumerate(s.elements):
        if X.rank != n:
            return False, f"element {j} has rank {X.rank}, expected {n}"
        idx = point_index(F, points_array(X, cap))
        if covered[idx].any():
            return False, f"element {j} meets an earlier element"
        covered[idx] = True
    total = (F.order**N - 1) // (F.order - 1)
    if covered.sum() != total:
        return False, f"{total - int(covered.sum())} points uncovered"
    expected = (F.order**N - 1) // (F.order**n - 1)
    if len(s.elements) != expected:
        return False, f"{len(s.elements)} elements, expected {expected}"
    return True, None


def verify_director(s: Spread, H: ProjSubspace, psi: Callable[[np.ndarray], np.ndarray]) -> bool:
    """H spans the space with its conjugates and meets the extension of every element."""
    N, n = s.ambient_dim, s.n
    t = N // n
    if H.rank != t or H.ambient_dim != N:
        raise DimensionMismatch(f"director candidate must have rank {t} in dimension {N}")
    F = H.field
    conj = [H.basis]
    for _ in range(n - 1):
        conj.append(psi(conj[-1]))
    if rank(F, np.vstack(conj)) != N:
        return False
    # F_q codes embed as themselves, so an element basis is also a basis of its extension
    mats = np.stack([np.vstack([H.basis, X.basis]) for X in s.elements])
    return bool((batch_rank(F, mats) < t + n).all())
