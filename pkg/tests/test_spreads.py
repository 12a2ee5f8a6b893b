from __future__ import annotations

import numpy as np
import pytest

from pseudoregulus.errors import DimensionMismatch, SizeCapExceeded
from pseudoregulus.fields import tower
from pseudoregulus.linalg import ProjSubspace, rank
from pseudoregulus.linsets import build_subgeometry_frame, desarguesian_spread
from pseudoregulus.spreads import Spread, point_index, verify_director, verify_spread


@pytest.fixture(scope="module")
def frame():
    return build_subgeometry_frame(tower(2, 3, 2), [0, 1])


@pytest.fixture(scope="module")
def spread(frame):
    return desarguesian_spread(frame)


def test_desarguesian_is_a_spread(spread):
    assert len(spread.elements) == 9
    assert all(e.rank == 3 for e in spread.elements)
    assert verify_spread(spread) == (True, None)


def test_cover_by_brute_force(spread):
    # every one of the 63 points of PG(5,2) lies in exactly one element
    F2 = spread.field
    pts = ProjSubspace.whole(F2, 6).points()
    hits = np.array([[e.contains(p) for e in spread.elements] for p in pts])
    assert pts.shape[0] == 63 and (hits.sum(axis=1) == 1).all()


def test_drop_an_element(spread):
    s = Spread(spread.field, spread.ambient_dim, spread.n, spread.elements[1:])
    ok, why = verify_spread(s)
    assert not ok and "uncovered" in why


def test_duplicate_an_element(spread):
    s = Spread(spread.field, spread.ambient_dim, spread.n, spread.elements + spread.elements[:1])
    ok, why = verify_spread(s)
    assert not ok and "meets" in why


def test_wrong_rank(spread):
    bad = ProjSubspace.span_of(spread.field, 6, spread.elements[0].basis[:2])
    s = Spread(spread.field, 6, 3, (bad,) + spread.elements[1:])
    assert not verify_spread(s)[0]


def test_cap(spread):
    with pytest.raises(SizeCapExceeded):
        verify_spread(spread, cap=10)


def test_point_index_is_injective():
    F = tower(2, 2).Fqn
    pts = ProjSubspace.whole(F, 3).points()
    assert len(set(point_index(F, pts).tolist())) == 21


def test_conjugates_are_directors(frame, spread):
    for i in range(3):
        assert verify_director(spread, frame.conjugate(frame.theta, i), frame.psi)


def test_generic_line_fails(frame, spread):
    # deterministic search for a line failing the meet condition
    rng = np.random.default_rng(0)
    F = frame.tower.Fqn
    for _ in range(200):
        B = rng.integers(0, 8, size=(2, 6))
        if rank(F, B) < 2:
            continue
        H = ProjSubspace.span_of(F, 6, B)
        if not verify_director(spread, H, frame.psi):
            return
    pytest.fail("no non-director found")


def test_exactly_the_conjugates_pass(frame, spread):
    # sampled candidate pool plus all conjugates: only the conjugates are directors
    F = frame.tower.Fqn
    conj = {frame.conjugate(frame.theta, i).key for i in range(3)}
    rng = np.random.default_rng(5)
    pool = [frame.conjugate(frame.theta, i) for i in range(3)]
    while len(pool) < 400:
        B = rng.integers(0, 8, size=(2, 6))
        if rank(F, B) == 2:
            pool.append(ProjSubspace.span_of(F, 6, B))
    passed = {H.key for H in pool if verify_director(spread, H, frame.psi)}
    assert passed == conj


def test_director_dimension(frame, spread):
    with pytest.raises(DimensionMismatch):
        verify_director(spread, ProjSubspace.span_of(frame.tower.Fqn, 6, [[1, 0, 0, 0, 0, 0]]), frame.psi)


def test_other_theta_other_spread(frame):
    # a different director line gives a different (still valid) Desarguesian spread
    T = frame.tower
    rng = np.random.default_rng(11)
    from pseudoregulus.linsets import _theta_ok
    while True:
        B = rng.integers(0, 8, size=(2, 6))
        if rank(T.Fqn, B) == 2 and _theta_ok(T, B):
            break
    s2 = desarguesian_spread(frame, ProjSubspace.span_of(T.Fqn, 6, B))
    assert verify_spread(s2)[0]
    assert verify_director(s2, ProjSubspace.span_of(T.Fqn, 6, B), frame.psi)


def test_n4_spread():
    f = build_subgeometry_frame(tower(2, 4, 2), [0, 1])
    s = desarguesian_spread(f)
    assert len(s.elements) == 17 and verify_spread(s)[0]
    assert verify_director(s, f.theta, f.psi)
