from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudoregulus.errors import (
    DivisionByZero,
    LayerMismatch,
    NonPrimeCharacteristic,
    NotInSubfield,
    SizeCapExceeded,
)
from pseudoregulus.fields import (
    FieldTower,
    GF,
    TowerParams,
    build_tower,
    is_irreducible,
    least_irreducible,
    tower,
)

from conftest import code_to_tuple, naive_irreducible, naive_mul, tuple_to_code


def _least_irreducible_oracle(p: int, d: int) -> tuple[int, ...]:
    for body in itertools.product(range(p), repeat=d):
        f = body + (1,)
        if naive_irreducible(p, f):
            return f
    raise AssertionError


class TestModuli:
    def test_f4_modulus(self, F4):
        assert F4.moduli["qn"] == (1, 1, 1)

    def test_prime_field_has_no_moduli(self):
        T = build_tower(TowerParams(3))
        assert T.moduli == {"q": None, "qn": None, "qnt": None}
        assert T.Fqnt.order == 3

    @pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2)])
    def test_least_irreducible_over_prime_field(self, p, d):
        assert least_irreducible(GF(p), d) == _least_irreducible_oracle(p, d)

    def test_f8_f64_tower(self, T8x2):
        assert T8x2.moduli["qn"] == _least_irreducible_oracle(2, 3)
        # degree-2 step: lexicographically first monic quadratic over F_8 with no root
        F8 = T8x2.Fqn
        for c0, c1 in itertools.product(range(8), repeat=2):
            f = (c0, c1, 1)
            roots = [x for x in range(8) if F8.add(F8.add(F8.mul(x, x), F8.mul(c1, x)), c0) == 0]
            if not roots:
                break
        assert T8x2.moduli["qnt"] == f

    def test_every_modulus_irreducible(self):
        for q, n, t in [(2, 3, 2), (3, 2, 2), (4, 2, 2), (2, 4, 2), (3, 5, 1)]:
            T = tower(q, n, t)
            for name, B in (("q", T.Fp), ("qn", T.Fq), ("qnt", T.Fqn)):
                f = T.moduli[name]
                if f is not None:
                    assert is_irreducible(B, f)

    def test_rebuild_is_identical(self):
        a = FieldTower(TowerParams(2, 1, 3, 2))
        b = FieldTower(TowerParams(2, 1, 3, 2))
        assert a.moduli == b.moduli
        assert np.array_equal(a.Fqnt.exp, b.Fqnt.exp)

    def test_non_prime_characteristic(self):
        with pytest.raises(NonPrimeCharacteristic):
            TowerParams(4)
        with pytest.raises(NonPrimeCharacteristic):
            tower(6, 2)

    def test_size_cap(self):
        with pytest.raises(SizeCapExceeded):
            FieldTower(TowerParams(2, 1, 8, 2), cap=1000)


class TestArithmetic:
    def test_f4_examples(self, F4):
        w = F4.elt("qn", 2)
        assert int(w + w) == 0
        assert int(w * w) == 3
        assert int(F4.frobenius(w, 1)) == 3
        assert int(F4.trace_to_base(w)) == 1
        assert int(F4.trace_to_base(F4.elt("qn", 0))) == 0

    def test_f8_inverses(self, T8):
        for a in range(1, 8):
            x = T8.elt("qn", a)
            assert int(x * x.inv()) == 1

    def test_division_by_zero(self, T8):
        with pytest.raises(DivisionByZero):
            T8.elt("qn", 0).inv()

    def test_layer_mismatch(self, T8x2):
        with pytest.raises(LayerMismatch):
            T8x2.elt("qn", 1) + T8x2.elt("qnt", 1)

    @pytest.mark.parametrize("q,n", [(2, 6), (3, 4), (5, 2), (2, 2)])
    def test_mul_matches_schoolbook(self, q, n):
        T = tower(q, n)
        F, f = T.Fqn, T.moduli["qn"]
        for a, b in itertools.product(range(F.order), repeat=2):
            want = tuple_to_code(naive_mul(q, f, code_to_tuple(a, q, n), code_to_tuple(b, q, n)), q)
            assert F.mul(a, b) == want

    def test_exhaustive_axioms_f64(self, T8x2):
        F = T8x2.Fqnt
        a, b = np.meshgrid(np.arange(64), np.arange(64), indexing="ij")
        assert np.array_equal(F.mul(a, b), F.mul(b, a))
        assert np.array_equal(F.add(a, b), F.add(b, a))
        for c in range(64):
            assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
            assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
        nz = np.arange(1, 64)
        assert (F.mul(nz, F.inv(nz)) == 1).all()

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 3**10 - 1), st.integers(0, 3**10 - 1), st.integers(0, 3**10 - 1))
    def test_sampled_axioms_large_layer(self, a, b, c):
        F = tower(3, 5, 2).Fqnt
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        if a:
            assert F.mul(a, F.inv(a)) == 1

    def test_pow(self, T8):
        F = T8.Fqn
        for a in range(8):
            acc = 1
            for k in range(10):
                assert F.pow(a, k) == acc
                acc = F.mul(acc, a)


class TestFrobenius:
    def test_identity_and_period(self, T8x2):
        for L, d in ((T8x2.Fqn, 3), (T8x2.Fqnt, 6)):
            a = np.arange(L.order)
            assert np.array_equal(T8x2.frob(L, a, 0), a)
            assert np.array_equal(T8x2.frob(L, a, d), a)
            assert np.array_equal(T8x2.frob(L, T8x2.frob(L, a, 1), 1), T8x2.frob(L, a, 2))

    @pytest.mark.parametrize("q,n", [(2, 3), (2, 4), (3, 3), (4, 2)])
    def test_fixed_field_is_base(self, q, n):
        T = tower(q, n)
        a = np.arange(T.Q)
        fixed = np.flatnonzero(T.frob(T.Fqn, a, 1) == a)
        assert fixed.tolist() == list(range(q))

    def test_linear_and_multiplicative(self, T8x2):
        F = T8x2.Fqnt
        a, b = np.meshgrid(np.arange(64), np.arange(64), indexing="ij")
        fa, fb = T8x2.frob(F, a, 1), T8x2.frob(F, b, 1)
        assert np.array_equal(T8x2.frob(F, F.add(a, b), 1), F.add(fa, fb))
        assert np.array_equal(T8x2.frob(F, F.mul(a, b), 1), F.mul(fa, fb))

    def test_base_layer_rejects_nontrivial(self, T8):
        with pytest.raises(LayerMismatch):
            T8.frobenius(T8.elt("q", 1), 1)
        assert int(T8.frobenius(T8.elt("q", 1), 0)) == 1


class TestTraceNormEmbed:
    def test_trace_kernel_f8(self, T8):
        vals = [int(T8.trace_to_base(a)) for a in T8.enumerate("qn")]
        assert vals.count(0) == 4

    @pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (3, 3), (4, 2)])
    def test_trace_surjective_and_linear(self, q, n):
        T = tower(q, n)
        a = np.arange(T.Q)
        tr = T.trace_raw(a)
        assert set(tr.tolist()) == set(range(q))
        for c in range(q):
            b = np.roll(a, 1)
            assert np.array_equal(T.trace_raw(T.Fqn.add(a, T.Fqn.mul(c, b))),
                                  T.Fq.add(tr, T.Fq.mul(c, T.trace_raw(b))))

    def test_norm_lands_in_base(self, T8):
        for a in range(1, 8):
            assert int(T8.norm_to_base(T8.elt("qn", a))) == 1

    def test_embed_restrict(self, F4, T8x2):
        one = F4.elt("q", 1)
        assert int(F4.embed(one, "qn")) == 1
        with pytest.raises(NotInSubfield):
            F4.try_restrict(F4.elt("qn", 2), "q")
        for a in T8x2.enumerate("qn"):
            assert T8x2.try_restrict(T8x2.embed(a, "qnt"), "qn") == a

    def test_embedding_is_a_ring_morphism(self, T8x2):
        Fn, Ft = T8x2.Fqn, T8x2.Fqnt
        for a, b in itertools.product(range(8), repeat=2):
            assert Ft.mul(a, b) == Fn.mul(a, b)
            assert Ft.add(a, b) == Fn.add(a, b)

    def test_restrict_fails_exactly_outside_image(self, T8x2):
        # F_8 inside F_64 is the fixed field of x -> x^8
        a = np.arange(64)
        fixed = set(np.flatnonzero(T8x2.Fqnt.pow(a, 8) == a).tolist())
        for x in range(64):
            e = T8x2.elt("qnt", x)
            if x in fixed:
                T8x2.try_restrict(e, "qn")
            else:
                with pytest.raises(NotInSubfield):
                    T8x2.try_restrict(e, "qn")


class TestEnumerate:
    def test_small(self, F4):
        assert [int(a) for a in tower(2).enumerate("q")] == [0, 1]
        vals = [int(a) for a in F4.enumerate("qn")]
        assert vals[:2] == [0, 1] and len(vals) == 4

    def test_f64_distinct(self, T8x2):
        assert len({int(a) for a in T8x2.enumerate("qnt")}) == 64

    def test_cap(self, T8x2):
        with pytest.raises(SizeCapExceeded):
            list(T8x2.enumerate("qnt", cap=10))
