"""Finite field tower F_p < F_q < F_{q^n} < F_{q^{nt}}.

Every element is an ``int`` in canonical encoding: an element of a layer of
degree d over the layer below (of size s) with coefficients c_0..c_{d-1}
(constant term first) is encoded as ``sum(c_i * s**i)``.  Since the encoding
is positional all the way down, every element is its base-p digit string and
the inclusions F_p < F_q < F_{q^n} < F_{q^{nt}} are the identity on codes.

Arithmetic works on Python ints and on numpy integer arrays alike.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

import numpy as np

from .config import check_cap
from .errors import (
    DivisionByZero,
    LayerMismatch,
    NonPrimeCharacteristic,
    NotInSubfield,
)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise NonPrimeCharacteristic."""
    if q < 2:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    e = 0
    m = q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return p, e


def _is_scalar(a) -> bool:
    return isinstance(a, (int, np.integer))


class GF:
    """One layer of the tower.

    ``base`` is the layer directly below (``None`` for the prime field) and
    ``modulus`` the monic defining polynomial over it, given as base codes
    from the constant term up.
    """

    def __init__(self, p: int, base: GF | None = None, modulus: tuple[int, ...] | None = None):
        self.p = p
        self.base = base
        self.modulus = modulus
        if base is None:
            self.degree = 1
            self.order = p
        else:
            self.degree = len(modulus) - 1
            self.order = base.order**self.degree
        self.ndigits = 0
        m = self.order
        while m > 1:
            m //= p
            self.ndigits += 1

    def __repr__(self) -> str:
        return f"GF({self.order})"

    # -- tables -----------------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        if self.base is None:
            return a * b % self.p
        B, d, s = self.base, self.degree, self.base.order
        ca = [(a // s**i) % s for i in range(d)]
        cb = [(b // s**i) % s for i in range(d)]
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    if y:
                        prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for j in range(d):
                    prod[k - d + j] = B.sub(prod[k - d + j], B.mul(c, self.modulus[j]))
                prod[k] = 0
        return sum(c * s**i for i, c in enumerate(prod[:d]))

    def _slow_pow(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return r

    @cached_property
    def primitive(self) -> int:
        m = self.order - 1
        if m == 1:
            return 1
        factors = prime_factors(m)
        for g in range(2, self.order):
            if all(self._slow_pow(g, m // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # unreachable in a field

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        m = self.order - 1
        g = self.primitive
        exp = [1] * (m + 1)
        for k in range(1, m + 1):
            exp[k] = self._slow_mul(exp[k - 1], g)
        exp_arr = np.array(exp, dtype=np.int64)
        log_arr = np.zeros(self.order, dtype=np.int64)
        log_arr[exp_arr[:m]] = np.arange(m, dtype=np.int64)
        return exp_arr, log_arr

    @cached_property
    def _lists(self) -> tuple[list[int], list[int]]:
        exp, log = self._tables
        return exp.tolist(), log.tolist()

    @property
    def exp(self) -> np.ndarray:
        return self._tables[0]

    @property
    def log(self) -> np.ndarray:
        return self._tables[1]

    # -- arithmetic -------------------------------------------------------

    def add(self, a, b):
        p = self.p
        if p == 2:
            return a ^ b
        if self.base is None:
            return (a + b) % p
        if _is_scalar(a) and _is_scalar(b):
            a, b = int(a), int(b)
            res, place = 0, 1
            for _ in range(self.ndigits):
                res += ((a // place + b // place) % p) * place
                place *= p
            return res
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        res = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        place = 1
        for _ in range(self.ndigits):
            res += ((a // place + b // place) % p) * place
            place *= p
        return res

    def neg(self, a):
        p = self.p
        if p == 2:
            return a
        if self.base is None:
            return (-a) % p
        if _is_scalar(a):
            a = int(a)
            res, place = 0, 1
            for _ in range(self.ndigits):
                res += ((-(a // place)) % p) * place
                place *= p
            return res
        a = np.asarray(a, dtype=np.int64)
        res = np.zeros_like(a)
        place = 1
        for _ in range(self.ndigits):
            res += ((-(a // place)) % p) * place
            place *= p
        return res

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.base is None:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.base is None:
            return a * b % self.p
        m = self.order - 1
        if _is_scalar(a) and _is_scalar(b):
            if a == 0 or b == 0:
                return 0
            exp, log = self._lists
            return exp[(log[a] + log[b]) % m]
        exp, log = self._tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = exp[(log[a] + log[b]) % m]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a):
        if _is_scalar(a):
            if a == 0:
                raise DivisionByZero("inverse of zero")
            if self.base is None:
                return pow(int(a), self.p - 2, self.p)
            exp, log = self._lists
            return exp[(-log[a]) % (self.order - 1)]
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        exp, log = self._tables
        return exp[(-log[a]) % (self.order - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        m = self.order - 1
        if _is_scalar(a):
            if a == 0:
                if k < 0:
                    raise DivisionByZero("negative power of zero")
                return 1 if k == 0 else 0
            exp, log = self._lists
            return exp[(log[a] * k) % m]
        a = np.asarray(a, dtype=np.int64)
        if k < 0 and np.any(a == 0):
            raise DivisionByZero("negative power of zero")
        exp, log = self._tables
        r = exp[(log[a] * (k % m)) % m]
        if k == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, r)

    # -- coordinates ------------------------------------------------------

    def coords(self, a, base_order: int | None = None, length: int | None = None):
        """Digits of ``a`` in base ``base_order`` (default: the layer below)."""
        s = self.base.order if base_order is None else base_order
        d = self.degree if length is None else length
        if _is_scalar(a):
            a = int(a)
            return [(a // s**i) % s for i in range(d)]
        a = np.asarray(a, dtype=np.int64)
        return np.stack([(a // s**i) % s for i in range(d)], axis=-1)

    def from_coords(self, c, base_order: int | None = None):
        s = self.base.order if base_order is None else base_order
        c = np.asarray(c, dtype=np.int64)
        weights = s ** np.arange(c.shape[-1], dtype=np.int64)
        out = (c * weights).sum(axis=-1)
        return int(out) if out.ndim == 0 else out

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)


# ---------------------------------------------------------------------------
# polynomials over a layer (coefficient lists, constant term first)


def _poly_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_rem(B: GF, a: list[int], b: list[int]) -> list[int]:
    """Remainder of a by monic b."""
    a = list(a)
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for j in range(db + 1):
                a[k - db + j] = B.sub(a[k - db + j], B.mul(c, b[j]))
    return _poly_trim(a[:db])


def _has_root(B: GF, f: tuple[int, ...]) -> bool:
    x = B.elements()
    acc = np.zeros_like(x)
    for c in reversed(f):
        acc = B.add(B.mul(acc, x), c)
    return bool(np.any(acc == 0))


def is_irreducible(B: GF, f: tuple[int, ...]) -> bool:
    """Exhaustive factor search for a monic ``f`` over ``B``."""
    d = len(f) - 1
    if d <= 1:
        return d == 1
    if f[0] == 0 or _has_root(B, f):
        return False
    for k in range(2, d // 2 + 1):
        for tail in itertools.product(range(B.order), repeat=k):
            if not _poly_rem(B, list(f), list(tail) + [1]):
                return False
    return True


def least_irreducible(B: GF, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over B.

    Candidates are compared as coefficient tuples (c_0, ..., c_{d-1}), each
    coefficient by its canonical code.
    """
    for coeffs in itertools.product(range(B.order), repeat=d):
        f = tuple(coeffs) + (1,)
        if is_irreducible(B, f):
            return f
    raise AssertionError("no irreducible polynomial")  # unreachable


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TowerParams:
    p: int
    e: int = 1
    n: int = 1
    t: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise NonPrimeCharacteristic(f"p={self.p} is not prime")
        if min(self.e, self.n, self.t) < 1:
            raise ValueError("degrees e, n, t must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def from_q(cls, q: int, n: int = 1, t: int = 1) -> TowerParams:
        p, e = prime_power(q)
        return cls(p, e, n, t)


@dataclass(frozen=True, eq=False)
class Elt:
    """An element tagged with its layer; thin wrapper used at API edges."""

    layer: GF
    value: int

    def _check(self, other: Elt) -> None:
        if not isinstance(other, Elt) or other.layer is not self.layer:
            raise LayerMismatch(f"{self.layer} vs {getattr(other, 'layer', other)}")

    def __eq__(self, other):
        return isinstance(other, Elt) and other.layer is self.layer and other.value == self.value

    def __hash__(self):
        return hash((id(self.layer), self.value))

    def __add__(self, other: Elt) -> Elt:
        self._check(other)
        return Elt(self.layer, self.layer.add(self.value, other.value))

    def __sub__(self, other: Elt) -> Elt:
        self._check(other)
        return Elt(self.layer, self.layer.sub(self.value, other.value))

    def __mul__(self, other: Elt) -> Elt:
        self._check(other)
        return Elt(self.layer, self.layer.mul(self.value, other.value))

    def __truediv__(self, other: Elt) -> Elt:
        self._check(other)
        return Elt(self.layer, self.layer.div(self.value, other.value))

    def __neg__(self) -> Elt:
        return Elt(self.layer, self.layer.neg(self.value))

    def __pow__(self, k: int) -> Elt:
        return Elt(self.layer, self.layer.pow(self.value, k))

    def inv(self) -> Elt:
        return Elt(self.layer, self.layer.inv(self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value}@{self.layer}"


LAYERS = ("p", "q", "qn", "qnt")


class FieldTower:
    """The tower for one parameter set; immutable after construction."""

    def __init__(self, params: TowerParams, cap: int | None = None):
        self.params = params
        p, e, n, t = params.p, params.e, params.n, params.t
        check_cap(params.q ** (n * t), "tower size q^(nt)", cap)
        self.p, self.e, self.n, self.t = p, e, n, t
        self.q = params.q
        self.Q = self.q**n
        self.moduli: dict[str, tuple[int, ...] | None] = {}
        Fp = GF(p)
        Fq = self._extend(Fp, e, "q")
        Fqn = self._extend(Fq, n, "qn")
        Fqnt = self._extend(Fqn, t, "qnt")
        self.Fp, self.Fq, self.Fqn, self.Fqnt = Fp, Fq, Fqn, Fqnt
        self._by_name = {"p": Fp, "q": Fq, "qn": Fqn, "qnt": Fqnt}

    def _extend(self, B: GF, d: int, name: str) -> GF:
        if d == 1:
            self.moduli[name] = None
            return B
        f = least_irreducible(B, d)
        self.moduli[name] = f
        return GF(self.p, B, f)

    def __repr__(self) -> str:
        return f"FieldTower(p={self.p}, e={self.e}, n={self.n}, t={self.t})"

    def layer(self, name: str | GF) -> GF:
        if isinstance(name, GF):
            return name
        try:
            return self._by_name[name]
        except KeyError:
            raise LayerMismatch(f"unknown layer {name!r}") from None

    def elt(self, layer: str | GF, value: int) -> Elt:
        L = self.layer(layer)
        if not 0 <= value < L.order:
            raise ValueError(f"{value} is not a code of {L}")
        return Elt(L, int(value))

    def degree_over_q(self, L: GF) -> int:
        d, m = 0, L.order
        while m % self.q == 0 and m > 1:
            m //= self.q
            d += 1
        return d if m == 1 else 0

    def frob(self, L: GF, a, i: int):
        """Raw x -> x^(q^i) on codes of layer L (i reduced mod the degree)."""
        d = self.degree_over_q(L)
        if d == 0:
            if i != 0:
                raise LayerMismatch("Frobenius over F_q is undefined below F_q")
            return a
        i %= d
        if i == 0:
            return a
        return L.pow(a, self.q**i)

    def frobenius(self, a: Elt, i: int) -> Elt:
        L = a.layer
        if L.order <= self.q and i != 0:
            raise LayerMismatch("base layers admit only the trivial Frobenius")
        return Elt(L, self.frob(L, a.value, i))

    def trace_raw(self, a):
        """Tr_{q^n/q} on codes of F_{q^n}."""
        L = self.Fqn
        acc = a
        for i in range(1, self.n):
            acc = L.add(acc, self.frob(L, a, i))
        return acc

    def trace_to_base(self, a: Elt) -> Elt:
        if a.layer is not self.Fqn:
            raise LayerMismatch("trace is defined on F_{q^n}")
        return Elt(self.Fq, int(self.trace_raw(a.value)))

    def norm_to_base(self, a: Elt) -> Elt:
        if a.layer is not self.Fqn:
            raise LayerMismatch("norm is defined on F_{q^n}")
        # N(a) = a^((q^n - 1)/(q - 1))
        return Elt(self.Fq, self.Fqn.pow(a.value, (self.Q - 1) // (self.q - 1)))

    def embed(self, a: Elt, target: str | GF) -> Elt:
        T = self.layer(target)
        if T.order < a.layer.order or T.order % a.layer.order:
            raise LayerMismatch(f"cannot embed {a.layer} into {T}")
        return Elt(T, a.value)

    def try_restrict(self, a: Elt, target: str | GF) -> Elt:
        T = self.layer(target)
        if T.order > a.layer.order:
            raise LayerMismatch(f"{T} is not below {a.layer}")
        if a.value >= T.order:
            raise NotInSubfield(f"{a} is not in {T}")
        return Elt(T, a.value)

    def enumerate(self, layer: str | GF, cap: int | None = None) -> Iterator[Elt]:
        L = self.layer(layer)
        check_cap(L.order, f"enumerate {L}", cap)
        return (Elt(L, v) for v in range(L.order))

    def fq_basis(self, L: GF) -> list[int]:
        """Codes of the standard F_q-basis of L (digit positions base q)."""
        return [self.q**j for j in range(self.degree_over_q(L))]


@lru_cache(maxsize=None)
def build_tower(params: TowerParams, cap: int | None = None) -> FieldTower:
    return FieldTower(params, cap)


def tower(q: int, n: int = 1, t: int = 1) -> FieldTower:
    """Convenience: the tower for F_q < F_{q^n} < F_{q^{nt}}."""
    return build_tower(TowerParams.from_q(q, n, t))
