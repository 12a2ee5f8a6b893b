"""q-polynomials over F_{q^n}: evaluation, composition, adjoint and rank."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .config import check_cap
from .errors import LayerMismatch, TowerMismatch
from .fields import Elt, FieldTower
from .linalg import rank as mat_rank


@dataclass(frozen=True, eq=False)
class QPoly:
    """Σ a_i x^{q^i} with exactly n coefficients (codes in F_{q^n})."""

    tower: FieldTower
    coeffs: tuple[int, ...]

    def __post_init__(self):
        n = self.tower.n
        c = tuple(int(a) for a in self.coeffs)
        if len(c) != n:
            raise ValueError(f"expected {n} coefficients, got {len(c)}")
        if any(not 0 <= a < self.tower.Q for a in c):
            raise ValueError("coefficient outside F_{q^n}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def monomial(cls, tower: FieldTower, i: int, a: int = 1) -> QPoly:
        c = [0] * tower.n
        c[i % tower.n] = a
        return cls(tower, tuple(c))

    @classmethod
    def zero(cls, tower: FieldTower) -> QPoly:
        return cls(tower, (0,) * tower.n)

    def __eq__(self, other):
        return isinstance(other, QPoly) and other.tower is self.tower and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"QPoly({format_qpoly(self)})"

    def _same(self, other: QPoly) -> None:
        if other.tower is not self.tower:
            raise TowerMismatch("q-polynomials over different towers")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: QPoly) -> QPoly:
        self._same(other)
        F = self.tower.Fqn
        return QPoly(self.tower, tuple(F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: QPoly) -> QPoly:
        self._same(other)
        F = self.tower.Fqn
        return QPoly(self.tower, tuple(F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, lam: int) -> QPoly:
        """λ·f, i.e. left multiplication by the scalar map."""
        F = self.tower.Fqn
        return QPoly(self.tower, tuple(F.mul(lam, a) for a in self.coeffs))

    def support(self) -> list[int]:
        return [i for i, a in enumerate(self.coeffs) if a]

    # -- as a map -------------------------------------------------------

    def eval_raw(self, x):
        """Evaluate on codes (scalar or array) of F_{q^n}."""
        T, F = self.tower, self.tower.Fqn
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros_like(x)
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add(acc, F.mul(a, T.frob(F, x, i)))
        return int(acc) if acc.ndim == 0 else acc

    def eval(self, x: Elt) -> Elt:
        if x.layer is not self.tower.Fqn:
            raise LayerMismatch("q-polynomials are evaluated on F_{q^n}")
        return Elt(self.tower.Fqn, self.eval_raw(x.value))

    __call__ = eval

    def compose(self, g: QPoly) -> QPoly:
        """(f∘g)(x) = f(g(x)) reduced modulo x^{q^n} - x."""
        self._same(g)
        T, F, n = self.tower, self.tower.Fqn, self.tower.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(g.coeffs):
                if b:
                    k = (i + j) % n
                    out[k] = F.add(out[k], F.mul(a, T.frob(F, b, i)))
        return QPoly(T, tuple(out))

    def adjoint(self) -> QPoly:
        """Coefficient a_i^{q^{n-i}} moves to exponent n - i."""
        T, F, n = self.tower, self.tower.Fqn, self.tower.n
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            out[(n - i) % n] = int(T.frob(F, a, n - i))
        return QPoly(T, tuple(out))

    def as_fq_matrix(self) -> np.ndarray:
        """n×n matrix over F_q; row j holds the coordinates of f(β_j)."""
        T = self.tower
        basis = np.array(T.fq_basis(T.Fqn), dtype=np.int64)
        return T.Fqn.coords(self.eval_raw(basis), T.q, T.n)

    def rank(self) -> int:
        return mat_rank(self.tower.Fq, self.as_fq_matrix())

    def kernel_dim(self) -> int:
        return self.tower.n - self.rank()

    def roots_count(self, cap: int | None = None) -> int:
        """|{x : f(x) = 0}| by exhaustive evaluation."""
        check_cap(self.tower.Q, "root enumeration", cap)
        return int((self.eval_raw(np.arange(self.tower.Q)) == 0).sum())


def trace_bilinear_check(f: QPoly, adjoint: QPoly | None = None, cap: int | None = None) -> bool:
    """Whether Tr(x·f(y)) = Tr(y·g(x)) for all x, y, with g the adjoint of f by default."""
    T, F = f.tower, f.tower.Fqn
    g = f.adjoint() if adjoint is None else adjoint
    check_cap(T.Q**2, "trace bilinear sweep", cap)
    xs = np.arange(T.Q, dtype=np.int64)
    fy, gx = f.eval_raw(xs), g.eval_raw(xs)
    lhs = T.trace_raw(F.mul(xs[:, None], fy[None, :]))
    rhs = T.trace_raw(F.mul(xs[None, :], gx[:, None]))
    return bool(np.array_equal(lhs, rhs))


# -- text form -----------------------------------------------------------

_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(X(?:\^q(\d*))?)?$")


def format_qpoly(f: QPoly) -> str:
    """``a0 + a1*X^q + a2*X^q2``; zero terms omitted, ``0`` for the zero map."""
    terms = []
    for i, a in enumerate(f.coeffs):
        if not a:
            continue
        if i == 0:
            terms.append(f"{a}*X")
        elif i == 1:
            terms.append(f"{a}*X^q")
        else:
            terms.append(f"{a}*X^q{i}")
    return " + ".join(terms) if terms else "0"


def parse_qpoly(tower: FieldTower, text: str) -> QPoly:
    """Inverse of :func:`format_qpoly`; also accepts bare ``X``, ``X^q3`` and ``c`` for ``c*X``."""
    n = tower.n
    out = [0] * n
    F = tower.Fqn
    text = text.strip()
    if text in ("", "0"):
        return QPoly.zero(tower)
    for raw in text.split("+"):
        term = raw.strip().replace(" ", "")
        m = _TERM.match(term)
        if not term or m is None or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {raw!r}")
        coef = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None or m.group(2) == "X":
            i = 0
        else:
            i = int(m.group(3)) if m.group(3) else 1
        if not 0 <= coef < tower.Q:
            raise ValueError(f"coefficient {coef} outside F_{{q^n}}")
        out[i % n] = F.add(out[i % n], coef)
    return QPoly(tower, tuple(out))
