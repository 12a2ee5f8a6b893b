from __future__ import annotations

import itertools

import pytest

from pseudoregulus.fields import tower


@pytest.fixture(scope="session")
def F4():
    return tower(2, 2)


@pytest.fixture(scope="session")
def T8():
    return tower(2, 3)


@pytest.fixture(scope="session")
def T8x2():
    return tower(2, 3, 2)


def naive_mul(p: int, modulus: tuple[int, ...], a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Schoolbook product of coefficient tuples over F_p, reduced by a monic modulus."""
    d = len(modulus) - 1
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d + 1):
                prod[k - d + i] = (prod[k - d + i] - c * modulus[i]) % p
    return tuple(prod[:d])


def code_to_tuple(a: int, p: int, d: int) -> tuple[int, ...]:
    return tuple((a // p**i) % p for i in range(d))


def tuple_to_code(t, p: int) -> int:
    return sum(c * p**i for i, c in enumerate(t))


def naive_irreducible(p: int, f: tuple[int, ...]) -> bool:
    """No factorisation into two monic factors of positive degree (brute force)."""
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for g in itertools.product(range(p), repeat=k):
            for h in itertools.product(range(p), repeat=d - k):
                G, H = g + (1,), h + (1,)
                prod = [0] * (d + 1)
                for i, x in enumerate(G):
                    for j, y in enumerate(H):
                        prod[i + j] = (prod[i + j] + x * y) % p
                if tuple(prod) == tuple(f):
                    return False
    return True


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
