import random
from fractions import Fraction

import pytest

from nilcontact.catalog import embedded_catalog
from nilcontact.liealg import LieAlgebra, jacobi_defect

COEFFS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(3))


def random_nilpotent(rng, n, density=0.35, max_tries=500):
    """Sparse strictly-upper bracket table ([X_i,X_j] only hits X_k with k > j) passing Jacobi."""
    for _ in range(max_tries):
        table = {}
        for i in range(1, n + 1):
            for j in range(i + 1, n):
                if rng.random() < density:
                    comps = {}
                    for _ in range(1 if rng.random() < 0.8 else 2):
                        comps[rng.randint(j + 1, n)] = rng.choice(COEFFS)
                    table[(i, j)] = comps
        g = LieAlgebra(n, table)
        if not jacobi_defect(g):
            return g
    return LieAlgebra(n)


def random_two_step(rng, n, density=0.4):
    """Brackets among X1..X(n-1) landing in the central X_n; Jacobi holds by construction."""
    table = {}
    for i in range(1, n):
        for j in range(i + 1, n):
            if rng.random() < density:
                table[(i, j)] = {n: rng.choice(COEFFS)}
    return LieAlgebra(n, table)


@pytest.fixture(scope="session")
def catalog():
    return embedded_catalog()


@pytest.fixture(scope="session")
def by_id(catalog):
    return {e.id: e for e in catalog}


@pytest.fixture
def rng():
    return random.Random(20240607)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
