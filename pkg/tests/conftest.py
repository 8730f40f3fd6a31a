import pytest

from qpolylearn import FieldCtx


def all_small_fields() -> list[FieldCtx]:
    """Every constructible field with q <= 32 (primes, built-ins, customs)."""
    ctxs = [FieldCtx(p) for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)]
    ctxs += [FieldCtx(2, 2), FieldCtx(2, 3), FieldCtx(3, 2), FieldCtx(3, 3)]
    ctxs += [FieldCtx(2, 4, (1, 1, 0, 0, 1)), FieldCtx(5, 2, (1, 1, 1))]
    return ctxs


@pytest.fixture(scope="session")
def small_fields():
    return all_small_fields()


@pytest.fixture(scope="session")
def f2():
    return FieldCtx(2)


@pytest.fixture(scope="session")
def f3():
    return FieldCtx(3)


@pytest.fixture(scope="session")
def f4():
    return FieldCtx(2, 2)


@pytest.fixture(scope="session")
def f5():
    return FieldCtx(5)
