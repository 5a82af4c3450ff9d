import random
from fractions import Fraction

import pytest

from qpharm.model import builtin_model, make_model
from qpharm import errors


@pytest.fixture(scope="session")
def simple():
    return builtin_model("simple")


@pytest.fixture(scope="session")
def tandem():
    return builtin_model("tandem")


@pytest.fixture(scope="session")
def king():
    return builtin_model("king")


@pytest.fixture(scope="session")
def infinite_pi2():
    return builtin_model("infinite_pi2")


def random_pi2_models(count, seed=0, max_den=12):
    """Random valid zero-drift models with pi/theta = 2.

    Parametrized by the diagonal weights and the one-step weights under
    the constraints sum=1, zero drift, p11 + p-1-1 = p1-1 + p-11.
    """
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < 100000:
        tries += 1
        den = rng.randint(4, max_den)
        vals = [Fraction(rng.randint(0, den), 4 * den) for _ in range(5)]
        p11, p1m1, pm11, p10, p01 = vals
        pm1m1 = p1m1 + pm11 - p11          # pi/theta = 2 condition
        pm10 = p11 + p10 + p1m1 - pm11 - pm1m1   # zero x-drift
        p0m1 = p11 + p01 + pm11 - p1m1 - pm1m1   # zero y-drift
        w = {
            (1, 1): p11, (1, 0): p10, (1, -1): p1m1, (0, -1): p0m1,
            (-1, -1): pm1m1, (-1, 0): pm10, (-1, 1): pm11, (0, 1): p01,
        }
        total = sum(w.values())
        if total == 0:
            continue
        w = {k: v / total for k, v in w.items()}
        if any(v < 0 for v in w.values()):
            continue
        try:
            m = make_model({k: v for k, v in w.items() if v != 0}, name=f"sweep{len(out)}")
        except errors.ValidationError:
            continue
        out.append(m)
    return out
