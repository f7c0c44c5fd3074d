import random
from fractions import Fraction

import pytest

from germlab.scalars import Dyadic, QuadExt, SQRT2


def bracket_sqrt2(bits: int) -> tuple[Fraction, Fraction]:
    """Rational lower/upper bounds on sqrt(2) via integer square root."""
    scale = 1 << bits
    lo = 0
    hi = 2 * scale
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid * mid <= 2 * scale * scale:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, scale), Fraction(hi, scale)


def oracle_sign(x: QuadExt) -> int:
    """Sign of a + b*sqrt2 by interval refinement, no case analysis."""
    if x.a == 0 and x.b == 0:
        return 0
    bits = 8
    while True:
        lo, hi = bracket_sqrt2(bits)
        vlo = min(x.a + x.b * lo, x.a + x.b * hi)
        vhi = max(x.a + x.b * lo, x.a + x.b * hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        bits *= 2
        assert bits <= 4096, "oracle failed to separate from zero"


def test_normalization_canonical():
    assert Dyadic(6, 1).key() == (3, 0)
    assert Dyadic(4, 2).key() == (1, 0)
    assert Dyadic(0, 7).key() == (0, 0)
    assert Dyadic(3, 3).key() == (3, 3)
    assert Dyadic(-8, 2).key() == (-2, 0)
    # negative exponents mean multiplication by 2**k
    assert Dyadic(3, -2).key() == (12, 0)


def test_dyadic_matches_fraction_arithmetic():
    rng = random.Random(20260816)
    for _ in range(500):
        a = Dyadic(rng.randrange(-64, 64), rng.randrange(0, 6))
        b = Dyadic(rng.randrange(-64, 64), rng.randrange(0, 6))
        assert (a + b).as_fraction() == a.as_fraction() + b.as_fraction()
        assert (a - b).as_fraction() == a.as_fraction() - b.as_fraction()
        assert (a * b).as_fraction() == a.as_fraction() * b.as_fraction()
        assert (a < b) == (a.as_fraction() < b.as_fraction())
        assert (a == b) == (a.as_fraction() == b.as_fraction())
        k = rng.randrange(-4, 5)
        assert a.ldexp(k).as_fraction() == a.as_fraction() * Fraction(2) ** k


def test_dyadic_floor_frac():
    x = Dyadic(-5, 2)  # -5/4
    assert x.floor() == -2
    assert x.frac() == Dyadic(3, 2)
    assert Dyadic(7, 1).floor() == 3


def test_dyadic_parse_and_json():
    assert Dyadic.parse("3/8") == Dyadic(3, 3)
    assert Dyadic.parse("-2") == Dyadic(-2)
    with pytest.raises(ValueError):
        Dyadic.parse("1/3")
    x = Dyadic(12345678901234567890123, 77)
    assert Dyadic.from_json(x.to_json()) == x
    assert x.to_json()["num"] == "12345678901234567890123"


def test_dyadic_hash_consistent():
    assert hash(Dyadic(6, 1)) == hash(Dyadic(3, 0))
    s = {Dyadic(1, 1), Dyadic(2, 2)}
    assert len(s) == 1


def test_quadext_ring_axioms():
    rng = random.Random(99)

    def rand_q():
        return QuadExt(
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)),
            Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)),
        )

    for _ in range(300):
        x, y, z = rand_q(), rand_q(), rand_q()
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x
        assert x * y == y * x
        if x != QuadExt(0):
            assert x * x.inverse() == QuadExt(1)


def test_quadext_sign_against_interval_oracle():
    rng = random.Random(7)
    cases = [
        QuadExt(1, -1),       # 1 - sqrt2 < 0
        QuadExt(3, -2),       # 3 - 2 sqrt2 > 0  (since 9 > 8)
        QuadExt(-3, 2),
        QuadExt(0, 0),
        QuadExt(Fraction(7, 5), -1),   # 7/5 < sqrt2
        QuadExt(Fraction(17, 12), -1),  # 17/12 > sqrt2
    ]
    for _ in range(400):
        cases.append(
            QuadExt(
                Fraction(rng.randrange(-30, 31), rng.randrange(1, 12)),
                Fraction(rng.randrange(-30, 31), rng.randrange(1, 12)),
            )
        )
    for x in cases:
        assert x.sign() == oracle_sign(x), repr(x)


def test_quadext_order_total():
    xs = [QuadExt(1, -1), QuadExt(0), QuadExt(Fraction(1, 2)), SQRT2, QuadExt(2, -1)]
    xs_sorted = sorted(xs)
    for u, v in zip(xs_sorted, xs_sorted[1:]):
        assert u <= v
    assert QuadExt(1) < SQRT2 < QuadExt(Fraction(3, 2))


def test_quadext_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        QuadExt(0).inverse()


def test_quadext_json_roundtrip():
    x = QuadExt(Fraction(-3, 7), Fraction(22, 5))
    assert QuadExt.from_json(x.to_json()) == x
    assert x.to_json()["a"] == ["-3", "7"]
