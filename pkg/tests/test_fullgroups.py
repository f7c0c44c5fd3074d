import random
from fractions import Fraction

import pytest

from germlab.fullgroups import (
    Clopen,
    FullGroupElement,
    OdometerPoint,
    gamma_tv,
    int_to_word,
    odometer_step,
    quasi_isometry_check,
    return_set,
    schreier_patch,
    word_add,
    word_to_int,
)


def rand_point(rng):
    pre = "".join(rng.choice("01") for _ in range(rng.randrange(4)))
    per = "".join(rng.choice("01") for _ in range(rng.randrange(1, 4)))
    return OdometerPoint.from_digits(pre, per)


def rand_gamma(rng):
    while True:
        word = "".join(rng.choice("01") for _ in range(rng.randrange(2, 4)))
        t = rng.choice([-3, -2, -1, 1, 2, 3])
        v = Clopen.of(word)
        if v.disjoint_from(v.translate(t)):
            return gamma_tv(t, v)


def test_words():
    assert word_to_int("011") == 6
    assert int_to_word(6, 3) == "011"
    assert word_add("11", 1) == "00"
    assert word_add("00", 1) == "10"
    with pytest.raises(ValueError):
        word_to_int("012")


def test_carry_propagation():
    x = OdometerPoint.from_digits("11", "0")
    assert (x + 1).preperiod_period() == ("001", "0")
    assert odometer_step(x, 0) == x
    assert odometer_step(odometer_step(x, 1), -1) == x


def test_point_encoding():
    assert OdometerPoint.from_digits("", "1").value == -1
    assert OdometerPoint.from_digits("", "01").value == Fraction(-2, 3)
    assert OdometerPoint.from_digits("11", "0").value == 3
    x = OdometerPoint.parse(",10")
    assert x.digits(6) == "101010"
    with pytest.raises(ValueError):
        OdometerPoint(Fraction(1, 2))
    with pytest.raises(ValueError):
        OdometerPoint.from_digits("1", "")


def test_digit_roundtrip():
    rng = random.Random(31)
    for _ in range(50):
        x = rand_point(rng)
        pre, per = x.preperiod_period()
        assert OdometerPoint.from_digits(pre, per) == x
        # canonical form has a primitive period not absorbable into the tail
        assert len(per) >= 1


def test_freeness():
    rng = random.Random(32)
    for _ in range(50):
        x = rand_point(rng)
        for n in range(1, 1025):
            assert x + n != x
            assert x - n != x


def test_clopen_canonical():
    assert Clopen.of("00", "01") == Clopen.of("0")
    assert Clopen.of("0", "01") == Clopen.of("0")
    assert Clopen.of("00", "01", "1") == Clopen.full()
    assert Clopen.of("0").complement() == Clopen.of("1")
    assert Clopen.full().complement() == Clopen.empty()
    assert Clopen.empty().complement() == Clopen.full()


def test_clopen_algebra():
    u = Clopen.of("01", "11")
    v = Clopen.of("1")
    assert u.intersect(v) == Clopen.of("11")
    assert u.union(v) == Clopen.of("01", "1")
    assert u.measure() == Fraction(1, 2)
    assert Clopen.of("11").subset_of(u)
    assert not u.subset_of(v)
    assert u.disjoint_from(Clopen.of("00"))
    assert not u.disjoint_from(v)
    assert u.contains_point(OdometerPoint.from_digits("", "1"))
    assert not u.contains_point(OdometerPoint(0))


def test_clopen_translate():
    assert Clopen.of("00").translate(1) == Clopen.of("10")
    assert Clopen.of("0").translate(2) == Clopen.of("0")
    u = Clopen.of("010", "11")
    assert u.translate(5).translate(-5) == u
    # translation preserves measure piece by piece
    assert u.translate(3).measure() == u.measure()


def test_return_sets():
    assert return_set(Clopen.of("0")) == (0, 1)
    assert return_set(Clopen.full()) == (0,)
    assert return_set(Clopen.of("01")) == (0, 1, 2, 3)
    assert return_set(Clopen.of("0"), shift=5) == (5, 6)
    with pytest.raises(ValueError):
        return_set(Clopen.empty())


def test_return_set_exhaustive_reverification():
    rng = random.Random(33)
    for _ in range(20):
        words = {"".join(rng.choice("01") for _ in range(rng.randrange(1, 4)))
                 for _ in range(rng.randrange(1, 3))}
        u = Clopen(tuple(words))
        times = return_set(u)
        length = max(u.max_length(), 1)
        for r in range(1 << length):
            assert any(
                u.contains_word(int_to_word((r + t) % (1 << length), length))
                for t in times
            )
        assert max(times) < (1 << length)


def test_gamma_is_involution():
    rng = random.Random(34)
    for _ in range(25):
        g = rand_gamma(rng)
        assert (g * g).is_identity()
        assert g.inverse() == g


def test_gamma_support_and_admissibility():
    v = Clopen.of("00")
    g = gamma_tv(1, v)
    assert g.support().subset_of(v.union(Clopen.of("10")))
    x = OdometerPoint(0)
    assert g(x) == x + 1
    assert g(x + 1) == x
    with pytest.raises(ValueError):
        gamma_tv(2, Clopen.of("0"))
    with pytest.raises(ValueError):
        gamma_tv(0, v)
    with pytest.raises(ValueError):
        gamma_tv(1, Clopen.empty())


def test_element_validation():
    with pytest.raises(ValueError):
        FullGroupElement(((Clopen.of("0"), 0),))  # does not cover
    with pytest.raises(ValueError):
        FullGroupElement(((Clopen.of("0"), 0), (Clopen.of("00"), 1)))  # overlap
    with pytest.raises(ValueError):
        # covers, but both pieces land on C_1: not a bijection
        FullGroupElement(((Clopen.of("0"), 1), (Clopen.of("1"), 0)))


def test_group_laws_pointwise():
    rng = random.Random(35)
    for _ in range(50):
        f = rand_gamma(rng)
        g = rand_gamma(rng)
        h = rand_gamma(rng)
        assert (f * g) * h == f * (g * h)
        assert (f * f.inverse()).is_identity()
        prod = f * g
        for _ in range(5):
            x = rand_point(rng)
            assert prod(x) == f(g(x))
    assert (FullGroupElement.identity() * f) == f


def test_powers_and_support():
    g = gamma_tv(1, Clopen.of("00"))
    assert g ** 2 == FullGroupElement.identity()
    assert g ** -1 == g
    assert FullGroupElement.identity().support() == Clopen.empty()


def test_element_json_roundtrip():
    rng = random.Random(36)
    for _ in range(20):
        g = rand_gamma(rng) * rand_gamma(rng)
        assert FullGroupElement.from_json(g.to_json()) == g


def test_patch_full_space():
    x = OdometerPoint(0)
    patch = schreier_patch(Clopen.full(), 1, x, 10)
    assert patch.vertices == tuple(range(-10, 11))
    assert (0, 3) in patch.edges and (0, 4) not in patch.edges
    report = quasi_isometry_check(patch)
    assert report["violations"] == []
    assert report["one_dense"]


def test_patch_even_vertices():
    x = OdometerPoint(0)
    patch = schreier_patch(Clopen.of("0"), 1, x, 40)
    assert all(n % 2 == 0 for n in patch.vertices)
    # orbit identification: exactly the n with x + n in u
    expected = tuple(n for n in range(-40, 41) if (x + n).digits(1) == "0")
    assert patch.vertices == expected
    report = quasi_isometry_check(patch)
    assert report["violations"] == []
    assert report["one_dense"]
    num, den = report["max_ratio"].split("/")
    assert Fraction(int(num), int(den)) <= 3


def test_patch_mod_four():
    x = OdometerPoint.from_digits("01", "0")
    u = Clopen.of("01")
    patch = schreier_patch(u, 2, x, 80)
    assert all((x + n).digits(2) == "01" for n in patch.vertices)
    assert patch.vertices == tuple(range(-80, 81, 4))
    report = quasi_isometry_check(patch)
    assert report["violations"] == []
    assert report["one_dense"]


def test_patch_disconnection_without_wide_generators():
    # with unit generators the mod-4 patch has gaps of 4 > 3: no edges
    x = OdometerPoint.from_digits("01", "0")
    patch = schreier_patch(Clopen.of("01"), 1, x, 80)
    assert patch.edges == ()
    report = quasi_isometry_check(patch)
    assert report["violations"] != []
    assert not report["one_dense"]


def test_patch_requires_base_point_in_u():
    with pytest.raises(ValueError):
        schreier_patch(Clopen.of("1"), 1, OdometerPoint(0), 10)


def test_dot_export():
    patch = schreier_patch(Clopen.of("0"), 1, OdometerPoint(0), 6)
    dot = patch.to_dot()
    assert dot.startswith("graph schreier_patch {")
    assert '"0" -- "2";' in dot
    assert dot == patch.to_dot()
