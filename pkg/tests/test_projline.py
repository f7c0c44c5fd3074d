import random
from fractions import Fraction

import pytest

from germlab.projline import (
    INF,
    LM_A,
    LM_B,
    LM_C,
    Mobius,
    PPMap,
    bn_image,
    image_interval,
    interval_compression_witness,
    interval_inside,
    lodha_moore_gens,
)
from germlab.scalars import SQRT2, QuadExt

LETTER = {
    "a": LM_A,
    "b": LM_B,
    "c": LM_C,
    "A": LM_A.inverse(),
    "B": LM_B.inverse(),
    "C": LM_C.inverse(),
}


def word_to_element(word):
    g = PPMap.identity()
    for ch in word:
        g = g * LETTER[ch]
    return g


def rand_word(rng, n):
    return word_to_element("".join(rng.choice("abcABC") for _ in range(n)))


def rand_scalar(rng):
    return QuadExt(
        Fraction(rng.randrange(-40, 41), rng.randrange(1, 9)),
        Fraction(rng.randrange(-4, 5), rng.randrange(1, 5)),
    )


def test_mobius_normalization():
    assert Mobius(2, 0, 0, 2) == Mobius.identity()
    assert Mobius(-1, 0, 0, -1) == Mobius.identity()
    m = Mobius(SQRT2, 0, 0, 1)
    assert m(1) == SQRT2
    assert m * m == Mobius(2, 0, 0, 1)
    with pytest.raises(ValueError):
        Mobius(1, 0, 0, -1)
    with pytest.raises(ValueError):
        Mobius(1, 2, 1, 2)  # zero determinant


def test_mobius_projective_values():
    m = Mobius(3, -1, 1, 0)  # 3 - 1/t
    assert m(INF) == QuadExt.coerce(3)
    assert m(0) == INF
    assert m(Fraction(1, 2)) == QuadExt.coerce(1)
    assert m.inverse()(m(Fraction(7, 3))) == QuadExt.coerce(Fraction(7, 3))


def test_generator_formulas():
    a, b, c = lodha_moore_gens()
    assert a(5) == QuadExt.coerce(6)
    assert a(INF) == INF
    assert b(-5) == QuadExt.coerce(-5)
    assert b(0) == QuadExt.coerce(0)
    assert b(Fraction(1, 2)) == QuadExt.coerce(1)
    assert b(1) == QuadExt.coerce(2)
    assert b(7) == QuadExt.coerce(8)
    assert c(-3) == QuadExt.coerce(-3)
    assert c(2) == QuadExt.coerce(2)
    assert c(1) == QuadExt.coerce(1)
    assert c(Fraction(1, 2)) == QuadExt.coerce(Fraction(2, 3))


def test_continuity_of_b_at_half():
    inner = Mobius(1, 0, -1, 1)  # t / (1 - t)
    outer = Mobius(3, -1, 1, 0)  # 3 - 1/t
    half = Fraction(1, 2)
    assert inner(half) == outer(half) == QuadExt.coerce(1)


def test_validation_rejects_bad_maps():
    with pytest.raises(ValueError):
        PPMap([0], [Mobius.identity(), Mobius.affine(1, 1)])  # jump at 0
    with pytest.raises(ValueError):
        PPMap([], [Mobius(3, -1, 1, 0)])  # unbounded piece not affine
    with pytest.raises(ValueError):
        # pole of 3 - 1/t at t = 0 sits on the cell [-1, 1]
        PPMap(
            [-1, 1],
            [Mobius.affine(1, QuadExt.coerce(Fraction(-13, 3))), Mobius(3, -1, 1, 0), Mobius.affine(1, 1)],
        )


def test_piece_merging():
    g = PPMap([0], [Mobius.identity(), Mobius.identity()])
    assert g.is_identity()
    assert not g.breaks


def test_group_laws_random_words():
    rng = random.Random(1717)
    for _ in range(60):
        f = rand_word(rng, rng.randrange(1, 9))
        g = rand_word(rng, rng.randrange(1, 9))
        h = f * g
        assert (f * f.inverse()).is_identity()
        for _ in range(6):
            x = rand_scalar(rng)
            assert h(x) == f(g(x))
            assert f.inverse()(f(x)) == x
    f, g, h = (rand_word(rng, 5) for _ in range(3))
    assert (f * g) * h == f * (g * h)


def test_a_inverse_composes_to_identity():
    assert (LM_A * LM_A.inverse()).is_identity()
    assert not (LM_A * LM_B).is_identity()


def test_preimage_point():
    assert LM_B.preimage_point(1) == QuadExt.coerce(Fraction(1, 2))
    assert LM_B.preimage_point(2) == QuadExt.coerce(1)
    rng = random.Random(88)
    for _ in range(20):
        g = rand_word(rng, 5)
        y = rand_scalar(rng)
        assert g(g.preimage_point(y)) == y


def test_bn_image_law():
    for n in range(1, 11):
        lo, hi = bn_image(n)
        assert lo == QuadExt.coerce(0)
        assert hi == QuadExt.coerce(n + 1)


def test_witness_trivial_and_translation():
    assert interval_compression_witness((0, 1), (0, 1), 2) == ""
    word = interval_compression_witness((0, 1), (5, 9), 6)
    assert word is not None and len(word) == 5
    g = word_to_element(word)
    assert interval_inside(image_interval(g, (0, 1)), (5, 9))
    a5 = word_to_element("aaaaa")
    assert image_interval(a5, (0, 1)) == (QuadExt.coerce(5), QuadExt.coerce(6))


def test_witness_contraction():
    word = interval_compression_witness((0, 4), (0, 1), 12)
    assert word is not None and len(word) <= 3
    g = word_to_element(word)
    assert interval_inside(image_interval(g, (0, 4)), (0, 1))


def test_witness_not_found():
    assert interval_compression_witness((0, 1), (5, 9), 2) is None


def test_json_roundtrip():
    rng = random.Random(55)
    for _ in range(15):
        g = rand_word(rng, 6)
        assert PPMap.from_json(g.to_json()) == g
