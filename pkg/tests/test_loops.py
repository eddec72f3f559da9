import numpy as np
import pytest

from conflab.loops import (LoopPath, PointOnLoopError, polylines_intersect,
                           surrounds)

UNIT_SQUARE = LoopPath(np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], float))


def test_surrounds_inside_outside():
    assert surrounds(UNIT_SQUARE, (0.5, 0.5))
    assert not surrounds(UNIT_SQUARE, (2.0, 2.0))


def test_surrounds_translation_invariance():
    loop2 = UNIT_SQUARE.translated(3.0, -2.0)
    assert surrounds(loop2, (3.5, -1.5)) == surrounds(UNIT_SQUARE, (0.5, 0.5))
    assert surrounds(loop2, (5.0, 0.0)) == surrounds(UNIT_SQUARE, (2.0, 2.0))


def test_surrounds_point_on_loop_raises():
    with pytest.raises(PointOnLoopError):
        surrounds(UNIT_SQUARE, (0.5, 0.0))


def test_surrounds_cyclic_shift_invariant():
    cyc = UNIT_SQUARE.cycle()
    for k in range(1, 4):
        rot = np.vstack([cyc[k:], cyc[:k], cyc[k:k + 1]])
        loop = LoopPath(rot)
        assert surrounds(loop, (0.5, 0.5))
        assert not surrounds(loop, (-1.0, 0.5))


def test_canonical_identifies_shifts_and_reversal():
    cyc = UNIT_SQUARE.cycle()
    rot = LoopPath(np.vstack([cyc[2:], cyc[:2], cyc[2:3]]))
    rev = LoopPath(UNIT_SQUARE.vertices[::-1].copy())
    assert rot.canonical() == UNIT_SQUARE.canonical()
    assert rev.canonical() == UNIT_SQUARE.canonical()
    assert rev.canonical(identify_reversal=False) != "unused"


def test_length_and_area():
    assert UNIT_SQUARE.length == 4
    assert UNIT_SQUARE.area() == pytest.approx(1.0)
    assert UNIT_SQUARE.diameter() == pytest.approx(np.sqrt(2.0))


def test_self_avoiding_detection():
    bow = LoopPath(np.array([[0, 0], [1, 1], [1, 0], [0, 1], [0, 0]], float))
    assert bow.is_self_avoiding()  # distinct vertices; crossing edges, not vertices
    pinched = LoopPath(np.array([[0, 0], [1, 0], [0.5, 0.5], [1, 1], [0, 1],
                                 [0.5, 0.5], [0, 0]], float))
    assert not pinched.is_self_avoiding()


def test_polylines_intersect_cases():
    sq = UNIT_SQUARE.vertices
    far = UNIT_SQUARE.translated(5, 5).vertices
    overlapping = UNIT_SQUARE.translated(0.5, 0.5).vertices
    touching = UNIT_SQUARE.translated(1.0, 0.0).vertices
    assert not polylines_intersect(sq, far)
    assert polylines_intersect(sq, overlapping)
    assert polylines_intersect(sq, touching)
    assert not polylines_intersect(sq, touching, proper_only=True)
    assert polylines_intersect(sq, overlapping, proper_only=True)
