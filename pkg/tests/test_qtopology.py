import json
import random

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from qplane.coeff import ONE, ZERO, DomainError, QQi, make_q, parse_scalar
from qplane.qtopology import (
    X_AXIS,
    Y_AXIS,
    AxisSet,
    BackwardOrbit,
    Interval,
    Points,
    QPoint,
    QRegion,
    is_q_closed,
    is_q_open,
    q_closure_point,
    q_closure_region,
    q_hull_point,
    runge_neighborhood,
)
from qplane.suites import random_region

from strategies import contractive_q, nonzero_scalars, seeds

Q = make_q(parse_scalar("1/2"))
axes = st.sampled_from([X_AXIS, Y_AXIS])


def pt(axis, v):
    return QPoint(axis, QQi.coerce(v))


def regions(q_strategy=contractive_q):
    return st.tuples(seeds, q_strategy).map(lambda t: random_region(random.Random(t[0]), t[1]))


# points

def test_point_closure_examples():
    c = q_closure_point(pt(X_AXIS, 1), Q)
    for k in range(6):
        assert c.contains_point(pt(X_AXIS, 2 ** k))
    assert not c.contains_point(pt(X_AXIS, mpq(1, 2)))
    assert not c.contains_point(pt(Y_AXIS, 1))
    assert q_closure_point(pt(X_AXIS, 0), Q).is_whole()
    c3 = q_closure_point(pt(X_AXIS, mpq(1, 8)), Q)
    expected = [mpq(1, 8), mpq(1, 4), mpq(1, 2), 1, 2]
    assert all(c3.contains_point(pt(X_AXIS, v)) for v in expected)
    assert not c3.contains_point(pt(X_AXIS, mpq(1, 16)))


def test_point_hull_examples():
    h = q_hull_point(pt(Y_AXIS, 1), Q)
    assert h.origin
    assert all(h.contains_point(pt(Y_AXIS, mpq(1, 2 ** k))) for k in range(8))
    assert not h.contains_point(pt(Y_AXIS, 2))
    assert q_hull_point(pt(X_AXIS, 0), Q) == QRegion(Q, origin=True)


def test_origin_is_shared():
    assert pt(X_AXIS, 0) == pt(Y_AXIS, 0)
    assert hash(pt(X_AXIS, 0)) == hash(pt(Y_AXIS, 0))
    assert pt(X_AXIS, 1) != pt(Y_AXIS, 1)
    with pytest.raises(DomainError):
        QPoint.from_pair(1, 1)


@given(axes, nonzero_scalars, contractive_q)
def test_orbit_directions(axis, v, q):
    p = pt(axis, v)
    c, h = q_closure_point(p, q), q_hull_point(p, q)
    assert c.contains_point(p) and h.contains_point(p)
    assert not c.contains_point(pt(axis, q.q * v))
    assert not h.contains_point(pt(axis, v / q.q))
    assert h.issubset(q_closure_region(h))


def test_non_contractive_q_rejected():
    for text in ("2", "-1", "i", "(3+4i)/5"):
        q = make_q(parse_scalar(text))
        with pytest.raises(DomainError):
            q_closure_point(pt(X_AXIS, 1), q)
        with pytest.raises(DomainError):
            QRegion.empty(q)


# regions

def test_annulus_closure():
    for qt in ("1/2", "(1+i)/4", "-1/3"):
        q = make_q(parse_scalar(qt))
        a = QRegion.annulus(q, X_AXIS, 1, 1 / q.abs2())
        outside = QRegion.on_axis(q, X_AXIS, Interval(mpq(1), None, True, False))
        assert q_closure_region(a) == outside


def test_thin_annulus_closure_is_a_family():
    a = QRegion.annulus(Q, X_AXIS, 1, 2)
    c = q_closure_region(a)
    assert c.contains_point(pt(X_AXIS, 1)) and c.contains_point(pt(X_AXIS, 2))
    assert not c.contains_point(pt(X_AXIS, mpq(7, 4)))
    assert c.contains_point(pt(X_AXIS, 4))
    assert is_q_closed(c) and c != a


def test_point_set_closure_example():
    r = QRegion.from_points(Q, [pt(Y_AXIS, 1)])
    assert q_closure_region(r) == QRegion.on_axis(Q, Y_AXIS, BackwardOrbit(ONE))
    e = QRegion.empty(Q)
    assert q_closure_region(e) == e


@given(regions())
def test_closure_operator(r):
    c = q_closure_region(r)
    assert r.issubset(c)
    assert q_closure_region(c) == c
    assert is_q_closed(c)


@given(regions(), seeds)
def test_closure_monotone(r, seed):
    s = r.union(random_region(random.Random(seed), r.q))
    assert q_closure_region(r).issubset(q_closure_region(s))


@given(st.lists(st.tuples(axes, nonzero_scalars), max_size=4), contractive_q)
def test_finite_sets(points, q):
    ps = [pt(a, v) for a, v in points]
    union = QRegion.empty(q)
    for p in ps:
        union = union.union(q_closure_point(p, q))
    assert q_closure_region(QRegion.from_points(q, ps)) == union


@given(regions())
def test_json_roundtrip(r):
    text = json.dumps(r.to_json())
    assert QRegion.from_json(json.loads(text)) == r


def test_equality_is_semantic():
    a = QRegion.on_axis(Q, X_AXIS, Interval(mpq(1), mpq(3), True, True), Interval(mpq(2), mpq(5), True, False))
    b = QRegion.on_axis(Q, X_AXIS, Interval(mpq(1), mpq(5), True, False))
    assert a == b
    c = QRegion.on_axis(Q, X_AXIS, BackwardOrbit(ONE), Points((QQi.coerce(2),)))
    assert c == QRegion.on_axis(Q, X_AXIS, BackwardOrbit(ONE))


# openness

def test_balls_are_q_open():
    for s in (mpq(1, 4), 1, 9):
        assert is_q_open(QRegion.origin_disk(Q, s))
    assert not is_q_open(QRegion.origin_disk(Q, 1, closed=True))
    assert not is_q_open(QRegion.origin_disk(Q, 1, axis=X_AXIS))
    assert is_q_open(QRegion.whole(Q))


def test_annulus_not_q_open():
    a = QRegion.annulus(Q, X_AXIS, 1, 4, lo_closed=False, hi_closed=False)
    assert not is_q_open(a)
    assert not a.scaled_by_q().issubset(a)


@given(nonzero_scalars, st.integers(1, 5), st.integers(1, 5), contractive_q)
def test_runge_neighborhood(v, e, d, q):
    lam = pt(X_AXIS, v)
    u = runge_neighborhood(lam, mpq(e, 4), mpq(d, 4), q)
    assert is_q_open(u)
    assert q_hull_point(lam, q).issubset(u)


def test_runge_rejects_bad_radii():
    with pytest.raises(DomainError):
        runge_neighborhood(pt(X_AXIS, 1), 0, 1, Q)
    with pytest.raises(DomainError):
        runge_neighborhood(pt(X_AXIS, 1), 1, -1, Q)
