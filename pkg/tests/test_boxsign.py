from __future__ import annotations

from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from isingocc.boxsign import BoxPoly, Cell, _reflect
from isingocc.poly import Poly

coef = st.integers(-6, 6)


@st.composite
def polys(draw, deg=3):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, deg), st.integers(0, deg)), coef, max_size=8))
    return Poly(terms)


@st.composite
def boxes(draw):
    x0 = draw(st.fractions(0, 2, max_denominator=8))
    y0 = draw(st.fractions(0, 2, max_denominator=8))
    wx = draw(st.fractions(F(1, 8), 2, max_denominator=8))
    wy = draw(st.fractions(F(1, 8), 2, max_denominator=8))
    return (x0, x0 + wx), (y0, y0 + wy)


@st.composite
def cells(draw, depth=3):
    k, l = draw(st.integers(0, depth)), draw(st.integers(0, depth))
    return Cell(k, draw(st.integers(0, (1 << k) - 1)), l, draw(st.integers(0, (1 << l) - 1)))


def cell_points(xbox, ybox, cell, steps=4):
    """Grid of points of the closed cell in original coordinates."""
    u0, u1, v0, v1 = cell.unit_bounds()
    for a in range(steps + 1):
        for b in range(steps + 1):
            u = u0 + (u1 - u0) * F(a, steps)
            v = v0 + (v1 - v0) * F(b, steps)
            yield u, v, xbox[0] + (xbox[1] - xbox[0]) * u, ybox[0] + (ybox[1] - ybox[0]) * v


@settings(max_examples=400)
@given(polys(), boxes(), cells(), st.sampled_from([1, -1]))
def test_nonneg_is_sound(f, box, cell, sign):
    bp = BoxPoly(f, *box)
    if bp.nonneg(cell, sign):
        for _, _, x, y in cell_points(*box, cell):
            assert sign * f(x, y) >= 0


@settings(max_examples=400)
@given(polys(), boxes(), cells(), st.tuples(st.booleans(), st.booleans()))
def test_sign_on_is_strict_off_excluded_axes(f, box, cell, axes):
    axes = (axes[0] and cell.m == 0, axes[1] and cell.n == 0)
    bp = BoxPoly(f, *box)
    s = bp.sign_on(cell, axes)
    if s:
        for u, v, x, y in cell_points(*box, cell):
            if (axes[0] and u == 0) or (axes[1] and v == 0):
                assert s * f(x, y) >= 0
            else:
                assert s * f(x, y) > 0


@given(polys(), boxes(), cells())
def test_center_sign_and_shift_are_exact(f, box, cell):
    bp = BoxPoly(f, *box)
    u0, u1, v0, v1 = cell.unit_bounds()
    x = box[0][0] + (box[0][1] - box[0][0]) * (u0 + u1) / 2
    y = box[1][0] + (box[1][1] - box[1][0]) * (v0 + v1) / 2
    val = f(x, y)
    assert bp.sign_at_center(cell) == (val > 0) - (val < 0)
    q = bp.shifted(cell)
    at_center = sum(c * F(1, 2) ** (i + j) for i, row in enumerate(q) for j, c in enumerate(row))
    assert (at_center > 0) - (at_center < 0) == (val > 0) - (val < 0)


@given(st.lists(st.lists(coef, min_size=3, max_size=3), min_size=3, max_size=3), st.booleans())
def test_reflect(q, along_u):
    r = _reflect(q, along_u)

    def ev(m, u, v):
        return sum(c * u**i * v**j for i, row in enumerate(m) for j, c in enumerate(row))

    for u, v in [(F(0), F(0)), (F(1, 3), F(2, 5)), (F(1), F(1, 2))]:
        if along_u:
            assert ev(r, u, v) == ev(q, 1 - u, v)
        else:
            assert ev(r, u, v) == ev(q, u, 1 - v)


def test_double_root_and_open_axes():
    sq = Poly({(2, 0): 4, (1, 0): -4, (0, 0): 1})  # (2x - 1)^2
    bp = BoxPoly(sq, (0, 1), (0, 1))
    root = Cell(0, 0, 0, 0)
    # an interior zero is out of reach; at a lower cell corner the shift gives u^2
    assert not bp.nonneg(root)
    assert bp.nonneg(Cell(1, 1, 0, 0))
    assert bp.sign_on(Cell(1, 1, 0, 0)) == 0
    assert bp.sign_on(Cell(2, 3, 0, 0)) == 1
    xy = BoxPoly(Poly({(1, 1): 1}), (0, 1), (0, 1))
    assert xy.sign_on(root) == 0
    assert xy.sign_on(root, (True, True)) == 1
    assert not BoxPoly(Poly({(1, 0): 1, (0, 0): -1}), (0, 2), (0, 1)).nonneg(root)
