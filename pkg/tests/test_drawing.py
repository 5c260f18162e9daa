import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pedink.drawing import (
    TAU,
    Choice,
    ChoiceKind,
    Drawing,
    DrawingError,
    Mode,
    Point,
    Solution,
    ink,
    load_drawing,
    load_solution,
    save_drawing,
    save_solution,
    scale_drawing,
    validate_solution,
)
from pedink.forge import from_segments


def test_point_rejects_nan():
    with pytest.raises(DrawingError):
        Point(float("nan"), 0.0)


@pytest.mark.parametrize(
    "pts, edges, msg",
    [
        ([(0, 0), (1, 0)], [(0, 0)], "self-loop"),
        ([(0, 0), (1, 0)], [(0, 1), (1, 0)], "duplicate"),
        ([(0, 0), (1, 0)], [(0, 2)], "unknown"),
        ([(0, 0), (0, 0)], [(0, 1)], "zero-length"),
    ],
)
def test_drawing_validation(pts, edges, msg):
    with pytest.raises(DrawingError, match=msg):
        Drawing.from_points(pts, edges)


def test_segment_runs_from_lower_vertex_id():
    d = Drawing.from_points([(5, 0), (0, 0)], [(1, 0)])
    s = d.segments[0]
    assert (s.u, s.v) == (1, 0)
    assert s.a == Point(5.0, 0.0)
    assert s.length == 5.0
    assert s.point_at(2.0) == Point(3.0, 0.0)


def test_choice_inks():
    L = 10.0
    assert Choice.full(L).ink == L
    assert Choice.stubs(2.0, L).ink == 4.0
    assert Choice.gap_between(3.0, 7.0, L).ink == 6.0
    # zero-width gap keeps all the ink
    assert Choice.gap_between(4.0, 4.0, L).ink == L
    with pytest.raises(DrawingError):
        Choice.stubs(6.0, L)
    with pytest.raises(DrawingError):
        Choice.gap_between(7.0, 3.0, L)


def test_resolution_is_closed():
    L = 8.0
    stub = Choice.stubs(1.0, L)
    assert stub.resolves(1.0, L) and stub.resolves(7.0, L) and stub.resolves(4.0, L)
    assert not stub.resolves(0.5, L)
    gap = Choice.gap_between(2.0, 3.0, L)
    assert gap.resolves(2.0, L) and gap.resolves(3.0, L)
    assert not gap.resolves(3.5, L)
    # within tolerance counts as touching
    assert gap.resolves(3.0 + 0.5 * TAU * L, L)
    assert not Choice.full(L).resolves(4.0, L)


def test_drawn_pieces_sum_to_ink():
    L = 9.0
    for c in (Choice.full(L), Choice.stubs(2.0, L), Choice.stubs(4.5, L), Choice.gap_between(0.0, 3.0, L),
              Choice.gap_between(3.0, 3.0, L)):
        assert math.isclose(sum(b - a for a, b in c.drawn_pieces(L)), c.ink)


def test_ink_requires_every_choice():
    with pytest.raises(DrawingError):
        ink(Solution(Mode.SPED, (Choice.full(1.0), None)))


def test_validate_solution_finds_unresolved():
    d = from_segments([((0.0, 0.0), (8.0, 0.0)), ((1.0, 1.0), (1.0, -7.0))])
    both_full = Solution(Mode.SPED, (Choice.full(8.0), Choice.full(8.0)))
    assert validate_solution(d, both_full) == [(0, 1)]
    ok = Solution(Mode.SPED, (Choice.full(8.0), Choice.stubs(1.0, 8.0)))
    assert validate_solution(d, ok) == []
    bad_kind = Solution(Mode.SPED, (Choice.full(8.0), Choice.gap_between(0.5, 1.5, 8.0)))
    with pytest.raises(DrawingError, match="not allowed"):
        validate_solution(d, bad_kind)


def test_drawing_json_roundtrip():
    d = Drawing.from_points([(0.5, 1.25), (3, 4), (-2, 7)], [(0, 1), (2, 1)])
    again = load_drawing(save_drawing(d))
    assert again == d


def test_load_drawing_reports_garbage():
    with pytest.raises(DrawingError):
        load_drawing('{"vertices": [{"id": 0}], "edges": []}')


def test_solution_roundtrip_and_timestamp():
    d = from_segments([((0.0, 0.0), (8.0, 0.0)), ((1.0, 1.0), (1.0, -7.0)), ((10.0, 0.0), (12.0, 0.0))])
    sol = Solution(
        Mode.PED,
        (Choice.gap_between(1.0, 1.0, 8.0), Choice.full(8.0), Choice.no_gap(2.0)),
    )
    text = save_solution(d, sol, timestamp="2026-01-01T00:00:00+00:00")
    assert json.loads(text)["generated"].startswith("2026")
    back = load_solution(d, text)
    assert back.ink == sol.ink
    assert validate_solution(d, back) == []
    assert "generated" not in json.loads(save_solution(d, sol))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)), min_size=2, max_size=6, unique=True),
    st.sampled_from([0.5, 2.0, 3.0, 7.25]),
)
def test_scaling_scales_lengths(pts, c):
    edges = [(i, i + 1) for i in range(len(pts) - 1)]
    d = Drawing.from_points(pts, edges)
    s = scale_drawing(d, c)
    assert math.isclose(s.total_length, c * d.total_length, rel_tol=1e-12)
    with pytest.raises(DrawingError):
        scale_drawing(d, 0.0)


def test_choice_kind_values_are_stable():
    assert [k.value for k in ChoiceKind] == ["full", "stubs", "gap", "nogap"]
