import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kregret import (Dataset, DomainError, InputError, ParseError, UtilityDirection, gain, kgain,
                     kregret_ratio, load_csv, normalize, score)
from oracles import BRYANT, DURANT, NBA_CSV, RANDOLPH, STOUDEMIRE, WADE

coord = st.floats(min_value=0.01, max_value=100.0, allow_nan=False, allow_infinity=False)


@st.composite
def datasets(draw, max_n=10, min_d=2, max_d=4):
    d = draw(st.integers(min_d, max_d))
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.lists(coord, min_size=d, max_size=d), min_size=n, max_size=n))
    return Dataset.from_rows(rows)


@st.composite
def directions(draw, d):
    w = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=d, max_size=d))
    if not any(x > 0 for x in w):
        w[draw(st.integers(0, d - 1))] = 1.0
    return UtilityDirection(tuple(w)).unit()


def test_load_points_rebs(nba_raw):
    D = load_csv(io.BytesIO(NBA_CSV), id_col="player name", cols=["points", "rebs"])
    assert (D.n, D.dim) == (8, 2)
    assert D.point(DURANT).coords == (2472.0, 623.0)
    assert D.ids[0] == DURANT and D.ids[-1] == RANDOLPH


def test_load_all_columns(nba_raw):
    D = load_csv(io.BytesIO(NBA_CSV), id_col="player name",
                 cols=["points", "rebs", "steals", "fouls"])
    assert D.dim == 4
    assert D.point(STOUDEMIRE).coords[3] == 281.0
    # without cols, every non-id column is an attribute (the numeric id column too)
    assert load_csv(io.BytesIO(NBA_CSV), id_col="player name").dim == 5


def test_single_row_default_ids():
    D = load_csv(b"a,b\n1,1\n")
    assert D.n == 1 and D.ids == (1,) and D.points[0].coords == (1.0, 1.0)


def test_load_from_path(nba_csv_path):
    D = load_csv(nba_csv_path, id_col="player name", cols=["rebs"])
    assert D.dim == 1 and D.point(RANDOLPH).coords == (950.0,)


@pytest.mark.parametrize("text, exc", [
    (b"", InputError),
    (b"a,b\n", InputError),
    (b"a,b\n1,x\n", ParseError),
    (b"a,b\n1,0\n", DomainError),
    (b"a,b\n1,-2\n", DomainError),
    (b"a,b\n1\n", ParseError),
    (b"a,b\n1,nan\n", ParseError),
])
def test_load_errors(text, exc):
    with pytest.raises(exc):
        load_csv(text)


def test_parse_error_location():
    with pytest.raises(ParseError) as info:
        load_csv(b"a,b\n1,2\n3,oops\n")
    assert info.value.row == 3 and info.value.column == "b"


def test_zero_allowed_when_not_strict():
    D = load_csv(b"a,b\n0,2\n", strict_positive=False)
    assert D.points[0].coords == (0.0, 2.0)


def test_unknown_columns_and_duplicate_ids():
    with pytest.raises(InputError):
        load_csv(b"a,b\n1,2\n", cols=["c"])
    with pytest.raises(InputError):
        load_csv(b"n,a\nx,1\nx,2\n", id_col="n")


def test_normalize_nba(nba_pr):
    assert nba_pr.point(RANDOLPH).coords == pytest.approx((1681 / 2472, 1.0))
    assert nba_pr.point(DURANT).coords == pytest.approx((1.0, 0.6558), abs=1e-4)
    assert nba_pr.norm_factors == (2472.0, 950.0)


def test_normalize_identity():
    D = Dataset.from_rows([(1.0, 0.5), (0.25, 1.0)])
    assert normalize(D).matrix.tolist() == D.matrix.tolist()


def test_scores_under_mean(nba_pr):
    w = (0.5, 0.5)
    assert score(nba_pr.point(RANDOLPH), w) == pytest.approx(0.840, abs=1e-3)
    assert score(nba_pr.point(DURANT), w) == pytest.approx(0.828, abs=1e-3)
    assert score(nba_pr.point(BRYANT), w) == pytest.approx(0.604, abs=1e-3)
    with pytest.raises(DomainError):
        score(nba_pr.point(BRYANT), (1.0, 0.0, 0.0))


def test_gain_kgain(nba_pr):
    S = nba_pr.subset([BRYANT, DURANT, WADE])
    assert gain(S, (0.5, 0.5)) == pytest.approx(0.828, abs=1e-3)
    assert gain(S, (0.0, 1.0)) == pytest.approx(0.655, abs=1e-3)
    assert kgain(nba_pr, (0.5, 0.5), 2) == pytest.approx(0.828, abs=1e-3)
    assert kgain(nba_pr, (0.5, 0.5), 1) == gain(nba_pr, (0.5, 0.5))
    with pytest.raises(DomainError):
        kgain(nba_pr, (0.5, 0.5), 9)
    with pytest.raises(DomainError):
        gain([], (0.5, 0.5))


def test_kgain_ties():
    D = Dataset.from_rows([(1.0, 1.0), (1.0, 1.0), (0.5, 0.5)])
    w = (1.0, 0.0)
    assert [kgain(D, w, k) for k in (1, 2, 3)] == [1.0, 1.0, 0.5]


def test_regret_examples(nba_pr):
    S = nba_pr.subset([BRYANT, DURANT, WADE])
    assert kregret_ratio(nba_pr.subset([BRYANT, DURANT]), nba_pr, (0.5, 0.5), 1) == \
        pytest.approx(0.0143, abs=1e-3)
    assert kregret_ratio(S, nba_pr, (0.5, 0.5), 2) == 0.0
    rebs = UtilityDirection.axis(2, 1)
    assert kregret_ratio(S, nba_pr, rebs, 1) == pytest.approx(0.345, abs=1e-3)
    top2, best = kgain(nba_pr, rebs, 2), gain(S, rebs)
    assert (top2, best) == pytest.approx((0.771, 0.655), abs=1e-3)
    assert kregret_ratio(S, nba_pr, rebs, 2) == pytest.approx((top2 - best) / top2, abs=1e-12)
    assert kregret_ratio(nba_pr, nba_pr, rebs, 1) == 0.0


def test_direction_validation():
    with pytest.raises(DomainError):
        UtilityDirection((0.0, 0.0))
    with pytest.raises(DomainError):
        UtilityDirection((-0.1, 1.0))
    w = UtilityDirection.from_angle(math.pi / 2)
    assert w.weights == (0.0, 1.0) and w.is_unit
    assert UtilityDirection((3.0, 4.0)).unit().weights == pytest.approx((0.6, 0.8))


def test_subset_unknown_ids_listed(nba_pr):
    with pytest.raises(InputError, match="Nobody, Ghost"):
        nba_pr.subset([DURANT, "Nobody", "Ghost"])


def test_resolve_integer_ids_from_text():
    D = Dataset.from_rows([(1.0, 2.0), (2.0, 1.0)])
    assert D.resolve_ids(["2", 1]) == [2, 1]


@given(datasets(), st.data())
@settings(max_examples=60, deadline=None)
def test_ratio_bounds_and_monotonicity(D, data):
    w = data.draw(directions(D.dim))
    k = data.draw(st.integers(1, D.n))
    size = data.draw(st.integers(1, D.n))
    S = D.points[:size]
    bigger = D.points[:min(D.n, size + 1)]
    r = kregret_ratio(S, D, w, k)
    assert 0.0 <= r <= 1.0
    assert kregret_ratio(bigger, D, w, k) <= r
    if k < D.n:
        assert kregret_ratio(S, D, w, k + 1) <= r
    assert kgain(D, w, 1) == gain(D, w)


@given(datasets())
@settings(max_examples=40, deadline=None)
def test_normalize_idempotent(D):
    once = normalize(D)
    twice = normalize(once)
    assert np.allclose(once.matrix, twice.matrix, rtol=0, atol=1e-15)
    assert once.matrix.max() <= 1.0 and once.matrix.min() > 0.0
    assert np.allclose(np.asarray(twice.norm_factors), np.asarray(once.norm_factors))
