import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dtcopath.angen import (FEATURE_NAMES, Bounds, EmptyCandidateSet, InfeasibleParams,
                            ParamRanges, candidate_array, cross_product, feature_vector,
                            fit_surrogate, generate_netlist, read_dataset, score, score_many,
                            sweep_candidates, training_grid, tune, tune_table, write_dataset,
                            write_tuning_report)
from dtcopath.netcore import TopoParams, comb_depths, emit_netlist, extract_topo_params

positive = st.floats(1e-3, 1e3, allow_nan=False)
profiles = st.tuples(*[positive] * 6)


@given(profiles)
def test_score_of_identical_profiles_is_one(p):
    assert score(p, p) == 1.0


@given(profiles, profiles)
def test_score_is_symmetric_and_at_least_one(a, b):
    s = score(a, b)
    assert s >= 1.0
    assert s == pytest.approx(score(b, a), rel=1e-12)


@given(profiles, profiles, profiles)
def test_score_triangle_inequality_in_log_space(a, b, c):
    # log score is an L1 distance of log profiles
    assert math.log(score(a, c)) <= math.log(score(a, b)) + math.log(score(b, c)) + 1e-9


@given(profiles, st.lists(profiles, min_size=1, max_size=8))
def test_score_many_matches_scalar(t, outs):
    got = score_many(t, np.array(outs))
    want = [score(t, o) for o in outs]
    assert got == pytest.approx(want, rel=1e-12)


def test_score_rejects_degenerate_profiles():
    with pytest.raises(ValueError):
        score((1,) * 6, (1,) * 5)
    with pytest.raises(ValueError):
        score((1,) * 6, (1, 1, 1, 0, 1, 1))
    assert score_many((1,) * 6, np.array([[1, 1, 1, 0, 1, 1.0]]))[0] == math.inf


def test_score_hand_value():
    # x2 on one axis, /4 on another: 2 * 4
    assert score((1, 2, 3, 4, 5, 6), (2, 2, 3, 1, 5, 6)) == pytest.approx(8.0)


small_targets = st.builds(
    TopoParams,
    n_inst=st.integers(60, 600),
    n_prim=st.integers(4, 40),
    d_avg=st.sampled_from([2.0, 2.2, 2.4, 2.8, 3.2]),
    b_avg=st.sampled_from([None, 0.1, 0.5, 0.9]),
    t_avg=st.integers(1, 8),
    s_ratio=st.sampled_from([0.05, 0.1, 0.2, 0.3]),
)


@settings(max_examples=40, deadline=None)
@given(small_targets, st.integers(0, 1000))
def test_generator_hits_counts_and_is_acyclic(lib2, p, seed):
    try:
        h = generate_netlist(p, lib2, seed)
    except InfeasibleParams:
        assume(False)
    got = extract_topo_params(h, lib2)
    assert got.n_inst == p.n_inst
    assert got.n_prim == p.n_prim
    assert got.s_ratio == pytest.approx(round(p.s_ratio * p.n_inst) / p.n_inst)
    assert got.d_avg == pytest.approx(p.d_avg, rel=0.05)
    assert got.t_avg == pytest.approx(p.t_avg, rel=0.1, abs=0.3)
    comb_depths(h)  # raises on a cycle
    assert all(len(e) >= 2 for e in h.edges)


def test_generator_is_deterministic(lib2):
    p = TopoParams(500, 30, 2.4, 0.5, 6, 0.15)
    a, b = generate_netlist(p, lib2, 7), generate_netlist(p, lib2, 7)
    assert emit_netlist(a) == emit_netlist(b)
    assert emit_netlist(generate_netlist(p, lib2, 8)) != emit_netlist(a)


@pytest.mark.parametrize("p", [
    TopoParams(1, 4, 2.4, 0.5, 5, 0.2),
    TopoParams(100, 4, 1.9, 0.5, 5, 0.2),
    TopoParams(100, 4, 2.4, 0.5, 0.5, 0.2),
    TopoParams(100, 4, 2.4, 0.5, 5, 0.0),
    TopoParams(100, 4, 2.4, 0.5, 5, 1.0),
    TopoParams(20, 4, 2.4, 0.5, 30, 0.1),
    TopoParams(100, 4, 40.0, 0.5, 5, 0.2),
])
def test_generator_refuses_unrealizable_targets(lib2, p):
    with pytest.raises(InfeasibleParams):
        generate_netlist(p, lib2, 0)


def test_locality_knob_shortens_virtual_nets(lib2):
    from dtcopath.physdes import Floorplan, place
    span = max(c.width_cpp for c in lib2)
    spans = []
    for b in (0.05, 0.95):
        h = generate_netlist(TopoParams(600, 20, 2.4, b, 5, 0.15), lib2, 2)
        fp = Floorplan.for_cells(h.n_inst, span, 0.7, 45.0, 144.0)
        spans.append(extract_topo_params(h, lib2, place(h, fp, span, seed=0)).b_avg)
    assert spans[0] < spans[1]


def test_ranges_axes_include_both_ends():
    r = ParamRanges(((0, 1, 0.25), (5, 5, 1), (1, 2, 0.3), (0, 0, 1), (3, 4, 1), (0.1, 0.2, 0.1)))
    axes = r.axes()
    assert axes[0].tolist() == [0, 0.25, 0.5, 0.75, 1.0]
    assert axes[2].tolist() == [1.0, 1.3, 1.6, 1.9]
    assert r.count == 5 * 1 * 4 * 1 * 2 * 2
    with pytest.raises(ValueError):
        ParamRanges(((1, 0, 1),) * 6)


def test_cross_product_is_lexicographic():
    g = cross_product([[1, 2], [10, 20, 30]])
    assert g.tolist() == [[1, 10], [1, 20], [1, 30], [2, 10], [2, 20], [2, 30]]


@settings(max_examples=60)
@given(st.tuples(st.floats(-1, 3), st.floats(-1, 3), st.floats(-1, 3), st.floats(-1, 3),
                 st.floats(-5, 20), st.floats(-1, 3)))
def test_bounds_mask_matches_definition(row):
    n, p, d, b, t, s = row
    want = 1 > 0 and d > 1 and d < 2.6 and 0 < b <= 1 and 0 < s <= 1 and t > 3
    got = Bounds().mask(np.array([[1.0, 1.0, d, b, t, s]]))[0]
    assert bool(got) == want


def test_sweep_candidates_respect_bounds():
    target = TopoParams(4000, 50, 2.5, 0.9, 5, 0.9)
    grid = candidate_array(target, ParamRanges.around(target))
    n, p, d, b, t, s = grid.T
    assert len(grid) and np.all((d > 1) & (d < 2.6) & (b > 0) & (b <= 1) & (s > 0) & (s <= 1) & (t > 3))
    small = ParamRanges.around(target, (200, 2, 0.1, 0.1, 2, 0.1))
    cands = sweep_candidates(target, small)
    assert [tuple(c) for c in cands] == sorted(tuple(c) for c in cands)
    assert all(c.d_avg < 2.6 and c.b_avg <= 1 and c.s_ratio <= 1 for c in cands)
    with pytest.raises(EmptyCandidateSet):
        candidate_array(target, ParamRanges(((1, 1, 1), (1, 1, 1), (3, 3, 1), (0.5, 0.5, 1),
                                              (5, 5, 1), (0.5, 0.5, 1))))


def test_training_grid_shape():
    g = training_grid()
    assert g.shape == (4 * 6 * 5 * 6 * 6 * 5, 6)


def _linear_pairs(n, rng):
    x = rng.uniform(1, 10, size=(n, 6))
    y = 2.0 * x + 1.0
    return [(tuple(a), tuple(b)) for a, b in zip(x, y)]


def test_linear_surrogate_recovers_affine_map():
    pairs = _linear_pairs(40, np.random.default_rng(0))
    m = fit_surrogate(pairs, kind="linear")
    assert m.predict([[3.0] * 6])[0] == pytest.approx([7.0] * 6)
    coef = m.coef_
    assert coef[:6] == pytest.approx(2.0 * np.eye(6), abs=1e-9)
    assert coef[6] == pytest.approx([1.0] * 6)


def test_knn_returns_exact_hits_and_weights_by_distance():
    pairs = [((float(i),) * 6, (float(10 * i),) * 6) for i in range(6)]
    m = fit_surrogate(pairs, kind="knn", k=2)
    assert m.predict_one((3.0,) * 6) == TopoParams(*([30.0] * 6))
    # a quarter of the way from 2 to 3 leans toward 2 with inverse-distance weights
    mid = m.predict([[2.25] * 6])[0]
    assert mid == pytest.approx([22.5] * 6)
    with pytest.raises(AttributeError):
        m.coef_


def test_surrogate_validation():
    pairs = _linear_pairs(5, np.random.default_rng(1))
    with pytest.raises(ValueError):
        fit_surrogate(pairs, kind="linear")
    with pytest.raises(ValueError):
        fit_surrogate(pairs, kind="knn", k=6)
    with pytest.raises(ValueError):
        fit_surrogate(pairs, kind="forest")


def test_tune_breaks_ties_lexicographically():
    # a constant surrogate scores every candidate alike
    pairs = [((float(i),) * 6, (1.0,) * 6) for i in range(1, 8)]
    m = fit_surrogate(pairs, kind="knn", k=7)
    target = TopoParams(100, 10, 2.0, 0.5, 6, 0.5)
    ranges = ParamRanges(((100, 200, 100), (10, 10, 1), (2.0, 2.2, 0.2), (0.5, 0.5, 1),
                          (6, 8, 2), (0.5, 0.5, 1)))
    best, s = tune(target, m, ranges)
    cands, scores = tune_table(target, m, ranges)
    assert scores == pytest.approx(np.full(len(scores), s), rel=1e-12)
    assert tuple(best) == tuple(cands[0]) == (100, 10, 2.0, 0.5, 6, 0.5)


def test_tune_finds_identity_optimum():
    rng = np.random.default_rng(3)
    pairs = [(tuple(x), tuple(x)) for x in rng.uniform([50, 5, 1.5, 0.1, 4, 0.1],
                                                       [150, 15, 2.5, 1.0, 8, 0.9], (30, 6))]
    m = fit_surrogate(pairs, kind="linear")
    target = TopoParams(100, 10, 2.0, 0.5, 6, 0.5)
    best, s = tune(target, m, ParamRanges.around(target, (20, 2, 0.2, 0.2, 2, 0.2),
                                                 (10, 1, 0.1, 0.1, 1, 0.1)))
    assert s == pytest.approx(1.0)
    assert tuple(best) == pytest.approx(tuple(target))


def test_dataset_and_report_files(tmp_path):
    pairs = [(TopoParams(1, 2, 3, 4, 5, 0.5), TopoParams(2, 3, 4, 5, 6, 0.25))]
    write_dataset(tmp_path / "d.csv", pairs)
    assert read_dataset(tmp_path / "d.csv") == pairs
    (tmp_path / "bad.csv").write_text("a,b\n")
    with pytest.raises(ValueError):
        read_dataset(tmp_path / "bad.csv")
    write_tuning_report(tmp_path / "r.csv", np.array([[1.0] * 6, [2.0] * 6]), np.array([3.0, 1.5]))
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[1].endswith("1.5") and lines[2].endswith("3.0")


def test_feature_vector_order():
    class Run:
        pass
    r = Run()
    for i, name in enumerate(FEATURE_NAMES):
        setattr(r, name, i)
    assert feature_vector(r).tolist() == list(range(len(FEATURE_NAMES)))
    r.wns_ns = None
    with pytest.raises(ValueError, match="wns_ns"):
        feature_vector(r)
