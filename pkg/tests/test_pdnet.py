import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import _netgraph
from dtcopath.pdnet import (P_BB, P_BS, P_FB, P_FS, SCHEMES, TAP_PITCHES, DisconnectedInstanceError,
                            PdnConfig, PdnConfigError, ResistiveNetwork, StripeSpec, TapError,
                            VDD, VSS, build_pdn, check_connectivity, expected_tap_count,
                            extract_resistive_network, format_pdn_config, insert_tap_cells,
                            parse_pdn_config, rail_net, routing_derate, routing_derates,
                            stripe_centers, tap_rows, tsv_resistance)
from dtcopath.pdnet.mesh import via_count
from dtcopath.physdes import Floorplan


def test_config_requires_taps_exactly_where_needed():
    with pytest.raises(PdnConfigError):
        PdnConfig(P_FB)
    with pytest.raises(PdnConfigError):
        PdnConfig(P_BS, 50, "Column")
    with pytest.raises(PdnConfigError):
        PdnConfig(P_FS, 48, "Column")
    with pytest.raises(PdnConfigError):
        PdnConfig("P_XX")
    with pytest.raises(PdnConfigError):
        PdnConfig(P_BS, 48, "diagonal")
    with pytest.raises(PdnConfigError):
        PdnConfig(P_BB, bb_via_pitch_cpp=0)


def test_config_normalizes_names_and_labels():
    c = PdnConfig("bs", 48, "staggered")
    assert c.kind == P_BS and c.tap_scheme == "Staggered"
    assert c.label == "P_BS-48-Staggered"
    assert PdnConfig("p_bb").label == P_BB
    assert c.is_backside and not c.is_bpr and c.needs_taps and c.tap_width_cpp == 6
    assert PdnConfig(P_FB, 24, "column").tap_width_cpp == 2


configs = st.one_of(
    st.sampled_from([PdnConfig(P_FS), PdnConfig(P_BB), PdnConfig(P_BB, bb_via_pitch_cpp=12)]),
    st.builds(PdnConfig, st.sampled_from([P_FB, P_BS]), st.sampled_from(TAP_PITCHES),
              st.sampled_from(SCHEMES)),
)


@given(configs, st.none() | st.dictionaries(st.sampled_from(["M1", "M2", "M3"]),
                                            st.sampled_from([0.0, 0.25, 0.5]), min_size=1))
def test_config_text_round_trip(cfg, derates):
    if derates:
        cfg = PdnConfig(cfg.kind, cfg.tap_pitch_cpp, cfg.tap_scheme,
                        bb_via_pitch_cpp=cfg.bb_via_pitch_cpp, derates=derates)
    assert parse_pdn_config(format_pdn_config(cfg)) == cfg


def test_config_stripe_override():
    cfg = parse_pdn_config("pdn kind=fs\nstripe M3 density=0.5  # denser")
    assert cfg.stripes["M3"].density == 0.5
    assert cfg.stripes["M3"].pitch_um == PdnConfig().stripes["M3"].pitch_um


@pytest.mark.parametrize("text, needle", [
    ("", "missing 'pdn'"),
    ("pdn kind=fs color=red", "unknown pdn key"),
    ("pdn kind=fs\nstripe", "needs a layer"),
    ("pdn kind=fs\nstripe M3 density=lots", "line 2"),
    ("pdn kind=fs\nvia M3=1", "unknown directive"),
    ("pdn kind=fs tap_pitch", "key=value"),
    ("pdn kind=fb", "needs tap_pitch"),
])
def test_config_parse_errors(text, needle):
    with pytest.raises(PdnConfigError, match=needle):
        parse_pdn_config(text)


def test_rails_alternate_and_tap_flavors():
    assert [rail_net(b) for b in range(4)] == [VSS, VDD, VSS, VDD]
    taps, _ = insert_tap_cells(Floorplan(4, 60), P_FB, 24, "Column")
    assert {t.flavor for t in taps} == {"VSS-VDD-VSS"}
    assert tap_rows(7, "Column") == [(0, 0), (2, 1), (4, 0)]


def test_tap_errors():
    with pytest.raises(TapError):
        insert_tap_cells(Floorplan(4, 60), P_FS, 24, "Column")
    with pytest.raises(TapError):
        insert_tap_cells(Floorplan(4, 60), P_BS, 4, "Column")
    with pytest.raises(TapError):
        insert_tap_cells(Floorplan(4, 5), P_BS, 24, "Column")


@given(st.integers(2, 40), st.integers(6, 300), st.sampled_from(TAP_PITCHES),
       st.sampled_from(SCHEMES), st.sampled_from([P_FB, P_BS]))
def test_tap_count_matches_closed_form(rows, sites, pitch, scheme, kind):
    fp = Floorplan(rows, sites)
    w = 2 if kind == P_FB else 6
    want = expected_tap_count(rows, sites, pitch, w, scheme)
    if want == 0:
        with pytest.raises(TapError):
            insert_tap_cells(fp, kind, pitch, scheme)
        return
    taps, keep = insert_tap_cells(fp, kind, pitch, scheme)
    assert len(taps) == want
    assert all(t.row % 2 == 0 and t.row + 1 < rows for t in taps)
    assert set().union(*(t.sites() for t in taps)) <= keep


def test_tsv_resistance_and_via_arrays():
    assert tsv_resistance(P_BS) == pytest.approx(1e-7 * 10 / 90e-9)
    assert tsv_resistance(P_FB) == pytest.approx(0.7 * tsv_resistance(P_BS))
    assert via_count("M3", 12.0, 32.0) == 1
    assert via_count("M12", 1800.0, 1800.0) == 1
    assert via_count("M5", 1000.0, 1000.0) == 49


def test_stripe_centers_pair_up():
    spec = StripeSpec(1.08, 0.012, 0.508, 0.04)
    cs = stripe_centers(10_000.0, spec)
    assert cs and [n for n, _, _ in cs[:2]] == [VDD, VSS]
    assert all(0 <= c <= 10_000.0 for _, c, _ in cs)
    assert sum(1 for n, _, _ in cs if n == VDD) == sum(1 for n, _, _ in cs if n == VSS)


@pytest.mark.parametrize("cfg, link_kind", [
    (PdnConfig(P_FS), "V0-V2"),
    (PdnConfig(P_FB, 48, "Column"), "TSV"),
    (PdnConfig(P_BS, 48, "Staggered"), "TSV"),
    (PdnConfig(P_BB), "TSV"),
])
def test_build_pdn_per_kind(cfg, link_kind, tech2):
    fp = Floorplan(40, 400, tech2.cpp_nm, tech2.row_height_nm)
    mesh = build_pdn(cfg, fp, tech2)
    kinds = {ln.kind for ln in mesh.links}
    assert link_kind in kinds
    assert mesh.pads
    assert len(mesh.rails()) == fp.n_rows + 1
    assert {r.layer for r in mesh.rails()} == {"BPR" if cfg.is_bpr else "M0"}
    layers = {s.layer for s in mesh.stripes()}
    if cfg.is_backside:
        assert layers <= {"BM1", "BM2"}
    else:
        assert "M3" in layers
    assert all(ln.ohm > 0 for ln in mesh.links)
    assert bool(mesh.taps) == cfg.needs_taps


def test_routing_derates():
    fs, bs = PdnConfig(P_FS), PdnConfig(P_BS, 48, "Column")
    assert routing_derate(fs, "M3") == pytest.approx(0.04)
    assert routing_derate(fs, "M1") == 0.0
    assert all(v == 0.0 for v in routing_derates(bs).values())
    assert routing_derate(PdnConfig(P_BB, derates={"M2": 0.3}), "M2") == 0.3


def test_extraction_attaches_every_instance(tech2):
    fp = Floorplan(20, 200, tech2.cpp_nm, tech2.row_height_nm)
    mesh = build_pdn(PdnConfig(P_BB), fp, tech2)
    attach = {f"i{k}": (fp.cpp_nm * (5 + 9 * k), k % 20) for k in range(20)}
    rn = extract_resistive_network(mesh, attach=attach)
    for net in (VDD, VSS):
        ng = rn.nets[net]
        assert set(ng.attach) == set(attach)
        assert np.all(ng.g > 0) and len(ng.pads)
        # the laplacian is symmetric with zero row sums
        lap = ng.laplacian()
        assert abs(lap - lap.T).max() == 0
        assert np.allclose(np.asarray(lap.sum(axis=1)).ravel(), 0.0, atol=1e-9)
    assert sorted(rn.instances) == sorted(attach)


def test_disconnected_instance_is_reported():
    edges = [(0, 1, 1.0)]
    attach = {"ok": 1, "lost": 2}
    rn = ResistiveNetwork({net: _netgraph(net, 3, edges, [0], attach) for net in (VDD, VSS)})
    with pytest.raises(DisconnectedInstanceError) as info:
        check_connectivity(rn)
    assert info.value.instance == "lost"
