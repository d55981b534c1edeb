import math

import numpy as np
import pytest

import svdsurgery.homology as hom
from svdsurgery.cloud import sample_torus
from svdsurgery.errors import BudgetExceeded, InvalidInput
from svdsurgery.homology import (
    PersistencePair,
    barcode_svg,
    barcodes,
    enclosing_radius,
    h0_persistence,
    pairwise_distances,
    read_diagram,
    rips_persistence,
    write_diagram,
)

from oracles import brute_rips, mst_edge_weights


def diagram_multiset(diag):
    return sorted((p.dimension, p.birth, p.death) for p in diag.pairs)


def test_pairwise_distances_basic():
    d = pairwise_distances(np.array([[0.0, 0.0], [3.0, 0.0]]))
    assert np.array_equal(d, [[0.0, 3.0], [3.0, 0.0]])
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    d = pairwise_distances(square)
    vals = sorted(d[np.triu_indices(4, 1)])
    assert vals[:4] == pytest.approx([1, 1, 1, 1])
    assert vals[4:] == pytest.approx([np.sqrt(2)] * 2)


def test_pairwise_distances_validation():
    with pytest.raises(InvalidInput):
        pairwise_distances(np.array([[np.nan, 0.0]]))
    with pytest.raises(InvalidInput):
        hom.validate_distance_matrix(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(InvalidInput):
        hom.validate_distance_matrix(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_torus_diameter_bound():
    cloud = sample_torus(200, 2.0, 1.0, seed=3)
    d = pairwise_distances(cloud)
    assert d.max() <= 2 * (2.0 + 1.0) + 1e-12


def test_h0_single_and_pair():
    assert h0_persistence(np.zeros((1, 1))) == [PersistencePair(0, 0.0, math.inf)]
    bars = h0_persistence(np.array([[0.0, 2.5], [2.5, 0.0]]))
    assert bars == [
        PersistencePair(0, 0.0, 2.5),
        PersistencePair(0, 0.0, math.inf),
    ]


def test_h0_matches_mst_oracle():
    rng = np.random.default_rng(0)
    pts = rng.normal(size=(8, 3))
    dm = pairwise_distances(pts)
    bars = h0_persistence(dm)
    assert len(bars) == 8
    finite = sorted(p.death for p in bars if math.isfinite(p.death))
    assert finite == pytest.approx(mst_edge_weights(dm), rel=1e-12)


def test_unit_square_h1():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    diag = rips_persistence(pairwise_distances(square), max_dim=1)
    h1 = diag.in_dimension(1)
    assert len(h1) == 1
    assert h1[0].birth == pytest.approx(1.0)
    assert h1[0].death == pytest.approx(np.sqrt(2))


def test_single_point():
    diag = rips_persistence(np.zeros((1, 1)), max_dim=1, cap=1.0)
    assert diag.in_dimension(1) == []
    assert diag.in_dimension(0) == [PersistencePair(0, 0.0, math.inf)]


def test_enclosing_radius():
    dm = pairwise_distances(np.array([[0.0], [1.0], [3.0]]))
    assert enclosing_radius(dm) == 2.0  # middle point's farthest neighbour


def test_oracle_equivalence_random():
    rng = np.random.default_rng(42)
    for trial in range(40):
        npts = int(rng.integers(3, 9))
        if trial % 2:
            pts = rng.integers(0, 3, size=(npts, 3)).astype(float)
            if np.unique(pts, axis=0).shape[0] < 2:
                continue
        else:
            pts = rng.normal(size=(npts, 3))
        dm = pairwise_distances(pts)
        max_dim = int(rng.integers(1, 3))
        cap = float(dm.max() * rng.uniform(0.4, 1.1)) if trial % 3 else None
        diag = rips_persistence(dm, max_dim=max_dim, cap=cap)
        ref = brute_rips(dm, max_dim, diag.filtration_cap)
        assert diagram_multiset(diag) == ref


def test_python_fallback_matches_kernel(monkeypatch):
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(30, 3))
    dm = pairwise_distances(pts)
    fast = rips_persistence(dm, max_dim=1)
    monkeypatch.setattr(hom, "_reduction", None)
    slow = rips_persistence(dm, max_dim=1)
    assert diagram_multiset(fast) == diagram_multiset(slow)


def test_permutation_invariance():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(12, 3))
    dm = pairwise_distances(pts)
    perm = rng.permutation(12)
    d1 = rips_persistence(dm, max_dim=1)
    d2 = rips_persistence(dm[np.ix_(perm, perm)], max_dim=1)
    assert diagram_multiset(d1) == diagram_multiset(d2)


def test_scale_equivariance():
    rng = np.random.default_rng(6)
    pts = rng.normal(size=(10, 2))
    dm = pairwise_distances(pts)
    d1 = rips_persistence(dm, max_dim=1, cap=float(dm.max()))
    d2 = rips_persistence(3.0 * dm, max_dim=1, cap=float(3.0 * dm.max()))
    for p, q in zip(d1.pairs, d2.pairs):
        assert q.birth == pytest.approx(3.0 * p.birth, rel=1e-12)
        if math.isfinite(p.death):
            assert q.death == pytest.approx(3.0 * p.death, rel=1e-12)


def test_monotone_cap():
    rng = np.random.default_rng(7)
    pts = rng.normal(size=(10, 2))
    dm = pairwise_distances(pts)
    lo = rips_persistence(dm, max_dim=1, cap=1.0)
    hi = rips_persistence(dm, max_dim=1, cap=2.0)
    kept = [(p.dimension, p.birth, p.death) for p in lo.pairs
            if math.isfinite(p.death) and p.death < 1.0]
    hi_set = set(diagram_multiset(hi))
    for item in kept:
        assert item in hi_set


def test_infinite_h0_equals_components():
    # two clusters far apart with a cap below the gap
    pts = np.array([[0.0, 0], [0.1, 0], [10.0, 0], [10.1, 0]])
    diag = rips_persistence(pairwise_distances(pts), max_dim=1, cap=1.0)
    inf_bars = [p for p in diag.in_dimension(0) if math.isinf(p.death)]
    assert len(inf_bars) == 2


def test_no_nonpositive_persistence():
    rng = np.random.default_rng(8)
    pts = rng.integers(0, 2, size=(7, 3)).astype(float)
    dm = pairwise_distances(pts)
    diag = rips_persistence(dm, max_dim=2)
    for p in diag.pairs:
        assert p.death > p.birth


def test_invalid_args():
    dm = np.zeros((2, 2))
    dm[0, 1] = dm[1, 0] = 1.0
    with pytest.raises(InvalidInput):
        rips_persistence(dm, max_dim=3)
    with pytest.raises(InvalidInput):
        rips_persistence(dm, max_dim=1, cap=-1.0)


def test_budget_exceeded():
    rng = np.random.default_rng(9)
    pts = rng.normal(size=(40, 2))
    dm = pairwise_distances(pts)
    with pytest.raises(BudgetExceeded):
        rips_persistence(dm, max_dim=2, cap=float(dm.max()), budget=500)


def test_barcodes_sorted():
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    diag = rips_persistence(pairwise_distances(square), max_dim=1)
    bars = barcodes(diag)
    assert bars[1] == [(pytest.approx(1.0), pytest.approx(np.sqrt(2)))]
    assert bars[0] == sorted(bars[0])


def test_diagram_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(10)
    pts = rng.normal(size=(9, 3))
    diag = rips_persistence(pairwise_distances(pts), max_dim=2)
    path = tmp_path / "diag.csv"
    write_diagram(diag, path)
    back = read_diagram(path)
    assert diagram_multiset(back) == diagram_multiset(diag)
    assert back.filtration_cap == diag.filtration_cap
    assert back.max_dimension == diag.max_dimension


def test_barcode_svg(tmp_path):
    square = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    diag = rips_persistence(pairwise_distances(square), max_dim=1)
    path = tmp_path / "bars.svg"
    barcode_svg(diag, path)
    text = path.read_text()
    assert text.startswith("<svg")
    assert "<line" in text and "H1" in text
