import json
import random
from itertools import combinations

import pytest

from tpatch import calculus as calc
from tpatch import f2
from tpatch import patchwork as pw
from tpatch.errors import TooManyCells, UnsupportedDimension
from tpatch.families import itenberg_viro, knudsen, segment, unit_simplex
from tpatch.lattice import PrimitiveComplex


def membership_oracle(K, eps):
    """Cells of the T-hypersurface from the edge rule, written from scratch:
    a lifted cube is kept when some edge ab of its lower simplex has
    eps(a) + eps(b) + <b - a, arg> = 1."""
    RK = pw.build_RK(K)
    keep = set()
    for i, (low, up, v) in enumerate(RK.cells):
        for a, b in combinations(low, 2):
            vec = f2.from_coords([x - y for x, y in zip(K.points[b], K.points[a])])
            if (eps[a] + eps[b] + f2.dot(vec, v)) % 2 == 1:
                keep.add(i)
                break
    return keep


def test_sedentarity_examples():
    K = knudsen(2, 3)
    mid = K.points.index((1, 1))
    assert pw.sedentarity(K, (mid,)) == []
    origin = K.points.index((0, 0))
    basis = pw.sedentarity(K, (origin,))
    assert f2.rank_of_rows(basis) == 2
    edge = (K.points.index((1, 0)), K.points.index((2, 0)))
    assert pw.sedentarity(K, edge) == [0b10]
    hyp = (K.points.index((1, 2)), K.points.index((2, 1)))
    assert pw.sedentarity(K, hyp) == [0b11]
    K3 = knudsen(3, 2)
    assert f2.rank_of_rows(pw.sedentarity(K3, (0,))) == 3


def test_sedentarity_dimension_is_codimension():
    K = knudsen(3, 3)
    for s in K.all_simplices():
        tight = K.polytope.tight_facets(K.coords(s))
        assert len(pw.sedentarity(K, s)) == len(tight)


@pytest.mark.parametrize("K,expected", [
    (segment(1), [1, 1]),
    (unit_simplex(2), [1, 1, 1]),
    (unit_simplex(3), [1, 1, 1, 1]),
    (knudsen(2, 3), [1, 1, 1]),
    (itenberg_viro(3, 2), [1, 1, 1, 1]),
])
def test_real_toric_variety_betti(K, expected):
    assert pw.betti(pw.build_RK(K)) == expected


def test_circle_model():
    RK = pw.build_RK(segment(1))
    # one lift of each endpoint, two of the barycentre, and two of each half-edge
    assert RK.counts() == [4, 4]


def test_face_lists_are_consistent():
    K = knudsen(2, 3)
    RK = pw.build_RK(K)
    for i, fs in enumerate(RK.faces):
        assert len(set(fs)) == len(fs)
        for j in fs:
            assert RK.dims[j] == RK.dims[i] - 1
    # boundary of a boundary vanishes
    for k in (2,):
        bd_k = pw.boundary_columns(RK, k)
        bd_km1 = f2.F2Matrix(pw.boundary_columns(RK, k - 1), len(RK.cells_of_dim(k - 2))).transpose()
        for col in bd_k:
            assert bd_km1.mul_vec(col) == 0


def test_tx_matches_edge_rule():
    rng = random.Random(1)
    for K in (knudsen(2, 3), itenberg_viro(2, 4), knudsen(3, 2)):
        for _ in range(5):
            eps = [rng.getrandbits(1) for _ in K.points]
            X = pw.build_TX(K, eps)
            assert set(X.ambient) == membership_oracle(K, eps)
            assert all(len(low) >= 2 for low, _, _ in X.cells)


def test_segment_single_point():
    X = pw.build_TX(segment(1), [0, 0])
    assert len(X.cells) == 1
    assert pw.components(X)[0] == 1


def test_line_in_projective_plane():
    K = unit_simplex(2)
    for m in range(1, 7):
        X = pw.build_TX(K, f2.to_bits(m, 3))
        assert pw.betti(X) == [1, 1]


def test_maximal_cubic():
    K = knudsen(2, 3)
    X = pw.build_TX(K, calc.named_distribution("quadratic", K))
    count, labels, incidence = pw.components(X)
    assert count == 2
    assert pw.betti(X) == [2, 2]
    assert sorted(len(i) for i in incidence) == [0, 3]


def test_maximal_quintic():
    K = knudsen(2, 5)
    X = pw.build_TX(K, calc.named_distribution("quadratic", K))
    assert pw.components(X)[0] == 7


def test_harnack_quartic_surface():
    K = itenberg_viro(3, 4)
    eps = calc.harnack_signs(K)
    X = pw.build_TX(K, eps)
    count, labels, incidence = pw.components(X)
    assert count == 2
    assert sorted(incidence, key=len) == [[], [0, 1, 2, 3]]
    sphere = incidence.index([])
    assert pw.component_betti(X, sphere, labels) == [1, 0, 1]
    # the large component has Betti numbers (1, 20, 1)
    assert pw.component_betti(X, 1 - sphere, labels) == [1, 20, 1]
    assert pw.h1_inclusion_surjective(K, eps)


def test_h1_surjectivity_guard():
    with pytest.raises(UnsupportedDimension):
        pw.h1_inclusion_surjective(knudsen(2, 3), [0] * 10)


def test_h1_consistency_with_criterion():
    # conditions 1, 3, 4 hold for every sign distribution on knudsen(3, 2)
    # (no interior points); the real curve count is then 1 and the criterion
    # forces H1 surjectivity whenever b0 = 1 = maximal
    K = knudsen(3, 2)
    rng = random.Random(4)
    for _ in range(10):
        eps = [rng.getrandbits(1) for _ in K.points]
        rep = calc.haas_check(K, eps)
        assert rep.cond1_rho_uniform and rep.cond3_D2_eq_rho and rep.cond4_B1_pairing
        assert pw.b0_fast(K, eps) == 1
        assert rep.cond2_ell is True


def test_quadric_surfaces_exhaustive():
    # every sign distribution on the degree two simplex gives a hyperboloid,
    # whose H1 always reaches the ambient class
    K = knudsen(3, 2)
    seen = set()
    for m in range(2 ** len(K.points)):
        eps = f2.to_bits(m, len(K.points))
        X = pw.build_TX(K, eps)
        seen.add((tuple(pw.betti(X)), pw.h1_inclusion_surjective(K, eps)))
    assert seen == {((1, 2, 1), True)}


def test_components_of_empty_complex():
    X = pw.RealComplex(knudsen(2, 2), [], [], ambient=[])
    assert pw.components(X)[0] == 0
    assert pw.betti(X) == []


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_structural_checks_random_curves(d):
    K = knudsen(2, d)
    for i in range(50):
        eps = calc.random_signs(len(K.points), 99, i)
        X = pw.build_TX(K, eps)
        assert pw.manifold_check(X)
        assert pw.avoided_lift_check(K, eps, X)
        count = pw.components(X)[0]
        assert count == pw.betti(X)[0] == pw.b0_fast(K, eps)


def test_bounds_on_random_curves():
    K = knudsen(2, 4)
    interior = len(K.interior_vertices)
    for i in range(100):
        eps = calc.random_signs(len(K.points), 5, i)
        b0 = pw.b0_fast(K, eps)
        assert 1 + len(calc.sphere_indicators(K, eps)) <= b0 <= 1 + interior


def test_structural_checks_surface():
    K = itenberg_viro(3, 4)
    eps = calc.harnack_signs(K)
    X = pw.build_TX(K, eps)
    assert pw.manifold_check(X)
    assert pw.avoided_lift_check(K, eps, X)


def test_manifold_check_detects_defect():
    K = knudsen(2, 3)
    X = pw.build_TX(K, calc.named_distribution("quadratic", K))
    drop = X.cells_of_dim(1)[0]
    keep = [i for i in range(len(X.cells)) if i != drop]
    assert not pw.manifold_check(pw.subcomplex(X, keep))


def test_cell_dump():
    K = unit_simplex(2)
    X = pw.build_TX(K, [1, 0, 0])
    doc = json.loads(json.dumps(X.to_json()))
    assert len(doc["cells"]) == len(X.cells)
    cell = doc["cells"][0]
    assert set(cell) == {"dim", "cube", "arg"}
    assert len(cell["arg"]) == 2
    assert all(len(pair) == 2 for pair in doc["faces"])


def test_cell_cap(monkeypatch):
    monkeypatch.setattr(pw, "MAX_CELLS", 10)
    K = knudsen(2, 2)
    with pytest.raises(TooManyCells):
        pw.build_RK(K)


def test_quadrilateral_real_surface():
    # the toric surface of the E1 quadrilateral (a Hirzebruch surface)
    from conftest import E1_POINTS, quad_polytope
    K = PrimitiveComplex(E1_POINTS, [(0, 1, 2), (0, 1, 3)], quad_polytope())
    b = pw.betti(pw.build_RK(K))
    assert b[0] == 1 and b[2] == 1 and sum(b) == 4
