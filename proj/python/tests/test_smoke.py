import math

import numpy as np
import pytest

import rgbethe as rg


def test_dicke_m1_closed_form():
    model = rg.model_dicke(0.0, [2.0], 1.0)
    sols = rg.enumerate_states(model, 1)
    lams = sorted(s.lambdas[0] for s in sols)
    assert lams == pytest.approx([-1 - math.sqrt(2), -1 + math.sqrt(2)], abs=1e-12)
    low = min(sols, key=lambda s: s.lambdas[0])
    assert rg.norm(model, low) == pytest.approx(4 + 2 * math.sqrt(2), rel=1e-12)


def test_enumeration_matches_ed():
    model = rg.model_pip(2.5, 1.0, [1.0, 2.0, 3.0, 4.0])
    sols = rg.enumerate_states(model, 2)
    assert len(sols) == rg.sector_dimension(model, 2) == 11
    charges, _ = rg.ed_charges(model, 2)
    ed = sorted(map(tuple, np.round(charges, 8)))
    ours = sorted(tuple(np.round(s.charges, 8)) for s in sols)
    assert np.allclose(np.array(ed), np.array(ours), atol=1e-7)


def test_overlap_equals_permanent():
    model = rg.model_dicke(0.5, [1.0, 2.2, 3.1], -0.2)
    sol = rg.solve_pattern(model, [0, 1, 0, 1])
    for b in rg.basis_states(model, 2):
        det = rg.overlap(model, sol, b)
        perm = rg.permanent_expansion(model, sol.rapidities, b)
        assert abs(det - perm) <= 1e-10 * max(1.0, abs(perm))


def test_errors_carry_a_code():
    with pytest.raises(rg.RGError) as info:
        rg.model_dicke(0.0, [1.0, 1.0], 0.1)
    assert info.value.code == "DuplicateLevel"


def test_model_json_roundtrip():
    model = rg.model_xxz(rg.Realization.Hyperbolic, [0.5, 1.0], -0.3)
    back = rg.ModelSpec.from_json(model.to_json())
    assert back.levels == model.levels and back.coupling == model.coupling
