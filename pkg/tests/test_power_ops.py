import json

import pytest
from hypothesis import given, strategies as st

from powerops import modelfile
from powerops.errors import ModelError
from powerops.power_ops import (WData, all_Q, apply_psi, derive_psi_h, individual_Q, phi,
                                psi_on_ext, q0_mod_p_check)
from powerops.rings import HRing, HSeries

import golden_values as G
from sym import hseries

R = HRing(5, 24, 12)
polys = st.lists(st.integers(-10 ** 6, 10 ** 6), min_size=0, max_size=6).map(lambda c: HSeries(R, c))
wide = st.lists(st.integers(-5 ** 12, 5 ** 12), min_size=1, max_size=24).map(lambda c: HSeries(R, c))


def test_psi_h_golden(data, exact):
    assert list(data.psi_h.coords) == [hseries(t, exact) for t in G.PSI_H]


def test_psi_h_rederived(data):
    again = derive_psi_h(data.model)
    assert again.psi_h == data.psi_h


@given(polys, polys)
def test_psi_is_a_ring_map(data, x, y):
    assert apply_psi(data, x + y) == apply_psi(data, x) + apply_psi(data, y)
    assert apply_psi(data, x * y) == apply_psi(data, x) * apply_psi(data, y)


def test_psi_fixes_scalars(data):
    assert apply_psi(data, R(7)) == data.ext(R)(R(7))


@given(polys, polys, st.integers(0, 5))
def test_Q_additive(data, x, y, i):
    assert individual_Q(data, x + y, i) == individual_Q(data, x, i) + individual_Q(data, y, i)


def test_Q_index_range(data):
    with pytest.raises(IndexError):
        individual_Q(data, R.gen(), 6)
    assert len(all_Q(data, R.gen())) == 6


@given(wide)
def test_phi_is_identity(data, x):
    assert phi(data, x) == x.reduced()


def test_phi_exact_on_polynomials(data, exact):
    x = HSeries(exact, [3, -1, 2])
    assert phi(data, x, exact=True) == x


@given(polys)
def test_q0_is_frobenius_mod_p(data, x):
    assert q0_mod_p_check(data, x)


def test_psi_on_ext_agrees_with_composite(data):
    h = R.gen()
    inner = apply_psi(data, h * h + 1)
    assert psi_on_ext(data, inner).coords[0] == phi(data, h * h + 1)


def test_p2_model():
    data = modelfile.load_builtin("p2_n3", M=10)
    assert data.p == 2 and not data.derived
    h = HRing(2, None, 10).gen()
    assert phi(data, h, exact=True) == h
    assert derive_psi_h(data.model).psi_h == data.psi_h


def test_wdata_validation():
    z = HRing(5, None).zero()
    with pytest.raises(ModelError):
        WData(5, 4, [z] * 5)
    with pytest.raises(ModelError):
        WData(5, 4, [z + 1, z, z, z, z, z])  # w is not alpha(alpha^5 - h) mod 5


def test_model_file_round_trip(data, tmp_path):
    path = tmp_path / "model.json"
    modelfile.save(data, path)
    again = modelfile.load(path)
    assert again.model.w == data.model.w and again.psi_h == data.psi_h
    assert modelfile.dumps(again) == path.read_text()


def test_model_file_keeps_supplied_psi(tmp_path):
    data = modelfile.load_builtin("p2_n3")
    text = modelfile.dumps(data)
    assert "psi_h" in json.loads(text)
    assert modelfile.loads(text).psi_h == data.psi_h


@pytest.mark.parametrize("edit", [
    lambda d: d.update(schema="powerops-model/0"),
    lambda d: d.pop("w"),
    lambda d: d.update(w=[[[0, "x"]]] * 6),
    lambda d: d.update(w=d["w"][:5]),
])
def test_bad_model_files(data, edit):
    raw = json.loads(modelfile.dumps(data))
    edit(raw)
    with pytest.raises(ModelError):
        modelfile.loads(json.dumps(raw))


def test_inconsistent_supplied_psi():
    raw = json.loads(modelfile.dumps(modelfile.load_builtin("p2_n3")))
    raw["psi_h"][0] = [[0, "1"], [2, "1"]]
    with pytest.raises(ModelError):
        modelfile.loads(json.dumps(raw))


def test_not_json():
    with pytest.raises(ModelError):
        modelfile.loads("{ nope")
