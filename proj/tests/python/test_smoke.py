import numpy as np
import pytest

import lista_space as ls


def test_soft_threshold_values():
    out = ls.soft_threshold(np.array([[-2.0, -0.5, 0.0, 0.5, 3.0]]), 1.0)
    np.testing.assert_array_equal(out, [[-1.0, 0.0, 0.0, 0.0, 2.0]])


def test_genome_counts():
    assert ls.count_extra(ls.genome_preset("lfista", 16)) == 14
    assert ls.count_extra(ls.genome_preset("dense", 16)) == 105
    assert ls.design_space_size(16, pruning=True) == 2**120
    assert ls.design_space_size(16, neurons=True) == 2**105 * 3**16


def test_invalid_genome_reports_violation():
    g = ls.genome_preset("lista", 4)
    g["side_gates"][0] = False
    assert any("layer 1" in v for v in ls.validate_genome(g))


def test_dictionary_and_dataset():
    d = ls.sample_dictionary(8, 16, 1)
    assert d.data.shape == (8, 16)
    np.testing.assert_allclose(np.linalg.norm(d.data, axis=0), 1.0, atol=1e-12)
    ds = ls.make_dataset(d, 20, seed=3)
    assert ds.count == 20 and ds.dict_id == d.id
    np.testing.assert_allclose(ds.b, d.data @ ds.x_true, atol=1e-12)


def test_ista_objective_decreases():
    d = ls.sample_dictionary(10, 20, 2)
    b = np.linspace(-1.0, 1.0, 10)
    trace = ls.ista(d.data, b, 0.1, 30)
    obj = np.array(trace["objectives"])
    assert len(trace["iterates"]) == 31
    assert np.all(np.diff(obj) <= 1e-12)
    assert ls.fista(d.data, b, 0.1, 30)["objectives"][-1] <= obj[0]


def test_train_improves_and_is_deterministic():
    d = ls.sample_dictionary(8, 16, 1)
    tr = ls.make_dataset(d, 256, seed=1, split="train")
    va = ls.make_dataset(d, 64, seed=2, split="val")
    cfg = {"steps_per_stage": 20, "val_every": 5}
    a = ls.train(ls.genome_preset("lista", 3), d, tr, va, cfg)
    b = ls.train(ls.genome_preset("lista", 3), d, tr, va, cfg)
    assert a["val_nmse_db"] <= a["init_val_nmse_db"]
    a.pop("wall_time", None)
    b.pop("wall_time", None)
    assert a == b


def test_errors_map_to_lista_error():
    with pytest.raises(ls.ListaError):
        ls.genome_preset("resnet", 4)


def test_cli_exit_codes(tmp_path):
    assert ls.cli("gen", "--count", "5", "--out-dir", str(tmp_path)) == 2
    assert ls.cli("gen", "--m", "4", "--n", "8", "--count", "5", "--out-dir", str(tmp_path)) == 0
    assert (tmp_path / "data.usrd").exists()
