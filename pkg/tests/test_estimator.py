import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from uflp_vqa import VariationalUflpSolver
from uflp_vqa.estimator import check_instance, check_layers, check_params
from uflp_vqa.model import REGISTRY, hard_feasible


def test_get_params_and_clone():
    est = VariationalUflpSolver(algorithm="qaoa-plus", p=3, learning_rate=0.1)
    params = est.get_params()
    assert params["algorithm"] == "qaoa-plus" and params["p"] == 3
    twin = clone(est)
    assert twin.get_params() == params
    twin.set_params(p=1)
    assert est.p == 3


def test_fit_predict():
    est = VariationalUflpSolver(p=1, max_iter=40, random_state=2).fit("instance-01")
    assert est.loss_curve_.shape == (40,)
    assert est.n_iter_ == 40
    bits = est.predict()
    assert hard_feasible(bits, est.instance_.layout)
    y, x = est.decode(bits)
    assert y.shape == (2, 2) and x.shape == (2,)
    assert est.predict_proba().sum() == pytest.approx(1)
    assert 0 <= est.score() <= 1
    assert est.energy(est.params_) == pytest.approx(est.loss_)


def test_fit_from_arrays():
    est = VariationalUflpSolver(algorithm="hea", p=1, max_iter=5).fit(([[6, 10], [3, 5]], [7, 7]))
    assert est.optimal_value_ == 16


def test_not_fitted():
    with pytest.raises(NotFittedError):
        VariationalUflpSolver().predict()


def test_bad_hyperparameters():
    with pytest.raises(ValueError):
        VariationalUflpSolver(algorithm="vqe").fit("instance-01")
    with pytest.raises(ValueError):
        VariationalUflpSolver(p=0).fit("instance-01")


def test_validation_helpers():
    assert check_instance("instance-02") is REGISTRY["instance-02"]
    with pytest.raises(ValueError):
        check_instance((np.zeros(3), np.zeros(3)))
    assert check_layers(np.int64(2)) == 2
    with pytest.raises(ValueError):
        check_layers(1.5)
    with pytest.raises(ValueError):
        check_params([0.1, np.inf], 2)
    with pytest.raises(ValueError):
        check_params([0.1], 2)
