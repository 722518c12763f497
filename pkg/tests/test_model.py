import numpy as np
import pytest
from sklearn.base import clone

from hodgeq import HodgeRankEstimator, QuantumHodgeRankEstimator

PATH_ROWS = [("v1", 0, 1, 1.0), ("v1", 1, 2, 1.0)]


class TestHodgeRankEstimator:
    def test_fit_path(self):
        est = HodgeRankEstimator().fit(PATH_ROWS)
        assert np.allclose(est.scores_, [-1.0, 0.0, 1.0], atol=1e-10)
        assert est.ranking_.tolist() == [2, 1, 0]
        assert est.consistency_ == pytest.approx(1.0)

    def test_three_field_rows(self):
        est = HodgeRankEstimator().fit([(0, 1, 1.0), (1, 2, 1.0)])
        assert est.ranking_.tolist() == [2, 1, 0]

    def test_predict(self):
        est = HodgeRankEstimator().fit(PATH_ROWS)
        preds = est.predict([(0, 1), (0, 2)])
        assert np.allclose(preds, [1.0, 2.0], atol=1e-10)

    def test_predict_before_fit(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            HodgeRankEstimator().predict([(0, 1)])

    def test_predict_validation(self):
        est = HodgeRankEstimator().fit(PATH_ROWS)
        with pytest.raises(ValueError, match="out of range"):
            est.predict([(0, 7)])

    def test_get_params_and_clone(self):
        est = HodgeRankEstimator(n_alternatives=4, max_dim=1)
        params = est.get_params()
        assert params == {"n_alternatives": 4, "max_dim": 1}
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_bad_rows(self):
        with pytest.raises(ValueError, match="fields"):
            HodgeRankEstimator().fit([(0, 1)])
        with pytest.raises(ValueError, match="empty"):
            HodgeRankEstimator().fit([])

    def test_explicit_n_alternatives(self):
        est = HodgeRankEstimator(n_alternatives=5).fit(PATH_ROWS)
        # isolated alternatives 3, 4 still get (zero) scores
        assert len(est.scores_) == 5


class TestQuantumHodgeRankEstimator:
    def test_matches_classical(self):
        classical = HodgeRankEstimator().fit(PATH_ROWS)
        quantum = QuantumHodgeRankEstimator(epsilon=1e-4).fit(PATH_ROWS)
        assert np.allclose(quantum.scores_, classical.scores_, atol=1e-3)
        assert quantum.ranking_.tolist() == classical.ranking_.tolist()

    def test_outcome_attached(self):
        est = QuantumHodgeRankEstimator(epsilon=1e-3).fit(PATH_ROWS)
        assert est.outcome_.bounds_valid
        assert est.outcome_.oracle_distance <= est.outcome_.distance_bound

    def test_clone_keeps_quantum_params(self):
        est = QuantumHodgeRankEstimator(epsilon=1e-2, kappa=3.0)
        assert clone(est).get_params()["epsilon"] == 1e-2
        assert clone(est).get_params()["kappa"] == 3.0
