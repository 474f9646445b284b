from oirl.sysid.exceptions import InsufficientHistoryError, GainDivergenceError


def test_insufficient_history_error():
    e = InsufficientHistoryError(0.5, (-1.1, 0.5), (0.0, 10.0))
    assert e.t == 0.5
    assert str(e) == ("Evaluation at t=0.5 s needs on-grid samples over "
                      "[-1.1, 0.5] s but the trajectory covers "
                      "[0.0, 10.0] s.")

    e = InsufficientHistoryError(0.5, (-1.1, 0.5))
    assert str(e).endswith("[-1.1, 0.5] s.")


def test_gain_divergence_error():
    assert str(GainDivergenceError()) == \
        "Estimator gain is no longer positive definite."
    assert "-2.5" in str(GainDivergenceError(-2.5))
