import datetime
import math

import pytest

import twofold_py as tf


def test_croston_and_sba():
    assert tf.croston([3, 0, 0, 6], alpha=0.5) == pytest.approx(2.25)
    values = [0, 4, 0, 0, 7, 0, 1]
    assert tf.sba(values, 0.2) == (1 - 0.2 / 2) * tf.croston(values, 0.2)


def test_tsb_decays_over_zeros():
    assert tf.tsb([5, 0, 0, 0]) < tf.tsb([5])


def test_metrics():
    assert tf.auc_roc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert tf.spec([0, 3, 0], [0, 3, 0]) == 0.0
    assert tf.mase([1, 2], [1, 2], 1.0) == 0.0
    assert sum(tf.disaggregate(10.0, 3)) == 10.0


def test_classify():
    values = [0.0] * 30
    for i in range(0, 30, 3):
        values[i] = 5.0
    profile = tf.classify(values, "2024-01-01")
    assert profile["adi"] == pytest.approx(3.0)
    assert profile["quadrant"] == "Intermittent"


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        tf.croston([0, 0, 0])
    with pytest.raises(tf.TwofoldError):
        tf.auc_roc([0.1, 0.2], [1, 1])


def test_generate_and_evaluate(tmp_path):
    series = tf.generate(n_series=12, span_days=420, seed=5)
    assert len(series) == 12
    path = tmp_path / "demand.csv"
    with open(path, "w") as f:
        f.write("date,material,client,quantity\n")
        for s in series:
            day = datetime.date.fromisoformat(s["start"])
            for v in s["values"]:
                if v > 0:
                    f.write(f"{day},{s['material']},{s['client']},{v:g}\n")
                day += datetime.timedelta(days=1)
    cfg = tmp_path / "run.cfg"
    cfg.write_text("horizons = 14\ntest_days = 56\nn_folds = 2\nboost.rounds = 10\n")
    rows = tf.evaluate(str(path), ["CROSTON", "C2R1-SES"], str(cfg))
    assert [r["id"] for r in rows] == ["CROSTON", "C2R1-SES"]
    assert all(r["error"] == "" for r in rows)
    assert math.isfinite(rows[1]["auc_roc"])
