# Copyright 2026 The featrank Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import pytest

import featrank


def test_synth_roundtrip():
    table, truth = featrank.synth("default", rows=300, seed=4)
    assert table.rows == 300
    assert "ethnicity" in table.feature_names
    again = featrank.Table.from_csv(table.to_csv(), table.schema_json())
    assert again == table
    assert '"intercept"' in truth


def test_synth_is_deterministic():
    a, _ = featrank.synth("planted", rows=500, seed=2, effect=1.0)
    b, _ = featrank.synth("planted", rows=500, seed=2, effect=1.0)
    assert a.to_csv() == b.to_csv()


def test_weigh_ranks_every_attribute():
    table, _ = featrank.synth("planted", rows=2000, seed=0)
    w = featrank.weigh(table)
    assert len(w["algorithms"]) == 6
    assert sorted(w["overall_rank"]) == list(range(1, len(w["attributes"]) + 1))
    assert "ethnicity" in w["order"][:3]
    assert w["csv"].startswith("attribute,")


def test_aggregate_ranks():
    mean, overall = featrank.aggregate_ranks(["a", "b"], [[1, 2], [2, 1]])
    assert mean == {"a": 1.5, "b": 1.5}
    assert overall == {"a": 1, "b": 2}


def test_auc_and_chi_squared():
    assert featrank.auc([0.1, 0.9, 0.5, 0.5], [0, 1, 1, 0]) == pytest.approx(0.875)
    assert featrank.auc([0.3] * 4, [0, 1, 0, 1]) == 0.5
    assert featrank.chi_squared([[10, 0], [0, 10]]) == 20.0


def test_smote_balances_classes():
    table, _ = featrank.synth("default", rows=400, seed=1)
    out = featrank.smote(table, k=5, ratio=1.0, seed=3)
    pos = out.positive_count()
    assert pos == out.rows - pos
    assert out.rows > table.rows


def test_ablate_small():
    table, _ = featrank.synth("planted", rows=600, seed=0, effect=1.5)
    r = featrank.ablate(table, "ethnicity", folds=3, classifiers=["glm", "decision_tree"])
    assert set(r["with"]["classifiers"]) == {"glm", "decision_tree"}
    assert r["delta"]["auc"] == pytest.approx(
        r["with"]["average"]["auc"] - r["without"]["average"]["auc"])
    assert r["with"]["classifiers"]["glm"]["leakage_violations"] == 0


def test_errors_map_to_python_exceptions():
    with pytest.raises(featrank.ConfigError):
        featrank.synth("nope")
    with pytest.raises(featrank.DataError):
        featrank.Table.from_csv("a\n1\n", '{"columns": []}')
    assert issubclass(featrank.DataError, ValueError)
