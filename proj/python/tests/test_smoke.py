# Copyright 2026 The qdeph Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import qdeph


def test_closed_forms():
    t = np.array([0.0, 1.0])
    np.testing.assert_allclose(qdeph.d_ou(t, 1.0, 1.0), [1.0, 0.7144927122536722], rtol=1e-14)
    assert qdeph.d_rtn(np.array([0.0]), 0.1)[0] == 1.0
    assert qdeph.spectrum_y(np.array([0.0]), 0.1, 1.0, 0.63)[0] == 0.0


def test_sample_shapes_and_reproducibility():
    spec = qdeph.NoiseSpec.filtered_ou(0.5, 1.0, 2.0)
    grid = qdeph.TimeGrid.with_default_substeps(10.0, 21, spec)
    values, integrals = qdeph.sample(spec, grid, 3, 8)
    assert values.shape == (8, 21)
    assert integrals.shape == (8, 21)
    again, _ = qdeph.sample(spec, grid, 3, 8, threads=2)
    np.testing.assert_array_equal(values, again)


def test_rtn_curve_is_non_markovian():
    spec = qdeph.NoiseSpec.rtn(0.1)
    grid = qdeph.TimeGrid.with_default_substeps(40.0, 201, spec)
    curve = qdeph.simulate_curve(spec, grid, 1.0, 5000, 1)
    assert curve.d[0] == 1.0
    assert np.all((curve.d >= 0) & (curve.d <= 1))
    report = qdeph.detect_revivals(curve)
    assert report.verdict == "NonMarkovian"
    assert len(report.revivals) >= 3


def test_invalid_spec_raises():
    with pytest.raises(ValueError, match="noise.sigma"):
        qdeph.NoiseSpec.ou(0.1, -1.0)


def test_periodogram_peak():
    spec = qdeph.NoiseSpec.filtered_ou(0.1, 0.63, 1.0)
    grid = qdeph.TimeGrid.with_default_substeps(400.0, 4001, spec)
    est = qdeph.simulate_periodogram(spec, grid, 2, 200, 40.0)
    assert est.omega.shape == est.s.shape
    assert abs(qdeph.peak_frequency(est, 0.1, 1.0) - np.sqrt(0.1)) < 0.05
