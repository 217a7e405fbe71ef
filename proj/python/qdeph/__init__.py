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
"""Qubit dephasing under classical stochastic noise."""

from ._qdeph import (
    DephasingCurve,
    NoiseKind,
    NoiseSpec,
    Revival,
    RevivalReport,
    SpectrumEstimate,
    TimeGrid,
    d_ou,
    d_rtn,
    d_y,
    detect_revivals,
    peak_frequency,
    sample,
    simulate_curve,
    simulate_periodogram,
    spectrum_y,
)

__all__ = [
    "DephasingCurve",
    "NoiseKind",
    "NoiseSpec",
    "Revival",
    "RevivalReport",
    "SpectrumEstimate",
    "TimeGrid",
    "d_ou",
    "d_rtn",
    "d_y",
    "detect_revivals",
    "peak_frequency",
    "sample",
    "simulate_curve",
    "simulate_periodogram",
    "spectrum_y",
]
