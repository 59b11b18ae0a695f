# Copyright 2026 The cvqubit Authors
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

import json
import math

import numpy as np
import pytest

import cvqubit


def test_ideal_theta():
    assert cvqubit.ideal_theta_from_rates(1.0) == pytest.approx(math.pi / 2, abs=1e-12)
    assert cvqubit.ideal_theta_from_rates(0.0) == pytest.approx(math.pi, abs=1e-12)


def test_covariance_is_physical():
    p = cvqubit.ExperimentParams()
    st = cvqubit.build_covariance(p)
    assert st.cov.shape == (4, 4)
    assert np.allclose(st.cov, st.cov.T)
    assert min(cvqubit.symplectic_eigenvalues(st)) >= 1 - 1e-9


def test_output_state_is_normalized_and_negative():
    p = cvqubit.ExperimentParams()
    state = cvqubit.output_state(p)
    assert state.total_weight() == pytest.approx(1.0, abs=1e-12)
    grid = cvqubit.wigner_grid(state, 6.0, 121)
    dx = 12.0 / 120
    assert grid.sum() * dx * dx == pytest.approx(1.0, abs=1e-6)
    assert state(0.0, 0.0) < 0.0


def test_bloch_map():
    p = cvqubit.ExperimentParams()
    p.R_disp = p.R_sq
    m = cvqubit.bloch_fidelity_map(cvqubit.output_state(p), 0.38, 46, 91)
    assert m["values"].shape == (46, 91)
    assert m["theta_star"] < cvqubit.ideal_theta_from_rates(1.0)
    assert 0.0 < m["f_star"] <= 1.0


def test_errors_carry_kind():
    p = cvqubit.ExperimentParams()
    p.T_t = 1.2
    with pytest.raises(cvqubit.Error) as info:
        p.validate()
    assert info.value.kind == "invalid-argument"
    assert "T_t" in str(info.value)


def test_tomography_round_trip_small():
    state = cvqubit.output_state(cvqubit.ExperimentParams())
    phases, values = cvqubit.sample_quadratures(state, cvqubit.uniform_phases(12), 2000, 3)
    assert len(values) == 24000
    again = cvqubit.sample_quadratures(state, cvqubit.uniform_phases(12), 2000, 3)
    assert again[1] == values
    fit = cvqubit.mle_reconstruct(phases, values, 8, 300, 1e-9)
    assert np.diff(fit["log_likelihood"]).min() >= -1e-9
    model = cvqubit.density_from_mixture(state, 8)
    model = model / np.trace(model).real
    assert cvqubit.uhlmann_fidelity(model, fit["rho"]) > 0.9


def test_run_sweep_writes_manifest(tmp_path):
    manifest = cvqubit.run_sweep(
        out=str(tmp_path), params=["sweep.ratios=[1]", "sweep.theta_points=10", "sweep.phi_points=9"]
    )
    doc = json.loads(open(manifest).read())
    assert doc["command"] == "sweep"
    assert (tmp_path / "sweep.csv").exists()


def test_config_error_is_raised(tmp_path):
    with pytest.raises(cvqubit.Error) as info:
        cvqubit.run_state(out=str(tmp_path), params=["experiment.bogus=1"])
    assert info.value.kind == "config"
