"""Backend parity: the compiled kernels and the NumPy fallback must agree,
and grid evaluation must be independent of the thread count."""

import os
import subprocess
import sys

import numpy as np
import pytest

from mesofringe import _kernels_py, kernels
from mesofringe.presets import experiment_preset
from mesofringe.visibility import DecoherenceScenario, decohered_pattern


def test_backend_reports_a_known_name():
    assert kernels.backend() in ("compiled", "python")


def test_volterra_parity():
    rng = np.random.default_rng(1)
    ts = np.linspace(0.0, 5.0, 801)
    sigma = 3.0 * np.exp(-4.0 * ts) * np.exp(1j * 0.7 * ts)
    a_sel = kernels.volterra_trapezoid(sigma, ts[1])
    a_py = _kernels_py.volterra_trapezoid(sigma, ts[1])
    assert np.abs(a_sel - a_py).max() < 1e-12


def test_angular_average_parity():
    z = np.linspace(-3.0, 3.0, 101)
    tol = 1e-10
    a_sel = kernels.angular_average_grid(z, 0.624, 15.7, tol)
    a_py = _kernels_py.angular_average_grid(z, 0.624, 15.7, tol)
    # both honour the same absolute tolerance
    assert np.abs(a_sel - a_py).max() < 2.0 * tol + 1e-13


def test_pure_python_env_override():
    code = (
        "import mesofringe.kernels as k; print(k.backend())"
    )
    env = dict(os.environ, MESOFRINGE_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.stdout.strip() == "python"


def test_thread_count_invariance():
    experiment = experiment_preset("presentation")
    scenario = DecoherenceScenario.from_presentation(experiment, 1.0, 0.5)
    x = np.linspace(-1.0, 1.0, 257) * experiment.spread_at_screen()

    baseline = os.environ.pop("MESOFRINGE_THREADS", None)
    try:
        os.environ["MESOFRINGE_THREADS"] = "1"
        serial = decohered_pattern(scenario, x, path="exact").intensity
        os.environ["MESOFRINGE_THREADS"] = "4"
        threaded = decohered_pattern(scenario, x, path="exact").intensity
    finally:
        if baseline is None:
            os.environ.pop("MESOFRINGE_THREADS", None)
        else:
            os.environ["MESOFRINGE_THREADS"] = baseline
    assert np.array_equal(serial, threaded)


def test_bad_thread_count_rejected():
    from mesofringe.visibility import thread_count

    baseline = os.environ.pop("MESOFRINGE_THREADS", None)
    try:
        os.environ["MESOFRINGE_THREADS"] = "many"
        with pytest.raises(ValueError):
            thread_count()
    finally:
        if baseline is None:
            os.environ.pop("MESOFRINGE_THREADS", None)
        else:
            os.environ["MESOFRINGE_THREADS"] = baseline
