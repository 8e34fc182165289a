"""Gated acceptance suite.

Each test asserts one release criterion at its pinned tolerance via the
shared definitions in iltlab.acceptance.  Failures here are meaningful:
a red test states that the corresponding claimed identity or rate could
not be reproduced at the gated tolerance.
"""

import json

import pytest

from iltlab import acceptance


def _report(res):
    return json.dumps(res.to_dict(), default=float, indent=1)


def test_criterion_1_bessel_identities():
    res = acceptance.criterion_1()
    assert res.passed, _report(res)


def test_criterion_2_explicit_integral_asymptotics():
    res = acceptance.criterion_2()
    assert res.passed, _report(res)


def test_criterion_3_fourier_second_moment_constants():
    res = acceptance.criterion_3()
    assert res.passed, _report(res)


def test_criterion_4_constant_identities():
    res = acceptance.criterion_4()
    assert res.passed, _report(res)


def test_criterion_5_lemma_probes():
    res = acceptance.criterion_5()
    assert res.passed, _report(res)


@pytest.mark.slow
def test_criterion_6_brownian_monte_carlo_suite():
    res = acceptance.criterion_6(n_threads=4)
    assert res.passed, _report(res)


@pytest.mark.slow
def test_criterion_7_stable_suite():
    res = acceptance.criterion_7(n_threads=4)
    assert res.passed, _report(res)


def test_criterion_8_c_beta_pipeline():
    res = acceptance.criterion_8()
    assert res.passed, _report(res)


def test_criterion_9_combinatorics_sweep():
    res = acceptance.criterion_9()
    assert res.passed, _report(res)


def test_criterion_10_artifact_determinism(tmp_path):
    res = acceptance.criterion_10(str(tmp_path))
    assert res.passed, _report(res)
