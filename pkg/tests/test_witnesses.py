"""Witness catalog, noise tolerances and fidelity machinery."""

from __future__ import annotations

import numpy as np
import pytest

from symwit.linalg import DenseOperator, schmidt_max_sq
from symwit.symmetric import dicke, symmetrize
from symwit.witnesses import (
    CATALOG_NAMES,
    BasisTerm,
    NoiseModel,
    WitnessSpec,
    catalog,
    expectation,
    fidelity_bound,
    fidelity_curves,
    noise_tolerance,
    nonwhite_noise_state,
    projector_witness,
    wi2_witness,
    wi3_witness,
)

CHEAP_NAMES = tuple(n for n in CATALOG_NAMES if n not in ("WP3_D105",))


def test_projector_witness_basics():
    target = dicke(6, 3)
    w = projector_witness(target, "proj")
    assert abs(w.lambda_sq - 0.6) < 1e-12
    assert abs(w.lambda_sq - schmidt_max_sq(target)) < 1e-12
    assert abs(expectation(w, target.density()) - (0.6 - 1.0)) < 1e-12
    assert w.alpha == 1.0
    # lambda^2 * 1 - |t><t| >= 0 always holds with alpha = 1
    slack = np.linalg.eigvalsh(w.dense.mat - 1.0 * w.dense.mat)[0]
    assert slack >= -1e-12


def test_catalog_names_resolve():
    for name in CHEAP_NAMES:
        w = catalog(name)
        assert w.name == name
        assert w.dense.is_hermitian(1e-10)
    assert catalog("wp_d63").name == "WP_D63"
    with pytest.raises(ValueError):
        catalog("NOPE")


def test_witness_json_round_trip():
    for name in ("WP_D63", "WP2_D63", "WP3_D42", "WI2_D63", "WI3_D41"):
        w = catalog(name)
        back = WitnessSpec.from_json(w.to_json())
        assert back.name == w.name
        assert np.max(np.abs(back.dense.mat - w.dense.mat)) < 1e-12
        assert back.alpha == w.alpha
        assert back.to_json() == w.to_json()


def test_lmi_certificate_validated_on_construction():
    target = dicke(4, 2)
    basis = (BasisTerm("identity"), BasisTerm("projector"))
    # too large an alpha has no valid certificate
    with pytest.raises(ValueError):
        WitnessSpec(
            name="bad",
            num_qubits=4,
            basis=basis,
            coefficients=(0.1, -1.0),
            target=target,
            alpha=5.0,
            lambda_sq=2 / 3,
        )


def test_noise_tolerance_is_scale_invariant_and_pi_stable():
    noise = NoiseModel.white(6)
    for name in ("WP_D63", "WP2_D63", "WP3_D63", "WI2_D63"):
        w = catalog(name)
        base = noise_tolerance(w, noise)
        # witnesses here are PI: symmetrizing the matrix must not change anything
        sym = symmetrize(w.dense)
        rho_t = w.target.density()
        value = float(np.real((sym @ rho_t).trace()))
        value_noise = float(np.real(sym.trace())) / sym.dim
        direct = value / (value - value_noise)
        assert abs(direct - base) < 1e-10


def test_noise_tolerance_requires_detection():
    w = catalog("WP_D63")
    noise = NoiseModel.white(6)
    with pytest.raises(ValueError):
        noise_tolerance(w, noise, rho=noise.rho_noise)  # <W> >= 0 there


def test_nonwhite_noise_state():
    for p in (0.0, 0.3, 4 / 7, 1.0):
        rho = nonwhite_noise_state(p)
        assert abs(rho.trace() - 1.0) < 1e-12
        assert np.linalg.eigvalsh(rho.mat)[0] > -1e-12
        fid = float(np.real(dicke(6, 3).density().expectation(rho)))
        assert abs(fid - p) < 1e-12
    with pytest.raises(ValueError):
        nonwhite_noise_state(1.5)


def test_fidelity_bound_never_exceeds_true_fidelity():
    rng = np.random.default_rng(31)
    names = ("WP_D63", "WP2_D63", "WP3_D63", "WP3_D42", "WP_D42")
    for name in names:
        w = catalog(name)
        dim = w.dense.dim
        rho_t = w.target.density().mat
        for _ in range(20):
            raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            sigma = raw @ raw.conj().T
            sigma /= np.trace(sigma).real
            p = rng.uniform(0.0, 1.0)
            rho = DenseOperator((1 - p) * rho_t + p * sigma)
            value = expectation(w, rho)
            bound = fidelity_bound(w, value)
            true_fid = float(np.real(w.target.density().expectation(rho)))
            assert bound <= true_fid + 1e-9


def test_wi2_family_uniformity():
    # the D(5,2)-anchored witness must not distinguish members of the
    # two-dimensional symmetric family spanned by D(5,2) and D(5,3)
    w = catalog("WI2_D5")
    d52 = dicke(5, 2).vec
    d53 = dicke(5, 3).vec
    rng = np.random.default_rng(32)
    base = None
    for _ in range(10):
        c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        c /= np.linalg.norm(c)
        psi = c[0] * d52 + c[1] * d53
        value = float(np.real(np.vdot(psi, w.dense.mat @ psi)))
        if base is None:
            base = value
        assert abs(value - base) < 1e-10


def test_wi3_witness_structure():
    w = wi3_witness(4, 1, c=4.1234, q=1.47, name="check")
    target = dicke(4, 1)
    # <W> at the target: c - <Jx^2+Jy^2> since the penalty vanishes there
    from symwit.linalg import op_power
    from symwit.symmetric import collective_j

    jxy = op_power(collective_j(4, "x"), 2) + op_power(collective_j(4, "y"), 2)
    want = 4.1234 - float(np.real(jxy.expectation(target)))
    assert abs(expectation(w, target.density()) - want) < 1e-10


def test_wi2_witness_matches_catalog():
    w = wi2_witness(6, c=11.0179, name="WI2_D63")
    assert np.max(np.abs(w.dense.mat - catalog("WI2_D63").dense.mat)) < 1e-12


def test_fidelity_curves_affine_structure():
    w = catalog("WP3_D63")
    noise = NoiseModel.white(6)
    grid = np.linspace(0.0, 1.0, 11)
    rows = fidelity_curves(w, noise, grid)
    assert rows.shape == (11, 3)
    assert abs(rows[0, 1] - 1.0) < 1e-12
    assert abs(rows[0, 2] - 1.0) < 1e-12
    for col in (1, 2):
        slopes = np.diff(rows[:, col]) / np.diff(rows[:, 0])
        assert np.max(np.abs(slopes - slopes[0])) < 1e-9
    assert np.all(rows[:, 2] <= rows[:, 1] + 1e-12)


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel.custom(DenseOperator(np.eye(4)))  # trace 4, not a state
    white = NoiseModel.white(3)
    assert abs(white.rho_noise.trace() - 1.0) < 1e-12


def test_expectation_rejects_unnormalized():
    w = catalog("WP_D41")
    with pytest.raises(ValueError):
        expectation(w, DenseOperator(np.eye(16)))
