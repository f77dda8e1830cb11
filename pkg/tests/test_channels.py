import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import Z, memory_channel_explicit, x_state_explicit
from qfi_teleport.channels import (
    ChannelConfig,
    ChannelKind,
    apply_memory_channel,
    kraus_correlated,
    kraus_uncorrelated,
    pauli_weights,
    verify_cptp,
)
from qfi_teleport.errors import InvalidState, OutOfRange
from qfi_teleport.qstate import ResourceParams, x_state

KINDS = ["ad", "pd", "de"]
unit = st.floats(0, 1)


def physical_c():
    return st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
        lambda c: ResourceParams(*c).is_physical()
    )


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(KINDS), unit, unit, physical_c())
def test_matches_explicit_channel(kind, D, mu, c):
    got = apply_memory_channel(x_state(ResourceParams(*c)), ChannelConfig(kind, D, mu))
    want = memory_channel_explicit(x_state_explicit(*c), kind, D, mu)
    assert np.allclose(got, want, atol=1e-13)


@pytest.mark.parametrize("kind", KINDS)
def test_cptp_grid(kind):
    for D in np.linspace(0, 1, 7):
        for mu in np.linspace(0, 1, 7):
            assert verify_cptp(ChannelConfig(kind, D, mu)) <= 1e-12


def test_operator_counts():
    assert len(kraus_uncorrelated("ad", 0.3)) == 4
    assert len(kraus_correlated("ad", 0.3)) == 2
    assert len(kraus_uncorrelated("de", 0.3)) == 16
    assert len(kraus_correlated("pd", 0.3)) == 2


def test_correlated_ad_operators():
    e00, e11 = kraus_correlated("ad", 0.36).operators
    assert np.allclose(np.diag(e00), [0.8, 1, 1, 1])
    assert e11[3, 0] == pytest.approx(0.6)
    assert np.count_nonzero(e11) == 1


def test_pd_correlated_operators():
    # per-use weights 1 - D/2 and D/2 (see decisions ledger)
    e0, e3 = kraus_correlated("pd", 0.4).operators
    assert np.allclose(e0, math.sqrt(0.8) * np.eye(4))
    assert np.allclose(e3, math.sqrt(0.2) * np.kron(Z, Z))


def test_pd_literal_weight_gives_squared_coherence_factor():
    # with P3 = D per use the |00><11| coherence of a Bell resource shrinks by (1 - 2D)^2
    # at mu = 0, which is not the 1 - D per use the closed forms assume
    D = 0.3
    bell = x_state_explicit(1, -1, 1)
    literal = memory_channel_explicit(bell, "pd", D, 0.0, pd_p3=D)
    halved = memory_channel_explicit(bell, "pd", D, 0.0)
    assert literal[0, 3] / bell[0, 3] == pytest.approx((1 - 2 * D) ** 2)
    assert halved[0, 3] / bell[0, 3] == pytest.approx((1 - D) ** 2)
    ours = apply_memory_channel(x_state(ResourceParams(1, -1, 1)), ChannelConfig("pd", D, 0.0))
    assert np.allclose(ours, halved)


def test_de_weights():
    w = pauli_weights(ChannelKind.DEPOLARIZING, 0.6)
    assert w == {0: pytest.approx(0.4), 1: pytest.approx(0.2), 2: pytest.approx(0.2), 3: pytest.approx(0.2)}


@pytest.mark.parametrize("kind", KINDS)
def test_zero_noise_is_identity(kind):
    rho = x_state(ResourceParams(0.8, 0.6, -0.7))
    for mu in (0, 0.4, 1):
        assert np.allclose(apply_memory_channel(rho, ChannelConfig(kind, 0.0, mu)), rho)


@pytest.mark.parametrize("kind", ["pd", "de"])
def test_full_memory_protects_bell_states(kind):
    for c in [(-1, -1, -1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)]:
        rho = x_state(ResourceParams(*c))
        out = apply_memory_channel(rho, ChannelConfig(kind, 0.7, 1.0))
        assert np.allclose(out, rho)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(KINDS), unit, unit, physical_c())
def test_output_stays_x_state(kind, D, mu, c):
    out = apply_memory_channel(x_state(ResourceParams(*c)), ChannelConfig(kind, D, mu))
    assert abs(np.trace(out) - 1) < 1e-12
    assert np.linalg.eigvalsh(out).min() > -1e-12
    for i in range(4):
        for j in range(4):
            if j not in (i, 3 - i):
                assert abs(out[i, j]) < 1e-15


def test_ad_reduces_to_single_qubit_damping():
    # |0> is the decaying level here: |00> reaches |11> with probability D^2
    D = 0.3
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1
    out = apply_memory_channel(rho, ChannelConfig("ad", D, 0.0))
    assert out[3, 3].real == pytest.approx(D * D)
    assert out[1, 1].real == pytest.approx(D * (1 - D))
    # fully correlated: both decay together or not at all
    out = apply_memory_channel(rho, ChannelConfig("ad", D, 1.0))
    assert out[3, 3].real == pytest.approx(D)
    assert out[1, 1].real == pytest.approx(0.0)


def test_errors():
    with pytest.raises(OutOfRange):
        ChannelConfig("ad", 1.2, 0.0)
    with pytest.raises(OutOfRange):
        ChannelConfig("zz", 0.2, 0.0)
    with pytest.raises(InvalidState):
        apply_memory_channel(np.diag([1.0, 1.0, -1.0, 0.0]), ChannelConfig("ad", 0.1, 0.1))
    assert ChannelConfig("phase_damping", 0.1, 0.2).kind is ChannelKind.PHASE_DAMPING

