import math

import numpy as np
import pytest

from qpe import qcrypto, qmath, qstate
from qpe.errors import ValidationError
from qpe.qcircuit import gate

P0 = np.diag([1, 0]).astype(complex)


def random_rho(seed):
    return qmath.random_density(2, np.random.default_rng(seed))


@pytest.mark.parametrize("seed", range(10))
def test_auth_round_trip(seed):
    s = qcrypto.AuthSession()
    rho = random_rho(seed)
    dec = qcrypto.auth_decode(s, qcrypto.auth_encode(s, qcrypto.TaggedMessage(rho)))
    assert np.max(np.abs(dec.rho_m - rho)) < 1e-12
    assert qcrypto.auth_verify(dec) == pytest.approx(1.0, abs=1e-12)


def test_eve_sees_key_averaged_state():
    s = qcrypto.AuthSession()
    msg = qcrypto.TaggedMessage(random_rho(3))
    eve = qcrypto.eve_view(qcrypto.auth_encode(s, msg))
    u = s.u_eps
    assert np.allclose(eve, 0.5 * (msg.state() + u @ msg.state() @ u.conj().T), atol=1e-12)


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
def test_mixed_key_branch_sum(p):
    s = qcrypto.AuthSession(p_mix=p)
    msg = qcrypto.TaggedMessage(random_rho(4))
    dec = qcrypto.auth_decode(s, qcrypto.auth_encode(s, msg))
    assert np.allclose(dec.state(), qcrypto.mixed_key_expected(s, msg), atol=1e-12)
    assert np.trace(dec.state()).real == pytest.approx(1.0)


def test_separable_attack_passes_tag_but_flips_message():
    s = qcrypto.AuthSession(u_eps=qcrypto.separable_u_eps())
    dec, acc, td = qcrypto.run_auth_attack(s, qcrypto.TaggedMessage(P0), gate("X").matrix)
    assert np.max(np.abs(dec.rho_t - P0)) < 1e-12
    assert acc == pytest.approx(1.0)
    assert td > 0.4


def test_attack_refused_for_entangling_code():
    with pytest.raises(ValidationError):
        qcrypto.auth_attack_separable(qcrypto.AuthSession(), gate("X").matrix)
    assert qcrypto.operator_schmidt_rank(qcrypto.default_u_eps()) == 2
    assert qcrypto.operator_schmidt_rank(qcrypto.separable_u_eps()) == 1


def test_key_is_singlet_or_mixture():
    k = qcrypto.AuthSession(p_mix=0.4).key()
    assert qmath.is_density(k)
    assert np.trace(k @ qcrypto.singlet_density()).real == pytest.approx(0.6 + 0.4 / 4)


def test_decode_block_is_permutation():
    w = qcrypto.decode_block()
    assert np.allclose(w @ w.T, np.eye(32))
    assert set(np.unique(w)) <= {0.0, 1.0}


@pytest.mark.parametrize("flip", [None, 0, 1, 2])
def test_syndromes_identify_single_flips(flip):
    a, b = 0.6, 0.8
    cw = qcrypto.codeword(a, b)
    state = qstate.StateVector(cw)
    if flip is not None:
        state = qstate.apply(state, gate("X").matrix, [flip])
    _, data = qcrypto.stego_decode(state)
    assert np.allclose(data.amps, cw, atol=1e-12)


def test_syndrome_labels_are_distinct():
    cw = qstate.StateVector(qcrypto.codeword(0.6, 0.8))
    labels = {qcrypto.stego_decode(qstate.apply(cw, gate("X").matrix, [q]))[0] for q in range(3)}
    labels.add(qcrypto.stego_decode(cw)[0])
    assert len(labels) == 4


def test_stego_round_trip_random_logicals():
    g = np.random.default_rng(11)
    for _ in range(25):
        v = qmath.random_state(2, g)
        for msg in ("00", "01", "10", "11"):
            ab, data = qcrypto.stego_decode(qcrypto.stego_insert((v[0], v[1]), msg))
            assert ab == msg
            assert np.allclose(data.amps, qcrypto.codeword(v[0], v[1]), atol=1e-12)


def test_watermark_recovery():
    tag = np.array([0.5, 0.5j, -0.5, 0.5])
    s = qcrypto.stego_watermark((0.6, 0.8), tag)
    (a, b), t, rho = qcrypto.stego_recover(s)
    assert (a, b) == (pytest.approx(0.6), pytest.approx(0.8))
    assert qmath.equal_up_to_global_phase(t.reshape(-1, 1), tag.reshape(-1, 1), 1e-10)


@pytest.mark.parametrize("msg", ["00", "01", "10", "11"])
def test_superdense(msg):
    dec, eve = qcrypto.superdense(msg)
    assert dec == msg
    assert np.max(np.abs(eve - np.eye(2) / 2)) < 1e-12


def test_reports_are_json_ready():
    import json
    json.dumps(qcrypto.report_auth())
    json.dumps(qcrypto.report_attack(gate("X").matrix))
    json.dumps(qcrypto.report_stego(0.6, 0.8, "10"))
    json.dumps(qcrypto.report_superdense("01"))
