"""Dense complex linear algebra helpers.

Matrices are plain ``numpy`` complex arrays. Qubit 0 is the most
significant bit of a basis label, so a 2^n vector reshaped to ``(2,)*n``
in C order has qubit ``i`` on axis ``i``.
"""
import numpy as np

from .errors import ValidationError

TOL = 1e-10


def as_matrix(a):
    m = np.asarray(a, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValidationError(f"expected a 2-d array, got shape {m.shape}")
    return m


def dagger(a):
    return np.conj(np.asarray(a)).T


def tensor_product(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*ms):
    out = np.ones((1, 1), dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def n_qubits_of(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValidationError(f"dimension {dim} is not a power of two")
    return n


# --- validators -----------------------------------------------------------

def is_square(a):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1]


def is_unitary(u, tol=TOL):
    u = np.asarray(u)
    if not is_square(u):
        return False
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= tol)


def is_hermitian(a, tol=TOL):
    a = np.asarray(a)
    return is_square(a) and bool(np.max(np.abs(a - dagger(a))) <= tol)


def is_density(rho, tol=TOL):
    rho = np.asarray(rho)
    if not is_hermitian(rho, tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return bool(np.min(np.linalg.eigvalsh((rho + dagger(rho)) / 2)) >= -tol)


def require_unitary(u, what="matrix", tol=TOL):
    if not is_unitary(u, tol):
        raise ValidationError(f"{what} is not unitary")
    return np.asarray(u, dtype=complex)


def require_hermitian(a, what="matrix", tol=TOL):
    if not is_hermitian(a, tol):
        raise ValidationError(f"{what} is not hermitian")
    return np.asarray(a, dtype=complex)


def require_same_shape(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch {a.shape} vs {b.shape}")


# --- operations ------------------------------------------------------------

def partial_trace(rho, n_qubits, traced):
    """Trace out the qubits in ``traced`` from a 2^n x 2^n operator."""
    rho = np.asarray(rho, dtype=complex)
    dim = 1 << n_qubits
    if rho.shape != (dim, dim):
        raise ValidationError(f"rho has shape {rho.shape}, expected {(dim, dim)}")
    traced = set(int(q) for q in traced)
    if any(q < 0 or q >= n_qubits for q in traced):
        raise ValidationError(f"traced qubits {sorted(traced)} out of range for n={n_qubits}")
    keep = [q for q in range(n_qubits) if q not in traced]
    t = rho.reshape((2,) * (2 * n_qubits))
    row = list(range(n_qubits))
    col = [q if q in traced else n_qubits + q for q in range(n_qubits)]
    out_idx = keep + [n_qubits + q for q in keep]
    r = np.einsum(t, row + col, out_idx)
    d = 1 << len(keep)
    return np.asarray(r).reshape(d, d)


def operator_distance(u, v):
    """max over unit psi of |(U - V) psi|, i.e. the spectral norm of U - V."""
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    require_same_shape(u, v)
    if not is_square(u):
        raise ValidationError("operator_distance needs square matrices")
    return float(np.linalg.norm(u - v, 2))


def herm_exp(h, scale):
    """exp(scale * h) for hermitian h, through its eigendecomposition."""
    h = require_hermitian(as_matrix(h), "herm_exp input")
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return (v * np.exp(scale * w)) @ dagger(v)


def equal_up_to_global_phase(u, v, tol=TOL):
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        return False
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0:
        return bool(np.max(np.abs(u), initial=0.0) <= tol)
    ratio = u[idx] / v[idx]
    if abs(ratio) == 0:
        return False
    phase = ratio / abs(ratio)
    return bool(np.max(np.abs(u - phase * v)) <= tol)


def global_phase_between(u, v):
    """Phase p with u ~ p v, taken from v's largest entry."""
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    r = u[idx] / v[idx]
    return r / abs(r)


def trace_distance(a, b):
    w = np.linalg.eigvalsh(np.asarray(a) - np.asarray(b))
    return float(0.5 * np.sum(np.abs(w)))


def random_unitary(dim, rng):
    """Haar unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(dim, rng, rank=None):
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_state(dim, rng):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
