"""Built-in scenarios and seeded random scenario generators.

The registry names are stable identifiers used by the CLI:

- ``example1-compatible`` / ``example1-incompatible``: a qutrit squeezed
  into a qubit, keeping one coherence; the microscopic unitary either
  respects or mixes the kept/discarded directions.
- ``example2-compatible`` / ``example2-incompatible``: pairs of levels
  merged into single levels with coherences kept; compatibility requires
  all block unitaries to act identically in their local Fourier bases.
- ``spin-d3``: the spin-1 system dichotomized onto a qubit through its
  angular-momentum expectations, rotated about z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChoiMatrix, KrausChannel, choi_to_kraus, transfer_to_choi_mat
from .compat import Scenario
from .errors import DimensionMismatch, NotCP, NotUnitary
from .linalg import asmatrix, frob, hermitize, vec
from .rand import haar_unitary, random_kraus_ops

COMPATIBLE = "compatible"
INCOMPATIBLE = "incompatible"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class NamedScenario:
    name: str
    scenario: Scenario
    expected: str
    notes: str = ""


def _require_unitary(m: np.ndarray, what: str, tol: float = 1e-9) -> np.ndarray:
    m = asmatrix(m)
    if m.shape[0] != m.shape[1] or frob(m.conj().T @ m - np.eye(m.shape[0])) > tol:
        raise NotUnitary(f"{what} must be unitary")
    return m


def example1(u2, name: str = "example1") -> NamedScenario:
    """Qutrit-to-qubit coarse-graining keeping a single coherence.

    The map sends span{|1>,|2>} onto the qubit's |1> through the symmetric
    combination |+> = (|1>+|2>)/sqrt2, discarding the antisymmetric one.
    The microscopic unitary is block diagonal, fixing |0> and acting with
    ``u2`` on span{|1>,|2>}; the effective dynamics is well defined exactly
    when (|1>+|2>) and (|1>-|2>) are eigenvectors of ``u2``.
    """
    u2 = _require_unitary(u2, "u2")
    if u2.shape != (2, 2):
        raise DimensionMismatch("u2 must be 2x2")
    s2 = np.sqrt(2.0)
    plus = np.array([1.0, 1.0]) / s2
    minus = np.array([1.0, -1.0]) / s2
    k0 = np.array([[1, 0, 0], [0, 1 / s2, 1 / s2]], dtype=np.complex128)
    k1 = np.array([[0, 0, 0], [0, 1 / s2, -1 / s2]], dtype=np.complex128)
    u = np.eye(3, dtype=np.complex128)
    u[1:, 1:] = u2

    def eig_residual(v):
        w = u2 @ v
        return np.linalg.norm(w - (v.conj() @ w) * v)

    ok = max(eig_residual(plus), eig_residual(minus)) <= 1e-9
    return NamedScenario(
        name=name,
        scenario=Scenario(KrausChannel([k0, k1]), u),
        expected=COMPATIBLE if ok else INCOMPATIBLE,
        notes="compatible iff (|1>+|2>)/sqrt2 and (|1>-|2>)/sqrt2 are eigenvectors of u2",
    )


def _fourier(k: int) -> np.ndarray:
    """Columns are the local Fourier vectors; for k=2, |+> and |->."""
    omega = np.exp(2j * np.pi / k)
    idx = np.arange(k)
    return omega ** np.outer(idx, idx) / np.sqrt(k)


def example2(
    k: int, d: int, blocks, coherence_mode: str = "full", name: str = "example2"
) -> NamedScenario:
    """k levels merged into each of d coarse levels, with block dynamics.

    ``coherence_mode="full"`` keeps coherences between coarse levels: one
    Kraus operator per local Fourier row, so the image sees every cross-
    block Fourier-diagonal sum.  ``"none"`` decoheres the image completely,
    one Kraus operator per (row, block), leaving only block populations.

    The microscopic unitary is the direct sum of the given k x k blocks.
    With full coherences the scenario is compatible iff all blocks agree in
    their local Fourier bases up to a global phase; with no coherences any
    block-diagonal unitary is compatible.
    """
    blocks = [_require_unitary(b, "block") for b in blocks]
    if len(blocks) != d:
        raise DimensionMismatch(f"need {d} blocks, got {len(blocks)}")
    if any(b.shape != (k, k) for b in blocks):
        raise DimensionMismatch(f"blocks must be {k}x{k}")
    if coherence_mode not in ("full", "none"):
        raise ValueError(f"coherence_mode must be 'full' or 'none', got {coherence_mode!r}")
    big = k * d
    f = _fourier(k)
    u = np.zeros((big, big), dtype=np.complex128)
    for j, blk in enumerate(blocks):
        u[j * k : (j + 1) * k, j * k : (j + 1) * k] = blk

    # bras of the local Fourier vectors, one per (row i, block j)
    def bra(i, j):
        row = np.zeros(big, dtype=np.complex128)
        row[j * k : (j + 1) * k] = f[:, i].conj()
        return row

    if coherence_mode == "full":
        ops = []
        for i in range(k):
            op = np.zeros((d, big), dtype=np.complex128)
            for j in range(d):
                op[j, :] = bra(i, j)
            ops.append(op)
        in_fourier = [f.conj().T @ blk @ f for blk in blocks]
        ref = in_fourier[0]
        ok = True
        for b_j in in_fourier[1:]:
            g = ref.conj().T @ b_j
            phase = np.trace(g) / k
            if frob(g - phase * np.eye(k)) > 1e-9:
                ok = False
                break
        expected = COMPATIBLE if ok else INCOMPATIBLE
        notes = "compatible iff all blocks coincide in their local Fourier bases up to a phase"
    else:
        ops = []
        for i in range(k):
            for j in range(d):
                op = np.zeros((d, big), dtype=np.complex128)
                op[j, :] = bra(i, j)
                ops.append(op)
        expected = COMPATIBLE
        notes = "decohered image keeps only block populations; any block-diagonal unitary passes"

    return NamedScenario(
        name=name,
        scenario=Scenario(KrausChannel(ops), u),
        expected=expected,
        notes=notes,
    )


def spin_matrices(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Angular momentum matrices (Jx, Jy, Jz) for spin (dim-1)/2, hbar = 1.

    Basis ordered by descending Jz eigenvalue, ladder construction.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    j = (dim - 1) / 2
    m = np.arange(j, -j - 1, -1.0)
    jz = np.diag(m).astype(np.complex128)
    jp = np.zeros((dim, dim), dtype=np.complex128)
    for r in range(dim - 1):
        jp[r, r + 1] = np.sqrt(j * (j + 1) - m[r + 1] * (m[r + 1] + 1))
    jm = jp.conj().T
    return (jp + jm) / 2, (jp - jm) / 2j, jz


def _expm_hermitian_generator(h: np.ndarray) -> np.ndarray:
    """exp(-i h) for Hermitian h."""
    w, v = np.linalg.eigh(hermitize(h))
    return (v * np.exp(-1j * w)) @ v.conj().T


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def spin_dichotomization(dim: int, alpha: float, n, name: str = "spin") -> NamedScenario:
    """Map a spin-(dim-1)/2 system onto a qubit through its J expectations.

    The coarse state is (I + (2/(dim-1)) sum_i <J_i> sigma_i)/2; the
    microscopic dynamics is the rotation exp(-i alpha <J, n>).  Because J
    expectations rotate as a vector, the induced qubit dynamics is the
    rotation by the same angle, exp(-i (alpha/2) <sigma, n>).

    Complete positivity of the dichotomization is checked at construction
    and surfaced as NotCP when it fails for the requested dimension.
    """
    n_vec = np.asarray(n, dtype=np.float64).ravel()
    if n_vec.size != 3 or abs(np.linalg.norm(n_vec) - 1.0) > 1e-12:
        raise ValueError("n must be a unit 3-vector")
    jx, jy, jz = spin_matrices(dim)
    coeff = 2.0 / (dim - 1)
    eye2 = np.eye(2, dtype=np.complex128)
    eye_d = np.eye(dim, dtype=np.complex128)
    t_cg = 0.5 * (
        np.outer(vec(eye2), vec(eye_d).conj())
        + coeff
        * sum(np.outer(vec(s), vec(j).conj()) for s, j in zip(_PAULI, (jx, jy, jz)))
    )
    choi_raw = transfer_to_choi_mat(t_cg, dim, 2)
    w_min = float(np.linalg.eigvalsh(hermitize(choi_raw)).min())
    if w_min < -1e-8:
        raise NotCP(
            f"dichotomization is not completely positive for dim={dim} "
            f"(Choi eigenvalue {w_min:.3e})"
        )
    cg = choi_to_kraus(ChoiMatrix(dim, 2, hermitize(choi_raw)))
    u = _expm_hermitian_generator(alpha * (n_vec[0] * jx + n_vec[1] * jy + n_vec[2] * jz))
    return NamedScenario(
        name=name,
        scenario=Scenario(cg, u),
        expected=COMPATIBLE,
        notes="effective dynamics: conjugation by exp(-i alpha/2 <sigma, n>)",
    )


def emergent_spin_rotation(alpha: float, n) -> np.ndarray:
    """The qubit rotation the dichotomized spin system inherits."""
    n_vec = np.asarray(n, dtype=np.float64).ravel()
    h = alpha / 2 * sum(c * s for c, s in zip(n_vec, _PAULI))
    return _expm_hermitian_generator(h)


def random_scenario(
    big_dim: int, small_dim: int, kraus_count: int, seed: int, name: str | None = None
) -> NamedScenario:
    """Haar-random coarse-graining and unitary; deterministic in seed."""
    if small_dim > big_dim:
        raise DimensionMismatch("small_dim must not exceed big_dim")
    rng = np.random.default_rng(seed)
    cg = KrausChannel(random_kraus_ops(big_dim, small_dim, kraus_count, rng))
    u = haar_unitary(big_dim, rng)
    return NamedScenario(
        name=name or f"random-D{big_dim}-d{small_dim}-k{kraus_count}-s{seed}",
        scenario=Scenario(cg, u),
        expected=UNKNOWN,
    )


def random_planted_scenario(
    small_dim: int, env_dim: int, seed: int, name: str | None = None
) -> NamedScenario:
    """Scenario engineered to satisfy the single-V intertwining identity.

    The coarse-graining is an environment trace in a Haar-rotated frame and
    the microscopic unitary acts as a random V on the system factor of that
    frame, so ``M_k u == V M_k`` holds exactly by construction.
    """
    big_dim = small_dim * env_dim
    rng = np.random.default_rng(seed)
    w = haar_unitary(big_dim, rng)
    v = haar_unitary(small_dim, rng)
    ops = [w[k::env_dim, :] for k in range(env_dim)]
    u = w.conj().T @ np.kron(v, np.eye(env_dim)) @ w
    return NamedScenario(
        name=name or f"planted-d{small_dim}-e{env_dim}-s{seed}",
        scenario=Scenario(KrausChannel(ops), u),
        expected=COMPATIBLE,
        notes="intertwining matrix planted by construction",
    )


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def registry() -> dict[str, NamedScenario]:
    """The built-in named scenarios, keyed by their CLI identifiers."""
    s2 = np.sqrt(2.0)
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / s2

    # phases on |+>,|-> of span{|1>,|2>}: eigenvectors preserved
    u2_ok = hadamard @ np.diag(np.exp(1j * np.array([np.pi / 3, -np.pi / 5]))) @ hadamard
    # rotation by pi/4 between |+> and |->: eigenvectors mixed
    u2_bad = hadamard @ _rotation(np.pi / 4) @ hadamard

    f2 = _fourier(2)
    block = _rotation(0.4)
    block_off = f2 @ _rotation(np.pi / 3) @ f2.conj().T @ block

    entries = [
        example1(u2_ok, name="example1-compatible"),
        example1(u2_bad, name="example1-incompatible"),
        example2(2, 2, [block, block], "full", name="example2-compatible"),
        example2(2, 2, [block, block_off], "full", name="example2-incompatible"),
        spin_dichotomization(3, np.pi / 2, (0.0, 0.0, 1.0), name="spin-d3"),
    ]
    out = {e.name: e for e in entries}
    assert len(out) == len(entries), "registry names must be unique"
    return out
