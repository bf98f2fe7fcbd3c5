"""
Generator bases of su(N), structure constants and adjoint representations.

Every control, sensitivity and shift vector in the package is a real
coefficient vector against one of these bases. Generators are normalised
so that ``tr(s_i s_j) = 2 delta_ij`` (Pauli and Gell-Mann conventions),
which fixes the adjoint extraction to ``R_ij = tr(s_i U s_j U^dag) / 2``
for every N.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

__all__ = ['GeneratorBasis', 'pauli_basis', 'gell_mann_basis', 'adjoint_of',
           'adjoint_generator', 'operator', 'coefficients', 'random_unitary']

_HERMITIAN_ATOL = 1e-12
_UNITARY_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Ordered traceless Hermitian generators with structure constants.

    Attributes
    ----------
    dimension : int
        Hilbert-space dimension N.
    generators : ndarray, shape (N**2 - 1, N, N)
        The generators, normalised to ``tr(s_i s_j) = 2 delta_ij``.
    structure_constants : ndarray, shape (N**2 - 1,) * 3
        Real, fully antisymmetric ``f_ijk`` with
        ``[s_i, s_j] = i sum_k f_ijk s_k``.
    labels : tuple of str
    """
    dimension: int
    generators: np.ndarray
    structure_constants: np.ndarray = field(repr=False)
    labels: tuple = ()

    def __post_init__(self):
        self.generators.setflags(write=False)
        self.structure_constants.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.generators)

    def index(self, label) -> int:
        """Position of a generator given its label or an integer index."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.size:
                raise IndexError(f'generator index {label} out of range for su({self.dimension})')
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f'unknown generator label {label!r}') from None

    def unit(self, label) -> np.ndarray:
        e = np.zeros(self.size)
        e[self.index(label)] = 1.0
        return e


def _build(generators, labels) -> GeneratorBasis:
    gens = np.asarray(generators, dtype=complex)
    d, n = gens.shape[0], gens.shape[1]
    # f_ijk = tr([s_i, s_j] s_k) / (2i)
    comm = np.einsum('iab,jbc->ijac', gens, gens) - np.einsum('jab,ibc->ijac', gens, gens)
    f = np.einsum('ijab,kba->ijk', comm, gens) / 2j
    if np.abs(f.imag).max() > _HERMITIAN_ATOL:
        raise ValueError('structure constants are not real; generators are not Hermitian')
    return GeneratorBasis(n, gens, np.ascontiguousarray(f.real), tuple(labels))


def pauli_basis() -> GeneratorBasis:
    """Pauli x, y, z as a basis of su(2)."""
    sx = [[0, 1], [1, 0]]
    sy = [[0, -1j], [1j, 0]]
    sz = [[1, 0], [0, -1]]
    return _build([sx, sy, sz], ('x', 'y', 'z'))


def gell_mann_basis() -> GeneratorBasis:
    """The eight Gell-Mann matrices lambda_1 ... lambda_8 in standard order.

    Labels are ``'1'`` ... ``'8'``; list positions are zero-based.
    """
    g = np.zeros((8, 3, 3), dtype=complex)
    g[0][0, 1] = g[0][1, 0] = 1
    g[1][0, 1], g[1][1, 0] = -1j, 1j
    g[2][0, 0], g[2][1, 1] = 1, -1
    g[3][0, 2] = g[3][2, 0] = 1
    g[4][0, 2], g[4][2, 0] = -1j, 1j
    g[5][1, 2] = g[5][2, 1] = 1
    g[6][1, 2], g[6][2, 1] = -1j, 1j
    g[7] = np.diag([1, 1, -2]) / np.sqrt(3)
    return _build(g, tuple(str(k) for k in range(1, 9)))


def operator(coeffs, basis: GeneratorBasis) -> np.ndarray:
    """``x . sigma`` for one vector or a stack of vectors (last axis)."""
    return np.tensordot(np.asarray(coeffs), basis.generators, axes=([-1], [0]))


def coefficients(op, basis: GeneratorBasis) -> np.ndarray:
    """Real coefficients of the traceless Hermitian part of ``op``."""
    c = np.einsum('iab,...ba->...i', basis.generators, np.asarray(op)) / 2
    return c.real


def _check_unitary(U):
    U = np.asarray(U, dtype=complex)
    eye = np.eye(U.shape[-1])
    dev = np.abs(U @ np.swapaxes(U.conj(), -1, -2) - eye).max()
    if dev > _UNITARY_ATOL:
        raise ValueError(f'matrix is not unitary (max deviation {dev:.2e})')
    return U


def adjoint_of(U, basis: GeneratorBasis, check: bool = True) -> np.ndarray:
    """Adjoint representation R of a unitary, ``U (x.s) U^dag = (R x).s``.

    Accepts a single ``(N, N)`` matrix or a stack ``(..., N, N)``.
    """
    U = _check_unitary(U) if check else np.asarray(U, dtype=complex)
    if U.shape[-1] != basis.dimension:
        raise ValueError(f'unitary of size {U.shape[-1]} does not match su({basis.dimension})')
    s = basis.generators
    Us = U[..., None, :, :] @ s               # (..., d, N, N): U s_j
    UsUd = Us @ np.swapaxes(U.conj(), -1, -2)[..., None, :, :]
    R = np.einsum('iab,...jba->...ij', s, UsUd) / 2
    return np.ascontiguousarray(R.real)


def adjoint_generator(index, basis: GeneratorBasis) -> np.ndarray:
    """Real antisymmetric generator L_i of the adjoint action.

    Normalised so that ``expm(t * L_i) == adjoint_of(expm(-1j * t * s_i / 2))``;
    entrywise ``L_i[j, k] = f_ikj / 2``. For su(2) this is the usual so(3)
    rotation generator about axis i.
    """
    i = basis.index(index)
    return 0.5 * basis.structure_constants[i].T.copy()


def random_unitary(n: int, rng=None) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((n, n)) + 1j*rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = sla.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
