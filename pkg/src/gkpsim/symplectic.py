"""Gaussian gates as linear quadrature maps and the preprocessing identity check.

Quadrature ordering is fixed as (q1, p1, q2, p2, ...) throughout the package;
modes are 0-indexed.  A gate's matrix is its Heisenberg transfer matrix (the
displayed quadrature transforms), which is also exactly how displacement
errors propagate: conjugating D(s) through the gate gives D(matrix @ s).

Measurements and feedback are nonlinear and live in ``gkpsim.schemes``; this
module stays purely linear so every contract is exactly testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

SYMPLECTIC_TOL = 1e-12
INTEGRALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard form Omega for the interleaved (q1, p1, q2, p2, ...) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        omega[2 * i, 2 * i + 1] = 1.0
        omega[2 * i + 1, 2 * i] = -1.0
    return omega


@dataclass(frozen=True)
class SymplecticMap:
    """A 2n x 2n linear quadrature map with S Omega S^T = Omega enforced."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0 or m.shape[0] == 0:
            raise ValueError("matrix must be square with even dimension 2n >= 2")
        omega = symplectic_form(m.shape[0] // 2)
        defect = np.max(np.abs(m @ omega @ m.T - omega))
        if not defect <= SYMPLECTIC_TOL:
            raise ValueError(f"matrix is not symplectic (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def symplectic_defect(self) -> float:
        omega = symplectic_form(self.n_modes)
        return float(np.max(np.abs(self.matrix @ omega @ self.matrix.T - omega)))

    def inverse(self) -> "SymplecticMap":
        # symplectic inverse: S^-1 = -Omega S^T Omega (exact up to products)
        omega = symplectic_form(self.n_modes)
        return SymplecticMap(-omega @ self.matrix.T @ omega)


def identity_map(n_modes: int) -> SymplecticMap:
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return SymplecticMap(np.eye(2 * n_modes))


def _resolve_modes(n_modes: int | None, *modes: int) -> int:
    if any(m < 0 for m in modes):
        raise ValueError("mode indices must be >= 0")
    needed = max(modes) + 1
    if n_modes is None:
        return needed
    if n_modes < needed:
        raise ValueError(f"n_modes={n_modes} too small for mode indices {modes}")
    return n_modes


def gate_squeeze(mode: int, r: float, n_modes: int | None = None) -> SymplecticMap:
    """Squeezer S(r): q -> q / r, p -> r * p on one mode."""
    if not (np.isfinite(r) and r > 0):
        raise ValueError("squeezing factor r must be finite and > 0")
    n = _resolve_modes(n_modes, mode)
    m = np.eye(2 * n)
    m[2 * mode, 2 * mode] = 1.0 / r
    m[2 * mode + 1, 2 * mode + 1] = r
    return SymplecticMap(m)


def gate_sum(control: int, target: int, n_modes: int | None = None) -> SymplecticMap:
    """SUM gate (CV CNOT): q_t -> q_t + q_c, p_c -> p_c - p_t."""
    if control == target:
        raise ValueError("control and target must differ")
    n = _resolve_modes(n_modes, control, target)
    m = np.eye(2 * n)
    m[2 * target, 2 * control] = 1.0
    m[2 * control + 1, 2 * target + 1] = -1.0
    return SymplecticMap(m)


def gate_sum_inv(control: int, target: int, n_modes: int | None = None) -> SymplecticMap:
    """Inverse-SUM gate: q_t -> q_t - q_c, p_c -> p_c + p_t."""
    if control == target:
        raise ValueError("control and target must differ")
    n = _resolve_modes(n_modes, control, target)
    m = np.eye(2 * n)
    m[2 * target, 2 * control] = -1.0
    m[2 * control + 1, 2 * target + 1] = 1.0
    return SymplecticMap(m)


def gate_bs50(j: int, k: int, n_modes: int | None = None) -> SymplecticMap:
    """50:50 beamsplitter: q_j -> (q_j - q_k)/sqrt(2), q_k -> (q_j + q_k)/sqrt(2)."""
    if j == k:
        raise ValueError("beamsplitter modes must differ")
    n = _resolve_modes(n_modes, j, k)
    m = np.eye(2 * n)
    s = 1.0 / np.sqrt(2.0)
    for off in (0, 1):  # same pattern on q and p
        m[2 * j + off, 2 * j + off] = s
        m[2 * j + off, 2 * k + off] = -s
        m[2 * k + off, 2 * j + off] = s
        m[2 * k + off, 2 * k + off] = s
    return SymplecticMap(m)


def compose(maps: Sequence[SymplecticMap], n_modes: int | None = None) -> SymplecticMap:
    """Compose maps given in circuit order: maps[0] is applied first.

    An empty circuit is the identity, but its mode count cannot be inferred,
    so compose([]) requires ``n_modes``.
    """
    maps = list(maps)
    if not maps:
        if n_modes is None:
            raise ValueError("compose of an empty circuit needs n_modes")
        return identity_map(n_modes)
    n = maps[0].n_modes
    if n_modes is not None and n_modes != n:
        raise ValueError(f"n_modes={n_modes} does not match the maps ({n} modes)")
    if any(m.n_modes != n for m in maps):
        raise ValueError("all maps must share the same mode count")
    out = np.eye(2 * n)
    for m in maps:
        out = m.matrix @ out
    return SymplecticMap(out)


def propagate_displacement(smap: SymplecticMap, shifts) -> np.ndarray:
    """Propagate a displacement vector through the map: shifts -> matrix @ shifts.

    ``shifts`` may be a length-2n vector or a (2n, k) batch of columns.
    """
    arr = np.asarray(shifts, dtype=float)
    if arr.shape[0] != 2 * smap.n_modes:
        raise ValueError(
            f"shift vector of length {arr.shape[0]} does not match {smap.n_modes} modes"
        )
    return smap.matrix @ arr


# ---------------------------------------------------------------------------
# circuits of the correction schemes (data = mode 0, ancillas = modes 1, 2)
# ---------------------------------------------------------------------------

def steane_circuit() -> SymplecticMap:
    """Coupling stage of the Steane-type scheme: SUM(0->1) then SUM(2->0)."""
    return compose([gate_sum(0, 1, n_modes=3), gate_sum(2, 0, n_modes=3)])


def preprocessing_map(a: float, b: float) -> SymplecticMap:
    """Two-mode preprocessing unitary: Inverse-SUM(1->0) then S0(1/a), S1(1/b).

    Mode 0 carries the squeezed |+> ancilla, mode 1 the squeezed |0> ancilla.
    """
    _check_positive(a=a, b=b)
    return compose(
        [
            gate_sum_inv(1, 0, n_modes=2),
            gate_squeeze(0, 1.0 / a, n_modes=2),
            gate_squeeze(1, 1.0 / b, n_modes=2),
        ]
    )


def p_steane_circuit(a: float, b: float) -> SymplecticMap:
    """Preprocessing on the ancillas followed by the swapped-order SUM stage."""
    _check_positive(a=a, b=b)
    return compose(
        [
            gate_sum_inv(2, 1, n_modes=3),
            gate_squeeze(1, 1.0 / a, n_modes=3),
            gate_squeeze(2, 1.0 / b, n_modes=3),
            gate_sum(2, 0, n_modes=3),
            gate_sum(0, 1, n_modes=3),
        ]
    )


def teleportation_circuit() -> SymplecticMap:
    """Bell preparation BS(1->2) then data-ancilla interference BS(0->1)."""
    return compose([gate_bs50(1, 2, n_modes=3), gate_bs50(0, 1, n_modes=3)])


def _check_positive(**params: float):
    for name, v in params.items():
        if not (np.isfinite(v) and v > 0):
            raise ValueError(f"{name} must be finite and > 0, got {v!r}")


# ---------------------------------------------------------------------------
# stabilizer lattice of the ancilla pair |+> (x) |0>
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StabilizerLattice:
    """Displacement-exponential stabilizers as exponent vectors.

    Row g represents exp(i * sqrt(pi) * g . (q1, p1, q2, p2, ...)) up to the
    sign conventions of the displacement operators.  Two such operators
    commute iff g Omega g'^T is an even integer, which is validated here.
    """

    generators: np.ndarray

    def __post_init__(self):
        g = np.array(self.generators, dtype=float)
        if g.ndim != 2 or g.shape[1] % 2 != 0:
            raise ValueError("generators must be a (k, 2n) array")
        omega = symplectic_form(g.shape[1] // 2)
        gram = g @ omega @ g.T
        half = gram / 2.0
        if np.max(np.abs(half - np.round(half))) > INTEGRALITY_TOL:
            raise ValueError("generator phases do not commute pairwise")
        g.setflags(write=False)
        object.__setattr__(self, "generators", g)

    @property
    def n_modes(self) -> int:
        return self.generators.shape[1] // 2

    def transform(self, smap: SymplecticMap) -> "StabilizerLattice":
        """Conjugate every generator through the map: g -> g . A^-1 (rowwise).

        Uses the exact symplectic inverse A^-T = -Omega A Omega, so no linear
        solve is involved.
        """
        if smap.n_modes != self.n_modes:
            raise ValueError("mode count mismatch")
        omega = symplectic_form(self.n_modes)
        inv_t = -omega @ smap.matrix @ omega
        return StabilizerLattice(self.generators @ inv_t.T)


def plus_zero_generators() -> StabilizerLattice:
    """Generators stabilizing |+>_0 (x) |0>_1: X0(sqrt pi), Z0(2 sqrt pi), X1(2 sqrt pi), Z1(sqrt pi)."""
    return StabilizerLattice(
        np.array(
            [
                [0.0, -1.0, 0.0, 0.0],
                [2.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, -2.0],
                [0.0, 0.0, 1.0, 0.0],
            ]
        )
    )


def lattices_equal(
    a: StabilizerLattice, b: StabilizerLattice, tol: float = INTEGRALITY_TOL
) -> bool:
    """Decide whether two full-rank generator sets span the same integer lattice.

    Equality holds iff each basis expands over the other with integer
    coefficients, i.e. both change-of-basis matrices are integral.  Both
    generator matrices must be square and invertible (always the case for the
    transformed |+>|0> set).
    """
    ga, gb = a.generators, b.generators
    if ga.shape != gb.shape or ga.shape[0] != ga.shape[1]:
        raise ValueError("lattice comparison needs square generator sets of equal shape")
    for first, second in ((ga, gb), (gb, ga)):
        try:
            coeffs = np.linalg.solve(second.T, first.T).T
        except np.linalg.LinAlgError as exc:
            raise ValueError("generator set is singular") from exc
        if np.max(np.abs(coeffs - np.round(coeffs))) > tol:
            return False
    return True


@dataclass(frozen=True)
class PreprocessingReport:
    """Outcome of the stabilizer-identity check for the preprocessing stage."""

    a: float
    b: float
    m: float
    m_is_integer: bool
    original: StabilizerLattice
    transformed: StabilizerLattice
    identical: bool
    symplectic_defect: float


def verify_preprocessing_identity(a: float, b: float) -> PreprocessingReport:
    """Check that preprocessing maps the |+>|0> stabilizer group onto itself.

    Transforms the generators through U2 = U1 S0(a) S1(b) (preprocessing
    including the ancilla pre-squeezers) and compares the generated integer
    lattices.  The identity holds exactly when m = 2a/b is a positive integer.
    """
    _check_positive(a=a, b=b)
    u2 = compose(
        [
            gate_squeeze(0, a, n_modes=2),
            gate_squeeze(1, b, n_modes=2),
            preprocessing_map(a, b),
        ]
    )
    original = plus_zero_generators()
    transformed = original.transform(u2)
    m = 2.0 * a / b
    m_is_integer = abs(m - round(m)) <= INTEGRALITY_TOL

    entries_integral = (
        np.max(np.abs(transformed.generators - np.round(transformed.generators)))
        <= INTEGRALITY_TOL
    )
    identical = bool(entries_integral and lattices_equal(original, transformed))
    return PreprocessingReport(
        a=float(a),
        b=float(b),
        m=m,
        m_is_integer=bool(m_is_integer),
        original=original,
        transformed=transformed,
        identical=identical,
        symplectic_defect=u2.symplectic_defect(),
    )
