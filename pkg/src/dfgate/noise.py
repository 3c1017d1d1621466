"""Monte-Carlo noise studies of the encoded CZ gate.

Three noise models, all quasi-static (fixed during one gate, redrawn per run):

* ``coupling``: Gaussian jitter of the six sequence phases (or, with
  ``coupling_model="five"``, of the five compiled pulse phases).
* ``collective``: one random field vector per encoded qubit, shared by its sites.
* ``individual``: an independent random field vector on every physical site.

Fields are in units of the exchange coupling J and enter each pulse as
``H_pulse + sum_s b_s . sigma_s``. Every sample uses its own RNG stream seeded
by ``(seed, strength_index, sample_index)``, so results do not depend on
evaluation order or worker count.
"""
import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import encodings, invariants, pulses, spin
from .encodings import EncodingKind

ZERO_BLOCK_TOL = 1e-8


class NoiseKind(str, enum.Enum):
    COUPLING = "coupling"
    COLLECTIVE = "collective"
    INDIVIDUAL = "individual"

    @property
    def magnetic(self):
        return self is not NoiseKind.COUPLING


COUPLING_MODELS = ("six", "five")

# Fit windows (lo, hi) on the noise strength used for the quadratic fit.
DEFAULT_FIT_WINDOW = {
    NoiseKind.COUPLING: (0.0, 0.05),
    NoiseKind.COLLECTIVE: (0.0, 0.01),
    NoiseKind.INDIVIDUAL: (0.0, 0.01),
}


@dataclass(frozen=True)
class NoiseConfig:
    kind: NoiseKind
    strengths: tuple
    samples: int = 250
    seed: int = 0
    encoding: EncodingKind = EncodingKind.FOUR
    coupling_model: str = "six"

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        object.__setattr__(self, "encoding", EncodingKind(self.encoding))
        object.__setattr__(self, "strengths", tuple(float(s) for s in self.strengths))
        if any(s < 0 or not math.isfinite(s) for s in self.strengths):
            raise ValueError("noise strengths must be finite and non-negative")
        if self.samples < 1:
            raise ValueError("need at least one sample per strength")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.coupling_model not in COUPLING_MODELS:
            raise ValueError(f"coupling_model must be one of {COUPLING_MODELS}")

    @property
    def fit_window(self):
        return DEFAULT_FIT_WINDOW[self.kind]


@dataclass(frozen=True)
class FieldAssignment:
    """Field vectors b = B/J, one per target; a target is a tuple of sites."""

    targets: tuple
    vectors: np.ndarray

    def per_site(self):
        out = {}
        for sites, b in zip(self.targets, self.vectors):
            for s in sites:
                out[s] = b
        return out


@dataclass(frozen=True)
class ProcessMatrix:
    chi: np.ndarray


@dataclass(frozen=True)
class SweepPoint:
    strength: float
    mean_fp: float
    stderr_fp: float
    mean_leakage: float

    @property
    def p_e_bound(self):
        """Upper bound ``1 - (1 - L) F_p`` on the average failure probability."""
        return 1.0 - (1.0 - self.mean_leakage) * self.mean_fp


def rng_stream(seed, *indices):
    """Independent generator for one (seed, index...) coordinate."""
    return np.random.default_rng([int(seed), *(int(i) for i in indices)])


def sample_coupling_noise(epsilon, rng, count=6):
    """``count`` iid N(0, epsilon^2) phase errors (6 written or 5 compiled phases)."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    return epsilon * rng.standard_normal(count)


def _jittered_compiled(params, delta):
    seq = pulses.compile_sequence(params)
    return pulses.CompiledSequence(
        tuple(pulses.Pulse(p.label, p.theta + d, p.duration, p.alpha)
              for p, d in zip(seq.pulses, delta)),
        seq.alpha)


def sample_magnetic_fields(b_nuc, mode, layout, rng):
    """Quasi-static fields with iid N(0, b_nuc^2) Cartesian components.

    ``collective`` gives one vector per encoded qubit, ``individual`` one per site.
    """
    if b_nuc < 0:
        raise ValueError("field strength must be non-negative")
    mode = NoiseKind(mode)
    if mode is NoiseKind.COLLECTIVE:
        targets = (layout.sites_a, layout.sites_b)
    elif mode is NoiseKind.INDIVIDUAL:
        targets = tuple((s,) for s in range(1, layout.n + 1))
    else:
        raise ValueError("magnetic fields need mode 'collective' or 'individual'")
    vectors = b_nuc * rng.standard_normal((len(targets), 3))
    return FieldAssignment(targets, vectors)


def _field_op(b):
    return b[0] * spin.PAULI["x"] + b[1] * spin.PAULI["y"] + b[2] * spin.PAULI["z"]


def _local_field(per_site, gate_sites):
    """Field Hamiltonian on the 16-dim gate square."""
    h = np.zeros((16, 16), dtype=complex)
    for pos, s in enumerate(gate_sites, start=1):
        b = per_site.get(s)
        if b is not None and np.any(b):
            h += spin.single_site_op(_field_op(b), pos, 4)
    return h


def noisy_factors(params, noise, layout):
    """The noisy gate as commuting factors ``[(op, sites), ...]``.

    With fields, the gate-square evolution and each spectator site's free
    precession act on disjoint sites, so the full unitary is their tensor
    product. Spectators precess for the whole gate duration.
    """
    if noise is None:
        return [(pulses.local_gate(params), layout.gate_sites)]
    if not isinstance(noise, FieldAssignment):
        noise = np.asarray(noise, dtype=float)
        if noise.shape == (5,):
            return [(pulses.local_gate(_jittered_compiled(params, noise)), layout.gate_sites)]
        return [(pulses.local_gate(params + noise), layout.gate_sites)]
    per_site = noise.per_site()
    h_field = _local_field(per_site, layout.gate_sites)
    seq = pulses.compile_sequence(params)
    u = np.eye(16, dtype=complex)
    for p in seq.pulses:
        h = pulses.local_hamiltonian(p.label, p.alpha) + h_field
        u = spin.evolve(h, p.duration) @ u
    factors = [(u, layout.gate_sites)]
    total = seq.total_time
    for s in range(1, layout.n + 1):
        if s in layout.gate_sites:
            continue
        b = per_site.get(s)
        if b is not None and np.any(b):
            factors.append((spin.evolve(_field_op(b), total), (s,)))
    return factors


def noisy_gate_unitary(params, noise, layout):
    """Full 2^n unitary of the gate under one noise draw.

    ``noise`` is a phase offset (length 6: the written phases, recompiled;
    length 5: the compiled pulses in time order), a ``FieldAssignment``
    (magnetic) or ``None``.
    """
    u = np.eye(layout.dim, dtype=complex)
    for op, sites in noisy_factors(params, noise, layout):
        u = spin.apply_on_sites(op, sites, u, layout.n)
    return u


def noisy_gate_unitary_direct(params, fields, layout):
    """Reference path: evolve every pulse with the field in the full space."""
    h_field = np.zeros((layout.dim, layout.dim), dtype=complex)
    for s, b in fields.per_site().items():
        h_field += spin.single_site_op(_field_op(b), s, layout.n)
    u = np.eye(layout.dim, dtype=complex)
    for p in pulses.compile_sequence(params).pulses:
        h = pulses.named_hamiltonian(p.label, layout, p.alpha) + h_field
        u = spin.evolve(h, p.duration) @ u
    return u


def _apply_factors(factors, columns, n):
    out = columns
    for op, sites in factors:
        out = spin.apply_on_sites(op, sites, out, n)
    return out


def _gauge_block(layout, u_columns_fn):
    """Project onto the (1,1) gauge block, falling back if it vanishes."""
    for label in encodings.GAUGE_FALLBACK:
        basis = encodings.gauge_block_basis(layout, label)
        block = basis.columns.conj().T @ u_columns_fn(basis.columns)
        if np.linalg.norm(block) >= ZERO_BLOCK_TOL:
            return block, label
    raise ValueError("every gauge block of the gate projection vanishes")


def logical_kraus(u, layout, frame):
    """Post-selection Kraus operator ``E1 = e^{i phi} V^dagger (P U P) V D``.

    ``u`` is a full unitary or a factor list from ``noisy_factors``.
    """
    if isinstance(u, list):
        fn = lambda cols: _apply_factors(u, cols, layout.n)  # noqa: E731
    else:
        fn = lambda cols: u @ cols  # noqa: E731
    if layout.kind == EncodingKind.FOUR:
        b = encodings.pair_basis(layout).columns
        block = b.conj().T @ fn(b)
        if np.linalg.norm(block) < ZERO_BLOCK_TOL:
            raise ValueError("gate projection onto the logical space vanishes")
    else:
        block, _ = _gauge_block(layout, fn)
    return frame.apply(block)


def _pauli_basis():
    ps = [spin.IDENTITY, spin.PAULI["x"], spin.PAULI["y"], spin.PAULI["z"]]
    return np.array([np.kron(a, b) for a, b in itertools.product(ps, ps)])


PAULI_BASIS = _pauli_basis()
_CZ_VEC = np.einsum("mij,ij->m", PAULI_BASIS.conj(), invariants.CZ) / 4
CZ_PROCESS_VECTOR = _CZ_VEC / np.linalg.norm(_CZ_VEC)


def chi_and_fidelity(e1):
    """Normalised process matrix of one Kraus operator and its fidelity to CZ.

    Returns ``(ProcessMatrix, F_p, trace_weight)``; ``trace_weight`` is the
    unnormalised ``tr(chi) = ||E1||_F^2 / 4``.
    """
    e1 = np.asarray(e1, dtype=complex)
    if np.linalg.norm(e1) < 1e-14:
        raise ValueError("Kraus operator is zero")
    a = np.einsum("mij,ij->m", PAULI_BASIS.conj(), e1) / 4
    weight = float(np.vdot(a, a).real)
    chi = np.outer(a, a.conj()) / weight
    fp = float(np.real(CZ_PROCESS_VECTOR.conj() @ chi @ CZ_PROCESS_VECTOR))
    return ProcessMatrix(chi), min(max(fp, 0.0), 1.0), weight


def quadratic_fit(points, window=None):
    """Least-squares c in ``1 - F_p = c s^2`` through the origin."""
    pts = [p for p in points if p.strength > 0]
    if window is not None:
        lo, hi = window
        pts = [p for p in pts if lo <= p.strength <= hi + 1e-15]
    if not pts:
        raise ValueError("no nonzero strengths to fit")
    s2 = np.array([p.strength**2 for p in pts])
    y = np.array([1.0 - p.mean_fp for p in pts])
    return float(s2 @ y / (s2 @ s2))


@dataclass
class NoiseExperiment:
    """A calibrated gate in one encoding, ready for noisy sampling."""

    params: pulses.PulseParameters
    layout: encodings.EncodingLayout
    coupling_model: str = "six"
    frame: invariants.LocalFrame = field(init=False)
    pair: encodings.LogicalBasis = field(init=False)

    def __post_init__(self):
        self.pair = encodings.pair_basis(self.layout)
        u0 = [(pulses.local_gate(self.params), self.layout.gate_sites)]
        block = encodings.logical_basis(self.layout).columns
        u0_block = block.conj().T @ _apply_factors(u0, block, self.layout.n)
        self.frame = invariants.calibrate_local_frame(u0_block)

    def draw(self, kind, strength, rng):
        kind = NoiseKind(kind)
        if kind is NoiseKind.COUPLING:
            return sample_coupling_noise(strength, rng, 5 if self.coupling_model == "five" else 6)
        return sample_magnetic_fields(strength, kind, self.layout, rng)

    def evaluate(self, noise):
        """(F_p, leakage) of the gate under one noise draw."""
        factors = noisy_factors(self.params, noise, self.layout)
        b = self.pair.columns
        block = b.conj().T @ _apply_factors(factors, b, self.layout.n)
        leak = encodings.leakage_from_block(block, self.pair.k)
        e1 = logical_kraus(factors, self.layout, self.frame)
        _, fp, _ = chi_and_fidelity(e1)
        return fp, leak

    def point(self, kind, strength, samples, seed, index):
        fps = np.empty(samples)
        leaks = np.empty(samples)
        for j in range(samples):
            rng = rng_stream(seed, index, j)
            fps[j], leaks[j] = self.evaluate(self.draw(kind, strength, rng))
        stderr = float(fps.std(ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
        return SweepPoint(float(strength), float(fps.mean()), stderr, float(leaks.mean()))


def _run_point(args):
    params, layout, model, kind, strength, samples, seed, index = args
    return NoiseExperiment(params, layout, model).point(kind, strength, samples, seed, index)


def noise_sweep(config, params=pulses.CZ_PARAMETERS, layout=None, workers=1):
    """Mean process fidelity and leakage at every strength of ``config``."""
    layout = layout or encodings.default_layout(config.encoding)
    if layout.kind != config.encoding:
        raise ValueError("layout encoding does not match the config")
    jobs = [(params, layout, config.coupling_model, config.kind, s, config.samples,
             config.seed, i) for i, s in enumerate(config.strengths)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(_run_point, jobs))
    exp = NoiseExperiment(params, layout, config.coupling_model)
    return [exp.point(config.kind, s, config.samples, config.seed, i)
            for i, s in enumerate(config.strengths)]
