"""Pulse-sequence search: real-coded genetic algorithm, then Nelder-Mead.

The objective is ``f_m + w * L4`` of the sequence projected onto the
4-qubit logical basis. The sequence only touches the four gate sites, so
each evaluation works with 16x16 propagators and a precontracted basis.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import encodings, invariants, pulses, spin
from .pulses import PulseLabel, TWO_PI


@dataclass(frozen=True)
class SearchConfig:
    population: int = 60
    generations: int = 500
    tournament_size: int = 3
    crossover_prob: float = 0.7
    mutation_prob: float = 0.2
    mutation_sigma: float = 0.3
    elite_count: int = 2
    restarts: int = 8
    nm_max_iter: int = 20000
    nm_tol_x: float = 1e-12
    nm_tol_f: float = 1e-14
    nm_initial_step: float = 0.1
    leakage_weight: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("population must be at least 4")
        for name in ("crossover_prob", "mutation_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if not 0 <= self.elite_count < self.population:
            raise ValueError("elite_count must be in [0, population)")
        if not 1 <= self.tournament_size <= self.population:
            raise ValueError("tournament_size must be in [1, population]")
        if self.generations < 0 or self.nm_max_iter < 0:
            raise ValueError("iteration budgets must be non-negative")
        if self.leakage_weight < 0:
            raise ValueError("leakage_weight must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**d)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class SearchResult:
    thetas: np.ndarray
    fm: float
    leakage: float
    objective: float
    evaluations: int
    converged: bool = True
    restart: int = 0
    history: list = field(default_factory=list, repr=False)

    def params(self):
        """The six phases as ``PulseParameters`` (only for the six-slot template)."""
        return pulses.PulseParameters.from_array(np.mod(self.thetas, TWO_PI))

    def as_dict(self):
        return {
            "thetas": [float(t) for t in np.mod(self.thetas, TWO_PI)],
            "fm": self.fm,
            "leakage": self.leakage,
            "objective": self.objective,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "restart": self.restart,
        }


def parse_template(labels):
    """Template from ``"asymp,parallel,..."`` or an iterable of labels."""
    if isinstance(labels, str):
        labels = [s.strip() for s in labels.split(",") if s.strip()]
    template = tuple(PulseLabel(s) for s in labels)
    validate_template(template)
    return template


def validate_template(template):
    if not template:
        raise ValueError("template is empty")
    for i, label in enumerate(template):
        if label == PulseLabel.SYMMETRIC:
            raise ValueError("the symmetric pulse comes from compilation, not the search")
        if label == PulseLabel.RING:
            neighbours = template[max(i - 1, 0):i] + template[i + 1:i + 2]
            if PulseLabel.BOX not in neighbours:
                raise ValueError("a ring slot must sit next to a box slot")


class SequenceObjective:
    """Callable ``theta -> f_m + w * L4`` for one template (counts evaluations)."""

    def __init__(self, template, leakage_weight=10.0, layout=None):
        self.template = tuple(template)
        validate_template(self.template)
        self.leakage_weight = leakage_weight
        self.layout = layout or encodings.default_layout(encodings.EncodingKind.FOUR)
        if self.layout.kind != encodings.EncodingKind.FOUR:
            raise ValueError("the search objective is evaluated in the 4-qubit encoding")
        self._props = [spin.Propagator(pulses.local_hamiltonian(lbl)) for lbl in self.template]
        self._basis = self._gate_major_basis()
        self.evaluations = 0

    def _gate_major_basis(self):
        n = self.layout.n
        cols = encodings.pair_basis(self.layout).columns
        t = cols.reshape((2,) * n + (cols.shape[1],))
        gate_axes = [s - 1 for s in self.layout.gate_sites]
        t = np.moveaxis(t, gate_axes, range(4))
        return t.reshape(16, -1)  # (gate square, rest x k)

    def local_unitary(self, thetas):
        if len(thetas) != len(self.template):
            raise ValueError(f"need {len(self.template)} phases, got {len(thetas)}")
        u = self._props[0](thetas[0])
        for prop, th in zip(self._props[1:], thetas[1:]):
            u = u @ prop(th)
        return u

    def logical_block(self, thetas):
        c = self._basis
        k = 4
        moved = (self.local_unitary(thetas) @ c).reshape(-1, k)
        return c.reshape(-1, k).conj().T @ moved

    def terms(self, thetas):
        """(f_m, L4) without touching the evaluation counter."""
        block = self.logical_block(np.asarray(thetas, dtype=float))
        return invariants.fm_objective(block), encodings.leakage_from_block(block, 4)

    def __call__(self, thetas):
        self.evaluations += 1
        fm, leak = self.terms(thetas)
        return fm + self.leakage_weight * leak


def objective(thetas, template, layout=None, leakage_weight=10.0):
    """One-off evaluation of ``f_m + w * L4``."""
    return SequenceObjective(template, leakage_weight, layout)(np.asarray(thetas, dtype=float))


def _stream(seed, restart, generation, index):
    return np.random.default_rng([int(seed), int(restart), int(generation), int(index)])


def genetic_search(template, config=SearchConfig(), layout=None, restart=0,
                   initial_population=None):
    """Real-coded GA with tournament selection, uniform crossover and elitism.

    Child ``i`` of generation ``g`` draws from the stream
    ``(seed, restart, g, i)``, so the result is fixed by the seed.
    """
    f = SequenceObjective(template, config.leakage_weight, layout)
    dim = len(f.template)
    pop_size = config.population
    if initial_population is None:
        pop = np.array([_stream(config.seed, restart, 0, i).uniform(0.0, TWO_PI, dim)
                        for i in range(pop_size)])
    else:
        pop = np.mod(np.array(initial_population, dtype=float), TWO_PI)
        if pop.shape != (pop_size, dim):
            raise ValueError(f"initial population must have shape {(pop_size, dim)}")
    fit = np.array([f(x) for x in pop])
    history = [float(fit.min())]
    for gen in range(1, config.generations + 1):
        order = np.argsort(fit, kind="stable")
        pop, fit = pop[order], fit[order]
        children = [pop[i].copy() for i in range(config.elite_count)]
        for i in range(config.elite_count, pop_size):
            rng = _stream(config.seed, restart, gen, i)
            a = pop[min(rng.integers(0, pop_size, config.tournament_size))]
            b = pop[min(rng.integers(0, pop_size, config.tournament_size))]
            if rng.random() < config.crossover_prob:
                child = np.where(rng.random(dim) < 0.5, a, b)
            else:
                child = a.copy()
            mutate = rng.random(dim) < config.mutation_prob
            child = child + mutate * rng.normal(0.0, config.mutation_sigma, dim)
            children.append(np.mod(child, TWO_PI))
        pop = np.array(children)
        elite_fit = fit[:config.elite_count]
        fit = np.concatenate([elite_fit, [f(x) for x in pop[config.elite_count:]]])
        history.append(float(fit.min()))
    best = int(np.argmin(fit))
    fm, leak = f.terms(pop[best])
    return SearchResult(pop[best].copy(), fm, leak, float(fit[best]), f.evaluations,
                        True, restart, history)


def nelder_mead(func, x0, step=0.1, max_iter=20000, tol_x=1e-12, tol_f=1e-14,
                reflect=1.0, expand=2.0, contract=0.5, shrink=0.5):
    """Minimise ``func`` from ``x0``; returns (x, f, converged, history).

    Stops when every vertex is within ``tol_x`` (max-norm) of the best one or
    the spread of function values falls below ``tol_f``.
    """
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    simplex = np.vstack([x0] + [x0 + step * np.eye(dim)[i] for i in range(dim)])
    values = np.array([func(v) for v in simplex])
    history = []
    converged = False
    for _ in range(max_iter):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        history.append(float(values[0]))
        size = np.max(np.abs(simplex[1:] - simplex[0]))
        if size < tol_x or values[-1] - values[0] < tol_f:
            converged = True
            break
        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + reflect * (centroid - simplex[-1])
        fr = func(xr)
        if fr < values[0]:
            xe = centroid + expand * (xr - centroid)
            fe = func(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + contract * (xr - centroid)
            else:
                xc = centroid + contract * (simplex[-1] - centroid)
            fc = func(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + shrink * (simplex[1:] - simplex[0])
                values[1:] = [func(v) for v in simplex[1:]]
    best = int(np.argmin(values))
    return simplex[best], float(values[best]), converged, history


def nelder_mead_refine(start, template, config=SearchConfig(), layout=None, restart=0):
    """Polish a start vector; the simplex is rebuilt while that still helps."""
    f = SequenceObjective(template, config.leakage_weight, layout)
    x = np.asarray(start, dtype=float)
    fx = f(x)
    history = [fx]
    converged = False
    step = config.nm_initial_step
    budget = config.nm_max_iter
    while budget > 0:
        x_new, f_new, converged, hist = nelder_mead(
            f, x, step=step, max_iter=budget, tol_x=config.nm_tol_x, tol_f=config.nm_tol_f)
        budget -= len(hist)
        history.extend(hist)
        improved = f_new < fx
        if improved:
            x, fx = x_new, f_new
        if not converged or not improved or fx == 0.0:
            break
        step = max(np.max(np.abs(x_new - x)), 10 * config.nm_tol_x, step * 1e-3)
    fm, leak = f.terms(x)
    return SearchResult(x, fm, leak, fx, f.evaluations, converged, restart,
                        list(np.minimum.accumulate(history)))


def _run_restart(args):
    template, config, layout, r = args
    ga = genetic_search(template, config, layout, restart=r)
    nm = nelder_mead_refine(ga.thetas, template, config, layout, restart=r)
    nm.evaluations += ga.evaluations
    nm.history = ga.history + nm.history
    return nm


def search(template, config=SearchConfig(), layout=None, workers=1):
    """GA followed by Nelder-Mead for each restart; best result first."""
    template = parse_template(template)
    jobs = [(template, config, layout, r) for r in range(config.restarts)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_run_restart, jobs))
    else:
        results = [_run_restart(j) for j in jobs]
    return sorted(results, key=lambda r: (r.objective, r.restart))


def quick_config(**overrides):
    """Defaults with selected fields replaced."""
    return replace(SearchConfig(), **overrides)
