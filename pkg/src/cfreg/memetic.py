"""Memetic training of continued fraction models.

A ternary tree of agents, each holding a pocket (best seen) and a current
solution, evolves for a fixed number of generations.  Every generation an
agent recombines its pocket with its parent's pocket, mutates, then runs a
short Nelder-Mead refinement on its active coefficients; the pocket and
current swap whenever the current becomes the better of the two.  Fitness
is training MSE scaled by a parsimony factor that grows with the fraction
of active features, so sparser models win ties.  When the best pocket MSE
across the tree stops improving for a few generations, the root's current
solution is re-randomized to re-inject diversity.

Feature values are used as-is; there is no internal normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import augment, mse_terms
from .model import ContinuedFractionModel, extend_depth, model_from_weights, weights
from .simplex import SimplexConfig, minimize

__all__ = ["MAConfig", "Agent", "fitness", "evolve", "evolve_population"]


@dataclass(frozen=True)
class MAConfig:
    generations: int = 200
    mutation_rate: float = 0.10
    delta: float = 0.10
    root_stagnation_reset: int = 5
    tree_depth: int = 3
    rng_seed: int = 0
    simplex: SimplexConfig = SimplexConfig()

    def __post_init__(self):
        if self.generations < 1:
            raise ValueError("generations must be at least 1")
        if not 0 <= self.mutation_rate <= 1:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.root_stagnation_reset < 1:
            raise ValueError("root_stagnation_reset must be at least 1")
        if self.tree_depth < 1:
            raise ValueError("tree_depth must be at least 1")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")

    @property
    def n_agents(self) -> int:
        return (3 ** self.tree_depth - 1) // 2


@dataclass
class Agent:
    """Pocket / current pair; the pocket is always the better of the two."""

    pocket: ContinuedFractionModel
    pocket_fitness: float
    current: ContinuedFractionModel
    current_fitness: float

    def promote(self):
        if self.current_fitness < self.pocket_fitness:
            self.pocket, self.current = self.current, self.pocket
            self.pocket_fitness, self.current_fitness = self.current_fitness, self.pocket_fitness


def _parsimony(mask, delta: float) -> float:
    return 1.0 + delta * float(mask.mean())


def fitness(model: ContinuedFractionModel, data, delta: float) -> float:
    """Training MSE scaled by the parsimony factor 1 + delta * active_fraction."""
    X = np.ascontiguousarray(data.X, dtype=np.float64)
    y = np.ascontiguousarray(data.y, dtype=np.float64)
    W, mask = weights(model)
    return float(mse_terms(W, augment(X), y)) * _parsimony(mask, delta)


def _random_model(p, depth, names, ymean, rng) -> ContinuedFractionModel:
    """Random start: a few active features, N(0,1) weights, g_0 centered on y."""
    mask = np.zeros(p, dtype=bool)
    mask[rng.choice(p, size=min(3, p), replace=False)] = True
    nterms = 2 * depth + 1
    W = np.zeros((nterms, p + 1))
    W[:, :p][:, mask] = rng.normal(size=(nterms, int(mask.sum())))
    W[:, p] = rng.normal(size=nterms)
    W[0, p] = ymean
    return model_from_weights(W, mask, names)


def _mutate(model, rng, rate):
    """Per term, with probability rate: nudge one coefficient or flip one mask bit."""
    W, mask = weights(model)
    p = model.n_features
    changed = False
    for t in range(W.shape[0]):
        if rng.random() >= rate:
            continue
        changed = True
        if rng.random() < 0.5:
            cols = np.flatnonzero(mask).tolist() + [p]
            j = cols[int(rng.integers(len(cols)))]
            c = W[t, j]
            W[t, j] = c + rng.normal() * max(abs(c), 0.1)
        else:
            j = int(rng.integers(p))
            if mask[j]:
                mask[j] = False
                W[:, j] = 0.0
            else:
                mask[j] = True
    if not changed:
        return model
    return model_from_weights(W, mask, model.feature_names)


def _recombine(parent_pocket, child_pocket, rng):
    """Term-wise mix of the two pockets; masks are OR-ed then thinned."""
    Wp, mp = weights(parent_pocket)
    Wc, mc = weights(child_pocket)
    pick = rng.random(Wp.shape[0]) < 0.5
    W = np.where(pick[:, None], Wp, Wc)
    mask = mp | mc
    thin = rng.random(mask.shape[0]) < 0.25
    mask[thin] = False
    p = mask.shape[0]
    W[:, :p][:, ~mask] = 0.0
    return model_from_weights(W, mask, parent_pocket.feature_names)


def _local_search(model, Xa, y, delta, cfg: SimplexConfig, seed):
    """Nelder-Mead over the active coefficients and constants of every term."""
    W, mask = weights(model)
    p = mask.shape[0]
    cols = np.concatenate([np.flatnonzero(mask), [p]]).astype(np.intp)
    nterms = W.shape[0]
    penalty = _parsimony(mask, delta)
    Wbuf = W.copy()

    def objective(v):
        Wbuf[:, cols] = v.reshape(nterms, cols.shape[0])
        return mse_terms(Wbuf, Xa, y) * penalty

    x0 = W[:, cols].ravel()
    if not math.isfinite(objective(x0)):
        return model, math.inf
    x, fv = minimize(objective, x0, cfg, rng_seed=seed)
    W[:, cols] = x.reshape(nterms, cols.shape[0])
    return model_from_weights(W, mask, model.feature_names), float(fv)


def _pocket_mse(agent, Xa, y):
    W, _ = weights(agent.pocket)
    return float(mse_terms(W, Xa, y))


def evolve(data, depth: int, init=None, config: MAConfig = MAConfig()) -> ContinuedFractionModel:
    """Train a depth-``depth`` model on a dataset; see evolve_population."""
    return evolve_population(data, depth, init, config)[0]


def evolve_population(data, depth: int, init=None, config: MAConfig = MAConfig()):
    """Run the memetic algorithm and return (best_model, agents).

    Parameters
    ----------
    data : Dataset to train on; must hold at least one sample.
    depth : target model depth.
    init : optional warm-start model of depth <= ``depth``; it is deepened
        with identity levels and seeds the whole population.
    config : search budget and operator rates.

    The returned model is the pocket with the lowest fitness across the
    tree; agents are returned for inspection.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    X = np.ascontiguousarray(data.X, dtype=np.float64)
    y = np.ascontiguousarray(data.y, dtype=np.float64)
    if X.shape[0] == 0:
        raise ValueError("cannot train on an empty dataset")
    names = tuple(data.feature_names)
    p = X.shape[1]
    Xa = augment(X)
    ymean = float(y.mean())
    rng = np.random.default_rng(config.rng_seed)
    ls_cfg = config.simplex

    if init is not None:
        if init.feature_names != names:
            raise ValueError("init model features do not match the dataset")
        if init.depth > depth:
            raise ValueError(f"init model depth {init.depth} exceeds target depth {depth}")
        seed_model = extend_depth(init, depth)
    else:
        seed_model = None

    def starter():
        if seed_model is not None:
            return seed_model
        return _random_model(p, depth, names, ymean, rng)

    def fit_of(m):
        W, mask = weights(m)
        return float(mse_terms(W, Xa, y)) * _parsimony(mask, config.delta)

    agents = []
    for _ in range(config.n_agents):
        m = starter()
        f = fit_of(m)
        agents.append(Agent(pocket=m, pocket_fitness=f, current=m, current_fitness=f))

    parent_of = [None] + [(i - 1) // 3 for i in range(1, config.n_agents)]
    best_mse = min(_pocket_mse(a, Xa, y) for a in agents)
    stall = 0

    for _ in range(config.generations):
        for i, agent in enumerate(agents):
            if parent_of[i] is not None:
                agent.current = _recombine(agents[parent_of[i]].pocket, agent.pocket, rng)
            agent.current = _mutate(agent.current, rng, config.mutation_rate)
            ls_seed = int(rng.integers(2 ** 63))
            agent.current, agent.current_fitness = _local_search(
                agent.current, Xa, y, config.delta, ls_cfg, ls_seed
            )
            agent.promote()

        gen_best = min(_pocket_mse(a, Xa, y) for a in agents)
        if gen_best < best_mse:
            best_mse = gen_best
            stall = 0
        else:
            stall += 1
        if stall >= config.root_stagnation_reset:
            fresh = _random_model(p, depth, names, ymean, rng)
            agents[0].current = fresh
            agents[0].current_fitness = fit_of(fresh)
            agents[0].promote()
            stall = 0

    best = min(range(len(agents)), key=lambda i: agents[i].pocket_fitness)
    return agents[best].pocket, agents


def warm_start_config(config: MAConfig, seed: int) -> MAConfig:
    """Copy of config with a different seed; used by the depth loop."""
    return replace(config, rng_seed=seed)
