"""Independent reference implementations used only by the test suite.

These deliberately avoid the algorithms used in the package (Brandes, power
iteration, the vectorized Monte Carlo step) so agreement is meaningful.
"""

from collections import deque
from fractions import Fraction
from itertools import product

import numpy as np


def brute_force_betweenness(g):
    """Betweenness by explicit all-pairs shortest-path counting.

    For every source s, a BFS yields distances and path counts sigma_s; the
    number of shortest s->t paths through i is sigma_s(i) * sigma_i(t) when
    dist(s,i) + dist(i,t) == dist(s,t). Ordered pairs; exact Fractions.
    """
    n = g.node_count
    dist = np.full((n, n), -1, dtype=np.int64)
    sigma = [[Fraction(0)] * n for _ in range(n)]
    for s in range(n):
        dist[s, s] = 0
        sigma[s][s] = Fraction(1)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.neighbors(v):
                w = int(w)
                if dist[s, w] < 0:
                    dist[s, w] = dist[s, v] + 1
                    queue.append(w)
                if dist[s, w] == dist[s, v] + 1:
                    sigma[s][w] += sigma[s][v]
    bc = [Fraction(0)] * n
    for i in range(n):
        for s in range(n):
            if s == i or dist[s, i] < 0:
                continue
            for t in range(n):
                if t == s or t == i or dist[s, t] < 0 or dist[i, t] < 0:
                    continue
                if dist[s, i] + dist[i, t] == dist[s, t]:
                    bc[i] += sigma[s][i] * sigma[i][t] / sigma[s][t]
    return bc


def dense_spectral_radius(matrix):
    """Largest eigenvalue magnitude from a full dense eigendecomposition."""
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(matrix, dtype=np.float64)))))


def random_graph(n, p, rng):
    """Erdos-Renyi edge list for oracle comparisons."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return edges


# --- exact two-node joint Markov chain -------------------------------------
#
# Node states are (disease, aware) with disease in {S, I, R}; UI only exists
# for silenced nodes, which the two-node oracle does not use.

_NODE_STATES = [("S", False), ("S", True), ("I", True), ("R", False), ("R", True)]


def _node_transition(state, n_aware_nbrs, n_infected_nbrs, params):
    """Distribution over next node states from the per-step probability tree."""
    disease, aware = state
    lam, delta, mu = params.lam, params.delta, params.mu
    beta_a, beta_u = params.beta_a, params.beta_u
    out = {}

    def add(st, p):
        if p:
            out[st] = out.get(st, 0.0) + p

    if disease == "S":
        stay_unaware = (1.0 - lam) ** n_aware_nbrs
        if aware:
            branches = [(True, 1.0 - delta), (False, delta)]
        else:
            branches = [(True, 1.0 - stay_unaware), (False, stay_unaware)]
        for aware_mid, p_aw in branches:
            beta = beta_a if aware_mid else beta_u
            p_escape = (1.0 - beta) ** n_infected_nbrs
            add(("S", aware_mid), p_aw * p_escape)
            add(("I", True), p_aw * (1.0 - p_escape))
    elif disease == "I":
        add(("I", True), 1.0 - mu)
        add(("R", True), mu * (1.0 - delta))
        add(("R", False), mu * delta)
    else:
        if aware:
            add(("R", False), delta)
            add(("R", True), 1.0 - delta)
        else:
            stay_unaware = (1.0 - lam) ** n_aware_nbrs
            add(("R", True), 1.0 - stay_unaware)
            add(("R", False), stay_unaware)
    return out


def two_node_chain_marginals(params, awareness_edge, contact_edge, initial, steps):
    """Evolve the exact 25-state joint chain of a 2-node multiplex.

    initial maps a joint state ((d0,a0),(d1,a1)) to its probability. Returns a
    list per step of (p_a, p_i, p_r) arrays of length 2.
    """
    dist = dict(initial)
    history = []
    for _ in range(steps + 1):
        p_a = np.zeros(2)
        p_i = np.zeros(2)
        p_r = np.zeros(2)
        for (s0, s1), prob in dist.items():
            for k, st in enumerate((s0, s1)):
                p_a[k] += prob * st[1]
                p_i[k] += prob * (st[0] == "I")
                p_r[k] += prob * (st[0] == "R")
        history.append((p_a, p_i, p_r))
        nxt = {}
        for (s0, s1), prob in dist.items():
            if prob == 0.0:
                continue
            n_aw0 = int(awareness_edge and s1[1])
            n_aw1 = int(awareness_edge and s0[1])
            n_in0 = int(contact_edge and s1[0] == "I")
            n_in1 = int(contact_edge and s0[0] == "I")
            t0 = _node_transition(s0, n_aw0, n_in0, params)
            t1 = _node_transition(s1, n_aw1, n_in1, params)
            for (u0, p0), (u1, p1) in product(t0.items(), t1.items()):
                key = (u0, u1)
                nxt[key] = nxt.get(key, 0.0) + prob * p0 * p1
        dist = nxt
    return history
