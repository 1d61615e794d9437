import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from chimera_dynamics.hamiltonian import build_hamiltonian


def weighted_automorphisms(net, mode):
    """All canonical-index permutations preserving the coupling matrix."""
    M = build_hamiltonian(net, mode).entries
    g = nx.Graph()
    g.add_nodes_from(range(net.n))
    for i in range(net.n):
        for j in range(i + 1, net.n):
            if M[i, j] != 0:
                g.add_edge(i, j, w=M[i, j])
    matcher = GraphMatcher(g, g, edge_match=lambda a, b: a["w"] == b["w"])
    return [dict(m) for m in matcher.isomorphisms_iter()]


def naive_geary(values, edges):
    """Direct double sum over an explicit weight matrix."""
    nodes = list(values)
    idx = {q: i for i, q in enumerate(nodes)}
    n = len(nodes)
    W = np.zeros((n, n))
    for a, b in edges:
        if a in idx and b in idx and a != b:
            W[idx[a], idx[b]] = W[idx[b], idx[a]] = 1.0
    x = np.array([values[q] for q in nodes])
    num = 0.0
    for i in range(n):
        for j in range(n):
            num += W[i, j] * (x[i] - x[j]) ** 2
    xbar = x.mean()
    den = 2 * sum((xi - xbar) ** 2 for xi in x) * W.sum()
    return (n - 1) * num / den


def trace_classes(trace, tol=1e-9):
    """Partition native labels into groups whose fidelity traces agree within ``tol``."""
    groups = []
    for i, label in enumerate(trace.labels):
        col = trace.fidelities[:, i]
        for g in groups:
            if np.max(np.abs(trace.column(g[0]) - col)) <= tol:
                g.append(label)
                break
        else:
            groups.append([label])
    return sorted(sorted(g) for g in groups)
