"""Exact positivity tests and lattice series for monomer-dimer systems."""

from fractions import Fraction

try:
    from . import _dimerlab as _core  # wheel layout: extension inside the package
except ImportError:
    import _dimerlab as _core  # in-tree build: extension next to the build dir

__all__ = [
    "matching_counts",
    "graph_positivity_violations",
    "virial_positivity_violations",
    "enumerate_graph6",
    "sample_graph6",
    "free_energy",
    "entropy_coefficients",
    "virial_coefficients",
]


def matching_counts(graph6):
    """Exact i-matching counts m_0..m_n of a graph6-encoded graph."""
    return _core.matching_counts(graph6)


def graph_positivity_violations(graph6, k_min=0):
    """Violating (k, i) pairs of the graph-positivity test; empty means satisfied."""
    return [tuple(p) for p in _core.graph_positivity_violations(graph6, k_min)]


def virial_positivity_violations(graph6):
    """Violating (k, i) pairs of the virial-positivity test; empty means satisfied."""
    return [tuple(p) for p in _core.virial_positivity_violations(graph6)]


def enumerate_graph6(r, v, connected_only=True):
    """All r-regular bipartite graphs on v vertices, one graph6 string per class."""
    return _core.enumerate_graph6(r, v, connected_only)


def sample_graph6(r, v, count, seed=0):
    """Random r-regular bipartite graphs, deterministic per seed."""
    return _core.sample_graph6(r, v, count, seed)


def free_energy(lattice, order):
    """Free energy per site f(z) as a list of Fractions, constant term first."""
    return [Fraction(n, d) for n, d in _core.free_energy(lattice, order)]


def entropy_coefficients(lattice, order):
    """Entropy-series coefficients {k: a_k} for k = 2..order."""
    pairs = _core.entropy_coefficients(lattice, order)
    return {k: Fraction(n, d) for k, (n, d) in enumerate(pairs, start=2)}


def virial_coefficients(lattice, order):
    """Virial coefficients {k: B_k} for k = 2..order."""
    pairs = _core.virial_coefficients(lattice, order)
    return {k: Fraction(n, d) for k, (n, d) in enumerate(pairs, start=2)}
