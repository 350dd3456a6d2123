"""Exact domination-chain parameters on unitary Cayley graphs and products of K[a,b]."""

from .errors import DomchainError
from .generators import ProductSpec, parse_graph_spec, product, unitary_cayley
from .graphcore import Graph, classify_set
from .numtheory import factorize, jacobsthal
from .solvers import Parameter, classify_xn, solve, solve_chain

__version__ = "0.1.0"

__all__ = [
    "DomchainError",
    "Graph",
    "Parameter",
    "ProductSpec",
    "classify_set",
    "classify_xn",
    "factorize",
    "jacobsthal",
    "parse_graph_spec",
    "product",
    "solve",
    "solve_chain",
    "unitary_cayley",
]
