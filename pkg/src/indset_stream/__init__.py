"""One-pass streaming estimators for the Caro-Wei lower bound on independent set size."""

from .graph import (
    Edge,
    EdgeArrival,
    Graph,
    GraphStream,
    Mode,
    StreamValidationError,
    VertexArrival,
    materialize,
    parse_stream,
    read_stream,
)
from .oracles import alpha_exact, beta_exact, greedy_min_degree_is, turan_bound
from .edge_estimator import EdgeEstimatorConfig, estimate_eps, estimate_phi
from .vertex_estimator import estimate_vertex_arrival, n_d_oracle
from .stream_gen import GadgetSpec, gen_gadget, gen_gadget_stream, gen_gnm, to_stream

__version__ = "0.1.0"
