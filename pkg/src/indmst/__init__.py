"""Optimal build orders for incremental minimum spanning tree and
minimum-weight matroid basis design."""

from .errors import (CapExceeded, IndMstError, InfeasibleInstance, InternalInvariantBroken,
                     InvalidParams, OverflowRisk, ParseError, PreconditionViolated)
from .graphic import Edge, Graph, GraphicMatroid, UnionFind, cycle_through, graphic_oracle, validate_instance
from .matroid import (MatroidOracle, PartitionMatroid, UniformMatroid, closure, find_circuit,
                      min_weight_basis, rank, strong_exchange_witness)
from .solver import (BuildPlan, ExchangePair, Instance, TraceSnapshot, basis_update,
                     efficient_scan, efficient_solve, enumerate_exchange_pairs, f_eval,
                     greedy_solve, objective_value, simplified_greedy_solve)

__version__ = "0.1.0"
