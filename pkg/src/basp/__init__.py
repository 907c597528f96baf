"""Fastest paths on road graphs with bounds on speed and on acceleration."""
from .errors import (BaspError, NoPathError, NotAPathError, SaturationViolation,
                     SearchTimeout)
from .graph import INF, ArcBounds, PathBounds, RoadGraph, concat_bounds, suffix
from .instances import (GeneratorParams, chain_example, corridor_instance, example_one,
                        random_instance, random_query)
from .oracles import brute_force, partition_instance, pseudo_poly_dp
from .profile import EXACT, Grid, PlanResult, SpeedProfile, plan_speed, travel_time
from .reach import ell_minus, ell_plus, is_saturating, k_upper_bound, reach_bounds
from .search import (Solution, adaptive_astar, astar_k, dijkstra_extended, heuristic_table,
                     incremental_cost, solve_one_basp)

__version__ = "0.1.0"
