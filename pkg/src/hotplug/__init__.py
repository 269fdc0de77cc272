"""Hotplug coded caching: schemes, exact verification and memory-load bounds.

Some users may be offline at delivery time; only ``K'`` of the ``K`` users
that were served during placement send demands.  The package builds the
placement/delivery schemes for that setting over prime fields, checks
them symbol-for-symbol against every (active set, demand) scenario, and
computes exact memory-load curves together with converse bounds.
"""

from .bounds import (TradeoffCurve, TradeoffPoint, achievable_points, cutset_bound,
                     decentralized_load, gap_certificate, lower_convex_envelope, optimal_2user,
                     optimal_2x2, verify_optimality_cases, yma_converse)
from .combinat import binom, demand_rank, fill_demands, leaders, subsets_lex
from .field import PrimeField, block_mds_family, rank, solve, vandermonde_mds
from .model import DemandScenario, SystemParams, enumerate_scenarios, generate_library
from .schemes import make_scheme
from .verifier import exhaustive_report, generic_linear_decode, simulate

__version__ = "0.1.0"
