"""Exact power indices, k-roundings and inverse power-index problems for small simple games."""

from .game_core import Game, classify, enumerate_games, from_weighted, is_weighted, parse_game
from .indices import index_id, normalize, power_index
from .inverse import InverseInstance, bisection_normalized, build_ilp, exhaustive_inverse
from .shortening import k_rounding, k_up_rounding, pk_rounding

__version__ = "0.1.0"
