"""Chromatic finite-memory strategies on finite edge-colored arenas."""

from .arena import Arena, ArenaError, Edge, FormatError, Path, export_dot, out_edges, parse_arena, validate
from .chromatize import (NodePreorder, chromatize_preference, chromatize_winning, good_edges,
                         nominal_bounds, reachable_state_count)
from .lowerbound import (LowerBoundInstance, distinguishing_word, f_value, g_word, gen_arena, gen_s1,
                         verify_separation)
from .memory import (MemoryStructure, MissingMoveError, Strategy, StrategyError, consistent, is_chromatic,
                     memoryless, parse_strategy, run_memory, serialize_strategy, strategy_move)
from .playgraph import InclusionVerdict, PlayGraph, bounded_traces, build_play_graph, trace_inclusion
from .search import (SearchBudget, SearchBudgetExceeded, SearchResult, enumerate_chromatic_strategies,
                     min_chromatic_states, min_general_states)

__version__ = "0.1.0"
