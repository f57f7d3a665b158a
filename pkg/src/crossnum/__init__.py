"""Exact cross numbers, zero-sum invariants and related transformations for finite abelian groups."""

from __future__ import annotations

from .certificates import make_certificate, verify_certificate
from .extremal import (StructureReport, StructureVerdict, classify_structure,
                       extremal_minimal_zero_sum, extremal_zero_sum_free,
                       verify_structure_conjecture)
from .groups import (GroupElement, GroupError, GroupSpec, GroupTooLarge, abelian_groups_of_order,
                     abelian_groups_up_to, parse_group)
from .invariants import (InvariantReport, K_star, big_cross_number, conjecture_verdict,
                         davenport, eta, girard_bruteforce_D, girard_bruteforce_eta,
                         girard_formula, is_two_small, is_wide, k_star, little_cross_number,
                         s_egz)
from .search import SearchLimitExceeded, SearchLimits, SearchOutcome, iter_zero_sum_free, search
from .sequences import Sequence, SequenceError, cross_number
from .sumsets import is_minimal_zero_sum, is_zero_sum_free, subsums
from .sweep import run_sweep
from .transforms import (HypothesisError, MergeLedger, floor_sum_bound1, floor_sum_bound2,
                         projection_merge_pq, projection_merge_pqr)

__version__ = "0.1.0"
