import itertools
from typing import List, Optional

from loguru import logger

from polcomp.common.config import config
from polcomp.common.models import RngSeed
from polcomp.mdp_core import Cmp, TabularPolicy, deterministic_policy, occupancy, random_policy
from .models import CandidateSet


def candidate_set(c: Cmp, policies: List[TabularPolicy]) -> CandidateSet:
    """Набор кандидатов с точными занятостями на c"""
    return CandidateSet(policies=policies, occupancies=[occupancy(c, p) for p in policies])


def enumerate_deterministic(c: Cmp, limit: Optional[int] = None) -> CandidateSet:
    """Все |A|^|S| детерминированных политик в лексикографическом порядке"""
    limit = limit or config.compress_config["enumerate_limit"]
    total = c.num_actions ** c.num_states
    if total > limit:
        raise ValueError(f"{total} deterministic policies exceed the enumeration limit {limit}")
    policies = [
        deterministic_policy(c, actions)
        for actions in itertools.product(range(c.num_actions), repeat=c.num_states)
    ]
    logger.debug(f"Enumerated {total} deterministic policies")
    return candidate_set(c, policies)


def random_candidates(c: Cmp, count: int, seed: RngSeed, concentration: float = 1.0) -> CandidateSet:
    """count политик Dirichlet, i-я на потоке seed.stream + i"""
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    policies = [random_policy(c, seed.with_stream(seed.stream + i), concentration) for i in range(count)]
    return candidate_set(c, policies)
