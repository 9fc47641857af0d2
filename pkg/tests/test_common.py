import argparse

import numpy as np
import pytest

from polcomp.common.config import Config
from polcomp.common.errors import (
    CoverError,
    InvalidModelError,
    OracleError,
    PolicyCompressionError,
    SingularSystemError,
    SpectralGapError,
    SupportViolationError,
)
from polcomp.common.models import RngSeed, TabularPolicy
from polcomp.common.utils import BaseService, setup_logging
from polcomp.common.utils.base_service import EXIT_AUDIT_FAILURE, EXIT_USAGE
from polcomp.common.utils.io import load_cmp, load_policy, save_cmp, save_policy


class _Failing(BaseService):
    def __init__(self):
        super().__init__("failing")

    def run(self, args: argparse.Namespace) -> int:
        raise InvalidModelError(["P[0][0] does not sum to 1"])


class _Numerical(BaseService):
    def __init__(self, error: Exception):
        super().__init__("numerical")
        self.error = error

    def run(self, args: argparse.Namespace) -> int:
        raise self.error


class _Auditing(BaseService):
    def __init__(self):
        super().__init__("auditing")

    def run(self, args: argparse.Namespace) -> int:
        return EXIT_AUDIT_FAILURE


def test_config_from_environment(monkeypatch):
    monkeypatch.setenv("POLCOMP_DEFAULT_SEED", "99")
    monkeypatch.setenv("POLCOMP_JOBS", "3")
    settings = Config()
    assert settings.default_seed == 99
    assert settings.jobs == 3
    assert settings.oracle_config["grid_max_n"] == 4


def test_rng_streams():
    a, b = RngSeed(seed=5, stream=1), RngSeed(seed=5, stream=1)
    assert np.array_equal(a.generator().random(4), b.generator().random(4))
    assert not np.array_equal(a.generator().random(4), a.with_stream(2).generator().random(4))
    assert not np.array_equal(a.child_generator(0).random(4), a.child_generator(1).random(4))
    with pytest.raises(ValueError):
        RngSeed(seed=-1)


def test_errors():
    error = SupportViolationError([3, 1])
    assert error.offending_indices == [3, 1]
    assert isinstance(error, ValueError)
    assert isinstance(CoverError(2, 0.5), PolicyCompressionError)
    assert "does not sum" in str(InvalidModelError(["P does not sum to 1"]))


def test_service_error_handling():
    service = _Failing()
    assert service.execute(argparse.Namespace()) == EXIT_USAGE
    assert service.stats == {"runs": 1, "failed_runs": 1}

    auditing = _Auditing()
    assert auditing.execute(argparse.Namespace()) == EXIT_AUDIT_FAILURE
    summary = auditing.create_summary("failed", {"violation_rate": 0.2}, flags=["x"])
    assert summary.service == "auditing"
    assert summary.stats["violation_rate"] == 0.2
    assert summary.flags == ["x"]


@pytest.mark.parametrize("error", [
    CoverError(0, 0.25),
    OracleError("no feasible start"),
    SpectralGapError("eigvals failed", 1e-3),
    SingularSystemError("pivot below floor"),
])
def test_numerical_failure_is_audit_failure(error):
    service = _Numerical(error)
    assert service.execute(argparse.Namespace()) == EXIT_AUDIT_FAILURE
    assert service.stats["failed_runs"] == 1


def test_setup_logging():
    bound = setup_logging("test", "debug")
    bound.debug("logging configured")


def test_file_round_trip(tmp_path, two_state_cmp):
    path = save_cmp(two_state_cmp, tmp_path / "mdp.json")
    loaded = load_cmp(path)
    assert np.array_equal(loaded.transition, two_state_cmp.transition)
    assert loaded.gamma == two_state_cmp.gamma
    assert loaded.r_max == 1.0

    policy = TabularPolicy(pi=[[0.25, 0.75]])
    assert np.array_equal(load_policy(save_policy(policy, tmp_path / "pi.json")).pi, policy.pi)


def test_data_files(data_dir):
    c = load_cmp(data_dir / "two_state.json")
    p = load_policy(data_dir / "two_state_policy.json")
    assert (c.num_states, c.num_actions) == (2, 1)
    assert p.pi.shape == (2, 1)
