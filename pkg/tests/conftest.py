import pytest

from engine.apps import load_application
from engine.config import ArchitectureKind, Scenario


@pytest.fixture
def make_scenario():
    def make(kind="SDQC", d=13, n_logical=132, lam=1.0, lambda_se=None, **architecture):
        scenario = Scenario().with_architecture(ArchitectureKind.parse(kind), code_distance=d, n_logical=n_logical)
        if architecture:
            scenario = scenario.with_updates(architecture={**scenario.architecture.model_dump(), **architecture})
        return scenario.with_lambda(lam, lambda_se)
    return make


@pytest.fixture
def fermi():
    return load_application("fermi")


@pytest.fixture
def ecdlp():
    return load_application("ecdlp")
