import pytest

from app.services.weights import (
    ArithmeticProgression,
    Constant,
    Periodic,
    Power,
    WeightSequence,
)


@pytest.fixture
def constant():
    return WeightSequence(Constant())


@pytest.fixture
def power2():
    return WeightSequence(Power(2.0))


@pytest.fixture
def odd_parts():
    return WeightSequence(ArithmeticProgression(1, 2))


@pytest.fixture
def ap13():
    return WeightSequence(ArithmeticProgression(1, 3))


@pytest.fixture
def periodic102():
    return WeightSequence(Periodic((1.0, 0.0, 2.0)))


@pytest.fixture
def builtin_families():
    return {
        "constant": WeightSequence(Constant()),
        "power2": WeightSequence(Power(2.0)),
        "ap12": WeightSequence(ArithmeticProgression(1, 2)),
        "ap13": WeightSequence(ArithmeticProgression(1, 3)),
    }
