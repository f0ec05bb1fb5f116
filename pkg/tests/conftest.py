import random

import pytest


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC01FC01F)
