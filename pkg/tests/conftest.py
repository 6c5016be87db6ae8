import numpy as np
import pytest

import config
from app.services.catalan_complex import incoming_moves, outgoing_moves

PROPERTY_CASES = 200


@pytest.fixture
def rng():
    return np.random.default_rng(config.DEFAULT_SEED)


def random_walk(t, rng, steps):
    """Signed edge path of at most `steps` moves starting at t."""
    path = []
    for _ in range(steps):
        options = [(m, 1) for m in outgoing_moves(t)] + [(m, -1) for m in incoming_moves(t)]
        if not options:
            break
        m, sign = options[int(rng.integers(len(options)))]
        path.append((m, sign))
        t = m.target if sign > 0 else m.source
    return tuple(path)
