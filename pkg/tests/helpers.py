"""Fixtures shared by the test modules."""

import os

from torres.configuration import Configuration

ACCEPTANCE_LINES: list = []

P2 = Configuration(((1,), (1,), (1,)))
P1P1 = Configuration(((1, 0), (1, 0), (0, 1), (0, 1)))
F1 = Configuration(((1, 0), (1, 0), (0, 1), (1, 1)))

CONFIGS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")


def config_path(name: str) -> str:
    return os.path.join(CONFIGS, name)
