"""The frozen reference values must be exactly what the symbolic generator produces."""

import importlib.util
from pathlib import Path

import pytest

pytest.importorskip("sympy")


def test_frozen_values_regenerate(frozen):
    path = Path(__file__).with_name("oracle") / "generate.py"
    found = importlib.util.spec_from_file_location("oracle_generate", path)
    module = importlib.util.module_from_spec(found)
    found.loader.exec_module(module)
    assert module.compute() == frozen
