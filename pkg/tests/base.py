import csv
import io
import json

import pytest

from cli.main import main
from sdof.dof import layered_allocation
from sdof.layersim import build_layer_config


class BaseLayerSimTest:
    @pytest.fixture
    def allocation(self):
        return layered_allocation(gamma=0.5, p=1, q=1, b=1.0, m_layers=2)

    @pytest.fixture
    def make_config(self):
        def make(gamma=0.5, p=1, q=1, b=1.0, layers=2, **kwargs):
            kwargs.setdefault("trials", 2000)
            return build_layer_config(layered_allocation(gamma, p, q, b, layers), **kwargs)

        return make


class BaseCliTest:
    @pytest.fixture
    def run(self, capsys):
        """run the CLI in-process; returns (exit code, stdout, stderr)."""

        def invoke(*argv: str):
            code = main([str(arg) for arg in argv])
            captured = capsys.readouterr()
            return code, captured.out, captured.err

        return invoke

    @staticmethod
    def read_csv(text: str) -> tuple[list[str], list[list[str]]]:
        rows = list(csv.reader(io.StringIO(text)))
        return rows[0], rows[1:]

    @staticmethod
    def read_json(text: str) -> dict:
        return json.loads(text)
