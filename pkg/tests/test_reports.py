import io
import json

import pytest
from pydantic import ValidationError

from fqpatterns.core.caps import enforce_cap
from fqpatterns.core.config import settings
from fqpatterns.core.errors import InvariantBreach, PatternError, TooLarge, ValidationFailure
from fqpatterns.models.run import RunConfig
from fqpatterns.models.stats import Histogram
from fqpatterns.services.reports import Table, config_header, parse_header, write_csv, write_json, write_lines
from fqpatterns.services.sampler import RNG_ID


def config(**params):
    return RunConfig(**{"command": "census", "family": "3ap", "q": 3, "n": 2, **params})


def test_header_round_trip():
    cfg = config(seed=5, caps={"ENUM_CAP": 10})
    header = config_header(cfg)
    assert header.startswith("# config: {")
    assert parse_header(header) == cfg
    assert json.loads(header[len("# config: ") :])["rng"] == RNG_ID
    with pytest.raises(ValueError):
        parse_header("family,q,n")


def test_write_csv():
    buf = io.StringIO()
    write_csv(Table(["k", "I_k", "m"], [{"k": 0, "I_k": 24, "m": None}]), config(), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == config_header(config())
    assert lines[1:] == ["k,I_k,m", "0,24,"]


def test_write_json_is_stable():
    hist = Histogram.from_values([1, 0, 0])
    a, b = io.StringIO(), io.StringIO()
    write_json({"hist": hist}, config(), a)
    write_json({"hist": hist}, config(), b)
    assert a.getvalue() == b.getvalue()
    doc = json.loads(a.getvalue())
    assert doc["result"]["hist"]["counts"] == {"0": 2, "1": 1}
    assert doc["config"]["q"] == 3


def test_write_lines():
    buf = io.StringIO()
    write_lines(["1/2"], config(command="exactprob", family=None, M=2, f=1), buf)
    assert buf.getvalue().splitlines()[1:] == ["1/2"]


@pytest.mark.parametrize(
    "params",
    [
        {"family": None},
        {"q": None},
        {"command": "sample", "family": None, "model": "bernoulli"},
        {"command": "exactprob", "M": 3},
        {"command": "poisson", "model": "uniform", "M": 3},
        {"scales": []},
        {"workers": 4},
    ],
)
def test_run_config_rejects(params):
    with pytest.raises(ValidationError):
        config(**params)


def test_extremal_table_config_needs_no_q():
    cfg = RunConfig(command="extremal", family="3ap", qn=[(3, 2), (3, 3)])
    assert cfg.q is None and cfg.qn == [(3, 2), (3, 3)]


def test_error_exit_codes():
    assert ValidationFailure.exit_code == 2
    assert TooLarge("q^n", 10, 5, "ENUM_CAP").exit_code == 3
    assert InvariantBreach.exit_code == 4
    assert issubclass(TooLarge, PatternError)


def test_enforce_cap(monkeypatch):
    monkeypatch.setattr(settings, "ENUM_CAP", 100)
    enforce_cap("q^n", 100, "ENUM_CAP")
    with pytest.raises(TooLarge) as err:
        enforce_cap("q^n", 101, "ENUM_CAP")
    assert "FQP_ENUM_CAP" in str(err.value)
