import logging
import os
from fractions import Fraction

import pytest

from app.errors import ConfigError
from app.utils.env_loader import load_env_file
from app.utils.helpers import (
    chunked,
    format_float,
    format_number,
    parse_complex,
    polynomial_envelope,
    relative_error,
)
from app.utils.logger import RateLimiter, get_logger


def test_rate_limiter_drops_after_burst():
    limiter = RateLimiter(tokens_per_second=0.0, max_tokens=2)
    assert [limiter.allow_message() for _ in range(4)] == [True, True, False, False]
    assert limiter.pop_dropped_count() == 2
    assert limiter.pop_dropped_count() == 0


def test_throttled_logger_keeps_errors(caplog):
    log = get_logger("polymeinardus.test", logging.INFO, rate_limit_per_second=0.0, rate_limit_burst=1)
    log.logger.propagate = True
    with caplog.at_level(logging.INFO, logger="polymeinardus.test"):
        log.info("first", {"n": 1})
        log.info("second")
        log.error("failure")
    messages = [record.getMessage() for record in caplog.records]
    assert messages == ["first - {'n': 1}", "failure"]


def test_logger_level_switch():
    log = get_logger("polymeinardus.level", logging.WARNING)
    assert not log.is_enabled_for(logging.INFO)
    log.set_level(logging.INFO)
    assert log.is_enabled_for(logging.INFO)


def test_load_env_file(tmp_path, monkeypatch):
    env = tmp_path / ".env"
    env.write_text(
        "# local settings\n"
        "POLYMEINARDUS_K_MAX=12\n"
        "export POLYMEINARDUS_THREADS='3'\n"
        "UNRELATED=1\n"
        "PORT=9000\n"
        "garbage line\n"
    )
    monkeypatch.delenv("POLYMEINARDUS_K_MAX", raising=False)
    monkeypatch.delenv("POLYMEINARDUS_THREADS", raising=False)
    monkeypatch.delenv("UNRELATED", raising=False)
    monkeypatch.setenv("PORT", "8080")

    loaded = load_env_file(env)
    assert loaded == ["POLYMEINARDUS_K_MAX", "POLYMEINARDUS_THREADS"]
    assert os.environ["POLYMEINARDUS_THREADS"] == "3"
    assert os.environ["PORT"] == "8080"
    assert "UNRELATED" not in os.environ
    monkeypatch.delenv("POLYMEINARDUS_K_MAX")
    monkeypatch.delenv("POLYMEINARDUS_THREADS")


def test_load_env_file_missing(tmp_path):
    assert load_env_file(tmp_path / "absent.env") == []


def test_number_formatting():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_number(42) == "42"
    assert format_number(Fraction(6, 3)) == "2"
    assert format_number(Fraction(1, 3)) == "1/3"
    assert format_number(2.5) == "2.5"


@pytest.mark.parametrize(
    "text,value",
    [
        ("0.5", 0.5),
        ("-0.2", -0.2),
        ("0.2+0.4i", 0.2 + 0.4j),
        ("0.2 - 0.4j", 0.2 - 0.4j),
        ("i", 1j),
        ("-i", -1j),
        ("0.6i", 0.6j),
    ],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


def test_parse_complex_rejects():
    with pytest.raises(ConfigError):
        parse_complex("half")


def test_envelope_and_relative_error():
    assert polynomial_envelope((1, -2, 3), -0.5) == pytest.approx(1 + 1 + 0.75)
    assert relative_error(1.1, 1.0) == pytest.approx(0.1)
    assert relative_error(1e-3, 0.0, scale=1.0) == pytest.approx(1e-3)
    assert relative_error(0.5, 0.0) == 0.5


def test_chunked():
    parts = list(chunked(range(10), 3))
    assert [list(p) for p in parts] == [[0, 1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert len(list(chunked(range(2), 8))) == 2
