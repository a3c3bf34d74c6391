import logging
import os
import sys
import time
from typing import Dict, Any
from threading import Lock


class RateLimiter:
    """Token bucket rate limiter for controlling log message frequency"""

    def __init__(self, tokens_per_second: float = 20.0, max_tokens: int = 200):
        """
        Initialize a token bucket rate limiter

        Args:
            tokens_per_second: Rate at which tokens are added to the bucket
            max_tokens: Maximum number of tokens the bucket can hold
        """
        self.tokens_per_second = tokens_per_second
        self.max_tokens = max_tokens
        self.tokens = float(max_tokens)
        self.last_refill_time = time.monotonic()
        self.lock = Lock()
        self.dropped_count = 0

    def _refill(self):
        now = time.monotonic()
        new_tokens = (now - self.last_refill_time) * self.tokens_per_second
        if new_tokens > 0:
            self.tokens = min(self.max_tokens, self.tokens + new_tokens)
            self.last_refill_time = now

    def allow_message(self) -> bool:
        """Take one token if available; count the message as dropped otherwise."""
        with self.lock:
            self._refill()
            if self.tokens >= 1:
                self.tokens -= 1
                return True
            self.dropped_count += 1
            return False

    def pop_dropped_count(self) -> int:
        """Return the number of dropped messages and reset the counter"""
        with self.lock:
            dropped, self.dropped_count = self.dropped_count, 0
            return dropped


class ThrottledLogger:
    """
    Logger wrapper used throughout the package.

    Messages take an optional metadata dict that is appended to the message
    text. Messages below ERROR go through a token bucket so that tight loops
    (a raster sweep logging per-pixel failures, say) cannot flood stderr.
    """

    def __init__(
        self,
        logger_name: str,
        log_level=logging.WARNING,
        rate_limit_enabled: bool = True,
        rate_limit_per_second: float = 20.0,
        rate_limit_burst: int = 200,
    ):
        self.logger = logging.getLogger(logger_name)
        self.logger.setLevel(log_level)
        self.logger.propagate = False

        if self.logger.handlers:
            self.logger.handlers.clear()

        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )

        # stdout carries command output, so the console handler writes to stderr
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        self.logger.addHandler(console_handler)

        log_dir = os.environ.get("POLYMEINARDUS_LOG_DIR")
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            file_handler = logging.FileHandler(f"{log_dir}/polymeinardus.log")
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        self.rate_limit_enabled = rate_limit_enabled
        if rate_limit_enabled:
            self.rate_limiter = RateLimiter(
                tokens_per_second=rate_limit_per_second, max_tokens=rate_limit_burst
            )
            self.last_throttle_report = time.monotonic()
            self.throttle_report_interval = 60.0

    def _check_rate_limit(self, level: int) -> bool:
        if not self.rate_limit_enabled or level >= logging.ERROR:
            return True

        allowed = self.rate_limiter.allow_message()

        now = time.monotonic()
        if (now - self.last_throttle_report) > self.throttle_report_interval:
            dropped = self.rate_limiter.pop_dropped_count()
            if dropped > 0:
                self.logger.warning(f"Throttling dropped {dropped} log messages")
            self.last_throttle_report = now

        return allowed

    def set_level(self, level: int | str):
        self.logger.setLevel(level)

    def is_enabled_for(self, level: int) -> bool:
        return self.logger.isEnabledFor(level)

    def log_event(
        self, level: int, message: str, metadata: Dict[str, Any] | None = None
    ):
        if not self.logger.isEnabledFor(level):
            return
        if not self._check_rate_limit(level):
            return

        if metadata:
            self.logger.log(level, f"{message} - {metadata}")
        else:
            self.logger.log(level, message)

    def info(self, message: str, metadata: Dict[str, Any] | None = None):
        self.log_event(logging.INFO, message, metadata)

    def warning(self, message: str, metadata: Dict[str, Any] | None = None):
        self.log_event(logging.WARNING, message, metadata)

    def error(self, message: str, metadata: Dict[str, Any] | None = None):
        self.log_event(logging.ERROR, message, metadata)

    def critical(self, message: str, metadata: Dict[str, Any] | None = None):
        self.log_event(logging.CRITICAL, message, metadata)

    def debug(self, message: str, metadata: Dict[str, Any] | None = None):
        self.log_event(logging.DEBUG, message, metadata)


def get_logger(
    name: str = "polymeinardus",
    log_level: int | str = logging.WARNING,
    rate_limit_enabled: bool = True,
    rate_limit_per_second: float = 20.0,
    rate_limit_burst: int = 200,
) -> ThrottledLogger:
    """
    Get a ThrottledLogger instance with configurable rate limiting

    Args:
        name: Logger name
        log_level: Minimum logging level
        rate_limit_enabled: Whether to throttle messages below ERROR
        rate_limit_per_second: Sustained message rate
        rate_limit_burst: Maximum burst of messages allowed

    Returns:
        A configured ThrottledLogger instance
    """
    return ThrottledLogger(
        name, log_level, rate_limit_enabled, rate_limit_per_second, rate_limit_burst
    )
