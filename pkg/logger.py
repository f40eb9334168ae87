# logger.py
import logging
import os
import platform
import time
from collections import Counter
from functools import wraps
from logging.handlers import RotatingFileHandler
from typing import Optional

from config import APP_NAME, APP_VERSION, LOG_DIR, LOG_FILE

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# 库模块只取 logger，不创建日志文件；CLI 入口负责 setup_logger
logger = logging.getLogger(APP_NAME)


def _handler(handler: logging.Handler, level: int) -> logging.Handler:
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    return handler


def setup_logger(log_dir: str = LOG_DIR, log_file: str = LOG_FILE,
                 level: int = logging.INFO, debug: bool = False) -> logging.Logger:
    """
    轮转主日志 + error.log + stderr 控制台。
    stdout 留给 JSON/CSV 结果，所以控制台默认只显示 WARNING 以上。
    """
    os.makedirs(log_dir, exist_ok=True)
    if os.getenv("LWCLAB_DEBUG", "0") == "1":
        debug = True
    file_level = logging.DEBUG if debug else level

    for h in list(logger.handlers):
        logger.removeHandler(h)
        h.close()
    logger.setLevel(file_level)
    logger.propagate = False

    logger.addHandler(_handler(
        RotatingFileHandler(os.path.join(log_dir, log_file), maxBytes=5 * 1024 * 1024, backupCount=3),
        file_level))
    logger.addHandler(_handler(
        RotatingFileHandler(os.path.join(log_dir, "error.log"), maxBytes=2 * 1024 * 1024, backupCount=2),
        logging.ERROR))
    logger.addHandler(_handler(logging.StreamHandler(), logging.DEBUG if debug else logging.WARNING))

    logger.info(f"{APP_NAME} {APP_VERSION} (Python {platform.python_version()}, {platform.system()})")
    return logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """模块 logger 挂在应用 logger 下，共用 setup_logger 的 handler"""
    return logger.getChild(name) if name else logger


def log_exception(msg: str, exc: Exception):
    logger.error(f"{msg}: {exc}", exc_info=True)


class EventTally:
    """
    按事件类型计数：BoundViolation、CapacityFallback、DualityNotGuaranteed 等。
    仿真结束时把汇总写进结果，方便和 CSV 对照。
    """

    def __init__(self):
        self.errors: Counter = Counter()
        self.warnings: Counter = Counter()

    def error(self, kind: str, message: str, exception: Optional[Exception] = None):
        self.errors[kind] += 1
        logger.error(f"[{kind}] {message}", exc_info=exception is not None)

    def warning(self, kind: str, message: str):
        self.warnings[kind] += 1
        logger.warning(f"[{kind}] {message}")

    def summary(self) -> dict:
        return {
            "total_errors": sum(self.errors.values()),
            "total_warnings": sum(self.warnings.values()),
            "error_types": dict(self.errors),
            "warning_types": dict(self.warnings),
        }

    def clear(self):
        self.errors.clear()
        self.warnings.clear()


events = EventTally()


def track_error(error_type: str, message: str, exception: Optional[Exception] = None):
    events.error(error_type, message, exception)


def track_warning(warning_type: str, message: str):
    events.warning(warning_type, message)


def get_error_summary() -> dict:
    return events.summary()


def reset_error_tracking():
    events.clear()


def log_performance(operation: str, context: str = ""):
    """记录穷举类操作的耗时（DEBUG 级别）"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            outcome = "完成"
            try:
                return func(*args, **kwargs)
            except Exception as e:
                outcome = f"失败 ({type(e).__name__})"
                raise
            finally:
                elapsed_ms = (time.perf_counter() - start) * 1000
                logger.debug(f"性能 [{context}] {operation} {outcome}，耗时 {elapsed_ms:.1f} ms")
        return wrapper
    return decorator
