"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: rogger.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: The program logger of the package. It writes progress and diagnostics to stderr so that artifacts written to stdout or files are never polluted.
# // AR
# +==== END bridgelab =================+
"""

import inspect
from threading import RLock
from datetime import datetime
from typing import Any, Optional, TextIO

try:
    from .constants import MODULE_NAME, LogToggle, RAW_STDERR, PROGRAM_LOG_ENV, PROGRAM_DEBUG_ENV
except ImportError:
    from constants import MODULE_NAME, LogToggle, RAW_STDERR, PROGRAM_LOG_ENV, PROGRAM_DEBUG_ENV


class Rogger:
    """
    Process wide logger. Every instantiation returns the same object so the
    toggles set by the command line apply to the whole package.
    """

    _class_lock: RLock = RLock()
    _function_lock: RLock = RLock()
    _instance: Optional["Rogger"] = None

    def __new__(cls) -> "Rogger":
        with cls._class_lock:
            if cls._instance is None:
                cls._instance = super().__new__(cls)
                cls._instance._initialised = False
        return cls._instance

    def __init__(self) -> None:
        if getattr(self, "_initialised", False):
            return
        self.toggles: LogToggle = self._create_log_toggle(
            PROGRAM_LOG_ENV,
            PROGRAM_DEBUG_ENV
        )
        self.program_name: str = f"{MODULE_NAME}"
        self.success: str = "SUCCESS"
        self.info: str = "INFO"
        self.warning: str = "WARNING"
        self.error: str = "ERROR"
        self.critical: str = "CRITICAL"
        self.debug: str = "DEBUG"
        self.metric: str = "METRIC"
        self._initialised = True

    def re_toggle(
        self,
        program_log: bool = False,
        program_debug_log: bool = False,
        suppress_program_warning_logs: bool = False,
        suppress_program_error_logs: bool = False
    ) -> None:
        """Re-create the toggle settings after the logger has been created.

        Keyword Arguments:
            program_log (bool): Whether info, success and metric lines are written. Default: False
            program_debug_log (bool): Whether debug lines are written. Default: False
            suppress_program_warning_logs (bool): Hide warnings when program_log is off. Default: False
            suppress_program_error_logs (bool): Hide errors when program_log is off. Default: False
        """
        new_toggle = self._create_log_toggle(
            program_log,
            program_debug_log,
            suppress_program_warning_logs,
            suppress_program_error_logs
        )
        with self._function_lock:
            self.toggles = new_toggle

    def _create_log_toggle(
        self,
        program_log: bool = False,
        program_debug_log: bool = False,
        suppress_program_warning_logs: bool = False,
        suppress_program_error_logs: bool = False
    ) -> LogToggle:
        """Define which log levels can be written.

        Returns:
            LogToggle: The dataclass to follow.
        """
        quiet = program_log is False
        return LogToggle(
            program_log=program_log,
            success=not quiet,
            info=not quiet,
            warning=not (quiet and suppress_program_warning_logs),
            error=not (quiet and suppress_program_error_logs),
            critical=not (quiet and suppress_program_error_logs),
            debug=program_debug_log
        )

    def _get_date(self) -> str:
        now = datetime.now()
        return f"{now.strftime('%Y-%m-%d %H:%M:%S')},{now.microsecond // 1000:03d}"

    def _caller(self, depth: int) -> "tuple[str, str]":
        """Find the class and function names of the frame that asked for the log.

        Arguments:
            depth (int): How many frames above this one the caller sits.

        Returns:
            tuple[str, str]: (class name, function name), "Unknown" when not resolvable.
        """
        class_name = "Unknown"
        function_name = "Unknown"
        try:
            frame = inspect.currentframe()
            for _ in range(depth):
                if frame is None:
                    break
                frame = frame.f_back
            if frame is None:
                return class_name, function_name
            function_name = frame.f_code.co_name
            locals_ = frame.f_locals
            if "self" in locals_:
                class_name = type(locals_["self"]).__name__
            elif "cls" in locals_ and isinstance(locals_["cls"], type):
                class_name = locals_["cls"].__name__
            else:
                class_name = frame.f_globals.get("__name__", "Unknown").rsplit(".", 1)[-1]
        # type: ignore[reportBroadException]  # pylint: disable=broad-exception-caught
        except Exception:
            pass
        return class_name, function_name

    def _log_if_possible(self, enabled: bool, log_type: str, message: str, function_name: Optional[str], class_name: Optional[str], stream: Optional[TextIO]) -> None:
        """Write a formatted line when the level is enabled, never raising.

        Arguments:
            enabled (bool): The toggle of the level.
            log_type (str): The level label.
            message (str): The message provided by the caller.
            function_name (Optional[str]): Explicit function name, looked up when None.
            class_name (Optional[str]): Explicit class name, looked up when None.
            stream (Optional[TextIO]): The stream to write to.
        """
        if enabled is False or stream is None:
            return
        if function_name is None or class_name is None:
            found_class, found_function = self._caller(3)
            class_name = class_name or found_class
            function_name = function_name or found_function
        final_msg = f"[{self._get_date()}] {self.program_name} {log_type} ({class_name}.{function_name}): {message}\n"
        with self._function_lock:
            try:
                stream.write(final_msg)
                stream.flush()
            except (AttributeError, OSError, ValueError):
                pass

    def log_success(self, message: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR) -> None:
        """Log a success message (if logging conditions are met)."""
        self._log_if_possible(self.toggles.success, self.success, message, function_name, class_name, stream)

    def log_info(self, message: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR) -> None:
        """Log an informational message, shown when info logging is on."""
        self._log_if_possible(self.toggles.info, self.info, message, function_name, class_name, stream)

    def log_warning(self, message: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR) -> None:
        """Shown even in quiet mode unless warnings are suppressed."""
        self._log_if_possible(self.toggles.warning, self.warning, message, function_name, class_name, stream)

    def log_error(self, message: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR) -> None:
        """Log an error message; errors are always shown unless explicitly turned off."""
        self._log_if_possible(self.toggles.error, self.error, message, function_name, class_name, stream)

    def log_critical(self, message: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR) -> None:
        """Log a critical message (if logging conditions are met)."""
        self._log_if_possible(self.toggles.critical, self.critical, message, function_name, class_name, stream)

    def log_debug(self, message: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR) -> None:
        """Log a debug message, shown only in debug or verbose mode."""
        self._log_if_possible(self.toggles.debug, self.debug, message, function_name, class_name, stream)

    def log_metrics(self, label: str, *, function_name: Optional[str] = None, class_name: Optional[str] = None, stream: Optional[TextIO] = RAW_STDERR, **values: Any) -> None:
        """Log a set of named values on a single line as key=value pairs.

        Arguments:
            label (str): What the values describe (for instance "idbm iteration").

        Keyword Arguments:
            stream (Optional[TextIO]): The stream to write to. Default: RAW_STDERR
            **values (Any): The values, floats are printed with 6 significant digits.
        """
        parts = [f"{key}={value:.6g}" if isinstance(value, float) else f"{key}={value}" for key, value in values.items()]
        self._log_if_possible(
            self.toggles.info,
            self.metric,
            f"{label} {' '.join(parts)}".strip(),
            function_name,
            class_name,
            stream
        )


RI: Rogger = Rogger()
