"""Custom exceptions for minipbx."""


class MiniPbxError(Exception):
    """Base exception for all minipbx errors."""

    exit_code = 1


class ConfigParseError(MiniPbxError):
    """Raised when a configuration file cannot be parsed."""

    exit_code = 2

    def __init__(self, file: str, line: int, message: str):
        """
        Initialize ConfigParseError.

        Args:
            file: Dialect or path of the offending file (e.g. "sip.conf")
            line: 1-based line number
            message: What is wrong with the line
        """
        super().__init__(f"{file}:{line}: {message}")
        self.file = file
        self.line = line
        self.message = message


class ConfigValidationError(MiniPbxError):
    """Raised when cross-file validation fails and startup must stop."""

    exit_code = 2

    def __init__(self, report):
        errors = [issue for issue in report.issues if issue.is_error]
        lines = [f"  {issue.location}: {issue.message}" for issue in errors]
        super().__init__(
            f"Configuration validation failed with {len(errors)} error(s):\n" + "\n".join(lines)
        )
        self.report = report


class InvalidSettingsError(MiniPbxError):
    """Raised when the engine settings file is malformed."""

    exit_code = 2


class StateNotFoundError(MiniPbxError):
    """Raised when no persisted admin state can be located."""

    exit_code = 1


class SipCodecError(MiniPbxError):
    """Raised when a SIP message cannot be encoded or decoded."""


class SipProtocolError(MiniPbxError):
    """Raised for an illegal call-session transition."""

    def __init__(self, state: str, event: str):
        super().__init__(f"Illegal call event '{event}' in state '{state}'")
        self.state = state
        self.event = event


class RtpCodecError(MiniPbxError):
    """Raised when an RTP frame cannot be decoded."""


class DialplanCompileError(MiniPbxError):
    """Raised when a dial plan document cannot be compiled."""

    exit_code = 2


class DialplanRuntimeError(MiniPbxError):
    """Raised when dial-plan execution hits an unresolvable target."""


class StoreUnavailableError(MiniPbxError):
    """Raised when the attendance store is not running."""


class AccessDeniedError(MiniPbxError):
    """Raised when a principal lacks the privilege for a store access."""

    def __init__(self, principal: str, privilege: str, obj: str):
        super().__init__(f"{principal} lacks {privilege} on {obj}")
        self.principal = principal
        self.privilege = privilege
        self.object = obj


class StudentNotFoundError(MiniPbxError):
    """Raised when a student id has no record."""


class MailboxNotFoundError(MiniPbxError):
    """Raised when a box@context reference does not resolve."""


class MailboxAuthError(MiniPbxError):
    """Raised when a voicemail password does not match."""


class StatementParseError(MiniPbxError):
    """Raised when a GRANT/REVOKE statement is malformed."""

    exit_code = 2


class TunnelAuthError(MiniPbxError):
    """Raised when tunnel credentials do not match chap-secrets."""


class PoolExhaustedError(MiniPbxError):
    """Raised when no pool address is free for a new tunnel."""


class TunnelClosedError(MiniPbxError):
    """Raised when sealing or opening on a closed tunnel session."""


class TunnelIntegrityError(MiniPbxError):
    """Raised when an opened frame fails its length/checksum check."""


class ScenarioParseError(MiniPbxError):
    """Raised when a scenario file is malformed."""

    exit_code = 2

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class ScenarioAssertionError(MiniPbxError):
    """Raised when a scenario assertion fails."""

    exit_code = 1

    def __init__(self, at: float, line: int, message: str):
        super().__init__(f"assertion failed at t={at:.3f} (line {line}): {message}")
        self.at = at
        self.line = line


class NotBlacklistedError(MiniPbxError):
    """Raised when unblocking a source that is not blacklisted."""


class UnknownRuleError(MiniPbxError):
    """Raised when deleting a filter rule that is not in the chain."""
