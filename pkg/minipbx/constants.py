"""Constants for minipbx."""

# Workspace layout
MINIPBX_DIR = ".minipbx"
STATE_FILE = "state.yaml"
SETTINGS_FILE = "config.yaml"

# Run artifacts written by `pbxctl run --out DIR`
ALERT_LOG_FILE = "alerts.log"
MAIL_JOURNAL_FILE = "mail.mbox"
VOICEMAIL_JOURNAL_FILE = "voicemail.journal"
METRICS_FILE = "metrics.yaml"

# Service ports
SSH_PORT = 22
SMTP_PORT = 25
POP_PORT = 110
# SSMTP kept at the value the deployment documents (225), not the IANA 465.
SSMTP_PORT = 225
POP3S_PORT = 995
PPTP_PORT = 1723
MYSQL_PORT = 3306
SIP_PORT = 5060

# SIP
SIP_VERSION = "SIP/2.0"
SIP_REALM = "minipbx"
REGISTRATION_EXPIRY = 3600
# Unanswered challenges kept per registrar; the oldest is forgotten first
MAX_OUTSTANDING_NONCES = 4096

# Media: GSM 06.10 has static payload type 3, 160 samples per 20 ms frame
GSM_PAYLOAD_TYPE = 3
RTP_VERSION = 2
RTP_HEADER_SIZE = 12
SAMPLES_PER_FRAME = 160
FRAME_INTERVAL = 0.020
# RFC 4733 telephone-event, dynamic payload type as Asterisk offers it
TELEPHONE_EVENT_PAYLOAD_TYPE = 101
DTMF_CONTENT_TYPE = "application/dtmf"

# Dial plan
DEFAULT_STEP_BUDGET = 10_000
READ_TERMINATOR = "#"
DTMF_DIGITS = frozenset("0123456789*#")

# Sentinel
MAX_ALERT_LEVEL = 15
ACTIONABLE_LEVEL = 8

# Tunnel sealing: 4-octet length + 4-octet checksum
SEAL_HEADER_SIZE = 8
TUNNEL_KEY_SIZE = 16

# Audio prompt tokens
PROMPT_WELCOME = "welcome"
PROMPT_ENTER_ID = "enter-id"
PROMPT_ENTER_PASSWORD = "enter-password"
PROMPT_BAD_PASSWORD = "bad-password"
PROMPT_ATTENDANCE_IS = "attendance-is"
PROMPT_ANOTHER_STUDENT = "another-student"
PROMPT_GOODBYE = "goodbye"
PROMPT_SORRY = "sorry"
PROMPT_VM_PASSWORD = "vm-password"
PROMPT_VM_INCORRECT = "vm-incorrect"
PROMPT_VM_YOUHAVE = "vm-youhave"
PROMPT_VM_INTRO = "vm-intro"

# Daemon mode keeps only this many alerts, deliveries, finished calls and
# captured tunnel frames. Simulation runs keep everything for the artifacts.
DAEMON_HISTORY_LIMIT = 1000
