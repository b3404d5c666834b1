"""CLI command registry.

Every pbxctl command and command group is registered with the Typer app
here.
"""

from minipbx.cli.app import app
from minipbx.cli.db_command import db_app
from minipbx.cli.fw_command import fw_app
from minipbx.cli.mail_command import mail_app
from minipbx.cli.plan_command import plan_app
from minipbx.cli.sentinel_command import sentinel_app
from minipbx.cli.vpn_command import vpn_app
from minipbx.handlers.daemon_handler import daemon_command
from minipbx.handlers.init_handler import init_command
from minipbx.handlers.run_handler import run_command

# Workspace and execution
app.command(name="init")(init_command)
app.command(name="run")(run_command)
app.command(name="daemon")(daemon_command)

# Admin groups
app.add_typer(fw_app, name="fw")
app.add_typer(sentinel_app, name="sentinel")
app.add_typer(vpn_app, name="vpn")
app.add_typer(db_app, name="db")
app.add_typer(mail_app, name="mail")
app.add_typer(plan_app, name="plan")
