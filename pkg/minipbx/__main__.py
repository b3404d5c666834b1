"""Entry point for python -m minipbx and the pbxctl script."""


def main() -> None:
    """Main entry point."""
    from minipbx.cli.app import app
    # Import commands to register them with the app
    from minipbx.cli import commands  # noqa: F401

    app()


if __name__ == "__main__":
    main()
