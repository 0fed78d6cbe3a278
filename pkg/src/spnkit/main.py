import sys

from .cli.commands import run


def main():
    """Main entry point for the spnkit command line."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
