import logging
import sys

import click
import typer

from flip.evaluation import study_cli
from flip.predict import predict_cli
from flip.simulate import simulate_cli
from flip.validate import validate_cli

logger = logging.getLogger(__name__)


app = typer.Typer(pretty_exceptions_enable=False)

app.command("simulate")(simulate_cli)
app.command("predict")(predict_cli)
app.command("study")(study_cli)
app.command("validate")(validate_cli)


def main():
    """Console entry point: usage errors exit 1, command failures keep their own code."""
    try:
        code = app(standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()
