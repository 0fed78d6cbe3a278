"""
Command-line front end.
Every subcommand loads and validates its model before doing any work.

Exit codes: 0 success, 1 usage error, 2 model or validation error, 3 data error.
Diagnostics go to standard error.
"""
import argparse
import logging
import sys
from typing import List, Optional, TextIO

import numpy as np

from ..codegen.c_emitter import emit_source
from ..core.context import Context
from ..core.errors import ConfigurationError, DataError, ModelError, SpnError
from ..core.network import Network
from ..core.validation import require_valid, structure_stats, validate
from ..inference.evaluation import log_likelihood
from ..inference.mpe import mpe
from ..io.csv_data import read_csv, write_csv
from ..io.dot import to_dot
from ..io.model_files import load_model, save_model
from ..learning.optimizer import optimize_parameters
from ..learning.structure import learn_classifier, learn_structure
from ..sampling.sampler import sample
from ..systems.configuration_manager import ConfigurationManager
from ..systems.logging_setup import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MODEL = 2
EXIT_DATA = 3


class UsageError(Exception):
    """Invalid command-line invocation."""
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file")
    common.add_argument("--precision", type=int, help="decimals for printed numbers (default 6)")
    common.add_argument("--header", action="store_true", help="CSV input has a header line")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress (INFO)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _ArgumentParser(prog="spnkit", description="Sum-product network toolkit")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_ArgumentParser)
    commands.required = True

    def command(name: str, help_text: str, model: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, parents=[common])
        if model:
            sub.add_argument("model", help="model file (.spn or .json)")
        return sub

    command("validate", "check completeness, decomposability and parameters")

    sub = command("eval", "log-likelihood of each data row")
    sub.add_argument("--data", required=True, help="CSV file, or - for standard input")

    sub = command("mpe", "complete each data row with its most probable explanation")
    sub.add_argument("--data", required=True, help="CSV file, or - for standard input")

    sub = command("sample", "fill the missing cells of template rows by sampling")
    sub.add_argument("--data", required=True, help="template CSV, or - for standard input")
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("-n", type=int, default=1, help="samples per template row")

    sub = command("learn", "learn a network from complete data", model=False)
    sub.add_argument("--data", required=True, help="training CSV, or - for standard input")
    sub.add_argument("--context", required=True, help="JSON list of per-column {family, cardinality | range}")
    sub.add_argument("--classifier-label", type=int, help="learn a classifier over this label column")
    sub.add_argument("--min-instances", type=int)
    sub.add_argument("--threshold", type=float, help="column dependence threshold")
    sub.add_argument("--clusters", type=int, help="clusters per row split")
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--out", required=True, help="output model file (.spn or .json)")

    sub = command("optimize", "optimize parameters by gradient ascent")
    sub.add_argument("--data", required=True, help="training CSV, or - for standard input")
    sub.add_argument("--epochs", type=int)
    sub.add_argument("--lr", type=float, help="learning rate")
    sub.add_argument("--out", required=True, help="output model file (.spn or .json)")

    sub = command("compile", "emit C99 source of the log-likelihood evaluator")
    sub.add_argument("--out", required=True, help="output C file")
    sub.add_argument("--main", action="store_true", help="add a main reading CSV rows from standard input")
    sub.add_argument("--function", help="evaluator function name")

    sub = command("plot", "export a Graphviz DOT graph")
    sub.add_argument("--out", required=True, help="output DOT file")

    command("stats", "structure statistics as key=value lines")
    return parser


class CommandLineApplication:
    """Runs one parsed invocation against standard streams."""

    def __init__(self, args: argparse.Namespace, stdin: TextIO, stdout: TextIO, stderr: TextIO):
        self.args = args
        self.stdin = stdin
        self.stdout = stdout
        self.stderr = stderr
        self.config = ConfigurationManager.from_yaml(args.config) if args.config else ConfigurationManager()
        level = args.log_level or ("INFO" if args.verbose else None)
        self.config.override("output", precision=args.precision, log_level=level)
        configure_logging(self.config.output.log_level, stderr)

    @property
    def precision(self) -> int:
        return self.config.output.precision

    def load_model(self) -> Network:
        return load_model(self.args.model)

    def load_valid_model(self) -> Network:
        return require_valid(self.load_model())

    def read_data(self) -> np.ndarray:
        source = self.stdin if self.args.data == "-" else self.args.data
        return read_csv(source, has_header=self.args.header)

    def write_file(self, path: str, text: str):
        try:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            raise UsageError(f"cannot write {path}: {e}") from e

    def run(self) -> int:
        handler = getattr(self, "cmd_" + self.args.command)
        return handler()

    def cmd_validate(self) -> int:
        report = validate(self.load_model())
        self.stdout.write(f"{report}\n")
        report.raise_if_invalid()
        return EXIT_OK

    def cmd_eval(self) -> int:
        network = self.load_valid_model()
        for value in log_likelihood(network, self.read_data()):
            self.stdout.write(f"{value:.{self.precision}f}\n")
        return EXIT_OK

    def cmd_mpe(self) -> int:
        network = self.load_valid_model()
        write_csv(mpe(network, self.read_data()), self.stdout, self.precision)
        return EXIT_OK

    def cmd_sample(self) -> int:
        if self.args.n < 1:
            raise UsageError("sample: -n must be at least 1")
        network = self.load_valid_model()
        template = np.repeat(self.read_data(), self.args.n, axis=0)
        write_csv(sample(network, template, self.args.seed), self.stdout, self.precision)
        return EXIT_OK

    def cmd_learn(self) -> int:
        self.config.override("learn", seed=self.args.seed, min_instances=self.args.min_instances,
                             dependence_threshold=self.args.threshold, cluster_count=self.args.clusters)
        context = Context.load(self.args.context)
        data = self.read_data()
        if self.args.classifier_label is None:
            network = learn_structure(data, context, self.config.learn)
        else:
            network = learn_classifier(data, context, self.args.classifier_label, self.config.learn)
        save_model(network, self.args.out)
        return EXIT_OK

    def cmd_optimize(self) -> int:
        self.config.override("optimize", epochs=self.args.epochs, learning_rate=self.args.lr)
        network = self.load_valid_model()
        data = self.read_data()
        before = float(np.mean(log_likelihood(network, data)))
        optimized = optimize_parameters(network, data, self.config.optimize)
        after = float(np.mean(log_likelihood(optimized, data)))
        save_model(optimized, self.args.out)
        self.stdout.write(f"initial={before:.{self.precision}f}\nfinal={after:.{self.precision}f}\n")
        return EXIT_OK

    def cmd_compile(self) -> int:
        self.config.override("emit", function_name=self.args.function, emit_main=self.args.main or None)
        network = self.load_valid_model()
        self.write_file(self.args.out, emit_source(network, self.config.emit))
        return EXIT_OK

    def cmd_plot(self) -> int:
        network = self.load_valid_model()
        self.write_file(self.args.out, to_dot(network))
        return EXIT_OK

    def cmd_stats(self) -> int:
        network = self.load_valid_model()
        for key, value in structure_stats(network).as_dict().items():
            self.stdout.write(f"{key}={value}\n")
        return EXIT_OK


def run(argv: Optional[List[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None,
        stderr: Optional[TextIO] = None) -> int:
    """
    Run one command-line invocation.

    Returns:
        Exit code: 0 success, 1 usage error, 2 model or validation error, 3 data error
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return CommandLineApplication(args, stdin, stdout, stderr).run()
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except (UsageError, ConfigurationError) as e:
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except ModelError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_MODEL
    except DataError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_DATA
    except SpnError as e:
        stderr.write(f"error: {e}\n")
        return EXIT_MODEL
