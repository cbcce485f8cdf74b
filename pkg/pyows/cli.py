# -*- coding: utf-8 -*-
"""
``pyows`` command line.

Exit codes: 0 when the command ran (and its verification, if any, passed),
1 when a verification failed, 2 on usage errors.
"""
import argparse
import logging
import os
import sys

from . import commands
from .config import FORMATS, load_config_file, resolve
from .errors import BudgetExceeded, DecodeError, UsageError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
COMMON_KEYS = ('command', 'config', 'verbose')


def add_common_arguments(parser):
    parser.add_argument('--config', help="JSON config file")
    parser.add_argument('--format', choices=FORMATS)
    parser.add_argument('--out', help="output file")
    parser.add_argument('--seed', type=int)
    parser.add_argument('--jobs', type=int, help="worker processes")
    parser.add_argument('-v', '--verbose', action='store_true')


def build_parser():
    parser = argparse.ArgumentParser(prog='pyows',
                                     description="One-way sequences: private PAC learning "
                                                 "and online learning experiments.")
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name in commands.COMMANDS:
        cls = commands.lookup(name)
        sub = subparsers.add_parser(name, help=cls.help, description=cls.__doc__)
        add_common_arguments(sub)
        cls.add_arguments(sub)
    return parser


def configure_logging(verbose):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        stream=sys.stderr, format=LOG_FORMAT)


def write_output(text, path, stdout):
    if path is None:
        stdout.write(text)
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as fp:
        fp.write(text)
    logger.info("report written to %s", path)


def run_command(argv, stdout=None, stderr=None):
    """Parses ``argv``, runs the subcommand and returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    configure_logging(args.verbose)

    cls = commands.lookup(args.command)
    flags = {key: value for key, value in vars(args).items() if key not in COMMON_KEYS}
    try:
        file_values = load_config_file(args.config) if args.config else {}
        config = resolve(args.command, flags, file_values, cls.defaults, commands.COMMANDS)
        command = cls(config)
        report = command.run()
        write_output(report.render(config.format), command.report_path(), stdout)
    except (UsageError, DecodeError, BudgetExceeded) as e:
        stderr.write("pyows %s: %s\n" % (args.command, e))
        return EXIT_USAGE

    if cls.verifies and not report.passed:
        logger.warning("%s: verification failed", args.command)
        return EXIT_FAILED
    return EXIT_OK


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == '__main__':
    main()
