"""
Discrete Valuation Analyzer - Command Line Application
Computes values, elements of value 1, residue chains and the dimension of a
discrete valuation given by an explicit embedding into Delta[[t]].

Usage:
    python app.py value tests/data/example_a.json --expr "X2/X1"
    python app.py analyze tests/data/example_c.json --depth 6 --format json
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from src.models.errors import InputError, IterationLimitError, PrecisionError, ValuationError
from src.models.embedding import value, value_orders
from src.utils.document import load_trace, parse_document
from src.utils.report import PRECISION_EXHAUSTED, unit_certificate
from src.utils.transform import replay
from src.utils.valuation import analyze, order_function_check, unit_value_element
from src.ui.components import (
    render_analysis,
    render_json,
    render_order_check,
    render_residues,
    render_unit_element,
    render_value,
)
from src.ui.styles import apply_styles
from config.config import (
    COMMANDS,
    DEFAULT_DEPTH,
    DEFAULT_FORMAT,
    DEFAULT_ITERATIONS,
    DEFAULT_PRECISION,
    DEFAULT_SEED,
    EXIT_EXHAUSTED,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    LOG_FORMAT,
    LOG_LEVEL,
    ORDER_CHECK_DEGREE,
    ORDER_CHECK_TRIALS,
    OUTPUT_FORMATS,
)

logger = logging.getLogger(__name__)


def configure_logging(verbose: bool = False, debug: bool = False):
    """Configure logging on standard error; standard output carries results only."""
    level = logging.DEBUG if debug else logging.INFO if verbose else getattr(logging, LOG_LEVEL)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def parse_opt(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        command (str): One of value, unit-element, residues, analyze, check-order
        document (str): Path of the embedding document (JSON)
        --expr (str): Field expression for the value command
        --precision (int): Precision cap for every order search
        --depth (int): Residue-chain depth
        --iterations (int): Iteration cap of the value-1 construction
        --seed (int): Seed of the randomized order check
        --degree (int): Maximal total degree of random test polynomials
        --trials (int): Number of random test polynomials
        --transformed (bool): Check the embedding produced by the analysis
        --replay (str): Saved trace (or JSON report) to replay
        --format (str): text or json
        --verbose / --debug (bool): Log progress on standard error

    Returns:
        argparse.Namespace: Parsed command-line arguments
    """
    parser = argparse.ArgumentParser(description="Discrete valuation analysis of explicit embeddings")
    parser.add_argument("command", choices=COMMANDS, help="operation to run")
    parser.add_argument("document", type=str, help="embedding document (JSON)")
    parser.add_argument("--expr", type=str, default=None, help="field expression, e.g. 'X3 - {T2}*X1'")
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="precision cap")
    parser.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="residue-chain depth")
    parser.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS, help="value-1 iteration cap")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed of the order check")
    parser.add_argument("--degree", type=int, default=ORDER_CHECK_DEGREE, help="order-check degree")
    parser.add_argument("--trials", type=int, default=ORDER_CHECK_TRIALS, help="order-check trials")
    parser.add_argument("--transformed", action="store_true", help="check-order on the analyzed embedding")
    parser.add_argument("--replay", type=str, default=None, help="saved trace to replay")
    parser.add_argument("--format", type=str, choices=OUTPUT_FORMATS, default=DEFAULT_FORMAT)
    parser.add_argument("--verbose", action="store_true", help="log progress")
    parser.add_argument("--debug", action="store_true", help="log every step")
    return parser.parse_args(argv)


def _replay_output(emb, trace_path: str, output_format: str) -> str:
    trace = load_trace(Path(trace_path).read_bytes(), emb)
    final = replay(emb, trace)
    final_values = dict(zip(trace.target_variables, final.values()))
    if output_format == "json":
        return render_json({"replayed_steps": len(trace), "final_values": final_values})
    values = ", ".join(f"v({name}) = {v}" for name, v in final_values.items())
    return f"replayed {len(trace)} steps: {values}"


def _execute(command: str, document: str, expr: Optional[str], precision: int, depth: int,
             iterations: int, seed: int, degree: int, trials: int, transformed: bool,
             replay_path: Optional[str], output_format: str, progress: bool) -> Tuple[int, str]:
    emb = parse_document(Path(document).read_bytes(), cap=precision, depth=depth)
    as_json = output_format == "json"

    if replay_path is not None and command in ("unit-element", "analyze"):
        return EXIT_OK, _replay_output(emb, replay_path, output_format)

    if command == "value":
        if expr is None:
            raise InputError("the value command needs --expr")
        f = emb.parse(expr)
        v = value(emb, f)
        code = EXIT_EXHAUSTED if v.is_exhausted else EXIT_OK
        if as_json:
            return code, render_json({"expression": f.format(), "value": v.to_json()})
        return code, render_value(v)

    if command == "unit-element":
        final, trace, unit = unit_value_element(emb, iterations)
        if as_json:
            return EXIT_OK, render_json({
                "values": dict(zip(emb.variables, emb.values())),
                "trace": trace.to_list(),
                "unit_element": unit_certificate(unit, value_orders(emb, unit)),
                "final_values": dict(zip(trace.target_variables, final.values())),
            })
        return EXIT_OK, render_unit_element(emb, trace, unit, final)

    if command == "check-order":
        target = emb
        if transformed:
            report = analyze(emb, depth, iterations)
            target = report.final.renamed(report.trace.target_variables)
        check = order_function_check(target, degree, trials, seed, progress=progress)
        if as_json:
            return EXIT_OK, render_json(check.to_dict())
        return EXIT_OK, render_order_check(check)

    report = analyze(emb, depth, iterations)
    exhausted = any(chain.terminal == PRECISION_EXHAUSTED for chain in report.chains.values())
    code = EXIT_EXHAUSTED if exhausted else EXIT_OK
    if command == "residues":
        if as_json:
            data = report.to_dict()
            return code, render_json({key: data[key] for key in ("values", "chains", "generators")})
        return code, render_residues(report.ordered_chains())
    if as_json:
        return code, render_json(report.to_dict())
    return code, render_analysis(report)


def run(command: str, document: str, expr: Optional[str] = None, precision: int = DEFAULT_PRECISION,
        depth: int = DEFAULT_DEPTH, iterations: int = DEFAULT_ITERATIONS, seed: int = DEFAULT_SEED,
        degree: int = ORDER_CHECK_DEGREE, trials: int = ORDER_CHECK_TRIALS, transformed: bool = False,
        replay: Optional[str] = None, format: str = DEFAULT_FORMAT, verbose: bool = False,
        debug: bool = False) -> Tuple[int, str, str]:
    """
    Run one command.

    Returns:
        Tuple[int, str, str]: Exit code, standard output text and a one-line
        diagnostic for standard error (empty on success)
    """
    try:
        code, output = _execute(command, document, expr, precision, depth, iterations, seed,
                                degree, trials, transformed, replay, format, verbose or debug)
        return code, output, ""
    except (PrecisionError, IterationLimitError) as e:
        logger.error(f"{command} stopped: {e}")
        return EXIT_EXHAUSTED, "", f"error: {e}"
    except (InputError, ZeroDivisionError, OSError) as e:
        logger.error(f"{command} rejected its input: {e}")
        return EXIT_INPUT_ERROR, "", f"error: {e}"
    except ValuationError as e:
        logger.error(f"{command} failed: {e}")
        return EXIT_EXHAUSTED, "", f"error: {e}"


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point."""
    opt = parse_opt(argv)
    configure_logging(opt.verbose, opt.debug)
    apply_styles(sys.stdout, enabled=None if opt.format == "text" else False)
    code, output, error = run(**vars(opt))
    if output:
        print(output)
    if error:
        print(error, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
