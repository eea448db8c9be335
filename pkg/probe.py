#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Probe Spectroscopy
Energy levels of a spin Hamiltonian from the x-expectation of a probe spin
coupled through H_T = Z_0 (H + C)
"""

import sys
import argparse
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Add lib to path
sys.path.insert(0, str(Path(__file__).parent))

from lib.artifacts import ArtifactFormatError, plot_spectrum_svg, read_peaks_json, read_spectrum_csv
from lib.config import DEFAULT_SEED, DEFAULT_SHOTS, OUTPUT_DIR
from lib.engines import ENGINES
from lib.model_catalog import ModelCatalog
from lib.model_loader import load_model
from lib.runner import RunConfig, describe_model, parse_expr, run_pipeline

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2
EXIT_MISMATCH = 3

# Options whose values may start with '-', e.g. --omega-min -8*pi
EXPRESSION_OPTIONS = ("--tau", "--omega-min", "--omega-max", "--omega-step")


def print_header():
    """Print run header"""
    print("\n" + "="*70)
    print(" " * 22 + "Probe Spin Spectroscopy")
    print(" " * 14 + "H_T = Z_0 (H + C),  A(t) = <X_0(t)>")
    print("="*70)


def fail(message, code):
    print(f"Error: {message}", file=sys.stderr)
    return code


def cmd_run(args):
    """Run the pipeline and write timeseries.csv, spectrum.csv, peaks.json, plot.svg."""
    try:
        config = RunConfig(
            model_path=args.model,
            engine=args.engine,
            tau=parse_expr(args.tau),
            n_max=args.nmax,
            shots=args.shots,
            seed=args.seed,
            omega_min=parse_expr(args.omega_min) if args.omega_min is not None else None,
            omega_max=parse_expr(args.omega_max) if args.omega_max is not None else None,
            omega_step=parse_expr(args.omega_step) if args.omega_step is not None else None,
            threshold=args.threshold,
            output_dir=args.out,
            mirror=args.mirror,
            extend_past_nyquist=args.extend_past_nyquist,
            oracle=args.oracle or args.strict,
            strict=args.strict,
            window=args.window,
            resolve_aliases=args.resolve_aliases,
        )
        config.validate()
    except ValueError as e:
        return fail(e, EXIT_INVALID)

    print_header()
    try:
        result = run_pipeline(config, verbose=args.verbose)
    except OSError as e:
        return fail(e, EXIT_IO)
    except ValueError as e:
        return fail(e, EXIT_INVALID)
    except RuntimeError as e:
        return fail(e, EXIT_IO)

    if result.exit_code == EXIT_MISMATCH:
        print("Error: recovered energies do not match the oracle (--strict)", file=sys.stderr)
    return result.exit_code


def cmd_validate(args):
    """Parse a model file and print its summary and Nyquist advice."""
    path = ModelCatalog().resolve(args.model)
    try:
        model = load_model(path)
        tau = parse_expr(args.tau) if args.tau is not None else None
    except OSError as e:
        return fail(e, EXIT_IO)
    except ValueError as e:
        return fail(e, EXIT_INVALID)

    print(f"Model: {path}" + (f" ({model.name})" if model.name else ""))
    lines, warnings = describe_model(model, tau=tau, engine=args.engine)
    for line in lines:
        print(f"  {line}")
    for message in warnings:
        print(f"[Warning] {message}")
    print("✓ Model is valid")
    return EXIT_OK


def cmd_plot(args):
    """Re-render plot.svg from spectrum.csv and peaks.json."""
    try:
        omegas, values = read_spectrum_csv(args.spectrum)
        peaks = read_peaks_json(args.peaks)["peaks"] if args.peaks else []
        plot_spectrum_svg(omegas, values, peaks, args.out, title=args.title)
    except ArtifactFormatError as e:
        return fail(e, EXIT_INVALID)
    except OSError as e:
        return fail(e, EXIT_IO)
    print(f"✓ Plot saved to: {args.out}")
    return EXIT_OK


def cmd_models(args):
    """List bundled models."""
    catalog = ModelCatalog(verbose=args.verbose)
    catalog.load()
    names = catalog.list_models()
    if not names:
        print(f"No models found in {catalog.models_path}")
        return EXIT_OK
    print("\nBundled models:\n")
    for name in names:
        entry = catalog.entries[name]
        print(f"  {name:<18} {entry['qubits']} qubit(s)  {entry['description']}")
    print()
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        description="Probe spin spectroscopy of spin Hamiltonians",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Spin in a magnetic field (peaks at +-2 and +-6)
  python probe.py run --model spin_in_field --tau "pi/12" --nmax 96

  # Spin chain on the extended grid, compared with brute-force levels
  python probe.py run --model spin_chain_c6 --extend-past-nyquist --oracle

  # Negative expressions: attach with '=' or pass them as the next argument
  python probe.py run --model spin_in_field --omega-min=-8*pi --omega-max 8*pi

  # Emulated device run with 4096 shots per time sample
  python probe.py run --model spin_in_field --engine shots --shots 4096 --seed 7

  # Check a model file and get Nyquist advice for a step
  python probe.py validate --model models/spin_chain.json --tau "pi/12"

  # Re-render a plot from saved artifacts
  python probe.py plot --spectrum output/spectrum.csv --peaks output/peaks.json
        """
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Show detailed progress"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run the spectroscopy pipeline")
    run.add_argument("--model", required=True, help="Model JSON path or bundled model name")
    run.add_argument("--engine", choices=ENGINES, default="exact", help="Expectation engine")
    run.add_argument("--tau", default="pi/12", help="Time step, e.g. 'pi/12'")
    run.add_argument("--nmax", type=int, default=96, help="Grid half-length N (t = -N tau..N tau)")
    run.add_argument("--shots", type=int, default=DEFAULT_SHOTS, help="Shots per time sample")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for shot emulation")
    run.add_argument("--omega-min", help="Lower end of the frequency grid, e.g. '-8*pi'")
    run.add_argument("--omega-max", help="Upper end of the frequency grid")
    run.add_argument("--omega-step", help="Frequency grid step")
    run.add_argument("--threshold", type=float, help="Peak height threshold (default from T and width)")
    run.add_argument("--window", choices=["hann"], help="Apodization window (default: none)")
    run.add_argument("--mirror", action="store_true", help="Evaluate n >= 0 only and mirror")
    run.add_argument("--extend-past-nyquist", action="store_true",
                     help="Extend the default grid past pi/tau to show alias images")
    run.add_argument("--no-resolve-aliases", dest="resolve_aliases", action="store_false",
                     help="Keep both members of each alias fold pair as levels")
    run.add_argument("--oracle", action="store_true", help="Compare with brute-force energies")
    run.add_argument("--strict", action="store_true", help="Exit 3 when the oracle comparison fails")
    run.add_argument("--out", default=OUTPUT_DIR, help="Output directory")
    run.set_defaults(handler=cmd_run)

    validate = sub.add_parser("validate", help="Validate a model file")
    validate.add_argument("--model", required=True, help="Model JSON path or bundled model name")
    validate.add_argument("--tau", help="Time step to check for aliasing")
    validate.add_argument("--engine", choices=ENGINES, help="Engine to check capabilities for")
    validate.set_defaults(handler=cmd_validate)

    plot = sub.add_parser("plot", help="Render plot.svg from saved artifacts")
    plot.add_argument("--spectrum", required=True, help="spectrum.csv written by 'run'")
    plot.add_argument("--peaks", help="peaks.json written by 'run'")
    plot.add_argument("--out", default=str(Path(OUTPUT_DIR) / "plot.svg"), help="Output SVG path")
    plot.add_argument("--title", help="Plot title")
    plot.set_defaults(handler=cmd_plot)

    models = sub.add_parser("models", help="List bundled models")
    models.set_defaults(handler=cmd_models)

    return parser


def attach_expression_values(argv):
    """Rewrite '--tau -pi/12' as '--tau=-pi/12' so argparse does not read the value as a flag."""
    argv = list(argv)
    attached = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in EXPRESSION_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            attached.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        attached.append(token)
        i += 1
    return attached


def main(argv=None):
    """Main entry point"""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(attach_expression_values(argv))
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID

    try:
        return args.handler(args)
    except KeyboardInterrupt:
        print("\n\nRun interrupted by user")
        return EXIT_OK
    except Exception as e:
        print(f"\n\nError: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
