import sys
import csv
import enum
import math
import logging
import argparse
import numpy as np
from titan.arith_entanglement import (
    ArithEntanglementException,
    AmplitudeBlocks,
    ComputationSettings,
    EntropyCalculator,
    EntropyMethod,
    Glueing,
    InstanceFactory,
    InstanceFile,
    InstanceValidator,
    InvalidArgumentException,
    InvariantViolationException,
    NumericException,
    PhaseKind,
    ResourceCapException,
    RunReport,
    StateBuilder,
    StateOperations
)
from titan.arith_entanglement.fp_linalg import ensure_prime


logger = logging.getLogger(__name__)


class ExitCode(enum.IntEnum):
    OK = 0
    USAGE = 2
    DISAGREEMENT = 3
    RESOURCE = 4


class ArgValidator:

    @classmethod
    def ensure_valid_prime(cls, p: int):
        ensure_prime(p)

    @classmethod
    def ensure_valid_half_dims(cls, half_dims, name: str):
        if not half_dims or any(m < 1 for m in half_dims):
            raise InvalidArgumentException(f"Invalid {name} `{half_dims}`: every half dimension must be >= 1")

    @classmethod
    def ensure_valid_count(cls, value: int, name: str):
        if value < 0:
            raise InvalidArgumentException(f"Invalid {name} `{value}`: must be nonnegative")

    @classmethod
    def ensure_valid_case(cls, case_id: int):
        if case_id not in InstanceFactory.CANONICAL_CASES:
            raise InvalidArgumentException(f"Invalid case `{case_id}`: must be one of {sorted(InstanceFactory.CANONICAL_CASES)}")


class EntanglementRunner:

    def __init__(self, settings: ComputationSettings):
        self._settings = settings

    def settings(self):
        return self._settings

    def emit(self, report: RunReport, as_json: bool, report_out=None):
        print(report.to_json() if as_json else report.format_text(), end='')
        if report_out:
            report.save(report_out)
        return ExitCode.OK if report.all_agree() else ExitCode.DISAGREEMENT

    def cmd_gen(self, args):
        ArgValidator.ensure_valid_prime(args.p)
        ArgValidator.ensure_valid_half_dims(args.half_dims_1, 'half-dims-1')
        ArgValidator.ensure_valid_half_dims(args.half_dims_2, 'half-dims-2')
        ArgValidator.ensure_valid_count(args.nu, 'nu')
        instance = InstanceFactory.generate_random(p=args.p,
                                                   side1_halfdims=args.half_dims_1,
                                                   side2_halfdims=args.half_dims_2,
                                                   nu=args.nu,
                                                   seed=args.seed,
                                                   phase_kind=PhaseKind(args.phase),
                                                   settings=self._settings)
        if args.label:
            instance = instance.with_phase(instance.phase(), label=args.label)
        InstanceValidator.validate(instance)
        InstanceFile.save(instance, args.out)
        print(f"Wrote {instance.label()} to {args.out}")
        return ExitCode.OK

    def cmd_canonical(self, args):
        ArgValidator.ensure_valid_case(args.case)
        ArgValidator.ensure_valid_prime(args.p)
        instance = InstanceFactory.canonical_case(args.case, args.p, degree=args.degree)
        InstanceValidator.validate(instance)
        InstanceFile.save(instance, args.out)
        print(f"Wrote {instance.label()} to {args.out}")
        return ExitCode.OK

    def _spectral_checks(self, report: RunReport, state, exact_k, p):
        settings = self._settings
        with report.timed('spectral'):
            spectrum = EntropyCalculator.schmidt_spectrum(state, settings)
            spectral = EntropyCalculator.von_neumann(spectrum)
        report.add_entropy(spectral)
        report.set_spectrum(spectrum)
        if exact_k is not None:
            report.add_agreement('spectral_vs_exact', abs(spectral.nats() - exact_k * math.log(p)) <= settings.agreement_tol())
            report.add_agreement('flat_spectrum', spectrum.rank() == p ** exact_k and spectrum.is_flat(settings.spectrum_tol()))
        return spectral

    def cmd_entropy(self, args):
        settings = self._settings
        instance = InstanceFile.load(getattr(args, 'in'))
        report = RunReport('entropy', instance.label())
        with report.timed('validate'):
            stats = InstanceValidator.validate(instance)
        report.set_stats(stats)
        methods = [EntropyMethod(args.method)] if args.method != 'all' else list(EntropyMethod)
        zero_phase = instance.phase().is_zero()
        if args.method == 'all' and not zero_phase:
            logger.warning("Nonzero phase: only the spectral route applies")
            methods = [EntropyMethod.SPECTRAL]
        exact_k = None
        if EntropyMethod.FORMULA in methods:
            with report.timed('formula'):
                formula = EntropyCalculator.entropy_formula(instance)
            report.add_entropy(formula)
            report.add_agreement('formula_vs_stats', formula.exact_k() == stats.entropy_exponent())
            exact_k = formula.exact_k()
        if EntropyMethod.RANK in methods:
            with report.timed('rank'):
                rank = EntropyCalculator.entropy_rank(instance, settings)
            report.add_entropy(rank)
            if exact_k is not None:
                report.add_agreement('formula_vs_rank', rank.exact_k() == exact_k)
            exact_k = rank.exact_k()
        if EntropyMethod.SPECTRAL in methods:
            with report.timed('build_state'):
                state = StateBuilder.build_state(instance, settings)
            self._spectral_checks(report, state, exact_k, instance.p())
            if args.method == 'all' and not zero_phase:
                side1, side2 = EntropyCalculator.side_entropies(state, settings)
                report.add_agreement('side_symmetry', abs(side1.nats() - side2.nats()) <= settings.spectrum_tol())
        return self.emit(report, args.json, args.report_out)

    def cmd_glue(self, args):
        settings = self._settings
        ArgValidator.ensure_valid_count(args.k, 'k')
        instance = InstanceFile.load(getattr(args, 'in'))
        report = RunReport('glue', instance.label())
        with report.timed('validate'):
            report.set_stats(InstanceValidator.validate(instance))
        with report.timed('round_trip'):
            result = Glueing.round_trip(instance, args.k, args.seed, settings)
        for name, value in result.to_dict().items():
            report.add_field(name, value)
        report.add_agreement('round_trip_exact', result.is_exact())
        formula = EntropyCalculator.entropy_formula(instance)
        report.add_entropy(formula)
        blocks = AmplitudeBlocks.from_state(result.contracted())
        report.add_agreement('contracted_rank', blocks.block_count() == instance.p() ** formula.exact_k())
        self._spectral_checks(report, result.contracted(), formula.exact_k(), instance.p())
        return self.emit(report, args.json)

    def cmd_spectrum(self, args):
        settings = self._settings
        instance = InstanceFile.load(getattr(args, 'in'))
        report = RunReport('spectrum', instance.label())
        report.set_stats(InstanceValidator.validate(instance))
        state = StateBuilder.build_state(instance, settings)
        spectrum = EntropyCalculator.schmidt_spectrum(state, settings)
        if args.phase_seed is not None:
            f1, f2 = StateOperations.random_local_phases(state, np.random.default_rng(args.phase_seed))
            perturbed = EntropyCalculator.schmidt_spectrum(StateOperations.apply_local_phases(state, f1, f2), settings)
            report.add_agreement('local_phase_invariance', spectrum.is_close(perturbed, settings.spectrum_tol()))
            spectrum = perturbed
        report.set_spectrum(spectrum)
        report.add_entropy(EntropyCalculator.von_neumann(spectrum))
        if instance.phase().is_zero():
            report.add_field('flat', spectrum.is_flat(settings.spectrum_tol()))
        report.add_field('eigenvalues', [float(v) for v in spectrum.eigenvalues()])
        if args.csv:
            with open(args.csv, 'w', newline='') as f:
                writer = csv.writer(f)
                writer.writerow(['index', 'eigenvalue'])
                writer.writerows(spectrum.csv_rows())
        if args.json:
            return self.emit(report, True)
        if not args.csv:
            writer = csv.writer(sys.stdout, lineterminator='\n')
            writer.writerow(['index', 'eigenvalue'])
            writer.writerows(spectrum.csv_rows())
        return ExitCode.OK if report.all_agree() else ExitCode.DISAGREEMENT


def add_settings_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("-v", "--verbose", action='store_true', default=False, help="Log debug output")
    parser.add_argument("--enumeration-digits", type=int, default=None, help="Largest subspace dimension to enumerate")
    parser.add_argument("--max-global-vectors", type=int, default=None, help="Cap on p^d for state construction")
    parser.add_argument("--max-dense-dim", type=int, default=None, help="Cap on the dense side of spectral computations")
    parser.add_argument("--eigen-threshold", type=float, default=None, help="Eigenvalues at or below this count as zero")
    parser.add_argument("--agreement-tol", type=float, default=None, help="Tolerance for cross-route entropy agreement")
    parser.add_argument("--spectrum-tol", type=float, default=None, help="Tolerance for spectrum normalization and comparisons")
    parser.add_argument("--workers", type=int, default=None, help="Threads used to enumerate global classes")


def create_parser():
    common = argparse.ArgumentParser(add_help=False)
    add_settings_arguments(common)
    parser = argparse.ArgumentParser(description="Entanglement entropy of arithmetic Chern-Simons states over F_p")
    subparsers = parser.add_subparsers(dest='command', required=True)

    gen = subparsers.add_parser('gen', parents=[common], help="Generate a random instance")
    gen.add_argument("--p", type=int, required=True, help="Prime modulus")
    gen.add_argument("--half-dims-1", type=int, nargs='+', required=True, help="Half dimensions of the side-1 factors")
    gen.add_argument("--half-dims-2", type=int, nargs='+', required=True, help="Half dimensions of the side-2 factors")
    gen.add_argument("--nu", type=int, default=0, help="Kernel dimension of the localization")
    gen.add_argument("--seed", type=int, required=True, help="Random seed")
    gen.add_argument("--phase", choices=[k.value for k in PhaseKind], default='zero', help="Kind of random phase")
    gen.add_argument("--label", type=str, default=None, help="Instance label")
    gen.add_argument("--out", type=str, required=True, help="Instance file to write")

    canonical = subparsers.add_parser('canonical', parents=[common], help="Write one of the five canonical instances")
    canonical.add_argument("--case", type=int, required=True, help="Case id 1..5")
    canonical.add_argument("--p", type=int, required=True, help="Prime modulus")
    canonical.add_argument("--degree", type=int, default=2, help="Even field degree >= 2")
    canonical.add_argument("--out", type=str, required=True, help="Instance file to write")

    entropy = subparsers.add_parser('entropy', parents=[common], help="Compute the entanglement entropy")
    entropy.add_argument("--in", type=str, required=True, help="Instance file")
    entropy.add_argument("--method", choices=[m.value for m in EntropyMethod] + ['all'], default='all')
    entropy.add_argument("--json", action='store_true', default=False, help="Print the report as JSON")
    entropy.add_argument("--report-out", type=str, default=None, help="Also write the report (with timings) here")

    glue = subparsers.add_parser('glue', parents=[common], help="Inflate by auxiliary places and contract back")
    glue.add_argument("--in", type=str, required=True, help="Instance file")
    glue.add_argument("--k", type=int, required=True, help="Number of auxiliary places")
    glue.add_argument("--seed", type=int, default=0, help="Random seed")
    glue.add_argument("--json", action='store_true', default=False, help="Print the report as JSON")

    spectrum = subparsers.add_parser('spectrum', parents=[common], help="Print the Schmidt spectrum")
    spectrum.add_argument("--in", type=str, required=True, help="Instance file")
    spectrum.add_argument("--phase-seed", type=int, default=None, help="Apply seeded random local phases first")
    spectrum.add_argument("--csv", type=str, default=None, help="Write the spectrum as CSV here")
    spectrum.add_argument("--json", action='store_true', default=False, help="Print the report as JSON")
    return parser


def main(argv=None):
    args = create_parser().parse_args(argv)

    # configure the logger
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    commands = {
        'gen': EntanglementRunner.cmd_gen,
        'canonical': EntanglementRunner.cmd_canonical,
        'entropy': EntanglementRunner.cmd_entropy,
        'glue': EntanglementRunner.cmd_glue,
        'spectrum': EntanglementRunner.cmd_spectrum,
    }
    try:
        settings = ComputationSettings.from_env().with_overrides(enumeration_digits=args.enumeration_digits,
                                                                 max_global_vectors=args.max_global_vectors,
                                                                 max_dense_dim=args.max_dense_dim,
                                                                 eigen_threshold=args.eigen_threshold,
                                                                 agreement_tol=args.agreement_tol,
                                                                 spectrum_tol=args.spectrum_tol,
                                                                 workers=args.workers)
        return int(commands[args.command](EntanglementRunner(settings), args))
    except ResourceCapException as e:
        print(f"Failed due to exception: {e}", file=sys.stderr)
        return int(ExitCode.RESOURCE)
    except (InvariantViolationException, NumericException) as e:
        print(f"Failed due to exception: {e}", file=sys.stderr)
        return int(ExitCode.DISAGREEMENT)
    except ArithEntanglementException as e:
        print(f"Failed due to exception: {e}", file=sys.stderr)
        return int(ExitCode.USAGE)


if __name__ == "__main__":
    sys.exit(main())
