#!/usr/bin/env python3

import argparse
import json
import logging
import random
import sys
import traceback
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from branching import BranchingLaw, MonoidPairE
from char_families import FamilyCharacter, FamilyDecomposer, GeneratorCoefficients
from config_manager import KNOWN_SUITES, ConfigManager
from flag_geometry import FlagGeometry, FlagPoint, TubeSpec
from padic_arith import AnalyticCharacter
from padic_groups import GroupElement, GroupToolkit, SubgroupSpec
from report_generator import ReportGenerator
from slopes import HeckeElement, SlopeAnalyzer, SlopeDatum, slope_pairing
from verification_suites import VerificationSuites
from weights import Weight, WeylCombinatorics

GLOBAL_FLAGS = {
    'p': int, 'n': int, 'd': int, 'N': int, 'r': int, 't': int, 'm': int, 'k': int,
    'seed': int, 'budget': int, 'samples': int,
}

ACTIONS = {
    'weights': ('rho', 'classify', 'shuffle', 'star', 'serre', 'dictionary', 'alpha'),
    'slopes': ('pair', 'check', 'delta'),
    'flag': ('translate', 'cell', 'iota', 'tube', 'preimages', 'cartesian', 'contract'),
    'groups': ('elements', 'member', 'factor', 'xi', 'box', 'stab', 'index'),
    'branch': ('generators', 'decompose', 'sigma', 'eval', 'family', 'classical'),
    'family': ('decompose', 'pair', 'specialize'),
}


def load_json_argument(text: Optional[str], name: str) -> Any:
    """Inline JSON, or @path to read it from a file."""
    if text is None:
        raise ValueError(f"--{name} is required for this action")
    if text.startswith('@'):
        with open(text[1:], 'r', encoding='utf-8') as f:
            return json.load(f)
    return json.loads(text)


class ColemanVerifier:
    def __init__(self, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None,
                 env_file: str = ".env"):
        self.config = ConfigManager(config_file, env_file)
        if overrides:
            self.config.update_config(overrides)

        self.setup_logging()

        self.logger = logging.getLogger(__name__)
        self.reporter = ReportGenerator(self.config.get_reports_directory())
        self.logger.info("Verifier initialized")

    def setup_logging(self):
        log_config = self.config.get_logging_config()
        log_level = getattr(logging, log_config.get('level', 'WARNING').upper(), logging.WARNING)

        # stdout carries the JSON result
        handlers = [logging.StreamHandler(sys.stderr)]
        if 'file' in log_config:
            log_file = Path(log_config['file'])
            log_file.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(log_file))

        logging.basicConfig(
            level=log_level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers
        )

    @property
    def params(self) -> Dict[str, Any]:
        return self.config.get_full_config()

    def rng(self, label: str) -> random.Random:
        return random.Random(f"{self.config.get_seed()}:{label}")

    def dispatch(self, args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
        handler = getattr(self, f"cmd_{args.command}")
        return handler(args)

    # weights

    def cmd_weights(self, args) -> Tuple[Dict[str, Any], int]:
        c = self.params
        weight = Weight.from_json(load_json_argument(args.weight, 'lambda')) if args.weight else None
        n, d = (weight.n, weight.d) if weight else (c['n'], c['d'])
        weyl = WeylCombinatorics(n, d)

        if args.action == 'rho':
            return {'two_rho': weyl.two_rho.to_json(), 'two_rho_c': weyl.two_rho_c.to_json(),
                    'two_rho_nc': weyl.two_rho_nc.to_json()}, 0
        if args.action == 'alpha':
            return {'i': args.i, 'alpha': weyl.wedge_weight_alpha(args.i).to_json()}, 0
        if weight is None:
            raise ValueError("--lambda is required for this action")
        if args.action == 'classify':
            result = weight.classify().to_json()
            result['parity'] = weight.satisfies_parity()
            return result, 0
        if args.action == 'shuffle':
            return {'i': args.i, 'result': weyl.weyl_shuffle(weyl.kostant(args.i), weight).to_json()}, 0
        if args.action == 'star':
            return {'i': args.i, 'result': weyl.star_action(weyl.kostant(args.i), weight).to_json()}, 0
        if args.action == 'serre':
            return {'result': weyl.serre_dual(weight).to_json()}, 0
        return {'entries': [entry.to_json() for entry in weyl.parameter_dictionary(weight)]}, 0

    # slopes

    def cmd_slopes(self, args) -> Tuple[Dict[str, Any], int]:
        weight = Weight.from_json(load_json_argument(args.weight, 'lambda'))
        analyzer = SlopeAnalyzer(weight.n, weight.d)

        if args.action == 'pair':
            x = (HeckeElement.from_json(load_json_argument(args.x, 'x')) if args.x
                 else HeckeElement.standard(weight.n, weight.d))
            return {'x': x.to_json(), 'pairing': str(slope_pairing(weight, x))}, 0
        if args.action == 'check':
            datum = (SlopeDatum.from_json(load_json_argument(args.theta, 'theta')) if args.theta
                     else analyzer.borel_ordinary_datum(weight))
            return analyzer.is_small_slope(datum, weight).to_json(), 0
        return analyzer.borel_delta_table(weight).to_json(), 0

    # flag geometry

    def cmd_flag(self, args) -> Tuple[Dict[str, Any], int]:
        c = self.params

        if args.action == 'preimages':
            geometry = FlagGeometry(c['n'], 1, c['p'], c['N'])
            return self._suite_style('preimages', geometry.verify_cell_preimages(c['budget']))
        if args.action == 'cartesian':
            geometry = FlagGeometry(c['n'], c['d'], c['p'], c['N'])
            report = geometry.cartesian_sample(c['m'], c['k'], c['t'], c['samples'], self.rng('cartesian'),
                                               c['budget'])
            return self._suite_style('cartesian', report)

        x = FlagPoint.from_json(load_json_argument(args.x, 'x'))
        geometry = FlagGeometry(c['n'], c['d'], x.p, x.N)
        if args.action == 'translate':
            g = load_json_argument(args.g, 'g')
            g = GroupElement.from_json(g) if isinstance(g, dict) else g
            return {'result': geometry.star_translate(x, g).to_json()}, 0
        if args.action == 'cell':
            return {'cell': geometry.bruhat_cell(x)}, 0
        if args.action == 'iota':
            return {'iota': geometry.iota(x).to_json(), 'iota_hat': geometry.iota_hat(x).to_json(),
                    'cell': geometry.bruhat_cell(geometry.iota_hat(x))}, 0
        if args.action == 'tube':
            cell = c['n'] if args.cell is None else args.cell
            tube = TubeSpec(cell, c['m'], c['k'], args.side)
            return {'tube': {'cell': cell, 'm': c['m'], 'k': c['k'], 'side': args.side},
                    'member': geometry.tube_member(x, tube)}, 0
        return {'result': geometry.hecke_contract(x).to_json()}, 0

    # groups

    def _toolkit_for(self, data: Any) -> GroupToolkit:
        c = self.params
        if isinstance(data, dict):
            return GroupToolkit(int(data.get('n', c['n'])), int(data.get('d', c['d'])),
                                int(data.get('p', c['p'])), int(data.get('N', c['N'])))
        return GroupToolkit(c['n'], c['d'], c['p'], c['N'])

    @staticmethod
    def _matrix_rows(data: Any) -> List[List[int]]:
        return data['matrix'] if isinstance(data, dict) else data

    def cmd_groups(self, args) -> Tuple[Dict[str, Any], int]:
        c = self.params

        if args.action == 'elements':
            groups = self._toolkit_for(None)
            return {name: g.to_json() for name, g in groups.distinguished_elements().items()}, 0
        if args.action == 'stab':
            groups = self._toolkit_for(None)
            return groups.stabilizer_dimension(args.case), 0
        if args.action == 'index':
            groups = self._toolkit_for(None)
            result = groups.level_index(c['t'], c['budget'], args.method)
            return result, 0 if result['match'] else 1
        if args.action in ('factor', 'xi'):
            data = load_json_argument(args.matrix, 'matrix')
            groups = self._toolkit_for(data)
            rows = self._matrix_rows(data)
            if args.action == 'factor':
                R, S = groups.iwahori_factor(tuple(tuple(int(v) % groups.q for v in row) for row in rows), c['r'])
            else:
                R, S = groups.xi_factor(rows, c['r'], args.shape, args.closed)
            return {'p': groups.p, 'N': groups.N, 'R': R, 'S': S}, 0

        data = load_json_argument(args.g, 'g')
        g = GroupElement.from_json(data)
        groups = self._toolkit_for(data)
        if args.action == 'member':
            spec = SubgroupSpec.parse(args.subgroup)
            return {'subgroup': str(spec), 'member': groups.subgroup_member(g, spec)}, 0
        return groups.box_decompose(g, c['r']).to_json(), 0

    # branching

    def cmd_branch(self, args) -> Tuple[Dict[str, Any], int]:
        c = self.params

        if args.action == 'classical':
            return {'a': args.a, 'j': args.j, 'multiplicity': BranchingLaw.classical_multiplicity(args.a, args.j)}, 0
        if args.action == 'generators':
            law = BranchingLaw(self._toolkit_for(None))
            return {'generators': [{'label': label, 'pair': gen.to_json()} for label, gen in law.generator_set()]}, 0
        if args.action == 'family':
            data = load_json_argument(args.g, 'g')
            law = BranchingLaw(self._toolkit_for(data))
            coeffs = {label: AnalyticCharacter.from_json(ch)
                      for label, ch in load_json_argument(args.coeffs, 'coeffs').items()}
            return {'value': law.eval_family_vector(coeffs, GroupElement.from_json(data), c['r']).to_json()}, 0

        x = MonoidPairE.from_json(load_json_argument(args.x, 'x'))
        if args.action == 'decompose':
            law = BranchingLaw(GroupToolkit(x.kappa.n, x.kappa.d, c['p'], c['N']))
            return law.decompose_pair(x).to_json(), 0

        data = load_json_argument(args.g, 'g')
        law = BranchingLaw(self._toolkit_for(data))
        g = GroupElement.from_json(data)
        if args.action == 'sigma':
            return {'value': law.sigma_character(x, g).to_json()}, 0
        value, decomposition = law.box_evaluation(x, g, c['r'])
        return {'value': value.to_json(), 'decomposition': decomposition.to_json()}, 0

    # families

    def cmd_family(self, args) -> Tuple[Dict[str, Any], int]:
        c = self.params

        if args.action == 'specialize':
            coeffs = GeneratorCoefficients.from_json(load_json_argument(args.coeffs, 'coeffs'))
            sample = next(iter(coeffs.values.values()), None)
            p, N = (sample.p, sample.N) if sample else (c['p'], c['N'])
            decomposer = FamilyDecomposer(c['n'], c['d'], p, N)
            kappa, j = decomposer.specialize_family(coeffs)
            return {'kappa': kappa.to_json(), 'j': list(j)}, 0

        character = FamilyCharacter.from_json(load_json_argument(args.character, 'character'))
        decomposer = FamilyDecomposer(character.n, character.d, character.c0.p, character.c0.N)
        if args.action == 'decompose':
            return decomposer.decompose_family(character).to_json(), 0
        return decomposer.decompose_family_pair(character).to_json(), 0

    # verification

    def _suite_style(self, suite: str, report: Dict[str, Any]) -> Tuple[Dict[str, Any], int]:
        c = self.config.suite_config()
        emitted = self.reporter.emit_report(suite, c.to_params(), report['checked'], report['failures'], c.seed)
        return emitted, 0 if self.reporter.passed(emitted) else 1

    def cmd_verify(self, args) -> Tuple[Dict[str, Any], int]:
        suite_config = self.config.suite_config()
        suites = VerificationSuites(suite_config, self.reporter)

        if args.suite is not None:
            report = suites.run(args.suite)
        elif 'all' in suite_config.suites:
            report = suites.run_all()
        elif len(suite_config.suites) == 1:
            report = suites.run(suite_config.suites[0])
        else:
            report = self.reporter.aggregate([suites.run(name) for name in suite_config.suites], suite_config.seed)

        if args.save_config:
            self.config.save_config(args.save_config)
        if args.summary:
            self.print_summary(report)
        return report, 0 if self.reporter.passed(report) else 1

    def save_reports(self, report: Dict[str, Any]) -> List[str]:
        report_paths = []
        try:
            for format_type in self.config.get_report_formats():
                report_paths.append(self.reporter.save_report(report, format_type))
        except Exception as e:
            self.logger.error(f"Error saving reports: {e}")
            self.logger.error(traceback.format_exc())
            raise
        return report_paths

    def print_summary(self, report: Dict[str, Any]):
        out = sys.stderr
        print("\n" + "=" * 60, file=out)
        print("🔬 VERIFICATION SUMMARY", file=out)
        print("=" * 60, file=out)
        print(f"🎲 Seed: {report.get('seed')}", file=out)
        print(f"🧮 Checks: {report['checked']}", file=out)
        for row in self.reporter.summary_frame(report).itertuples(index=False):
            status = "✅" if row.passed else "❌"
            print(f"  {status} {row.suite}: {row.checked} checks, {row.failures} failures ({row.elapsed_ms} ms)",
                  file=out)
        if report['failures']:
            print(f"\n⚠️  {len(report['failures'])} failing checks", file=out)
        else:
            print("\n✅ All checks passed", file=out)
        print("=" * 60, file=out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    for name, kind in GLOBAL_FLAGS.items():
        common.add_argument(f'--{name}', type=kind, default=argparse.SUPPRESS, help=f'Override config value {name}')
    common.add_argument('--config', default=argparse.SUPPRESS, help='JSON configuration file')
    common.add_argument('--report-dir', dest='report_dir', default=argparse.SUPPRESS,
                        help='Also save the result under this directory')
    common.add_argument('--log-level', dest='log_level', default=argparse.SUPPRESS, help='Logging level')

    parser = argparse.ArgumentParser(prog='coleman-verify', parents=[common], allow_abbrev=False,
                                     description='Exact p-adic verification of higher Coleman theory identities')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], allow_abbrev=False, help=help_text)
        sub.add_argument('action', choices=ACTIONS[name])
        return sub

    weights = command('weights', 'Weight lattice and Weyl combinatorics')
    weights.add_argument('--lambda', dest='weight', help='Weight JSON (inline or @file)')
    weights.add_argument('--i', type=int, default=0, help='Kostant length / wedge degree')

    slopes = command('slopes', 'Slope pairings and the small-slope criterion')
    slopes.add_argument('--lambda', dest='weight', help='Weight JSON (inline or @file)')
    slopes.add_argument('--x', help='Hecke element JSON')
    slopes.add_argument('--theta', help='Slope datum JSON')

    flag = command('flag', 'Flag coordinates, cells and tubes')
    flag.add_argument('--x', help='Flag point JSON')
    flag.add_argument('--g', help='Group element or matrix JSON')
    flag.add_argument('--cell', type=int, help='Bruhat cell of the tube (default n)')
    flag.add_argument('--side', choices=('G', 'H'), default='G')

    groups = command('groups', 'Matrix groups, factorizations and subgroup indices')
    groups.add_argument('--g', help='Group element JSON')
    groups.add_argument('--matrix', help='Matrix JSON, bare rows or {"p", "N", "matrix"}')
    groups.add_argument('--subgroup', default='IwahoriG(1)', help='Subgroup such as Msquare(1) or BorelLevi')
    groups.add_argument('--shape', choices=('square', 'rect'), default='square')
    groups.add_argument('--closed', action='store_true', help='Allow valuation r in xi factorization')
    groups.add_argument('--case', choices=('levi', 'full'), default='full')
    groups.add_argument('--method', choices=('auto', 'enumeration', 'congruence-rank'), default='auto')

    branch = command('branch', 'Classical and p-adic branching laws')
    branch.add_argument('--x', help='Monoid pair JSON {"kappa", "j"}')
    branch.add_argument('--g', help='Group element JSON')
    branch.add_argument('--coeffs', help='Coefficient characters keyed by generator label')
    branch.add_argument('--a', type=int, default=0)
    branch.add_argument('--j', type=int, default=0)

    family = command('family', 'Decomposition of characters of families')
    family.add_argument('--character', help='Family character JSON')
    family.add_argument('--coeffs', help='Generator coefficients JSON')

    verify = subparsers.add_parser('verify', parents=[common], allow_abbrev=False, help='Run verification suites')
    verify.add_argument('suite', nargs='?', choices=KNOWN_SUITES, default=None)
    verify.add_argument('--save-config', dest='save_config', help='Write the merged configuration here')
    verify.add_argument('--summary', action='store_true', help='Print a summary on stderr')

    return parser


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values = vars(args)
    overrides = {name: values[name] for name in GLOBAL_FLAGS if name in values}
    if 'report_dir' in values:
        overrides['reports'] = {'directory': values['report_dir']}
    if 'log_level' in values:
        overrides['logging'] = {'level': values['log_level'].upper()}
    return overrides


def run_command(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        verifier = ColemanVerifier(getattr(args, 'config', None), config_overrides(args))
        result, exit_code = verifier.dispatch(args)
        print(ReportGenerator.to_json(result))
        if 'report_dir' in vars(args) and args.command in ('verify', 'flag') and 'checked' in result:
            for path in verifier.save_reports(result):
                logging.getLogger(__name__).info(f"Report saved: {path}")
        return exit_code
    except (ValueError, RuntimeError, ArithmeticError, OSError) as e:
        print(json.dumps({'error': type(e).__name__, 'message': str(e)}, indent=2))
        return 1
    except Exception as e:
        logger = logging.getLogger(__name__)
        logger.error(f"Command failed: {e}")
        logger.error(traceback.format_exc())
        print(json.dumps({'error': type(e).__name__, 'message': str(e)}, indent=2))
        return 1


def main():
    try:
        sys.exit(run_command())
    except KeyboardInterrupt:
        print("\n❌ Verification interrupted by user", file=sys.stderr)
        sys.exit(1)


if __name__ == '__main__':
    main()
