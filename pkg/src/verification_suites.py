import logging
import random
import time
from typing import Any, Callable, Dict, List, Tuple

from branching import BranchingLaw
from char_families import FamilyCharacter, FamilyDecomposer
from config_manager import SuiteConfig
from flag_geometry import FlagGeometry
from padic_arith import AnalyticCharacter, PadicScalar
from padic_groups import (BoxDecomposition, GroupToolkit, Matrix_, SubgroupSpec, antidiagonal, identity,
                          mat_add, mat_mul, reduce_matrix)
from report_generator import ReportGenerator
from slopes import SlopeAnalyzer
from weights import Weight, WeylCombinatorics

Outcome = Tuple[int, List[Dict[str, Any]]]


def _is_upper(a: Matrix_) -> bool:
    return all(a[i][j] == 0 for i in range(len(a)) for j in range(i))


def _is_lower(a: Matrix_) -> bool:
    return all(a[i][j] == 0 for i in range(len(a)) for j in range(i + 1, len(a)))


def _congruent_to_one(a: Matrix_, modulus: int) -> bool:
    one = identity(len(a))
    return all((a[i][j] - one[i][j]) % modulus == 0 for i in range(len(a)) for j in range(len(a)))


class _Checker:
    """Collects check outcomes as {input, expected, got} failure records."""

    def __init__(self):
        self.checked = 0
        self.failures: List[Dict[str, Any]] = []

    def expect(self, label: str, expected: Any, got: Any, payload: Dict[str, Any]):
        self.checked += 1
        if expected != got:
            self.failures.append({'input': dict(payload, check=label), 'expected': expected, 'got': got})

    def absorb(self, report: Dict[str, Any]):
        self.checked += report['checked']
        self.failures.extend(report['failures'])

    def outcome(self) -> Outcome:
        return self.checked, self.failures


def random_dominant_weight(rng: random.Random, n: int, d: int, bound: int = 20) -> Weight:
    rows = [sorted((rng.randint(-bound, bound) for _ in range(2 * n)), reverse=True) for _ in range(d)]
    return Weight(n, d, rng.randint(-bound, bound), rows)


def random_trivial_dominant_weight(rng: random.Random, n: int, d: int, bound: int = 20) -> Weight:
    rows = []
    for _ in range(d):
        half = sorted((rng.randint(0, bound) for _ in range(n)), reverse=True)
        rows.append(half + [-v for v in reversed(half)])
    return Weight(n, d, 0, rows)


class VerificationSuites:
    def __init__(self, config: SuiteConfig, reporter: ReportGenerator):
        self.config = config
        self.reporter = reporter
        self.logger = logging.getLogger(__name__)
        self.suites: Dict[str, Callable[[random.Random], Outcome]] = {
            'preimages': self.suite_preimages,
            'factorization': self.suite_factorization,
            'orbits': self.suite_orbits,
            'index': self.suite_index,
            'branching': self.suite_branching,
            'classical': self.suite_classical,
            'dictionary': self.suite_dictionary,
            'slopes': self.suite_slopes,
            'families': self.suite_families,
            'characters': self.suite_characters,
            'cartesian': self.suite_cartesian,
        }

    def run(self, name: str) -> Dict[str, Any]:
        if name == 'all':
            return self.run_all()
        if name not in self.suites:
            raise ValueError(f"unknown suite {name!r}")
        rng = random.Random(f"{self.config.seed}:{name}")
        start = time.perf_counter()
        self.logger.info(f"Running suite {name}")
        checked, failures = self.suites[name](rng)
        elapsed_ms = int((time.perf_counter() - start) * 1000)
        self.logger.info(f"Suite {name}: {checked} checks, {len(failures)} failures in {elapsed_ms} ms")
        return self.reporter.emit_report(name, self.config.to_params(), checked, failures,
                                         self.config.seed, elapsed_ms)

    def run_all(self) -> Dict[str, Any]:
        return self.reporter.aggregate([self.run(name) for name in self.suites], self.config.seed)

    def _toolkit(self) -> GroupToolkit:
        c = self.config
        return GroupToolkit(c.n, c.d, c.p, c.N)

    # flag geometry

    def suite_preimages(self, rng: random.Random) -> Outcome:
        c = self.config
        report = FlagGeometry(c.n, 1, c.p, c.N).verify_cell_preimages(c.budget)
        return report['checked'], report['failures']

    def suite_cartesian(self, rng: random.Random) -> Outcome:
        c = self.config
        geometry = FlagGeometry(c.n, c.d, c.p, c.N, self._toolkit())
        groups = geometry.groups
        checker = _Checker()
        checker.absorb(geometry.cartesian_sample(c.m, c.k, c.t, c.samples, rng, c.budget))

        for _ in range(c.samples):
            y = geometry.random_h_point(rng, c.N - 1)
            checker.expect('iota_hat formula', True, geometry.verify_iota_hat(y), {'y': y.to_json()})
            x = geometry.iota_hat(y)
            g = groups.random_iwahori_G(rng, 1)
            h = groups.random_iwahori_G(rng, 1)
            payload = {'x': x.to_json(), 'g': g.to_json(), 'h': h.to_json()}
            left = geometry.star_translate(geometry.star_translate(x, g), h)
            checker.expect('right action', True, left.same_point(geometry.star_translate(x, g * h)), payload)
            checker.expect('cell under Iwahori', geometry.bruhat_cell(x),
                           geometry.bruhat_cell(geometry.star_translate(x, g)), payload)

        # contraction loses n digits on top of the radius m + 1 = n + 1
        contraction_N = max(c.N, 2 * c.n + 3)
        if contraction_N != c.N:
            self.logger.debug(f"contraction check runs at precision {contraction_N} instead of {c.N}")
            geometry = FlagGeometry(c.n, c.d, c.p, contraction_N)
        checker.absorb(geometry.contraction_sample(c.n, c.n, c.samples, rng))
        return checker.outcome()

    # groups

    def suite_factorization(self, rng: random.Random) -> Outcome:
        c = self.config
        groups = self._toolkit()
        q, r, n = groups.q, c.r, c.n
        modulus = c.p ** r
        checker = _Checker()

        checker.expect('gamma projects to u', groups.u.to_json(), groups.gamma.levi_projection().to_json(), {})

        for _ in range(c.samples):
            M = reduce_matrix([[(1 if i == j else 0) + modulus * rng.randrange(q) for j in range(2 * n)]
                               for i in range(2 * n)], q)
            R, S = groups.iwahori_factor(M, r)
            payload = {'M': [list(row) for row in M], 'r': r}
            checker.expect('iwahori reconstruction', M, mat_mul(R, S, q), payload)
            checker.expect('iwahori factor shapes', True,
                           _is_upper(R) and all(R[i][i] == 1 for i in range(len(R))) and _is_lower(S)
                           and _congruent_to_one(R, modulus) and _congruent_to_one(S, modulus), payload)

            Y = groups.random_congruence_matrix(rng, n, r + 1)
            xi = antidiagonal(n)
            R, S = groups.xi_factor(Y, r)
            payload = {'Y': [list(row) for row in Y], 'r': r, 'shape': 'square'}
            checker.expect('xi reconstruction', mat_add(xi, Y, q), mat_mul(mat_mul(R, xi, q), S, q), payload)
            checker.expect('xi factor shapes', True, _is_upper(R) and _is_upper(S)
                           and _congruent_to_one(R, modulus) and _congruent_to_one(S, modulus), payload)

            if n >= 2:
                Y = reduce_matrix([[c.p ** (r + 1) * rng.randrange(q) for _ in range(n - 1)] for _ in range(n)], q)
                R, S = groups.xi_factor(Y, r, 'rect')
                payload = {'Y': [list(row) for row in Y], 'r': r, 'shape': 'rect'}
                checker.expect('rect xi reconstruction', mat_add(groups.xi_rect, Y, q),
                               mat_mul(mat_mul(R, groups.xi_rect, q), S, q), payload)
                checker.expect('rect xi factor shapes', True, _is_upper(R) and _is_upper(S)
                               and _congruent_to_one(R, modulus) and _congruent_to_one(S, modulus), payload)

            g = groups.random_msquare(rng, r)
            box = groups.box_decompose(g, r)
            payload = {'g': g.to_json(), 'r': r}
            checker.expect('box reconstruction', g.to_json(), (groups.twisted(box.h) * box.b).to_json(), payload)
            checker.expect('box h in Mclub', True, groups.subgroup_member(box.h, SubgroupSpec('Mclub', r)), payload)
            checker.expect('box b in Borel', True, groups.subgroup_member(box.b, SubgroupSpec('BorelLevi'))
                           and groups.subgroup_member(box.b, SubgroupSpec('Msquare', r)), payload)

            b = groups.random_borel_levi(rng)
            box = groups.box_decompose(b, r)
            checker.expect('box of Borel element', True, box.h.is_identity() and box.b.to_json() == b.to_json(), {'g': b.to_json()})

            h = groups.random_mclub(rng, r)
            box = groups.box_decompose(groups.twisted(h), r)
            payload = {'h': h.to_json(), 'r': r}
            checker.expect('box of twisted Mclub element', h.to_json(), (box.h * box.b).to_json(), payload)
            checker.expect('box torus part commutes with u', box.b.to_json(), groups.twisted(box.b).to_json(), payload)

            h = groups.random_diamond_H(rng, c.t)
            payload = {'h': h.to_json(), 't': c.t}
            checker.expect('diamond membership', True, groups.subgroup_member(h, SubgroupSpec('DiamondH', c.t)), payload)
            checker.expect('diamond inside Iwahori', True,
                           groups.subgroup_member(h, SubgroupSpec('IwahoriH', c.t)), payload)

            s = groups.random_mclub(rng, r, diamond=True)
            payload = {'s': s.to_json(), 'r': r}
            checker.expect('Mdiamond inside Mclub', True,
                           groups.subgroup_member(s, SubgroupSpec('Mdiamond', r))
                           and groups.subgroup_member(s, SubgroupSpec('Mclub', r)), payload)
        return checker.outcome()

    def suite_orbits(self, rng: random.Random) -> Outcome:
        c = self.config
        checker = _Checker()
        for n in (1, 2, 3):
            for d in (1, 2, 3):
                groups = GroupToolkit(n, d, c.p, c.N)
                for case in ('levi', 'full'):
                    result = groups.stabilizer_dimension(case)
                    checker.expect('open orbit', True, result['open'], {'n': n, 'd': d, 'case': case, **result})
        return checker.outcome()

    def suite_index(self, rng: random.Random) -> Outcome:
        c = self.config
        checker = _Checker()
        cases = [(2, 1, 1, 1, 4), (3, 1, 2, 1, 4)]
        if c.N >= 3:
            cases.append((c.p, c.n, c.d, min(c.t, c.N - 2), c.N))
        for p, n, d, t, N in cases:
            result = GroupToolkit(n, d, p, N).level_index(t, c.budget)
            checker.expect('level index', result['formula_value'], result['count'], result)
            checker.expect('index paths agree', True, result['paths_agree'], result)
        return checker.outcome()

    # branching

    def suite_branching(self, rng: random.Random) -> Outcome:
        c = self.config
        checker = _Checker()
        if c.n < 2:
            self.logger.warning("branching suite needs n >= 2; nothing checked")
            return checker.outcome()
        groups = self._toolkit()
        law = BranchingLaw(groups)
        decomposer = FamilyDecomposer(c.n, c.d, c.p, c.N, law)
        one = PadicScalar.from_int(c.p, c.N, 1)
        r = c.r

        for _ in range(c.samples):
            x = law.random_pair(rng)
            x2 = law.random_pair(rng)
            h = groups.random_mclub(rng, r)
            g = groups.random_msquare(rng, r)
            payload = {'x': x.to_json(), 'g': g.to_json(), 'h': h.to_json(), 'r': r}

            value, box = law.box_evaluation(x, g, r)
            moved = law.eval_branching_vector(x, groups.twisted(h) * g, r)
            checker.expect('eigen transformation', (law.sigma_character(x, h) * value).residue, moved.residue, payload)

            combined = law.eval_branching_vector(x + x2, g, r)
            checker.expect('product formula', (value * law.eval_branching_vector(x2, g, r)).residue,
                           combined.residue, dict(payload, x2=x2.to_json()))

            checker.expect('value at identity', one.residue,
                           law.eval_branching_vector(x, groups.identity(), r).residue, payload)

            exponents = law.decompose_pair(x)
            checker.expect('decomposition round trip', x.to_json(), law.reconstruct(exponents).to_json(), payload)

            s = groups.random_club_torus(rng)
            other = BoxDecomposition(box.h * s, s.inverse() * box.b)
            checker.expect('alternative decomposition', g.to_json(),
                           (groups.twisted(other.h) * other.b).to_json(), dict(payload, s=s.to_json()))
            checker.expect('well defined', value.residue, law.evaluate_on(x, other).residue,
                           dict(payload, s=s.to_json()))

            if c.p == 2:
                continue
            specialized = law.eval_family_vector(law.algebraic_coefficients(exponents), g, r)
            checker.expect('family specialization', value.residue, specialized.residue, payload)

            if r + 1 < c.N:
                g_fine = groups.random_msquare(rng, r + 1)
                coeffs = {label: decomposer.random_character(rng) for label, _ in law.generator_set()}
                checker.expect('radius independence', law.eval_family_vector(coeffs, g_fine, r).residue,
                               law.eval_family_vector(coeffs, g_fine, r + 1).residue,
                               {'g': g_fine.to_json(), 'r': r,
                                'coefficients': {k: v.to_json() for k, v in coeffs.items()}})
        return checker.outcome()

    def suite_classical(self, rng: random.Random) -> Outcome:
        checker = _Checker()
        for a in range(11):
            for j in range(-12, 13):
                checker.expect('torus multiplicity', 1 if abs(j) <= a else 0,
                               BranchingLaw.classical_multiplicity(a, j), {'a': a, 'j': j})
        return checker.outcome()

    # weights and slopes

    def suite_dictionary(self, rng: random.Random) -> Outcome:
        c = self.config
        weyl = WeylCombinatorics(c.n, c.d)
        alphas = [weyl.wedge_weight_alpha(i) for i in range(2 * c.n)]
        checker = _Checker()
        for _ in range(c.samples):
            weight = random_dominant_weight(rng, c.n, c.d)
            entries = weyl.parameter_dictionary(weight)
            for entry in entries:
                i = entry.i
                rhs = alphas[i] - weyl.w_M_max(entries[2 * c.n - 1 - i].kappa)
                checker.expect('dictionary identity', rhs.to_json(), entry.nu.to_json(),
                               {'lambda': weight.to_json(), 'i': i})
                members = weyl.dot_orbit_dominant_members(weyl.kostant(i), weight)
                checker.expect('unique dominant dot member', [weyl.star_action(weyl.kostant(i), weight).to_json()],
                               [m.to_json() for m in members], {'lambda': weight.to_json(), 'i': i})
        return checker.outcome()

    def suite_slopes(self, rng: random.Random) -> Outcome:
        c = self.config
        analyzer = SlopeAnalyzer(c.n, c.d)
        checker = _Checker()
        for _ in range(c.samples):
            weight = random_trivial_dominant_weight(rng, c.n, c.d)
            payload = {'lambda': weight.to_json()}
            verdict = analyzer.is_small_slope(analyzer.borel_ordinary_datum(weight), weight)
            table = analyzer.borel_delta_table(weight)
            checker.expect('borel ordinary is small slope', True, verdict.verdict, payload)
            checker.expect('delta formulas', True, table.matches_prediction(), payload)
            checker.expect('margins match delta table',
                           {str(i): {k: str(v) for k, v in row.items()} for i, row in table.entries.items()},
                           {str(i): {k: str(v) for k, v in row.items()} for i, row in verdict.margins.items()},
                           payload)

        non_invertible = [(i, tau) for tau in range(c.d) for i in range(1, 2 * c.n)]
        for _ in range(max(1, c.samples // 5)):
            weight = random_trivial_dominant_weight(rng, c.n, c.d)
            i = rng.choice([k for k in range(2 * c.n) if k != c.n])
            bumps = {key: rng.randint(0, 3) for key in rng.sample(non_invertible, rng.randint(0, len(non_invertible)))}
            datum = analyzer.adversarial_datum(weight, i, bumps)
            verdict = analyzer.is_small_slope(datum, weight)
            checker.expect('adversarial datum rejected', False, verdict.verdict,
                           {'lambda': weight.to_json(), 'i': i, 'theta': datum.to_json()})
        return checker.outcome()

    # characters

    def suite_characters(self, rng: random.Random) -> Outcome:
        c = self.config
        p, N = c.p, c.N
        q = p ** N
        checker = _Checker()

        def unit() -> PadicScalar:
            while True:
                value = rng.randrange(q)
                if value % p:
                    return PadicScalar(p, N, value)

        for _ in range(c.samples):
            z = unit()
            omega = z.teichmuller()
            checker.expect('teichmuller idempotent', omega.residue, omega.teichmuller().residue, {'z': z.residue})
            if p == 2:
                continue
            k = rng.randint(-50, 50)
            checker.expect('algebraic character', (z ** k).residue,
                           AnalyticCharacter.algebraic(p, N, k).evaluate(z).residue, {'z': z.residue, 'k': k})
            s1, s2 = rng.randrange(q), rng.randrange(q)
            a1, a2 = rng.randrange(p - 1), rng.randrange(p - 1)
            chi1 = AnalyticCharacter.teichmuller_twist(p, N, a1, s1)
            chi2 = AnalyticCharacter.teichmuller_twist(p, N, a2, s2)
            checker.expect('homomorphism in s', (chi1.evaluate(z) * chi2.evaluate(z)).residue,
                           (chi1 + chi2).evaluate(z).residue,
                           {'z': z.residue, 'chi1': chi1.to_json(), 'chi2': chi2.to_json()})
        if p == 2:
            self.logger.warning("analytic character checks need p odd; only Teichmuller lifts were checked")
        return checker.outcome()

    def suite_families(self, rng: random.Random) -> Outcome:
        c = self.config
        if c.p == 2:
            self.logger.warning("family characters need p odd; nothing checked")
            return 0, []
        decomposer = FamilyDecomposer(c.n, c.d, c.p, c.N)
        points = [decomposer.random_torus_point(rng) for _ in range(100)]
        checker = _Checker()
        cases = min(c.samples, 10)

        for _ in range(cases):
            character = decomposer.random_trivial_on_T0(rng)
            coeffs = decomposer.decompose_family(character)
            rebuilt = decomposer.reconstruct_family(coeffs)
            for point in points:
                payload = {'lambda': character.to_json(), 'point': point.to_json()}
                expected = character.evaluate(point).residue
                checker.expect('torus reconstruction', expected,
                               decomposer.evaluate_coefficients(coeffs, point).residue, payload)
                checker.expect('torus rebuilt character', expected, rebuilt.evaluate(point).residue, payload)

        if c.n < 2:
            self.logger.warning("pair decomposition needs n >= 2; only torus decompositions checked")
            return checker.outcome()

        law = decomposer.law
        for _ in range(cases):
            character = decomposer.random_pure(rng)
            coeffs = decomposer.decompose_family_pair(character)
            for point in points:
                checker.expect('pair reconstruction', character.evaluate(point).residue,
                               decomposer.evaluate_coefficients(coeffs, point).residue,
                               {'kappa': character.to_json(), 'point': point.to_json()})
            chi = decomposer.random_character(rng)
            if not chi.is_trivial():
                witness = decomposer.uniqueness_witness(coeffs, 'aw', chi, points)
                checker.expect('uniqueness witness found', True, witness is not None,
                               {'kappa': character.to_json(), 'chi': chi.to_json()})

            x = law.random_pair(rng)
            algebraic = FamilyCharacter.from_weight(c.p, c.N, x.kappa, x.j)
            pair_coeffs = decomposer.decompose_family_pair(algebraic)
            kappa, j = decomposer.specialize_family(pair_coeffs)
            checker.expect('compatibility square', x.to_json(), {'kappa': kappa.to_json(), 'j': list(j)},
                           {'x': x.to_json()})
        return checker.outcome()
