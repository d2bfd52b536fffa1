"""
Pipeline service: loads problem files and runs the exact and numerical stages.
"""

import hashlib
import itertools
import json
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

import sympy
from loguru import logger
from pydantic import ValidationError
from sympy.external.gmpy import GROUND_TYPES

from .. import __version__
from ..config import Settings, get_settings
from ..core.adjunction import (
    MeromorphicTopForm,
    adjunction_map,
    mu_consistency_check,
    residue_identity_check,
)
from ..core.blowup import BlowupCenter
from ..core.l2check import (
    BranchParam,
    DyadicReport,
    GraphChart,
    Verdict,
    curve_branch_mass,
    graph_chart_mass,
    parse_branch,
    parse_region,
    validate_branch,
    validate_graph,
)
from ..core.multiplier import (
    MonomialIdeal,
    canonical_test,
    find_ef_witnesses,
    howald_generators,
    in_multiplier_ideal,
    multiplier_generators,
    witnesses_valid,
)
from ..core.poly import Polynomial, format_poly, parse_poly, partial_derivative, substitute
from ..core.resolution import (
    ResolutionTree,
    SncStatus,
    jacobian_discrepancies,
    resolve_plane_curve,
    resolve_scripted,
)
from ..models.requests import HowaldRequest, ProblemSpec
from ..models.responses import (
    AdjunctResult,
    AgreementModel,
    ChartModel,
    DivisorModel,
    DyadicModel,
    HowaldResult,
    L2Result,
    MultiplierModel,
    MultiplierResult,
    MuConsistencyModel,
    Report,
    ResidueModel,
    ResolutionChecks,
    ResolutionModel,
    ResolveResult,
    WitnessModel,
)
from ..utils.exceptions import (
    AdjlabException,
    ConfigurationError,
    NoWitnessError,
    PipelineStageError,
    ProblemValidationError,
    UnverifiedSncError,
)


def backend_identifier() -> str:
    """Exact-arithmetic backend, e.g. ``sympy 1.13.3 (gmpy)``."""
    return f"sympy {sympy.__version__} ({GROUND_TYPES})"


def parse_shells(text: str) -> tuple[int, int]:
    """Parse a ``"k_min:k_max"`` shell range."""
    try:
        low, high = (int(part) for part in text.split(":"))
    except ValueError as e:
        raise ConfigurationError(f"Shell range must look like '2:12', got '{text}'") from e
    if low < 0 or high < low:
        raise ConfigurationError(f"Shell range {text} is empty or negative")
    return low, high


@dataclass(frozen=True)
class RunOptions:
    """Effective numeric parameters: flags over problem file over settings."""

    seed: int
    k_min: int
    k_max: int
    samples: int
    max_steps: int
    degree_bound: int | None
    radial_nodes: int
    angular_nodes: int
    delta: float
    discard_limit: float
    workers: int
    mu_samples: int
    mu_tolerance: float


@dataclass(frozen=True)
class Problem:
    """A validated problem with every polynomial parsed."""

    spec: ProblemSpec
    f: Polynomial
    script: tuple[BlowupCenter, ...] | None
    g_list: tuple[Polynomial, ...]
    witness: MonomialIdeal | None
    branches: tuple[BranchParam, ...]
    branch_mu: tuple[int, ...]
    graphs: tuple[GraphChart, ...]
    graph_mu: tuple[int, ...]
    input_hash: str

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def variables(self) -> tuple[str, ...]:
        return self.f.variables


@contextmanager
def _stage(name: str, **context: Any) -> Iterator[None]:
    logger.info("Starting stage", stage=name, **context)
    try:
        yield
    except PipelineStageError:
        raise
    except AdjlabException as e:
        logger.error("Stage failed", stage=name, code=e.code, error=e.message)
        raise PipelineStageError(name, e) from e
    logger.info("Finished stage", stage=name)


def _input_hash(spec: ProblemSpec) -> str:
    canonical = json.dumps(spec.model_dump(mode="json", by_alias=True), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _default_mu(f: Polynomial, images: tuple[Polynomial, ...] | None = None) -> int:
    """Largest 1-based index whose partial of f is nonzero (on the branch when images are given)."""
    for i in reversed(range(f.nvars)):
        partial = partial_derivative(f, i)
        if images is not None and not partial.is_zero():
            partial = substitute(partial, images)
        if not partial.is_zero():
            return i + 1
    raise ProblemValidationError("f has no nonzero partial derivative")


def _ideal_payload(ideal: MonomialIdeal) -> list[str] | str:
    return "unit" if ideal.is_unit else ideal.format()


def _dyadic_model(g: Polynomial, label: str, mu: int, report: DyadicReport) -> DyadicModel:
    return DyadicModel(
        g=format_poly(g),
        chart=label,
        mu=mu,
        method=report.method,
        shells=list(report.shells),
        masses=list(report.masses),
        std_errors=list(report.std_errors),
        ratio=report.ratio,
        ratio_band=list(report.ratio_band),
        verdict=report.verdict.value,
        samples=report.samples,
        discarded=report.discarded,
        seed=report.seed,
        notes=list(report.notes),
    )


def _combine_verdicts(verdicts: list[str]) -> str:
    if Verdict.DIVERGENT.value in verdicts:
        return Verdict.DIVERGENT.value
    if Verdict.INCONCLUSIVE.value in verdicts:
        return Verdict.INCONCLUSIVE.value
    return Verdict.CONVERGENT.value


def _agreement_status(exact: bool, numeric: str) -> str:
    if numeric == Verdict.INCONCLUSIVE.value:
        return "numeric_inconclusive"
    return "agree" if exact == (numeric == Verdict.CONVERGENT.value) else "disagree"


def has_disagreement(result: L2Result | Report) -> bool:
    """True when any agreement entry is ``disagree``."""
    return any(entry.status == "disagree" for entry in result.agreement)


class PipelineService:
    """Service running the resolution, multiplier, adjunction and L2 stages."""

    def __init__(self, settings: Settings | None = None):
        """
        Initialize pipeline service.

        Args:
            settings: Settings to use (read from the environment when omitted)
        """
        self.settings = settings if settings is not None else get_settings()
        logger.info("Initialized PipelineService", seed=self.settings.seed, workers=self.settings.workers)

    # Problem files

    def load_problem(self, source: str | Path) -> ProblemSpec:
        """
        Load a problem file by path or by shipped name (``cusp``, ``cone``, ``smooth``).

        Args:
            source: Path to a JSON problem file or the name of a shipped problem

        Returns:
            The parsed problem spec
        """
        path = Path(source)
        if path.is_file():
            text = path.read_text(encoding="utf-8")
        else:
            shipped = resources.files("adjlab.problems") / f"{path.stem}.json"
            if not shipped.is_file():
                raise ProblemValidationError(f"No problem file or shipped problem named '{source}'")
            text = shipped.read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ProblemValidationError(f"Problem file is not valid JSON: {e}") from e
        try:
            spec = ProblemSpec.model_validate(data)
        except ValidationError as e:
            raise ProblemValidationError(f"Problem file does not match the schema: {e}") from e
        logger.debug("Loaded problem", name=spec.name, source=str(source))
        return spec

    def compile(self, spec: ProblemSpec) -> Problem:
        """Parse every polynomial and run the exact on-V checks of branches and graphs."""
        with _stage("load", problem=spec.name):
            variables = tuple(spec.variables)
            f = parse_poly(spec.f, variables)
            if f.is_constant():
                raise ProblemValidationError("f must be a nonconstant polynomial")
            script = None
            if spec.blowup_script is not None:
                script = tuple(BlowupCenter.of(step.chart, step.point) for step in spec.blowup_script)
            g_list = tuple(parse_poly(text, variables) for text in spec.g_list)
            if any(g.is_zero() for g in g_list):
                raise ProblemValidationError("Numerators in g_list must be nonzero")
            witness = MonomialIdeal.parse(spec.witness_ideal, variables) if spec.witness_ideal else None
            if spec.mu is not None and not 1 <= spec.mu <= len(variables):
                raise ProblemValidationError(f"mu must lie in 1..{len(variables)}, got {spec.mu}")

            branches, branch_mu = [], []
            if spec.branches and len(variables) != 2:
                raise ProblemValidationError("Branches are only supported for plane curves")
            for entry in spec.branches:
                branch = parse_branch(entry.param, entry.radius, entry.parameter)
                validate_branch(f, branch)
                branches.append(branch)
                branch_mu.append(entry.mu if entry.mu is not None else _default_mu(f, branch.components))

            graphs, graph_mu = [], []
            for entry in spec.graphs:
                if entry.dependent not in variables:
                    raise ProblemValidationError(f"Unknown dependent variable '{entry.dependent}'")
                dependent = variables.index(entry.dependent)
                radial = None
                if entry.radial is not None:
                    if entry.radial not in variables:
                        raise ProblemValidationError(f"Unknown radial variable '{entry.radial}'")
                    radial = variables.index(entry.radial)
                chart = GraphChart(
                    dependent=dependent,
                    numerator=parse_poly(entry.g_num, variables),
                    denominator=parse_poly(entry.g_den, variables),
                    region=parse_region(entry.region, variables),
                    radial=radial,
                )
                validate_graph(f, chart)
                graphs.append(chart)
                graph_mu.append(entry.mu if entry.mu is not None else dependent + 1)

        return Problem(
            spec=spec,
            f=f,
            script=script,
            g_list=g_list,
            witness=witness,
            branches=tuple(branches),
            branch_mu=tuple(branch_mu),
            graphs=tuple(graphs),
            graph_mu=tuple(graph_mu),
            input_hash=_input_hash(spec),
        )

    def options(self, spec: ProblemSpec, **overrides: Any) -> RunOptions:
        """
        Effective numeric parameters.

        Args:
            spec: Problem spec (its numeric params override settings)
            **overrides: Command-line values; None means not given

        Returns:
            The merged options
        """
        s = self.settings
        given = {key: value for key, value in overrides.items() if value is not None}
        k_min, k_max = s.k_min, s.k_max
        shells = given.get("shells", spec.shells)
        if shells is not None:
            k_min, k_max = parse_shells(shells)

        def pick(key: str, default: Any) -> Any:
            if key in given:
                return given[key]
            value = getattr(spec, key)
            return default if value is None else value

        options = RunOptions(
            seed=pick("seed", s.seed),
            k_min=k_min,
            k_max=k_max,
            samples=pick("samples", s.samples),
            max_steps=pick("max_steps", s.max_steps),
            degree_bound=pick("degree_bound", s.degree_bound),
            radial_nodes=s.quadrature_radial,
            angular_nodes=s.quadrature_angular,
            delta=s.verdict_delta,
            discard_limit=s.discard_limit,
            workers=s.workers,
            mu_samples=s.mu_samples,
            mu_tolerance=s.mu_tolerance,
        )
        if options.samples <= 0:
            raise ConfigurationError(f"samples must be positive, got {options.samples}")
        return options

    def _header(self, problem: Problem) -> dict[str, str]:
        return {
            "tool_version": __version__,
            "backend": backend_identifier(),
            "input_hash": problem.input_hash,
            "problem": problem.name,
        }

    # Stages

    def resolve(self, problem: Problem, options: RunOptions) -> ResolutionTree:
        """Resolve V: automatic for plane curves without a script, scripted otherwise."""
        with _stage("resolve", problem=problem.name):
            if problem.script is not None:
                tree = resolve_scripted(problem.f, problem.script, problem.spec.snc_assertion)
            elif len(problem.variables) == 2:
                tree = resolve_plane_curve(problem.f, options.max_steps)
            else:
                tree = resolve_scripted(problem.f, (), problem.spec.snc_assertion)
        logger.debug("Resolution", divisors=len(tree.divisors), status=tree.snc_status.value)
        return tree

    def resolution_summary(self, tree: ResolutionTree) -> tuple[ResolutionModel, ResolutionChecks]:
        """Serialize a tree together with its cross-checks."""
        model = ResolutionModel(
            variables=list(tree.variables),
            f=format_poly(tree.f),
            divisors=[DivisorModel(id=d.id, m=d.m, k=d.k, birth_step=d.birth_step) for d in tree.divisors],
            charts=[
                ChartModel(
                    id=chart.id,
                    variables=list(chart.variables),
                    map_to_base=[format_poly(p) for p in chart.map_to_base],
                    exceptional={chart.variables[i]: did for i, did in sorted(chart.exceptional_locus.items())},
                )
                for chart in tree.charts
            ],
            snc_status=tree.snc_status.value,
        )
        recomputed = jacobian_discrepancies(tree)
        checks = ResolutionChecks(
            jacobian_discrepancies=list(recomputed),
            discrepancies_agree=recomputed == tree.k,
            snc_witness=tree.snc_witness,
        )
        return model, checks

    def multiplier(
        self, problem: Problem, tree: ResolutionTree, options: RunOptions
    ) -> tuple[MultiplierModel, WitnessModel, dict[str, bool]]:
        """J(V), lct, canonical verdict, E_f witnesses and membership of every g."""
        with _stage("multiplier", problem=problem.name):
            report = multiplier_generators(tree, options.degree_bound)
            if report.generators is None:
                generators: list[str] | str = "non_monomial_unsupported"
            else:
                generators = _ideal_payload(report.generators)
            model = MultiplierModel(
                thresholds=list(report.thresholds),
                generators=generators,
                lct=str(report.lct),
                canonical=canonical_test(tree, problem.spec.normal).value,
                reduced=report.reduced,
            )
            membership = {format_poly(g): in_multiplier_ideal(g, tree) for g in problem.g_list}
            witnesses = self._witnesses(problem, tree, report.generators, options)
        return model, witnesses, membership

    def _witnesses(
        self,
        problem: Problem,
        tree: ResolutionTree,
        generators: MonomialIdeal | None,
        options: RunOptions,
    ) -> WitnessModel:
        found = None
        note = None
        if tree.is_monomial():
            try:
                found = find_ef_witnesses(tree, options.degree_bound)
            except NoWitnessError as e:
                note = e.message
        else:
            note = "Witness search needs a tree of origin blow-ups"

        model = WitnessModel(note=note)
        if found is not None:
            model.generators = found.format()
            model.valid = witnesses_valid(found, tree)
        if problem.witness is not None:
            model.declared = problem.witness.format()
            model.declared_valid = witnesses_valid(problem.witness, tree)

        source = found if found is not None else problem.witness
        if source is not None:
            oracle = howald_generators(source, 1, options.degree_bound)
            model.oracle_generators = _ideal_payload(oracle)
            if generators is not None:
                model.oracle_agrees = oracle.generators == generators.generators
        return model

    def adjunct(
        self, problem: Problem, tree: ResolutionTree | None, options: RunOptions
    ) -> tuple[list[ResidueModel], list[MuConsistencyModel]]:
        """Residue forms with their identity checks and the numerical index-independence check."""
        residues: list[ResidueModel] = []
        consistency: list[MuConsistencyModel] = []
        with _stage("adjunct", problem=problem.name):
            f = problem.f
            mu = problem.spec.mu if problem.spec.mu is not None else _default_mu(f)
            usable = [i + 1 for i in range(f.nvars) if not partial_derivative(f, i).is_zero()]
            pairs = list(itertools.combinations(usable, 2))
            for g in problem.g_list:
                omega = MeromorphicTopForm(g, f)
                residue = adjunction_map(omega, mu)
                exact = None
                if tree is not None and tree.snc_status is not SncStatus.UNVERIFIED:
                    exact = in_multiplier_ideal(g, tree)
                residues.append(
                    ResidueModel(
                        g=format_poly(g),
                        sign=residue.sign,
                        mu=residue.mu,
                        numerator=format_poly(residue.numerator),
                        denominator=format_poly(residue.denominator),
                        identity_check=residue_identity_check(omega, residue),
                        l2_exact=exact,
                    )
                )
                if not pairs:
                    continue
                deviation = max(
                    mu_consistency_check(omega, a, b, samples=options.mu_samples, seed=options.seed)
                    for a, b in pairs
                )
                consistency.append(
                    MuConsistencyModel(
                        g=format_poly(g),
                        pairs=[list(pair) for pair in pairs],
                        samples=options.mu_samples,
                        max_deviation=deviation,
                        passed=deviation <= options.mu_tolerance,
                    )
                )
        return residues, consistency

    def l2(
        self, problem: Problem, tree: ResolutionTree | None, options: RunOptions
    ) -> tuple[list[DyadicModel], list[AgreementModel]]:
        """Dyadic reports per (g, branch or chart) and the exact-against-numerical agreement matrix."""
        dyadic: list[DyadicModel] = []
        agreement: list[AgreementModel] = []
        if not problem.branches and not problem.graphs:
            logger.info("Skipping stage without branches or graph charts", stage="l2")
            return dyadic, agreement

        with _stage("l2", problem=problem.name, seed=options.seed):
            for g in problem.g_list:
                omega = MeromorphicTopForm(g, problem.f)
                entries = []
                for index, (branch, mu) in enumerate(zip(problem.branches, problem.branch_mu)):
                    report = curve_branch_mass(
                        adjunction_map(omega, mu),
                        branch,
                        options.k_min,
                        options.k_max,
                        options.radial_nodes,
                        options.angular_nodes,
                        options.delta,
                    )
                    entries.append(_dyadic_model(g, f"branch[{index}]", mu, report))
                for index, (chart, mu) in enumerate(zip(problem.graphs, problem.graph_mu)):
                    report = graph_chart_mass(
                        adjunction_map(omega, mu),
                        chart,
                        options.k_min,
                        options.k_max,
                        options.samples,
                        options.seed,
                        options.workers,
                        options.delta,
                        options.discard_limit,
                    )
                    entries.append(_dyadic_model(g, f"graph[{index}]", mu, report))
                dyadic.extend(entries)

                if tree is None:
                    continue
                try:
                    exact = in_multiplier_ideal(g, tree)
                except UnverifiedSncError:
                    logger.warning("No exact verdict without normal crossings", g=format_poly(g))
                    continue
                numeric = _combine_verdicts([entry.verdict for entry in entries])
                agreement.append(
                    AgreementModel(
                        g=format_poly(g), exact=exact, numeric=numeric, status=_agreement_status(exact, numeric)
                    )
                )
        return dyadic, agreement

    def howald(self, request: HowaldRequest) -> HowaldResult:
        """Newton-polyhedron multiplier ideal of a monomial ideal."""
        with _stage("howald"):
            variables = tuple(request.variables)
            ideal = MonomialIdeal.parse(request.ideal, variables)
            c = parse_poly(request.c, variables)
            if not c.is_constant():
                raise ConfigurationError(f"Coefficient c must be a rational constant, got '{request.c}'")
            result = howald_generators(ideal, c.constant_value(), request.degree_bound)
        return HowaldResult(
            variables=list(variables),
            ideal=ideal.format(),
            c=str(c.constant_value()),
            generators=_ideal_payload(result),
        )

    # Commands

    def _prepare(self, source: str | Path, overrides: dict[str, Any]) -> tuple[Problem, RunOptions]:
        spec = self.load_problem(source)
        problem = self.compile(spec)
        return problem, self.options(spec, **overrides)

    def run_resolve(self, source: str | Path, **overrides: Any) -> ResolveResult:
        problem, options = self._prepare(source, overrides)
        tree = self.resolve(problem, options)
        resolution, checks = self.resolution_summary(tree)
        return ResolveResult(**self._header(problem), resolution=resolution, checks=checks)

    def run_multiplier(self, source: str | Path, **overrides: Any) -> MultiplierResult:
        problem, options = self._prepare(source, overrides)
        tree = self.resolve(problem, options)
        model, witnesses, membership = self.multiplier(problem, tree, options)
        return MultiplierResult(**self._header(problem), multiplier=model, witnesses=witnesses, membership=membership)

    def run_adjunct(self, source: str | Path, **overrides: Any) -> AdjunctResult:
        problem, options = self._prepare(source, overrides)
        tree = self.resolve(problem, options)
        residues, consistency = self.adjunct(problem, tree, options)
        return AdjunctResult(**self._header(problem), residues=residues, mu_consistency=consistency)

    def run_l2(self, source: str | Path, **overrides: Any) -> L2Result:
        problem, options = self._prepare(source, overrides)
        tree = self.resolve(problem, options)
        dyadic, agreement = self.l2(problem, tree, options)
        return L2Result(**self._header(problem), dyadic=dyadic, agreement=agreement)

    def run_pipeline(self, source: str | Path, **overrides: Any) -> Report:
        """
        Run every stage applicable to a problem.

        Args:
            source: Problem file path or shipped problem name
            **overrides: Command-line numeric parameters

        Returns:
            The full report
        """
        problem, options = self._prepare(source, overrides)
        tree = self.resolve(problem, options)
        resolution, checks = self.resolution_summary(tree)
        multiplier, witnesses, membership = self.multiplier(problem, tree, options)
        residues, consistency = self.adjunct(problem, tree, options)
        dyadic, agreement = self.l2(problem, tree, options)
        report = Report(
            **self._header(problem),
            resolution=resolution,
            checks=checks,
            witnesses=witnesses,
            multiplier=multiplier,
            membership=membership,
            residues=residues,
            mu_consistency=consistency,
            dyadic=dyadic,
            agreement=agreement,
        )
        if has_disagreement(report):
            logger.warning("Exact and numerical verdicts disagree", problem=problem.name)
        else:
            logger.success("Pipeline finished", problem=problem.name, divisors=len(tree.divisors))
        return report


# Global service instance
_pipeline_service: PipelineService | None = None


def get_pipeline_service() -> PipelineService:
    """Get the global pipeline service instance."""
    global _pipeline_service
    if _pipeline_service is None:
        _pipeline_service = PipelineService()
    return _pipeline_service
