"""Builders for the sections of a pinching report.

Each builder is a pure function of the scenario; the workflow decides which of
them run and in what order.
"""
import logging
import math
from typing import Any, Iterable, List, Optional, Sequence

from src.geometry.base import ConfigError, CurvaturePoleError, DomainError
from src.geometry.drilling_flow import (
    QUANTITIES,
    FlowEnvelope,
    angle_grid,
    cone_length_curve,
    controlled_length_factors,
    controlled_twist_factors,
    controllengths_constants,
    cusp_drift_bound,
    cusp_drift_curve,
    cusp_shape_lower_bound,
    envelope_by_ode,
    geodesic_derivative_bound,
    geodesic_length_by_ode,
    geodesic_length_curve,
    geodesic_length_envelope,
    twist_curve,
    twist_envelope,
)
from src.geometry.epstein_ends import (
    curvature_range,
    diffeomorphism_depth,
    embedding_depth,
    immersion_depth,
)
from src.geometry.halfspace_hodge import (
    NEHARI_BOUND,
    projective_distance_bound,
    projective_distance_ode,
    projective_slope,
    schwarzian_sup_bound,
    sharp_projective_slope,
)
from src.geometry.hyperbolic_core import TWO_PI
from src.geometry.tube_geometry import (
    MIN_TUBE_RADIUS,
    ell0_explicit_component,
    hk_area_lower_bound,
    normbound_tube_ratio,
    short_geodesic_threshold,
    tube_energy_factor,
    tube_radius,
)
from src.models import (
    Bracket,
    ConeCheck,
    ControlLengthsRegime,
    CuspSection,
    DrilledDistance,
    DrilledSection,
    EnvelopeSummary,
    EpsteinSection,
    GeodesicSection,
    GeodesicSpec,
    HypothesisChecks,
    LengthBoundRegime,
    ProjectiveSection,
    Quantity,
    ScenarioConfig,
    measured,
    missing,
)

logger = logging.getLogger(__name__)

ODE_SUBSTEPS = 8


def non_constructive_flag(name: str) -> str:
    return f"non_constructive: {name}"


def _bracket(lower: float, upper: float, source: str, *flags: str) -> Bracket:
    return Bracket(lower=measured(lower, source, *flags), upper=measured(upper, source, *flags))


def _missing_bracket(source: str, *flags: str) -> Bracket:
    return Bracket(lower=missing(source, *flags), upper=missing(source, *flags))


def collect_flags(section: Any) -> List[str]:
    """Every flag string found anywhere inside a section, sorted and deduplicated."""
    found = set()

    def walk(node: Any) -> None:
        if isinstance(node, dict):
            for key, value in node.items():
                if key == "flags":
                    found.update(value)
                else:
                    walk(value)
        elif isinstance(node, list):
            for item in node:
                walk(item)

    if hasattr(section, "model_dump"):
        section = section.model_dump()
    walk(section)
    return sorted(found)


def ell0_quantity(config: ScenarioConfig) -> Quantity:
    """``ℓ₀ = min(ℓ₁, ℓ₂, ℓ₃)``, null while either non-constructive part is absent."""
    ell3 = ell0_explicit_component(config.alpha)
    inputs = config.non_constructive
    absent = [name for name in ("ell1", "ell2") if getattr(inputs, name) is None]
    if absent:
        return missing("ell0", *(non_constructive_flag(name) for name in absent))
    return measured(min(inputs.ell1, inputs.ell2, ell3), "ell0")


def _outside_flag(name: str) -> str:
    return f"outside_explicit_regime: {name}"


def build_hypothesis_checks(config: ScenarioConfig) -> HypothesisChecks:
    """Tube-radius and short-length hypotheses for each cone component at angle ``α``."""
    alpha = config.alpha
    ell3 = ell0_explicit_component(alpha)
    components = []
    for name, length in config.cone_lengths.items():
        if length == 0:
            degenerate = f"degenerate_cone_length: {name}"
            components.append(
                ConeCheck(
                    name=name,
                    cone_length=measured(0.0, "cone_length"),
                    tube_radius=measured(math.inf, "tube_radius", degenerate),
                    tube_radius_ok=True,
                    within_explicit_threshold=True,
                    hk_area_lower_bound=missing("hk_area_lower_bound", degenerate),
                    normbound_tube_ratio=missing("normbound_tube_ratio", degenerate),
                    tube_energy_factor=missing("tube_energy_factor", degenerate),
                )
            )
            continue

        radius = tube_radius(alpha, length)
        within = length <= ell3
        flags = () if within else (_outside_flag(name),)
        components.append(
            ConeCheck(
                name=name,
                cone_length=measured(length, "cone_length", *flags),
                tube_radius=measured(radius, "tube_radius"),
                tube_radius_ok=radius >= MIN_TUBE_RADIUS,
                within_explicit_threshold=within,
                hk_area_lower_bound=measured(hk_area_lower_bound(radius), "hk_area_lower_bound"),
                normbound_tube_ratio=measured(normbound_tube_ratio(radius), "normbound_tube_ratio"),
                tube_energy_factor=measured(tube_energy_factor(radius), "tube_energy_factor"),
            )
        )
        logger.debug(f"DEBUG: cone component {name}: L={length}, R={radius}, within={within}")

    return HypothesisChecks(
        ell3=measured(ell3, "ell0_explicit_component"),
        ell0=ell0_quantity(config),
        min_tube_radius=measured(MIN_TUBE_RADIUS, "min_tube_radius"),
        components=components,
        all_hold=all(c.tube_radius_ok and c.within_explicit_threshold for c in components),
    )


def config_grid(config: ScenarioConfig, grid_points: Optional[int] = None):
    points = config.grid_points if grid_points is None else grid_points
    return angle_grid(config.alpha, points, config.grid_start_fraction)


def twist_length_bound(config: ScenarioConfig, geodesic: GeodesicSpec) -> Quantity:
    """Length bound fed to the twist estimate: ``bound_L`` or the top of the length envelope."""
    if geodesic.bound_L is not None:
        return measured(geodesic.bound_L, "bound_L")
    _, hi = geodesic_length_envelope(geodesic.length_alpha, config.total_cone_length, config.alpha)
    if math.isinf(hi):
        unbounded = f"unbounded_length_envelope: {geodesic.name}"
        return measured(math.inf, "geodesic_length_envelope", unbounded)
    return measured(geodesic.length_alpha * hi, "geodesic_length_envelope")


def _find(items: Sequence[Any], name: str, label: str) -> Any:
    for item in items:
        if item.name == name:
            return item
    raise ConfigError(f"Unknown {label} component {name!r}")


def _pick_component(names: List[str], component: Optional[str], quantity: str) -> str:
    if component is not None:
        if component not in names:
            raise ConfigError(f"Unknown component {component!r} for {quantity}; choose from {names}")
        return component
    if len(names) != 1:
        raise ConfigError(f"{quantity} needs a component, choose from {names}")
    return names[0]


def build_envelope(
    config: ScenarioConfig,
    quantity: str,
    component: Optional[str] = None,
    grid_points: Optional[int] = None,
) -> FlowEnvelope:
    """Closed-form envelope of ``quantity`` for one component on the scenario grid."""
    if quantity not in QUANTITIES:
        raise ConfigError(f"Unknown quantity {quantity!r}; choose from {list(QUANTITIES)}")
    grid = config_grid(config, grid_points)
    alpha, L_C = config.alpha, config.total_cone_length

    if quantity == "cone_length":
        name = _pick_component(list(config.cone_lengths), component, quantity)
        return cone_length_curve(alpha, config.cone_lengths[name], grid)
    if quantity == "cusp_drift":
        return cusp_drift_curve(alpha, L_C, grid)

    name = _pick_component([g.name for g in config.geodesics], component, quantity)
    geodesic = _find(config.geodesics, name, "geodesic")
    if quantity == "geodesic_length":
        return geodesic_length_curve(geodesic.length_alpha, L_C, alpha, grid)
    ell = twist_length_bound(config, geodesic).value
    return twist_curve(geodesic.twist_alpha, ell, L_C, alpha, grid)


def _relative_deviation(reference: Iterable[float], other: Iterable[float]) -> float:
    worst = 0.0
    for a, b in zip(reference, other):
        if math.isinf(a) or math.isinf(b):
            continue
        scale = abs(a) if a else 1.0
        worst = max(worst, abs(a - b) / scale)
    return worst


def _summary(
    envelope: FlowEnvelope,
    component: Optional[str],
    source: str,
    limit: Bracket,
    ode_deviation: Optional[Quantity] = None,
    extra_flags: Sequence[str] = (),
) -> EnvelopeSummary:
    return EnvelopeSummary(
        quantity=envelope.quantity,
        component=component,
        grid_points=len(envelope.grid),
        at_start=_bracket(envelope.lower[0], envelope.upper[0], source),
        at_alpha=_bracket(envelope.lower[-1], envelope.upper[-1], source),
        limit_at_zero=limit,
        ode_deviation=ode_deviation,
        flags=sorted(set(envelope.flags) | set(extra_flags)),
    )


def build_envelope_summaries(config: ScenarioConfig) -> List[EnvelopeSummary]:
    """Endpoints, ``t → 0`` limits and RK4 cross-checks of every monitored quantity."""
    alpha, L_C = config.alpha, config.total_cone_length
    grid = config_grid(config)
    ell3 = ell0_explicit_component(alpha)
    summaries = []

    for name, length in config.cone_lengths.items():
        envelope = cone_length_curve(alpha, length, grid)
        by_ode = envelope_by_ode(alpha, length, grid, substeps=ODE_SUBSTEPS)
        deviation = max(
            _relative_deviation(envelope.lower, by_ode.lower),
            _relative_deviation(envelope.upper, by_ode.upper),
        )
        flags = [] if length <= ell3 else [_outside_flag(name)]
        if alpha - 2 * length * alpha ** 2 > 0:
            limit = _bracket(0.0, 0.0, "cone_length_envelope")
        else:
            degenerate = f"bound_degenerate: cone_length {name}"
            limit = Bracket(
                lower=measured(0.0, "cone_length_envelope"),
                upper=measured(math.inf, "cone_length_envelope", degenerate),
            )
        summaries.append(
            _summary(
                envelope,
                name,
                "cone_length_envelope",
                limit,
                measured(deviation, "envelope_by_ode"),
                flags,
            )
        )

    for geodesic in config.geodesics:
        envelope = geodesic_length_curve(geodesic.length_alpha, L_C, alpha, grid)
        slowest = geodesic_length_by_ode(geodesic.length_alpha, L_C, alpha, grid, lambda t: 1.0)
        fastest = geodesic_length_by_ode(geodesic.length_alpha, L_C, alpha, grid, lambda t: -1.0)
        deviation = max(
            _relative_deviation(envelope.lower, slowest),
            _relative_deviation(envelope.upper, fastest),
        )
        lo, hi = geodesic_length_envelope(geodesic.length_alpha, L_C, alpha)
        summaries.append(
            _summary(
                envelope,
                geodesic.name,
                "geodesic_length_envelope",
                _bracket(geodesic.length_alpha * lo, geodesic.length_alpha * hi, "geodesic_length_envelope"),
                measured(deviation, "geodesic_length_by_ode"),
            )
        )

        ell = twist_length_bound(config, geodesic)
        twist = twist_curve(geodesic.twist_alpha, ell.value, L_C, alpha, grid)
        drift = 4 * ell.value * L_C * alpha
        summaries.append(
            _summary(
                twist,
                geodesic.name,
                "twist_curve",
                _bracket(geodesic.twist_alpha - drift, geodesic.twist_alpha + drift, "twist_curve"),
                extra_flags=ell.flags,
            )
        )

    drift = cusp_drift_curve(alpha, L_C, grid)
    summaries.append(
        _summary(drift, None, "cusp_drift_bound", _bracket(0.0, cusp_drift_bound(alpha, L_C), "cusp_drift_bound"))
    )
    logger.debug(f"DEBUG: built {len(summaries)} envelope summaries on {len(grid)} grid points")
    return summaries


def _controllengths_bound(config: ScenarioConfig, geodesic: Optional[GeodesicSpec] = None) -> float:
    if geodesic is not None:
        return geodesic.bound_L or geodesic.length_alpha
    bounds = [g.bound_L or g.length_alpha for g in config.geodesics]
    return max(bounds) if bounds else ell0_explicit_component(config.alpha)


def _controllengths_A(config: ScenarioConfig, L: float):
    """``(K, A, ε₂)`` quantities from the non-constructive ``K1`` and ``δ``, or nulls."""
    inputs = config.non_constructive
    absent = [name for name in ("K1", "delta") if getattr(inputs, name) is None]
    if absent:
        flags = [non_constructive_flag(name) for name in absent]
        return (
            missing("controllengths_constants", *flags),
            missing("controllengths_constants", *flags),
            missing("doubling_epsilon", *flags),
        )
    constants = controllengths_constants(L, inputs.delta, inputs.K1)
    flags = [non_constructive_flag("K1"), non_constructive_flag("delta")]
    return (
        measured(constants.K, "controllengths_constants", *flags),
        measured(constants.A, "controllengths_constants", *flags),
        measured(constants.epsilon2, "doubling_epsilon", *flags),
    )


def _factor_brackets(A: Quantity, total: float):
    if A.value is None:
        return (
            _missing_bracket("controlled_length_factors", *A.flags),
            _missing_bracket("controlled_twist_factors", *A.flags),
        )
    lengths = controlled_length_factors(A.value, total)
    twists = controlled_twist_factors(A.value, total)
    return (
        _bracket(lengths.lo, lengths.hi, "controlled_length_factors", *A.flags),
        _bracket(twists.lo, twists.hi, "controlled_twist_factors", *A.flags),
    )


def build_geodesic_sections(config: ScenarioConfig) -> List[GeodesicSection]:
    """Both regimes of length and twist control for each listed geodesic."""
    alpha, L_C = config.alpha, config.total_cone_length
    ell0 = ell0_quantity(config)
    sections = []
    for geodesic in config.geodesics:
        if ell0.value is None:
            threshold = missing("short_geodesic_threshold", *ell0.flags)
            in_short = None
        else:
            value = short_geodesic_threshold(alpha, ell0.value)
            threshold = measured(value, "short_geodesic_threshold")
            in_short = geodesic.length_alpha <= value

        lo, hi = geodesic_length_envelope(geodesic.length_alpha, L_C, alpha)
        ell = twist_length_bound(config, geodesic)
        twist = twist_envelope(geodesic.twist_alpha, ell.value, L_C)
        lengthbound = LengthBoundRegime(
            derivative_bound=measured(
                geodesic_derivative_bound(geodesic.length_alpha, L_C), "geodesic_derivative_bound"
            ),
            length_factors=_bracket(lo, hi, "geodesic_length_envelope"),
            twist_length_bound=ell,
            twist_bounds=_bracket(twist.lo, twist.hi, "twist_envelope", *ell.flags),
        )

        K, A, epsilon2 = _controllengths_A(config, _controllengths_bound(config, geodesic))
        length_factors, twist_factors = _factor_brackets(A, L_C)
        controllengths = ControlLengthsRegime(
            K=K,
            A=A,
            epsilon2=epsilon2,
            within_doubling=None if epsilon2.value is None else L_C <= epsilon2.value,
            length_factors=length_factors,
            twist_factors=twist_factors,
        )
        sections.append(
            GeodesicSection(
                name=geodesic.name,
                length_alpha=geodesic.length_alpha,
                twist_alpha=geodesic.twist_alpha,
                short_threshold=threshold,
                in_short_regime=in_short,
                lengthbound=lengthbound,
                controllengths=controllengths,
            )
        )
    return sections


def sigma_quantity(config: ScenarioConfig, name: str) -> Quantity:
    """``‖Σ_α‖∞`` from the config, Nehari's ``3/2`` when requested, otherwise null."""
    component = _find(config.boundary, name, "boundary")
    if component.sigma_norm_alpha is not None:
        return measured(component.sigma_norm_alpha, "config")
    if config.nehari:
        return measured(NEHARI_BOUND, "nehari_bound", f"nehari_substitution: {name}")
    return missing("config", f"missing_input: sigma_norm_alpha {name}")


def _overflow_flag(name: str) -> str:
    return f"projective_overflow: {name}"


def build_projective_sections(config: ScenarioConfig) -> List[ProjectiveSection]:
    """Projective-distance bound between ``Σ_α`` and ``Σ_t`` for each boundary component."""
    alpha, L_C = config.alpha, config.total_cone_length
    sections = []
    for component in config.boundary:
        sigma = sigma_quantity(config, component.name)
        K = measured(projective_slope(component.kappa), "projective_slope")
        sharp = measured(sharp_projective_slope(component.kappa), "sharp_projective_slope")
        bound = None
        if sigma.value is not None:
            bound = projective_distance_bound(alpha, component.kappa, sigma.value, L_C)

        if bound is None:
            sigma_bound = missing("projective_distance_bound", *sigma.flags)
            sigma_bound_ode = missing("projective_distance_ode", *sigma.flags)
            C = missing("projective_distance_bound", *sigma.flags)
            sup = missing("schwarzian_sup_bound", *sigma.flags)
        elif math.isinf(bound.C):
            flags = (*sigma.flags, _overflow_flag(component.name))
            sigma_bound = measured(math.inf, "projective_distance_bound", *flags)
            sigma_bound_ode = measured(math.inf, "projective_distance_ode", *flags)
            C = measured(math.inf, "projective_distance_bound", *flags)
            sup = measured(math.inf, "schwarzian_sup_bound", *flags)
        else:
            ode = projective_distance_ode(alpha, component.kappa, sigma.value, L_C)
            sigma_bound = measured(bound.sigma_bound, "projective_distance_bound", *sigma.flags)
            sigma_bound_ode = measured(ode, "projective_distance_ode", *sigma.flags)
            C = measured(bound.C, "projective_distance_bound", *sigma.flags)
            sup = measured(
                schwarzian_sup_bound(L_C, component.kappa, sigma.value + bound.sigma_bound),
                "schwarzian_sup_bound",
                *sigma.flags,
            )
        sections.append(
            ProjectiveSection(
                name=component.name,
                kappa=component.kappa,
                sigma_norm_alpha=sigma,
                K=K,
                sharp_slope=sharp,
                sigma_bound=sigma_bound,
                sigma_bound_ode=sigma_bound_ode,
                C=C,
                schwarzian_sup=sup,
            )
        )
    return sections


def build_epstein_sections(
    config: ScenarioConfig, projective: List[ProjectiveSection]
) -> List[EpsteinSection]:
    """Depths and curvature ranges of Epstein surfaces, with ``‖Σ_t‖∞ ≤ ‖Σ_α‖∞ + σ_bound``."""
    sections = []
    for section in projective:
        if section.sigma_bound.value is None:
            flags = section.sigma_bound.flags
            sections.append(
                EpsteinSection(
                    name=section.name,
                    phi_sup=missing("sigma_norm_alpha+sigma_bound", *flags),
                    immersion_depth=missing("immersion_depth", *flags),
                    embedding_depth=missing("embedding_depth", *flags),
                    diffeomorphism_depth=missing("diffeomorphism_depth", *flags),
                    curvature_depth=missing("embedding_depth", *flags),
                    curvature_min=missing("curvature_range", *flags),
                    curvature_max=missing("curvature_range", *flags),
                    convex=None,
                )
            )
            continue

        if math.isinf(section.sigma_bound.value):
            flags = section.sigma_bound.flags
            sections.append(
                EpsteinSection(
                    name=section.name,
                    phi_sup=measured(math.inf, "sigma_norm_alpha+sigma_bound", *flags),
                    immersion_depth=measured(math.inf, "immersion_depth", *flags),
                    embedding_depth=measured(math.inf, "embedding_depth", *flags),
                    diffeomorphism_depth=measured(math.inf, "diffeomorphism_depth", *flags),
                    curvature_depth=measured(math.inf, "embedding_depth", *flags),
                    curvature_min=missing("curvature_range", *flags),
                    curvature_max=missing("curvature_range", *flags),
                    convex=None,
                )
            )
            continue

        flags = section.sigma_norm_alpha.flags
        phi_sup = section.sigma_norm_alpha.value + section.sigma_bound.value
        immersion = immersion_depth(phi_sup)
        embedding = embedding_depth(section.kappa, phi_sup)
        depth = max(immersion, embedding)
        try:
            lowest, highest = curvature_range(phi_sup, depth)
            curvature_min = measured(lowest, "curvature_range", *flags)
            curvature_max = measured(highest, "curvature_range", *flags)
            convex = lowest > 0
        except CurvaturePoleError:
            pole = f"curvature_pole: {section.name}"
            curvature_min = missing("curvature_range", *flags, pole)
            curvature_max = missing("curvature_range", *flags, pole)
            convex = None
        sections.append(
            EpsteinSection(
                name=section.name,
                phi_sup=measured(phi_sup, "sigma_norm_alpha+sigma_bound", *flags),
                immersion_depth=measured(immersion, "immersion_depth", *flags),
                embedding_depth=measured(embedding, "embedding_depth", *flags),
                diffeomorphism_depth=measured(diffeomorphism_depth(phi_sup), "diffeomorphism_depth", *flags),
                curvature_depth=measured(depth, "embedding_depth", *flags),
                curvature_min=curvature_min,
                curvature_max=curvature_max,
                convex=convex,
            )
        )
    return sections


def build_cusp_sections(config: ScenarioConfig) -> List[CuspSection]:
    """Drift of each cusp's shape parameter and the resulting floor on ``Im τ``."""
    drift = cusp_drift_bound(config.alpha, config.total_cone_length)
    return [
        CuspSection(
            name=cusp.name,
            tau_real=cusp.tau_real,
            tau_imag=cusp.tau_imag,
            drift=measured(drift, "cusp_drift_bound"),
            imag_lower_bound=measured(
                cusp_shape_lower_bound(complex(cusp.tau_real, cusp.tau_imag), drift),
                "cusp_shape_lower_bound",
            ),
        )
        for cusp in config.cusps
    ]


def drilled_comparison(
    config: ScenarioConfig, boundary_lengths: dict, A: Optional[float] = None
) -> DrilledSection:
    """Compare a manifold with the cover of its drilled limit.

    Distances use the full angle ``2π`` and the total boundary cone length; ``A``
    comes from the argument, the config, or ``K1``/``δ``, and is null otherwise.
    """
    flags = []
    if not math.isclose(config.alpha, TWO_PI, rel_tol=1e-12):
        flags.append("alpha_not_two_pi")
    for name, length in boundary_lengths.items():
        if not length >= 0:
            raise DomainError(f"Boundary length of {name!r} must be non-negative, got {length}")
    total = math.fsum(boundary_lengths.values())

    distances = []
    for component in config.boundary:
        sigma = sigma_quantity(config, component.name)
        if sigma.value is None:
            distances.append(
                DrilledDistance(
                    name=component.name,
                    distance=missing("projective_distance_bound", *sigma.flags),
                    C=missing("projective_distance_bound", *sigma.flags),
                )
            )
            continue
        bound = projective_distance_bound(TWO_PI, component.kappa, sigma.value, total)
        flags = list(sigma.flags)
        if math.isinf(bound.C):
            flags.append(_overflow_flag(component.name))
        distances.append(
            DrilledDistance(
                name=component.name,
                distance=measured(bound.C * total, "projective_distance_bound", *flags),
                C=measured(bound.C, "projective_distance_bound", *flags),
            )
        )

    if A is None and config.drilled is not None:
        A = config.drilled.A
    if A is not None:
        A_quantity = measured(A, "config")
    else:
        _, A_quantity, _ = _controllengths_A(config, _controllengths_bound(config))
    length_factors, twist_factors = _factor_brackets(A_quantity, total)

    ell0 = ell0_quantity(config)
    eps0 = config.non_constructive.eps0
    if eps0 is None or ell0.value is None:
        absent = list(ell0.flags) + ([non_constructive_flag("eps0")] if eps0 is None else [])
        ell0_prime = missing("ell0_prime", *absent)
    else:
        ell0_prime = measured(min(ell0.value, eps0), "ell0_prime", non_constructive_flag("eps0"))

    section = DrilledSection(
        total_boundary_length=measured(total, "boundary_lengths"),
        distances=distances,
        A=A_quantity,
        length_factors=length_factors,
        twist_factors=twist_factors,
        ell0_prime=ell0_prime,
        flags=flags,
    )
    logger.debug(f"DEBUG: drilled comparison total={total}, A={A_quantity.value}")
    return section
