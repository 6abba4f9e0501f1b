"""Domain model: operators, service classes, traffic profiles and the scenario schema.

Everything here is data plus validation; the decision logic lives in
``scoring``/``selection`` and the event loop in ``engine``.  A Scenario is
serialized one-to-one to JSON (see docs/scenario_schema.md), so scenario
files can be edited by hand and replayed deterministically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping

WEIGHT_SUM_TOL = 1e-9


class ServiceKind(str, Enum):
    CONVERSATIONAL = "conversational"  # real-time: jitter/delay sensitive
    INTERACTIVE = "interactive"        # non-real-time: loss sensitive

    def __str__(self):
        return self.value


class Technology(str, Enum):
    UMTS = "UMTS"
    WLAN = "WLAN"

    def __str__(self):
        return self.value


# Per-class criteria weights in the order (bandwidth, jitter, delay, BER).
DEFAULT_QOS_WEIGHTS = {
    ServiceKind.CONVERSATIONAL: (0.05, 0.45, 0.45, 0.05),
    ServiceKind.INTERACTIVE: (0.16, 0.04, 0.16, 0.64),
}


@dataclass(frozen=True)
class ServiceClass:
    """A QoS class: its kind plus the criteria weights used when scoring."""

    kind: ServiceKind
    qos_weights: tuple[float, float, float, float]

    @classmethod
    def default(cls, kind):
        return cls(kind=ServiceKind(kind), qos_weights=DEFAULT_QOS_WEIGHTS[ServiceKind(kind)])


@dataclass(frozen=True)
class QoSRequirements:
    """What one application asks of a network, bandwidth already resolved per technology."""

    bw_req: float      # kb/s, from the demand table for the candidate technology
    jitter_req: float  # ms
    delay_req: float   # ms
    ber_req: float     # error probability


@dataclass(frozen=True)
class ClassRequirements:
    """Per-class QoS thresholds; bandwidth is technology-dependent so it lives in DemandTable."""

    jitter_req: float
    delay_req: float
    ber_req: float


DEFAULT_REQUIREMENTS = {
    ServiceKind.CONVERSATIONAL: ClassRequirements(jitter_req=10.0, delay_req=100.0, ber_req=1e-3),
    ServiceKind.INTERACTIVE: ClassRequirements(jitter_req=20.0, delay_req=150.0, ber_req=1e-5),
}


@dataclass(frozen=True)
class UserPreferences:
    """Preference split between QoS and price; the two weights sum to one."""

    w_qos: float
    w_price: float


@dataclass
class OperatorNetwork:
    """One operator and the single radio access network it manages.

    ``used_kbps`` is the only mutable piece of simulation state; the engine
    owns it and everything else stays constant during a run.
    """

    id: int
    name: str
    technology: Technology
    capacity_kbps: float
    jitter_ms: float
    delay_ms: float
    ber: float
    sp: float          # advertised service price, unit/kByte
    cs: float          # settlement cost charged when serving a guest, unit/kByte
    w_u: float = 1.0   # weight on user satisfaction when transferring a client
    w_op: float = 1.0  # weight on profit margin when transferring a client
    used_kbps: float = 0.0

    @property
    def remaining_kbps(self):
        return self.capacity_kbps - self.used_kbps


@dataclass(frozen=True)
class ServiceRequest:
    """A single admission request, immutable for its whole lifetime."""

    user_id: int
    home_op: int
    service_class: ServiceClass
    prefs: UserPreferences
    price_paid: float  # what the client pays its home operator, unit/kByte


@dataclass(frozen=True)
class DemandTable:
    """Constant bit rate consumed per (service kind, technology), kb/s."""

    rates: Mapping[tuple[ServiceKind, Technology], float]

    def rate(self, kind, technology):
        return self.rates[(ServiceKind(kind), Technology(technology))]


DEFAULT_DEMAND = DemandTable(rates={
    (ServiceKind.CONVERSATIONAL, Technology.UMTS): 256.0,
    (ServiceKind.CONVERSATIONAL, Technology.WLAN): 256.0,
    (ServiceKind.INTERACTIVE, Technology.UMTS): 512.0,
    (ServiceKind.INTERACTIVE, Technology.WLAN): 1024.0,
})


@dataclass(frozen=True)
class TrafficProfile:
    """One cell of the arrival mix: a service kind, a preference pair, a probability."""

    service: ServiceKind
    prefs: UserPreferences
    probability: float


@dataclass(frozen=True)
class Session:
    """An admitted request bound to a serving operator for a drawn duration."""

    request: ServiceRequest
    serving_op: int
    rate_kbps: float
    start_s: float
    duration_s: float


@dataclass(frozen=True)
class Scenario:
    """Complete, self-contained description of one experiment."""

    operators: tuple[OperatorNetwork, ...]
    demand: DemandTable
    qos_weights: Mapping[ServiceKind, tuple[float, float, float, float]]
    requirements: Mapping[ServiceKind, ClassRequirements]
    profile_mix: tuple[TrafficProfile, ...]
    mean_interarrival_s: float = 2.5
    mean_service_s: float = 240.0
    duration_s: float = 1200.0
    replications: int = 20
    base_seed: int = 42
    cooperation: bool = True
    billing: str = "volume"  # "volume" (price x kBytes) or "per_session" (flat price)

    def operator(self, op_id) -> OperatorNetwork:
        for net in self.operators:
            if net.id == op_id:
                return net
        raise KeyError(f"unknown operator id {op_id}")

    def sp_max(self):
        return max(net.sp for net in self.operators)

    def service_class(self, kind) -> ServiceClass:
        kind = ServiceKind(kind)
        return ServiceClass(kind=kind, qos_weights=tuple(self.qos_weights[kind]))

    def requirements_for(self, kind, technology) -> QoSRequirements:
        """Resolve the full requirement vector for a class on a given technology."""
        kind = ServiceKind(kind)
        bounds = self.requirements[kind]
        return QoSRequirements(
            bw_req=self.demand.rate(kind, technology),
            jitter_req=bounds.jitter_req,
            delay_req=bounds.delay_req,
            ber_req=bounds.ber_req,
        )


@dataclass
class OperatorLedger:
    """Money flows of one operator, in price units (unit/kByte x kBytes).

    income_own          revenue from own clients served at home
    income_transferred  revenue from own clients served elsewhere (client still pays home)
    income_guests       settlement received for serving other operators' clients
    cost_paid           settlement paid out for own clients served elsewhere
    """

    income_own: float = 0.0
    income_transferred: float = 0.0
    income_guests: float = 0.0
    cost_paid: float = 0.0

    @property
    def profit(self):
        return self.income_own + self.income_transferred + self.income_guests - self.cost_paid


@dataclass
class ReplicationResult:
    """Raw outcome of a single replication; aggregation happens in analytics."""

    seed: int
    arrivals: int
    blocked: int
    served_home: int
    served_transferred: int
    arrivals_by_home: dict[int, int]
    blocked_by_home: dict[int, int]
    served_home_by_op: dict[int, int]
    transferred_by_home: dict[int, int]
    exchange: dict[tuple[int, int, ServiceKind], int]
    ledgers: dict[int, OperatorLedger]
    sessions: list[Session]
    interarrival_sum: float

    @property
    def served_ids(self):
        return {s.request.user_id for s in self.sessions}

    @property
    def blocking_probability(self):
        return self.blocked / self.arrivals if self.arrivals else 0.0


@dataclass
class MetricsReport:
    """All replications of one experiment plus the scenario that produced them."""

    scenario: Scenario
    results: list[ReplicationResult]


class ScenarioError(ValueError):
    """Raised when a scenario document is structurally or semantically invalid."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# --------------------------------------------------------------------------
# validation

def _check_weight_sum(violations, label, values):
    total = sum(values)
    if any(v < 0 for v in values):
        violations.append(f"weight-sum violation: {label} has a negative entry {tuple(values)}")
    elif abs(total - 1.0) > WEIGHT_SUM_TOL:
        violations.append(f"weight-sum violation: {label} sums to {total!r}, expected 1")


def validate_scenario(scenario: Scenario) -> list[str]:
    """Check every model invariant and return all violations found (empty list = valid)."""
    v: list[str] = []

    if not scenario.operators:
        v.append("operators: list is empty, at least one operator is required")
    seen_ids = set()
    for i, net in enumerate(scenario.operators):
        where = f"operators[{i}]"
        if net.id in seen_ids:
            v.append(f"duplicate operator id: {where}.id = {net.id}")
        seen_ids.add(net.id)
        if net.capacity_kbps <= 0:
            v.append(f"non-positive capacity: {where}.capacity_kbps = {net.capacity_kbps!r}")
        if not 0 <= net.used_kbps <= net.capacity_kbps:
            v.append(f"load out of range: {where}.used_kbps = {net.used_kbps!r} "
                     f"not in [0, {net.capacity_kbps!r}]")
        for name in ("jitter_ms", "delay_ms"):
            if getattr(net, name) <= 0:
                v.append(f"non-positive QoS constant: {where}.{name}")
        if not 0 < net.ber < 1:
            v.append(f"BER out of range: {where}.ber = {net.ber!r}, expected (0, 1)")
        if net.sp <= 0:
            v.append(f"non-positive price: {where}.sp = {net.sp!r}")
        if net.cs <= 0:
            v.append(f"non-positive price: {where}.cs = {net.cs!r}")
        if net.w_u < 0 or net.w_op < 0:
            v.append(f"negative strategy weight: {where}.w_u/w_op = ({net.w_u!r}, {net.w_op!r})")

    for kind in ServiceKind:
        weights = scenario.qos_weights.get(kind)
        if weights is None:
            v.append(f"missing QoS weights: qos_weights[{kind}]")
        elif len(weights) != 4:
            v.append(f"weight-sum violation: qos_weights[{kind}] must have 4 entries")
        else:
            _check_weight_sum(v, f"qos_weights[{kind}]", weights)

        bounds = scenario.requirements.get(kind)
        if bounds is None:
            v.append(f"missing requirements entry: requirements[{kind}]")
        else:
            if bounds.jitter_req <= 0 or bounds.delay_req <= 0:
                v.append(f"non-positive requirement: requirements[{kind}] jitter/delay")
            if not 0 < bounds.ber_req < 1:
                v.append(f"BER requirement out of range: requirements[{kind}].ber_req "
                         f"= {bounds.ber_req!r}")

        for tech in Technology:
            rate = scenario.demand.rates.get((kind, tech))
            if rate is None:
                v.append(f"missing demand entry: demand[{kind}][{tech}]")
            elif rate <= 0:
                v.append(f"non-positive demand rate: demand[{kind}][{tech}] = {rate!r}")

    if not scenario.profile_mix:
        v.append("profile_mix: list is empty")
    for i, profile in enumerate(scenario.profile_mix):
        _check_weight_sum(v, f"profile_mix[{i}] preference weights",
                          (profile.prefs.w_qos, profile.prefs.w_price))
        if profile.probability < 0:
            v.append(f"negative probability: profile_mix[{i}].probability")
    if scenario.profile_mix:
        total = sum(p.probability for p in scenario.profile_mix)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            v.append(f"weight-sum violation: profile_mix probabilities sum to {total!r}")

    if scenario.mean_interarrival_s <= 0:
        v.append(f"non-positive traffic parameter: mean_interarrival_s "
                 f"= {scenario.mean_interarrival_s!r}")
    if scenario.mean_service_s <= 0:
        v.append(f"non-positive traffic parameter: mean_service_s = {scenario.mean_service_s!r}")
    if scenario.duration_s <= 0:
        v.append(f"non-positive duration: duration_s = {scenario.duration_s!r}")
    if scenario.replications < 1:
        v.append(f"replications out of range: {scenario.replications!r}, expected >= 1")
    if scenario.billing not in ("volume", "per_session"):
        v.append(f"unknown billing mode: {scenario.billing!r}")

    return v


def ensure_valid(scenario: Scenario) -> Scenario:
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioError(violations)
    return scenario


# --------------------------------------------------------------------------
# defaults

def default_profile_mix():
    """Uniform mix over {real-time, non-real-time} x {QoS-leaning, price-leaning}."""
    entries = []
    for kind in (ServiceKind.CONVERSATIONAL, ServiceKind.INTERACTIVE):
        for w_qos, w_price in ((0.7, 0.3), (0.4, 0.6)):
            entries.append(TrafficProfile(
                service=kind,
                prefs=UserPreferences(w_qos=w_qos, w_price=w_price),
                probability=0.25,
            ))
    return tuple(entries)


def default_scenario() -> Scenario:
    """The three-operator reference scenario: one UMTS network and two WLANs."""
    operators = (
        OperatorNetwork(id=1, name="Op1", technology=Technology.UMTS,
                        capacity_kbps=1700.0, jitter_ms=6.0, delay_ms=19.0, ber=1e-3,
                        sp=0.9, cs=0.9),
        OperatorNetwork(id=2, name="Op2", technology=Technology.WLAN,
                        capacity_kbps=11000.0, jitter_ms=10.0, delay_ms=30.0, ber=1e-5,
                        sp=0.1, cs=0.1),
        OperatorNetwork(id=3, name="Op3", technology=Technology.WLAN,
                        capacity_kbps=5500.0, jitter_ms=10.0, delay_ms=45.0, ber=1e-5,
                        sp=0.2, cs=0.2),
    )
    return Scenario(
        operators=operators,
        demand=DEFAULT_DEMAND,
        qos_weights=dict(DEFAULT_QOS_WEIGHTS),
        requirements=dict(DEFAULT_REQUIREMENTS),
        profile_mix=default_profile_mix(),
    )


# --------------------------------------------------------------------------
# JSON serialization (field names mirror the dataclasses one-to-one)

def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "operators": [
            {
                "id": net.id,
                "name": net.name,
                "technology": net.technology.value,
                "capacity_kbps": net.capacity_kbps,
                "used_kbps": net.used_kbps,
                "jitter_ms": net.jitter_ms,
                "delay_ms": net.delay_ms,
                "ber": net.ber,
                "sp": net.sp,
                "cs": net.cs,
                "w_u": net.w_u,
                "w_op": net.w_op,
            }
            for net in scenario.operators
        ],
        "demand": {
            kind.value: {
                tech.value: scenario.demand.rates[(kind, tech)]
                for tech in Technology if (kind, tech) in scenario.demand.rates
            }
            for kind in ServiceKind
        },
        "qos_weights": {
            kind.value: list(weights) for kind, weights in scenario.qos_weights.items()
        },
        "requirements": {
            kind.value: {
                "jitter_req": bounds.jitter_req,
                "delay_req": bounds.delay_req,
                "ber_req": bounds.ber_req,
            }
            for kind, bounds in scenario.requirements.items()
        },
        "profile_mix": [
            {
                "service": p.service.value,
                "w_qos": p.prefs.w_qos,
                "w_price": p.prefs.w_price,
                "probability": p.probability,
            }
            for p in scenario.profile_mix
        ],
        "mean_interarrival_s": scenario.mean_interarrival_s,
        "mean_service_s": scenario.mean_service_s,
        "duration_s": scenario.duration_s,
        "replications": scenario.replications,
        "base_seed": scenario.base_seed,
        "cooperation": scenario.cooperation,
        "billing": scenario.billing,
    }


def scenario_from_dict(doc: dict) -> Scenario:
    """Build a Scenario from a parsed JSON document; structural problems raise ScenarioError."""
    problems: list[str] = []

    def need(mapping, key, where):
        if key not in mapping:
            problems.append(f"missing field: {where}{key}")
            return None
        return mapping[key]

    if not isinstance(doc, dict):
        raise ScenarioError(["scenario document must be a JSON object"])

    operators = []
    for i, entry in enumerate(doc.get("operators", []) or []):
        where = f"operators[{i}]."
        try:
            operators.append(OperatorNetwork(
                id=int(need(entry, "id", where)),
                name=str(entry.get("name", f"Op{entry.get('id', i)}")),
                technology=Technology(need(entry, "technology", where)),
                capacity_kbps=float(need(entry, "capacity_kbps", where)),
                used_kbps=float(entry.get("used_kbps", 0.0)),
                jitter_ms=float(need(entry, "jitter_ms", where)),
                delay_ms=float(need(entry, "delay_ms", where)),
                ber=float(need(entry, "ber", where)),
                sp=float(need(entry, "sp", where)),
                cs=float(need(entry, "cs", where)),
                w_u=float(entry.get("w_u", 1.0)),
                w_op=float(entry.get("w_op", 1.0)),
            ))
        except (TypeError, ValueError) as exc:
            problems.append(f"bad operator entry {where[:-1]}: {exc}")

    rates = {}
    for kind_name, per_tech in (doc.get("demand") or {}).items():
        for tech_name, rate in (per_tech or {}).items():
            try:
                rates[(ServiceKind(kind_name), Technology(tech_name))] = float(rate)
            except (TypeError, ValueError) as exc:
                problems.append(f"bad demand entry demand[{kind_name}][{tech_name}]: {exc}")

    qos_weights = {}
    for kind_name, weights in (doc.get("qos_weights") or {}).items():
        try:
            qos_weights[ServiceKind(kind_name)] = tuple(float(w) for w in weights)
        except (TypeError, ValueError) as exc:
            problems.append(f"bad qos_weights[{kind_name}]: {exc}")

    requirements = {}
    for kind_name, entry in (doc.get("requirements") or {}).items():
        where = f"requirements[{kind_name}]."
        try:
            requirements[ServiceKind(kind_name)] = ClassRequirements(
                jitter_req=float(need(entry, "jitter_req", where)),
                delay_req=float(need(entry, "delay_req", where)),
                ber_req=float(need(entry, "ber_req", where)),
            )
        except (TypeError, ValueError) as exc:
            problems.append(f"bad requirements entry {where[:-1]}: {exc}")

    profile_mix = []
    for i, entry in enumerate(doc.get("profile_mix", []) or []):
        where = f"profile_mix[{i}]."
        try:
            profile_mix.append(TrafficProfile(
                service=ServiceKind(need(entry, "service", where)),
                prefs=UserPreferences(w_qos=float(need(entry, "w_qos", where)),
                                      w_price=float(need(entry, "w_price", where))),
                probability=float(need(entry, "probability", where)),
            ))
        except (TypeError, ValueError) as exc:
            problems.append(f"bad profile entry {where[:-1]}: {exc}")

    scalars = {}
    defaults = Scenario(operators=(), demand=DemandTable({}), qos_weights={},
                        requirements={}, profile_mix=())
    for name, cast in (("mean_interarrival_s", float), ("mean_service_s", float),
                       ("duration_s", float), ("replications", int),
                       ("base_seed", int), ("cooperation", bool), ("billing", str)):
        raw = doc.get(name, getattr(defaults, name))
        try:
            scalars[name] = cast(raw)
        except (TypeError, ValueError) as exc:
            problems.append(f"bad field {name}: {exc}")

    if problems:
        raise ScenarioError(problems)
    return Scenario(
        operators=tuple(operators),
        demand=DemandTable(rates=rates),
        qos_weights=qos_weights,
        requirements=requirements,
        profile_mix=tuple(profile_mix),
        **scalars,
    )


def load_scenario(path) -> Scenario:
    """Read, parse and fully validate a scenario JSON file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"not valid JSON: {path}: {exc}"]) from exc
    return ensure_valid(scenario_from_dict(doc))


def save_scenario(scenario: Scenario, path):
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")
