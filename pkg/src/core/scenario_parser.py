"""
Scenario Parser - YAML scenario files to validated simulation inputs

A scenario declares the simulation grid, the attacked assets and the shocks
hitting them. Category presets fill in omitted asset parameters, explicit
values override them, and every problem is reported with its YAML line.

Example:
    version: 1
    simulation:
      dt: 1.0
      horizon: 24.0
      n_paths: 1
      noise_enabled: false
    process: retaliation
    assets:
      - id: datacentre
        category: company
        M0: 1.0e7
        rM: -4.76e-5
        value_rate_own: 5.0e8
        value_rate_contingent: 5.0e8
        operational_margin: 0.5
        model: {a: 5.8e-5, V: 1.0}
    shocks:
      - {asset: datacentre, time: 0.0, magnitude: 1.0}
"""

import dataclasses
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Set, Tuple

import yaml

from core.category_presets import CategoryPreset, category_preset
from models.asset import Asset
from models.errors import ScenarioError, ScenarioIssue
from models.simulation_config import SimulationConfig
from models.time_preference import AttackShock, TimePreferenceModel, UsabilityProfile
from models.units import annual_rate_to_hourly, hourly_rate_to_annual
from processors.claim_reporter import PROCESS_KINDS, CountermeasureProcess

logger = logging.getLogger(__name__)

SCENARIO_VERSION = 1
DEFAULT_PROCESS = "keep_silent"

TOP_KEYS = ("version", "simulation", "process", "rho", "window", "assets", "shocks")
SIMULATION_KEYS = tuple(f.name for f in dataclasses.fields(SimulationConfig))
ASSET_KEYS = (
    "id", "category", "M0", "rM", "value_rate_own", "value_rate_contingent", "TK",
    "A0_post", "capability_value", "k0_mode", "return_on_assets", "operational_margin",
    "model", "usability",
)
MODEL_KEYS = ("a", "r_eq", "r_eq_annual", "r_eq_annual_echo", "V", "lambda_market")
USABILITY_KEYS = ("kind", "TK_ref", "VA", "lambda_usability", "knots")
SHOCK_KEYS = ("asset", "time", "magnitude")

# relative tolerance of the annual echo against the hourly rate
ECHO_TOLERANCE = 1e-9

_MISSING = object()


@dataclass(frozen=True)
class ScenarioDocument:
    """Validated scenario: assets in file order and the shocks aimed at them"""

    assets: Tuple[Asset, ...]
    shocks: Tuple[Tuple[str, AttackShock], ...]
    config: SimulationConfig
    process: CountermeasureProcess
    rho: float = 0.0
    window: Optional[float] = None

    def shocks_for(self, asset_id: str) -> List[AttackShock]:
        """Shocks hitting one asset, sorted by time"""
        return sorted((shock for target, shock in self.shocks if target == asset_id), key=lambda s: s.time)

    def asset(self, asset_id: str) -> Asset:
        for asset in self.assets:
            if asset.id == asset_id:
                return asset
        raise KeyError(asset_id)


def _line_map(node: yaml.Node, prefix: str = "", lines: Optional[Dict[str, int]] = None) -> Dict[str, int]:
    """Map every field path of a composed YAML tree to its 1-based line"""
    if lines is None:
        lines = {}
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
            lines[path] = key_node.start_mark.line + 1
            _line_map(value_node, path, lines)
    elif isinstance(node, yaml.SequenceNode):
        for idx, item in enumerate(node.value):
            path = f"{prefix}[{idx}]"
            lines[path] = item.start_mark.line + 1
            _line_map(item, path, lines)
    return lines


def _declared_ids(raw_assets: Any) -> Set[str]:
    """Asset ids as written, including those of assets with field errors"""
    if not isinstance(raw_assets, list):
        return set()
    return {entry["id"] for entry in raw_assets if isinstance(entry, dict) and isinstance(entry.get("id"), str)}


class ScenarioParser:
    """Parses one scenario text, collecting every issue before failing"""

    def __init__(self, defaults: Optional[SimulationConfig] = None,
                 presets: Optional[Dict[str, CategoryPreset]] = None):
        """
        Initialize scenario parser

        Args:
            defaults: Simulation settings used for keys the scenario omits
            presets: Category preset table (defaults to the built-ins)
        """
        self.logger = logging.getLogger(__name__)
        self.defaults = defaults or SimulationConfig()
        self.presets = presets
        self.issues: List[ScenarioIssue] = []
        self.lines: Dict[str, int] = {}

    # ---- issue helpers -------------------------------------------------

    def _line_for(self, path: str) -> Optional[int]:
        candidate = path
        while candidate:
            if candidate in self.lines:
                return self.lines[candidate]
            cut = max(candidate.rfind("."), candidate.rfind("["))
            candidate = candidate[:cut] if cut > 0 else ""
        return None

    def _issue(self, path: str, message: str):
        self.issues.append(ScenarioIssue(path=path, message=message, line=self._line_for(path)))

    def _mapping(self, value: Any, path: str, allowed: Tuple[str, ...]) -> Dict[str, Any]:
        """Return value as a mapping, reporting unknown keys"""
        if not isinstance(value, dict):
            self._issue(path, f"expected a mapping, got {type(value).__name__}")
            return {}
        for key in value:
            if key not in allowed:
                where = f"{path}.{key}" if path else str(key)
                self._issue(where, f"unknown key {key!r}; allowed: {', '.join(allowed)}")
        return value

    def _number(self, mapping: Dict[str, Any], key: str, path: str, default: Any = _MISSING) -> Optional[float]:
        where = f"{path}.{key}" if path else key
        if key not in mapping:
            if default is _MISSING:
                self._issue(where, "required field is missing")
                return None
            return default
        raw = mapping[key]
        if isinstance(raw, bool) or raw is None:
            self._issue(where, f"expected a number, got {raw!r}")
            return None
        try:
            value = float(raw)
        except (TypeError, ValueError):
            self._issue(where, f"expected a number, got {raw!r}")
            return None
        if not math.isfinite(value):
            self._issue(where, f"must be a finite number, got {raw!r}")
            return None
        return value

    def _integer(self, mapping: Dict[str, Any], key: str, path: str, default: int) -> Optional[int]:
        if key not in mapping:
            return default
        raw = mapping[key]
        if isinstance(raw, bool) or not isinstance(raw, int):
            self._issue(f"{path}.{key}", f"expected an integer, got {raw!r}")
            return None
        return raw

    def _string(self, mapping: Dict[str, Any], key: str, path: str, default: Any = _MISSING) -> Optional[str]:
        where = f"{path}.{key}" if path else key
        if key not in mapping:
            if default is _MISSING:
                self._issue(where, "required field is missing")
                return None
            return default
        raw = mapping[key]
        if not isinstance(raw, str):
            self._issue(where, f"expected a string, got {raw!r}")
            return None
        return raw

    # ---- sections ------------------------------------------------------

    def parse(self, text: str) -> ScenarioDocument:
        """
        Parse scenario text

        Raises:
            ScenarioError: listing every located issue found
        """
        try:
            root = yaml.compose(text, Loader=yaml.SafeLoader)
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            problem = getattr(e, "problem", None) or str(e)
            raise ScenarioError([ScenarioIssue(
                path="",
                message=f"invalid YAML: {problem}",
                line=mark.line + 1 if mark is not None else None,
            )])

        if root is not None:
            self.lines = _line_map(root)
        if data is None:
            raise ScenarioError([ScenarioIssue(path="", message="scenario is empty")])

        data = self._mapping(data, "", TOP_KEYS)
        if "version" not in data:
            self._issue("version", f"missing version header; expected version: {SCENARIO_VERSION}")
        elif data["version"] != SCENARIO_VERSION or isinstance(data["version"], bool):
            self._issue("version", f"unsupported scenario version {data['version']!r}; expected {SCENARIO_VERSION}")

        config = self._parse_simulation(data.get("simulation", {}))
        process = self._parse_process(data)
        rho = self._number(data, "rho", "", default=0.0)
        if rho is not None and not -1.0 <= rho <= 1.0:
            self._issue("rho", f"correlation must lie in [-1, 1], got {rho}")
        window = self._number(data, "window", "", default=None)
        if window is not None and not window > 0:
            self._issue("window", f"damage window must be positive, got {window}")

        assets = self._parse_assets(data.get("assets"))
        shocks = self._parse_shocks(data.get("shocks", []), _declared_ids(data.get("assets")), config)

        if self.issues:
            raise ScenarioError(self.issues)

        return ScenarioDocument(
            assets=tuple(assets),
            shocks=tuple(shocks),
            config=config,
            process=process,
            rho=rho,
            window=window,
        )

    def _parse_simulation(self, raw: Any) -> Optional[SimulationConfig]:
        section = self._mapping(raw, "simulation", SIMULATION_KEYS)
        base = self.defaults
        overrides: Dict[str, Any] = {}
        for key in ("dt", "horizon"):
            overrides[key] = self._number(section, key, "simulation", default=getattr(base, key))
        for key in ("n_paths", "seed", "record_every"):
            overrides[key] = self._integer(section, key, "simulation", default=getattr(base, key))
        overrides["usability_mode"] = self._string(section, "usability_mode", "simulation", default=base.usability_mode)
        noise = section.get("noise_enabled", base.noise_enabled)
        if not isinstance(noise, bool):
            self._issue("simulation.noise_enabled", f"expected true or false, got {noise!r}")
            noise = None
        overrides["noise_enabled"] = noise

        if any(value is None for value in overrides.values()):
            return None
        config = dataclasses.replace(base, **overrides)
        for path, message in config.violations("simulation"):
            self._issue(path, message)
        return config

    def _parse_process(self, data: Dict[str, Any]) -> Optional[CountermeasureProcess]:
        kind = self._string(data, "process", "", default=DEFAULT_PROCESS)
        if kind is None:
            return None
        if kind not in PROCESS_KINDS:
            self._issue("process", f"unknown process {kind!r}; valid kinds: {', '.join(PROCESS_KINDS)}")
            return None
        return CountermeasureProcess(kind)

    def _parse_assets(self, raw: Any) -> List[Asset]:
        if raw is None or raw == []:
            self._issue("assets", "scenario requires at least one asset")
            return []
        if not isinstance(raw, list):
            self._issue("assets", f"expected a list of assets, got {type(raw).__name__}")
            return []

        assets = []
        seen = set()
        for idx, entry in enumerate(raw):
            path = f"assets[{idx}]"
            asset = self._parse_asset(entry, path)
            if asset is None:
                continue
            if asset.id in seen:
                self._issue(f"{path}.id", f"duplicate asset id {asset.id!r}")
                continue
            seen.add(asset.id)
            assets.append(asset)
        return assets

    def _parse_asset(self, raw: Any, path: str) -> Optional[Asset]:
        entry = self._mapping(raw, path, ASSET_KEYS)
        if not isinstance(raw, dict):
            return None
        issues_before = len(self.issues)

        asset_id = self._string(entry, "id", path)
        category = self._string(entry, "category", path)
        preset = None
        if category is not None:
            try:
                preset = category_preset(category, self.presets)
            except ValueError as e:
                self._issue(f"{path}.category", str(e))

        M0 = self._number(entry, "M0", path)
        rM = self._number(entry, "rM", path)
        value_rate_own = self._number(entry, "value_rate_own", path)
        value_rate_contingent = self._number(entry, "value_rate_contingent", path)
        TK = self._number(entry, "TK", path, default=preset.TK if preset else None)
        if TK is None and "TK" not in entry and preset is None:
            self._issue(f"{path}.TK", "required field is missing")
        A0_post = self._number(entry, "A0_post", path, default=0.0)
        capability_value = self._number(entry, "capability_value", path, default=None)
        k0_mode = self._string(entry, "k0_mode", path, default="annuity")
        return_on_assets = self._number(entry, "return_on_assets", path, default=None)
        operational_margin = self._number(entry, "operational_margin", path, default=None)

        model = self._parse_model(entry.get("model"), f"{path}.model", preset, return_on_assets, operational_margin)
        usability = self._parse_usability(entry.get("usability", {}), f"{path}.usability", preset, TK)

        if len(self.issues) > issues_before:
            return None

        asset = Asset(
            id=asset_id,
            category=category,
            M0=M0,
            rM=rM,
            value_rate_own=value_rate_own,
            value_rate_contingent=value_rate_contingent,
            TK=TK,
            model=model,
            usability=usability,
            A0_post=A0_post,
            capability_value=capability_value,
            k0_mode=k0_mode,
        )
        for field_path, message in asset.violations():
            self._issue(f"{path}.{field_path}", message)
        return asset

    def _parse_model(self, raw: Any, path: str, preset: Optional[CategoryPreset],
                     return_on_assets: Optional[float],
                     operational_margin: Optional[float]) -> Optional[TimePreferenceModel]:
        if raw is None:
            self._issue(path, "required section is missing")
            return None
        section = self._mapping(raw, path, MODEL_KEYS)
        a = self._number(section, "a", path)
        V = self._number(section, "V", path)
        lambda_market = self._number(section, "lambda_market", path,
                                     default=preset.lambda_market if preset else 0.0)

        r_eq = None
        if "r_eq" in section and "r_eq_annual" in section:
            self._issue(f"{path}.r_eq_annual", "give either r_eq (per hour) or r_eq_annual (per year), not both")
        elif "r_eq" in section:
            r_eq = self._number(section, "r_eq", path)
            echo = self._number(section, "r_eq_annual_echo", path, default=None)
            if r_eq is not None and echo is not None:
                expected = hourly_rate_to_annual(r_eq)
                if abs(echo - expected) > ECHO_TOLERANCE * max(1.0, abs(expected)):
                    self._issue(f"{path}.r_eq_annual_echo",
                                f"annual echo {echo} disagrees with r_eq {r_eq}/h (= {expected}/year)")
        elif "r_eq_annual" in section:
            annual = self._number(section, "r_eq_annual", path)
            if annual is not None:
                r_eq = annual_rate_to_hourly(annual)
        elif preset is not None:
            try:
                r_eq = preset.resolve_r_eq(return_on_assets, operational_margin)
            except ValueError as e:
                self._issue(f"{path}.r_eq", str(e))
            else:
                if preset.judgment_value:
                    self.logger.warning(
                        f"{path}.r_eq: using the {preset.category} judgment default "
                        f"{preset.r_eq_annual}/year; set r_eq explicitly to override"
                    )
        if "r_eq_annual_echo" in section and "r_eq" not in section:
            self._issue(f"{path}.r_eq_annual_echo", "echo field is only valid next to r_eq")

        if None in (a, V, lambda_market, r_eq):
            return None
        return TimePreferenceModel(a=a, r_eq=r_eq, V=V, lambda_market=lambda_market)

    def _parse_usability(self, raw: Any, path: str, preset: Optional[CategoryPreset],
                         TK: Optional[float]) -> Optional[UsabilityProfile]:
        section = self._mapping(raw, path, USABILITY_KEYS)
        if not isinstance(raw, dict):
            return None
        kind = self._string(section, "kind", path, default="linear_decreasing")
        TK_ref = self._number(section, "TK_ref", path, default=TK if TK is not None else 2160.0)
        VA = self._number(section, "VA", path, default=0.0)
        lambda_usability = self._number(section, "lambda_usability", path,
                                        default=preset.lambda_usability if preset else 0.0)
        knots = self._parse_knots(section.get("knots", []), f"{path}.knots")

        if None in (kind, TK_ref, VA, lambda_usability, knots):
            return None
        return UsabilityProfile(kind=kind, TK_ref=TK_ref, VA=VA, lambda_usability=lambda_usability, knots=knots)

    def _parse_knots(self, raw: Any, path: str) -> Optional[Tuple[Tuple[float, float], ...]]:
        if not isinstance(raw, list):
            self._issue(path, "expected a list of [time, WA] pairs")
            return None
        knots = []
        for idx, pair in enumerate(raw):
            where = f"{path}[{idx}]"
            if not (isinstance(pair, list) and len(pair) == 2):
                self._issue(where, f"expected a [time, WA] pair, got {pair!r}")
                return None
            if any(isinstance(item, bool) or not isinstance(item, (int, float)) for item in pair):
                self._issue(where, f"knot entries must be numbers, got {pair!r}")
                return None
            knots.append((float(pair[0]), float(pair[1])))
        return tuple(knots)

    def _parse_shocks(self, raw: Any, declared: Set[str],
                      config: Optional[SimulationConfig]) -> List[Tuple[str, AttackShock]]:
        if not isinstance(raw, list):
            self._issue("shocks", f"expected a list of shocks, got {type(raw).__name__}")
            return []

        shocks = []
        for idx, entry in enumerate(raw):
            path = f"shocks[{idx}]"
            section = self._mapping(entry, path, SHOCK_KEYS)
            if not section:
                continue
            target = self._string(section, "asset", path)
            time = self._number(section, "time", path)
            magnitude = self._number(section, "magnitude", path, default=1.0)
            if target is not None and target not in declared:
                self._issue(f"{path}.asset", f"shock references undeclared asset id {target!r}")
            if None in (target, time, magnitude):
                continue

            shock = AttackShock(time=time, magnitude=magnitude)
            for field_path, message in shock.violations(path):
                self._issue(field_path, message)
            if config is not None and time >= 0:
                step = int(round(time / config.dt))
                if step >= config.n_steps:
                    self._issue(f"{path}.time", f"shock at {time} h lies outside the horizon [0, {config.horizon})")
            shocks.append((target, shock))
        return shocks


def parse_scenario(text: str, defaults: Optional[SimulationConfig] = None,
                   presets: Optional[Dict[str, CategoryPreset]] = None) -> ScenarioDocument:
    """
    Parse and validate scenario text

    Args:
        text: Scenario file content (YAML)
        defaults: Simulation settings for omitted simulation keys
        presets: Category preset table

    Returns:
        ScenarioDocument

    Raises:
        ScenarioError: with one located issue per problem
    """
    return ScenarioParser(defaults=defaults, presets=presets).parse(text)


def load_scenario(path: str, defaults: Optional[SimulationConfig] = None,
                  presets: Optional[Dict[str, CategoryPreset]] = None) -> ScenarioDocument:
    """Read and parse a scenario file; I/O failures raise OSError"""
    text = Path(path).read_text(encoding="utf-8")
    logger.debug(f"Loaded scenario file {path}")
    return parse_scenario(text, defaults=defaults, presets=presets)


def scenario_to_dict(doc: ScenarioDocument) -> Dict[str, Any]:
    """
    Canonical echo of a scenario: every value explicit, rates per hour

    parse_scenario(dump_scenario(doc)) == doc.
    """
    config = doc.config
    data: Dict[str, Any] = {
        "version": SCENARIO_VERSION,
        "simulation": {
            "dt": config.dt,
            "horizon": config.horizon,
            "n_paths": config.n_paths,
            "seed": config.seed,
            "usability_mode": config.usability_mode,
            "noise_enabled": config.noise_enabled,
            "record_every": config.record_every,
        },
        "process": doc.process.kind,
        "rho": doc.rho,
    }
    if doc.window is not None:
        data["window"] = doc.window

    assets = []
    for asset in doc.assets:
        entry: Dict[str, Any] = {
            "id": asset.id,
            "category": asset.category,
            "M0": asset.M0,
            "rM": asset.rM,
            "value_rate_own": asset.value_rate_own,
            "value_rate_contingent": asset.value_rate_contingent,
            "TK": asset.TK,
            "A0_post": asset.A0_post,
        }
        if asset.capability_value is not None:
            entry["capability_value"] = asset.capability_value
        entry["k0_mode"] = asset.k0_mode
        entry["model"] = {
            "a": asset.model.a,
            "r_eq": asset.model.r_eq,
            "r_eq_annual_echo": hourly_rate_to_annual(asset.model.r_eq),
            "V": asset.model.V,
            "lambda_market": asset.model.lambda_market,
        }
        usability: Dict[str, Any] = {
            "kind": asset.usability.kind,
            "TK_ref": asset.usability.TK_ref,
            "VA": asset.usability.VA,
            "lambda_usability": asset.usability.lambda_usability,
        }
        if asset.usability.knots:
            usability["knots"] = [[t, v] for t, v in asset.usability.knots]
        entry["usability"] = usability
        assets.append(entry)
    data["assets"] = assets

    data["shocks"] = [
        {"asset": target, "time": shock.time, "magnitude": shock.magnitude}
        for target, shock in doc.shocks
    ]
    return data


def dump_scenario(doc: ScenarioDocument) -> str:
    """Render the canonical echo as YAML text"""
    return yaml.safe_dump(scenario_to_dict(doc), sort_keys=False, default_flow_style=False)
