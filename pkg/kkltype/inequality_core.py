import abc
import importlib
import inspect
import os
from typing import Any, Dict, List, Mapping, Optional, Union

from .cube import CubeFunction
from .errors import DomainError
from .log_config import get_logger
from .normed import NormedSpace
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec
from .reports import InequalityReport

logger = get_logger(__name__)


class Evaluator(abc.ABC):
    """
    Abstract base class for an inequality evaluator.
    Implementations define NAME and DESCRIPTION as class attributes, list the parameter
    names they accept in PARAMETERS, and set CONSTANT_SPECIFIED to False when the
    inequality has no explicit constant (its reports are empirical, never failures).
    """
    NAME: str = "Unnamed Evaluator"
    DESCRIPTION: str = "No description provided."
    CONSTANT_SPECIFIED: bool = True
    PARAMETERS: tuple = ()

    def __init__(self, name: str = None, description: str = None):
        self._name = name or self.NAME
        self._description = description or self.DESCRIPTION

        if not self._name or not isinstance(self._name, str):
            raise ValueError("Evaluator name must be a non-empty string.")
        if not isinstance(self._description, str):
            raise ValueError("Evaluator description must be a string.")

    @property
    def name(self) -> str:
        return self._name

    @property
    def description(self) -> str:
        return self._description

    def check_params(self, params: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
        params = dict(params or {})
        unknown = sorted(set(params) - set(self.PARAMETERS))
        if unknown:
            accepted = ", ".join(self.PARAMETERS) or "none"
            raise DomainError(f"Evaluator '{self.name}' does not accept {unknown}; accepted parameters: {accepted}.")
        return params

    @abc.abstractmethod
    def evaluate(self, f: CubeFunction, space: NormedSpace, params: Mapping[str, Any],
                 quad: QuadratureSpec = DEFAULT_QUADRATURE) -> InequalityReport:
        """
        Evaluates the inequality on one function.
        Args:
            f: The function on the cube.
            space: The normed target the values live in.
            params: Evaluator parameters (exponents, weights, type bounds), see PARAMETERS.
            quad: Tolerances for any adaptive quadrature involved.
        """
        pass

    def __repr__(self) -> str:
        return f"<Evaluator(name='{self.name}')>"


def input_summary(f: CubeFunction, space: NormedSpace, **params: Any) -> Dict[str, Any]:
    """The `inputs` block of a report: sizes, target space and the parameters used."""
    summary: Dict[str, Any] = {"n": f.n, "d": f.d, "space": space.describe()}
    summary.update({k: v for k, v in params.items() if v is not None})
    return summary


class EvaluatorRegistry:
    def __init__(self):
        self._evaluators: Dict[str, Evaluator] = {}

    def register_evaluator(self, evaluator: Evaluator) -> None:
        if not isinstance(evaluator, Evaluator):
            raise TypeError("Can only register instances of Evaluator.")
        if evaluator.name in self._evaluators:
            logger.warning(f"Re-registering evaluator with name '{evaluator.name}'.")
        self._evaluators[evaluator.name] = evaluator

    def get_evaluator(self, name: str) -> Union[Evaluator, None]:
        return self._evaluators.get(name)

    def get_all_evaluators(self) -> List[Evaluator]:
        """Returns all evaluators sorted by name."""
        return sorted(self._evaluators.values(), key=lambda e: e.name)

    def names(self) -> List[str]:
        return [e.name for e in self.get_all_evaluators()]

    def discover_evaluators(self, package_name: str = "kkltype.evaluators") -> None:
        """
        Discovers and registers Evaluator subclasses from the given package.
        Every sub-package is expected to hold an `evaluator_impl` module.
        """
        logger.debug(f"Discovering evaluators in package: {package_name}")
        try:
            package = importlib.import_module(package_name)
            base_path = package.__path__[0]
        except ImportError:
            logger.warning(f"Evaluator package '{package_name}' not found or has no __path__.")
            return
        except AttributeError:
            logger.warning(f"Evaluator package '{package_name}' is not a package with a directory structure.")
            return

        for item_name in sorted(os.listdir(base_path)):
            item_path = os.path.join(base_path, item_name)
            if os.path.isdir(item_path) and not item_name.startswith('_'):
                module_to_try = f"{package_name}.{item_name}.evaluator_impl"
                try:
                    module = importlib.import_module(module_to_try)
                    logger.debug(f"Inspecting module: {module_to_try}")
                    self._inspect_and_register_evaluators_from_module(module)
                except ImportError as e:
                    logger.warning(f"Could not import evaluator module {module_to_try}: {e}")
                except Exception as e:
                    logger.error(f"Error processing module {module_to_try}: {e}")

    def _inspect_and_register_evaluators_from_module(self, module) -> None:
        for _, attribute_value in inspect.getmembers(module, inspect.isclass):
            if not issubclass(attribute_value, Evaluator) or attribute_value is Evaluator:
                continue
            if inspect.isabstract(attribute_value) or attribute_value.__module__ != module.__name__:
                continue

            name = attribute_value.__dict__.get('NAME')
            description = attribute_value.__dict__.get('DESCRIPTION')
            if not name or not description:
                logger.warning(f"Evaluator class {attribute_value.__name__} in {module.__name__} is missing NAME or DESCRIPTION class attributes. Skipping.")
                continue

            try:
                self.register_evaluator(attribute_value())
                logger.debug(f"Registered evaluator: {name} (class: {attribute_value.__name__})")
            except Exception as e:
                logger.error(f"Error instantiating or registering evaluator {attribute_value.__name__} from {module.__name__}: {e}")


_DEFAULT_REGISTRY: Optional[EvaluatorRegistry] = None


def default_registry() -> EvaluatorRegistry:
    """The registry of built-in evaluators, discovered on first use."""
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        registry = EvaluatorRegistry()
        registry.discover_evaluators()
        _DEFAULT_REGISTRY = registry
    return _DEFAULT_REGISTRY
