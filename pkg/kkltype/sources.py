import abc
from typing import Any, Dict, Mapping, Optional, Tuple

from .cube import CubeFunction
from .errors import KKLTypeError
from .function_io import read_function_file
from .normed import NormedSpace
from .zoo import build_zoo_function, random_boolean, random_vector


class FunctionSource(abc.ABC):
    """Abstract base class for a source of functions to evaluate."""

    @property
    @abc.abstractmethod
    def label(self) -> str:
        """Short description used in reports and the actions log."""
        pass

    @abc.abstractmethod
    def load(self) -> Tuple[bool, Optional[CubeFunction], Optional[str]]:
        """
        Materialises the function.
        Returns:
            A tuple: (success: bool, function: Optional[CubeFunction], error_message: Optional[str])
        """
        pass

    def space(self) -> Optional[NormedSpace]:
        """Target space carried by the source itself, if any."""
        return None


class FileSource(FunctionSource):
    """Reads a function file."""

    def __init__(self, path: str):
        self.path = path
        self._space: Optional[NormedSpace] = None

    @property
    def label(self) -> str:
        return f"file:{self.path}"

    def space(self) -> Optional[NormedSpace]:
        return self._space

    def load(self) -> Tuple[bool, Optional[CubeFunction], Optional[str]]:
        try:
            loaded = read_function_file(self.path)
        except FileNotFoundError:
            return False, None, f"Function file not found: {self.path}"
        except OSError as e:
            return False, None, f"Could not read function file {self.path}: {e}"
        except KKLTypeError as e:
            return False, None, f"Malformed function file {self.path}: {e}"
        except Exception as e:
            return False, None, f"Unexpected error reading {self.path}: {e}"
        self._space = loaded.space
        return True, loaded.function, None


class ZooSource(FunctionSource):
    """A named zoo function, e.g. 'tribes:w=2,s=4'."""

    def __init__(self, spec: str, seed: Optional[int] = None):
        self.spec = spec
        self.seed = seed

    @property
    def label(self) -> str:
        return self.spec

    def load(self) -> Tuple[bool, Optional[CubeFunction], Optional[str]]:
        try:
            return True, build_zoo_function(self.spec, seed=self.seed), None
        except KKLTypeError as e:
            return False, None, f"Cannot build zoo function '{self.spec}': {e}"
        except Exception as e:
            return False, None, f"Unexpected error building '{self.spec}': {e}"


class RandomSource(FunctionSource):
    """A seeded random function: boolean when d is None, else vector valued."""

    def __init__(self, n: int, seed: Optional[int], d: Optional[int] = None, model: str = "cube"):
        self.n = n
        self.seed = seed
        self.d = d
        self.model = model

    @property
    def label(self) -> str:
        if self.d is None:
            return f"random:n={self.n},seed={self.seed}"
        return f"random_vector:n={self.n},d={self.d},seed={self.seed},model={self.model}"

    def load(self) -> Tuple[bool, Optional[CubeFunction], Optional[str]]:
        try:
            if self.d is None:
                return True, random_boolean(self.n, self.seed), None
            return True, random_vector(self.n, self.d, self.seed, self.model), None
        except KKLTypeError as e:
            return False, None, f"Cannot generate {self.label}: {e}"
        except Exception as e:
            return False, None, f"Unexpected error generating {self.label}: {e}"


def source_from_dict(data: Mapping[str, Any], default_seed: Optional[int] = None) -> FunctionSource:
    """
    Builds a source from its suite entry: {"file": path}, {"zoo": spec} or
    {"random": {"n": .., "seed": .., "d": .., "model": ..}}. The suite schema guarantees
    exactly one of the three keys.
    """
    if "file" in data:
        return FileSource(data["file"])
    if "zoo" in data:
        return ZooSource(data["zoo"], seed=data.get("seed", default_seed))
    spec: Dict[str, Any] = dict(data["random"])
    seed = spec.get("seed", default_seed)
    return RandomSource(int(spec["n"]), None if seed is None else int(seed), spec.get("d"), spec.get("model", "cube"))
