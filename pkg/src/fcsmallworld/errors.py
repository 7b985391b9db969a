"""Exception hierarchy. ``category`` is what the CLI prints on failure."""


class FCSWError(Exception):
    category = "error"


class InvalidArgument(FCSWError, ValueError):
    category = "invalid-argument"


class DegenerateNormalization(FCSWError, ValueError):
    category = "degenerate-normalization"


class NumericalError(FCSWError, ArithmeticError):
    category = "numeric"


class DegenerateSeries(FCSWError, ValueError):
    category = "degenerate-series"

    def __init__(self, node: int, msg: str | None = None):
        self.node = node
        super().__init__(msg or f"node {node} has zero variance")


class ParseError(FCSWError, ValueError):
    category = "parse"

    def __init__(self, msg: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {msg}" if where else msg)


class ConfigError(FCSWError, ValueError):
    category = "config"

    def __init__(self, key: str, msg: str):
        self.key = key
        super().__init__(f"{key}: {msg}")


class MissingCells(FCSWError, KeyError):
    category = "missing-cells"

    def __init__(self, missing):
        self.missing = list(missing)
        coords = ", ".join(f"(p_sc={a!r}, p_fc={b!r})" for a, b in self.missing)
        super().__init__(f"{len(self.missing)} missing cell(s): {coords}")

    def __str__(self):
        return self.args[0]
