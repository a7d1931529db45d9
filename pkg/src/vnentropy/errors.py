"""Exception hierarchy shared by all vnentropy modules.

Exit-code contract for the CLI: usage errors exit 1, data/validation
errors exit 2, numerical failures exit 3.
"""


class VnentropyError(Exception):
    """Base class for all library errors."""


class GraphError(VnentropyError):
    """Invalid graph data (construction or file ingestion)."""


class SelfLoopError(GraphError):
    def __init__(self, u):
        super().__init__(f"self-loop on vertex {u}")
        self.u = u


class NegativeWeightError(GraphError):
    def __init__(self, u, v, w):
        super().__init__(f"negative weight {w!r} on edge ({u}, {v})")
        self.u, self.v, self.w = u, v, w


class DuplicateEdgeError(GraphError):
    def __init__(self, u, v):
        super().__init__(f"duplicate edge ({u}, {v})")
        self.u, self.v = u, v


class VertexOutOfRangeError(GraphError):
    def __init__(self, vertex, n):
        super().__init__(f"vertex id {vertex} outside [0, {n})")
        self.vertex, self.n = vertex, n


class ParseError(GraphError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmptyGraphError(VnentropyError):
    """Laplacian trace is zero, so the density matrix is undefined."""

    def __init__(self):
        super().__init__("graph has no edges with positive weight; density matrix undefined")


class TooLargeForDenseError(VnentropyError):
    def __init__(self, n, limit):
        super().__init__(f"n={n} exceeds dense eigensolver limit {limit}")
        self.n, self.limit = n, limit


class NoConvergenceError(VnentropyError):
    """Iterative solver did not reach tolerance within its iteration budget."""

    def __init__(self, max_iter):
        super().__init__(f"power iteration did not converge within {max_iter} iterations")
        self.max_iter = max_iter


class NumericalError(VnentropyError):
    """A numerical guarantee was violated beyond tolerance (likely a bug upstream)."""


class DomainError(VnentropyError):
    """Scalar inputs outside their mathematical domain."""


class SizeMismatchError(VnentropyError):
    def __init__(self, n_a, n_b):
        super().__init__(f"graphs have different vertex counts: {n_a} != {n_b}")
        self.n_a, self.n_b = n_a, n_b


class MissingEstimatorError(VnentropyError):
    def __init__(self, name):
        super().__init__(f"estimator {name!r} not present in sample")
        self.name = name


class EmptyTrainingSetError(VnentropyError):
    def __init__(self):
        super().__init__("training set is empty")


class InvalidSpecError(VnentropyError):
    """Random-graph model parameters violate the model's constraints."""
