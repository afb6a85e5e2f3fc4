from symbolic.errors import AlgebraError


class MissingJetEntryError(AlgebraError):
    """Raised when a jet lookup asks for a derivative that was never populated."""


class PipelineInvariantError(AlgebraError):
    pass
