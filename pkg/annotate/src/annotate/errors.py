class AdapterError(Exception):
    """Pipeline failure; carries the stage name for the CLI exit message."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
