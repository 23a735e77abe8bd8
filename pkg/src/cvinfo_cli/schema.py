from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator


class CovarianceFile(BaseModel):
    """On-disk covariance matrix: ``{"modes": n, "matrix": [[...2n reals...], ...]}``."""

    model_config = ConfigDict(extra="forbid")
    modes: int = Field(ge=1)
    matrix: list[list[float]]

    @model_validator(mode="after")
    def _square_2n(self):
        dim = 2 * self.modes
        if len(self.matrix) != dim:
            raise ValueError(f"matrix has {len(self.matrix)} rows, expected {dim} for {self.modes} modes")
        for i, row in enumerate(self.matrix, start=1):
            if len(row) != dim:
                raise ValueError(f"matrix row {i} has {len(row)} entries, expected {dim}")
        return self
